import re
from collections import OrderedDict

_ACCEPTANCE = re.compile(r"test_acceptance\.py::test_criterion_(\d+)_(\w+?)(\[|$)")


def pytest_terminal_summary(terminalreporter):
    results = OrderedDict()
    for outcome in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(outcome, []):
            if getattr(rep, "when", "call") != "call" and outcome == "passed":
                continue
            m = _ACCEPTANCE.search(rep.nodeid)
            if not m:
                continue
            key = (int(m.group(1)), m.group(2).replace("_", " "))
            ok = results.get(key, True) and outcome == "passed"
            results[key] = ok
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for (num, label), ok in sorted(results.items()):
        terminalreporter.write_line(f"criterion {num:2d} {'PASS' if ok else 'FAIL'}  {label}")

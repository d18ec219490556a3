"""Sweeps and figure data, the same way the command line produces them.

Run: python3 demos/04_sweeps_and_figures.py [output_dir]
"""

import sys
from pathlib import Path

from spectrum_statics import ScenarioConfig, emit, figure_suite, run_sweep
from spectrum_statics.reporting import load_config, sweep_records

out_dir = Path(sys.argv[1] if len(sys.argv) > 1 else "demo_output")
here = Path(__file__).parent

# A config file is a flat key-value mapping; this one sweeps whitespace next to a monopolist.
config = ScenarioConfig.from_mapping(load_config(here / "configs" / "monopoly_whitespace.yaml"))
rows = run_sweep(config)
path = emit(sweep_records(config, rows), "csv", out_dir / "monopoly_whitespace.csv")
low = min(rows, key=lambda r: r.T)
print(f"{len(rows)} rows -> {path}; welfare bottoms out at W={low.value:.2f} (T={low.T:.5f})")

# The five comparison figures as labeled columns.
for fig in (1, 2, 3, 4, 5):
    bundle = figure_suite(fig)
    path = emit(bundle.records(), "csv", out_dir / f"figure{fig}.csv")
    print(f"figure {fig}: {', '.join(bundle.columns)} -> {path}")

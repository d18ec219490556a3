"""Scenario configs, parameter sweeps, figure data and CSV/JSON output."""

from __future__ import annotations

import csv
import dataclasses
import io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np
import yaml

from .competition import (
    DuopolyScenario,
    PerfectCompetitionScenario,
    SymmetricNScenario,
    solve_duopoly,
    solve_duopoly_whitespace,
    solve_pc_whitespace,
    solve_perfect_competition,
    solve_symmetric_n,
)
from .curves import curve_from_spec, make_linear_demand
from .errors import ConfigError, DomainError
from .investment import duopoly_revenue_in_capacity, monopoly_clearing_price, planner_prices
from .monopoly import (
    MonopolyScenario,
    MonopolyWhitespaceScenario,
    solve_monopoly,
    solve_monopoly_whitespace,
)
from .outcomes import EquilibriumOutcome

# market kind -> (required capacity parameters, channels in output order)
MARKETS: Dict[str, Tuple[Tuple[str, ...], Tuple[str, ...]]] = {
    "monopoly": (("C",), ("m",)),
    "monopoly_whitespace": (("C", "W"), ("m", "w")),
    "duopoly": (("C1", "C2"), ("1", "2")),
    "duopoly_whitespace": (("C1", "C2", "W"), ("1", "2", "w")),
    "perfect_competition": (("C",), ("c",)),
    "pc_whitespace": (("C", "W"), ("c", "w")),
    "symmetric_n": (("C", "n"), ("c",)),
}
PARAMETERS = ("p_max", "q_max", "C", "C1", "C2", "W", "n", "latency_k", "whitespace_k")
FORMATS = ("csv", "json")


@dataclass(frozen=True)
class ScenarioConfig:
    """One market scenario, optionally with a sweep over some of its parameters.

    ``sweep`` names one or more parameters. Each grid value ``v`` sets them to
    ``sweep_scale * v`` (mode ``set``) or adds that to their base value (mode
    ``add``), so ``C1 = C2 = 1/2 + w/2`` is ``sweep: C1,C2``, ``sweep_mode:
    add``, ``sweep_scale: 0.5``.
    """

    market: str
    p_max: float = 1.0
    q_max: float = 1.0
    demand: str = "linear-demand"
    latency: str = "linear-latency"
    latency_k: Optional[float] = None
    whitespace_latency: str = "linear-latency"
    whitespace_k: Optional[float] = None
    C: Optional[float] = None
    C1: Optional[float] = None
    C2: Optional[float] = None
    W: Optional[float] = None
    n: Optional[int] = None
    sweep: Tuple[str, ...] = ()
    sweep_mode: str = "set"
    sweep_scale: float = 1.0
    lo: Optional[float] = None
    hi: Optional[float] = None
    steps: int = 2
    derivatives: bool = False
    output: Optional[str] = None
    format: str = "csv"

    def __post_init__(self):
        if self.market not in MARKETS:
            raise ConfigError(f"unknown market {self.market!r}; choose from {sorted(MARKETS)}", "market")
        required, _ = MARKETS[self.market]
        for name in required:
            if getattr(self, name) is None and name not in self.sweep:
                raise ConfigError(f"required for market {self.market}", name)
        for name in ("p_max", "q_max"):
            if not getattr(self, name) > 0:
                raise ConfigError("must be positive", name)
        if self.demand != "linear-demand":
            raise ConfigError(f"unknown demand kind {self.demand!r}", "demand")
        if self.format not in FORMATS:
            raise ConfigError(f"must be one of {FORMATS}", "format")
        if self.sweep_mode not in ("set", "add"):
            raise ConfigError("must be 'set' or 'add'", "sweep_mode")
        for name in self.sweep:
            if name not in PARAMETERS:
                raise ConfigError(f"cannot sweep {name!r}", "sweep")
            if self.sweep_mode == "add" and getattr(self, name) is None:
                raise ConfigError("mode 'add' needs a base value", name)
        if self.sweep:
            if self.lo is None or self.hi is None:
                raise ConfigError("sweep needs lo and hi", "lo" if self.lo is None else "hi")
            if not self.lo <= self.hi:
                raise ConfigError(f"empty range [{self.lo}, {self.hi}]", "hi")
            if int(self.steps) != self.steps or self.steps < 2:
                raise ConfigError("must be an integer >= 2", "steps")

    @classmethod
    def from_mapping(cls, data: Mapping) -> "ScenarioConfig":
        names = {f.name for f in dataclasses.fields(cls)}
        unknown = sorted(set(data) - names)
        if unknown:
            raise ConfigError(f"unknown key(s) {unknown}", unknown[0])
        kwargs = {k: v for k, v in data.items() if v is not None}
        if "market" not in kwargs:
            raise ConfigError("missing", "market")
        sweep = kwargs.get("sweep", ())
        if isinstance(sweep, str):
            sweep = tuple(s.strip() for s in sweep.split(",") if s.strip())
        kwargs["sweep"] = tuple(sweep)
        for name in ("p_max", "q_max", "C", "C1", "C2", "W", "latency_k", "whitespace_k",
                     "sweep_scale", "lo", "hi"):
            if name in kwargs:
                try:
                    kwargs[name] = float(kwargs[name])
                except (TypeError, ValueError):
                    raise ConfigError(f"not a number: {kwargs[name]!r}", name) from None
        for name in ("n", "steps"):
            if name in kwargs:
                try:
                    as_float = float(kwargs[name])
                except (TypeError, ValueError):
                    raise ConfigError(f"not a number: {kwargs[name]!r}", name) from None
                if as_float != int(as_float):
                    raise ConfigError("must be an integer", name)
                kwargs[name] = int(as_float)
        return cls(**kwargs)

    def replace(self, **changes) -> "ScenarioConfig":
        return dataclasses.replace(self, **changes)


def load_config(path) -> dict:
    """Read a flat YAML (or JSON) mapping of config keys."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}", "config") from exc
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"{path} is not valid YAML: {exc}", "config") from exc
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ConfigError(f"{path} must hold a key-value mapping", "config")
    return data


def _latency(kind: str, k: Optional[float], field_name: str):
    spec = {"kind": kind}
    if kind == "power-latency":
        if k is None:
            raise ConfigError("power-latency needs an exponent", f"{field_name}_k")
        spec["k"] = k
    try:
        return curve_from_spec(spec)
    except DomainError as exc:
        raise ConfigError(str(exc), f"{field_name}_k") from exc


def solve_config(config: ScenarioConfig, **overrides) -> EquilibriumOutcome:
    """Solve the scenario described by ``config`` with some parameters replaced."""
    params = {name: getattr(config, name) for name in PARAMETERS}
    params.update(overrides)
    latency_k = params["latency_k"]
    whitespace_k = params["whitespace_k"]
    demand = make_linear_demand(params["p_max"], params["q_max"])
    lat = _latency(config.latency, latency_k, "latency")
    w_lat = _latency(config.whitespace_latency, whitespace_k, "whitespace")
    C, C1, C2, W, n = (params[k] for k in ("C", "C1", "C2", "W", "n"))
    market = config.market
    if market == "monopoly":
        return solve_monopoly(MonopolyScenario(demand, lat, C))
    if market == "monopoly_whitespace":
        return solve_monopoly_whitespace(MonopolyWhitespaceScenario(demand, lat, w_lat, C, W))
    if market == "duopoly":
        return solve_duopoly(DuopolyScenario(demand, lat, C1, C2))
    if market == "duopoly_whitespace":
        return solve_duopoly_whitespace(DuopolyScenario(demand, lat, C1, C2, W))
    if market == "perfect_competition":
        return solve_perfect_competition(PerfectCompetitionScenario(demand, lat, C))
    if market == "pc_whitespace":
        return solve_pc_whitespace(PerfectCompetitionScenario(demand, lat, C, w_lat, W))
    if n is None or int(n) != n:
        raise ConfigError("must be an integer", "n")
    return solve_symmetric_n(SymmetricNScenario(demand, lat, C, int(n)))[2]


@dataclass(frozen=True)
class SweepRow:
    value: float
    quantities: Dict[str, float]
    prices: Dict[str, float]
    delivered_price: float
    R_total: float
    S: float
    T: float
    derivatives: Dict[str, float] = field(default_factory=dict)

    def as_dict(self, channels: Sequence[str] = ()) -> dict:
        channels = channels or tuple(self.quantities)
        row = {"value": self.value}
        for ch in channels:
            row[f"q_{ch}"] = self.quantities.get(ch, 0.0)
        for ch in channels:
            row[f"p_{ch}"] = self.prices.get(ch, 0.0)
        row["lambda"] = self.delivered_price
        row["R_total"] = self.R_total
        row["S"] = self.S
        row["T"] = self.T
        row.update(self.derivatives)
        return row


def _overrides(config: ScenarioConfig, value: float) -> dict:
    out = {}
    for name in config.sweep:
        step = config.sweep_scale * value
        out[name] = getattr(config, name) + step if config.sweep_mode == "add" else step
    return out


def _welfare_slope(config: ScenarioConfig, value: float, h: float = 1e-6) -> float:
    def T(v):
        return solve_config(config, **_overrides(config, v)).total_welfare

    try:
        return (T(value + h) - T(value - h)) / (2 * h)
    except (DomainError, ValueError):
        # the parameter hits its boundary below value: one-sided, second order
        return (-3 * T(value) + 4 * T(value + h) - T(value + 2 * h)) / (2 * h)


def sweep_point(config: ScenarioConfig, value: float) -> SweepRow:
    out = solve_config(config, **_overrides(config, value))
    out.check(tol=1e-9, q_max=config.q_max)
    derivs = {"dT_dvalue": float(_welfare_slope(config, value))} if config.derivatives else {}
    return SweepRow(
        value=float(value),
        quantities={k: float(v) for k, v in out.quantities.items()},
        prices={k: float(v) for k, v in out.prices.items()},
        delivered_price=float(out.delivered_price),
        R_total=float(out.total_revenue),
        S=float(out.consumer_surplus),
        T=float(out.total_welfare),
        derivatives=derivs,
    )


def sweep_grid(config: ScenarioConfig) -> np.ndarray:
    if not config.sweep:
        raise ConfigError("no sweep variable given", "sweep")
    return np.linspace(config.lo, config.hi, int(config.steps))


def run_sweep(config: ScenarioConfig, workers: Optional[int] = None) -> List[SweepRow]:
    """Solve the scenario at every grid point; rows come back in grid order.

    Points are independent, so ``workers > 1`` spreads them over a thread
    pool without changing the result.
    """
    grid = sweep_grid(config)
    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(lambda v: sweep_point(config, v), grid))
    return [sweep_point(config, v) for v in grid]


def sweep_records(config: ScenarioConfig, rows: Iterable[SweepRow]) -> List[dict]:
    channels = MARKETS[config.market][1]
    return [row.as_dict(channels) for row in rows]


# --------------------------------------------------------------------------
# Figures
# --------------------------------------------------------------------------

FIGURES = (1, 2, 3, 4, 5)
ENTRANT_FLOOR = 1e-8


@dataclass(frozen=True)
class FigureBundle:
    figure: int
    columns: Dict[str, np.ndarray]

    def records(self) -> List[dict]:
        names = list(self.columns)
        n = len(self.columns[names[0]])
        return [{k: float(self.columns[k][i]) for k in names} for i in range(n)]


def default_grid(points: int = 201) -> np.ndarray:
    return np.linspace(0.0, 2.0, points)


def _welfare_series(grid, p_max):
    out = {k: [] for k in ("T_monopoly", "T_monopoly_whitespace", "T_duopoly",
                           "T_duopoly_whitespace", "T_pc", "T_pc_whitespace")}
    for w in grid:
        mono = MonopolyScenario.linear(p_max, 1.0 + w)
        out["T_monopoly"].append(solve_monopoly(mono).total_welfare)
        out["T_monopoly_whitespace"].append(
            solve_monopoly_whitespace(MonopolyWhitespaceScenario.linear(p_max, 1.0, w)).total_welfare)
        out["T_duopoly"].append(
            solve_duopoly(DuopolyScenario.linear(p_max, 0.5 + w / 2, 0.5 + w / 2)).total_welfare)
        out["T_duopoly_whitespace"].append(
            solve_duopoly_whitespace(DuopolyScenario.linear(p_max, 0.5, 0.5, w)).total_welfare)
        out["T_pc"].append(
            solve_perfect_competition(PerfectCompetitionScenario.linear(p_max, 1.0 + w)).total_welfare)
        out["T_pc_whitespace"].append(
            solve_pc_whitespace(PerfectCompetitionScenario.linear(p_max, 1.0, w)).total_welfare)
    return out


def _incumbent_vs_entrant(grid, p_max, metric):
    pick = {
        "T": lambda o: o.total_welfare,
        "R_total": lambda o: o.total_revenue,
        "S": lambda o: o.consumer_surplus,
    }[metric]
    mono, entrant = [], []
    for w in grid:
        mono.append(pick(solve_monopoly(MonopolyScenario.linear(p_max, 1.0 + w))))
        entrant.append(pick(solve_duopoly(DuopolyScenario.linear(p_max, 1.0, max(w, ENTRANT_FLOOR)))))
    return {f"{metric}_monopoly": mono, f"{metric}_duopoly_entrant": entrant}


def _clearing_prices(grid, p_max):
    mono, planner1, planner2 = [], [], []
    for w in grid:
        mono.append(monopoly_clearing_price(1.0, w, 0.0, p_max))
        a, b = planner_prices(0.5, 0.5, w / 2, w / 2, p_max)
        planner1.append(a)
        planner2.append(b)
    return {"pe_monopoly": mono, "pe_planner_1": planner1, "pe_planner_2": planner2}


def figure_suite(figure: int, p_max: float = 1.0, grid: Optional[Sequence[float]] = None) -> FigureBundle:
    """Series behind one of the five comparison figures, as labeled columns.

    1. welfare under six allocations of extra bandwidth ``w`` on top of one unit
    2. welfare: incumbent monopolist gets ``w`` vs. a new entrant with ``w``
    3. as 2, total provider revenue
    4. as 2, consumer surplus
    5. market-clearing unit price for the monopolist vs. planner prices for
       two symmetric duopolists splitting ``w``
    """
    if figure not in FIGURES:
        raise ConfigError(f"unknown figure {figure!r}; choose from {FIGURES}", "figure")
    grid = default_grid() if grid is None else np.asarray(grid, dtype=float)
    if figure == 1:
        series = _welfare_series(grid, p_max)
    elif figure == 5:
        series = _clearing_prices(grid, p_max)
    else:
        series = _incumbent_vs_entrant(grid, p_max, {2: "T", 3: "R_total", 4: "S"}[figure])
    columns = {"w": grid.copy()}
    columns.update({k: np.asarray(v, dtype=float) for k, v in series.items()})
    return FigureBundle(figure=figure, columns=columns)


# --------------------------------------------------------------------------
# Output
# --------------------------------------------------------------------------


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v)).lower()
    if isinstance(v, (int, float, np.floating, np.integer)):
        v = float(v)
        if not math.isfinite(v):
            raise DomainError(f"non-finite value {v} in output row")
        return format(v, ".12g")
    return str(v)


def render(rows: Sequence, fmt: str = "csv") -> str:
    """Serialize rows (dicts or objects with ``as_dict``) to CSV or JSON text."""
    records = [r if isinstance(r, dict) else r.as_dict() for r in rows]
    if fmt == "json":
        clean = [{k: (float(v) if isinstance(v, (np.floating, np.integer)) else v)
                  for k, v in r.items()} for r in records]
        return json.dumps(clean, indent=2) + "\n"
    if fmt != "csv":
        raise ConfigError(f"must be one of {FORMATS}", "format")
    buf = io.StringIO()
    header = list(records[0]) if records else []
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for r in records:
        writer.writerow([_fmt(r[k]) for k in header])
    return buf.getvalue()


def emit(rows: Sequence, fmt: str, path) -> Path:
    """Write rows to ``path`` as CSV (12 significant digits) or JSON (exact floats)."""
    path = Path(path)
    text = render(rows, fmt)
    try:
        if path.parent and not path.parent.exists():
            path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(exc.errno, f"cannot write {path}: {exc.strerror}") from exc
    return path

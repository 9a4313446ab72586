"""Monte Carlo comparison of single-path and two-path entanglement distribution.

For each sampled source/destination pair three end-to-end fidelities are
recorded: swapping along the shortest path (basic), purifying that path
against the second greedy edge-disjoint path (two-path), and the criteria
gated choice between the two.  Results are aggregated by shortest-path
length ``l0``.

Every pair ``i`` draws from its own generator seeded by ``(seed, i)``, so a
campaign gives identical records whether it runs on one worker or many.
"""
from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .network import MadPathSet, QuantumNetwork, find_mad_paths, generate_random_network
from .quantum import purify, swap_chain
from .stats import (
    CriteriaConfig,
    UniformEdgeDistribution,
    criterion_availability,
    criterion_fidelity,
    decision_tables,
)

CRITERIA = ("fidelity", "availability")
# pair-sampling attempts before a pair index gives up
MAX_PAIR_ATTEMPTS = 10_000


@dataclass(frozen=True)
class SimulationConfig:
    num_nodes: int = 10_000
    num_edges: int = 25_000
    seed: int = 0
    f_min: float = 0.9
    p_min: float = 0.7
    num_samples: int = 10_000
    l0_max: int = 10
    tau_m: float | None = None
    criteria: tuple[str, ...] = CRITERIA
    renormalize: bool = False
    # pairs without a second path count their single-path fidelity in the
    # two-path average; False drops them from that average instead
    mpep_fallback: bool = True

    def __post_init__(self):
        if self.num_samples < 1:
            raise ValueError("num_samples must be >= 1")
        if self.l0_max < 1:
            raise ValueError("l0_max must be >= 1")
        if self.num_nodes < 2:
            raise ValueError("need at least two nodes")
        unknown = set(self.criteria) - set(CRITERIA)
        if unknown:
            raise ValueError(f"unknown criteria {sorted(unknown)}")
        object.__setattr__(self, "criteria", tuple(self.criteria))
        # validates f_min, p_min, tau_m
        self.criteria_config()

    def criteria_config(self) -> CriteriaConfig:
        return CriteriaConfig(self.f_min, self.p_min, self.tau_m, self.renormalize)

    @property
    def fidelity_dist(self) -> UniformEdgeDistribution:
        return UniformEdgeDistribution.fidelity(self.f_min)

    @property
    def probability_dist(self) -> UniformEdgeDistribution:
        return UniformEdgeDistribution(self.p_min)

    def build_network(self) -> QuantumNetwork:
        return generate_random_network(
            self.num_nodes, self.num_edges, self.seed, self.fidelity_dist, self.probability_dist
        )

    def to_dict(self) -> dict:
        d = asdict(self)
        d["criteria"] = list(self.criteria)
        d["tau_m"] = self.criteria_config().tau_m
        return d


@dataclass(frozen=True)
class MpepOutcome:
    l0: int
    d: int
    fidelity: float
    success_probability: float
    first_fidelity: float
    second_fidelity: float


@dataclass(frozen=True)
class SdTrialRecord:
    source: int
    destination: int
    l0: int
    d: int | None
    basic_fidelity: float
    mpep_fidelity: float | None
    success_probability: float | None
    second_fidelity: float | None
    sat: bool
    chosen_fidelity: float
    attempts: int = 1


# --------------------------------------------------------------------------
# single trials


def _path_fidelity(length: int, dist: UniformEdgeDistribution, rng: np.random.Generator) -> float:
    return swap_chain(dist.sample(rng, length))


def run_basic_trial(
    net: QuantumNetwork,
    s: int,
    dst: int,
    rng: np.random.Generator,
    fidelity_dist: UniformEdgeDistribution,
    paths: MadPathSet | None = None,
) -> tuple[int, float] | None:
    """Fresh edge fidelities along the shortest path, swapped end to end.

    Returns ``(l0, fidelity)`` or ``None`` when ``s`` and ``dst`` are not
    connected.
    """
    if paths is None:
        paths = find_mad_paths(net, s, dst, 1)
    if not paths:
        return None
    l0 = paths[0].length
    return l0, _path_fidelity(l0, fidelity_dist, rng)


def run_mpep_trial(
    net: QuantumNetwork,
    s: int,
    dst: int,
    rng: np.random.Generator,
    fidelity_dist: UniformEdgeDistribution,
    paths: MadPathSet | None = None,
    first_fidelity: float | None = None,
) -> MpepOutcome | None:
    """Purify the states distributed over the first two greedy edge-disjoint paths.

    ``first_fidelity`` reuses an already sampled realisation of the shortest
    path; otherwise both paths draw fresh edges.  The purified fidelity is
    returned whatever its value (post-selected on success); ``None`` when no
    second path exists.
    """
    if paths is None:
        paths = find_mad_paths(net, s, dst, 2)
    if len(paths) < 2:
        return None
    l0, l1 = paths[0].length, paths[1].length
    f1 = _path_fidelity(l0, fidelity_dist, rng) if first_fidelity is None else first_fidelity
    f2 = _path_fidelity(l1, fidelity_dist, rng)
    res = purify(f1, f2)
    return MpepOutcome(l0, l1 - l0, res.output_fidelity, res.success_probability, f1, f2)


# (l0, d, config) -> (fidelity criterion, availability criterion)
_CELL_CACHE: dict[tuple[int, int, CriteriaConfig], tuple[bool, bool]] = {}


def _lookup_cell(l0: int, d: int, cfg: CriteriaConfig) -> tuple[bool, bool]:
    key = (l0, d, cfg)
    hit = _CELL_CACHE.get(key)
    if hit is None:
        hit = (
            criterion_fidelity(l0, d, cfg.f_min, cfg.renormalize).satisfied,
            criterion_availability(l0, d, cfg.p_min, cfg.tau_m).satisfied,
        )
        _CELL_CACHE[key] = hit
    return hit


def _combine(cell: tuple[bool, bool], criteria: Sequence[str]) -> bool:
    fid, av = cell
    return (fid or "fidelity" not in criteria) and (av or "availability" not in criteria)


def evaluate_sat(
    l0: int, d: int, criteria_cfg: CriteriaConfig, criteria: Sequence[str] = CRITERIA
) -> bool:
    """Both usefulness criteria for paths of length ``l0`` and ``l0 + d``.

    Only path lengths enter.  Results are memoised per ``(l0, d, config)``.
    """
    if d < 0:
        raise ValueError(f"d={d!r} must be >= 0")
    return bool(_combine(_lookup_cell(int(l0), int(d), criteria_cfg), criteria))


def prime_sat_cache(cfg: CriteriaConfig, l0_max: int, d_max: int, workers: int = 1) -> None:
    """Fill the criteria cache from decision tables over ``1..l0_max x 0..d_max``."""
    if all((l0, d, cfg) in _CELL_CACHE for l0 in range(1, l0_max + 1) for d in range(d_max + 1)):
        return
    fid, av = decision_tables(cfg, range(1, l0_max + 1), range(0, d_max + 1), workers=workers)
    for i, l0 in enumerate(fid.l0_values):
        for j, d in enumerate(fid.d_values):
            _CELL_CACHE[(int(l0), int(d), cfg)] = (bool(fid.entries[i, j]), bool(av.entries[i, j]))


# --------------------------------------------------------------------------
# campaign


def pair_rng(seed: int, index: int) -> np.random.Generator:
    """Generator for pair ``index``; independent of execution order."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(1, index)))


def _run_pair(net: QuantumNetwork, cfg: SimulationConfig, index: int) -> tuple[SdTrialRecord | None, int]:
    rng = pair_rng(cfg.seed, index)
    fdist = cfg.fidelity_dist
    ccfg = cfg.criteria_config()
    for attempt in range(1, MAX_PAIR_ATTEMPTS + 1):
        s, dst = (int(v) for v in rng.choice(net.num_nodes, size=2, replace=False))
        paths = find_mad_paths(net, s, dst, 2)
        if not paths:
            continue
        l0, basic = run_basic_trial(net, s, dst, rng, fdist, paths)
        mp = run_mpep_trial(net, s, dst, rng, fdist, paths, first_fidelity=basic)
        if mp is None:
            rec = SdTrialRecord(s, dst, l0, None, basic, None, None, None, False, basic, attempt)
        else:
            sat = _combine(_lookup_cell(l0, mp.d, ccfg), cfg.criteria)
            rec = SdTrialRecord(
                s, dst, l0, mp.d, basic, mp.fidelity, mp.success_probability,
                mp.second_fidelity, bool(sat), mp.fidelity if sat else basic, attempt,
            )
        return rec, attempt - 1
    return None, MAX_PAIR_ATTEMPTS


_worker_state: dict = {}


def _worker_init(net, cfg, cells):
    _worker_state["net"] = net
    _worker_state["cfg"] = cfg
    _CELL_CACHE.update(cells)


def _worker_chunk(indices):
    net, cfg = _worker_state["net"], _worker_state["cfg"]
    return [_run_pair(net, cfg, i) for i in indices]


def simulate_records(
    cfg: SimulationConfig, net: QuantumNetwork | None = None, workers: int = 1
) -> tuple[list[SdTrialRecord], int]:
    """All per-pair records plus the number of discarded (disconnected) draws."""
    if net is None:
        net = cfg.build_network()
    prime_sat_cache(cfg.criteria_config(), cfg.l0_max, d_max=cfg.l0_max)
    indices = range(cfg.num_samples)
    if workers > 1:
        chunks = [list(indices[i : i + 256]) for i in range(0, cfg.num_samples, 256)]
        cells = {k: v for k, v in _CELL_CACHE.items() if k[2] == cfg.criteria_config()}
        with ProcessPoolExecutor(workers, initializer=_worker_init, initargs=(net, cfg, cells)) as pool:
            results = [r for chunk in pool.map(_worker_chunk, chunks) for r in chunk]
    else:
        results = [_run_pair(net, cfg, i) for i in indices]
    records = [r for r, _ in results if r is not None]
    skipped = sum(k for _, k in results)
    return records, skipped


# --------------------------------------------------------------------------
# aggregation


def _mean_std(values: Sequence[float]) -> tuple[float, float]:
    if len(values) == 0:
        return math.nan, math.nan
    arr = np.asarray(values, dtype=float)
    std = float(arr.std(ddof=1)) if arr.size > 1 else math.nan
    return float(arr.mean()), std


@dataclass(frozen=True)
class ReportRow:
    """Aggregates for one shortest-path length.

    ``mpep_n`` is the number of pairs that actually had a second path to
    purify with; ``sat_n`` the number for which the criteria chose it.
    """

    l0: int
    n: int
    basic_mean: float
    basic_std: float
    mpep_mean: float
    mpep_std: float
    mpep_n: int
    chosen_mean: float
    chosen_std: float
    sat_n: int


CSV_COLUMNS = (
    "l0", "n", "basic_mean", "basic_std", "mpep_mean", "mpep_std", "mpep_n",
    "chosen_mean", "chosen_std", "skipped_pairs",
)


@dataclass
class SimulationReport:
    """Per-``l0`` aggregates of a campaign.

    ``skipped_pairs`` counts draws discarded because source and destination
    were disconnected; ``out_of_range`` counts retained pairs with
    ``l0 > l0_max`` (kept in ``records`` but not aggregated).
    """

    config: dict
    rows: list[ReportRow]
    skipped_pairs: int
    out_of_range: int
    records: list[SdTrialRecord] = field(default_factory=list, repr=False)

    def row(self, l0: int) -> ReportRow:
        for r in self.rows:
            if r.l0 == l0:
                return r
        raise KeyError(l0)

    def __contains__(self, l0: int) -> bool:
        return any(r.l0 == l0 for r in self.rows)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for r in self.rows:
            w.writerow([
                r.l0, r.n, _g(r.basic_mean), _g(r.basic_std), _g(r.mpep_mean), _g(r.mpep_std),
                r.mpep_n, _g(r.chosen_mean), _g(r.chosen_std), self.skipped_pairs,
            ])
        return buf.getvalue()

    def to_json(self) -> str:
        return json.dumps(
            {
                "config": self.config,
                "skipped_pairs": self.skipped_pairs,
                "out_of_range": self.out_of_range,
                "rows": [{k: _jsonable(v) for k, v in asdict(r).items()} for r in self.rows],
            },
            indent=2,
        )

    def summary_lines(self) -> list[str]:
        out = []
        for r in self.rows:
            out.append(
                f"l0={r.l0:2d} n={r.n:5d} basic={r.basic_mean:.4f} "
                f"mpep={r.mpep_mean:.4f} (n={r.mpep_n}) chosen={r.chosen_mean:.4f} sat={r.sat_n}"
            )
        return out


def _g(x: float) -> str:
    return "nan" if x is None or (isinstance(x, float) and math.isnan(x)) else f"{x:.6g}"


def _jsonable(v):
    if isinstance(v, float) and math.isnan(v):
        return None
    return v


def aggregate(records: Iterable[SdTrialRecord], cfg: SimulationConfig, skipped: int) -> SimulationReport:
    by_l0: dict[int, list[SdTrialRecord]] = {}
    out_of_range = 0
    records = list(records)
    for r in records:
        if r.l0 > cfg.l0_max:
            out_of_range += 1
            continue
        by_l0.setdefault(r.l0, []).append(r)
    rows = []
    for l0 in sorted(by_l0):
        rs = by_l0[l0]
        basic = [r.basic_fidelity for r in rs]
        purified = [r.mpep_fidelity for r in rs if r.mpep_fidelity is not None]
        if cfg.mpep_fallback:
            mpep = [r.basic_fidelity if r.mpep_fidelity is None else r.mpep_fidelity for r in rs]
        else:
            mpep = purified
        chosen = [r.chosen_fidelity for r in rs]
        bm, bs = _mean_std(basic)
        mm, ms = _mean_std(mpep)
        cm, cs = _mean_std(chosen)
        rows.append(ReportRow(l0, len(rs), bm, bs, mm, ms, len(purified), cm, cs, sum(r.sat for r in rs)))
    return SimulationReport(cfg.to_dict(), rows, skipped, out_of_range, records)


def run_campaign(
    cfg: SimulationConfig, net: QuantumNetwork | None = None, workers: int = 1
) -> SimulationReport:
    """Sample ``cfg.num_samples`` connected pairs and aggregate by ``l0``."""
    records, skipped = simulate_records(cfg, net, workers)
    return aggregate(records, cfg, skipped)

"""Acceptance criteria, one test per criterion.

Each test prints a single ``criterion N: PASS|FAIL ...`` line; the same lines
are repeated in the terminal summary.  The three network campaigns take about
a minute each.  Run standalone with ``python3 tests/test_acceptance.py``.
"""
import itertools
import math
import sys

import numpy as np
import pytest

from mpep import oracle
from mpep.network import find_mad_paths, generate_random_network, nine_node_example
from mpep.quantum import purified_fidelity, purify, swap_chain, swap_pair, useful_window
from mpep.simulator import SimulationConfig, run_campaign
from mpep.stats import (
    CriteriaConfig,
    PathFidelityPdf,
    PathProbabilityPdf,
    UniformEdgeDistribution,
    average_entangled_path_length,
    decision_tables,
    mean_path_fidelity,
    mean_path_probability,
    std_path_fidelity,
    std_path_probability,
)

try:
    from conftest import ACCEPTANCE_LINES
except ImportError:  # standalone run
    ACCEPTANCE_LINES = {}

# tolerances
PDF_NORM_TOL = 1e-6
MOMENT_TOL = 1e-6
KS_TOL = 0.005
KS_SAMPLES = 1_000_000
ORACLE_TOL = 1e-12
WINDOW_TOL = 1e-9
GATED_SLACK = 0.01
BOTTOM_SLACK = 0.01
QKD = 0.89
BOOST_TARGETS = {5: 0.91, 6: 0.89}
BOOST_BAND = 0.01

# campaign settings: 10^4 nodes, n_s = 10^4, uniform edge laws
TOP = SimulationConfig(10_000, 25_000, seed=1, f_min=0.9, p_min=0.7, num_samples=10_000)
BOTTOM = SimulationConfig(10_000, 25_000, seed=2, f_min=0.6, p_min=0.7, num_samples=10_000)
BOOST = SimulationConfig(10_000, 50_000, seed=3, f_min=0.95, p_min=0.7, num_samples=10_000)


def report(key, ok, detail):
    line = f"criterion {key}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES[str(key)] = line
    print(line)
    return ok


_campaigns = {}


def campaign(cfg):
    if cfg not in _campaigns:
        _campaigns[cfg] = run_campaign(cfg)
    return _campaigns[cfg]


# ---------------------------------------------------------------- checks


def check_1():
    a = average_entangled_path_length(UniformEdgeDistribution.from_mean(0.95))
    b = average_entangled_path_length(UniformEdgeDistribution.from_mean(0.8))
    return report(1, (a, b) == (15, 3), f"l_avg(0.95)={a} l_avg(0.8)={b} (want 15, 3)")


def advantage_window(rep):
    return [r.l0 for r in rep.rows if r.mpep_mean > r.basic_mean]


def check_2():
    rep = campaign(TOP)
    win = advantage_window(rep)
    contiguous = bool(win) and win == list(range(win[0], win[-1] + 1))
    ends_ok = contiguous and abs(win[0] - 5) <= 1 and abs(win[-1] - 8) <= 1
    low = [r for r in rep.rows if r.l0 <= 3]
    low_ok = all(r.basic_mean >= r.mpep_mean for r in low)
    ok = contiguous and ends_ok and low_ok
    margins = " ".join(f"{r.l0}:{r.mpep_mean - r.basic_mean:+.4f}" for r in rep.rows)
    return report(2, ok, f"window={win[0] if win else None}..{win[-1] if win else None} "
                         f"contiguous={contiguous} basic>=mpep(l0<=3)={low_ok} mpep-basic by l0 [{margins}]")


def check_3():
    rep = campaign(BOTTOM)
    rows = [r for r in rep.rows if 1 <= r.l0 <= 10]
    dom = all(r.basic_mean >= r.mpep_mean - BOTTOM_SLACK for r in rows)
    no_sat = all(r.sat_n == 0 for r in rows)
    same = all(r.chosen_mean == r.basic_mean for r in rows)
    worst = min(r.basic_mean - r.mpep_mean for r in rows)
    return report(3, dom and no_sat and same,
                  f"min(basic-mpep)={worst:+.4f} sat=0 everywhere: {no_sat} gated==basic: {same}")


def check_4():
    rep = campaign(BOOST)
    parts, ok = [], True
    for l0, target in BOOST_TARGETS.items():
        r = rep.row(l0)
        ok &= r.mpep_mean >= QKD and r.basic_mean < QKD
        band = abs(r.mpep_mean - target) <= BOOST_BAND
        parts.append(f"l0={l0}: mpep={r.mpep_mean:.4f} (target {target}, in band {band}) "
                     f"basic={r.basic_mean:.4f} n={r.n}")
    return report(4, ok, "; ".join(parts))


def check_5():
    worst, where = math.inf, None
    for name, cfg in (("top", TOP), ("bottom", BOTTOM), ("boost", BOOST)):
        for r in campaign(cfg).rows:
            margin = r.chosen_mean - (max(r.basic_mean, r.mpep_mean) - GATED_SLACK)
            if margin < worst:
                worst, where = margin, f"{name} l0={r.l0}"
    return report(5, worst >= 0, f"smallest slack {worst:+.4f} at {where}")


def check_6():
    rng = np.random.default_rng(6)
    pairs = rng.uniform(0.25, 1.0, size=(1000, 2))
    pairs = np.clip(pairs, 0.25 + 1e-9, 1.0)
    err_s = err_f = err_p = 0.0
    for f1, f2 in pairs:
        err_s = max(err_s, abs(swap_pair(f1, f2) - oracle.swap_fidelity(f1, f2)))
        p, fo, _ = oracle.purify_outcome(f1, f2)
        r = purify(f1, f2)
        err_f = max(err_f, abs(r.output_fidelity - fo))
        err_p = max(err_p, abs(r.success_probability - p))
    ok = max(err_s, err_f, err_p) <= ORACLE_TOL
    return report(6, ok, f"max |err| swap={err_s:.1e} purify={err_f:.1e} p_succ={err_p:.1e} over 1000 pairs")


def _ks(samples, pdf):
    lo, hi = pdf.support
    grid = np.union1d(np.linspace(lo, hi, 4000), pdf.breakpoints())
    s = np.sort(samples)
    ana = pdf.cdf(grid)
    r = np.searchsorted(s, grid, side="right") / s.size
    l = np.searchsorted(s, grid, side="left") / s.size
    return max(np.abs(ana - r).max(), np.abs(ana - l).max())


def check_7():
    mins = (0.5, 0.6, 0.7, 0.8, 0.9, 0.95)
    norm_err = mom_err = 0.0
    for l in range(1, 13):
        for a in mins:
            edge = UniformEdgeDistribution(a)
            for pdf, mean, std in (
                (PathFidelityPdf(l, a), mean_path_fidelity, std_path_fidelity),
                (PathProbabilityPdf(l, a), mean_path_probability, std_path_probability),
            ):
                norm_err = max(norm_err, abs(pdf.mass() - 1))
                m1, m2 = pdf.moment(1), pdf.moment(2)
                mom_err = max(mom_err, abs(m1 - mean(l, edge)),
                              abs(math.sqrt(max(m2 - m1 * m1, 0)) - std(l, edge)))
    rng = np.random.default_rng(7)
    ks = 0.0
    for l in range(1, 7):
        for a in (0.5, 0.9):
            f = rng.uniform(a, 1.0, size=(KS_SAMPLES, l))
            fid = 0.25 + 0.75 * np.prod((4 * f - 1) / 3, axis=1)
            # the vectorised chain is the scalar swap, spot-checked
            assert all(abs(swap_chain(f[i]) - fid[i]) < 1e-14 for i in range(50))
            ks = max(ks, _ks(fid, PathFidelityPdf(l, a)))
            p = np.prod(rng.uniform(a, 1.0, size=(KS_SAMPLES, l)), axis=1)
            ks = max(ks, _ks(p, PathProbabilityPdf(l, a)))
    ok = norm_err <= PDF_NORM_TOL and mom_err <= MOMENT_TOL and ks <= KS_TOL
    return report(7, ok, f"max |mass-1|={norm_err:.1e} max moment err={mom_err:.1e} max KS={ks:.4f}")


def check_8():
    grid = np.linspace(0.5, 1.0, 202)[1:-1]
    f2 = np.linspace(0.5, 1.0, 5001)
    bnd_err, mismatches = 0.0, 0
    for f1 in grid:
        w = useful_window(f1)
        for b in (w.lower, w.upper):
            bnd_err = max(bnd_err, abs(purify(f1, b).output_fidelity - max(f1, b)))
        direct = purified_fidelity(f1, f2) >= np.maximum(f1, f2)
        member = (f2 >= w.lower) & (f2 <= w.upper)
        off = (np.abs(f2 - w.lower) > WINDOW_TOL) & (np.abs(f2 - w.upper) > WINDOW_TOL)
        mismatches += int(np.sum(direct[off] != member[off]))
    ok = bnd_err <= WINDOW_TOL and mismatches == 0
    return report(8, ok, f"200 f1 points: max boundary err={bnd_err:.1e}, scan mismatches={mismatches}")


def check_9():
    net = nine_node_example()
    paths = find_mad_paths(net, 0, 4, 3)
    fig_ok = paths.lengths == [2, 3, 5] and paths.is_edge_disjoint()
    fd, pd = UniformEdgeDistribution(0.9), UniformEdgeDistribution(0.7)
    rng = np.random.default_rng(9)
    sets = bad = 0
    for seed in range(100):
        g = generate_random_network(80, 200, seed, fd, pd)
        for _ in range(10):
            s, d = (int(v) for v in rng.choice(80, 2, replace=False))
            ps = find_mad_paths(g, s, d, 5)
            sets += 1
            for a, b in itertools.combinations(ps, 2):
                if set(a.edges) & set(b.edges):
                    bad += 1
    return report(9, fig_ok and bad == 0,
                  f"nine-node lengths={paths.lengths}; {sets} sets on 100 graphs, overlapping pairs={bad}")


def check_tables():
    """Decision tables agree with where two paths won in the top-panel campaign."""
    fid, av = decision_tables(CriteriaConfig(TOP.f_min, TOP.p_min), range(1, 11), range(0, 6))
    joint = fid & av
    rep = campaign(TOP)
    win = set(advantage_window(rep))
    bad = []
    for l0 in range(1, 11):
        ds = [r.d for r in rep.records if r.l0 == l0 and r.d is not None and r.d <= 5]
        if len(ds) < 20:
            continue
        modal = max(set(ds), key=ds.count)
        says = joint.lookup(l0, modal)
        # table 1 at the typical d where two paths won; 0 where the single path won clearly
        if l0 in range(5, 9) and not says:
            bad.append(l0)
        if l0 <= 3 and l0 not in win and says:
            bad.append(l0)
    return report("tables", not bad, f"typical-d table entries disagreeing with the simulated window: {bad}")


# ---------------------------------------------------------------- pytest wrappers


@pytest.mark.parametrize("n", [1, 6, 7, 8, 9])
def test_fast_criteria(n):
    assert globals()[f"check_{n}"]()


@pytest.mark.slow
@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_campaign_criteria(n):
    assert globals()[f"check_{n}"]()


@pytest.mark.slow
def test_decision_table_consistency():
    assert check_tables()


if __name__ == "__main__":
    results = [globals()[f"check_{n}"]() for n in range(1, 10)] + [check_tables()]
    sys.exit(0 if all(results) else 1)

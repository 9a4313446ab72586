import itertools
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from mpep import oracle
from mpep.quantum import (
    concurrence,
    is_purification_useful,
    path_probability,
    purified_fidelity,
    purify,
    swap_chain,
    swap_pair,
    useful_window,
    werner_parameter,
    window_lower_limit,
    window_upper_limit,
)

fid = st.floats(0.25, 1.0, allow_nan=False)
edge_fid = st.floats(0.5, 1.0, allow_nan=False)


def test_werner_and_concurrence():
    assert werner_parameter(1.0) == 1.0
    assert werner_parameter(0.25) == 0.0
    assert concurrence(0.5) == 0.0
    assert concurrence(0.9) == pytest.approx(0.8)
    with pytest.raises(ValueError):
        concurrence(1.2)


def test_swap_examples():
    assert swap_pair(1.0, 1.0) == 1.0
    assert swap_pair(0.25, 0.83) == pytest.approx(0.25, abs=1e-15)
    assert swap_pair(0.95, 0.95) == pytest.approx(0.9033333333333333, abs=1e-14)
    assert oracle.swap_fidelity(0.95, 0.95) == pytest.approx(0.9033333333333333, abs=1e-12)


def test_swap_chain_examples():
    assert swap_chain([0.73]) == 0.73
    assert swap_chain([1, 1, 1, 1]) == 1.0
    outs = {swap_chain(p) for p in itertools.permutations([0.9, 0.8, 0.7])}
    assert len(outs) == 1
    with pytest.raises(ValueError):
        swap_chain([])


def test_path_probability():
    assert path_probability([1, 1, 1]) == 1.0
    assert path_probability([0.5]) == 0.5
    assert path_probability([0.7, 0.8]) == pytest.approx(0.56)
    with pytest.raises(ValueError):
        path_probability([])
    with pytest.raises(ValueError):
        path_probability([0.0])


def test_purify_examples():
    r = purify(1.0, 1.0)
    assert (r.output_fidelity, r.success_probability) == (1.0, 1.0)
    r = purify(0.5, 0.5)
    assert r.output_fidelity == pytest.approx(0.5, abs=1e-15)
    assert r.success_probability == pytest.approx(oracle.purify_outcome(0.5, 0.5)[0], abs=1e-12)
    assert r.success_probability == pytest.approx(5 / 9, abs=1e-15)
    r = purify(0.9, 0.9)
    assert r.output_fidelity == pytest.approx(0.9264, abs=5e-5)
    assert r.success_probability == pytest.approx(0.8756, abs=5e-5)
    with pytest.raises(ValueError):
        purify(0.25, 0.9)


def test_window_examples():
    assert window_upper_limit(1.0) == pytest.approx(0.0, abs=1e-15)
    assert window_upper_limit(0.5) == pytest.approx(0.0, abs=1e-15)
    assert window_lower_limit(1.0) == pytest.approx(0.0, abs=1e-15)
    assert window_lower_limit(0.5) == pytest.approx(0.0, abs=1e-15)
    assert window_upper_limit(0.8) == pytest.approx(0.07586, abs=1e-5)
    assert window_lower_limit(0.8) == pytest.approx(-0.0704, abs=1e-4)
    w = useful_window(0.8)
    assert w.lower == pytest.approx(0.7241, abs=1e-4)
    assert w.upper == pytest.approx(0.8704, abs=1e-4)
    assert 0.8 in w
    assert useful_window(0.999).width < useful_window(0.99).width < useful_window(0.8).width


def test_window_limits_match_brute_force_scan():
    # largest drop below f1 that still purifies up to f1, and largest rise above it
    f1 = 0.8
    f2 = np.linspace(0.5, 1.0, 2_000_001)
    fout = purified_fidelity(f1, f2)
    ok = fout >= np.maximum(f1, f2)
    assert f1 - f2[ok].min() == pytest.approx(window_upper_limit(f1), abs=1e-6)
    assert f1 - f2[ok].max() == pytest.approx(window_lower_limit(f1), abs=1e-6)


def test_usefulness_examples():
    assert is_purification_useful(0.9, 0.9)
    assert not is_purification_useful(0.99, 0.55)
    assert purify(0.99, 0.55).output_fidelity < 0.99
    lo = 0.8 - window_upper_limit(0.8)
    assert is_purification_useful(0.8, lo + 1e-9)
    assert not is_purification_useful(0.8, lo - 1e-6)


@given(fid, fid)
def test_swap_symmetric_and_degrading(f1, f2):
    assert swap_pair(f1, f2) == pytest.approx(swap_pair(f2, f1), abs=1e-15)
    assert swap_pair(f1, f2) <= min(f1, f2) + 1e-15


@given(st.lists(edge_fid, min_size=1, max_size=8), st.randoms())
def test_swap_chain_order_invariant(fs, rnd):
    shuffled = list(fs)
    rnd.shuffle(shuffled)
    assert swap_chain(shuffled) == pytest.approx(swap_chain(fs), abs=1e-15)


@given(st.floats(0.2501, 1.0), st.floats(0.2501, 1.0))
def test_purify_symmetric_and_valid(f1, f2):
    a, b = purify(f1, f2), purify(f2, f1)
    assert a.output_fidelity == pytest.approx(b.output_fidelity, abs=1e-15)
    assert 0.0 < a.success_probability <= 1.0
    assert 0.0 <= a.output_fidelity <= 1.0


@given(edge_fid)
def test_equal_inputs_never_hurt(f):
    assert purify(f, f).output_fidelity >= f - 1e-15


@given(st.floats(0.5, 1.0))
def test_window_contains_f1_and_has_right_signs(f1):
    assert window_upper_limit(f1) >= -1e-15
    assert window_lower_limit(f1) <= 1e-15
    assert f1 in useful_window(f1)


def test_oracle_equivalence_1000_pairs():
    rng = np.random.default_rng(2024)
    pairs = rng.uniform(0.25, 1.0, size=(1000, 2))
    pairs[pairs <= 0.25] = 0.2501
    swap_err = purify_err = prob_err = 0.0
    for f1, f2 in pairs:
        swap_err = max(swap_err, abs(swap_pair(f1, f2) - oracle.swap_fidelity(f1, f2)))
        p, fo, rho = oracle.purify_outcome(f1, f2)
        r = purify(f1, f2)
        purify_err = max(purify_err, abs(r.output_fidelity - fo))
        prob_err = max(prob_err, abs(r.success_probability - p))
    assert swap_err <= 1e-12
    assert purify_err <= 1e-12
    assert prob_err <= 1e-12


def test_oracle_swap_outcomes_equiprobable():
    for k in range(4):
        p, f = oracle.swap_outcome(0.83, 0.71, k)
        assert p == pytest.approx(0.25, abs=1e-14)
        assert f == pytest.approx(swap_pair(0.83, 0.71), abs=1e-13)


def test_oracle_purified_state_is_valid():
    # the kept state is Bell diagonal, so its phi+ overlap carries the fidelity
    p, f, rho = oracle.purify_outcome(0.9, 0.8)
    oracle.check_density_matrix(rho)
    assert f == pytest.approx(purify(0.9, 0.8).output_fidelity, abs=1e-12)


def test_window_consistency_grid():
    grid = np.linspace(0.5, 1.0, 202)[1:-1]
    f2 = np.linspace(0.5, 1.0, 4001)
    for f1 in grid:
        w = useful_window(f1)
        # boundaries reproduce f_out = max(inputs)
        for b in (w.lower, w.upper):
            assert purify(f1, b).output_fidelity == pytest.approx(max(f1, b), abs=1e-9)
        direct = purified_fidelity(f1, f2) >= np.maximum(f1, f2)
        member = (f2 >= w.lower) & (f2 <= w.upper)
        off = (np.abs(f2 - w.lower) > 1e-9) & (np.abs(f2 - w.upper) > 1e-9)
        assert np.array_equal(direct[off], member[off])
        assert math.isfinite(w.width)

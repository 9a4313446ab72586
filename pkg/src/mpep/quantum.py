"""Scalar algebra of isotropic two-qubit states.

Every state in the network model is fully described by its fidelity ``f``
with respect to ``|phi+>``.  Swapping and Deutsch purification map
fidelities to fidelities, so everything here is plain float arithmetic.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

# absorbs drift from long swap chains
RANGE_TOL = 1e-12


def _check_range(name: str, value: float, lo: float, hi: float, *, open_lo: bool = False) -> float:
    value = float(value)
    if math.isnan(value):
        raise ValueError(f"{name} is NaN")
    if open_lo:
        ok = lo < value <= hi + RANGE_TOL
    else:
        ok = lo - RANGE_TOL <= value <= hi + RANGE_TOL
    if not ok:
        bracket = "(" if open_lo else "["
        raise ValueError(f"{name}={value!r} outside {bracket}{lo}, {hi}]")
    return value


@dataclass(frozen=True)
class PurificationResult:
    output_fidelity: float
    success_probability: float


@dataclass(frozen=True)
class PurificationWindow:
    """Range of partner fidelities that make purification of ``f1`` useful."""

    lower: float
    upper: float

    def __contains__(self, f2: float) -> bool:
        return self.lower <= f2 <= self.upper

    @property
    def width(self) -> float:
        return self.upper - self.lower


def werner_parameter(f: float) -> float:
    """Weight ``(4f - 1)/3`` of ``|phi+><phi+|`` in the isotropic state."""
    return (4.0 * f - 1.0) / 3.0


def concurrence(f: float) -> float:
    f = _check_range("f", f, 0.0, 1.0)
    return max(2.0 * f - 1.0, 0.0)


def swap_pair(f1: float, f2: float) -> float:
    f1 = _check_range("f1", f1, 0.25, 1.0)
    f2 = _check_range("f2", f2, 0.25, 1.0)
    return 0.25 + 0.75 * werner_parameter(f1) * werner_parameter(f2)


def swap_chain(fs: Iterable[float]) -> float:
    """End-to-end fidelity after swapping at every intermediate node.

    The product of Werner parameters commutes, so the result does not depend
    on the order of the edges.  A one-element chain is returned unchanged.
    """
    fs = [float(f) for f in fs]
    if not fs:
        raise ValueError("swap_chain needs at least one fidelity")
    if len(fs) == 1:
        return _check_range("f", fs[0], 0.25, 1.0)
    prod = 1.0
    for i, f in enumerate(fs):
        prod *= werner_parameter(_check_range(f"fs[{i}]", f, 0.25, 1.0))
    return 0.25 + 0.75 * prod


def path_probability(ps: Sequence[float]) -> float:
    ps = [float(p) for p in ps]
    if not ps:
        raise ValueError("path_probability needs at least one probability")
    prod = 1.0
    for i, p in enumerate(ps):
        prod *= _check_range(f"ps[{i}]", p, 0.0, 1.0, open_lo=True)
    return prod


def _purify_terms(f1: float, f2: float) -> tuple[float, float]:
    g1, g2 = 1.0 - f1, 1.0 - f2
    num = f1 * f2 + g1 * g2 / 9.0
    den = f1 * f2 + (f1 * g2 + g1 * f2) / 3.0 + 5.0 * g1 * g2 / 9.0
    return num, den


def purify(f1: float, f2: float) -> PurificationResult:
    """One round of Deutsch purification on two isotropic pairs.

    Returns the fidelity of the kept pair on coincident target outcomes and
    the probability of that coincidence.
    """
    f1 = _check_range("f1", f1, 0.25, 1.0, open_lo=True)
    f2 = _check_range("f2", f2, 0.25, 1.0, open_lo=True)
    num, den = _purify_terms(f1, f2)
    return PurificationResult(num / den, den)


def purified_fidelity(f1, f2):
    """Vectorised output fidelity; no range checks, accepts numpy arrays."""
    num, den = _purify_terms(f1, f2)
    return num / den


def window_upper_limit(f1: float) -> float:
    """Largest ``f1 - f2`` (partner below ``f1``) that still gives ``f_out >= f1``."""
    f1 = _check_range("f1", f1, 0.5, 1.0)
    den = 8.0 * f1 * f1 - 12.0 * f1 + 1.0
    assert den < 0.0, den
    num = 8.0 * f1**3 - 14.0 * f1 * f1 + 7.0 * f1 - 1.0
    return num / den


def window_lower_limit(f1: float) -> float:
    """Most negative ``f1 - f2`` (partner above ``f1``) that still gives ``f_out >= f2``."""
    f1 = _check_range("f1", f1, 0.5, 1.0)
    disc = 28.0 * f1 * f1 - 26.0 * f1 + 7.0
    return (8.0 * f1 * f1 - 8.0 * f1 + 3.0 - math.sqrt(disc)) / (8.0 * f1 - 2.0)


def useful_window(f1: float) -> PurificationWindow:
    f1 = _check_range("f1", f1, 0.5, 1.0)
    return PurificationWindow(f1 - window_upper_limit(f1), f1 - window_lower_limit(f1))


def is_purification_useful(f1: float, f2: float) -> bool:
    """True when purifying ``f1`` with ``f2`` does not lower the better pair.

    Ties count as useful.
    """
    f1 = _check_range("f1", f1, 0.5, 1.0, open_lo=True)
    f2 = _check_range("f2", f2, 0.5, 1.0, open_lo=True)
    return f2 in useful_window(f1)

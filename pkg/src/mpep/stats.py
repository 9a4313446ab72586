"""Path-parameter statistics for networks with uniform edge distributions.

Both path parameters reduce to the same object: the product of ``l`` iid
``U(a, 1)`` variables.  For path probability ``a = p_min`` and the product
is ``p^(l)`` itself; for path fidelity the factors are the Werner
parameters ``(4f - 1)/3`` and ``a = (4 f_min - 1)/3``.  The density of such
a product is piecewise analytic with kinks at ``a^m``, ``m = 1..l-1``.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np
from scipy.special import gammaln

from .quantum import purified_fidelity, werner_parameter

ENTANGLEMENT_THRESHOLD = 0.5
QUAD_ATOL = 1e-8


class QuadratureError(RuntimeError):
    """Adaptive quadrature did not reach its tolerance."""


# --------------------------------------------------------------------------
# edge distributions


@dataclass(frozen=True)
class UniformEdgeDistribution:
    """``U(min, 1)`` edge parameter; ``min = 1`` is the deterministic edge."""

    min: float
    max: float = 1.0

    def __post_init__(self):
        if self.max != 1.0:
            raise ValueError("edge distributions are fixed to max=1")
        if not 0.0 < self.min <= 1.0:
            raise ValueError(f"min={self.min!r} must lie in (0, 1]")

    @classmethod
    def fidelity(cls, f_min: float) -> "UniformEdgeDistribution":
        if not 0.5 <= f_min <= 1.0:
            raise ValueError(f"edge fidelity min={f_min!r} must lie in [0.5, 1]")
        return cls(f_min)

    @classmethod
    def from_mean(cls, mean: float) -> "UniformEdgeDistribution":
        return cls(2.0 * mean - 1.0)

    @property
    def mean(self) -> float:
        return 0.5 * (self.min + 1.0)

    @property
    def std(self) -> float:
        return (1.0 - self.min) / math.sqrt(12.0)

    def sample(self, rng: np.random.Generator, size=None):
        return rng.uniform(self.min, 1.0, size)


# --------------------------------------------------------------------------
# product of uniforms


def _neumaier(terms: Iterable[np.ndarray]) -> np.ndarray:
    total = None
    comp = None
    for t in terms:
        if total is None:
            total = np.array(t, dtype=float)
            comp = np.zeros_like(total)
            continue
        s = total + t
        big = np.abs(total) >= np.abs(t)
        comp += np.where(big, (total - s) + t, (t - s) + total)
        total = s
    return total + comp


def uniform_product_pdf(x, l: int, a: float) -> np.ndarray:
    """Density of ``X_1 * ... * X_l`` with ``X_i ~ U(a, 1)`` iid.

    With ``s = -log x`` and ``c = -log a`` this is
    ``(1-a)^-l / (l-1)! * sum_{n < s/c} (-1)^n C(l, n) (s - n c)^(l-1)``,
    an Irwin-Hall shape in ``s``.  The alternating sum is evaluated on the
    shorter side of its mirror symmetry ``s -> l c - s`` and in log space,
    which keeps cancellation bounded.  Zero outside ``[a^l, 1]``.
    """
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    lo = a**l
    inside = (x >= lo) & (x <= 1.0)
    if not inside.any():
        return out
    if l == 1:
        out[inside] = 1.0 / (1.0 - a)
        return out

    c = -math.log(a)
    s = -np.log(x[inside])
    s = np.clip(np.minimum(s, l * c - s), 0.0, None)
    log_pref = -l * math.log1p(-a) - gammaln(l)

    def terms():
        for n in range(l):
            gap = s - n * c
            ok = gap > 0.0
            log_t = np.full_like(s, -np.inf)
            log_t[ok] = log_pref + _log_binom(l, n) + (l - 1) * np.log(gap[ok])
            yield (-1.0) ** n * np.exp(log_t)

    out[inside] = np.clip(_neumaier(terms()), 0.0, None)
    return out


@lru_cache(maxsize=None)
def _log_binom(l: int, n: int) -> float:
    return math.lgamma(l + 1) - math.lgamma(n + 1) - math.lgamma(l - n + 1)


def _gauss_panels(edges: Sequence[float], order: int) -> tuple[np.ndarray, np.ndarray]:
    """Composite Gauss-Legendre nodes and weights over consecutive panels."""
    t, w = np.polynomial.legendre.leggauss(order)
    edges = np.asarray(edges, dtype=float)
    left, right = edges[:-1], edges[1:]
    half = 0.5 * (right - left)
    mid = 0.5 * (right + left)
    nodes = (mid[:, None] + half[:, None] * t[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


class _ProductPdf:
    """Shared machinery; subclasses map the physical variable onto the product."""

    def __init__(self, l: int, a: float):
        if int(l) != l or l < 1:
            raise ValueError(f"path length l={l!r} must be a positive integer")
        self.l = int(l)
        self.a = float(a)

    def __eq__(self, other):
        return type(self) is type(other) and (self.l, self.a) == (other.l, other.a)

    def __hash__(self):
        return hash((type(self).__name__, self.l, self.a))

    # subclasses map between the physical variable and the product x
    def _to_x(self, v):
        raise NotImplementedError

    def _from_x(self, x):
        raise NotImplementedError

    def _jacobian(self) -> float:
        raise NotImplementedError

    @property
    def support(self) -> tuple[float, float]:
        return float(self._from_x(self.a**self.l)), 1.0

    def breakpoints(self) -> np.ndarray:
        """Interval boundaries, ascending, including both support ends."""
        xs = self.a ** np.arange(self.l, -1, -1, dtype=float)
        return np.asarray(self._from_x(xs), dtype=float)

    def interval_index(self, v: float) -> int:
        """``m`` such that ``v`` lies in the m-th interval counted from 1 down."""
        lo, hi = self.support
        if not lo <= v <= hi:
            raise ValueError(f"{v!r} outside support [{lo}, {hi}]")
        x = float(self._to_x(v))
        if x >= 1.0:
            return 1
        m = math.ceil(math.log(x) / math.log(self.a) - 1e-12)
        return min(max(m, 1), self.l)

    def pdf(self, v):
        v = np.asarray(v, dtype=float)
        return uniform_product_pdf(self._to_x(v), self.l, self.a) * self._jacobian()

    __call__ = pdf

    def _panels(self, lo: float, hi: float) -> np.ndarray:
        bp = self.breakpoints()
        inner = bp[(bp > lo) & (bp < hi)]
        return np.concatenate([[lo], inner, [hi]])

    def quadrature_rule(self, lo=None, hi=None, order: int = 32):
        """Nodes/weights for integrating against this density on ``[lo, hi]``.

        Panels are aligned with the interval boundaries so each one sees a
        smooth integrand.  Returned weights already include the density.
        """
        s_lo, s_hi = self.support
        lo = s_lo if lo is None else max(lo, s_lo)
        hi = s_hi if hi is None else min(hi, s_hi)
        if hi <= lo:
            return np.empty(0), np.empty(0)
        nodes, w = _gauss_panels(self._panels(lo, hi), order)
        return nodes, w * self.pdf(nodes)

    def expect(self, func=None, lo=None, hi=None, order: int = 32) -> float:
        nodes, w = self.quadrature_rule(lo, hi, order)
        vals = np.ones_like(nodes) if func is None else func(nodes)
        return float(np.dot(w, vals))

    def mass(self, lo=None, hi=None) -> float:
        return self.expect(None, lo, hi)

    def moment(self, k: int) -> float:
        return self.expect(lambda v: v**k)

    def cdf(self, v, order: int = 40):
        """Cumulative distribution by panel-wise Gauss-Legendre integration."""
        v = np.atleast_1d(np.asarray(v, dtype=float))
        lo, hi = self.support
        bp = self.breakpoints()
        t, w = np.polynomial.legendre.leggauss(order)
        # mass accumulated up to each breakpoint
        cum = np.concatenate([[0.0], np.cumsum([self.mass(bp[i], bp[i + 1]) for i in range(self.l)])])
        vc = np.clip(v, lo, hi)
        k = np.clip(np.searchsorted(bp, vc, side="right") - 1, 0, self.l - 1)
        left = bp[k]
        half = 0.5 * (vc - left)
        nodes = left[:, None] + half[:, None] * (t[None, :] + 1.0)
        partial = (half[:, None] * w[None, :] * self.pdf(nodes)).sum(axis=1)
        out = cum[k] + partial
        out = np.where(v < lo, 0.0, np.where(v >= hi, 1.0, out))
        return np.clip(out, 0.0, 1.0)


class PathFidelityPdf(_ProductPdf):
    """Density of the end-to-end fidelity of an ``l``-edge path, edges ``U(f_min, 1)``."""

    def __init__(self, l: int, f_min: float):
        if not 0.5 <= f_min < 1.0:
            raise ValueError(f"f_min={f_min!r} must lie in [0.5, 1)")
        super().__init__(l, werner_parameter(f_min))
        self.f_min = float(f_min)

    def __repr__(self):
        return f"PathFidelityPdf(l={self.l}, f_min={self.f_min})"

    def _to_x(self, v):
        return (4.0 * np.asarray(v, dtype=float) - 1.0) / 3.0

    def _from_x(self, x):
        return 0.25 + 0.75 * np.asarray(x, dtype=float)

    def _jacobian(self) -> float:
        return 4.0 / 3.0


class PathProbabilityPdf(_ProductPdf):
    """Density of the success probability of an ``l``-edge path, edges ``U(p_min, 1)``."""

    def __init__(self, l: int, p_min: float):
        if not 0.0 < p_min < 1.0:
            raise ValueError(f"p_min={p_min!r} must lie in (0, 1)")
        super().__init__(l, p_min)
        self.p_min = float(p_min)

    def __repr__(self):
        return f"PathProbabilityPdf(l={self.l}, p_min={self.p_min})"

    def _to_x(self, v):
        return np.asarray(v, dtype=float)

    def _from_x(self, x):
        return np.asarray(x, dtype=float)

    def _jacobian(self) -> float:
        return 1.0


def pdf_path_fidelity(pdf: PathFidelityPdf, f):
    return pdf.pdf(f)


def pdf_path_probability(pdf: PathProbabilityPdf, p):
    return pdf.pdf(p)


# --------------------------------------------------------------------------
# closed-form moments


def _check_length(l) -> int:
    if int(l) != l or l < 1:
        raise ValueError(f"path length l={l!r} must be a positive integer")
    return int(l)


def mean_path_fidelity(l: int, edge: UniformEdgeDistribution) -> float:
    """Mean fidelity of an ``l``-edge path.

    Only the edge mean enters, so this holds for any iid edge distribution.
    """
    l = _check_length(l)
    return 0.25 + 0.75 * werner_parameter(edge.mean) ** l


def std_path_fidelity(l: int, edge: UniformEdgeDistribution, approx: bool = False) -> float:
    """Standard deviation of path fidelity.

    ``approx=True`` gives the narrow-distribution scaling
    ``sqrt(l) * w^(l-1) * sigma_f``; keep it for validation only.
    """
    l = _check_length(l)
    w = werner_parameter(edge.mean)
    if approx:
        return math.sqrt(l) * w ** (l - 1) * edge.std
    var = (w * w + 16.0 / 9.0 * edge.std**2) ** l - w ** (2 * l)
    return 0.75 * math.sqrt(max(var, 0.0))


def mean_path_probability(l: int, edge: UniformEdgeDistribution) -> float:
    l = _check_length(l)
    return edge.mean**l


def std_path_probability(l: int, edge: UniformEdgeDistribution, approx: bool = False) -> float:
    l = _check_length(l)
    if approx:
        return math.sqrt(l) * edge.mean ** (l - 1) * edge.std
    var = (edge.mean**2 + edge.std**2) ** l - edge.mean ** (2 * l)
    return math.sqrt(max(var, 0.0))


def average_entangled_path_length(edge: UniformEdgeDistribution) -> float:
    """Largest path length whose mean fidelity is still at least 0.5.

    Returns ``math.inf`` for perfect edges.
    """
    fbar = edge.mean
    if fbar <= ENTANGLEMENT_THRESHOLD:
        raise ValueError(f"mean edge fidelity {fbar!r} <= 0.5: no entangled paths on average")
    w = werner_parameter(fbar)
    if w >= 1.0:
        return math.inf
    return math.floor(-math.log(3.0) / math.log(w))


# --------------------------------------------------------------------------
# usefulness criteria


@dataclass(frozen=True)
class CriterionResult:
    lhs: float
    rhs: float
    satisfied: bool


@dataclass(frozen=True)
class CriteriaConfig:
    f_min: float
    p_min: float
    tau_m: float | None = None
    # condition path fidelities on f > 0.5 before averaging; off reproduces
    # the criterion exactly as usually written
    renormalize: bool = False

    def __post_init__(self):
        if not 0.5 <= self.f_min < 1.0:
            raise ValueError(f"f_min={self.f_min!r} must lie in [0.5, 1)")
        if not 0.0 < self.p_min < 1.0:
            raise ValueError(f"p_min={self.p_min!r} must lie in (0, 1)")
        if self.tau_m is None:
            object.__setattr__(self, "tau_m", 1.0 / self.p_min)
        if not self.tau_m > 0:
            raise ValueError(f"tau_m={self.tau_m!r} must be positive")


def expected_post_purification_fidelity(
    l1: int,
    l2: int,
    f_min: float,
    atol: float = QUAD_ATOL,
    renormalize: bool = False,
    max_order: int = 256,
) -> float:
    """Average purified fidelity of two independent paths over ``[0.5, 1]^2``.

    Mass below the entanglement threshold is dropped, not redistributed,
    unless ``renormalize`` is set.  Tensor Gauss-Legendre on panels aligned
    with each density's interval boundaries; the order doubles until two
    successive estimates agree to ``atol``.
    """
    q1 = PathFidelityPdf(l1, f_min)
    q2 = PathFidelityPdf(l2, f_min)
    prev = None
    order = 16
    while order <= max_order:
        x1, w1 = q1.quadrature_rule(ENTANGLEMENT_THRESHOLD, 1.0, order)
        x2, w2 = q2.quadrature_rule(ENTANGLEMENT_THRESHOLD, 1.0, order)
        if x1.size == 0 or x2.size == 0:
            return 0.0
        fout = purified_fidelity(x1[:, None], x2[None, :])
        val = float(w1 @ fout @ w2)
        if renormalize:
            val /= w1.sum() * w2.sum()
        if prev is not None and abs(val - prev) <= atol:
            return val
        prev = val
        order *= 2
    raise QuadratureError(
        f"2-D quadrature for l=({l1}, {l2}), f_min={f_min} not converged to {atol} "
        f"at order {max_order}"
    )


def criterion_fidelity(l0: int, d: int, f_min: float, renormalize: bool = False) -> CriterionResult:
    """Does purifying paths of length ``l0`` and ``l0 + d`` beat the ``l0`` path on average?"""
    l0 = _check_length(l0)
    if d < 0:
        raise ValueError(f"d={d!r} must be >= 0")
    lhs = expected_post_purification_fidelity(l0, l0 + d, f_min, renormalize=renormalize)
    rhs = mean_path_fidelity(l0, UniformEdgeDistribution.fidelity(f_min))
    return CriterionResult(lhs, rhs, lhs >= rhs)


def mean_inverse_edge_probability(p_min: float) -> float:
    """``E[1/p]`` for ``p ~ U(p_min, 1)``."""
    return math.log(1.0 / p_min) / (1.0 - p_min)


def expected_waiting_time(l: int, p_min: float, method: str = "exact") -> float:
    """Expected number of attempts ``<1/p^(l)>`` until an ``l``-edge path is up.

    ``exact`` uses independence of the edges (``E[1/p]^l``); ``quadrature``
    integrates ``1/p`` against the path-probability density instead.
    """
    l = _check_length(l)
    if method == "exact":
        return mean_inverse_edge_probability(p_min) ** l
    if method == "quadrature":
        return PathProbabilityPdf(l, p_min).expect(lambda p: 1.0 / p, order=64)
    raise ValueError(f"unknown method {method!r}")


def criterion_availability(l0: int, d: int, p_min: float, tau_m: float | None = None) -> CriterionResult:
    """Are both paths expected to be up within the memory coherence time?

    ``rhs`` carries ``tau_m``.
    """
    l0 = _check_length(l0)
    if d < 0:
        raise ValueError(f"d={d!r} must be >= 0")
    if tau_m is None:
        tau_m = 1.0 / p_min
    lhs = abs(expected_waiting_time(l0, p_min) - expected_waiting_time(l0 + d, p_min))
    return CriterionResult(lhs, tau_m, lhs <= tau_m)


# --------------------------------------------------------------------------
# decision tables


@dataclass
class DecisionTable:
    """Boolean criterion outcome for every ``(l0, d)``; rows ``l0``, columns ``d``."""

    name: str
    l0_values: np.ndarray
    d_values: np.ndarray
    entries: np.ndarray
    lhs: np.ndarray

    def lookup(self, l0: int, d: int) -> bool:
        i = np.searchsorted(self.l0_values, l0)
        j = np.searchsorted(self.d_values, d)
        if i >= len(self.l0_values) or self.l0_values[i] != l0 or j >= len(self.d_values) or self.d_values[j] != d:
            raise KeyError((l0, d))
        return bool(self.entries[i, j])

    def __and__(self, other: "DecisionTable") -> "DecisionTable":
        if not (np.array_equal(self.l0_values, other.l0_values) and np.array_equal(self.d_values, other.d_values)):
            raise ValueError("tables cover different (l0, d) ranges")
        return DecisionTable(
            f"{self.name}&{other.name}",
            self.l0_values,
            self.d_values,
            self.entries & other.entries,
            np.full(self.entries.shape, np.nan),
        )

    def rows(self):
        for i, l0 in enumerate(self.l0_values):
            for j, d in enumerate(self.d_values):
                yield int(l0), int(d), bool(self.entries[i, j]), float(self.lhs[i, j])


def _fidelity_cell(args):
    l0, d, f_min, renormalize = args
    return criterion_fidelity(l0, d, f_min, renormalize).lhs


def decision_tables(
    cfg: CriteriaConfig,
    l0_range: Iterable[int],
    d_range: Iterable[int],
    workers: int = 1,
) -> tuple[DecisionTable, DecisionTable]:
    """Fidelity and availability decision tables over ``l0_range x d_range``."""
    l0s = np.array(sorted(set(int(v) for v in l0_range)))
    ds = np.array(sorted(set(int(v) for v in d_range)))
    if l0s.size == 0 or ds.size == 0:
        raise ValueError("l0_range and d_range must be nonempty")
    if l0s.min() < 1 or ds.min() < 0:
        raise ValueError("need l0 >= 1 and d >= 0")

    cells = [(int(l0), int(d), cfg.f_min, cfg.renormalize) for l0 in l0s for d in ds]
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            lhs = list(pool.map(_fidelity_cell, cells, chunksize=4))
    else:
        lhs = [_fidelity_cell(c) for c in cells]
    fid_lhs = np.array(lhs).reshape(l0s.size, ds.size)
    edge = UniformEdgeDistribution.fidelity(cfg.f_min)
    rhs = np.array([mean_path_fidelity(int(l0), edge) for l0 in l0s])
    fid = DecisionTable("fidelity", l0s, ds, fid_lhs >= rhs[:, None], fid_lhs)

    av_lhs = np.array(
        [[criterion_availability(int(l0), int(d), cfg.p_min, cfg.tau_m).lhs for d in ds] for l0 in l0s]
    )
    av = DecisionTable("availability", l0s, ds, av_lhs <= cfg.tau_m, av_lhs)
    return fid, av

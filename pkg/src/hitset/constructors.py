"""Example chains: the tight three-state chain, the two-state counterexample,
and L-shaped chains realizing hittable step functions.

L-shaped chains live on states ``v_-1, v_0, v_1, ..., v_k`` (array indices
``0 .. k+1``). Apart from jumps into ``v_0`` every move is to a neighbour in
that sequence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .chain import Chain
from .errors import (
    EntryOutOfRange,
    NormalizationError,
    NotDecreasing,
    ParameterOutOfRange,
    SpecViolation,
    WindowViolation,
)
from .extremal import MEASURE_SLACK
from .hitting import hitting_times_array

HITTABLE_SLACK = 1e-12
ROUNDOFF = 1e-12  # constructed entries this close below 0 are treated as 0


def three_state_tight(alpha: float, epsilon: float) -> Chain:
    """Three-state chain with ``pi = (eps, 1 - alpha - eps, alpha)``.

    For any ``beta`` with ``alpha + eps < beta <= 1/2`` it has ``T(beta) = 1``
    and ``T(alpha) = 1/alpha``, making every term of the T(alpha) bound equal.
    """
    if not (alpha > 0 and epsilon > 0 and alpha + epsilon < 0.5):
        raise ParameterOutOfRange("need alpha > 0, eps > 0 and alpha + eps < 1/2")
    mid = 1 - alpha - epsilon
    p = [
        [0.0, 1.0, 0.0],
        [epsilon / mid, 1 - (alpha + epsilon) / mid, alpha / mid],
        [0.0, 1.0, 0.0],
    ]
    return Chain(p, labels=["v1", "v2", "v3"])


def two_state_counterexample(gamma: float, bigN: float) -> Chain:
    """Two-state chain with ``pi = (gamma, 1 - gamma)`` and slow switching.

    For ``1/2 < gamma < beta`` only the whole space has measure ``>= beta``,
    so ``T(beta) = 0`` while ``T(alpha) >= (1 - gamma) N`` below ``gamma``.
    """
    if not 0.5 < gamma < 1:
        raise ParameterOutOfRange(f"gamma must lie in (1/2, 1), got {gamma}")
    if not bigN >= 1 / min(gamma, 1 - gamma):
        raise ParameterOutOfRange(f"N must be at least {1 / min(gamma, 1 - gamma)}")
    a = 1 / (gamma * bigN)
    b = 1 / ((1 - gamma) * bigN)
    return Chain([[1 - a, a], [b, 1 - b]])


# -- hittable step functions -------------------------------------------------


@dataclass(frozen=True)
class HittableStepSpec:
    """``f(a) = 1 + sum_i lambdas[i] * [a <= alphas[i]]`` plus realization parameters.

    ``alphas`` is strictly decreasing inside (0, 1/2), ``epsilon`` is the width
    of the error intervals and ``bigN`` the time scale (``T(1/2) = N``).
    """

    alphas: tuple[float, ...]
    lambdas: tuple[float, ...]
    epsilon: float
    bigN: float

    def __post_init__(self):
        object.__setattr__(self, "alphas", tuple(float(a) for a in self.alphas))
        object.__setattr__(self, "lambdas", tuple(float(x) for x in self.lambdas))
        a, lam = self.alphas, self.lambdas
        if len(a) != len(lam):
            raise SpecViolation(f"{len(a)} alphas but {len(lam)} lambdas")
        if any(not 0 < x < 0.5 for x in a):
            raise SpecViolation("alphas must lie in (0, 1/2)")
        if any(a[i + 1] >= a[i] for i in range(len(a) - 1)):
            raise SpecViolation("alphas must be strictly decreasing")
        if any(not x > 0 for x in lam):
            raise SpecViolation("lambdas must be positive")
        if not 0 < self.epsilon < 0.5 - self.alpha(1):
            raise SpecViolation(f"epsilon must lie in (0, {0.5 - self.alpha(1)})")
        if not self.bigN > 0:
            raise SpecViolation("N must be positive")
        total = 0.0
        for i, (ai, li) in enumerate(zip(a, lam), start=1):
            total += li
            if total > 1 / ai - 1 + HITTABLE_SLACK:
                raise SpecViolation(
                    f"not hittable at step {i}: cumulative jump {total} > 1/alpha - 1 = {1 / ai - 1}"
                )

    @property
    def k(self) -> int:
        return len(self.alphas)

    def alpha(self, i: int) -> float:
        """1-based ``alpha_i`` with ``alpha_i = 0`` past the last step."""
        return self.alphas[i - 1] if 1 <= i <= self.k else 0.0

    def value(self, alpha: float) -> float:
        return 1.0 + sum(l for a, l in zip(self.alphas, self.lambdas) if alpha <= a)

    def to_dict(self) -> dict:
        return {
            "alphas": list(self.alphas),
            "lambdas": list(self.lambdas),
            "epsilon": self.epsilon,
            "N": self.bigN,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "HittableStepSpec":
        try:
            return cls(d["alphas"], d["lambdas"], d["epsilon"], d["N"])
        except (KeyError, TypeError) as exc:
            raise SpecViolation(f"malformed spec: {exc}") from None


@dataclass(frozen=True)
class ErrorSet:
    intervals: tuple[tuple[float, float], ...]

    def contains(self, x: float, pad: float = 0.0) -> bool:
        return any(lo - pad <= x <= hi + pad for lo, hi in self.intervals)


def error_set(spec: HittableStepSpec) -> ErrorSet:
    """``[alpha_i, alpha_i + eps]`` for ``i = 0 .. k``, with ``alpha_0 = 0``."""
    starts = (0.0,) + spec.alphas
    return ErrorSet(tuple((a, a + spec.epsilon) for a in starts))


def _rates(alphas: Sequence[float], lambdas: Sequence[float], epsilon: float) -> np.ndarray:
    """Off-diagonal transition probabilities of the L-shaped chain, times N."""
    k = len(alphas)
    al = lambda i: alphas[i - 1] if 1 <= i <= k else 0.0  # noqa: E731
    cum = np.concatenate([[0.0], np.cumsum(lambdas)])
    c = np.zeros((k + 2, k + 2))
    v = lambda i: i + 1  # noqa: E731  index of v_i
    a1 = al(1)
    c[v(-1), v(0)] = 1.0
    c[v(0), v(-1)] = epsilon / (1 - a1 - epsilon)
    if k >= 1:
        lam1 = lambdas[0]
        c[v(0), v(1)] = (1 - a1) / ((1 - a1 - epsilon) * lam1)
        c[v(1), v(0)] = (1 - a1 - lam1 * al(2)) / ((a1 - al(2)) * lam1)
    for i in range(2, k + 1):
        li = lambdas[i - 1]
        c[v(i - 1), v(i)] = (1 - al(i) * (1 + cum[i - 1])) / ((al(i - 1) - al(i)) * li)
        c[v(i), v(i - 1)] = (1 - al(i) * (1 + cum[i])) / ((al(i) - al(i + 1)) * li)
        c[v(i), v(0)] = 1.0
    return c


def min_time_scale(alphas: Sequence[float], lambdas: Sequence[float], epsilon: float) -> float:
    """Smallest N for which every L-shaped transition probability lies in [0, 1]."""
    c = _rates(alphas, lambdas, epsilon)
    return float(max(1.0, c.sum(axis=1).max()))


@dataclass(frozen=True)
class LShapedChain:
    chain: Chain
    spec: HittableStepSpec

    def state(self, i: int) -> int:
        """Array index of ``v_i``."""
        return i + 1

    def tail_measure(self, i: int) -> float:
        """``pi({v_i, ..., v_k})``; zero past the last state."""
        return float(self.chain.pi[self.state(i):].sum())

    def hit(self, src: int, dst: int) -> float:
        """``E_{v_src}[tau_{v_dst}]``."""
        h = hitting_times_array(self.chain, self.chain.state_set([self.state(dst)]))
        return float(h[self.state(src)])


def l_shaped_from_spec(spec: HittableStepSpec) -> LShapedChain:
    """Build the L-shaped chain realizing ``spec`` with ``T(1/2) = N``.

    Raises :class:`EntryOutOfRange` when N is too small for the requested
    steps; :func:`min_time_scale` gives the threshold.
    """
    if not isinstance(spec, HittableStepSpec):
        spec = HittableStepSpec.from_dict(spec)
    k = spec.k
    p = _rates(spec.alphas, spec.lambdas, spec.epsilon) / spec.bigN
    np.fill_diagonal(p, 1 - p.sum(axis=1))
    labels = [f"v{i}" for i in range(-1, k + 1)]
    for x, y in zip(*np.nonzero((p < 0) | (p > 1))):
        if -ROUNDOFF <= p[x, y] < 0:
            p[x, y] = 0.0
        else:
            raise EntryOutOfRange((labels[x], labels[y]), float(p[x, y]))
    return LShapedChain(Chain(p, labels=labels), spec)


def l_shaped_conditions(lc: LShapedChain) -> dict[str, float]:
    """Worst relative residuals of the three design conditions of the chain.

    ``measures``: pi(v_-1) = eps, pi(v_0) = 1 - alpha_1 - eps and the tails
    pi({v_i..v_k}) = alpha_i. ``return_to_v0``: excess of E_{v_i}[tau_{v_0}]
    over N (clipped at 0) and the gap at i = -1. ``steps``: E_{v_{i-1}}[tau_{v_i}]
    against lambda_i N.
    """
    spec, n = lc.spec, lc.spec.bigN
    pi = lc.chain.pi
    meas = [abs(pi[0] - spec.epsilon) / spec.epsilon,
            abs(pi[1] - (1 - spec.alpha(1) - spec.epsilon))]
    meas += [abs(lc.tail_measure(i) - spec.alpha(i)) / spec.alpha(i) for i in range(1, spec.k + 1)]
    h0 = hitting_times_array(lc.chain, lc.chain.state_set([lc.state(0)]))
    ret = [max(0.0, h0.max() - n) / n, abs(h0[lc.state(-1)] - n) / n]
    steps = [abs(lc.hit(i - 1, i) - spec.lambdas[i - 1] * n) / (spec.lambdas[i - 1] * n)
             for i in range(1, spec.k + 1)]
    return {"measures": max(meas), "return_to_v0": max(ret), "steps": max(steps, default=0.0)}


def l_shaped_sparsity_ok(lc: LShapedChain) -> bool:
    """Nonzero entries only on the diagonal, between neighbours, and into v_0."""
    size = lc.chain.n
    allowed = np.eye(size, dtype=bool)
    for x in range(size - 1):
        allowed[x, x + 1] = allowed[x + 1, x] = True
    allowed[:, lc.state(0)] = True
    return bool(np.all((lc.chain.p > 0) <= allowed))


def l_shaped_t_formula(lc: LShapedChain, alpha: float) -> float:
    """T(alpha) read off as ``E_{v_-1}[tau_{v_i}]`` for the window containing alpha.

    The window for ``i`` is ``pi({v_{i+1}..v_k}) + pi(v_-1) < alpha <= pi({v_i..v_k})``.
    """
    eps_mass = float(lc.chain.pi[lc.state(-1)])
    for i in range(lc.spec.k + 1):
        lo = lc.tail_measure(i + 1) + eps_mass
        hi = lc.tail_measure(i)
        if lo + MEASURE_SLACK < alpha <= hi + MEASURE_SLACK:
            return lc.hit(-1, i)
    raise WindowViolation(f"alpha = {alpha} lies in no window of the chain")


# -- dyadic discretization ---------------------------------------------------


def dyadic_grid(f: Callable[[float], float], n: int) -> tuple[list[float], list[float]]:
    """Grid ``alpha_i = 1/2 - i 2^-n`` (i = 1 .. 2^(n-1) - 1) and raw jumps
    ``f(alpha_i) - f(alpha_{i-1})``, zero jumps included."""
    if n < 1:
        raise ParameterOutOfRange("n must be a positive integer")
    alphas, lambdas = [], []
    prev = f(0.5)
    for i in range(1, 2 ** (n - 1)):
        a = 0.5 - i * 2.0**-n
        cur = f(a)
        if cur < prev:
            raise NotDecreasing(f"f({a}) = {cur} < f({a + 2.0**-n}) = {prev}")
        alphas.append(a)
        lambdas.append(cur - prev)
        prev = cur
    return alphas, lambdas


def dyadic_step_function(f: Callable[[float], float], n: int) -> Callable[[float], float]:
    """``f_n(x) = f(ceil(2^n x) 2^-n)``."""
    return lambda x: f(math.ceil(x * 2**n) * 2.0**-n)


def dyadic_discretize(
    f: Callable[[float], float],
    n: int,
    bigN: float | None = None,
    normalize: bool = False,
) -> HittableStepSpec:
    """Hittable spec whose step function is the dyadic approximant ``f_n``.

    ``f`` must satisfy ``f(1/2) = 1``; with ``normalize=True`` it is divided by
    ``f(1/2)`` first. Flat stretches give zero jumps, which are dropped. The
    error width is ``2^-2n``. ``bigN`` defaults to :func:`min_time_scale`.
    """
    if normalize:
        scale = f(0.5)
        if not scale > 0:
            raise NormalizationError(f"cannot normalize by f(1/2) = {scale}")
        g = lambda a: f(a) / scale  # noqa: E731
    else:
        g = f
    if abs(g(0.5) - 1) > 1e-12:
        raise NormalizationError(f"f(1/2) must be 1, got {g(0.5)}")
    alphas, lambdas = dyadic_grid(g, n)
    kept = [(a, l) for a, l in zip(alphas, lambdas) if l > 0]
    alphas = [a for a, _ in kept]
    lambdas = [l for _, l in kept]
    eps = 2.0 ** (-2 * n)
    if bigN is None:
        bigN = min_time_scale(alphas, lambdas, eps)
    return HittableStepSpec(tuple(alphas), tuple(lambdas), eps, bigN)

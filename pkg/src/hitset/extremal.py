"""Extremal hitting times T(alpha) and t_prod by exhaustive subset enumeration."""

from __future__ import annotations

import bisect
import io
from dataclasses import dataclass

import numpy as np

from .chain import Chain, StateSet
from .errors import ParameterOutOfRange, StateCountCap
from .hitting import hitting_times_array

MAX_STATES = 24
MEASURE_SLACK = 1e-12


@dataclass(frozen=True)
class ExtremalWitness:
    alpha: float
    set: StateSet
    start: int
    value: float


@dataclass(frozen=True)
class HittingProfile:
    """T as a step function: ``T(a) = max{v_j : m_j >= a - 1e-12}``.

    ``breakpoints`` holds one entry per distinct set measure, sorted by
    measure, with values already suffix-maximized (nonincreasing). The max
    is then the value at the first admissible breakpoint.
    """

    breakpoints: tuple[tuple[float, float], ...]

    def __call__(self, alpha: float) -> float:
        measures = [m for m, _ in self.breakpoints]
        j = bisect.bisect_left(measures, alpha - MEASURE_SLACK)
        if j == len(measures):
            raise ParameterOutOfRange(f"no set has measure >= {alpha}")
        return self.breakpoints[j][1]

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("alpha_threshold,value\n")
        for m, v in self.breakpoints:
            buf.write(f"{m:.17g},{v:.17g}\n")
        return buf.getvalue()


def _check_size(chain: Chain):
    if chain.n > MAX_STATES:
        raise StateCountCap(chain.n, MAX_STATES)


def subset_measures(chain: Chain) -> np.ndarray:
    """``pi(A)`` for every mask ``A`` in ``range(2**n)``; the full set is exactly 1."""
    key = ("measures",)
    m = chain._cache.get(key)
    if m is None:
        m = np.zeros(1 << chain.n)
        for b, w in enumerate(chain.pi):
            m[1 << b: 2 << b] = m[: 1 << b] + w
        m[-1] = 1.0
        m.flags.writeable = False
        chain._cache[key] = m
    return m


def _admissible_masks(chain: Chain, alpha: float, prune: bool) -> np.ndarray:
    m = subset_measures(chain)
    ok = m >= alpha - MEASURE_SLACK
    ok[0] = False
    if prune:
        masks = np.arange(len(m))
        minimal = ok.copy()
        for b in range(chain.n):
            has = (masks >> b & 1).astype(bool)
            # dropping state b keeps the set admissible -> not inclusion-minimal
            minimal[has] &= ~ok[masks[has] ^ (1 << b)]
        ok = minimal
    return np.flatnonzero(ok)


def t_alpha(chain: Chain, alpha: float, prune: bool = True) -> ExtremalWitness:
    """Largest ``E_x[tau_A]`` over states ``x`` and sets with ``pi(A) >= alpha``.

    Only inclusion-minimal admissible sets are tried when ``prune`` is set;
    enlarging a target can only shorten hitting times. Ties go to the smaller
    mask, then the smaller start state.
    """
    _check_size(chain)
    if not 0 < alpha < 1:
        raise ParameterOutOfRange(f"alpha must lie in (0, 1), got {alpha}")
    best = None
    for mask in _admissible_masks(chain, alpha, prune):
        h = hitting_times_array(chain, StateSet(int(mask), 0.0))
        x = int(np.argmax(h))
        if best is None or h[x] > best[2]:
            best = (int(mask), x, float(h[x]))
    mask, x, value = best
    return ExtremalWitness(alpha, chain.from_mask(mask), x, value)


def set_values(chain: Chain) -> np.ndarray:
    """``max_x E_x[tau_A]`` for every nonempty mask (index 0 holds nan)."""
    _check_size(chain)
    key = ("setvals",)
    v = chain._cache.get(key)
    if v is None:
        v = np.full(1 << chain.n, np.nan)
        for mask in range(1, 1 << chain.n):
            v[mask] = hitting_times_array(chain, StateSet(mask, 0.0)).max()
        v.flags.writeable = False
        chain._cache[key] = v
    return v


def t_profile(chain: Chain) -> HittingProfile:
    """The whole function alpha -> T(alpha) from a single pass over subsets."""
    m = subset_measures(chain)[1:]
    v = set_values(chain)[1:]
    order = np.lexsort((v, m))
    m, v = m[order], v[order]
    suffix = np.maximum.accumulate(v[::-1])[::-1]
    # one breakpoint per distinct measure; lexsort put the group max last
    last = np.append(m[1:] != m[:-1], True)
    return HittingProfile(tuple(zip(m[last].tolist(), suffix[last].tolist())))


def t_prod(chain: Chain) -> float:
    """``max pi(A) * E_x[tau_A]`` over states and nonempty proper subsets."""
    m = subset_measures(chain)[1:-1]
    v = set_values(chain)[1:-1]
    return float(np.max(m * v))

"""Expected hitting times, hitting distributions and occupation times.

All quantities come from one LU factorization of ``I - P`` restricted to the
states outside the target set; the factorization is memoized on the chain.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import lu_factor, lu_solve

from .chain import Chain, StateSet, nonempty
from .errors import EmptyTarget, LengthMismatch, ValidationError

MAX_STATES = 2000


@dataclass(frozen=True)
class HittingVector:
    target: StateSet
    h: np.ndarray  # h[x] = E_x[tau_target]


@dataclass(frozen=True)
class HittingDistributionMatrix:
    target: StateSet
    states: tuple[int, ...]  # column order
    matrix: np.ndarray  # (n, len(states)); row x = law of X_{tau_target} from x


def _outside(chain: Chain, target: StateSet) -> np.ndarray:
    return np.array([x for x in range(chain.n) if not target.mask >> x & 1], dtype=int)


def _factor(chain: Chain, target: StateSet):
    key = ("lu", target.mask)
    hit = chain._cache.get(key)
    if hit is None:
        if chain.n > MAX_STATES:
            raise ValidationError(f"dense solves are capped at {MAX_STATES} states")
        out = _outside(chain, target)
        lu = lu_factor(np.eye(len(out)) - chain.p[np.ix_(out, out)]) if len(out) else None
        hit = chain._cache[key] = (out, lu)
    return hit


def hitting_times_array(chain: Chain, target: StateSet) -> np.ndarray:
    """``E_x[tau_target]`` for every state, as a read-only array (memoized)."""
    nonempty(target)
    key = ("h", target.mask)
    h = chain._cache.get(key)
    if h is None:
        out, lu = _factor(chain, target)
        h = np.zeros(chain.n)
        if len(out):
            h[out] = lu_solve(lu, np.ones(len(out)))
        h.flags.writeable = False
        chain._cache[key] = h
    return h


def expected_hitting_times(chain: Chain, target) -> HittingVector:
    """Solve ``h = 0`` on the target and ``h = 1 + P h`` off it.

    The hitting time counts from ``t = 0``, so states inside the target get 0.
    """
    target = nonempty(chain.as_set(target))
    return HittingVector(target, hitting_times_array(chain, target))


def d_plus(chain: Chain, from_set, to_set) -> float:
    """``max_{x in from_set} E_x[tau_{to_set}]``."""
    a = nonempty(chain.as_set(from_set), "source")
    h = hitting_times_array(chain, nonempty(chain.as_set(to_set)))
    return float(h[list(a.states)].max())


def d_minus(chain: Chain, from_set, to_set) -> float:
    """``min_{x in from_set} E_x[tau_{to_set}]``."""
    a = nonempty(chain.as_set(from_set), "source")
    h = hitting_times_array(chain, nonempty(chain.as_set(to_set)))
    return float(h[list(a.states)].min())


def hitting_distribution(chain: Chain, target) -> HittingDistributionMatrix:
    """Law of the first target state entered, for every starting state.

    Off the target, column ``s`` solves ``u = P[:, s] + P_out u``; each row
    of the result is a probability vector over the target states.
    """
    target = nonempty(chain.as_set(target))
    key = ("hd", target.mask)
    m = chain._cache.get(key)
    if m is None:
        cols = list(target.states)
        out, lu = _factor(chain, target)
        m = np.zeros((chain.n, len(cols)))
        m[cols, range(len(cols))] = 1.0
        if len(out):
            m[out] = lu_solve(lu, chain.p[np.ix_(out, cols)])
        m.flags.writeable = False
        chain._cache[key] = m
    return HittingDistributionMatrix(target, target.states, m)


def expected_occupation(chain: Chain, avoid, count, start) -> float:
    """Expected number of steps ``t < tau_avoid`` with ``X_t`` in ``count``.

    ``start`` is an initial distribution over all states. With ``G`` the
    fundamental matrix ``(I - P_out)^{-1}`` on the complement of ``avoid``,
    the answer is ``start_out @ G @ 1_count``, computed as one transposed solve.
    """
    avoid = chain.as_set(avoid)
    if not avoid:
        raise EmptyTarget("avoid")
    count = chain.as_set(count)
    start = np.asarray(start, dtype=float)
    if start.shape != (chain.n,):
        raise LengthMismatch(f"start distribution has shape {start.shape}, expected ({chain.n},)")
    if np.any(start < 0) or abs(start.sum() - 1) > 1e-9:
        raise ValidationError("start must be a probability vector")
    out, lu = _factor(chain, avoid)
    if not len(out):
        return 0.0
    visits = lu_solve(lu, start[out], trans=1)
    counted = np.array([count.mask >> x & 1 for x in out], dtype=float)
    return float(visits @ counted)

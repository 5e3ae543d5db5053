"""Seeded Monte Carlo estimates of hitting and occupation times.

Trajectory ``i`` consumes its own random stream, derived from ``(seed, i)``
with JAX's counter-based threefry generator, so an estimate does not depend
on how trajectories are batched. Trajectories advance in lockstep as numpy
arrays; uniforms are fetched in blocks of 64 steps per live trajectory.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np

from .chain import Chain
from .errors import EmptyTarget, LengthMismatch, ParameterOutOfRange, StepCapExceeded

BLOCK = 64
DEFAULT_STEP_CAP = 10**8
_START_STREAM = 0xFFFFFFFF  # block id reserved for drawing start states


@dataclass(frozen=True)
class SimEstimate:
    mean: float
    std_error: float
    n_samples: int
    seed: int

    def to_dict(self) -> dict:
        return {"mean": self.mean, "std_error": self.std_error,
                "n_samples": self.n_samples, "seed": self.seed}


@functools.cache
def _bits_fn():
    import jax
    import jax.numpy as jnp

    @jax.jit
    def bits(seed_lo, seed_hi, idx, block):
        key = jax.random.fold_in(jax.random.key(seed_lo), seed_hi)

        def one(i):
            k = jax.random.fold_in(jax.random.fold_in(key, i), block)
            return jax.random.bits(k, (BLOCK, 2), dtype=jnp.uint32)

        return jax.vmap(one)(idx)

    return bits


def uniforms(seed: int, trajectories: np.ndarray, block: int) -> np.ndarray:
    """53-bit uniforms in [0, 1), shape ``(len(trajectories), BLOCK)``.

    Row ``r`` is block ``block`` of the stream of trajectory ``trajectories[r]``.
    """
    m = len(trajectories)
    padded = max(256, 1 << (m - 1).bit_length())  # bounds recompilation
    idx = np.zeros(padded, dtype=np.uint32)
    idx[:m] = trajectories
    seed &= (1 << 64) - 1
    raw = np.asarray(_bits_fn()(np.uint32(seed & 0xFFFFFFFF), np.uint32(seed >> 32),
                                idx, np.uint32(block)))[:m]
    hi = (raw[..., 0] >> 5).astype(np.float64)
    lo = (raw[..., 1] >> 6).astype(np.float64)
    return (hi * 67108864.0 + lo) / 9007199254740992.0


def _cumulative(chain: Chain) -> np.ndarray:
    cum = chain._cache.get(("cdf",))
    if cum is None:
        cum = np.cumsum(chain.p, axis=1)
        for x in range(chain.n):
            last = np.flatnonzero(chain.p[x] > 0)[-1]
            cum[x, last:] = 1.0
        chain._cache[("cdf",)] = cum
    return cum


def _sample(cum_rows: np.ndarray, u: np.ndarray) -> np.ndarray:
    # inverse CDF: number of cumulative entries <= u
    return (cum_rows <= u[:, None]).sum(axis=1)


def _run(chain, start_states, stop, count, n_samples, seed, step_cap):
    """Step trajectories until they enter ``stop``; return per-trajectory totals.

    Totals are step counts when ``count`` is None, otherwise the number of
    times ``t < tau_stop`` with ``X_t`` in ``count``.
    """
    cum = _cumulative(chain)
    state = np.asarray(start_states, dtype=np.int64)
    total = np.zeros(n_samples)
    act = np.flatnonzero(~stop[state])
    pos = 0
    budget = step_cap
    rows = u_block = None
    while act.size:
        if u_block is None or pos % BLOCK == 0:
            u_block = uniforms(seed, act, pos // BLOCK)
            rows = np.arange(act.size)
        if budget < act.size:
            raise StepCapExceeded(int(act[0]), step_cap)
        budget -= act.size
        cur = state[act]
        total[act] += 1.0 if count is None else count[cur]
        nxt = _sample(cum[cur], u_block[rows, pos % BLOCK])
        state[act] = nxt
        live = ~stop[nxt]
        act, rows = act[live], rows[live]
        pos += 1
    return total


def _estimate(values: np.ndarray, seed: int) -> SimEstimate:
    n = len(values)
    se = float(values.std(ddof=1) / math.sqrt(n)) if n > 1 else 0.0
    return SimEstimate(float(values.mean()), se, n, seed)


def _mask_array(chain: Chain, s) -> np.ndarray:
    s = chain.as_set(s)
    return np.array([s.mask >> x & 1 for x in range(chain.n)], dtype=bool)


def _check(n_samples, step_cap):
    if n_samples < 1:
        raise ParameterOutOfRange("n_samples must be >= 1")
    if step_cap < 1:
        raise ParameterOutOfRange("step_cap must be >= 1")


def simulate_hitting(chain: Chain, start, target, n_samples: int, seed: int,
                     step_cap: int = DEFAULT_STEP_CAP) -> SimEstimate:
    """Monte Carlo mean of ``tau_target`` from state ``start``.

    ``step_cap`` bounds the total number of transitions over the whole run;
    exceeding it raises rather than returning a truncated (biased) mean.
    """
    _check(n_samples, step_cap)
    stop = _mask_array(chain, target)
    if not stop.any():
        raise EmptyTarget()
    x0 = np.full(n_samples, chain.index(start))
    return _estimate(_run(chain, x0, stop, None, n_samples, seed, step_cap), seed)


def simulate_occupation(chain: Chain, start, avoid, count, n_samples: int, seed: int,
                        step_cap: int = DEFAULT_STEP_CAP) -> SimEstimate:
    """Monte Carlo mean of the time spent in ``count`` strictly before ``tau_avoid``.

    ``start`` is a distribution over states; each trajectory draws its start
    from a reserved block of its own stream.
    """
    _check(n_samples, step_cap)
    stop = _mask_array(chain, avoid)
    if not stop.any():
        raise EmptyTarget("avoid")
    start = np.asarray(start, dtype=float)
    if start.shape != (chain.n,):
        raise LengthMismatch(f"start distribution has shape {start.shape}, expected ({chain.n},)")
    cdf = np.cumsum(start)
    cdf[np.flatnonzero(start > 0)[-1]:] = 1.0
    u0 = uniforms(seed, np.arange(n_samples), _START_STREAM)[:, 0]
    x0 = np.searchsorted(cdf, u0, side="right")
    counted = _mask_array(chain, count).astype(float)
    return _estimate(_run(chain, x0, stop, counted, n_samples, seed, step_cap), seed)

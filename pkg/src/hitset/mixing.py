"""Total variation, mixing time and Cesaro mixing time."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .chain import Chain
from .errors import LengthMismatch, ParameterOutOfRange

DEFAULT_CAP = 10**6
THRESHOLD = 0.25


@dataclass(frozen=True)
class NotReached:
    cap: int

    def to_json(self):
        return {"not_reached": self.cap}


@dataclass
class MixingReport:
    t_mix: int | NotReached
    t_ces: int | NotReached
    # (t, max_x TV(P^t(x, .), pi)) for t = 0 .. t_mix (or cap)
    worst_tv_at_t: list[tuple[int, float]] = field(default_factory=list)

    def to_dict(self) -> dict:
        def enc(t):
            return t.to_json() if isinstance(t, NotReached) else t

        return {
            "t_mix": enc(self.t_mix),
            "t_ces": enc(self.t_ces),
            "worst_tv_at_t": [list(r) for r in self.worst_tv_at_t],
        }


def tv_distance(mu, nu) -> float:
    """Total variation distance: ``max_A |mu(A) - nu(A)| = sum |mu - nu| / 2``."""
    mu = np.asarray(mu, dtype=float)
    nu = np.asarray(nu, dtype=float)
    if mu.shape != nu.shape:
        raise LengthMismatch(f"distributions of shape {mu.shape} and {nu.shape}")
    return float(min(1.0, 0.5 * np.abs(mu - nu).sum()))


def worst_tv(kernel: np.ndarray, pi: np.ndarray) -> float:
    return float(0.5 * np.abs(kernel - pi).sum(axis=1).max())


def _check_cap(cap):
    if cap < 1:
        raise ParameterOutOfRange(f"cap must be >= 1, got {cap}")


def _tmix_scan(chain: Chain, cap: int):
    _check_cap(cap)
    table = []
    pt = np.eye(chain.n)
    for t in range(cap + 1):
        d = worst_tv(pt, chain.pi)
        table.append((t, d))
        if d <= THRESHOLD:
            return t, table
        pt = pt @ chain.p
        pt /= pt.sum(axis=1, keepdims=True)
    return NotReached(cap), table


def mixing_time(chain: Chain, cap: int = DEFAULT_CAP) -> int | NotReached:
    """Smallest ``t >= 0`` with every row of ``P^t`` within TV 1/4 of pi."""
    return _tmix_scan(chain, cap)[0]


def cesaro_mixing_time(chain: Chain, cap: int = DEFAULT_CAP) -> int | NotReached:
    """Smallest ``t >= 1`` with every row of ``(1/t) sum_{s<t} P^s`` within TV 1/4 of pi.

    Checks each t in turn; the distance is not assumed monotone in t.
    """
    _check_cap(cap)
    pt = np.eye(chain.n)
    total = np.zeros_like(pt)
    for t in range(1, cap + 1):
        total += pt
        if worst_tv(total / t, chain.pi) <= THRESHOLD:
            return t
        pt = pt @ chain.p
        pt /= pt.sum(axis=1, keepdims=True)
    return NotReached(cap)


def mixing_report(chain: Chain, cap: int = DEFAULT_CAP) -> MixingReport:
    t_mix, table = _tmix_scan(chain, cap)
    return MixingReport(t_mix, cesaro_mixing_time(chain, cap), table)

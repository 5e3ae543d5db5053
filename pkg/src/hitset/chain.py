"""Finite Markov chains: validation, irreducibility and stationary structure."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse.csgraph import connected_components

from .errors import (
    ConvergenceFailure,
    EmptyTarget,
    LengthMismatch,
    NegativeEntry,
    NonFiniteEntry,
    NotIrreducible,
    RowSumError,
    ValidationError,
)

ROW_SUM_TOL = 1e-9
PI_SUM_TOL = 1e-12
PI_RESIDUAL_TOL = 1e-10


def validate_stochastic(raw) -> np.ndarray:
    """Check that ``raw`` is a row-stochastic matrix and return a float copy.

    Rows whose sum is off by at most ``1e-9`` are divided by their sum so that
    downstream solves see rows summing to exactly 1 (up to rounding).
    """
    p = np.array(raw, dtype=np.float64)
    if p.ndim != 2 or p.shape[0] != p.shape[1]:
        raise ValidationError(f"transition matrix must be square, got shape {p.shape}")
    if p.shape[0] < 2:
        raise ValidationError("a chain needs at least 2 states")
    bad = np.argwhere(~np.isfinite(p))
    if len(bad):
        raise NonFiniteEntry(*map(int, bad[0]))
    neg = np.argwhere(p < 0)
    if len(neg):
        x, y = map(int, neg[0])
        raise NegativeEntry(x, y, float(p[x, y]))
    sums = p.sum(axis=1)
    for x, s in enumerate(sums):
        if abs(s - 1.0) > ROW_SUM_TOL:
            raise RowSumError(x, float(s))
    p /= sums[:, None]
    if np.any(p > 1.0):
        x, y = map(int, np.argwhere(p > 1.0)[0])
        raise ValidationError(f"entry ({x}, {y}) exceeds 1")
    return p


def check_irreducible(p) -> bool:
    """True iff the digraph with an edge x->y whenever P[x, y] > 0 is strongly connected."""
    n_comp, _ = connected_components(np.asarray(p) > 0, directed=True, connection="strong")
    return n_comp == 1


def _power_iteration(p: np.ndarray, tol: float = 1e-13, max_iter: int = 10**7) -> np.ndarray:
    # the lazy kernel has the same stationary law and is aperiodic
    lazy = 0.5 * (p + np.eye(len(p)))
    pi = np.full(len(p), 1.0 / len(p))
    for _ in range(max_iter):
        nxt = pi @ lazy
        nxt /= nxt.sum()
        if np.max(np.abs(nxt - pi)) < tol:
            return nxt
        pi = nxt
    raise ConvergenceFailure(f"power iteration did not converge in {max_iter} iterations")


def stationary_distribution(p) -> np.ndarray:
    """Stationary distribution of an irreducible transition matrix.

    Solves ``(P^T - I) pi = 0`` with the last equation swapped for
    ``sum(pi) = 1``. Falls back to power iteration on ``(P + I) / 2`` when the
    direct system is numerically singular.
    """
    p = np.asarray(p, dtype=np.float64)
    n = len(p)
    a = p.T - np.eye(n)
    a[-1, :] = 1.0
    b = np.zeros(n)
    b[-1] = 1.0
    try:
        if np.linalg.cond(a) > 1.0 / np.finfo(float).eps:
            raise np.linalg.LinAlgError("singular to working precision")
        pi = np.linalg.solve(a, b)
    except np.linalg.LinAlgError:
        return _power_iteration(p)
    if not np.all(np.isfinite(pi)) or np.any(pi <= 0):
        return _power_iteration(p)
    return pi / pi.sum()


@dataclass(frozen=True)
class StateSet:
    """A subset of states stored as a bitmask, with its stationary measure."""

    mask: int
    measure: float

    @property
    def states(self) -> tuple[int, ...]:
        m, out, i = self.mask, [], 0
        while m:
            if m & 1:
                out.append(i)
            m >>= 1
            i += 1
        return tuple(out)

    def __contains__(self, x: int) -> bool:
        return bool(self.mask >> x & 1)

    def __len__(self) -> int:
        return bin(self.mask).count("1")

    def __bool__(self) -> bool:
        return self.mask != 0


class Chain:
    """Irreducible finite Markov chain with its stationary distribution.

    The transition matrix and ``pi`` are read-only arrays. Instances carry a
    private memo of per-target linear-algebra results; it never changes any
    observable value, so sharing a chain between threads is safe.
    """

    def __init__(self, p, labels: Sequence[str] | None = None):
        p = validate_stochastic(p)
        if not check_irreducible(p):
            raise NotIrreducible("transition matrix is not irreducible")
        n = len(p)
        if labels is not None:
            labels = [str(s) for s in labels]
            if len(labels) != n:
                raise LengthMismatch(f"{len(labels)} labels for {n} states")
            if len(set(labels)) != n:
                raise ValidationError("state labels must be distinct")
        pi = stationary_distribution(p)
        residual = np.max(np.abs(pi @ p - pi))
        if residual > PI_RESIDUAL_TOL or abs(pi.sum() - 1) > PI_SUM_TOL or np.any(pi <= 0):
            raise ConvergenceFailure(f"stationary residual {residual:.3g} too large")
        p.flags.writeable = False
        pi.flags.writeable = False
        self.p = p
        self.pi = pi
        self.n = n
        self.labels = labels
        self._cache: dict = {}

    def __repr__(self):
        return f"Chain(n={self.n})"

    # -- state sets -------------------------------------------------------

    def index(self, state) -> int:
        """Resolve a state given as an index or a label."""
        if isinstance(state, (int, np.integer)):
            x = int(state)
        elif self.labels is not None and state in self.labels:
            x = self.labels.index(state)
        else:
            try:
                x = int(state)
            except (TypeError, ValueError):
                raise ValidationError(f"unknown state {state!r}") from None
        if not 0 <= x < self.n:
            raise ValidationError(f"state {x} out of range for {self.n} states")
        return x

    def mask_measure(self, mask: int) -> float:
        if mask == (1 << self.n) - 1:
            return 1.0
        return float(sum(self.pi[x] for x in range(self.n) if mask >> x & 1))

    def state_set(self, states: Iterable = ()) -> StateSet:
        mask = 0
        for s in states:
            mask |= 1 << self.index(s)
        return StateSet(mask, self.mask_measure(mask))

    def from_mask(self, mask: int) -> StateSet:
        if not 0 <= mask < 1 << self.n:
            raise ValidationError(f"mask {mask} out of range for {self.n} states")
        return StateSet(mask, self.mask_measure(mask))

    @property
    def full(self) -> StateSet:
        return self.from_mask((1 << self.n) - 1)

    def complement(self, s: StateSet) -> StateSet:
        return self.from_mask(((1 << self.n) - 1) & ~s.mask)

    def as_set(self, s) -> StateSet:
        """Coerce a StateSet or an iterable of states to a StateSet of this chain."""
        if isinstance(s, StateSet):
            if s.mask >> self.n:
                raise ValidationError("state set refers to states outside the chain")
            return s
        return self.state_set(s)

    # -- serialization ----------------------------------------------------

    def to_dict(self) -> dict:
        d = {}
        if self.labels is not None:
            d["labels"] = list(self.labels)
        d["P"] = self.p.tolist()
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "Chain":
        if not isinstance(d, dict) or "P" not in d:
            raise ValidationError('chain JSON must be an object with a "P" key')
        return cls(d["P"], labels=d.get("labels"))


def nonempty(s: StateSet, what: str = "target") -> StateSet:
    if not s:
        raise EmptyTarget(what)
    return s


def load_chain(path) -> Chain:
    with open(path) as fh:
        return Chain.from_dict(json.load(fh))


def save_chain(chain: Chain, path) -> None:
    Path(path).write_text(json.dumps(chain.to_dict()) + "\n")

"""Numerical checks of the hitting-time inequalities on concrete chains.

Every check returns :class:`InequalityReport` objects. An inequality
``lhs <= rhs`` holds when ``rhs - lhs >= -1e-9 * (1 + |rhs|)``. Conditional
statements whose hypotheses fail are reported as not applicable, which
counts as holding.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np
from scipy.sparse.csgraph import connected_components

from .chain import Chain, StateSet, nonempty
from .errors import ParameterOutOfRange, SetsOverlap
from .extremal import HittingProfile, t_alpha, t_prod, t_profile
from .hitting import expected_occupation, hitting_distribution, hitting_times_array

REL_TOL = 1e-9
OCCUPATION_TOL = 1e-7
PROP41_TOL = 1e-6


@dataclass(frozen=True)
class InequalityReport:
    name: str
    lhs: float
    rhs: float
    slack: float
    holds: bool
    witness: str | None = None
    applicable: bool = True

    def to_dict(self) -> dict:
        # NaN (not applicable) becomes null so the output stays strict JSON
        return {k: None if isinstance(v, float) and math.isnan(v) else v
                for k, v in asdict(self).items()}


def report(name: str, lhs: float, rhs: float, witness: str | None = None,
           tol: float = REL_TOL) -> InequalityReport:
    slack = float(rhs - lhs)
    holds = slack >= -tol * (1 + abs(rhs))
    return InequalityReport(name, float(lhs), float(rhs), slack, bool(holds),
                            None if holds else witness)


def not_applicable(name: str, why: str) -> InequalityReport:
    return InequalityReport(name, float("nan"), float("nan"), float("nan"), True, why, False)


def _fmt(chain: Chain, s: StateSet) -> str:
    if chain.labels is None:
        return "{" + ",".join(map(str, s.states)) + "}"
    return "{" + ",".join(chain.labels[x] for x in s.states) + "}"


def _T(chain: Chain, profile: HittingProfile | None, alpha: float) -> float:
    return profile(alpha) if profile is not None else t_alpha(chain, alpha).value


def check_star(chain: Chain, alpha: float, beta: float,
               profile: HittingProfile | None = None) -> list[InequalityReport]:
    """Both halves of ``T(a) <= T(b) + (1/a - 1) T(1-b) <= T(b)/a`` and the
    chained bound ``T(a) <= T(b)/a``.

    Pass a precomputed ``profile`` to avoid re-enumerating subsets in sweeps.
    """
    if not 0 < alpha < beta <= 0.5:
        raise ParameterOutOfRange(f"need 0 < alpha < beta <= 1/2, got ({alpha}, {beta})")
    ta = _T(chain, profile, alpha)
    tb = _T(chain, profile, beta)
    middle = tb + (1 / alpha - 1) * _T(chain, profile, 1 - beta)
    where = f"alpha={alpha!r}, beta={beta!r}"
    return [
        report("star_left", ta, middle, where),
        report("star_right", middle, tb / alpha, where),
        report("star_chained", ta, tb / alpha, where),
    ]


def check_ratio_bound(chain: Chain, a_set, c_set) -> InequalityReport:
    """``pi(A) <= d+(A,C) / (d+(A,C) + d-(C,A))``; the bound is 1 when both distances vanish."""
    a = nonempty(chain.as_set(a_set), "A")
    c = nonempty(chain.as_set(c_set), "C")
    dp = float(hitting_times_array(chain, c)[list(a.states)].max())
    dm = float(hitting_times_array(chain, a)[list(c.states)].min())
    rhs = dp / (dp + dm) if dp + dm > 0 else 1.0
    return report("ratio_bound", a.measure, rhs, f"A={_fmt(chain, a)}, C={_fmt(chain, c)}")


@dataclass(frozen=True)
class AuxiliaryDecomposition:
    """Return-cycle structure between disjoint sets A and C.

    ``q[i, j]`` is the probability that, from ``a_states[i]``, the first
    A-state visited after reaching C is ``a_states[j]``. ``mu`` (stationary
    for ``q``) and ``nu`` (law of ``X_{tau_C}`` from ``mu``) are full-length
    vectors over all states.
    """

    a_set: StateSet
    c_set: StateSet
    a_states: tuple[int, ...]
    q: np.ndarray
    mu: np.ndarray
    nu: np.ndarray


def _closed_class_stationary(q: np.ndarray) -> np.ndarray:
    """Stationary law of ``q`` supported on one closed communicating class.

    Among closed classes, the one holding the smallest state index is used.
    """
    m = len(q)
    _, lab = connected_components(q > 0, directed=True, connection="strong")
    classes = {}
    for x in range(m):
        classes.setdefault(lab[x], []).append(x)
    closed = [cl for cl in classes.values()
              if not np.any(q[np.ix_(cl, [y for y in range(m) if lab[y] != lab[cl[0]]])] > 0)]
    cl = min(closed, key=min)
    sub = q[np.ix_(cl, cl)]
    sub = sub / sub.sum(axis=1, keepdims=True)
    k = len(cl)
    a = sub.T - np.eye(k)
    a[-1, :] = 1.0
    b = np.zeros(k)
    b[-1] = 1.0
    w = np.linalg.solve(a, b)
    mu = np.zeros(m)
    mu[cl] = np.clip(w, 0, None)
    return mu / mu.sum()


def auxiliary_decomposition(chain: Chain, a_set, c_set) -> AuxiliaryDecomposition:
    a = nonempty(chain.as_set(a_set), "A")
    c = nonempty(chain.as_set(c_set), "C")
    if a.mask & c.mask:
        raise SetsOverlap("A and C must be disjoint")
    ai, ci = list(a.states), list(c.states)
    to_c = hitting_distribution(chain, c).matrix[ai]  # A -> C entry law
    to_a = hitting_distribution(chain, a).matrix[ci]  # C -> A entry law
    q = to_c @ to_a
    w = _closed_class_stationary(q)
    mu = np.zeros(chain.n)
    mu[ai] = w
    nu = np.zeros(chain.n)
    nu[ci] = w @ to_c
    return AuxiliaryDecomposition(a, c, tuple(ai), q, mu, nu)


def cycle_terms(chain: Chain, decomp: AuxiliaryDecomposition) -> tuple[float, float]:
    """``(E_mu[tau_C], E_nu[tau_A])``."""
    e_mu = float(decomp.mu @ hitting_times_array(chain, decomp.c_set))
    e_nu = float(decomp.nu @ hitting_times_array(chain, decomp.a_set))
    return e_mu, e_nu


def check_dist_inequality(chain: Chain, decomp: AuxiliaryDecomposition) -> InequalityReport:
    """``pi(A) E_nu[tau_A] <= (1 - pi(A)) E_mu[tau_C]``."""
    e_mu, e_nu = cycle_terms(chain, decomp)
    pa = decomp.a_set.measure
    return report("dist", pa * e_nu, (1 - pa) * e_mu,
                  f"A={_fmt(chain, decomp.a_set)}, C={_fmt(chain, decomp.c_set)}")


def check_dist_chain(chain: Chain, decomp: AuxiliaryDecomposition) -> list[InequalityReport]:
    """``pi(A) <= E_mu[tau_C] / (E_mu[tau_C] + E_nu[tau_A]) <= d+(A,C) / (d+(A,C) + d-(C,A))``."""
    e_mu, e_nu = cycle_terms(chain, decomp)
    a, c = decomp.a_set, decomp.c_set
    dp = float(hitting_times_array(chain, c)[list(a.states)].max())
    dm = float(hitting_times_array(chain, a)[list(c.states)].min())
    mid = e_mu / (e_mu + e_nu)
    where = f"A={_fmt(chain, a)}, C={_fmt(chain, c)}"
    return [report("dist_ratio", a.measure, mid, where),
            report("dist_to_distance_ratio", mid, dp / (dp + dm), where)]


def check_occupation_identity(chain: Chain, decomp: AuxiliaryDecomposition,
                              s_set) -> InequalityReport:
    """Expected time in S during one A -> C -> A cycle from mu equals ``pi(S) E_mu[tau]``.

    Reported as an equality: ``holds`` iff the gap is at most
    ``1e-7 * (1 + pi(S) E_mu[tau])``.
    """
    s = chain.as_set(s_set)
    e_mu, e_nu = cycle_terms(chain, decomp)
    occ = (expected_occupation(chain, decomp.c_set, s, decomp.mu)
           + expected_occupation(chain, decomp.a_set, s, decomp.nu))
    target = s.measure * (e_mu + e_nu)
    ok = abs(occ - target) <= OCCUPATION_TOL * (1 + target)
    where = (f"A={_fmt(chain, decomp.a_set)}, C={_fmt(chain, decomp.c_set)}, "
             f"S={_fmt(chain, s)}")
    return InequalityReport("occupation_identity", occ, target, target - occ, bool(ok),
                            None if ok else where)


def check_lemma_4_2(chain: Chain, a, b, c, t_scale: float) -> InequalityReport:
    """If ``d+(O,B) <= T``, ``d+(O,A|C) <= T``, ``d+(O,A) <= 99.9T`` and
    ``d-(B,A) >= 98.9T`` then ``d+(B,C) < 14T``."""
    a = nonempty(chain.as_set(a), "A")
    b = nonempty(chain.as_set(b), "B")
    c = nonempty(chain.as_set(c), "C")
    T = float(t_scale)
    ac = chain.from_mask(a.mask | c.mask)
    h = lambda s: hitting_times_array(chain, s)  # noqa: E731
    hyp = {
        "d+(Omega,B) <= T": h(b).max() <= T,
        "d+(Omega,A|C) <= T": h(ac).max() <= T,
        "d+(Omega,A) <= 99.9T": h(a).max() <= 99.9 * T,
        "d-(B,A) >= 98.9T": h(a)[list(b.states)].min() >= 98.9 * T,
    }
    failed = [k for k, ok in hyp.items() if not ok]
    if failed:
        return not_applicable("far_set_bound", "hypotheses fail: " + "; ".join(failed))
    lhs = float(h(c)[list(b.states)].max())
    holds = lhs < 14 * T
    where = f"A={_fmt(chain, a)}, B={_fmt(chain, b)}, C={_fmt(chain, c)}, T={T!r}"
    return InequalityReport("far_set_bound", lhs, 14 * T, 14 * T - lhs, holds, None if holds else where)


def check_prop_4_1(chain: Chain, profile: HittingProfile | None = None) -> InequalityReport:
    """If ``T(0.01) = 99.9 T(0.02)`` (relative 1e-6) then ``T(0.99) >= 0.1 T(0.02)``."""
    if profile is None:
        profile = t_profile(chain)
    t1, t2, t99 = profile(0.01), profile(0.02), profile(0.99)
    if abs(t1 - 99.9 * t2) > PROP41_TOL * t2:
        ratio = t1 / t2 if t2 > 0 else float("inf")
        return not_applicable("tail_bound", f"T(0.01)/T(0.02) = {ratio!r}, not 99.9")
    return report("tail_bound", 0.1 * t2, t99, "T(0.99) < 0.1 T(0.02)")


def check_tprod_sandwich(chain: Chain) -> list[InequalityReport]:
    """``T(1/2)/2 <= t_prod <= T(1/2)``."""
    half = t_alpha(chain, 0.5).value
    tp = t_prod(chain)
    return [report("tprod_lower", half / 2, tp), report("tprod_upper", tp, half)]


STAR_GRID = tuple(round(0.05 * i, 2) for i in range(1, 11))


def far_set_search(chain: Chain, rng: np.random.Generator,
                     trials: int = 200) -> list[InequalityReport]:
    """Random (A, B, C) triples, each tried at the smallest T meeting the first
    two hypotheses. Best effort: most triples come back not applicable."""
    out = []
    full = (1 << chain.n) - 1
    for _ in range(trials):
        a, b, c = (int(x) for x in rng.integers(1, full + 1, size=3))
        t = max(hitting_times_array(chain, chain.from_mask(b)).max(),
                hitting_times_array(chain, chain.from_mask(a | c)).max())
        if t > 0:
            out.append(check_lemma_4_2(chain, chain.from_mask(a), chain.from_mask(b),
                                       chain.from_mask(c), t))
    return out


def all_checks(chain: Chain, rng: np.random.Generator | None = None,
               far_set_trials: int = 200) -> list[InequalityReport]:
    """Every check on one chain: the T-bound over a 10x10 grid, the ratio bound
    over all ordered set pairs, the cycle inequality and occupation identity
    over all disjoint pairs, the t_prod sandwich, random triples for the far-set bound and the
    T(0.99) consequence."""
    rng = rng if rng is not None else np.random.default_rng(0)
    prof = t_profile(chain)
    out = []
    for a in STAR_GRID:
        for b in STAR_GRID:
            if a < b:
                out += check_star(chain, a, b, prof)
    full = (1 << chain.n) - 1
    sets = [chain.from_mask(m) for m in range(1, full + 1)]
    for a in sets:
        for c in sets:
            out.append(check_ratio_bound(chain, a, c))
            if a.mask & c.mask:
                continue
            d = auxiliary_decomposition(chain, a, c)
            out.append(check_dist_inequality(chain, d))
            out += check_dist_chain(chain, d)
            for s in (a, c, chain.full):
                out.append(check_occupation_identity(chain, d, s))
    out += check_tprod_sandwich(chain)
    out += far_set_search(chain, rng, far_set_trials)
    out.append(check_prop_4_1(chain, prof))
    return out

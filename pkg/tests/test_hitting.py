import itertools

import numpy as np
import pytest

from hitset import Chain, d_minus, d_plus, expected_hitting_times, expected_occupation, hitting_distribution
from hitset.errors import EmptyTarget

from oracles import cycle_walk, hitting_times_inverse, random_stochastic


def test_full_target_is_zero(tight):
    assert np.array_equal(expected_hitting_times(tight, [0, 1, 2]).h, np.zeros(3))


def test_geometric_two_state(sym2):
    assert expected_hitting_times(sym2, [1]).h[0] == pytest.approx(2.0)


def test_cycle_closed_form():
    c = Chain(cycle_walk(6))
    h = expected_hitting_times(c, [3]).h
    for x in range(6):
        d = min(abs(x - 3), 6 - abs(x - 3))
        assert h[x] == pytest.approx(d * (6 - d), rel=1e-12)
    assert h[0] == pytest.approx(9.0, rel=1e-12)


def test_empty_target(sym2):
    with pytest.raises(EmptyTarget):
        expected_hitting_times(sym2, [])


def test_hitting_equations_residual(rng):
    for _ in range(200):
        n = int(rng.integers(2, 9))
        c = Chain(random_stochastic(rng, n))
        target = [x for x in range(n) if rng.random() < 0.4] or [0]
        h = expected_hitting_times(c, target).h
        assert np.all(h >= 0) and np.all(h[target] == 0)
        off = [x for x in range(n) if x not in target]
        resid = np.abs(h[off] - 1 - c.p[off] @ h)
        assert resid.max(initial=0) <= 1e-8 * (1 + h.max())
        assert np.allclose(h, hitting_times_inverse(c.p, set(target)), rtol=1e-10)


def test_d_plus_d_minus(sym2, tight):
    assert d_plus(sym2, [0], [0, 1]) == 0
    assert d_plus(sym2, [0], [1]) == pytest.approx(2)
    assert d_minus(sym2, [0], [1]) == pytest.approx(2)
    assert d_minus(sym2, [0, 1], [1]) == 0
    assert d_plus(tight, ["v1"], ["v3"]) == pytest.approx(4.0, rel=1e-12)


def test_d_minus_matches_per_state_solves(rng):
    c = Chain(random_stochastic(rng, 5))
    a, b = [0, 3], [1, 4]
    per_state = [hitting_times_inverse(c.p, set(b))[x] for x in a]
    assert d_minus(c, a, b) == pytest.approx(min(per_state), rel=1e-12)
    assert d_plus(c, a, b) == pytest.approx(max(per_state), rel=1e-12)


def test_monotone_in_target(rng):
    for _ in range(10):
        n = int(rng.integers(2, 7))
        c = Chain(random_stochastic(rng, n))
        masks = range(1, 1 << n)
        h = {m: expected_hitting_times(c, c.from_mask(m)).h for m in masks}
        for small, big in itertools.product(masks, masks):
            if small & big == small:
                assert np.all(h[big] <= h[small] + 1e-9 * (1 + h[small]))


def test_triangle_route(rng):
    for _ in range(20):
        n = int(rng.integers(2, 7))
        c = Chain(random_stochastic(rng, n))
        sets = [c.from_mask(m) for m in range(1, 1 << n)]
        for a in sets:
            ha = expected_hitting_times(c, a).h
            for b in sets:
                route = d_plus(c, b, a)
                for x in range(n):
                    assert ha[x] <= d_plus(c, [x], b) + route + 1e-9 * (1 + ha[x])


def test_hitting_distribution_singleton_and_full(tight):
    m = hitting_distribution(tight, [1]).matrix
    assert np.allclose(m, 1.0)
    full = hitting_distribution(tight, [0, 1, 2])
    assert np.allclose(full.matrix, np.eye(3))


def test_hitting_distribution_gamblers_ruin():
    c = Chain(cycle_walk(6))
    hd = hitting_distribution(c, [0, 3])
    assert hd.states == (0, 3)
    # gambler's ruin: distance j from 0 and 3 - j from 3 gives P(hit 3 first) = j / 3
    expected = {1: 1 / 3, 2: 2 / 3, 4: 2 / 3, 5: 1 / 3}
    for x, prob_3 in expected.items():
        assert hd.matrix[x, 1] == pytest.approx(prob_3, abs=1e-12)
        assert hd.matrix[x].sum() == pytest.approx(1.0, abs=1e-12)


def test_hitting_distribution_rows_random(rng):
    for _ in range(50):
        n = int(rng.integers(2, 8))
        c = Chain(random_stochastic(rng, n))
        target = sorted(set(rng.integers(0, n, size=2).tolist()))
        m = hitting_distribution(c, target).matrix
        assert np.allclose(m.sum(axis=1), 1.0, atol=1e-10)
        assert np.all(m >= -1e-15)


def test_occupation_examples(sym2):
    assert expected_occupation(sym2, [1], [1], [1.0, 0.0]) == 0.0
    assert expected_occupation(sym2, [1], [0], [1.0, 0.0]) == pytest.approx(2.0)


def test_occupation_consistency(rng):
    for _ in range(100):
        n = int(rng.integers(2, 8))
        c = Chain(random_stochastic(rng, n))
        avoid = c.from_mask(int(rng.integers(1, 1 << n)))
        start = rng.dirichlet(np.ones(n))
        occ = expected_occupation(c, avoid, c.complement(avoid), start)
        exact = start @ expected_hitting_times(c, avoid).h
        assert occ == pytest.approx(exact, rel=1e-8, abs=1e-12)


def test_occupation_matches_explicit_fundamental_matrix(rng):
    c = Chain(random_stochastic(rng, 6))
    out = [1, 2, 4, 5]
    g = np.linalg.inv(np.eye(4) - c.p[np.ix_(out, out)])
    start = np.array([0.1, 0.2, 0.3, 0.0, 0.2, 0.2])
    count = [2, 3, 5]
    expected = start[out] @ g @ np.array([0, 1, 0, 1.0])
    assert expected_occupation(c, [0, 3], count, start) == pytest.approx(expected, rel=1e-12)

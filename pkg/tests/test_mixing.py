import numpy as np
import pytest

from hitset import Chain, NotReached, cesaro_mixing_time, mixing_time, tv_distance
from hitset.errors import LengthMismatch, ParameterOutOfRange
from hitset.mixing import mixing_report
from hitset.samplers import random_chain

from oracles import tces_by_power_sums, tmix_by_matrix_power, tv_brute


def lazy_cycle(n):
    p = np.eye(n) / 2
    for x in range(n):
        p[x, (x + 1) % n] += 0.25
        p[x, (x - 1) % n] += 0.25
    return Chain(p)


def test_tv_examples():
    assert tv_distance([0.2, 0.8], [0.2, 0.8]) == 0
    assert tv_distance([1, 0, 0], [0, 0, 1]) == 1
    assert tv_distance([0.75, 0.25], [0.5, 0.5]) == pytest.approx(0.25, abs=1e-15)
    with pytest.raises(LengthMismatch):
        tv_distance([0.5, 0.5], [1, 0, 0])


def test_tv_matches_subset_maximum(rng):
    for _ in range(100):
        n = int(rng.integers(1, 11))
        mu, nu = rng.dirichlet(np.ones(n)), rng.dirichlet(np.ones(n))
        assert tv_distance(mu, nu) == pytest.approx(tv_brute(mu, nu), abs=1e-14)


def test_symmetric_two_state(sym2):
    assert mixing_time(sym2) == 1
    assert cesaro_mixing_time(sym2) == 2


def test_already_mixed():
    # P^0 is the identity, so t = 0 never qualifies; one step lands on pi.
    # The averaged kernel is (I + (t - 1) Pi) / t with row distance (1 - pi_x) / t.
    c = Chain(np.tile([0.2, 0.3, 0.5], (3, 1)))
    assert mixing_time(c) == 1
    assert cesaro_mixing_time(c) == tces_by_power_sums(c.p, c.pi) == 4


def test_lazy_four_cycle():
    c = lazy_cycle(4)
    assert mixing_time(c) == tmix_by_matrix_power(c.p, c.pi) == 1
    assert cesaro_mixing_time(c) == tces_by_power_sums(c.p, c.pi) == 5


def test_random_against_oracles(rng):
    for _ in range(10):
        c = random_chain(5, rng)
        assert mixing_time(c) == tmix_by_matrix_power(c.p, c.pi)
        assert cesaro_mixing_time(c) == tces_by_power_sums(c.p, c.pi)


def test_report_threshold_property(rng):
    for _ in range(10):
        rep = mixing_report(lazy_cycle(int(rng.integers(3, 9))), cap=1000)
        table = dict(rep.worst_tv_at_t)
        assert table[rep.t_mix] <= 0.25
        if rep.t_mix > 0:
            assert table[rep.t_mix - 1] > 0.25
        vals = [v for _, v in rep.worst_tv_at_t]
        assert all(vals[i + 1] <= vals[i] + 1e-12 for i in range(len(vals) - 1))


def test_not_reached():
    c = Chain([[0.999, 0.001], [0.001, 0.999]])
    t = mixing_time(c, cap=10)
    assert t == NotReached(10)
    assert t.to_json() == {"not_reached": 10}
    assert isinstance(cesaro_mixing_time(c, cap=10), NotReached)
    assert mixing_report(c, cap=10).to_dict()["t_mix"] == {"not_reached": 10}


def test_bad_cap(sym2):
    with pytest.raises(ParameterOutOfRange):
        mixing_time(sym2, cap=0)

import numpy as np
import pytest

from hitset import Chain, t_alpha, t_prod, t_profile, two_state_counterexample
from hitset.errors import ParameterOutOfRange, StateCountCap
from hitset.samplers import random_chain, random_lazy_chain

from oracles import brute_T, brute_tprod

GRID = np.linspace(0.01, 0.99, 99)


def test_tight_values(tight):
    assert t_alpha(tight, 0.25).value == pytest.approx(4.0, rel=1e-12)
    assert t_alpha(tight, 0.4).value == pytest.approx(1.0, rel=1e-12)


def test_witness_fields(tight):
    w = t_alpha(tight, 0.25)
    assert w.set.states == (2,)
    assert w.start == 0
    assert w.set.measure >= 0.25 - 1e-12


def test_two_state_values():
    c = two_state_counterexample(0.6, 1000)
    assert t_alpha(c, 0.7).value == 0.0
    assert t_alpha(c, 0.5).value == pytest.approx(400.0, rel=1e-9)


def test_symmetric_two_state(sym2):
    assert t_alpha(sym2, 0.5).value == pytest.approx(2.0)
    prof = t_profile(sym2)
    assert [m for m, _ in prof.breakpoints] == [0.5, 1.0]
    assert [v for _, v in prof.breakpoints] == pytest.approx([2.0, 0.0])
    assert t_prod(sym2) == pytest.approx(1.0)


# T for the three-state chain, from the brute-force oracle on each interval
TIGHT_PIECES = [((0.0, 0.05), 20.0), ((0.05, 0.25), 4.0), ((0.25, 0.30), 7 / 3),
                ((0.30, 0.95), 1.0), ((0.95, 1.0), 0.0)]


def test_tight_profile(tight):
    prof = t_profile(tight)
    for (lo, hi), value in TIGHT_PIECES:
        for a in np.linspace(lo, hi, 7)[1:]:
            if 0 < a < 1:
                assert prof(a) == pytest.approx(value, rel=1e-12)
                assert prof(a) == pytest.approx(brute_T(tight.p, tight.pi, a), rel=1e-12)


def test_profile_shape(rng):
    for _ in range(20):
        c = random_chain(int(rng.integers(2, 8)), rng)
        bp = t_profile(c).breakpoints
        m = [x for x, _ in bp]
        v = [y for _, y in bp]
        assert m == sorted(m) and len(set(m)) == len(m)
        assert all(v[i] >= v[i + 1] for i in range(len(v) - 1))
        assert bp[-1] == (1.0, 0.0)


def test_profile_matches_point_queries(rng):
    for _ in range(15):
        c = random_chain(int(rng.integers(2, 8)), rng)
        prof = t_profile(c)
        for a in GRID:
            assert prof(a) == t_alpha(c, a).value


def test_profile_random_six_against_oracle(rng):
    c = random_chain(6, rng)
    prof = t_profile(c)
    for a in GRID:
        assert prof(a) == pytest.approx(brute_T(c.p, c.pi, a), rel=1e-10)


def test_monotone_in_alpha(rng):
    for _ in range(10):
        c = random_chain(int(rng.integers(2, 8)), rng)
        vals = [t_alpha(c, a).value for a in GRID]
        assert all(vals[i] >= vals[i + 1] for i in range(len(vals) - 1))


def test_pruning_is_lossless(rng):
    for _ in range(15):
        c = random_chain(int(rng.integers(2, 7)), rng)
        for a in np.linspace(0.02, 0.98, 25):
            assert t_alpha(c, a).value == t_alpha(c, a, prune=False).value


def test_tie_break_prefers_smaller_mask(sym2):
    w = t_alpha(sym2, 0.5)
    assert w.set.mask == 1 and w.start == 1


def test_tprod_tight(tight):
    # oracle over the 6 proper subsets: {v1} and {v3} both give 1
    assert t_prod(tight) == pytest.approx(brute_tprod(tight.p, tight.pi), rel=1e-12)
    assert t_prod(tight) == pytest.approx(1.0, rel=1e-12)


def test_tprod_sandwich_lazy(rng):
    for _ in range(30):
        c = random_lazy_chain(int(rng.integers(2, 7)), rng)
        half = t_alpha(c, 0.5).value
        tp = t_prod(c)
        assert half / 2 <= tp * (1 + 1e-12)
        assert tp <= half * (1 + 1e-12)
        assert tp == pytest.approx(brute_tprod(c.p, c.pi), rel=1e-10)


def test_errors(sym2):
    with pytest.raises(ParameterOutOfRange):
        t_alpha(sym2, 0.0)
    with pytest.raises(ParameterOutOfRange):
        t_alpha(sym2, 1.0)
    big = Chain(np.full((25, 25), 1 / 25))
    with pytest.raises(StateCountCap):
        t_alpha(big, 0.5)
    with pytest.raises(StateCountCap):
        t_profile(big)


def test_csv_export(sym2):
    text = t_profile(sym2).to_csv()
    assert text.splitlines() == ["alpha_threshold,value", "0.5,2", "1,0"]

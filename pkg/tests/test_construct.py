from itertools import product

import numpy as np
import pytest
from hypothesis import HealthCheck, given, settings, strategies as st

from nec import generators
from nec.analysis import min_distance
from nec.construct import Construction, auto_field, construct_code
from nec.errors import BadParams, FieldTooSmall, RateTooHigh
from nec.galois import Field
from nec.kernels import transfer_matrix_kernels
from nec.netgraph import min_cut_capacity

from conftest import brute_min_distance, small_networks


def test_g1_reproduces_worked_kernels(g1, f3):
    code = construct_code(g1, 1, 1, f3, check_invariants=True)
    got = {k: v.tolist() for k, v in code.extended.items()}
    assert got == {"e1": [1, 1, 0, 0], "e2": [1, 0, 1, 0], "e3": [1, 1, 0, 1]}
    assert code.is_regular()
    assert min_distance(code, "t") == 2


def test_auto_field(g1):
    assert auto_field(g1, 1, 1).q == 3
    assert auto_field(generators.combination(6, 4), 2, 2).q == 367


def test_rate_checks(g1):
    with pytest.raises(RateTooHigh):
        construct_code(g1, 3, 0)
    with pytest.raises(RateTooHigh):
        construct_code(g1, 0, 0)
    with pytest.raises(BadParams):
        construct_code(g1, 1, 2)


def test_field_too_small(g2):
    with pytest.raises(FieldTooSmall):
        construct_code(g2, 1, "max", Field(3))


def test_stepwise_invariant(g3):
    con = Construction(g3, 2, "max", Field(13))
    assert con.verify_cut_invariant()
    for ch in g3.channels:
        con.step(ch.id)
        assert con.verify_cut_invariant()
    code = con.code()
    assert all(v[2 + g3.channel_index[c]] in (0, 1) for c, v in code.extended.items())


def _beta_assignments(net, w):
    deltas = [min_cut_capacity(net, net.source, t) - w for t in net.sinks]
    if len(net.sinks) > 3:
        return [{t: b for t in net.sinks} for b in range(min(deltas) + 1)] + ["max"]
    return [dict(zip(net.sinks, combo)) for combo in product(*[range(d + 1) for d in deltas])]


@pytest.mark.parametrize("name", sorted(small_networks()))
def test_guarantee_with_auto_field(name):
    net = small_networks()[name]
    c_min = min(min_cut_capacity(net, net.source, t) for t in net.sinks)
    for w in range(1, c_min + 1):
        for betas in _beta_assignments(net, w):
            code = construct_code(net, w, betas, "auto", check_invariants=True)
            assert code.is_regular()
            for t in net.sinks:
                beta = (min_cut_capacity(net, net.source, t) - w) if betas == "max" else betas[t]
                assert min_distance(code, t) >= beta + 1
            tm = transfer_matrix_kernels(net, w, code.local, code.field)
            assert all(np.array_equal(tm[c], code.extended[c]) for c in net.channel_ids)


def test_min_distance_matches_brute_force_on_constructed():
    net = generators.combination(4, 3)
    code = construct_code(net, 1, "max", Field(5))
    for t in net.sinks:
        assert min_distance(code, t) == brute_min_distance(code, t) == 3


@settings(max_examples=25, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(st.integers(0, 2**32 - 1))
def test_random_networks(seed):
    net = generators.random_network(np.random.default_rng(seed), 3, 2, 10)
    caps = [min_cut_capacity(net, net.source, t) for t in net.sinks]
    if min(caps) == 0:
        with pytest.raises(RateTooHigh):
            construct_code(net, 1, 0)
        return
    code = construct_code(net, 1, "max", "auto", check_invariants=True)
    for t, c in zip(net.sinks, caps):
        assert min_distance(code, t) == c


def test_deterministic(g3):
    a = construct_code(g3, 2, "max", Field(13))
    b = construct_code(g3, 2, "max", Field(13))
    assert a.local == b.local

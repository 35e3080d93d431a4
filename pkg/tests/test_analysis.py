import numpy as np
import pytest

from nec import generators
from nec.analysis import (code_report, dominates, error_space, intersects, message_space,
                          min_distance, prop2_consistency, prop2_minima, reports_to_json,
                          reports_to_text, sink_report)
from nec.construct import Code, construct_code
from nec.errors import NotRegular
from nec.galois import Field, Subspace
from nec.kernels import LocalKernels
from nec.netgraph import min_cut_channels, min_cut_capacity
from nec.randomcode import random_code

from conftest import all_local_kernels, brute_min_distance, small_networks


def test_decoding_matrix(g1_code):
    assert g1_code.decoding_matrix("t").tolist() == [[1, 1], [0, 1], [1, 0], [0, 1]]


def test_spaces(g1_code, f3):
    assert message_space(g1_code, "t") == Subspace.span([[1, 1]], f3)
    assert error_space(g1_code, "t", ["e2"]) == Subspace.span([[1, 0]], f3)
    assert error_space(g1_code, "t", []).dim == 0
    assert error_space(g1_code, "t", ["e1", "e2", "e3"]).dim == 2
    for rho in (["e1"], ["e2"], ["e3"]):
        assert not intersects(g1_code, "t", rho)


def test_dominates(g1_code):
    assert dominates(g1_code, "t", ["e1"], ["e2", "e3"])
    assert dominates(g1_code, "t", [], ["e1"])
    assert dominates(g1_code, "t", ["e2"], ["e2", "e3"])
    assert not dominates(g1_code, "t", ["e2"], ["e3"])


def test_g1_report(g1_code):
    r = sink_report(g1_code, "t")
    assert (r.C_t, r.delta_t, r.regular, r.d_min, r.singleton_slack, r.is_mds) == (
        2, 1, True, 2, 0, True)
    assert prop2_minima(g1_code, "t") == (2, 2, 2)
    assert '"is_mds": true' in reports_to_json([r])
    assert reports_to_text([r]).splitlines()[1].split() == ["t", "2", "1", "yes", "2", "0", "yes"]


def test_all_zero_code(g1, f3):
    code = Code.from_local(g1, 1, LocalKernels.zeros(g1, 1), f3)
    assert message_space(code, "t").dim == 0
    r = sink_report(code, "t")
    assert not r.regular and r.d_min is None and not r.is_mds
    with pytest.raises(NotRegular):
        min_distance(code, "t")
    with pytest.raises(NotRegular):
        prop2_consistency(code, "t")


def test_zero_redundancy():
    net = generators.combination(3, 2)
    code = construct_code(net, 2, 0, "auto")
    for t in net.sinks:
        assert min_distance(code, t) == 1
        assert prop2_minima(code, t) == (1, 1, 1)


def test_exhaustive_g1_over_f2(g1):
    """Every code on G1 over F_2: d_min and the three distance minima against the brute-force oracle."""
    f = Field(2)
    seen_regular = seen_irregular = 0
    for lk in all_local_kernels(g1, 1, f):
        code = Code.from_local(g1, 1, lk, f)
        if code.is_regular():
            seen_regular += 1
            d = min_distance(code, "t")
            assert d == brute_min_distance(code, "t") <= 2
            assert prop2_consistency(code, "t")
        else:
            seen_irregular += 1
    # irregular iff k(d',e2) = 0 and k(d',e1) k(e1,e3) = 0
    assert seen_regular == 5 and seen_irregular == 3


@pytest.mark.parametrize("name", ["comb32", "comb42", "g2"])
def test_random_codes_against_oracle(name):
    net = small_networks()[name]
    f = Field(3)
    for trial in range(15):
        code = random_code(net, 1, f, seed=11, trial=trial)
        for t in net.sinks:
            if code.message_rank(t) < 1:
                continue
            d = min_distance(code, t)
            assert d == brute_min_distance(code, t)
            assert d <= min_cut_capacity(net, net.source, t)
            assert prop2_consistency(code, t)


@pytest.mark.parametrize("name", ["g1", "g2", "comb32", "comb42", "comb43"])
def test_min_cut_witness(name):
    """On a min cut in order, the tail pattern from position w meets the message space."""
    net = small_networks()[name]
    w = 1
    for trial in range(10):
        code = random_code(net, w, Field(5), seed=3, trial=trial)
        for t in net.sinks:
            if code.message_rank(t) < w:
                continue
            cut = min_cut_channels(net, net.source, t)
            assert intersects(code, t, cut[w - 1:])


def test_constructed_slack():
    net = generators.combination(4, 3)
    code = construct_code(net, 1, 1, Field(5))
    for r in code_report(code):
        assert r.singleton_slack <= r.delta_t - 1

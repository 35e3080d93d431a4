from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from nec import generators
from nec.errors import Exhausted, IncompleteKernels
from nec.galois import Field, Subspace
from nec.kernels import (LocalKernels, adjacent_pairs, index_legend, pick_avoiding, propagate,
                         rank_of, restrict, transfer_matrix_kernels)
from nec.netgraph import Channel, MessageChannel, Network

from conftest import small_networks

D1 = MessageChannel(1)


def g1_local(f3, g1):
    return LocalKernels(g1, 1, {(D1, "e1"): 1, (D1, "e2"): 1, ("e1", "e3"): 1}, f3)


def test_legend(g1):
    assert index_legend(g1, 1) == ["d'1", "e1", "e2", "e3"]
    assert adjacent_pairs(g1, 1) == [(D1, "e1"), (D1, "e2"), ("e1", "e3")]


def test_g1_kernels_both_routes(g1, f3):
    lk = g1_local(f3, g1)
    want = {"e1": [1, 1, 0, 0], "e2": [1, 0, 1, 0], "e3": [1, 1, 0, 1]}
    for route in (propagate, transfer_matrix_kernels):
        got = route(g1, 1, lk, f3)
        assert {k: v.tolist() for k, v in got.items()} == want


def test_zero_coefficients_give_indicators(g2):
    f = Field(5)
    kern = propagate(g2, 2, LocalKernels.zeros(g2, 2), f)
    for i, cid in enumerate(g2.channel_ids):
        assert kern[cid].tolist() == f.unit(2 + 8, 2 + i).tolist()


def test_single_channel_step():
    net = Network(["s", "t"], "s", ["t"], [Channel("e", "s", "t")])
    f = Field(7)
    kern = propagate(net, 1, LocalKernels(net, 1, {(D1, "e"): 4}, f), f)
    assert kern["e"].tolist() == [4, 1]


def test_incomplete_kernels(g1, f3):
    with pytest.raises(IncompleteKernels):
        propagate(g1, 1, LocalKernels(g1, 1, {(D1, "e1"): 1}, f3), f3)
    with pytest.raises(IncompleteKernels):
        LocalKernels.from_sequence(g1, 1, [1, 1], f3)


def test_nested_round_trip(g3):
    f = Field(5)
    lk = LocalKernels.from_sequence(g3, 2, list(range(len(adjacent_pairs(g3, 2)))), f)
    assert LocalKernels.from_nested(g3, 2, lk.to_nested(), f) == lk


@settings(max_examples=50, deadline=None)
@given(st.sampled_from(sorted(small_networks())), st.sampled_from([2, 3, 5, 7, 101]),
       st.integers(0, 2**32 - 1))
def test_two_routes_agree(name, q, seed):
    net = small_networks()[name]
    f = Field(q)
    w = 1
    vals = np.random.default_rng(seed).integers(0, q, size=len(adjacent_pairs(net, w)))
    lk = LocalKernels.from_sequence(net, w, vals.tolist(), f)
    a, b = propagate(net, w, lk, f), transfer_matrix_kernels(net, w, lk, f)
    for cid in net.channel_ids:
        assert np.array_equal(a[cid], b[cid])
        up = net.upstream(cid)
        for d in net.channel_ids:
            if d not in up and d != cid:
                assert a[cid][w + net.channel_index[d]] == 0
        assert a[cid][w + net.channel_index[cid]] == 1


def test_restrict_modes(g1):
    f_e3 = np.array([1, 1, 0, 1])
    assert restrict(f_e3, g1, 1, ["e3"]).tolist() == [1, 1]
    assert restrict(f_e3, g1, 1, []).tolist() == [1]
    assert restrict(f_e3, g1, 1, g1.channel_ids, "zeroed").tolist() == [1, 1, 0, 1]
    for rho in ([], ["e1"], ["e1", "e3"]):
        z = restrict(f_e3, g1, 1, rho, "zeroed") + restrict(f_e3, g1, 1, rho, "complement")
        assert z.tolist() == f_e3.tolist()
    with pytest.raises(ValueError):
        restrict(f_e3, g1, 1, [], "bogus")


def test_rank_of(f3):
    assert rank_of([], f3) == 0
    v = np.array([1, 2, 0])
    assert rank_of([v, 2 * v], f3) == 1
    assert rank_of(list(np.eye(4, dtype=np.int64)), f3) == 4


def test_pick_avoiding_examples(f3):
    amb = Subspace.span([[1, 0], [0, 1]], f3)
    vec, _ = pick_avoiding(amb, [Subspace.span([[1, 0]], f3)], f3)
    assert vec.tolist() == [0, 1]
    with pytest.raises(Exhausted):
        pick_avoiding(Subspace.span([[1, 1]], f3), [Subspace.span([[1, 1]], f3)], f3)
    lines = [Subspace.span([v], f3) for v in ([1, 0], [0, 1], [1, 1])]
    vec, _ = pick_avoiding(amb, lines, f3)
    assert vec.tolist() == [1, 2]
    with pytest.raises(Exhausted):
        pick_avoiding(amb, lines + [Subspace.span([[1, 2]], f3)], f3)


def _lex_first(basis, forbidden, q):
    for coeffs in product(range(q), repeat=len(basis)):
        if not any(coeffs):
            continue
        v = np.array(coeffs) @ np.array(basis) % q
        if not any(v in sub for sub in forbidden):
            return v
    return None


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([2, 3, 5]), st.integers(1, 3), st.integers(0, 3),
       st.integers(0, 2**32 - 1))
def test_pick_avoiding_matches_lexicographic_search(q, k, n_forb, seed):
    f = Field(q)
    rng = np.random.default_rng(seed)
    n = 4
    basis = Subspace.span(list(rng.integers(0, q, size=(k, n))), f).basis
    if basis.shape[0] == 0:
        return
    forbidden = [Subspace.span(list(rng.integers(0, q, size=(int(rng.integers(1, 3)), n))), f)
                 for _ in range(n_forb)]
    want = _lex_first(list(basis), forbidden, q)
    if want is None:
        with pytest.raises(Exhausted):
            pick_avoiding(list(basis), forbidden, f)
    else:
        got, coeffs = pick_avoiding(list(basis), forbidden, f)
        assert got.tolist() == want.tolist()
        assert np.array_equal(f.matmul(coeffs[None, :], basis)[0], got)

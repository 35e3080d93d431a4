from itertools import product

import networkx as nx
import numpy as np
import pytest

from nec import generators
from nec.construct import construct_code
from nec.galois import Field
from nec.kernels import LocalKernels


@pytest.fixture
def g1():
    return generators.g1()


@pytest.fixture
def g2():
    return generators.g2()


@pytest.fixture
def g3():
    return generators.g3()


@pytest.fixture
def f3():
    return Field(3)


@pytest.fixture
def g1_code(g1, f3):
    """The worked G1 code over F_3 (kernels (1,1,0,0), (1,0,1,0), (1,1,0,1))."""
    return construct_code(g1, 1, 1, f3)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def small_networks():
    """Desk-scale networks used across the property suites."""
    return {
        "g1": generators.g1(),
        "g2": generators.g2(),
        "g3": generators.g3(),
        "comb32": generators.combination(3, 2),
        "comb42": generators.combination(4, 2),
        "comb43": generators.combination(4, 3),
    }


def all_local_kernels(net, w, field):
    """Every local-kernel assignment (only for tiny networks)."""
    template = LocalKernels.zeros(net, w)
    n = len(template.as_sequence())
    for values in product(range(field.q), repeat=n):
        yield LocalKernels.from_sequence(net, w, list(values), field)


def brute_rank(rows, q):
    """Rank by counting the distinct vectors of the row space."""
    rows = np.asarray(rows, dtype=np.int64)
    if rows.size == 0:
        return 0
    seen = {tuple(np.asarray(c) @ rows % q) for c in product(range(q), repeat=rows.shape[0])}
    size, r = len(seen), 0
    while q**r < size:
        r += 1
    return r


def nx_flow_graph(net, rho=(), t=None):
    """Capacitated digraph of the network with ``rho`` rerouted to an aux source."""
    g = nx.DiGraph()
    members = set(rho)
    for ch in net.channels:
        tail = "__aux__" if ch.id in members else ch.tail
        cap = g.edges[tail, ch.head]["capacity"] + 1 if g.has_edge(tail, ch.head) else 1
        g.add_edge(tail, ch.head, capacity=cap)
    return g


def nx_min_cut(net, src, dst):
    g = nx_flow_graph(net)
    if src not in g or dst not in g:
        return 0
    return int(nx.maximum_flow_value(g, src, dst))


def nx_pattern_rank(net, rho, t):
    if not rho:
        return 0
    g = nx_flow_graph(net, rho)
    if t not in g:
        return 0
    return int(nx.maximum_flow_value(g, "__aux__", t))


def brute_min_distance(code, t):
    """Smallest error support meeting the message space, by enumerating all (X, Z_{E_t})."""
    from nec.netgraph import connective_set

    q, w = code.field.q, code.rate
    net = code.net
    e_t = connective_set(net, t)
    F = code.decoding_matrix(t)
    rows = F[list(range(w)) + [w + net.channel_index[e] for e in e_t]]
    best = None
    for v in product(range(q), repeat=rows.shape[0]):
        v = np.array(v, dtype=np.int64)
        if not v[:w].any() or (v @ rows % q).any():
            continue
        s = int(np.count_nonzero(v[w:]))
        best = s if best is None else min(best, s)
    return best


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def gate():
    """Record one PASS/FAIL line per acceptance criterion, then assert it."""
    def record(number, title, ok, detail=""):
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title}"
        if detail:
            line += f" ({detail})"
        ACCEPTANCE_LINES.append(line)
        print(line)
        assert ok, line
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)

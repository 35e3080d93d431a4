"""Network generators: combination networks, the small example networks, random DAGs."""

from __future__ import annotations

from itertools import combinations

import numpy as np

from .errors import BadParams
from .netgraph import Channel, Network


def combination(N: int, k: int) -> Network:
    """Combination network: ``N`` relays fed by ``s``; each ``k``-subset feeds one sink."""
    if not (isinstance(N, int) and isinstance(k, int)) or not N >= k >= 1:
        raise BadParams(f"combination network needs N >= k >= 1, got N={N}, k={k}")
    relays = [f"i{j}" for j in range(1, N + 1)]
    subsets = list(combinations(range(1, N + 1), k))
    sinks = ["t" + "_".join(map(str, sub)) for sub in subsets]
    channels = [Channel(f"s-{r}", "s", r) for r in relays]
    for t, sub in zip(sinks, subsets):
        channels += [Channel(f"i{j}-{t}", f"i{j}", t) for j in sub]
    return Network(["s", *relays, *sinks], "s", sinks, channels)


def g1() -> Network:
    """Three nodes ``s, i, t``: ``e1: s->i``, ``e2: s->t``, ``e3: i->t``."""
    return Network(["s", "i", "t"], "s", ["t"], [
        Channel("e1", "s", "i"), Channel("e2", "s", "t"), Channel("e3", "i", "t")])


def g2() -> Network:
    """Four parallel channels ``s->i`` followed by four parallel ``i->t``."""
    chans = [Channel(f"a{j}", "s", "i") for j in range(1, 5)]
    chans += [Channel(f"b{j}", "i", "t") for j in range(1, 5)]
    return Network(["s", "i", "t"], "s", ["t"], chans)


def g3() -> Network:
    """Four disjoint three-hop paths ``s -> u_j -> v_j -> t``."""
    us = [f"u{j}" for j in range(1, 5)]
    vs = [f"v{j}" for j in range(1, 5)]
    chans = [Channel(f"a{j}", "s", f"u{j}") for j in range(1, 5)]
    chans += [Channel(f"b{j}", f"u{j}", f"v{j}") for j in range(1, 5)]
    chans += [Channel(f"c{j}", f"v{j}", "t") for j in range(1, 5)]
    return Network(["s", *us, *vs, "t"], "s", ["t"], chans)


def generate(kind: str, N: int | None = None, k: int | None = None) -> Network:
    if kind == "combination":
        if N is None or k is None:
            raise BadParams("combination networks need N and k")
        return combination(N, k)
    table = {"g1": g1, "g2": g2, "g3": g3}
    if kind not in table:
        raise BadParams(f"unknown network kind {kind!r}")
    return table[kind]()


def random_network(rng: np.random.Generator, n_internal: int = 4, n_sinks: int = 2,
                   n_channels: int = 10) -> Network:
    """Random acyclic multigraph; every channel goes forward in a fixed node order.

    Sinks only receive and the source only sends.  Reachability of the sinks
    is not enforced.
    """
    internal = [f"v{j}" for j in range(n_internal)]
    sinks = [f"t{j}" for j in range(n_sinks)]
    order = ["s", *internal, *sinks]
    pos = {v: i for i, v in enumerate(order)}
    chans = []
    for c in range(n_channels):
        tail = order[int(rng.integers(0, 1 + n_internal))]
        heads = [v for v in order if pos[v] > pos[tail]]
        head = heads[int(rng.integers(0, len(heads)))]
        chans.append(Channel(f"c{c}", tail, head))
    return Network(order, "s", sinks, chans)

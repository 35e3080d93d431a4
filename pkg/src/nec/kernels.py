"""Extended global encoding kernels.

Every kernel is a vector of length ``w + |E|`` indexed by
``(d'_1, ..., d'_w, e_1, ..., e_|E|)`` with the real channels in canonical
order.  Kernels are produced either by the channel-by-channel recursion or
by the transfer-matrix inverse; the two routes must agree exactly.
"""

from __future__ import annotations

from itertools import product
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import Exhausted, IncompleteKernels
from .galois import Field, Subspace, inverse, rank
from .netgraph import ErrorChannel, MessageChannel, Network


def index_legend(net: Network, w: int) -> list[str]:
    return [str(MessageChannel(k)) for k in range(1, w + 1)] + list(net.channel_ids)


def coord(net: Network, w: int, token) -> int:
    """Coordinate of the indicator vector ``1_token``."""
    if isinstance(token, MessageChannel):
        return token.k - 1
    if isinstance(token, ErrorChannel):
        token = token.channel
    return w + net.channel_index[token]


def inputs(net: Network, w: int, node: str) -> tuple:
    """``In(node)``; for the source, the imaginary message channels."""
    if node == net.source:
        return tuple(MessageChannel(k) for k in range(1, w + 1))
    return net.in_channels[node]


def adjacent_pairs(net: Network, w: int) -> list[tuple]:
    """All ``(d, e)`` pairs that carry a local coefficient, in canonical order."""
    return [(d, ch.id) for ch in net.channels for d in inputs(net, w, ch.tail)]


class LocalKernels:
    """Local encoding coefficients ``k_{d,e}`` keyed by ``(d, e)``.

    ``d`` is a :class:`MessageChannel` for channels leaving the source and
    a channel id otherwise.
    """

    def __init__(self, net: Network, w: int, coeffs: Mapping[tuple, int] | None = None,
                 field: Field | None = None):
        self.net = net
        self.w = w
        self.coeffs: dict[tuple, int] = {}
        q = field.q if field is not None else None
        for key, value in (coeffs or {}).items():
            self.coeffs[key] = int(value) % q if q else int(value)

    @classmethod
    def zeros(cls, net: Network, w: int):
        return cls(net, w, {pair: 0 for pair in adjacent_pairs(net, w)})

    @classmethod
    def from_sequence(cls, net: Network, w: int, values: Sequence[int], field: Field):
        pairs = adjacent_pairs(net, w)
        if len(values) != len(pairs):
            raise IncompleteKernels(f"expected {len(pairs)} coefficients, got {len(values)}")
        return cls(net, w, dict(zip(pairs, values)), field)

    def __getitem__(self, pair) -> int:
        return self.coeffs[pair]

    def __setitem__(self, pair, value: int):
        self.coeffs[pair] = int(value)

    def missing(self) -> list[tuple]:
        return [p for p in adjacent_pairs(self.net, self.w) if p not in self.coeffs]

    def check_complete(self):
        missing = self.missing()
        if missing:
            d, e = missing[0]
            raise IncompleteKernels(
                f"{len(missing)} local coefficients missing, e.g. ({d}, {e})")
        valid = set(adjacent_pairs(self.net, self.w))
        extra = [p for p in self.coeffs if p not in valid]
        if extra:
            raise IncompleteKernels(f"coefficient for non-adjacent pair {extra[0]}")

    def as_sequence(self) -> list[int]:
        return [self.coeffs[p] for p in adjacent_pairs(self.net, self.w)]

    def to_nested(self) -> dict:
        """``node -> {in-channel label -> {out-channel -> residue}}``."""
        nested: dict[str, dict[str, dict[str, int]]] = {}
        for d, e in adjacent_pairs(self.net, self.w):
            node = self.net.channel(e).tail
            nested.setdefault(node, {}).setdefault(str(d), {})[e] = self.coeffs[(d, e)]
        return nested

    @classmethod
    def from_nested(cls, net: Network, w: int, nested: Mapping, field: Field):
        labels = {str(MessageChannel(k)): MessageChannel(k) for k in range(1, w + 1)}
        coeffs = {}
        for node, table in nested.items():
            for d_label, outs in table.items():
                d = labels.get(d_label, d_label)
                for e, value in outs.items():
                    coeffs[(d, e)] = value
        lk = cls(net, w, coeffs, field)
        lk.check_complete()
        return lk

    def __eq__(self, other):
        return isinstance(other, LocalKernels) and self.coeffs == other.coeffs

    def __repr__(self):
        return f"LocalKernels({len(self.coeffs)} coefficients)"


def propagate(net: Network, w: int, lk: LocalKernels, field: Field) -> dict[str, np.ndarray]:
    """Kernels by the recursion ``f_e = sum_d k_{d,e} f_d + 1_e`` in canonical order."""
    lk.check_complete()
    q = field.q
    n = w + len(net.channels)
    kern: dict = {MessageChannel(k): field.unit(n, k - 1) for k in range(1, w + 1)}
    out: dict[str, np.ndarray] = {}
    for ch in net.channels:
        f = field.unit(n, coord(net, w, ch.id))
        for d in inputs(net, w, ch.tail):
            c = lk[(d, ch.id)] % q
            if c:
                f = (f + c * kern[d]) % q
        kern[ch.id] = f
        out[ch.id] = f
    return out


def transfer_matrix_kernels(net: Network, w: int, lk: LocalKernels,
                            field: Field) -> dict[str, np.ndarray]:
    """Kernels as the columns of ``[B; I] (I - F)^{-1}``."""
    lk.check_complete()
    m = len(net.channels)
    idx = net.channel_index
    B = np.zeros((w, m), dtype=np.int64)
    F = np.zeros((m, m), dtype=np.int64)
    for (d, e), c in lk.coeffs.items():
        if isinstance(d, MessageChannel):
            B[d.k - 1, idx[e]] = c % field.q
        else:
            F[idx[d], idx[e]] = c % field.q
    system = (np.eye(m, dtype=np.int64) - F) % field.q
    inv = inverse(system, field)
    stacked = np.concatenate([B, np.eye(m, dtype=np.int64)], axis=0)
    cols = field.matmul(stacked, inv)
    return {cid: cols[:, j].copy() for cid, j in idx.items()}


def kernel_matrix(kernels: Mapping[str, np.ndarray], channels: Iterable[str]) -> np.ndarray:
    """Stack kernels as columns; the decoding matrix when ``channels = In(t)``."""
    cols = [kernels[c] for c in channels]
    if not cols:
        n = len(next(iter(kernels.values())))
        return np.zeros((n, 0), dtype=np.int64)
    return np.stack(cols, axis=1)


def pattern_mask(net: Network, w: int, rho: Iterable[str]) -> np.ndarray:
    """Boolean mask of the coordinates ``In(s) ∪ rho``."""
    mask = np.zeros(w + len(net.channels), dtype=bool)
    mask[:w] = True
    for cid in rho:
        mask[w + net.channel_index[cid]] = True
    return mask


def restrict(vec: np.ndarray, net: Network, w: int, rho: Iterable[str],
             mode: str = "compact") -> np.ndarray:
    """Restrict a kernel to an error pattern.

    ``compact`` keeps only the ``In(s) ∪ rho`` coordinates, ``zeroed`` zeros
    the others, ``complement`` zeros those coordinates instead.
    """
    mask = pattern_mask(net, w, rho)
    v = np.asarray(vec, dtype=np.int64)
    if mode == "compact":
        return v[mask].copy()
    if mode == "zeroed":
        return np.where(mask, v, 0)
    if mode == "complement":
        return np.where(mask, 0, v)
    raise ValueError(f"unknown restriction mode {mode!r}")


def rank_of(vectors: Sequence, field: Field) -> int:
    vecs = [np.asarray(v, dtype=np.int64) for v in vectors]
    if not vecs:
        return 0
    return rank(np.stack(vecs), field)


def _candidate_chunks(k: int, q: int, chunk: int = 512):
    """Nonzero coefficient tuples whose leading nonzero entry is 1.

    Yields them in ascending lexicographic order.  The first admissible
    tuple in full lexicographic order always has a leading 1 (scaling
    preserves subspace membership), so nothing is lost by skipping the rest.
    """
    buf: list[tuple[int, ...]] = []
    for lead in range(k - 1, -1, -1):
        for tail in product(range(q), repeat=k - 1 - lead):
            buf.append((0,) * lead + (1,) + tail)
            if len(buf) == chunk:
                yield np.array(buf, dtype=np.int64)
                buf = []
    if buf:
        yield np.array(buf, dtype=np.int64)


def pick_avoiding(ambient, forbidden: Sequence[Subspace], field: Field
                  ) -> tuple[np.ndarray, np.ndarray]:
    """First vector of ``ambient`` outside every forbidden subspace.

    ``ambient`` is a :class:`Subspace` or a sequence of independent
    generating vectors.  Candidates are coefficient tuples over that basis,
    searched lexicographically from ``(0, ..., 0, 1)``.

    Returns:
        ``(vector, coefficients)``.

    Raises:
        Exhausted: the forbidden subspaces cover the ambient space.
    """
    basis = ambient.basis if isinstance(ambient, Subspace) else np.stack(
        [np.asarray(v, dtype=np.int64) for v in ambient])
    k = basis.shape[0]
    if k == 0:
        raise Exhausted("ambient space is zero")
    for coeffs in _candidate_chunks(k, field.q):
        vecs = field.matmul(coeffs, basis)
        ok = vecs.any(axis=1)
        for sub in forbidden:
            ok &= ~sub.members_mask(vecs)
            if not ok.any():
                break
        hits = np.nonzero(ok)[0]
        if hits.size:
            i = hits[0]
            return vecs[i].copy(), coeffs[i].copy()
    raise Exhausted("every ambient vector lies in a forbidden subspace")


def serialize_kernels(net: Network, w: int, kernels: Mapping[str, np.ndarray]) -> dict:
    return {
        "index_legend": index_legend(net, w),
        "extended_kernels": {cid: [int(x) for x in kernels[cid]] for cid in net.channel_ids},
    }

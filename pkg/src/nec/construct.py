"""Deterministic construction of linear network error-correction codes.

The construction walks the channels in canonical order and, for each
channel lying on some path family, picks a kernel from the span of the
node's input kernels plus the channel's own error indicator that keeps
every affected dynamic cut of full restricted rank.  With ``beta_t`` equal
to the redundancy at every sink the result is a network MDS code.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import Exhausted, FieldTooSmall, RateTooHigh
from .galois import Field, Subspace, next_prime, rank
from .kernels import (LocalKernels, coord, inputs, kernel_matrix, pattern_mask,
                      pick_avoiding, propagate)
from .netgraph import (ErrorChannel, MessageChannel, Network, PathFamily, disjoint_paths,
                       min_cut_capacity)
from .patterns import DEFAULT_CEILING, enumerate_R, resolve_betas


@dataclass
class Code:
    """A linear network error-correction code on ``net`` at rate ``rate``."""

    field: Field
    rate: int
    net: Network
    local: LocalKernels
    extended: dict[str, np.ndarray]

    @classmethod
    def from_local(cls, net: Network, w: int, local: LocalKernels, field: Field) -> "Code":
        return cls(field, w, net, local, propagate(net, w, local, field))

    @property
    def length(self) -> int:
        """Kernel length ``w + |E|``."""
        return self.rate + len(self.net.channels)

    def decoding_matrix(self, t: str) -> np.ndarray:
        """Columns are the kernels of ``In(t)``; rows are indexed by ``In(s) ∪ E``."""
        return kernel_matrix(self.extended, self.net.in_channels[t])

    def message_rank(self, t: str) -> int:
        return rank(self.decoding_matrix(t)[: self.rate], self.field)

    def is_regular(self) -> bool:
        return all(self.message_rank(t) == self.rate for t in self.net.sinks)


@dataclass
class CutState:
    """Dynamic cut for one ``(sink, pattern)`` pair."""

    sink: str
    pattern: tuple
    family: PathFamily
    members: frozenset
    pred: dict
    cut: list

    @property
    def size(self) -> int:
        return len(self.cut)


def _unit(n: int, i: int) -> np.ndarray:
    v = np.zeros(n, dtype=np.int64)
    v[i] = 1
    return v


class Construction:
    """Step-wise driver; :func:`construct_code` runs it to completion."""

    def __init__(self, net: Network, w: int, betas, field: Field,
                 ceiling: int = DEFAULT_CEILING):
        check_rate(net, w)
        self.net = net
        self.w = w
        self.field = field
        self.betas = resolve_betas(net, w, betas)
        self.n = w + len(net.channels)
        self.states: list[CutState] = []
        for t in net.sinks:
            for rho in enumerate_R(net, t, self.betas[t], ceiling):
                fam = disjoint_paths(net, t, rho, w)
                cut = [MessageChannel(k) for k in range(1, w + 1)] + [ErrorChannel(e) for e in rho]
                self.states.append(CutState(t, rho, fam, fam.channel_set, fam.predecessors(), cut))
        self.on_paths = {tok for st in self.states for tok in st.members if isinstance(tok, str)}
        self.kernels: dict[str, np.ndarray] = {
            cid: np.zeros(self.n, dtype=np.int64) for cid in net.channel_ids}
        self.local = LocalKernels.zeros(net, w)
        self.processed: list[str] = []

    def kernel(self, token) -> np.ndarray:
        if isinstance(token, (MessageChannel, ErrorChannel)):
            return _unit(self.n, coord(self.net, self.w, token))
        return self.kernels[token]

    def cut_rank(self, state: CutState) -> int:
        mask = pattern_mask(self.net, self.w, state.pattern)
        rows = np.stack([self.kernel(tok)[mask] for tok in state.cut])
        return rank(rows, self.field)

    def verify_cut_invariant(self) -> bool:
        """True iff every dynamic cut has full restricted rank ``w + beta_t``."""
        return verify_cut_invariant(self.states, self)

    def step(self, e: str):
        """Assign the kernel of channel ``e`` and advance the affected cuts."""
        net, w, q = self.net, self.w, self.field.q
        ch = net.channel(e)
        e_coord = coord(net, w, e)
        if e not in self.on_paths:
            self.kernels[e] = _unit(self.n, e_coord)
            self.processed.append(e)
            return
        ins = inputs(net, w, ch.tail)
        gen_tokens = list(ins) + [ErrorChannel(e)]
        generators = [self.kernel(d) for d in gen_tokens]
        forbidden = []
        affected = [st for st in self.states if e in st.members]
        for st in affected:
            mask = pattern_mask(net, w, st.pattern)
            before = st.pred[e]
            vecs = [np.where(mask, self.kernel(d), 0) for d in st.cut if d != before]
            vecs += [np.where(mask, 0, g) for g in generators]
            forbidden.append(Subspace.span(vecs, self.field, self.n))
        try:
            g, coeffs = pick_avoiding(generators, forbidden, self.field)
        except Exhausted:
            raise FieldTooSmall(
                f"no admissible kernel for channel {e!r} over F_{q}; try a larger field") from None
        c_err = int(coeffs[-1])
        if c_err == 0:
            f = (g + _unit(self.n, e_coord)) % q
            local = [int(c) for c in coeffs[:-1]]
        else:
            scale = self.field.inv(c_err)
            f = g * scale % q
            local = [int(c) * scale % q for c in coeffs[:-1]]
        for d, c in zip(ins, local):
            self.local[(d, e)] = c
        self.kernels[e] = f
        for st in affected:
            before = st.pred[e]
            st.cut[st.cut.index(before)] = e
        self.processed.append(e)

    def run(self, check_invariants: bool = False) -> "Code":
        for ch in self.net.channels:
            self.step(ch.id)
            if check_invariants and not self.verify_cut_invariant():
                raise AssertionError(f"cut invariant broken after channel {ch.id!r}")
        return self.code()

    def code(self) -> Code:
        code = Code.from_local(self.net, self.w, self.local, self.field)
        for cid, vec in self.kernels.items():
            if not np.array_equal(code.extended[cid], vec):
                raise AssertionError(f"local/global kernel mismatch at {cid!r}")
        return code


def verify_cut_invariant(states, construction: Construction) -> bool:
    """Check full restricted rank of every dynamic cut against current kernels."""
    w = construction.w
    return all(construction.cut_rank(st) == w + len(st.pattern) for st in states)


def check_rate(net: Network, w: int):
    c_min = min(min_cut_capacity(net, net.source, t) for t in net.sinks)
    if w < 1 or w > c_min:
        raise RateTooHigh(f"rate {w} must lie in [1, min_t C_t = {c_min}]")


def auto_field(net: Network, w: int, betas, ceiling: int = DEFAULT_CEILING) -> Field:
    """Smallest prime field at least ``sum_t |R_t(beta_t)|``."""
    check_rate(net, w)
    betas = resolve_betas(net, w, betas)
    total = sum(len(enumerate_R(net, t, betas[t], ceiling)) for t in net.sinks)
    return Field(next_prime(max(total, 2)))


def construct_code(net: Network, w: int, betas, field: Field | str = "auto",
                   check_invariants: bool = False, ceiling: int = DEFAULT_CEILING) -> Code:
    """Build a regular code with ``d_min(t) >= beta_t + 1`` at every sink.

    Args:
        betas: an int, ``"max"`` (``beta_t = delta_t``), or a sink mapping.
        field: a :class:`Field` or ``"auto"`` for the smallest prime at least
            ``sum_t |R_t(beta_t)|``, which is always large enough.

    Raises:
        RateTooHigh: ``w`` exceeds some sink's min cut.
        FieldTooSmall: the kernel search ran dry (only possible below the bound).
    """
    if isinstance(field, str):
        if field != "auto":
            raise ValueError(f"field must be a Field or 'auto', got {field!r}")
        field = auto_field(net, w, betas, ceiling)
    return Construction(net, w, betas, field, ceiling).run(check_invariants)


"""Encoding with channel errors and brute-force minimum-rank decoding."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .construct import Code
from .errors import Ambiguous, DimensionMismatch, NotRegular, Undecodable
from .galois import left_nullspace, rank, solve_left
from .kernels import inputs
from .netgraph import MessageChannel, connective_set, min_cut_capacity, pattern_rank


def _as_vector(values, length: int, q: int, what: str) -> np.ndarray:
    v = np.asarray(values, dtype=np.int64).reshape(-1)
    if v.shape[0] != length:
        raise DimensionMismatch(f"{what} has length {v.shape[0]}, expected {length}")
    return v % q


def error_vector(code: Code, errors: dict[str, int] | None) -> np.ndarray:
    """Dense ``Z`` from a channel -> value mapping."""
    Z = np.zeros(len(code.net.channels), dtype=np.int64)
    for cid, value in (errors or {}).items():
        Z[code.net.channel_index[code.net.channel(cid).id]] = int(value) % code.field.q
    return Z


def encode(code: Code, X, Z=None) -> dict[str, int]:
    """Channel outputs ``(X, Z) . f_e`` for every channel."""
    q = code.field.q
    X = _as_vector(X, code.rate, q, "message")
    Z = np.zeros(len(code.net.channels), np.int64) if Z is None else _as_vector(
        Z, len(code.net.channels), q, "error vector")
    xz = np.concatenate([X, Z])
    return {cid: int(xz @ code.extended[cid] % q) for cid in code.net.channel_ids}


def encode_local(code: Code, X, Z=None) -> dict[str, int]:
    """Same outputs by simulating each node's local encoding and adding errors."""
    q = code.field.q
    X = _as_vector(X, code.rate, q, "message")
    Z = np.zeros(len(code.net.channels), np.int64) if Z is None else _as_vector(
        Z, len(code.net.channels), q, "error vector")
    net, w = code.net, code.rate
    value: dict = {MessageChannel(k): int(X[k - 1]) for k in range(1, w + 1)}
    for ch in net.channels:
        u = sum(code.local[(d, ch.id)] * value[d] for d in inputs(net, w, ch.tail))
        value[ch.id] = (u + int(Z[net.channel_index[ch.id]])) % q
    return {cid: value[cid] for cid in net.channel_ids}


def received_at(code: Code, t: str, outputs: dict[str, int]) -> np.ndarray:
    return np.array([outputs[c] for c in code.net.in_channels[t]], dtype=np.int64)


@dataclass
class DecodeResult:
    message: tuple[int, ...]
    radius: int
    unique: bool
    pattern: tuple[str, ...]

    def to_dict(self) -> dict:
        return {"message": list(self.message), "radius": self.radius,
                "unique": self.unique, "pattern": list(self.pattern)}


def candidate_patterns(code: Code, t: str, max_rank: int) -> list[tuple[tuple[str, ...], int]]:
    """Subsets of the connective set with rank at most ``max_rank``.

    Ordered by (rank, size, canonical position).  Subsets that contain a
    same-rank smaller subset are kept; they can only add solutions.
    """
    net = code.net
    e_t = connective_set(net, t)
    pos = {c: i for i, c in enumerate(e_t)}
    out = []
    for k in range(0, len(e_t) + 1):
        for rho in combinations(e_t, k):
            r = pattern_rank(net, rho, t)
            if r <= max_rank:
                out.append((rho, r))
    out.sort(key=lambda item: (item[1], len(item[0]), [pos[c] for c in item[0]]))
    return out


def decode(code: Code, t: str, received, strict: bool = True) -> DecodeResult:
    """Find ``X`` explaining ``received`` with an error pattern of least rank.

    For every candidate pattern ``rho`` the system ``(X, Z_rho) F_t^rho = y`` is
    solved; all solutions at the minimal radius are inspected through the
    left null space, and the message counts as unique when every solution
    shares the same ``X``.  Solutions that differ only in ``Z`` are accepted.

    Raises:
        NotRegular: the message space at ``t`` is deficient.
        Ambiguous: two messages explain ``received`` at the minimal radius
            (only when ``strict``; otherwise the first is returned).
        Undecodable: nothing explains ``received`` within rank ``delta_t + 1``.
    """
    net, w, field = code.net, code.rate, code.field
    if code.message_rank(t) != w:
        raise NotRegular(f"code is not regular at {t!r}")
    y = _as_vector(received, len(net.in_channels[t]), field.q, "received tuple")
    F = code.decoding_matrix(t)
    cap = min_cut_capacity(net, net.source, t) - w + 1
    best: DecodeResult | None = None
    messages: set[tuple[int, ...]] = set()
    free_message = False
    for rho, r in candidate_patterns(code, t, cap):
        if best is not None and r > best.radius:
            break
        rows = list(range(w)) + [w + net.channel_index[e] for e in rho]
        M = F[rows]
        sol = solve_left(M, y, field)
        if sol is None:
            continue
        x = tuple(int(v) for v in sol[:w])
        if best is None:
            best = DecodeResult(x, r, True, rho)
        messages.add(x)
        kernel = left_nullspace(M, field)
        if kernel.size and rank(kernel[:, :w], field) > 0:
            free_message = True
    if best is None:
        raise Undecodable(f"no explanation within rank {cap} at {t!r}")
    if len(messages) > 1 or free_message:
        best = DecodeResult(best.message, best.radius, False, best.pattern)
        if strict:
            raise Ambiguous(f"several messages fit at radius {best.radius} at {t!r}", best)
    return best


@dataclass
class SinkVerdict:
    sink: str
    decoded: tuple[int, ...] | None
    success: bool
    ambiguous: bool
    guaranteed: bool
    pattern_rank: int
    radius: int | None

    def to_dict(self) -> dict:
        d = dict(self.__dict__)
        d["decoded"] = None if self.decoded is None else list(self.decoded)
        return d


def roundtrip(code: Code, X, pattern=(), seed: int = 0, errors: dict | None = None,
              d_min: dict[str, int] | None = None) -> list[SinkVerdict]:
    """Encode ``X`` with errors on ``pattern`` and decode at every sink.

    Error values are uniform nonzero scalars unless ``errors`` gives them.
    ``guaranteed`` marks sinks where the pattern rank is at most
    ``(d_min - 1) // 2``.
    """
    from .analysis import min_distance

    net, q = code.net, code.field.q
    if errors is None:
        rho = net.pattern(pattern)
        rng = np.random.default_rng(seed)
        errors = {e: int(v) for e, v in zip(rho, rng.integers(1, q, size=len(rho)))}
    else:
        rho = net.pattern([e for e, v in errors.items() if int(v) % q])
    outputs = encode(code, X, error_vector(code, errors))
    X = tuple(int(v) % q for v in np.asarray(X).reshape(-1))
    verdicts = []
    for t in net.sinks:
        r = pattern_rank(net, rho, t)
        try:
            dm = d_min[t] if d_min else min_distance(code, t)
        except NotRegular:
            dm = 0
        guaranteed = dm > 0 and r <= (dm - 1) // 2
        try:
            res = decode(code, t, received_at(code, t, outputs))
            verdicts.append(SinkVerdict(t, res.message, res.message == X, False, guaranteed,
                                        r, res.radius))
        except Ambiguous as exc:
            verdicts.append(SinkVerdict(t, None, False, True, guaranteed, r, exc.result.radius))
        except (Undecodable, NotRegular):
            verdicts.append(SinkVerdict(t, None, False, False, guaranteed, r, None))
    return verdicts

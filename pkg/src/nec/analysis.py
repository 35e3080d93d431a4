"""Message and error spaces, minimum distance, and per-sink verdicts."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from itertools import combinations

import numpy as np

from .construct import Code
from .errors import NotRegular, SingletonBoundViolation
from .galois import Subspace, batch_rank
from .netgraph import connective_set, min_cut_capacity, pattern_rank

# patterns examined by prop2_consistency: all subsets up to this many connective channels
PROP2_FULL_LIMIT = 14


def _error_rows(code: Code, t: str, rho) -> np.ndarray:
    idx = code.net.channel_index
    F = code.decoding_matrix(t)
    return F[[code.rate + idx[e] for e in rho]]


def message_space(code: Code, t: str) -> Subspace:
    """Row space of the first ``w`` rows of the decoding matrix."""
    F = code.decoding_matrix(t)
    return Subspace.span(F[: code.rate], code.field, F.shape[1])


def error_space(code: Code, t: str, rho) -> Subspace:
    """Row space of the decoding-matrix rows indexed by ``rho``."""
    n = len(code.net.in_channels[t])
    rho = code.net.pattern(rho)
    if not rho:
        return Subspace.zero(n, code.field)
    return Subspace.span(_error_rows(code, t, rho), code.field, n)


def dominates(code: Code, t: str, rho1, rho2) -> bool:
    """``Delta(t, rho1)`` is contained in ``Delta(t, rho2)`` for this code."""
    return error_space(code, t, rho1).issubspace(error_space(code, t, rho2))


def intersects(code: Code, t: str, rho) -> bool:
    """True iff ``Phi(t) ∩ Delta(t, rho) != {0}``."""
    phi = message_space(code, t)
    delta = error_space(code, t, rho)
    if delta.dim == 0 or phi.dim == 0:
        return False
    return (phi + delta).dim < phi.dim + delta.dim


def _require_regular(code: Code, t: str):
    r = code.message_rank(t)
    if r != code.rate:
        raise NotRegular(f"message space at {t!r} has dimension {r} < w = {code.rate}")


def _hits_of_size(code: Code, t: str, e_t, k: int, phi_rows, phi_dim):
    """Size-``k`` subsets of ``e_t`` whose error space meets the message space."""
    subsets = list(combinations(e_t, k))
    if not subsets:
        return [], np.zeros(0, dtype=np.int64)
    F = code.decoding_matrix(t)
    idx = code.net.channel_index
    rows = np.array([[code.rate + idx[e] for e in sub] for sub in subsets])
    delta = F[rows]
    delta_dim = batch_rank(delta, code.field)
    joint = np.concatenate([np.broadcast_to(phi_rows, (len(subsets),) + phi_rows.shape), delta],
                           axis=1)
    joint_dim = batch_rank(joint, code.field)
    hit = (delta_dim > 0) & (joint_dim < phi_dim + delta_dim)
    return [s for s, h in zip(subsets, hit) if h], delta_dim[hit]


def min_distance(code: Code, t: str) -> int:
    """Smallest ``|rho|`` whose error space meets the message space at ``t``.

    Subsets of the connective set are searched by increasing size.  The
    search is not cut off at ``delta_t + 1`` so that a bound violation would
    surface instead of being masked.

    Raises:
        NotRegular: the message space at ``t`` is deficient.
    """
    _require_regular(code, t)
    e_t = connective_set(code.net, t)
    phi_rows = code.decoding_matrix(t)[: code.rate]
    for k in range(1, len(e_t) + 1):
        hits, _ = _hits_of_size(code, t, e_t, k, phi_rows, code.rate)
        if hits:
            return k
    raise AssertionError(f"no pattern meets the message space at {t!r}; the code is not regular")


def prop2_minima(code: Code, t: str) -> tuple[int, int, int]:
    """The three minimizations: pattern rank, cardinality, error-space dimension.

    Each is taken over patterns whose error space meets the message space.
    When the connective set is small every subset is examined; otherwise
    subsets up to size ``delta_t + 1``.
    """
    _require_regular(code, t)
    net = code.net
    e_t = connective_set(net, t)
    delta_t = min_cut_capacity(net, net.source, t) - code.rate
    top = len(e_t) if len(e_t) <= PROP2_FULL_LIMIT else min(len(e_t), delta_t + 1)
    phi_rows = code.decoding_matrix(t)[: code.rate]
    by_rank = by_size = by_dim = None
    for k in range(1, top + 1):
        hits, dims = _hits_of_size(code, t, e_t, k, phi_rows, code.rate)
        if not hits:
            continue
        if by_size is None:
            by_size = k
        r = min(pattern_rank(net, rho, t) for rho in hits)
        d = int(dims.min())
        by_rank = r if by_rank is None else min(by_rank, r)
        by_dim = d if by_dim is None else min(by_dim, d)
    if by_size is None:
        raise AssertionError(f"no intersecting pattern found at {t!r}")
    return by_rank, by_size, by_dim


def prop2_consistency(code: Code, t: str) -> bool:
    a, b, c = prop2_minima(code, t)
    return a == b == c


@dataclass
class SinkReport:
    sink: str
    C_t: int
    delta_t: int
    regular: bool
    d_min: int | None
    singleton_slack: int | None
    is_mds: bool

    def to_dict(self) -> dict:
        return asdict(self)


def sink_report(code: Code, t: str) -> SinkReport:
    """Capacity, redundancy, regularity, minimum distance and MDS verdict at ``t``.

    Raises:
        SingletonBoundViolation: ``d_min > delta_t + 1`` (never for a correct build).
    """
    net = code.net
    c_t = min_cut_capacity(net, net.source, t)
    delta = c_t - code.rate
    regular = code.message_rank(t) == code.rate
    if not regular:
        return SinkReport(t, c_t, delta, False, None, None, False)
    d = min_distance(code, t)
    if d > delta + 1:
        raise SingletonBoundViolation(f"d_min={d} exceeds delta_t + 1 = {delta + 1} at {t!r}")
    slack = delta + 1 - d
    return SinkReport(t, c_t, delta, True, d, slack, slack == 0)


def code_report(code: Code) -> list[SinkReport]:
    return [sink_report(code, t) for t in code.net.sinks]


def reports_to_json(reports: list[SinkReport]) -> str:
    doc = {"sinks": [r.to_dict() for r in reports],
           "regular": all(r.regular for r in reports),
           "is_mds": all(r.is_mds for r in reports)}
    return json.dumps(doc, indent=2)


def reports_to_text(reports: list[SinkReport]) -> str:
    head = ("sink", "C_t", "delta_t", "regular", "d_min", "slack", "mds")
    body = [(r.sink, r.C_t, r.delta_t, "yes" if r.regular else "no",
             "-" if r.d_min is None else r.d_min,
             "-" if r.singleton_slack is None else r.singleton_slack,
             "yes" if r.is_mds else "no") for r in reports]
    widths = [max(len(str(x)) for x in col) for col in zip(head, *body)]
    return "\n".join("  ".join(str(x).rjust(wd) for x, wd in zip(row, widths))
                     for row in [head, *body])

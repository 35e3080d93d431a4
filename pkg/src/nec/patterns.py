"""Error-pattern families ``R_t(beta)`` and the counts behind field-size bounds."""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field
from itertools import combinations
from math import comb
from typing import Mapping

from .errors import BadParams, EnumerationTooLarge
from .galois import next_prime
from .netgraph import ErrorPattern, Network, connective_set, min_cut_capacity, pattern_rank

DEFAULT_CEILING = 10**7


def binom(a: int, b: int) -> int:
    """``C(a, b)`` with ``C(a, b) = 0`` for ``a < b``."""
    if b < 0 or a < b:
        return 0
    return comb(a, b)


@dataclass(frozen=True)
class PatternFamily:
    sink: str
    beta: int
    members: tuple[ErrorPattern, ...]

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __contains__(self, rho):
        return tuple(rho) in self.members


def enumerate_R(net: Network, t: str, beta: int, ceiling: int = DEFAULT_CEILING) -> PatternFamily:
    """All size-``beta`` patterns of full rank ``beta`` at sink ``t``.

    Only subsets of the connective set are examined; a pattern holding a
    channel that cannot reach ``t`` never has full rank.
    """
    if t not in net.sinks:
        raise BadParams(f"{t!r} is not a sink")
    c_t = min_cut_capacity(net, net.source, t)
    if beta < 0 or beta > c_t:
        raise BadParams(f"beta={beta} outside [0, C_t={c_t}] at sink {t!r}")
    e_t = connective_set(net, t)
    if binom(len(e_t), beta) > ceiling:
        raise EnumerationTooLarge(
            f"C({len(e_t)}, {beta}) patterns at {t!r} exceeds ceiling {ceiling}")
    members = tuple(rho for rho in combinations(e_t, beta)
                    if pattern_rank(net, rho, t) == beta)
    return PatternFamily(t, beta, members)


def redundancy(net: Network, t: str, w: int) -> int:
    return min_cut_capacity(net, net.source, t) - w


def resolve_betas(net: Network, w: int, betas) -> dict[str, int]:
    """Normalize ``betas`` (int, ``'max'``, or sink mapping) and range-check it."""
    out: dict[str, int] = {}
    if isinstance(betas, Mapping):
        unknown = set(betas) - set(net.sinks)
        if unknown:
            raise BadParams(f"beta given for non-sink node(s) {sorted(unknown)}")
    for t in net.sinks:
        delta = redundancy(net, t, w)
        if betas == "max":
            b = delta
        elif isinstance(betas, Mapping):
            if t not in betas:
                raise BadParams(f"no beta given for sink {t!r}")
            b = delta if betas[t] == "max" else betas[t]
        else:
            b = betas
        b = int(b)
        if not 0 <= b <= delta:
            raise BadParams(f"beta={b} at sink {t!r} must lie in [0, delta_t={delta}]")
        out[t] = b
    return out


@dataclass
class FamilySizes:
    rate: int
    rows: list[dict] = dc_field(default_factory=list)
    total_R: int = 0
    total_connective: int = 0
    total_all: int = 0
    field_bound: int = 2

    def to_dict(self) -> dict:
        return {
            "rate": self.rate,
            "sinks": {r["sink"]: {k: v for k, v in r.items() if k != "sink"} for r in self.rows},
            "sum_R": self.total_R,
            "sum_binom_connective": self.total_connective,
            "sum_binom_all": self.total_all,
            "field_bound_prime": self.field_bound,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def to_text(self) -> str:
        head = ("sink", "C_t", "delta_t", "beta_t", "|E_t|", "|R_t|", "C(|E_t|,b)", "C(|E|,b)")
        body = [(r["sink"], r["C_t"], r["delta_t"], r["beta_t"], r["E_t"], r["R_t"],
                 r["binom_connective"], r["binom_all"]) for r in self.rows]
        body.append(("total", "", "", "", "", self.total_R, self.total_connective, self.total_all))
        widths = [max(len(str(x)) for x in col) for col in zip(head, *body)]
        lines = ["  ".join(str(x).rjust(wd) for x, wd in zip(row, widths)) for row in [head, *body]]
        lines.append(f"field bound (smallest prime >= sum |R_t|): {self.field_bound}")
        return "\n".join(lines)


def family_sizes(net: Network, w: int, betas, ceiling: int = DEFAULT_CEILING) -> FamilySizes:
    betas = resolve_betas(net, w, betas)
    n_all = len(net.channels)
    report = FamilySizes(rate=w)
    for t in net.sinks:
        b = betas[t]
        e_t = len(connective_set(net, t))
        r_t = len(enumerate_R(net, t, b, ceiling))
        row = {
            "sink": t,
            "C_t": min_cut_capacity(net, net.source, t),
            "delta_t": redundancy(net, t, w),
            "beta_t": b,
            "E_t": e_t,
            "R_t": r_t,
            "binom_connective": binom(e_t, b),
            "binom_all": binom(n_all, b),
        }
        report.rows.append(row)
        report.total_R += r_t
        report.total_connective += row["binom_connective"]
        report.total_all += row["binom_all"]
    report.field_bound = next_prime(report.total_R)
    return report

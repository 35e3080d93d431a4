"""Random linear network error-correction codes and their failure bounds.

Every local coefficient is drawn uniformly from the field.  Trial ``i`` of a
run seeded with ``seed`` uses ``numpy.random.default_rng([seed, i])`` and
draws the coefficients in :func:`~nec.kernels.adjacent_pairs` order, so a
single trial can be replayed with :func:`random_code`.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from itertools import combinations, product

import numpy as np

from .construct import Code
from .errors import BadParams
from .galois import Field, batch_rank, next_prime, rank
from .kernels import LocalKernels, adjacent_pairs, coord, inputs
from .netgraph import MessageChannel, Network, connective_set, min_cut_capacity
from .patterns import DEFAULT_CEILING, binom, enumerate_R, resolve_betas


def _stream(seed: int, trial: int) -> np.random.Generator:
    return np.random.default_rng([int(seed), int(trial)])


def random_code(net: Network, w: int, field: Field, seed: int, trial: int = 0) -> Code:
    """Code with i.i.d. uniform local coefficients drawn from stream ``(seed, trial)``."""
    pairs = adjacent_pairs(net, w)
    values = _stream(seed, trial).integers(0, field.q, size=len(pairs))
    lk = LocalKernels.from_sequence(net, w, [int(v) for v in values], field)
    return Code.from_local(net, w, lk, field)


def internal_count(net: Network) -> int:
    """``|J|``: nodes that are neither the source nor a sink."""
    return len(net.nodes) - 1 - len(net.sinks)


# ---------------------------------------------------------------------------
# batched evaluation


def batch_kernels(net: Network, w: int, coeffs: np.ndarray, field: Field) -> dict:
    """Propagate a batch of coefficient vectors; values are arrays of shape ``(B, w+|E|)``."""
    q = field.q
    B = coeffs.shape[0]
    n = w + len(net.channels)
    col = {pair: j for j, pair in enumerate(adjacent_pairs(net, w))}
    kern: dict = {}
    for k in range(1, w + 1):
        v = np.zeros((B, n), dtype=np.int64)
        v[:, k - 1] = 1
        kern[MessageChannel(k)] = v
    for ch in net.channels:
        f = np.zeros((B, n), dtype=np.int64)
        f[:, coord(net, w, ch.id)] = 1
        for d in inputs(net, w, ch.tail):
            f = (f + coeffs[:, col[(d, ch.id)], None] * kern[d]) % q
        kern[ch.id] = f
    return {cid: kern[cid] for cid in net.channel_ids}


def batch_dmin(net: Network, w: int, kernels: dict, t: str, field: Field) -> np.ndarray:
    """``d_min`` at ``t`` for every code of a batch; 0 marks a non-regular code."""
    F = np.stack([kernels[c] for c in net.in_channels[t]], axis=2)
    B = F.shape[0]
    phi = F[:, :w]
    out = np.zeros(B, dtype=np.int64)
    pending = batch_rank(phi, field) == w
    e_t = connective_set(net, t)
    for k in range(1, len(e_t) + 1):
        if not pending.any():
            break
        found = np.zeros(B, dtype=bool)
        live = np.nonzero(pending)[0]
        for sub in combinations(e_t, k):
            rows = [w + net.channel_index[e] for e in sub]
            delta = F[live][:, rows]
            dd = batch_rank(delta, field)
            jd = batch_rank(np.concatenate([phi[live], delta], axis=1), field)
            found[live[(dd > 0) & (jd < w + dd)]] = True
        out[found] = k
        pending &= ~found
    return out


# ---------------------------------------------------------------------------
# closed-form bounds


def _clamp(x: float) -> float:
    return min(max(x, 0.0), 1.0)


def mds_bound(r_count: int, q: int, J: int) -> float:
    """``1 - (1 - |R|/(q-1))^(|J|+1)``; 1 when the ratio reaches 1."""
    ratio = r_count / (q - 1)
    if ratio >= 1:
        return 1.0
    return 1.0 - (1.0 - ratio) ** (J + 1)


def beta_bound(r_count: int, q: int, J: int, delta: int, beta: int) -> float:
    """``|R_t(beta)| C(delta-beta+|J|+1, |J|) / (q-1)^(delta-beta+1)`` (unclamped)."""
    gap = delta - beta
    return r_count * binom(gap + J + 1, J) / (q - 1) ** (gap + 1)


def tail_bound(r_count: int, q: int, J: int, d: int) -> float:
    """Bound on ``Pr(D_min < delta+1-d)`` with ``r_count = |R_t(delta-d)|`` (unclamped)."""
    return r_count * binom(d + J + 1, J) / (q - 1) ** (d + 1)


@dataclass
class TrialConfig:
    net: Network
    w: int
    field: Field
    betas: object = "max"
    trials: int = 1000
    seed: int = 0
    ceiling: int = DEFAULT_CEILING
    chunk: int = 4096

    def __post_init__(self):
        if self.trials < 1:
            raise BadParams("trials must be positive")
        self.betas = resolve_betas(self.net, self.w, self.betas)


@dataclass
class SinkFailures:
    sink: str
    delta: int
    beta: int
    p_mds: float
    bound_mds: float
    p_beta: float
    bound_beta: float
    pmf: list[float]
    pmf_regular: list[float]
    tail: list[dict]

    def to_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass
class FailureReport:
    q: int
    rate: int
    trials: int
    seed: int
    J: int
    sinks: list[SinkFailures] = dc_field(default_factory=list)
    p_mds: float = 0.0
    bound_mds: float = 1.0
    p_beta: float = 0.0
    bound_beta: float = 1.0

    def sink(self, t: str) -> SinkFailures:
        return next(s for s in self.sinks if s.sink == t)

    def sigma(self, bound: float) -> float:
        """Binomial standard deviation at success probability ``bound``."""
        b = _clamp(bound)
        return math.sqrt(b * (1 - b) / self.trials)

    def to_dict(self) -> dict:
        return {
            "field": self.q, "rate": self.rate, "trials": self.trials, "seed": self.seed,
            "internal_nodes": self.J,
            "network": {"P_ec": self.p_mds, "bound": self.bound_mds,
                        "P_ec_beta": self.p_beta, "bound_beta": self.bound_beta},
            "sinks": [s.to_dict() for s in self.sinks],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def to_text(self) -> str:
        head = ("event", "empirical", "bound", "margin")
        body = []
        for s in self.sinks:
            body.append((f"P_ec({s.sink})", s.p_mds, s.bound_mds))
            body.append((f"P_ec({s.sink},b={s.beta})", s.p_beta, _clamp(s.bound_beta)))
            for row in s.tail:
                body.append((f"Pr(D_min({s.sink})<{s.delta + 1 - row['d']})",
                             row["empirical"], _clamp(row["bound"])))
        body.append(("P_ec(network)", self.p_mds, self.bound_mds))
        body.append(("P_ec(network,beta)", self.p_beta, _clamp(self.bound_beta)))
        rows = [(name, f"{e:.4f}", f"{b:.4f}", f"{b - e:+.4f}") for name, e, b in body]
        widths = [max(len(x) for x in col) for col in zip(head, *rows)]
        lines = [f"q={self.q}  w={self.rate}  trials={self.trials}  seed={self.seed}"]
        lines += ["  ".join(x.rjust(wd) for x, wd in zip(r, widths)) for r in [head, *rows]]
        return "\n".join(lines)


def sample_dmin(net: Network, w: int, field: Field, trials: int, seed: int,
                chunk: int = 4096) -> dict[str, np.ndarray]:
    """``d_min`` (0 if not regular) per sink for trials ``0..trials-1``."""
    n_pairs = len(adjacent_pairs(net, w))
    out = {t: np.zeros(trials, dtype=np.int64) for t in net.sinks}
    for lo in range(0, trials, chunk):
        hi = min(trials, lo + chunk)
        coeffs = np.stack([_stream(seed, i).integers(0, field.q, size=n_pairs)
                           for i in range(lo, hi)]) if n_pairs else np.zeros((hi - lo, 0), np.int64)
        kern = batch_kernels(net, w, coeffs, field)
        for t in net.sinks:
            out[t][lo:hi] = batch_dmin(net, w, kern, t, field)
    return out


def estimate_failures(cfg: TrialConfig) -> FailureReport:
    """Monte Carlo failure frequencies beside the closed-form bounds.

    ``pmf`` is the distribution of ``D_min`` over ``0..delta_t+1`` with
    non-regular codes counted at 0; ``pmf_regular`` conditions on regularity.
    Tail rows compare ``Pr(D_min < delta_t + 1 - d)`` (unconditioned) with
    the bound for each ``d`` in ``0..delta_t``.
    """
    net, w, q = cfg.net, cfg.w, cfg.field.q
    J = internal_count(net)
    dmins = sample_dmin(net, w, cfg.field, cfg.trials, cfg.seed, cfg.chunk)
    rep = FailureReport(q, w, cfg.trials, cfg.seed, J)
    any_mds = np.zeros(cfg.trials, dtype=bool)
    any_beta = np.zeros(cfg.trials, dtype=bool)
    r_delta_total = 0
    beta_total = 0.0
    for t in net.sinks:
        delta = min_cut_capacity(net, net.source, t) - w
        beta = cfg.betas[t]
        dm = dmins[t]
        fail_mds = dm < delta + 1
        fail_beta = dm < beta + 1
        any_mds |= fail_mds
        any_beta |= fail_beta
        r_sizes = {b: len(enumerate_R(net, t, b, cfg.ceiling)) for b in range(delta + 1)}
        r_delta_total += r_sizes[delta]
        bb = beta_bound(r_sizes[beta], q, J, delta, beta)
        beta_total += bb
        counts = np.bincount(dm, minlength=delta + 2)[: delta + 2]
        regular = counts[1:].sum()
        pmf = (counts / cfg.trials).tolist()
        pmf_reg = (counts[1:] / regular).tolist() if regular else [0.0] * (delta + 1)
        tail = [{"d": d, "empirical": float(np.mean(dm < delta + 1 - d)),
                 "bound": tail_bound(r_sizes[delta - d], q, J, d),
                 "vacuous": tail_bound(r_sizes[delta - d], q, J, d) >= 1}
                for d in range(delta + 1)]
        rep.sinks.append(SinkFailures(
            t, delta, beta, float(fail_mds.mean()), mds_bound(r_sizes[delta], q, J),
            float(fail_beta.mean()), bb, pmf, [0.0] + pmf_reg, tail))
    rep.p_mds = float(any_mds.mean())
    rep.bound_mds = mds_bound(r_delta_total, q, J)
    rep.p_beta = float(any_beta.mean())
    rep.bound_beta = beta_total
    return rep


# ---------------------------------------------------------------------------
# field-size recommendation


@dataclass
class FieldRecommendation:
    d: int
    sum_R: int
    J: int
    radicand: int
    first: int
    second: float
    value: float
    prime: int

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def field_size_recommendation(net: Network, w: int, d: int,
                              ceiling: int = DEFAULT_CEILING) -> FieldRecommendation:
    """Field size giving degradation at most ``d`` at every sink with positive probability.

    ``radicand`` is ``sum_t |R_t(delta_t - d)| * C(d+|J|+1, |J|)`` so the
    second branch ``2 + radicand^(1/(d+1))`` can be compared exactly.
    """
    deltas = {t: min_cut_capacity(net, net.source, t) - w for t in net.sinks}
    if d < 0 or d > min(deltas.values()):
        raise BadParams(f"d={d} must lie in [0, min_t delta_t = {min(deltas.values())}]")
    J = internal_count(net)
    total = sum(len(enumerate_R(net, t, deltas[t] - d, ceiling)) for t in net.sinks)
    radicand = total * binom(d + J + 1, J)
    second = 2 + radicand ** (1.0 / (d + 1))
    value = min(total, second)
    return FieldRecommendation(d, total, J, radicand, total, second, value,
                               next_prime(math.ceil(value)))


# ---------------------------------------------------------------------------
# spanning probability


def _lemma4_setup(n: int, k0: int, k1: int):
    if not (0 <= k0 <= n and 0 <= k1 <= n and k0 + k1 >= n):
        raise BadParams(f"need 0 <= k0, k1 <= n and k0 + k1 >= n, got n={n}, k0={k0}, k1={k1}")
    L0 = np.eye(n, dtype=np.int64)[:k0]
    L1 = np.eye(n, dtype=np.int64)[n - k1:]
    return L0, L1, n - k0


def lemma4_exact(n: int, k0: int, q: int) -> Fraction:
    """``prod_{i=1}^{n-k0} (1 - 1/q^i)``."""
    out = Fraction(1)
    for i in range(1, n - k0 + 1):
        out *= 1 - Fraction(1, q**i)
    return out


def lemma4_exhaustive(n: int, k0: int, k1: int, q: int) -> Fraction:
    """Exact spanning probability by enumerating every choice of ``m`` vectors in ``L1``."""
    field = Field(q)
    L0, L1, m = _lemma4_setup(n, k0, k1)
    if m == 0:
        return Fraction(1)
    hits = total = 0
    for flat in product(range(q), repeat=m * k1):
        coeffs = np.array(flat, dtype=np.int64).reshape(m, k1)
        vecs = field.matmul(coeffs, L1)
        total += 1
        hits += rank(np.concatenate([L0, vecs]), field) == n
    return Fraction(hits, total)


@dataclass
class Lemma4Report:
    n: int
    k0: int
    k1: int
    q: int
    trials: int
    empirical: float
    exact: Fraction

    @property
    def sigma(self) -> float:
        p = float(self.exact)
        return math.sqrt(p * (1 - p) / self.trials)

    def within(self, k: float = 3.0) -> bool:
        return abs(self.empirical - float(self.exact)) <= k * self.sigma + 1e-12


def lemma4_check(n: int, k0: int, k1: int, q: int, trials: int, seed: int) -> Lemma4Report:
    """Empirical frequency that ``L0`` plus ``n-k0`` uniform vectors of ``L1`` span everything."""
    field = Field(q)
    L0, L1, m = _lemma4_setup(n, k0, k1)
    if m == 0:
        return Lemma4Report(n, k0, k1, q, trials, 1.0, Fraction(1))
    rng = np.random.default_rng(seed)
    coeffs = rng.integers(0, q, size=(trials, m, k1))
    vecs = coeffs @ L1 % q
    mats = np.concatenate([np.broadcast_to(L0, (trials, k0, n)), vecs], axis=1)
    full = batch_rank(mats, field) == n
    return Lemma4Report(n, k0, k1, q, trials, float(full.mean()), lemma4_exact(n, k0, q))

"""Prime-field arithmetic and dense linear algebra over F_q.

Scalars are plain Python ints held as canonical residues in ``[0, q)``.
Vectors and matrices are ``numpy.int64`` arrays whose entries are kept
reduced modulo ``q``; every routine here returns reduced arrays.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import CompositeModulus, DivisionByZero

# int64 products of two residues stay exact below this modulus
MAX_MODULUS = 2**31


def is_prime(n: int) -> bool:
    """Trial division; adequate for every field size this package meets."""
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def next_prime(n: int) -> int:
    """Smallest prime ``>= n``."""
    p = max(2, int(n))
    while not is_prime(p):
        p += 1
    return p


@dataclass(frozen=True)
class Field:
    """The prime field F_q."""

    q: int

    def __post_init__(self):
        if not isinstance(self.q, (int, np.integer)) or self.q < 2:
            raise CompositeModulus(f"field modulus must be an integer >= 2, got {self.q!r}")
        if not is_prime(int(self.q)):
            raise CompositeModulus(f"{self.q} is not prime")
        if self.q >= MAX_MODULUS:
            raise CompositeModulus(f"modulus {self.q} too large for int64 arithmetic")
        object.__setattr__(self, "q", int(self.q))

    @property
    def modulus(self) -> int:
        return self.q

    def __len__(self):
        return self.q

    def __iter__(self):
        return iter(range(self.q))

    def __repr__(self):
        return f"Field(q={self.q})"

    def __call__(self, value) -> int:
        return int(value) % self.q

    # scalar arithmetic

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.q

    def sub(self, a: int, b: int) -> int:
        return (a - b) % self.q

    def neg(self, a: int) -> int:
        return (-a) % self.q

    def mul(self, a: int, b: int) -> int:
        return (a * b) % self.q

    def inv(self, a: int) -> int:
        a %= self.q
        if a == 0:
            raise DivisionByZero(f"0 has no inverse in F_{self.q}")
        return pow(a, self.q - 2, self.q)

    def div(self, a: int, b: int) -> int:
        return (a * self.inv(b)) % self.q

    def arith(self, a: int, b: int, op: str) -> int:
        """Apply ``op`` in {'add', 'sub', 'mul', 'div'} to two residues."""
        try:
            fn = {"add": self.add, "sub": self.sub, "mul": self.mul, "div": self.div}[op]
        except KeyError:
            raise ValueError(f"unknown operation {op!r}") from None
        return fn(a % self.q, b % self.q)

    @cached_property
    def inverses(self) -> np.ndarray:
        """Table ``t`` with ``t[a] * a == 1`` for ``a != 0`` (``t[0] == 0``)."""
        q = self.q
        table = np.zeros(q, dtype=np.int64)
        # Fermat via repeated squaring, vectorized
        base = np.arange(q, dtype=np.int64)
        result = np.ones(q, dtype=np.int64)
        e = q - 2
        while e:
            if e & 1:
                result = result * base % q
            base = base * base % q
            e >>= 1
        table[1:] = result[1:]
        return table

    # array helpers

    def array(self, values) -> np.ndarray:
        return np.asarray(values, dtype=np.int64) % self.q

    def zeros(self, *shape) -> np.ndarray:
        return np.zeros(shape, dtype=np.int64)

    def unit(self, n: int, i: int) -> np.ndarray:
        v = np.zeros(n, dtype=np.int64)
        v[i] = 1
        return v

    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        inner = a.shape[-1] if a.ndim else 1
        if (self.q - 1) ** 2 * max(inner, 1) < 2**62:
            return (a @ b) % self.q
        out = (a.astype(object) @ b.astype(object)) % self.q
        return np.asarray(out, dtype=np.int64)


def field_new(q: int) -> Field:
    return Field(q)


# ---------------------------------------------------------------------------
# elimination

def rref(matrix, field: Field) -> tuple[np.ndarray, list[int]]:
    """Reduced row-echelon form and pivot columns.

    Zero rows are dropped, so the returned array has exactly ``rank`` rows.
    """
    q = field.q
    a = np.array(matrix, dtype=np.int64, copy=True) % q
    if a.ndim == 1:
        a = a[None, :]
    rows, cols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        p = r + nz[0]
        if p != r:
            a[[r, p]] = a[[p, r]]
        a[r] = a[r] * field.inv(int(a[r, c])) % q
        col = a[:, c].copy()
        col[r] = 0
        nzr = np.nonzero(col)[0]
        if nzr.size:
            a[nzr] = (a[nzr] - np.outer(col[nzr], a[r])) % q
        pivots.append(c)
        r += 1
    return a[:r], pivots


def rank(matrix, field: Field) -> int:
    m = np.asarray(matrix)
    if m.size == 0:
        return 0
    return len(rref(m, field)[1])


def nullspace(matrix, field: Field) -> np.ndarray:
    """Basis (as rows) of ``{x : matrix @ x == 0}``."""
    m = np.asarray(matrix, dtype=np.int64)
    if m.ndim == 1:
        m = m[None, :]
    cols = m.shape[1]
    if m.shape[0] == 0:
        return np.eye(cols, dtype=np.int64)
    r, pivots = rref(m, field)
    free = [c for c in range(cols) if c not in pivots]
    basis = np.zeros((len(free), cols), dtype=np.int64)
    for k, f in enumerate(free):
        basis[k, f] = 1
        for i, p in enumerate(pivots):
            basis[k, p] = (-r[i, f]) % field.q
    return basis


def left_nullspace(matrix, field: Field) -> np.ndarray:
    """Basis (as rows) of ``{y : y @ matrix == 0}``."""
    return nullspace(np.asarray(matrix, dtype=np.int64).T, field)


def inverse(matrix, field: Field) -> np.ndarray:
    """Inverse of a square matrix by Gauss-Jordan on ``[M | I]``."""
    m = np.asarray(matrix, dtype=np.int64)
    n = m.shape[0]
    if m.shape != (n, n):
        raise ValueError("inverse needs a square matrix")
    aug = np.concatenate([m % field.q, np.eye(n, dtype=np.int64)], axis=1)
    r, pivots = rref(aug, field)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        raise DivisionByZero("matrix is singular")
    return r[:, n:]


def solve_left(matrix, target, field: Field) -> np.ndarray | None:
    """One solution ``y`` of ``y @ matrix == target``, or None if inconsistent."""
    m = np.asarray(matrix, dtype=np.int64) % field.q
    b = np.asarray(target, dtype=np.int64) % field.q
    rows = m.shape[0]
    # columns of the transposed system: M^T y = b
    aug = np.concatenate([m.T, b[:, None]], axis=1)
    r, pivots = rref(aug, field)
    if rows in pivots:
        return None
    y = np.zeros(rows, dtype=np.int64)
    for i, p in enumerate(pivots):
        y[p] = r[i, rows]
    return y


# ---------------------------------------------------------------------------
# subspaces

class Subspace:
    """A subspace of F_q^n held by its reduced row-echelon basis.

    Equal subspaces have identical ``basis`` arrays.
    """

    __slots__ = ("field", "n", "basis", "pivots")

    def __init__(self, basis: np.ndarray, pivots: list[int], n: int, field: Field):
        self.field = field
        self.n = n
        self.basis = basis
        self.pivots = pivots

    @classmethod
    def span(cls, vectors: Iterable[Sequence[int]] | np.ndarray, field: Field, n: int | None = None):
        vecs = [np.asarray(v, dtype=np.int64) for v in vectors]
        if n is None:
            if not vecs:
                raise ValueError("ambient dimension needed for an empty spanning set")
            n = len(vecs[0])
        if not vecs:
            return cls(np.zeros((0, n), dtype=np.int64), [], n, field)
        r, piv = rref(np.stack(vecs), field)
        return cls(r, piv, n, field)

    @classmethod
    def zero(cls, n: int, field: Field):
        return cls(np.zeros((0, n), dtype=np.int64), [], n, field)

    @property
    def dim(self) -> int:
        return len(self.pivots)

    def contains(self, v) -> bool:
        v = np.asarray(v, dtype=np.int64) % self.field.q
        if not self.pivots:
            return not v.any()
        res = (v - self.field.matmul(v[self.pivots], self.basis)) % self.field.q
        return not res.any()

    def __contains__(self, v) -> bool:
        return self.contains(v)

    def members_mask(self, vectors: np.ndarray) -> np.ndarray:
        """Boolean mask of which rows of ``vectors`` lie in the subspace."""
        v = np.asarray(vectors, dtype=np.int64)
        if not self.pivots:
            return ~v.any(axis=1)
        res = (v - self.field.matmul(v[:, self.pivots], self.basis)) % self.field.q
        return ~res.any(axis=1)

    def __add__(self, other: "Subspace") -> "Subspace":
        return Subspace.span(list(self.basis) + list(other.basis), self.field, self.n)

    def issubspace(self, other: "Subspace") -> bool:
        return all(other.contains(b) for b in self.basis)

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return (self.n == other.n and self.field == other.field
                and self.pivots == other.pivots and np.array_equal(self.basis, other.basis))

    def __hash__(self):
        return hash((self.n, self.field.q, self.basis.tobytes()))

    def __repr__(self):
        return f"Subspace(dim={self.dim}, n={self.n}, q={self.field.q})"


# ---------------------------------------------------------------------------
# batched elimination (Monte Carlo paths)

def batch_rank(mats: np.ndarray, field: Field) -> np.ndarray:
    """Ranks of a stack of matrices of shape ``(B, r, c)``."""
    q = field.q
    a = np.array(mats, dtype=np.int64, copy=True) % q
    B, r, c = a.shape
    ranks = np.zeros(B, dtype=np.int64)
    if r == 0 or c == 0 or B == 0:
        return ranks
    inv = field.inverses
    rows = np.arange(r)
    for j in range(c):
        mask = (a[:, :, j] != 0) & (rows[None, :] >= ranks[:, None])
        has = mask.any(axis=1)
        if not has.any():
            continue
        b = np.nonzero(has)[0]
        piv = mask[b].argmax(axis=1)
        tgt = ranks[b]
        prow = a[b, piv].copy()
        a[b, piv] = a[b, tgt]
        prow = prow * inv[prow[:, j]][:, None] % q
        a[b, tgt] = prow
        factors = a[b, :, j].copy()
        factors[np.arange(b.size), tgt] = 0
        a[b] = (a[b] - factors[:, :, None] * prow[:, None, :]) % q
        ranks[b] += 1
    return ranks

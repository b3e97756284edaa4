"""Exact linear algebra over prime fields GF(p).

Dense Gaussian elimination on small integer matrices.  Every value is
reduced mod p after each operation, so results are exact and
deterministic.
"""

from __future__ import annotations

import itertools
import os
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

import numpy as np

DEFAULT_BUDGET = 10**6
BUDGET_ENV = "STABLERANK_BUDGET"


class BudgetExceeded(RuntimeError):
    """An exhaustive search would enumerate more objects than allowed."""

    def __init__(self, needed: int, budget: int, what: str = "objects"):
        super().__init__(f"search needs {needed} {what}, budget is {budget}")
        self.needed = needed
        self.budget = budget


class PreconditionError(ValueError):
    """Input violates a documented precondition of an operation."""


def resolve_budget(budget: int | None = None) -> int:
    if budget is not None:
        return int(budget)
    env = os.environ.get(BUDGET_ENV)
    return int(env) if env else DEFAULT_BUDGET


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    return all(p % d for d in range(2, int(p**0.5) + 1))


def check_prime(p: int) -> int:
    if not isinstance(p, (int, np.integer)) or not is_prime(int(p)):
        raise ValueError(f"modulus must be prime, got {p!r}")
    return int(p)


def rational(x) -> Fraction:
    """Parse or coerce a non-negative rational (accepts ``"p/q"`` strings)."""
    q = Fraction(x) if not isinstance(x, Fraction) else x
    if q < 0:
        raise ValueError(f"expected a non-negative rational, got {x!r}")
    return q


class FieldScalar:
    """An element of GF(p)."""

    __slots__ = ("value", "modulus")

    def __init__(self, value: int, modulus: int):
        self.modulus = check_prime(modulus)
        self.value = int(value) % self.modulus

    def _other(self, other) -> int:
        if isinstance(other, FieldScalar):
            if other.modulus != self.modulus:
                raise ValueError("moduli differ")
            return other.value
        return int(other)

    def __add__(self, other):
        return FieldScalar(self.value + self._other(other), self.modulus)

    __radd__ = __add__

    def __sub__(self, other):
        return FieldScalar(self.value - self._other(other), self.modulus)

    def __mul__(self, other):
        return FieldScalar(self.value * self._other(other), self.modulus)

    __rmul__ = __mul__

    def __neg__(self):
        return FieldScalar(-self.value, self.modulus)

    def inverse(self) -> "FieldScalar":
        if self.value == 0:
            raise ZeroDivisionError("0 has no inverse")
        return FieldScalar(pow(self.value, -1, self.modulus), self.modulus)

    def __eq__(self, other):
        if isinstance(other, FieldScalar):
            return (self.value, self.modulus) == (other.value, other.modulus)
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.modulus))

    def __repr__(self):
        return f"FieldScalar({self.value}, {self.modulus})"


class Matrix:
    """Immutable dense matrix over GF(p).

    The entries live in a read-only ``int64`` numpy array with values in
    ``[0, p)``.  Shapes with zero rows or columns are allowed and stand for
    maps into or out of the zero space.
    """

    __slots__ = ("data", "p")

    def __init__(self, data, p: int):
        self.p = check_prime(p)
        arr = np.array(data, dtype=np.int64)
        if arr.ndim != 2:
            raise ValueError(f"matrix data must be 2-dimensional, got shape {arr.shape}")
        arr %= self.p
        arr.setflags(write=False)
        self.data = arr

    @classmethod
    def _wrap(cls, arr: np.ndarray, p: int) -> "Matrix":
        # trusted constructor: arr already reduced, 2-d int64
        m = object.__new__(cls)
        arr.setflags(write=False)
        m.data = arr
        m.p = p
        return m

    @classmethod
    def zeros(cls, rows: int, cols: int, p: int) -> "Matrix":
        return cls._wrap(np.zeros((rows, cols), dtype=np.int64), check_prime(p))

    @classmethod
    def identity(cls, n: int, p: int) -> "Matrix":
        return cls._wrap(np.eye(n, dtype=np.int64), check_prime(p))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], rows: int, p: int) -> "Matrix":
        if not columns:
            return cls.zeros(rows, 0, p)
        return cls(np.array(columns, dtype=np.int64).reshape(len(columns), rows).T, p)

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    @property
    def T(self) -> "Matrix":
        return Matrix._wrap(self.data.T.copy(), self.p)

    def _same_field(self, other: "Matrix"):
        if self.p != other.p:
            raise ValueError(f"moduli differ: {self.p} vs {other.p}")

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._same_field(other)
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        return Matrix._wrap((self.data @ other.data) % self.p, self.p)

    def __add__(self, other: "Matrix") -> "Matrix":
        self._same_field(other)
        return Matrix._wrap((self.data + other.data) % self.p, self.p)

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._same_field(other)
        return Matrix._wrap((self.data - other.data) % self.p, self.p)

    def __neg__(self) -> "Matrix":
        return Matrix._wrap((-self.data) % self.p, self.p)

    def scale(self, c: int) -> "Matrix":
        return Matrix._wrap((self.data * int(c)) % self.p, self.p)

    def apply(self, vec) -> np.ndarray:
        v = np.asarray(vec, dtype=np.int64).reshape(-1)
        if v.shape[0] != self.cols:
            raise ValueError(f"vector of length {v.shape[0]} for matrix with {self.cols} columns")
        return (self.data @ v) % self.p

    def is_zero(self) -> bool:
        return not self.data.any()

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.p == other.p and self.shape == other.shape and np.array_equal(self.data, other.data)

    def __hash__(self):
        return hash((self.p, self.shape, self.data.tobytes()))

    def __repr__(self):
        return f"Matrix({self.data.tolist()}, p={self.p})"

    def tolist(self) -> list[list[int]]:
        return self.data.tolist()


def block_diag(a: Matrix, b: Matrix) -> Matrix:
    a._same_field(b)
    out = np.zeros((a.rows + b.rows, a.cols + b.cols), dtype=np.int64)
    out[: a.rows, : a.cols] = a.data
    out[a.rows :, a.cols :] = b.data
    return Matrix._wrap(out, a.p)


def rref_array(a: np.ndarray, p: int) -> tuple[np.ndarray, tuple[int, ...]]:
    """Reduced row-echelon form of an integer array mod p.

    Returns the reduced array (same shape, zero rows at the bottom) and the
    pivot column indices.
    """
    a = np.array(a, dtype=np.int64) % p
    m, n = a.shape
    pivots: list[int] = []
    row = 0
    for col in range(n):
        if row == m:
            break
        nz = np.flatnonzero(a[row:, col])
        if nz.size == 0:
            continue
        piv = row + int(nz[0])
        if piv != row:
            a[[row, piv]] = a[[piv, row]]
        lead = int(a[row, col])
        if lead != 1:
            a[row] = (a[row] * pow(lead, -1, p)) % p
        factors = a[:, col].copy()
        factors[row] = 0
        hit = np.flatnonzero(factors)
        if hit.size:
            a[hit] = (a[hit] - np.outer(factors[hit], a[row])) % p
        pivots.append(col)
        row += 1
    return a, tuple(pivots)


def rref(M: Matrix) -> tuple[Matrix, tuple[int, ...]]:
    arr, piv = rref_array(M.data, M.p)
    return Matrix._wrap(arr, M.p), piv


def rank(M: Matrix) -> int:
    """Dimension of the row space of ``M``."""
    if M.rows == 0 or M.cols == 0:
        return 0
    return len(rref_array(M.data, M.p)[1])


class Subspace:
    """A linear subspace of GF(p)^n stored by its canonical RREF basis.

    Two subspaces are equal exactly when their RREF bases coincide.
    """

    __slots__ = ("ambient_dim", "p", "basis", "pivots")

    def __init__(self, ambient_dim: int, p: int, basis: np.ndarray, pivots: tuple[int, ...]):
        # use Subspace.span / Subspace.zero / Subspace.full instead
        self.ambient_dim = ambient_dim
        self.p = p
        basis.setflags(write=False)
        self.basis = basis
        self.pivots = pivots

    @classmethod
    def span(cls, vectors: Iterable[Sequence[int]], ambient_dim: int, p: int) -> "Subspace":
        p = check_prime(p)
        rows = [np.asarray(v, dtype=np.int64).reshape(-1) for v in vectors]
        for v in rows:
            if v.shape[0] != ambient_dim:
                raise ValueError(f"vector of length {v.shape[0]} in ambient dimension {ambient_dim}")
        if not rows:
            return cls.zero(ambient_dim, p)
        arr, piv = rref_array(np.vstack(rows), p)
        return cls(ambient_dim, p, arr[: len(piv)].copy(), piv)

    @classmethod
    def zero(cls, ambient_dim: int, p: int) -> "Subspace":
        return cls(ambient_dim, check_prime(p), np.zeros((0, ambient_dim), dtype=np.int64), ())

    @classmethod
    def full(cls, ambient_dim: int, p: int) -> "Subspace":
        return cls(ambient_dim, check_prime(p), np.eye(ambient_dim, dtype=np.int64), tuple(range(ambient_dim)))

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def basis_matrix(self) -> Matrix:
        """Basis vectors as the rows of a matrix."""
        return Matrix._wrap(self.basis.copy(), self.p)

    def inclusion(self) -> Matrix:
        """The ``ambient_dim x dim`` matrix whose columns are the basis."""
        return Matrix._wrap(self.basis.T.copy(), self.p)

    def coordinates(self, vec) -> np.ndarray:
        """Coordinates of a vector of this subspace in the RREF basis.

        Only valid for members; read off at the pivot columns.
        """
        v = np.asarray(vec, dtype=np.int64).reshape(-1)
        return v[list(self.pivots)] % self.p

    def contains(self, vec) -> bool:
        v = np.asarray(vec, dtype=np.int64).reshape(-1) % self.p
        if v.shape[0] != self.ambient_dim:
            raise ValueError("dimension mismatch")
        residue = (v - self.coordinates(v) @ self.basis) % self.p
        return not residue.any()

    def __add__(self, other: "Subspace") -> "Subspace":
        self._check(other)
        return Subspace.span(list(self.basis) + list(other.basis), self.ambient_dim, self.p)

    def _check(self, other: "Subspace"):
        if self.ambient_dim != other.ambient_dim or self.p != other.p:
            raise ValueError("subspaces live in different spaces")

    def __le__(self, other: "Subspace") -> bool:
        self._check(other)
        return all(other.contains(v) for v in self.basis)

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return (
            self.ambient_dim == other.ambient_dim
            and self.p == other.p
            and np.array_equal(self.basis, other.basis)
        )

    def __hash__(self):
        return hash((self.ambient_dim, self.p, self.basis.tobytes()))

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim}, p={self.p}, basis={self.basis.tolist()})"


def kernel(M: Matrix) -> Subspace:
    """Null space {x : Mx = 0} as a subspace of GF(p)^cols."""
    n = M.cols
    if M.rows == 0:
        return Subspace.full(n, M.p)
    R, piv = rref_array(M.data, M.p)
    free = [j for j in range(n) if j not in piv]
    vecs = []
    for f in free:
        x = np.zeros(n, dtype=np.int64)
        x[f] = 1
        for i, c in enumerate(piv):
            x[c] = (-R[i, f]) % M.p
        vecs.append(x)
    return Subspace.span(vecs, n, M.p)


def image(M: Matrix) -> Subspace:
    """Column space of ``M`` as a subspace of GF(p)^rows."""
    return Subspace.span(list(M.data.T), M.rows, M.p)


def quotient_projection(S: Subspace) -> Matrix:
    """Surjection GF(p)^n -> GF(p)^n / S with kernel exactly ``S``.

    Coset coordinates are the non-pivot entries after clearing the pivot
    entries with the RREF basis.
    """
    n, p = S.ambient_dim, S.p
    nonpiv = [j for j in range(n) if j not in S.pivots]
    Q = np.zeros((len(nonpiv), n), dtype=np.int64)
    for r, j in enumerate(nonpiv):
        Q[r, j] = 1
    if S.dim:
        # x -> x[nonpiv] - B[:, nonpiv]^T x[piv]
        Q[:, list(S.pivots)] = (-S.basis[:, nonpiv].T) % p
    return Matrix._wrap(Q, p)


def quotient_section(S: Subspace) -> Matrix:
    """A right inverse of :func:`quotient_projection` (standard vectors at non-pivots)."""
    n = S.ambient_dim
    nonpiv = [j for j in range(n) if j not in S.pivots]
    E = np.zeros((n, len(nonpiv)), dtype=np.int64)
    for c, j in enumerate(nonpiv):
        E[j, c] = 1
    return Matrix._wrap(E, S.p)


def cokernel_projection(M: Matrix) -> Matrix:
    """Surjection out of GF(p)^rows whose kernel is the image of ``M``."""
    return quotient_projection(image(M))


def gaussian_binomial(n: int, d: int, p: int) -> int:
    """Number of d-dimensional subspaces of GF(p)^n."""
    if d < 0 or d > n:
        return 0
    num = den = 1
    for i in range(d):
        num *= p ** (n - i) - 1
        den *= p ** (i + 1) - 1
    return num // den


def enumerate_subspaces(n: int, d: int, p: int, budget: int | None = None) -> Iterator[Subspace]:
    """Yield every d-dimensional subspace of GF(p)^n exactly once.

    Order: pivot patterns lexicographically, then the free RREF entries
    lexicographically.  Raises :class:`BudgetExceeded` up front when the
    Gaussian binomial count exceeds ``budget``.
    """
    p = check_prime(p)
    if not 0 <= d <= n:
        raise ValueError(f"need 0 <= d <= n, got d={d}, n={n}")
    budget = resolve_budget(budget)
    count = gaussian_binomial(n, d, p)
    if count > budget:
        raise BudgetExceeded(count, budget, "subspaces")
    return _enumerate(n, d, p)


def _enumerate(n: int, d: int, p: int) -> Iterator[Subspace]:
    for pivots in itertools.combinations(range(n), d):
        yield from subspaces_with_pivots(n, pivots, p)


def subspaces_with_pivots(n: int, pivots: tuple[int, ...], p: int) -> Iterator[Subspace]:
    """All subspaces of GF(p)^n whose RREF basis has exactly these pivots.

    Pivot patterns partition the enumeration, which is how parallel
    searches split the work.
    """
    d = len(pivots)
    pivset = set(pivots)
    free = [(i, j) for i, c in enumerate(pivots) for j in range(c + 1, n) if j not in pivset]
    for values in itertools.product(range(p), repeat=len(free)):
        B = np.zeros((d, n), dtype=np.int64)
        for i, c in enumerate(pivots):
            B[i, c] = 1
        for (i, j), val in zip(free, values):
            B[i, j] = val
        yield Subspace(n, p, B, tuple(pivots))


def sum_contains(L: Subspace, Ls: Subspace, x) -> bool:
    """Whether ``x`` lies in ``L + Ls`` (rank of the stacked bases does not grow)."""
    L._check(Ls)
    v = np.asarray(x, dtype=np.int64).reshape(-1)
    if v.shape[0] != L.ambient_dim:
        raise ValueError(f"vector of length {v.shape[0]} in ambient dimension {L.ambient_dim}")
    stacked = np.vstack([L.basis, Ls.basis]) if (L.dim + Ls.dim) else np.zeros((0, L.ambient_dim), dtype=np.int64)
    base = len(rref_array(stacked, L.p)[1]) if stacked.shape[0] else 0
    grown = len(rref_array(np.vstack([stacked, v[None, :]]), L.p)[1])
    return grown == base


def in_span(vectors: Sequence[Sequence[int]], target: Sequence[int], p: int) -> bool:
    """Pure-Python membership test for tiny systems (hot loop of the searches)."""
    basis: dict[int, list[int]] = {}
    for vec in vectors:
        v = _reduce(list(vec), basis, p)
        lead = next((i for i, c in enumerate(v) if c), None)
        if lead is not None:
            inv = pow(v[lead], -1, p)
            basis[lead] = [(c * inv) % p for c in v]
    return not any(_reduce(list(target), basis, p))


def _reduce(v: list[int], basis: dict[int, list[int]], p: int) -> list[int]:
    for lead, row in basis.items():
        c = v[lead] % p
        if c:
            v = [(a - c * b) % p for a, b in zip(v, row)]
    return v

"""Exact arithmetic and linear algebra over prime fields GF(p).

Vectors, matrices and tensors are plain ``numpy`` integer arrays with entries
reduced into ``[0, p)``.  Every routine takes the field explicitly, so arrays
never carry hidden state.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence

import numpy as np

from .errors import BudgetExceeded, DimensionMismatch, LinearlyDependentInput, SingularMatrix

DTYPE = np.int64
MAX_PRIME = 251
DEFAULT_ENUMERATION_BUDGET = 1 << 16


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    f = 2
    while f * f <= n:
        if n % f == 0:
            return False
        f += 1
    return True


@dataclass(frozen=True)
class GF:
    """The prime field with ``p`` elements, ``2 <= p <= 251``."""

    p: int

    def __post_init__(self):
        p = self.p
        if isinstance(p, bool) or not isinstance(p, (int, np.integer)):
            raise TypeError(f"field modulus must be an integer, got {p!r}")
        object.__setattr__(self, "p", int(p))
        if not 2 <= self.p <= MAX_PRIME or not _is_prime(self.p):
            raise ValueError(f"p={p} is not a prime in [2, {MAX_PRIME}]")

    def __call__(self, x) -> np.ndarray:
        """Reduce ``x`` into an array of field elements."""
        return np.mod(np.asarray(x, dtype=DTYPE), self.p)

    def __repr__(self):
        return f"GF({self.p})"

    def inv(self, x: int) -> int:
        x = int(x) % self.p
        if x == 0:
            raise ZeroDivisionError("0 has no inverse")
        return pow(x, -1, self.p)

    def zeros(self, shape) -> np.ndarray:
        return np.zeros(shape, dtype=DTYPE)

    def random(self, rng: np.random.Generator, shape) -> np.ndarray:
        return rng.integers(0, self.p, size=shape, dtype=DTYPE)

    def vectors(self, n: int) -> np.ndarray:
        """All ``p**n`` vectors of length ``n`` as rows, lexicographic order."""
        return _all_vectors(self.p, n)

    def nonzero_vectors(self, n: int) -> np.ndarray:
        return _all_vectors(self.p, n)[1:]

    def normalized_vectors(self, n: int) -> np.ndarray:
        """Nonzero vectors whose first nonzero coordinate is 1 (one per line)."""
        vs = _all_vectors(self.p, n)[1:]
        lead = vs[np.arange(len(vs)), (vs != 0).argmax(axis=1)]
        return vs[lead == 1]


@lru_cache(maxsize=None)
def _all_vectors(p: int, n: int) -> np.ndarray:
    if n == 0:
        out = np.zeros((1, 0), dtype=DTYPE)
    else:
        out = np.array(list(itertools.product(range(p), repeat=n)), dtype=DTYPE)
    out.flags.writeable = False
    return out


def as_matrix(m, field: GF, cols: int | None = None) -> np.ndarray:
    a = field(m)
    if a.ndim == 1 and a.size == 0 and cols is not None:
        a = a.reshape(0, cols)
    if a.ndim != 2:
        raise DimensionMismatch(f"expected a 2-d array, got shape {a.shape}")
    return a


def rref(m, field: GF) -> tuple[np.ndarray, int, list[int]]:
    """Reduced row-echelon form of ``m``.

    Returns ``(R, rank, pivot_columns)``; ``R`` has the shape of ``m`` with
    the zero rows at the bottom.
    """
    p = field.p
    R = as_matrix(m, field).copy()
    rows, cols = R.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(R[r:, c])
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            R[[r, k]] = R[[k, r]]
        R[r] = (R[r] * field.inv(R[r, c])) % p
        col = R[:, c].copy()
        col[r] = 0
        if col.any():
            R = (R - np.outer(col, R[r])) % p
        pivots.append(c)
        r += 1
    return R, r, pivots


def rank(m, field: GF) -> int:
    return rref(m, field)[1]


def solve_linear(a, b, field: GF) -> np.ndarray | None:
    """One solution ``x`` of ``a @ x = b``, or ``None`` when inconsistent.

    ``b`` may be a vector or a matrix of right-hand sides (solved column by
    column).  Free variables are set to zero, so the answer is deterministic.
    """
    a = as_matrix(a, field)
    b = field(b)
    vector = b.ndim == 1
    B = b.reshape(-1, 1) if vector else b
    if B.ndim != 2 or B.shape[0] != a.shape[0]:
        raise DimensionMismatch(f"system of shape {a.shape} with right-hand side {b.shape}")
    n = a.shape[1]
    R, rk, pivots = rref(np.hstack([a, B]), field)
    if any(c >= n for c in pivots):
        return None
    x = np.zeros((n, B.shape[1]), dtype=DTYPE)
    x[pivots] = R[:rk, n:]
    return x[:, 0] if vector else x


def nullspace(m, field: GF) -> np.ndarray:
    """Rows spanning ``{x : m @ x = 0}``, one per free column of ``rref(m)``."""
    m = as_matrix(m, field)
    R, rk, pivots = rref(m, field)
    n = m.shape[1]
    free = [c for c in range(n) if c not in pivots]
    basis = np.zeros((len(free), n), dtype=DTYPE)
    for row, f in enumerate(free):
        basis[row, f] = 1
        basis[row, pivots] = (-R[:rk, f]) % field.p
    return basis


def inverse(m, field: GF) -> np.ndarray:
    m = as_matrix(m, field)
    n = m.shape[0]
    if m.shape != (n, n):
        raise DimensionMismatch(f"cannot invert a {m.shape} matrix")
    R, rk, _ = rref(np.hstack([m, np.eye(n, dtype=DTYPE)]), field)
    if n and (rk < n or not np.array_equal(R[:, :n], np.eye(n, dtype=DTYPE))):
        raise SingularMatrix("matrix is singular")
    return R[:, n:]


def matmul(a, b, field: GF) -> np.ndarray:
    return np.mod(np.asarray(a, dtype=DTYPE) @ np.asarray(b, dtype=DTYPE), field.p)


@dataclass(frozen=True, eq=False)
class DualFamily:
    """Vectors ``duals[i]`` with ``duals[i] . originals[j] == (i == j)``."""

    originals: np.ndarray
    duals: np.ndarray

    def __len__(self):
        return len(self.originals)


def dual_family(vectors, field: GF, n: int | None = None) -> DualFamily:
    """Canonical dual family of a linearly independent family.

    The duals vanish outside the pivot columns of the family's echelon form;
    on the pivot columns they are the inverse transpose of the pivot
    submatrix.
    """
    V = as_matrix(vectors, field, cols=n)
    r, n = V.shape
    _, rk, pivots = rref(V, field)
    if rk < r:
        raise LinearlyDependentInput(f"family of {r} vectors has rank {rk}")
    D = np.zeros((r, n), dtype=DTYPE)
    if r:
        D[:, pivots] = inverse(V[:, pivots], field).T
    V.flags.writeable = False
    D.flags.writeable = False
    return DualFamily(V, D)


class Subspace:
    """A subspace of GF(p)^n stored by its canonical RREF basis.

    Two subspaces are equal exactly when their basis matrices coincide.
    """

    __slots__ = ("basis", "ambient_dim", "field", "_key", "_projector")

    def __init__(self, basis, ambient_dim: int, field: GF, _trusted: bool = False):
        if _trusted:
            B = np.asarray(basis, dtype=DTYPE)
        else:
            R, rk, _ = rref(as_matrix(basis, field, cols=ambient_dim), field)
            B = R[:rk]
        if B.shape[1] != ambient_dim:
            raise DimensionMismatch(f"basis width {B.shape[1]} != ambient dimension {ambient_dim}")
        B = B.copy()
        B.flags.writeable = False
        self.basis = B
        self.ambient_dim = int(ambient_dim)
        self.field = field
        self._key = (field.p, self.ambient_dim, B.shape[0], B.tobytes())
        self._projector = None

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def __eq__(self, other):
        return isinstance(other, Subspace) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __lt__(self, other):
        return (self.dim, self.basis.ravel().tolist()) < (other.dim, other.basis.ravel().tolist())

    def __repr__(self):
        rows = ", ".join(str(tuple(int(x) for x in r)) for r in self.basis)
        return f"Subspace(dim={self.dim}, n={self.ambient_dim}, p={self.field.p}, basis=[{rows}])"

    def contains(self, v) -> bool:
        v = self.field(v).reshape(1, -1)
        return rank(np.vstack([self.basis, v]), self.field) == self.dim

    def annihilator(self) -> np.ndarray:
        """Rows spanning the vectors ``u`` with ``u . a = 0`` for all ``a`` in the subspace."""
        return nullspace(self.basis, self.field)

    def complement_projector(self) -> np.ndarray:
        """``I - sum_i a_i a_i*^T`` for the canonical basis and its canonical duals.

        Its kernel is exactly this subspace.
        """
        if self._projector is None:
            n = self.ambient_dim
            Q = np.eye(n, dtype=DTYPE)
            if self.dim:
                duals = dual_family(self.basis, self.field).duals
                Q = (Q - self.basis.T @ duals) % self.field.p
            Q.flags.writeable = False
            self._projector = Q
        return self._projector

    def elements(self) -> np.ndarray:
        coeffs = self.field.vectors(self.dim)
        if self.dim == 0:
            return np.zeros((1, self.ambient_dim), dtype=DTYPE)
        return (coeffs @ self.basis) % self.field.p


def subspace_from_vectors(vectors, ambient_dim: int, field: GF) -> Subspace:
    return Subspace(as_matrix(vectors, field, cols=ambient_dim), ambient_dim, field)


def zero_subspace(ambient_dim: int, field: GF) -> Subspace:
    return Subspace(np.zeros((0, ambient_dim), dtype=DTYPE), ambient_dim, field, _trusted=True)


def full_subspace(ambient_dim: int, field: GF) -> Subspace:
    return Subspace(np.eye(ambient_dim, dtype=DTYPE), ambient_dim, field, _trusted=True)


def _check_shared(spaces: Sequence[Subspace]) -> tuple[int, GF]:
    if not spaces:
        raise DimensionMismatch("need at least one subspace")
    n, field = spaces[0].ambient_dim, spaces[0].field
    for s in spaces:
        if s.ambient_dim != n or s.field != field:
            raise DimensionMismatch("subspaces live in different ambient spaces")
    return n, field


def subspace_sum(*spaces: Subspace) -> Subspace:
    n, field = _check_shared(spaces)
    return Subspace(np.vstack([s.basis for s in spaces]).reshape(-1, n), n, field)


def subspace_intersect(*spaces: Subspace) -> Subspace:
    n, field = _check_shared(spaces)
    ann = np.vstack([s.annihilator() for s in spaces]).reshape(-1, n)
    return Subspace(nullspace(ann, field).reshape(-1, n), n, field)


def subspace_contains(space: Subspace, other) -> bool:
    """Whether ``other`` (a Subspace or a vector) lies in ``space``."""
    if isinstance(other, Subspace):
        _check_shared([space, other])
        return subspace_sum(space, other).dim == space.dim
    return space.contains(other)


def is_direct_sum(*spaces: Subspace) -> bool:
    return subspace_sum(*spaces).dim == sum(s.dim for s in spaces)


def gaussian_binomial(n: int, r: int, p: int) -> int:
    """Number of ``r``-dimensional subspaces of GF(p)^n."""
    if r < 0 or r > n:
        return 0
    num = den = 1
    for i in range(r):
        num *= p**n - p**i
        den *= p**r - p**i
    return num // den


def count_ordered_bases(r: int, p: int) -> int:
    """``(p^r - 1)(p^r - p)...(p^r - p^{r-1})``: ordered bases of an r-dim space."""
    out = 1
    for i in range(r):
        out *= p**r - p**i
    return out


def enumerate_subspaces(n: int, r: int, field: GF, budget: int | None = None) -> Iterator[Subspace]:
    """Every ``r``-dimensional subspace of GF(p)^n exactly once.

    Subspaces come out in lexicographic order of their row-major canonical
    basis matrices.  Raises :class:`BudgetExceeded` when ``p**n`` exceeds
    ``budget``.
    """
    if not 0 <= r <= n:
        raise ValueError(f"need 0 <= r <= n, got r={r}, n={n}")
    budget = DEFAULT_ENUMERATION_BUDGET if budget is None else budget
    if field.p**n > budget:
        raise BudgetExceeded(f"p^n = {field.p}^{n} exceeds enumeration budget {budget}")
    return iter(_subspaces(n, r, field))


@lru_cache(maxsize=None)
def _subspaces(n: int, r: int, field: GF) -> tuple[Subspace, ...]:
    p = field.p
    mats = []
    for pivots in itertools.combinations(range(n), r):
        free = [(k, c) for k, pk in enumerate(pivots) for c in range(pk + 1, n) if c not in pivots]
        for values in itertools.product(range(p), repeat=len(free)):
            B = np.zeros((r, n), dtype=DTYPE)
            for k, pk in enumerate(pivots):
                B[k, pk] = 1
            for (k, c), v in zip(free, values):
                B[k, c] = v
            mats.append(B)
    mats.sort(key=lambda B: tuple(B.ravel().tolist()))
    return tuple(Subspace(B, n, field, _trusted=True) for B in mats)


def independent(vectors, field: GF, n: int | None = None) -> bool:
    V = as_matrix(vectors, field, cols=n)
    return rank(V, field) == V.shape[0]


def random_independent(rng: np.random.Generator, r: int, n: int, field: GF, tries: int = 64) -> np.ndarray | None:
    """``r`` random linearly independent vectors in GF(p)^n, or ``None``."""
    if r > n:
        return None
    for _ in range(tries):
        V = field.random(rng, (r, n))
        if rank(V, field) == r:
            return V
    return None


def random_invertible(rng: np.random.Generator, n: int, field: GF) -> np.ndarray:
    while True:
        G = field.random(rng, (n, n))
        if rank(G, field) == n:
            return G


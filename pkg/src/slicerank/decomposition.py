"""Slice-rank and tensor-rank decompositions as immutable values."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionMismatch
from .field import DTYPE, GF, Subspace, rank, subspace_from_vectors
from .tensor import complement_dims, outer, place


def _frozen(x) -> np.ndarray:
    a = np.array(x, dtype=DTYPE)
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class SliceTerm:
    """One summand ``a(x_axis) * b(x without x_axis)``."""

    axis: int
    a: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "axis", int(self.axis))
        object.__setattr__(self, "a", _frozen(self.a))
        object.__setattr__(self, "b", _frozen(self.b))

    def same_as(self, other: SliceTerm) -> bool:
        return (
            self.axis == other.axis
            and np.array_equal(self.a, other.a)
            and self.b.shape == other.b.shape
            and np.array_equal(self.b, other.b)
        )


@dataclass(frozen=True, eq=False)
class SliceDecomposition:
    """``sum_j sum_i a_{j,i}(x_j) b_{j,i}(x without x_j)``.

    Terms are kept grouped by axis, in a stable order within each axis, so the
    term ``(j, i)`` is the ``i``-th term on axis ``j``.  Linear independence of
    the per-axis families is checked by :func:`validate`, not here.
    """

    dims: tuple[int, ...]
    field: GF
    terms: tuple[SliceTerm, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "dims", tuple(int(n) for n in self.dims))
        terms = tuple(t if isinstance(t, SliceTerm) else SliceTerm(*t) for t in self.terms)
        object.__setattr__(self, "terms", tuple(sorted(terms, key=lambda t: t.axis)))

    @classmethod
    def from_families(cls, dims, field: GF, a_families: Sequence, b_families: Sequence) -> SliceDecomposition:
        """Build from per-axis stacks: ``a_families[j]`` is ``(r_j, n_j)``, ``b_families[j]`` is ``(r_j, ...)``."""
        terms = []
        for j, (A, B) in enumerate(zip(a_families, b_families)):
            for a, b in zip(A, B):
                terms.append(SliceTerm(j, a, b))
        return cls(tuple(dims), field, tuple(terms))

    @property
    def order(self) -> int:
        return len(self.dims)

    @property
    def shape(self) -> tuple[int, ...]:
        counts = [0] * self.order
        for t in self.terms:
            counts[t.axis] += 1
        return tuple(counts)

    @property
    def length(self) -> int:
        return len(self.terms)

    def axis_terms(self, j: int) -> tuple[SliceTerm, ...]:
        return tuple(t for t in self.terms if t.axis == j)

    def position(self, j: int, i: int) -> int:
        """Index into ``terms`` of the ``i``-th term on axis ``j``."""
        start = sum(1 for t in self.terms if t.axis < j)
        if not 0 <= i < self.shape[j]:
            raise IndexError(f"axis {j} has {self.shape[j]} terms, no index {i}")
        return start + i

    def term(self, j: int, i: int) -> SliceTerm:
        return self.terms[self.position(j, i)]

    def a_family(self, j: int) -> np.ndarray:
        return np.array([t.a for t in self.axis_terms(j)], dtype=DTYPE).reshape(-1, self.dims[j])

    def b_family(self, j: int) -> np.ndarray:
        comp = complement_dims(self.dims, j)
        return np.array([t.b for t in self.axis_terms(j)], dtype=DTYPE).reshape((-1,) + comp)

    def replace_b(self, updates: dict[tuple[int, int], np.ndarray]) -> SliceDecomposition:
        """New decomposition with ``b_{j,i}`` replaced for each key ``(j, i)``."""
        terms = list(self.terms)
        for (j, i), b in updates.items():
            pos = self.position(j, i)
            terms[pos] = SliceTerm(j, terms[pos].a, self.field(b))
        return SliceDecomposition(self.dims, self.field, tuple(terms))

    def same_as(self, other: SliceDecomposition) -> bool:
        return (
            self.dims == other.dims
            and self.field == other.field
            and self.length == other.length
            and all(s.same_as(o) for s, o in zip(self.terms, other.terms))
        )

    def __add__(self, other: SliceDecomposition) -> SliceDecomposition:
        """Concatenation of the two term lists (assembles to the sum)."""
        if self.dims != other.dims or self.field != other.field:
            raise DimensionMismatch("decompositions of different ambient shapes")
        return SliceDecomposition(self.dims, self.field, self.terms + other.terms)


@dataclass(frozen=True, eq=False)
class TensorRankDecomposition:
    """``sum_i a_{1,i}(x_1) ... a_{d,i}(x_d)``; each term is a d-tuple of vectors."""

    dims: tuple[int, ...]
    field: GF
    terms: tuple[tuple[np.ndarray, ...], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "dims", tuple(int(n) for n in self.dims))
        terms = tuple(tuple(_frozen(v) for v in term) for term in self.terms)
        for term in terms:
            if len(term) != len(self.dims):
                raise DimensionMismatch(f"term with {len(term)} factors for order {len(self.dims)}")
            for v, n in zip(term, self.dims):
                if v.shape != (n,):
                    raise DimensionMismatch(f"factor of shape {v.shape}, expected ({n},)")
                if not v.any():
                    raise ValueError("tensor rank terms may not contain a zero vector")
        object.__setattr__(self, "terms", terms)

    @property
    def length(self) -> int:
        return len(self.terms)

    def factors(self, j: int) -> np.ndarray:
        return np.array([term[j] for term in self.terms], dtype=DTYPE).reshape(-1, self.dims[j])


def assemble(dec: SliceDecomposition) -> np.ndarray:
    t = np.zeros(dec.dims, dtype=DTYPE)
    for term in dec.terms:
        t = t + place(term.a, term.axis, term.b)
    return dec.field(t)


def assemble_tensor_rank(dec: TensorRankDecomposition) -> np.ndarray:
    t = np.zeros(dec.dims, dtype=DTYPE)
    for term in dec.terms:
        t = (t + outer(term, dec.field)) % dec.field.p
    return t


@dataclass
class ValidationReport:
    violations: list[str] = dc_field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok

    def __str__(self):
        return "ok" if self.ok else "\n".join(self.violations)


def validate(dec: SliceDecomposition) -> ValidationReport:
    """Report shape problems and per-axis linear dependence of the a-families."""
    report = ValidationReport()
    p = dec.field.p
    for k, term in enumerate(dec.terms):
        j = term.axis
        if not 0 <= j < dec.order:
            report.violations.append(f"shape: term {k} has axis {j} outside [0, {dec.order})")
            continue
        if term.a.shape != (dec.dims[j],):
            report.violations.append(f"shape: a-vector of term ({j}, {k}) has shape {term.a.shape}, expected ({dec.dims[j]},)")
        want = complement_dims(dec.dims, j)
        if term.b.shape != want:
            report.violations.append(f"shape: b-tensor of term on axis {j} has dims {term.b.shape}, expected {want}")
        if term.a.size and (term.a.min() < 0 or term.a.max() >= p) or term.b.size and (term.b.min() < 0 or term.b.max() >= p):
            report.violations.append(f"range: term {k} has entries outside [0, {p})")
    if report.violations:
        return report
    for j in range(dec.order):
        A = dec.a_family(j)
        rk = rank(A, dec.field)
        if rk < A.shape[0]:
            report.violations.append(f"independence: the {A.shape[0]} a-vectors on axis {j} have rank {rk}")
    return report


def subspace_tuple(dec: SliceDecomposition) -> tuple[Subspace, ...]:
    return tuple(subspace_from_vectors(dec.a_family(j), n, dec.field) for j, n in enumerate(dec.dims))


def single_term(dims, field: GF, axis: int, a, b) -> SliceDecomposition:
    return SliceDecomposition(tuple(dims), field, (SliceTerm(axis, field(a), field(b)),))


def empty_decomposition(dims: Iterable[int], field: GF) -> SliceDecomposition:
    return SliceDecomposition(tuple(dims), field, ())

"""Families of decompositions sharing a common center, and merging them.

Every petal decomposition of one tensor ``T`` uses, on axis ``j``, the
shared center functions ``a^0_{j,i}`` (with petal-specific b's) and its own
petal functions ``a^theta_{j,i}``.  When there are more than ``d`` petals and
all one-variable functions on each axis are jointly independent, ``T``
decomposes using the center functions alone.  :func:`merge_to_center` finds
that decomposition by one peeling solve.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .decomposition import SliceDecomposition, SliceTerm, ValidationReport, assemble
from .errors import DimensionMismatch, DimsTooSmall, HypothesesViolated, InternalContradiction
from .field import DTYPE, GF, rank, random_independent
from .rank import peel_families
from .tensor import complement_dims
from .transforms import slice_by_axis, star_shift


def _stack(vs, n: int) -> np.ndarray:
    return np.asarray(vs, dtype=DTYPE).reshape(-1, n)


@dataclass(frozen=True, eq=False)
class Petal:
    """One decomposition in the family.

    ``center_b[j]`` pairs with the center functions on axis ``j``; ``a[j]``
    and ``b[j]`` are this petal's own functions and their partners.
    """

    center_b: tuple[np.ndarray, ...]
    a: tuple[np.ndarray, ...]
    b: tuple[np.ndarray, ...]

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(len(x) for x in self.a)


@dataclass(frozen=True, eq=False)
class SunflowerFamily:
    dims: tuple[int, ...]
    field: GF
    center: tuple[np.ndarray, ...]
    petals: tuple[Petal, ...]

    def __post_init__(self):
        dims = tuple(int(n) for n in self.dims)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "center", tuple(self.field(_stack(c, n)) for c, n in zip(self.center, dims)))
        petals = []
        for pt in self.petals:
            petals.append(
                Petal(
                    tuple(self.field(np.asarray(b, dtype=DTYPE).reshape((-1,) + complement_dims(dims, j))) for j, b in enumerate(pt.center_b)),
                    tuple(self.field(_stack(a, n)) for a, n in zip(pt.a, dims)),
                    tuple(self.field(np.asarray(b, dtype=DTYPE).reshape((-1,) + complement_dims(dims, j))) for j, b in enumerate(pt.b)),
                )
            )
        object.__setattr__(self, "petals", tuple(petals))

    @property
    def order(self) -> int:
        return len(self.dims)

    @property
    def h(self) -> int:
        return len(self.petals)

    @property
    def center_shape(self) -> tuple[int, ...]:
        return tuple(len(c) for c in self.center)

    def decomposition(self, theta: int) -> SliceDecomposition:
        """Petal ``theta`` as a slice decomposition: center terms first on each axis."""
        pt = self.petals[theta]
        terms = []
        for j in range(self.order):
            terms += [SliceTerm(j, a, b) for a, b in zip(self.center[j], pt.center_b[j])]
            terms += [SliceTerm(j, a, b) for a, b in zip(pt.a[j], pt.b[j])]
        return SliceDecomposition(self.dims, self.field, tuple(terms))

    def tensor(self) -> np.ndarray:
        if not self.petals:
            raise ValueError("family has no petals")
        return assemble(self.decomposition(0))


def _shape_problems(fam: SunflowerFamily) -> list[str]:
    out = []
    d = fam.order
    if len(fam.center) != d:
        return [f"shape: center has {len(fam.center)} axes, expected {d}"]
    for th, pt in enumerate(fam.petals):
        if not len(pt.center_b) == len(pt.a) == len(pt.b) == d:
            out.append(f"shape: petal {th} does not have {d} axes")
            continue
        for j in range(d):
            if len(pt.center_b[j]) != len(fam.center[j]):
                out.append(f"shape: petal {th} has {len(pt.center_b[j])} center partners on axis {j}, center has {len(fam.center[j])}")
            if len(pt.b[j]) != len(pt.a[j]):
                out.append(f"shape: petal {th} has {len(pt.a[j])} functions but {len(pt.b[j])} partners on axis {j}")
    return out


def check_hypotheses(fam: SunflowerFamily) -> ValidationReport:
    """Common tensor, joint independence per axis, and more petals than axes."""
    report = ValidationReport(_shape_problems(fam))
    if report.violations:
        return report
    field = fam.field
    if fam.petals:
        T = fam.tensor()
        for th in range(1, fam.h):
            if not np.array_equal(assemble(fam.decomposition(th)), T):
                report.violations.append(f"common tensor: petal {th} assembles to a different tensor than petal 0")
    for j, n in enumerate(fam.dims):
        fams = [fam.center[j]] + [pt.a[j] for pt in fam.petals]
        allv = np.vstack(fams).reshape(-1, n)
        rk = rank(allv, field)
        if rk < len(allv):
            report.violations.append(f"independence: the {len(allv)} center and petal functions on axis {j} have rank {rk}")
    if fam.h <= fam.order:
        report.violations.append(f"petal count: h={fam.h} <= d={fam.order}")
    return report


def merge_to_center(fam: SunflowerFamily) -> SliceDecomposition:
    """A decomposition of the common tensor using only the center functions."""
    report = check_hypotheses(fam)
    if not report.ok:
        raise HypothesesViolated(str(report), report.violations)
    T = fam.tensor()
    bs, residual = peel_families(T, fam.center, fam.field)
    if residual.any():
        raise InternalContradiction("hypotheses hold but the tensor is not in the span of the center functions")
    return SliceDecomposition.from_families(fam.dims, fam.field, fam.center, bs)


def generate_sunflower_fixture(
    seed: int,
    dims: Sequence[int],
    field: GF,
    center_shape: Sequence[int],
    petal_shape: Sequence[int],
    h: int | None = None,
    shifts: int = 6,
    tries: int = 64,
) -> SunflowerFamily:
    """Pseudo-random family satisfying the hypotheses.

    The center decomposition has random b's.  Each petal starts as the center
    decomposition plus its own functions with zero partners, then receives
    ``shifts`` random star shifts, which keep the tensor fixed while mixing
    b's between center and petal terms.
    """
    dims = tuple(int(n) for n in dims)
    d = len(dims)
    h = d + 1 if h is None else int(h)
    if len(center_shape) != d or len(petal_shape) != d:
        raise DimensionMismatch("center and petal shapes need one entry per axis")
    rng = np.random.default_rng(seed)
    families = []
    for j, n in enumerate(dims):
        need = center_shape[j] + h * petal_shape[j]
        if need > n:
            raise DimsTooSmall(f"axis {j} needs {need} independent vectors in dimension {n}")
        V = random_independent(rng, need, n, field, tries=tries)
        if V is None:
            raise DimsTooSmall(f"no {need} independent vectors found on axis {j} after {tries} draws")
        families.append(V)
    center = tuple(V[: center_shape[j]] for j, V in enumerate(families))
    center_b = tuple(field.random(rng, (center_shape[j],) + complement_dims(dims, j)) for j in range(d))

    petals = []
    for th in range(h):
        own = tuple(V[center_shape[j] + th * petal_shape[j]: center_shape[j] + (th + 1) * petal_shape[j]] for j, V in enumerate(families))
        zero_b = tuple(np.zeros((petal_shape[j],) + complement_dims(dims, j), dtype=DTYPE) for j in range(d))
        dec = SunflowerFamily(dims, field, center, (Petal(center_b, own, zero_b),)).decomposition(0)
        shape = dec.shape
        live = [j for j in range(d) if shape[j] > 0]
        if len(live) >= 2:
            for _ in range(shifts):
                size = int(rng.integers(2, len(live) + 1))
                J = sorted(int(x) for x in rng.choice(live, size=size, replace=False))
                rest = complement_dims(dims, J)
                cs = [field.random(rng, rest) for _ in J[:-1]]
                cs.append(field(-np.sum(cs, axis=0)) if cs else field.zeros(rest))
                idx = [int(rng.integers(shape[j])) for j in J]
                dec = star_shift(dec, J, idx, cs)
        cb = tuple(dec.b_family(j)[: center_shape[j]] for j in range(d))
        pb = tuple(dec.b_family(j)[center_shape[j]:] for j in range(d))
        petals.append(Petal(cb, own, pb))
    return SunflowerFamily(dims, field, center, tuple(petals))


def family_from_decompositions(decs: Sequence[SliceDecomposition], center: Sequence | None = None) -> SunflowerFamily:
    """Family whose petals are ``decs``; the first ``r^0_j`` terms per axis are the center terms."""
    if not decs:
        raise ValueError("need at least one decomposition")
    dims, field = decs[0].dims, decs[0].field
    d = len(dims)
    center = tuple(np.zeros((0, n), dtype=DTYPE) for n in dims) if center is None else tuple(_stack(c, n) for c, n in zip(center, dims))
    petals = []
    for dec in decs:
        if dec.dims != dims or dec.field != field:
            raise DimensionMismatch("petal decompositions live in different spaces")
        cb, pa, pb = [], [], []
        for j in range(d):
            r0 = len(center[j])
            A, B = dec.a_family(j), dec.b_family(j)
            if r0 > len(A) or not np.array_equal(A[:r0], field(center[j])):
                raise DimensionMismatch(f"decomposition does not start with the center functions on axis {j}")
            cb.append(B[:r0])
            pa.append(A[r0:])
            pb.append(B[r0:])
        petals.append(Petal(tuple(cb), tuple(pa), tuple(pb)))
    return SunflowerFamily(dims, field, center, tuple(petals))


def sharpness_family(t, field: GF) -> SunflowerFamily:
    """``d`` petals: ``t`` sliced along each axis, empty center.

    The hypotheses hold except ``h > d``; when ``t`` has full slice rank no
    center decomposition exists.
    """
    t = field(t)
    return family_from_decompositions([slice_by_axis(t, j, field) for j in range(t.ndim)])

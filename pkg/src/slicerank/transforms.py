"""Decomposition-to-decomposition moves that leave the assembled tensor fixed.

* :func:`basis_change` rewrites one axis' rank decomposition in a new basis.
* :func:`regroup_tensor_rank` turns a tensor rank decomposition into a slice
  rank decomposition by assigning each term to an axis.
* :func:`slice_by_axis` writes a tensor as the sum of its slices along an axis.
* :func:`pair_shift` and :func:`star_shift` move mass between b-functions of
  terms on different axes.
"""

from __future__ import annotations

from typing import Mapping, Sequence

import numpy as np

from .decomposition import SliceDecomposition, SliceTerm, TensorRankDecomposition
from .errors import DimensionMismatch, InvalidPartition, NonZeroShiftSum, PreconditionFailed, SingularChange, SingularMatrix
from .field import DTYPE, GF, as_matrix, inverse
from .tensor import complement_dims, fix_coordinate, outer, spread


def _expected(dims, axes) -> tuple[int, ...]:
    return complement_dims(dims, axes)


def basis_change(dec: SliceDecomposition, axis: int, change) -> SliceDecomposition:
    """Replace the axis-``axis`` family ``A`` by ``change @ A``.

    The b-family becomes ``change^{-T} @ B`` so that ``sum_i a_i (x) b_i`` on
    that axis is unchanged.
    """
    field = dec.field
    r = dec.shape[axis]
    G = as_matrix(change, field)
    if G.shape != (r, r):
        raise DimensionMismatch(f"change of basis must be {r}x{r}, got {G.shape}")
    try:
        Ginv = inverse(G, field)
    except SingularMatrix as exc:
        raise SingularChange("change of basis is not invertible") from exc
    if r == 0:
        return dec
    A = dec.a_family(axis)
    B = dec.b_family(axis)
    new_A = (G @ A) % field.p
    new_B = np.tensordot(Ginv.T, B, axes=([1], [0])) % field.p
    new_terms = iter(SliceTerm(axis, a, b) for a, b in zip(new_A, new_B))
    terms = tuple(next(new_terms) if t.axis == axis else t for t in dec.terms)
    return SliceDecomposition(dec.dims, field, terms)


def regroup_tensor_rank(trd: TensorRankDecomposition, partition: Sequence[Sequence[int]]) -> SliceDecomposition:
    """Slice decomposition putting term ``i`` on axis ``j`` for ``i`` in ``partition[j]``.

    The term becomes ``a_{j,i}`` paired with the outer product of its other
    factors.  Parts may be empty but must partition ``range(trd.length)``.
    """
    d = len(trd.dims)
    if len(partition) != d:
        raise InvalidPartition(f"need {d} parts, got {len(partition)}")
    seen = sorted(int(i) for part in partition for i in part)
    if seen != list(range(trd.length)):
        raise InvalidPartition(f"parts {list(map(list, partition))} do not partition range({trd.length})")
    terms = []
    for j, part in enumerate(partition):
        for i in part:
            factors = trd.terms[int(i)]
            b = outer([factors[jj] for jj in range(d) if jj != j], trd.field)
            terms.append(SliceTerm(j, factors[j], b))
    return SliceDecomposition(trd.dims, trd.field, tuple(terms))


def slice_by_axis(t, axis: int, field: GF) -> SliceDecomposition:
    """``t = sum_v 1_{x_axis = v} * t(..., v, ...)``, zero slices dropped."""
    t = field(t)
    terms = []
    for v in range(t.shape[axis]):
        s = fix_coordinate(t, axis, v)
        if s.any():
            a = np.zeros(t.shape[axis], dtype=DTYPE)
            a[v] = 1
            terms.append(SliceTerm(axis, a, s))
    return SliceDecomposition(t.shape, field, tuple(terms))


def pair_shift(dec: SliceDecomposition, first: tuple[int, int], second: tuple[int, int], c) -> SliceDecomposition:
    """``b_first += a_second (x) c`` and ``b_second -= a_first (x) c``.

    ``c`` is a tensor over the axes other than the two term axes, in
    increasing order.
    """
    (j1, i1), (j2, i2) = first, second
    if j1 == j2:
        raise PreconditionFailed("pair_shift needs terms on two different axes")
    field = dec.field
    rest_axes = [j for j in range(dec.order) if j not in (j1, j2)]
    c = field(c)
    if c.shape != _expected(dec.dims, (j1, j2)):
        raise DimensionMismatch(f"shift tensor has dims {c.shape}, expected {_expected(dec.dims, (j1, j2))}")
    t1, t2 = dec.term(j1, i1), dec.term(j2, i2)
    b1 = t1.b + spread(dec.dims, field, j1, {j2: t2.a}, c, rest_axes)
    b2 = t2.b - spread(dec.dims, field, j2, {j1: t1.a}, c, rest_axes)
    return dec.replace_b({(j1, i1): b1, (j2, i2): b2})


def star_shift(dec: SliceDecomposition, axes: Sequence[int], indices: Mapping[int, int] | Sequence[int], shifts) -> SliceDecomposition:
    """For each ``j`` in ``axes``: ``b_{j,i_j} += (prod_{j' != j} a_{j',i_j'}) (x) c_j``.

    ``indices`` and ``shifts`` are keyed by axis (or listed in the order of
    ``axes``).  The ``c_j`` live on the axes outside ``axes`` (0-d arrays
    when ``axes`` is everything) and must sum to zero.
    """
    J = sorted(int(j) for j in axes)
    if len(J) < 2 or len(set(J)) != len(J):
        raise PreconditionFailed(f"star_shift needs at least two distinct axes, got {list(axes)}")
    idx = dict(indices) if isinstance(indices, Mapping) else dict(zip(list(axes), indices))
    cs = dict(shifts) if isinstance(shifts, Mapping) else dict(zip(list(axes), shifts))
    field = dec.field
    rest_axes = [j for j in range(dec.order) if j not in J]
    want = _expected(dec.dims, J)
    total = np.zeros(want, dtype=DTYPE)
    for j in J:
        cs[j] = field(cs[j])
        if cs[j].shape != want:
            raise DimensionMismatch(f"shift for axis {j} has dims {cs[j].shape}, expected {want}")
        total = total + cs[j]
    if (total % field.p).any():
        raise NonZeroShiftSum("the shifts c_j do not sum to zero")
    updates = {}
    for j in J:
        others = {jj: dec.term(jj, idx[jj]).a for jj in J if jj != j}
        term = dec.term(j, idx[j])
        updates[(j, idx[j])] = term.b + spread(dec.dims, field, j, others, cs[j], rest_axes)
    return dec.replace_b(updates)


def star_shift_as_pair_shifts(dec: SliceDecomposition, axes: Sequence[int], indices, shifts) -> SliceDecomposition:
    """The same move as :func:`star_shift`, done as pair shifts on consecutive axes.

    With ``J = (j_1 < ... < j_s)`` the pair ``(j_t, j_{t+1})`` carries the
    partial sum ``c_{j_1} + ... + c_{j_t}`` tensored with the a-vectors of
    the other axes of ``J``.
    """
    J = sorted(int(j) for j in axes)
    idx = dict(indices) if isinstance(indices, Mapping) else dict(zip(list(axes), indices))
    cs = dict(shifts) if isinstance(shifts, Mapping) else dict(zip(list(axes), shifts))
    field = dec.field
    rest_axes = [j for j in range(dec.order) if j not in J]
    partial = np.zeros(_expected(dec.dims, J), dtype=DTYPE)
    for t in range(len(J) - 1):
        j1, j2 = J[t], J[t + 1]
        partial = (partial + field(cs[j1])) % field.p
        pair_rest = [j for j in range(dec.order) if j not in (j1, j2)]
        pos = {j: k for k, j in enumerate(pair_rest)}
        vecs = [dec.term(j, idx[j]).a for j in J if j not in (j1, j2)]
        axes_lab = [(pos[j],) for j in J if j not in (j1, j2)]
        c = outer(vecs + [partial], field, axes_lab + [tuple(pos[j] for j in rest_axes)])
        dec = pair_shift(dec, (j1, idx[j1]), (j2, idx[j2]), c)
    return dec

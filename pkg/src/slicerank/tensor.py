"""Dense order-d tensors over GF(p): contraction, outer products, slices.

A tensor is an integer ``numpy`` array of shape ``(n_1, ..., n_d)``.  Axes and
coordinates are 0-based here; the file formats shift axis labels to 1-based.
"""

from __future__ import annotations

from functools import reduce
from typing import Sequence

import numpy as np

from .errors import DimensionMismatch
from .field import DTYPE, GF, rank


def contract(small, big, axes: Sequence[int], field: GF) -> np.ndarray:
    """Sum of ``small(x_J') * big(x_J)`` over the coordinates in ``axes``.

    ``small`` is a tensor over the axes ``axes`` of ``big`` (listed in the
    order of ``small``'s own axes).  The result lives on the remaining axes of
    ``big`` in increasing order; a 0-d array when every axis is contracted.
    """
    small = np.asarray(small, dtype=DTYPE)
    big = np.asarray(big, dtype=DTYPE)
    axes = [int(a) for a in axes]
    if small.ndim != len(axes) or len(set(axes)) != len(axes):
        raise DimensionMismatch(f"{small.ndim}-d tensor contracted over axes {axes}")
    for k, a in enumerate(axes):
        if not 0 <= a < big.ndim or big.shape[a] != small.shape[k]:
            raise DimensionMismatch(f"axis {a} of shape {big.shape} does not match {small.shape}")
    return np.mod(np.tensordot(small, big, axes=(list(range(small.ndim)), axes)), field.p)


def outer(factors: Sequence, field: GF, axes: Sequence[Sequence[int]] | None = None) -> np.ndarray:
    """Entrywise product of tensors on disjoint axes.

    Without ``axes`` the factors occupy consecutive axes in the given order.
    Otherwise ``axes[k]`` lists the result axes carried by ``factors[k]``; the
    labels must partition ``range(total order)``.
    """
    factors = [np.asarray(f, dtype=DTYPE) for f in factors]
    if not factors:
        return np.ones((), dtype=DTYPE)
    out = reduce(np.multiply.outer, factors) % field.p
    if axes is None:
        return out
    labels = [int(a) for ax in axes for a in ax]
    if len(axes) != len(factors) or any(len(ax) != f.ndim for ax, f in zip(axes, factors)):
        raise DimensionMismatch("axis labels do not match factor orders")
    if sorted(labels) != list(range(len(labels))):
        raise DimensionMismatch(f"axis labels {labels} overlap or leave gaps")
    return np.transpose(out, np.argsort(labels))


def place(vector, axis: int, rest) -> np.ndarray:
    """``vector`` on ``axis`` tensored with ``rest`` on the other axes (not reduced)."""
    return np.moveaxis(np.multiply.outer(np.asarray(vector, dtype=DTYPE), np.asarray(rest, dtype=DTYPE)), 0, axis)


def spread(dims: Sequence[int], field: GF, target_axis: int, vectors, rest, rest_axes: Sequence[int]) -> np.ndarray:
    """Tensor over every axis except ``target_axis``.

    ``vectors`` maps axes to vectors placed on them; ``rest`` is a tensor over
    ``rest_axes`` (increasing).  Together they must cover the complement of
    ``target_axis``.
    """
    comp = [j for j in range(len(dims)) if j != target_axis]
    pos = {j: k for k, j in enumerate(comp)}
    factors, axes = [], []
    for j in sorted(vectors):
        factors.append(vectors[j])
        axes.append((pos[j],))
    factors.append(rest)
    axes.append(tuple(pos[j] for j in rest_axes))
    return outer(factors, field, axes)


def apply_along(matrix, t, axis: int) -> np.ndarray:
    """Multiply every axis-``axis`` fiber of ``t`` by ``matrix`` (not reduced)."""
    return np.moveaxis(np.tensordot(np.asarray(matrix, dtype=DTYPE), t, axes=([1], [axis])), 0, axis)


def identity_tensor(d: int, k: int, field: GF) -> np.ndarray:
    """``I(x) = 1`` iff ``x_1 = ... = x_d``, on ``[k]^d``."""
    if d < 2 or k < 1:
        raise ValueError(f"identity tensor needs d >= 2 and k >= 1, got d={d}, k={k}")
    t = np.zeros((k,) * d, dtype=DTYPE)
    idx = np.arange(k)
    t[(idx,) * d] = 1
    return field(t)


def fix_coordinate(t, axis: int, value: int) -> np.ndarray:
    """The order-(d-1) slice of ``t`` with coordinate ``axis`` fixed to ``value``."""
    t = np.asarray(t, dtype=DTYPE)
    if not 0 <= axis < t.ndim:
        raise DimensionMismatch(f"axis {axis} out of range for order {t.ndim}")
    if not 0 <= value < t.shape[axis]:
        raise IndexError(f"coordinate {value} out of range [0, {t.shape[axis]})")
    return np.take(t, value, axis=axis)


def complement_dims(dims: Sequence[int], axes) -> tuple[int, ...]:
    skip = {axes} if isinstance(axes, int) else set(axes)
    return tuple(n for j, n in enumerate(dims) if j not in skip)


def block_diagonal(t1, t2) -> np.ndarray:
    """Direct sum of two tensors of the same order."""
    t1 = np.asarray(t1, dtype=DTYPE)
    t2 = np.asarray(t2, dtype=DTYPE)
    if t1.ndim != t2.ndim:
        raise DimensionMismatch("direct sum needs tensors of equal order")
    out = np.zeros(tuple(a + b for a, b in zip(t1.shape, t2.shape)), dtype=DTYPE)
    out[tuple(slice(0, n) for n in t1.shape)] = t1
    out[tuple(slice(n, None) for n in t1.shape)] = t2
    return out


def is_rank_one(t, field: GF) -> bool:
    """Whether a nonzero tensor is a single outer product of vectors."""
    t = np.asarray(t, dtype=DTYPE)
    if not t.any():
        return False
    return all(rank(np.moveaxis(t, j, 0).reshape(t.shape[j], -1), field) == 1 for j in range(t.ndim))

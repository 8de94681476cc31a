from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import random_decomposition, random_star_shift_args, random_tensor_rank_decomposition
from slicerank.decomposition import SliceDecomposition, SliceTerm, TensorRankDecomposition, assemble, assemble_tensor_rank
from slicerank.errors import InvalidPartition, NonZeroShiftSum, SingularChange
from slicerank.field import GF, inverse, random_invertible
from slicerank.tensor import complement_dims, identity_tensor
from slicerank.transforms import (
    basis_change,
    pair_shift,
    regroup_tensor_rank,
    slice_by_axis,
    star_shift,
    star_shift_as_pair_shifts,
)

F2, F3, F5 = GF(2), GF(3), GF(5)


def test_basis_change_examples():
    rng = np.random.default_rng(0)
    dec = random_decomposition(rng, (3, 3, 3), F3, shape=(2, 1, 0))
    assert basis_change(dec, 0, np.eye(2, dtype=int)).same_as(dec)
    swapped = basis_change(dec, 0, [[0, 1], [1, 0]])
    assert swapped.term(0, 0).same_as(dec.term(0, 1)) and swapped.term(0, 1).same_as(dec.term(0, 0))
    with pytest.raises(SingularChange):
        basis_change(dec, 0, [[1, 1], [1, 1]])


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from([2, 3, 5]))
def test_basis_change_preserves_tensor_and_composes(seed, p):
    F = GF(p)
    rng = np.random.default_rng(seed)
    dec = random_decomposition(rng, (3, 2, 3), F, shape=(2, 1, 2))
    g, h = random_invertible(rng, 2, F), random_invertible(rng, 2, F)
    once = basis_change(dec, 2, g)
    assert np.array_equal(assemble(once), assemble(dec))
    assert basis_change(basis_change(dec, 2, h), 2, g).same_as(basis_change(dec, 2, (g @ h) % p))
    assert basis_change(once, 2, inverse(g, F)).same_as(dec)


def test_regroup_identity_tensor_on_axis_one():
    trd = TensorRankDecomposition((2, 2, 2), F2, tuple((e, e, e) for e in np.eye(2, dtype=int)))
    dec = regroup_tensor_rank(trd, [[0, 1], [], []])
    assert dec.shape == (2, 0, 0)
    for i in range(2):
        # 1_{x=i} 1_{y=z=i}
        want_b = np.zeros((2, 2), dtype=int)
        want_b[i, i] = 1
        assert dec.term(0, i).a.tolist() == np.eye(2, dtype=int)[i].tolist()
        assert np.array_equal(dec.term(0, i).b, want_b)
    assert np.array_equal(assemble(dec), identity_tensor(3, 2, F2))


def test_regroup_rejects_bad_partitions():
    trd = TensorRankDecomposition((2, 2), F2, (([1, 0], [1, 0]), ([0, 1], [0, 1])))
    for bad in ([[0], [0, 1]], [[0], []], [[0, 1]], [[0, 1], [2]]):
        with pytest.raises(InvalidPartition):
            regroup_tensor_rank(trd, bad)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_regroup_any_partition_preserves_tensor(seed):
    rng = np.random.default_rng(seed)
    trd = random_tensor_rank_decomposition(rng, (2, 3, 2), F3, 4)
    owner = rng.integers(0, 3, size=4)
    parts = [[i for i in range(4) if owner[i] == j] for j in range(3)]
    assert np.array_equal(assemble(regroup_tensor_rank(trd, parts)), assemble_tensor_rank(trd))


def test_slice_by_axis():
    assert slice_by_axis(np.zeros((2, 2, 2), dtype=int), 1, F2).length == 0
    dec = slice_by_axis(identity_tensor(3, 2, F2), 0, F2)
    assert dec.shape == (2, 0, 0)
    assert [t.a.tolist() for t in dec.terms] == [[1, 0], [0, 1]]
    rng = np.random.default_rng(1)
    for _ in range(20):
        t = F2.random(rng, (2, 2, 2))
        for j in range(3):
            assert np.array_equal(assemble(slice_by_axis(t, j, F2)), t)


def test_pair_shift_order3_display():
    """a(x) b(y,z) + c(y) d(x,z) = a(x) b'(y,z) + c(y) d'(x,z) with b' = b + c e, d' = d - a e."""
    rng = np.random.default_rng(2)
    a, c, e = F5.random(rng, 2), F5.random(rng, 3), F5.random(rng, 4)
    a[0] = c[0] = 1
    b, d = F5.random(rng, (3, 4)), F5.random(rng, (2, 4))
    dec = SliceDecomposition((2, 3, 4), F5, (SliceTerm(0, a, b), SliceTerm(1, c, d)))
    out = pair_shift(dec, (0, 0), (1, 0), e)
    assert np.array_equal(out.term(0, 0).b, (b + np.multiply.outer(c, e)) % 5)
    assert np.array_equal(out.term(1, 0).b, (d - np.multiply.outer(a, e)) % 5)
    assert np.array_equal(assemble(out), assemble(dec))
    assert pair_shift(dec, (0, 0), (1, 0), np.zeros(4, dtype=int)).same_as(dec)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from([(2, 2, 3), (2, 2, 2, 2), (3, 2, 2)]))
def test_pair_shift_invariance_and_inverse(seed, dims):
    rng = np.random.default_rng(seed)
    dec = random_decomposition(rng, dims, F3, shape=[1] * len(dims))
    j1, j2 = sorted(int(x) for x in rng.choice(len(dims), 2, replace=False))
    if rng.integers(2):
        j1, j2 = j2, j1
    c = F3.random(rng, complement_dims(dims, (j1, j2)))
    out = pair_shift(dec, (j1, 0), (j2, 0), c)
    assert np.array_equal(assemble(out), assemble(dec))
    assert out.shape == dec.shape
    assert pair_shift(out, (j1, 0), (j2, 0), (-c) % 3).same_as(dec)


def test_star_shift_lambda_display_f5():
    """(lambda_1, lambda_2, lambda_3) = (1, 1, -2) on a(x) b(y,z) + c(y) d(x,z) + e(z) f(x,y)."""
    rng = np.random.default_rng(3)
    dims = (2, 2, 2)
    dec = random_decomposition(rng, dims, F5, shape=(1, 1, 1))
    a, c, e = (dec.term(j, 0).a for j in range(3))
    lam = [1, 1, -2]
    out = star_shift(dec, [0, 1, 2], [0, 0, 0], [np.array(x) for x in lam])
    assert np.array_equal(out.term(0, 0).b, (dec.term(0, 0).b + lam[0] * np.multiply.outer(c, e)) % 5)
    assert np.array_equal(out.term(1, 0).b, (dec.term(1, 0).b + lam[1] * np.multiply.outer(a, e)) % 5)
    assert np.array_equal(out.term(2, 0).b, (dec.term(2, 0).b + lam[2] * np.multiply.outer(a, c)) % 5)
    assert np.array_equal(assemble(out), assemble(dec))
    assert star_shift(dec, [0, 1, 2], [0, 0, 0], [np.array(0)] * 3).same_as(dec)
    with pytest.raises(NonZeroShiftSum):
        star_shift(dec, [0, 1, 2], [0, 0, 0], [np.array(1), np.array(1), np.array(1)])


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from([2, 3, 5]), st.sampled_from([(2, 2, 2), (3, 2, 2), (2, 2, 2, 2)]))
def test_star_shift_equals_consecutive_pair_shifts(seed, p, dims):
    F = GF(p)
    rng = np.random.default_rng(seed)
    dec = random_decomposition(rng, dims, F, shape=[1 + int(rng.integers(2)) for _ in dims])
    args = random_star_shift_args(rng, dec)
    single = star_shift(dec, *args)
    assert np.array_equal(assemble(single), assemble(dec))
    assert star_shift_as_pair_shifts(dec, *args).same_as(single)


def test_star_shift_two_axes_is_pair_shift():
    rng = np.random.default_rng(4)
    for _ in range(20):
        dec = random_decomposition(rng, (2, 3, 2), F3, shape=(1, 2, 1))
        c = F3.random(rng, (3,))
        s = star_shift(dec, [0, 2], [0, 0], [c, (-c) % 3])
        assert s.same_as(pair_shift(dec, (0, 0), (2, 0), c))

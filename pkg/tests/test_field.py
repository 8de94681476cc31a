from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import brute_rank, span_set
from slicerank.errors import BudgetExceeded, DimensionMismatch, LinearlyDependentInput, SingularMatrix
from slicerank.field import (
    GF,
    count_ordered_bases,
    dual_family,
    enumerate_subspaces,
    full_subspace,
    gaussian_binomial,
    inverse,
    is_direct_sum,
    nullspace,
    rank,
    rref,
    solve_linear,
    subspace_contains,
    subspace_from_vectors,
    subspace_intersect,
    subspace_sum,
    zero_subspace,
)

F2, F3, F5 = GF(2), GF(3), GF(5)


def matrices(p_choices=(2, 3, 5), max_dim=4):
    return st.sampled_from(p_choices).flatmap(
        lambda p: st.tuples(st.just(p), st.integers(1, max_dim), st.integers(1, max_dim)).flatmap(
            lambda t: st.tuples(
                st.just(t[0]),
                st.lists(st.integers(0, t[0] - 1), min_size=t[1] * t[2], max_size=t[1] * t[2]).map(
                    lambda xs, r=t[1], c=t[2]: np.array(xs, dtype=np.int64).reshape(r, c)
                ),
            )
        )
    )


def test_field_rejects_non_primes():
    for bad in (0, 1, 4, 9, 257):
        with pytest.raises(ValueError):
            GF(bad)
    with pytest.raises(TypeError):
        GF(2.0)
    assert GF(251).p == 251


def test_rref_examples():
    R, r, piv = rref(np.eye(2, dtype=int), F2)
    assert np.array_equal(R, np.eye(2)) and r == 2 and piv == [0, 1]
    R, r, piv = rref([[1, 1], [1, 1]], F2)
    assert R.tolist() == [[1, 1], [0, 0]] and r == 1 and piv == [0]
    R, r, piv = rref([[1, 2], [2, 4]], F5)
    assert R.tolist() == [[1, 2], [0, 0]] and r == 1


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_rref_properties(pm):
    p, m = pm
    F = GF(p)
    R, r, piv = rref(m, F)
    assert r == brute_rank(m, F) if p ** min(m.shape) <= 625 else True
    assert piv == sorted(set(piv)) and len(piv) == r
    assert not R[r:].any()
    for k, c in enumerate(piv):
        assert R[k, c] == 1 and np.count_nonzero(R[:, c]) == 1
    # same row space, idempotent
    assert span_set(R[:r], F) == span_set(m, F) if p ** r <= 625 else True
    assert np.array_equal(rref(R, F)[0], R)


def test_rank_brute_force_small():
    for m in itertools.product(range(3), repeat=4):
        M = np.array(m).reshape(2, 2)
        assert rank(M, F3) == brute_rank(M, F3)


def test_solve_linear_examples():
    b = np.array([1, 0, 1])
    assert np.array_equal(solve_linear(np.eye(3, dtype=int), b, F2), b)
    assert solve_linear([[1, 1]], [1], F2).tolist() == [1, 0]
    assert solve_linear([[1, 0], [1, 0]], [1, 0], F2) is None
    with pytest.raises(DimensionMismatch):
        solve_linear(np.eye(2, dtype=int), [1, 0, 0], F2)


def test_solve_linear_against_enumeration():
    rng = np.random.default_rng(1)
    for _ in range(60):
        A = F3.random(rng, (2, 3))
        b = F3.random(rng, 2)
        sols = [x for x in F3.vectors(3) if np.array_equal((A @ x) % 3, b)]
        x = solve_linear(A, b, F3)
        if sols:
            assert x is not None and np.array_equal((A @ x) % 3, b)
        else:
            assert x is None


def test_nullspace_and_inverse():
    rng = np.random.default_rng(2)
    for _ in range(30):
        A = F5.random(rng, (2, 4))
        N = nullspace(A, F5)
        assert len(N) == 4 - rank(A, F5)
        assert not ((A @ N.T) % 5).any()
    G = np.array([[1, 2], [3, 4]])
    assert np.array_equal((G @ inverse(G, F5)) % 5, np.eye(2))
    with pytest.raises(SingularMatrix):
        inverse([[1, 1], [1, 1]], F2)


def test_dual_family_examples():
    fam = dual_family(np.eye(2, dtype=int), F2)
    assert np.array_equal(fam.duals, np.eye(2))
    V = np.array([[1, 1, 0], [0, 1, 1]])
    D = dual_family(V, F2).duals
    assert np.array_equal((D @ V.T) % 2, np.eye(2))
    # canonical choice: zero outside the pivot columns of the echelon form
    assert D.tolist() == [[1, 0, 0], [1, 1, 0]]
    with pytest.raises(LinearlyDependentInput):
        dual_family([[1, 0], [1, 0]], F3)
    assert len(dual_family(np.zeros((0, 3), dtype=int), F2)) == 0


def test_dual_family_biorthogonal_exhaustive():
    for n, r in [(2, 1), (2, 2), (3, 2), (3, 3)]:
        for rows in itertools.combinations(range(1, 2**n), r):
            V = F2.vectors(n)[list(rows)]
            if rank(V, F2) < r:
                continue
            D = dual_family(V, F2).duals
            assert np.array_equal((D @ V.T) % 2, np.eye(r))


def test_subspace_from_vectors():
    z = subspace_from_vectors(np.zeros((0, 3), dtype=int), 3, F2)
    assert z.dim == 0 and z == zero_subspace(3, F2)
    s = subspace_from_vectors([[1, 1], [0, 1]], 2, F2)
    assert np.array_equal(s.basis, np.eye(2)) and s == full_subspace(2, F2)
    s = subspace_from_vectors([[1, 2, 0], [2, 4, 0]], 3, F5)
    assert s.basis.tolist() == [[1, 2, 0]]


@settings(max_examples=60, deadline=None)
@given(st.permutations([0, 1, 2]), st.integers(0, 10**6))
def test_subspace_order_insensitive(perm, seed):
    rng = np.random.default_rng(seed)
    V = F3.random(rng, (3, 4))
    assert subspace_from_vectors(V, 4, F3) == subspace_from_vectors(V[list(perm)], 4, F3)
    assert hash(subspace_from_vectors(V, 4, F3)) == hash(subspace_from_vectors(V[list(perm)], 4, F3))


def test_subspace_operations_examples():
    e = np.eye(3, dtype=int)
    s = subspace_sum(subspace_from_vectors([[1, 0]], 2, F2), subspace_from_vectors([[0, 1]], 2, F2))
    assert s == full_subspace(2, F2)
    assert is_direct_sum(subspace_from_vectors([[1, 0]], 2, F2), subspace_from_vectors([[0, 1]], 2, F2))
    i = subspace_intersect(subspace_from_vectors(e[[0, 1]], 3, F2), subspace_from_vectors(e[[1, 2]], 3, F2))
    assert i == subspace_from_vectors(e[[1]], 3, F2)
    assert not is_direct_sum(*(subspace_from_vectors([v], 2, F2) for v in ([1, 1], [0, 1], [1, 0])))
    assert subspace_contains(full_subspace(2, F2), subspace_from_vectors([[1, 1]], 2, F2))
    with pytest.raises(DimensionMismatch):
        subspace_sum(full_subspace(2, F2), full_subspace(3, F2))


@pytest.mark.parametrize("p,n", [(2, 2), (2, 3), (3, 2), (3, 3)])
def test_dimension_formula_exhaustive(p, n):
    F = GF(p)
    spaces = [s for r in range(n + 1) for s in enumerate_subspaces(n, r, F)]
    for U in spaces:
        for V in spaces:
            assert subspace_sum(U, V).dim + subspace_intersect(U, V).dim == U.dim + V.dim
            # intersection oracle by element sets
            if p**n <= 27:
                inter = span_set(U.basis, F) & span_set(V.basis, F) if U.dim and V.dim else frozenset({(0,) * n})
                assert len(inter) == p ** subspace_intersect(U, V).dim


@pytest.mark.parametrize("p,n", [(2, 1), (2, 2), (2, 3), (2, 4), (3, 2), (3, 3), (5, 2)])
def test_enumerate_subspaces_matches_brute_force(p, n):
    F = GF(p)
    for r in range(n + 1):
        found = list(enumerate_subspaces(n, r, F))
        assert len(found) == gaussian_binomial(n, r, p)
        assert len(set(found)) == len(found)
        assert all(s.dim == r for s in found)
        keys = [tuple(s.basis.ravel().tolist()) for s in found]
        assert keys == sorted(keys)
        if p**n <= 27:
            brute = set()
            for rows in itertools.combinations(range(1, p**n), r):
                V = F.vectors(n)[list(rows)]
                if rank(V, F) == r:
                    brute.add(span_set(V, F))
            assert brute == {span_set(s.basis, F) if r else frozenset({(0,) * n}) for s in found}


def test_enumerate_examples_and_budget():
    assert len(list(enumerate_subspaces(2, 1, F2))) == 3
    only = list(enumerate_subspaces(3, 0, F2))
    assert len(only) == 1 and only[0].dim == 0
    assert len(list(enumerate_subspaces(2, 2, F3))) == 1
    with pytest.raises(BudgetExceeded):
        enumerate_subspaces(10, 2, F3, budget=1000)


def test_gaussian_binomial_and_bases():
    assert gaussian_binomial(2, 1, 2) == 3
    assert gaussian_binomial(4, 2, 2) == 35
    assert gaussian_binomial(3, 4, 2) == 0
    assert count_ordered_bases(2, 2) == 6
    assert count_ordered_bases(0, 7) == 1


def test_complement_projector_kernel():
    for s in enumerate_subspaces(3, 2, F3):
        Q = s.complement_projector()
        assert not ((Q @ s.basis.T) % 3).any()
        assert rank(Q, F3) == 1
        assert np.array_equal((Q @ Q) % 3, Q)

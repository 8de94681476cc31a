"""Exhaustive censuses of decompositions at desk scale.

All counts are exact.  Slice decompositions are counted by their one-variable
data only (a subspace tuple together with ordered bases); tensor rank
decompositions are counted as ordered k-tuples of rank-one terms given as
d-tuples of vectors.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Any, Sequence

import numpy as np

from .decomposition import SliceDecomposition, SliceTerm, TensorRankDecomposition, assemble
from .errors import BudgetExceeded, DimensionMismatch, NotOfRankK, PreconditionFailed
from .field import (
    DEFAULT_ENUMERATION_BUDGET,
    DTYPE,
    GF,
    Subspace,
    count_ordered_bases,
    enumerate_subspaces,
    gaussian_binomial,
    nullspace,
    rank,
    solve_linear,
    subspace_from_vectors,
)
from .rank import RankBudget, _Meter, compositions, in_target, membership_in_target, slice_rank, slice_rank_at_most, tensor_rank
from .tensor import is_rank_one, outer

# prod_{i>=1} (1 - 2^{-i})
OMEGA = 0.28878809508660242
OMEGA_TERMS = 64


def omega_upper(terms: int = OMEGA_TERMS) -> Fraction:
    """Exact partial product ``prod_{i<=terms} (1 - 2^{-i})``, an upper bound for OMEGA."""
    out = Fraction(1)
    for i in range(1, terms + 1):
        out *= 1 - Fraction(1, 2**i)
    return out


@dataclass
class CensusReport:
    """Outcome of a census: exact counts, the bounds compared against, and named checks."""

    what: str
    counts: dict[str, int] = dc_field(default_factory=dict)
    bounds: dict[str, int] = dc_field(default_factory=dict)
    checks: dict[str, bool] = dc_field(default_factory=dict)
    witnesses: list[Any] = dc_field(default_factory=list)
    notes: list[str] = dc_field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def summary(self) -> dict:
        """Machine-readable integer/boolean summary (no witnesses)."""
        return {
            "what": self.what,
            "counts": dict(sorted(self.counts.items())),
            "bounds": dict(sorted(self.bounds.items())),
            "checks": dict(sorted(self.checks.items())),
            "passed": self.passed,
        }

    def __str__(self):
        lines = [f"census {self.what}: {'pass' if self.passed else 'FAIL'}"]
        lines += [f"  {k} = {v}" for k, v in sorted(self.counts.items())]
        lines += [f"  bound {k} = {v}" for k, v in sorted(self.bounds.items())]
        lines += [f"  check {k}: {'ok' if v else 'failed'}" for k, v in sorted(self.checks.items())]
        lines += [f"  note: {n}" for n in self.notes]
        return "\n".join(lines)


# ---------------------------------------------------------------- matrices


def _full_column_rank_matrices(rows: int, k: int, field: GF):
    """Every ``rows x k`` matrix with independent columns, as column stacks."""
    for cols in itertools.product(range(1, field.p**rows), repeat=k):
        F = field.vectors(rows)[list(cols)].T
        if rank(F, field) == k:
            yield F


def count_matrix_decompositions(m, field: GF, budget: RankBudget | None = None) -> CensusReport:
    """Ordered decompositions ``m = sum_{i<k} f_i g_i^T`` with ``k = rank(m)``.

    Every f-tuple with independent entries is tried and the g's solved for;
    when ``f`` spans the column space the g's are unique.
    """
    budget = budget or RankBudget.default()
    M = field(m)
    if M.ndim != 2:
        raise DimensionMismatch(f"expected a matrix, got shape {M.shape}")
    rows, cols = M.shape
    k = rank(M, field)
    if field.p ** (k * rows) > budget.max_candidates:
        raise BudgetExceeded(f"{field.p}^{k * rows} f-tuples exceed the candidate budget", None)
    count = 0
    first = None
    if k == 0:
        count, first = 1, (np.zeros((0, rows), dtype=DTYPE), np.zeros((0, cols), dtype=DTYPE))
    else:
        for F in _full_column_rank_matrices(rows, k, field):
            Gt = solve_linear(F, M, field)
            if Gt is None:
                continue
            count += 1
            if first is None:
                first = (F.T.copy(), Gt.copy())
    expected = count_ordered_bases(k, field.p)
    rep = CensusReport("matrix-count", counts={"rank": k, "decompositions": count}, bounds={"formula": expected})
    rep.checks["equals_formula"] = count == expected
    if first is not None:
        rep.witnesses.append(first)
    return rep


def matrix_decomposition_histogram(rows: int, cols: int, k: int, field: GF) -> np.ndarray:
    """For every matrix (row-major code in base p) the number of pairs ``(F, G)`` with ``F G^T = M``.

    ``F`` ranges over all ``rows x k`` and ``G`` over all ``cols x k``
    matrices, so this counts length-k decompositions whose factors may be
    dependent or zero.
    """
    p = field.p
    size = p ** (rows * cols)
    if k == 0:
        out = np.zeros(size, dtype=np.int64)
        out[0] = 1
        return out
    Fs = field.vectors(rows * k).reshape(-1, rows, k)
    Gs = field.vectors(cols * k).reshape(-1, cols, k)
    weights = p ** np.arange(rows * cols - 1, -1, -1, dtype=np.int64)
    hist = np.zeros(size, dtype=np.int64)
    chunk = max(1, 200_000 // len(Gs))
    for start in range(0, len(Fs), chunk):
        prod = np.einsum("frk,gck->fgrc", Fs[start:start + chunk], Gs) % p
        codes = prod.reshape(-1, rows * cols) @ weights
        hist += np.bincount(codes, minlength=size)
    return hist


def matrix_census(rows: int, cols: int, field: GF, max_rank: int = 2) -> CensusReport:
    """Exhaustive check of the ordered-basis count for every matrix of rank ``<= max_rank``.

    For each length ``k`` the pair histogram is compared, on every matrix of
    rank exactly ``k``, with ``(p^k - 1)(p^k - p)...(p^k - p^{k-1})``.
    """
    p = field.p
    mats = field.vectors(rows * cols).reshape(-1, rows, cols)
    ranks = np.array([rank(M, field) for M in mats])
    rep = CensusReport("matrix-census", counts={"rows": rows, "cols": cols, "p": p, "matrices": len(mats)})
    for k in range(0, min(max_rank, rows, cols) + 1):
        hist = matrix_decomposition_histogram(rows, cols, k, field)
        sel = ranks == k
        expected = count_ordered_bases(k, p)
        rep.counts[f"rank{k}_matrices"] = int(sel.sum())
        rep.bounds[f"rank{k}_formula"] = expected
        bad = np.flatnonzero(sel & (hist != expected))
        rep.checks[f"rank{k}_equals_formula"] = bad.size == 0
        if bad.size:
            rep.witnesses.append((k, mats[bad[0]].tolist(), int(hist[bad[0]])))
    return rep


# ---------------------------------------------------------------- slice rank tuples


@dataclass(frozen=True, eq=False)
class AdmissibleTupleSet:
    k: int
    tuples: tuple[tuple[Subspace, ...], ...]
    witnesses: tuple[SliceDecomposition, ...]

    def __len__(self):
        return len(self.tuples)

    def __contains__(self, spaces):
        return tuple(spaces) in set(self.tuples)


def admissible_tuples(t, field: GF, k: int | None = None, budget: RankBudget | None = None) -> AdmissibleTupleSet:
    """Every subspace tuple of total dimension ``k`` whose target sum contains ``t``.

    ``k`` defaults to the slice rank.  Tuples come out in search order
    (composition, then subspace tuple).
    """
    budget = budget or RankBudget.default()
    t = field(t)
    if k is None:
        k = slice_rank(t, field, budget).k
    meter = _Meter(budget)
    dims = t.shape
    enum_budget = max(DEFAULT_ENUMERATION_BUDGET, budget.max_candidates)
    found, wits = [], []
    for comp in compositions(k, dims):
        lists = [list(enumerate_subspaces(n, r, field, enum_budget)) for n, r in zip(dims, comp)]
        for spaces in itertools.product(*lists):
            meter.tick(None)
            if in_target(t, spaces, field):
                w = membership_in_target(t, spaces, field)
                found.append(tuple(spaces))
                wits.append(w.decomposition(dims, field))
    return AdmissibleTupleSet(k, tuple(found), tuple(wits))


def tuple_bound(d: int, k: int, p: int) -> int:
    """``d^k p^{d k^2}``: the bound on the number of admissible tuples."""
    return d**k * p ** (d * k * k)


def total_bound(d: int, k: int, p: int) -> int:
    """``d^k p^{2 d k^2}``: the bound on (tuple, ordered bases) pairs."""
    return d**k * p ** (2 * d * k * k)


def count_slice_decompositions_given_tuple(t, spaces: Sequence[Subspace], field: GF) -> int:
    """Ordered bases of all the subspaces in the tuple (b-functions are not counted)."""
    if not in_target(t, spaces, field):
        raise PreconditionFailed("the tensor is not in the target sum of this tuple")
    return math.prod(count_ordered_bases(s.dim, field.p) for s in spaces)


def count_ordered_bases_brute(space: Subspace) -> int:
    """Ordered bases of ``space`` by listing its elements."""
    r, field = space.dim, space.field
    if r == 0:
        return 1
    elems = space.elements()
    nz = [v for v in elems if v.any()]
    return sum(1 for combo in itertools.permutations(range(len(nz)), r) if rank(np.array([nz[i] for i in combo]).reshape(r, -1), field) == r)


def admissible_census(t, field: GF, budget: RankBudget | None = None) -> CensusReport:
    """Admissible tuples of ``t`` with both bounds and the per-tuple basis counts."""
    t = field(t)
    res = slice_rank(t, field, budget)
    adm = admissible_tuples(t, field, res.k, budget)
    d, k, p = t.ndim, res.k, field.p
    per_tuple = [count_slice_decompositions_given_tuple(t, s, field) for s in adm.tuples]
    rep = CensusReport(
        "admissible",
        counts={"slice_rank": k, "tuples": len(adm), "one_variable_data": sum(per_tuple)},
        bounds={"tuples": tuple_bound(d, k, p), "one_variable_data": total_bound(d, k, p)},
    )
    rep.checks["tuples_within_bound"] = len(adm) <= tuple_bound(d, k, p)
    rep.checks["data_within_bound"] = sum(per_tuple) <= total_bound(d, k, p)
    rep.checks["witness_in_census"] = tuple(res.spaces) in adm
    rep.witnesses = list(adm.tuples)
    return rep


# ---------------------------------------------------------------- tensor rank


def iter_tensor_rank_decompositions(t, k: int, field: GF, budget: RankBudget | None = None):
    """Every ordered length-``k`` tensor rank decomposition of ``t``.

    Factors on axes 2..d run over all nonzero vectors; the axis-1 vectors
    run over the affine solution space of the resulting linear system and
    must be nonzero.
    """
    budget = budget or RankBudget.default()
    t = field(t)
    dims = t.shape
    p = field.p
    if t.ndim < 2:
        raise DimensionMismatch("tensor rank census needs order >= 2")
    rest = dims[1:]
    per_tail = math.prod(p**n - 1 for n in rest)
    total = per_tail**k
    if total > budget.max_candidates:
        raise BudgetExceeded(f"{total} ordered tail tuples exceed the candidate budget", None)
    tails_f = [field.nonzero_vectors(n) for n in rest]
    tails = [(vs, outer(vs, field).ravel()) for vs in itertools.product(*tails_f)]
    target = t.reshape(dims[0], -1).T
    for combo in itertools.product(range(len(tails)), repeat=k):
        if k == 0:
            if not t.any():
                yield TensorRankDecomposition(dims, field, ())
            continue
        S = np.array([tails[c][1] for c in combo], dtype=DTYPE).T  # (N, k)
        X0 = solve_linear(S, target, field)
        if X0 is None:
            continue
        N = nullspace(S, field)  # rows z with S z = 0
        # each column of X is X0[:, col] + N^T y
        nn = len(N)
        for ys in itertools.product(field.vectors(nn), repeat=dims[0]) if nn else [()]:
            X = X0.copy()
            for col, y in enumerate(ys):
                X[:, col] = (X[:, col] + y @ N) % p
            if not all(row.any() for row in X):
                continue
            yield TensorRankDecomposition(dims, field, tuple((X[i],) + tuple(tails[c][0]) for i, c in enumerate(combo)))


def example_shape(t, field: GF) -> int | None:
    """``rank(M)`` when ``t = M(x_1, x_2) a_3(x_3) ... a_d(x_d)`` with nonzero a's, else ``None``."""
    t = field(t)
    if t.ndim < 2 or not t.any():
        return None
    n1, n2 = t.shape[:2]
    unf = t.reshape(n1 * n2, -1)
    if rank(unf, field) != 1:
        return None
    if t.ndim > 2:
        col = unf[:, np.flatnonzero(unf.any(axis=0))[0]]
        row = unf[np.flatnonzero(unf.any(axis=1))[0]].reshape(t.shape[2:])
        if not is_rank_one(row, field):
            return None
        return rank(col.reshape(n1, n2), field)
    return rank(t, field)


def example_formula(d: int, k: int, p: int) -> int:
    """``(p-1)^{(d-2)k} (p^k - 1)(p^k - p)...(p^k - p^{k-1})``."""
    return (p - 1) ** ((d - 2) * k) * count_ordered_bases(k, p)


def count_tensor_rank_decompositions(t, field: GF, k: int | None = None, budget: RankBudget | None = None) -> CensusReport:
    t = field(t)
    if k is None:
        k = tensor_rank(t, field, budget)[0]
    d, p = t.ndim, field.p
    count = 0
    first = None
    for dec in iter_tensor_rank_decompositions(t, k, field, budget):
        count += 1
        if first is None:
            first = dec
    bound = p ** ((d - 1) * k * k)
    rep = CensusReport("tensor-rank-count", counts={"tensor_rank": k, "decompositions": count}, bounds={"proposition": bound})
    rep.checks["within_bound"] = count <= bound
    mk = example_shape(t, field)
    if mk is not None and mk == k:
        rep.bounds["example_formula"] = example_formula(d, k, p)
        rep.checks["equals_example_formula"] = count == example_formula(d, k, p)
    if first is not None:
        rep.witnesses.append(first)
    return rep


def span_tuple(dec: TensorRankDecomposition) -> tuple[Subspace, ...]:
    return tuple(subspace_from_vectors(dec.factors(j), n, dec.field) for j, n in enumerate(dec.dims))


def verify_subspace_uniqueness_tensor_rank(t, field: GF, k: int | None = None, budget: RankBudget | None = None) -> CensusReport:
    """Whether every length-``k`` decomposition spans the same subspace on each axis."""
    t = field(t)
    if k is None:
        k = tensor_rank(t, field, budget)[0]
    spans: dict = {}
    count = 0
    for dec in iter_tensor_rank_decompositions(t, k, field, budget):
        count += 1
        spans.setdefault(span_tuple(dec), dec)
    if count == 0:
        raise NotOfRankK(f"no tensor rank decomposition of length {k}")
    rep = CensusReport("tensor-rank-spans", counts={"tensor_rank": k, "decompositions": count, "span_tuples": len(spans)})
    rep.checks["unique_spans"] = len(spans) == 1
    rep.witnesses = list(spans)
    return rep


# ---------------------------------------------------------------- lower-bound example


def split_decomposition(M, c, first, field: GF) -> SliceDecomposition:
    """Length-``rank(M)`` decomposition of ``M(x_1, x_2) c(x_3, ...)``.

    ``first`` is an independent family inside the column space of ``M``; it
    is extended to a basis ``f`` of that space and ``M = sum_i f_i g_i^T``.
    Terms ``i < len(first)`` sit on axis 1 with ``b = g_i c``, the rest on
    axis 2 with ``b = f_i c``.
    """
    M, c = field(M), field(c)
    n1, n2 = M.shape
    k = rank(M, field)
    first = np.asarray(first, dtype=DTYPE).reshape(-1, n1)
    basis = list(first)
    for col in M.T:
        if rank(np.array(basis + [col]).reshape(-1, n1), field) > len(basis):
            basis.append(col)
    Fm = np.array(basis, dtype=DTYPE).reshape(-1, n1).T  # (n1, k)
    if Fm.shape[1] != k:
        raise PreconditionFailed("the first family does not lie in the column space")
    Gt = solve_linear(Fm, M, field)
    if Gt is None:
        raise PreconditionFailed("the first family does not lie in the column space")
    r = len(first)
    terms = []
    for i in range(r):
        terms.append(SliceTerm(0, Fm[:, i], outer([Gt[i], c], field)))
    for i in range(r, k):
        terms.append(SliceTerm(1, Gt[i], outer([Fm[:, i], c], field)))
    return SliceDecomposition(M.shape + c.shape, field, tuple(terms))


def lower_bound_example_census(r: int, M, c, field: GF, budget: RankBudget | None = None, cross_check: bool = True) -> CensusReport:
    """First-axis subspaces realised by the split decompositions of ``T = M c``.

    ``M`` must have rank ``2r`` and ``c`` (order ``d - 2 >= 2``) slice rank at
    least ``2r``.  Every ``r``-dimensional subspace of the column space of
    ``M`` is the first-axis span of a length-``2r`` decomposition; the count
    is compared with ``omega p^{r^2}`` exactly.
    """
    M, c = field(M), field(c)
    if M.ndim != 2 or c.ndim < 2:
        raise DimensionMismatch("need a matrix M and an order >= 2 tensor c")
    if rank(M, field) != 2 * r:
        raise PreconditionFailed(f"M has rank {rank(M, field)}, expected {2 * r}")
    if r > 0 and slice_rank_at_most(c, 2 * r - 1, field, budget) is not None:
        raise PreconditionFailed(f"c has slice rank below {2 * r}")
    p = field.p
    T = field(np.multiply.outer(M, c))
    col = subspace_from_vectors(M.T, M.shape[0], field)
    # coordinates of r-dim subspaces of the column space, mapped through its basis
    realised = []
    ok_assemble = True
    for W in enumerate_subspaces(col.dim, r, field):
        first = (W.basis @ col.basis) % p
        dec = split_decomposition(M, c, first, field)
        ok_assemble &= np.array_equal(assemble(dec), T) and dec.length == 2 * r
        realised.append(subspace_from_vectors(first, M.shape[0], field))
    count = len(set(realised))
    rep = CensusReport(
        "example-lower-bound",
        counts={"r": r, "subspaces": count, "gaussian_binomial": gaussian_binomial(2 * r, r, p)},
        bounds={"p_r2": p ** (r * r)},
    )
    rep.checks["decompositions_assemble"] = bool(ok_assemble)
    rep.checks["at_least_omega_p_r2"] = Fraction(count) >= omega_upper() * p ** (r * r)
    if cross_check:
        k = slice_rank(T, field, budget).k
        rep.counts["slice_rank"] = k
        rep.checks["minimal_length"] = k == 2 * r
        adm = admissible_tuples(T, field, k, budget)
        firsts = {s[0] for s in adm.tuples}
        rep.counts["admissible_tuples"] = len(adm)
        rep.checks["realised_in_census"] = all(W in firsts for W in realised)
    rep.witnesses = realised
    rep.notes.append(f"omega ~ {OMEGA:.6f}; exact check uses the {OMEGA_TERMS}-term partial product")
    return rep

"""Exact matrix rank, slice rank and tensor rank with witnesses.

Slice rank is found by walking subspace tuples ``(A_1, ..., A_d)``.  Once the
spans are fixed, ``t`` lies in ``A_1 (x) rest + ... + A_d (x) rest`` exactly
when applying every complement projector ``Q_j`` (kernel ``A_j``) along its
axis kills ``t``.  The b-functions are then recovered by peeling one axis at
a time with the dual family of the canonical basis.
"""

from __future__ import annotations

import itertools
import math
import os
import time
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .decomposition import SliceDecomposition, TensorRankDecomposition
from .errors import BudgetExceeded, DimensionMismatch
from .field import DEFAULT_ENUMERATION_BUDGET, DTYPE, GF, Subspace, dual_family, enumerate_subspaces, rank
from .tensor import apply_along, contract, outer, place

BUDGET_ENV = "SLICERANK_BUDGET"


@dataclass(frozen=True)
class RankBudget:
    """Limits for the exhaustive searches.

    ``max_rank`` caps the rank tried, ``max_candidates`` caps the number of
    candidates examined (subspace tuples, vector tuples, coefficient vectors)
    and ``time_hint`` is an optional wall-clock limit in seconds.
    """

    max_rank: int = 16
    max_candidates: int = 2_000_000
    time_hint: float | None = None

    def __post_init__(self):
        if self.max_rank < 0 or self.max_candidates <= 0:
            raise ValueError("budget limits must be positive")
        if self.time_hint is not None and self.time_hint <= 0:
            raise ValueError("time hint must be positive")

    @classmethod
    def default(cls) -> RankBudget:
        """Default budget; ``$SLICERANK_BUDGET`` overrides ``max_candidates``."""
        raw = os.environ.get(BUDGET_ENV)
        if raw:
            return cls(max_candidates=int(raw))
        return cls()


class _Meter:
    def __init__(self, budget: RankBudget):
        self.budget = budget
        self.count = 0
        self.start = time.monotonic()

    def tick(self, lower_bound: int | None, n: int = 1):
        self.count += n
        if self.count > self.budget.max_candidates:
            raise BudgetExceeded(f"more than {self.budget.max_candidates} candidates examined", lower_bound)
        hint = self.budget.time_hint
        if hint is not None and time.monotonic() - self.start > hint:
            raise BudgetExceeded(f"time hint of {hint}s exceeded", lower_bound)


def matrix_rank(m, field: GF) -> int:
    return rank(m, field)


@dataclass(frozen=True, eq=False)
class MembershipWitness:
    """``b[j]`` is an ``(r_j, ...)`` stack of b-functions over the axes other than ``j``."""

    bases: tuple[np.ndarray, ...]
    b: tuple[np.ndarray, ...]

    def decomposition(self, dims, field: GF) -> SliceDecomposition:
        return SliceDecomposition.from_families(dims, field, self.bases, self.b)


def _check_tuple(t: np.ndarray, spaces: Sequence[Subspace], field: GF):
    if len(spaces) != t.ndim:
        raise DimensionMismatch(f"{len(spaces)} subspaces for an order-{t.ndim} tensor")
    for j, s in enumerate(spaces):
        if s.ambient_dim != t.shape[j] or s.field != field:
            raise DimensionMismatch(f"subspace {j} lives in GF({s.field.p})^{s.ambient_dim}, axis has length {t.shape[j]}")


def in_target(t, spaces: Sequence[Subspace], field: GF) -> bool:
    """Membership test only: every complement projector applied kills ``t``."""
    r = field(t)
    _check_tuple(r, spaces, field)
    for j, s in enumerate(spaces):
        if s.dim:
            r = apply_along(s.complement_projector(), r, j) % field.p
        if not r.any():
            return True
    return not r.any()


def peel_families(t, families, field: GF) -> tuple[tuple[np.ndarray, ...], np.ndarray]:
    """Peel ``t`` axis by axis against independent families (one ``(r_j, n_j)`` array per axis).

    On axis ``j`` the b-functions are the dual contractions of the current
    residual, which is then projected away from the span.  Returns the
    b-stacks and the final residual; ``t`` lies in the target sum exactly when
    the residual is zero.
    """
    r = field(t)
    bs = []
    for j, fam in enumerate(families):
        fam = np.asarray(fam, dtype=DTYPE).reshape(-1, r.shape[j])
        comp = tuple(n for k, n in enumerate(r.shape) if k != j)
        if len(fam) == 0:
            bs.append(np.zeros((0,) + comp, dtype=DTYPE))
            continue
        duals = dual_family(fam, field, r.shape[j]).duals
        b = np.stack([contract(a_star, r, [j], field) for a_star in duals])
        for a, bi in zip(fam, b):
            r = r - place(a, j, bi)
        r = r % field.p
        bs.append(b)
    return tuple(bs), r


def peel(t, spaces: Sequence[Subspace], field: GF) -> tuple[tuple[np.ndarray, ...], np.ndarray]:
    """:func:`peel_families` on the canonical bases of ``spaces``."""
    return peel_families(t, [s.basis for s in spaces], field)


def membership_in_target(t, spaces: Sequence[Subspace], field: GF) -> MembershipWitness | None:
    """b-functions with ``t = sum_j sum_i a_{j,i} (x) b_{j,i}`` over the canonical bases, or ``None``."""
    t = field(t)
    _check_tuple(t, spaces, field)
    bs, residual = peel(t, spaces, field)
    if residual.any():
        return None
    return MembershipWitness(tuple(s.basis for s in spaces), bs)


@dataclass(frozen=True, eq=False)
class SliceRankResult:
    k: int
    witness: SliceDecomposition
    spaces: tuple[Subspace, ...]

    def __iter__(self):
        return iter((self.k, self.witness, self.spaces))


def compositions(k: int, caps: Sequence[int]):
    """Tuples ``(r_1, ..., r_d)`` with ``0 <= r_j <= caps[j]`` summing to ``k``, lexicographic."""
    for r in itertools.product(*(range(min(c, k) + 1) for c in caps)):
        if sum(r) == k:
            yield r


def _search_tuples(t: np.ndarray, lists: list[list[Subspace]], field: GF, meter: _Meter, lower: int):
    """First tuple (in product order) whose projectors kill ``t``."""
    d = len(lists)

    def rec(j: int, r: np.ndarray, chosen: list[Subspace]):
        if j == d:
            meter.tick(lower)
            return tuple(chosen) if not r.any() else None
        for s in lists[j]:
            nxt = apply_along(s.complement_projector(), r, j) % field.p if s.dim else r
            if not nxt.any():
                # the remaining axes may take any subspace; the first is fine
                meter.tick(lower)
                return tuple(chosen) + (s,) + tuple(lst[0] for lst in lists[j + 1:])
            found = rec(j + 1, nxt, chosen + [s])
            if found is not None:
                return found
        return None

    return rec(0, t, [])


def slice_rank_at_most(t, m: int, field: GF, budget: RankBudget | None = None, start: int = 0) -> SliceRankResult | None:
    """Smallest-k witness with ``start <= k <= m``, or ``None`` when none exists."""
    budget = budget or RankBudget.default()
    meter = _Meter(budget)
    t = field(t)
    dims = t.shape
    enum_budget = max(DEFAULT_ENUMERATION_BUDGET, budget.max_candidates)
    for k in range(start, m + 1):
        if k > budget.max_rank:
            raise BudgetExceeded(f"slice rank exceeds max_rank={budget.max_rank}", k)
        for comp in compositions(k, dims):
            try:
                lists = [list(enumerate_subspaces(n, r, field, enum_budget)) for n, r in zip(dims, comp)]
            except BudgetExceeded as exc:
                raise BudgetExceeded(str(exc), k) from exc
            found = _search_tuples(t, lists, field, meter, k)
            if found is not None:
                w = membership_in_target(t, found, field)
                assert w is not None
                return SliceRankResult(k, w.decomposition(dims, field), found)
    return None


def slice_rank(t, field: GF, budget: RankBudget | None = None) -> SliceRankResult:
    """Minimal k with a witness; ties broken by (composition, tuple) enumeration order."""
    t = field(t)
    if t.ndim == 0:
        raise DimensionMismatch("slice rank needs an order >= 1 tensor")
    res = slice_rank_at_most(t, min(t.shape), field, budget)
    assert res is not None, "slicing along any axis bounds the rank by min(dims)"
    return res


def _rank_one_tails(dims: Sequence[int], field: GF) -> np.ndarray:
    """Flattened products of projectively normalized vectors on ``dims``."""
    if not dims:
        return np.ones((1, 1), dtype=DTYPE)
    per_axis = [field.normalized_vectors(n) for n in dims]
    tails = [outer(vs, field).ravel() for vs in itertools.product(*per_axis)]
    return np.array(tails, dtype=DTYPE)


def _tail_factors(index: int, dims: Sequence[int], field: GF) -> tuple[np.ndarray, ...]:
    per_axis = [field.normalized_vectors(n) for n in dims]
    sizes = [len(v) for v in per_axis]
    idx = np.unravel_index(index, sizes) if sizes else ()
    return tuple(np.array(per_axis[a][i]) for a, i in enumerate(idx))


def tensor_rank(t, field: GF, budget: RankBudget | None = None) -> tuple[int, TensorRankDecomposition]:
    """Minimal number of rank-one terms, with a decomposition of that length.

    Tails on axes 2..d run over k-subsets of normalized rank-one tensors; the
    axis-1 vectors then solve a linear system.  At the minimal k no solution
    has a zero axis-1 vector, and no tail repeats (else terms would merge).
    """
    from .field import solve_linear

    budget = budget or RankBudget.default()
    meter = _Meter(budget)
    t = field(t)
    dims = t.shape
    if t.ndim < 1:
        raise DimensionMismatch("tensor rank needs an order >= 1 tensor")
    n1, rest = dims[0], dims[1:]
    if not t.any():
        return 0, TensorRankDecomposition(dims, field, ())
    if t.ndim == 1:
        return 1, TensorRankDecomposition(dims, field, ((t,),))
    n_tails = math.prod((field.p**n - 1) // (field.p - 1) for n in rest)
    if n_tails > budget.max_candidates:
        raise BudgetExceeded(f"{n_tails} rank-one tails exceed the candidate budget", 1)
    tails = _rank_one_tails(rest, field)
    target = t.reshape(n1, -1).T  # (N, n1)
    for k in range(1, n_tails + 1):
        if k > budget.max_rank:
            raise BudgetExceeded(f"tensor rank exceeds max_rank={budget.max_rank}", k)
        total = math.comb(n_tails, k)
        if meter.count + total > budget.max_candidates:
            raise BudgetExceeded(f"{total} candidate tail sets at k={k} exceed the budget", k)
        for combo in itertools.combinations(range(n_tails), k):
            meter.tick(k)
            X = solve_linear(tails[list(combo)].T, target, field)  # (k, n1)
            if X is None:
                continue
            terms = tuple((X[i],) + _tail_factors(c, rest, field) for i, c in enumerate(combo))
            return k, TensorRankDecomposition(dims, field, terms)
    raise AssertionError("unreachable: the tails span the whole space")


def is_separated_decomposition(dec: SliceDecomposition, budget: RankBudget | None = None) -> bool:
    """Whether every nonzero combination of same-axis b's has slice rank >= 2k.

    Coefficient vectors are taken up to scalars, which do not change slice
    rank.
    """
    budget = budget or RankBudget.default()
    k = dec.length
    if k == 0:
        return True
    field = dec.field
    for j in range(dec.order):
        B = dec.b_family(j)
        r = B.shape[0]
        if r == 0:
            continue
        for lam in field.normalized_vectors(r):
            combo = np.tensordot(lam, B, axes=([0], [0])) % field.p
            if combo.ndim == 0:
                if 2 * k > (1 if combo else 0):
                    return False
                continue
            if slice_rank_at_most(combo, 2 * k - 1, field, budget) is not None:
                return False
    return True

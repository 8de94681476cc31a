"""Random fixtures and brute-force oracles shared by the tests."""

from __future__ import annotations

import itertools

import numpy as np

from slicerank.decomposition import SliceDecomposition, TensorRankDecomposition
from slicerank.field import DTYPE, GF, random_independent, rank, solve_linear
from slicerank.decomposition import assemble
from slicerank.tensor import complement_dims, outer, place, spread
from slicerank.transforms import star_shift


def random_decomposition(rng, dims, field: GF, shape=None) -> SliceDecomposition:
    """Independent random a-families and random b's."""
    dims = tuple(dims)
    if shape is None:
        shape = [int(rng.integers(0, min(n, 2) + 1)) for n in dims]
    a_fams, b_fams = [], []
    for j, (n, r) in enumerate(zip(dims, shape)):
        A = random_independent(rng, r, n, field, tries=256)
        assert A is not None
        a_fams.append(A)
        b_fams.append(field.random(rng, (r,) + complement_dims(dims, j)))
    return SliceDecomposition.from_families(dims, field, a_fams, b_fams)


def zero_b_decomposition(rng, dims, field: GF, shape) -> SliceDecomposition:
    dims = tuple(dims)
    a_fams, b_fams = [], []
    for j, (n, r) in enumerate(zip(dims, shape)):
        a_fams.append(random_independent(rng, r, n, field, tries=256))
        b_fams.append(np.zeros((r,) + complement_dims(dims, j), dtype=DTYPE))
    return SliceDecomposition.from_families(dims, field, a_fams, b_fams)


def random_star_shift_args(rng, dec: SliceDecomposition):
    """Random (axes, indices, shifts) for a star shift, or None if fewer than two axes carry terms."""
    shape = dec.shape
    live = [j for j in range(dec.order) if shape[j] > 0]
    if len(live) < 2:
        return None
    size = int(rng.integers(2, len(live) + 1))
    J = sorted(int(x) for x in rng.choice(live, size=size, replace=False))
    rest = complement_dims(dec.dims, J)
    cs = [dec.field.random(rng, rest) for _ in J[:-1]]
    cs.append(dec.field(-np.sum(cs, axis=0)))
    idx = [int(rng.integers(shape[j])) for j in J]
    return J, idx, cs


def random_tensor_rank_decomposition(rng, dims, field: GF, k: int) -> TensorRankDecomposition:
    terms = []
    for _ in range(k):
        term = []
        for n in dims:
            v = field.random(rng, n)
            while not v.any():
                v = field.random(rng, n)
            term.append(v)
        terms.append(tuple(term))
    return TensorRankDecomposition(tuple(dims), field, tuple(terms))


def target_system_member(t, bases, field: GF):
    """Oracle: one linear system in every b-entry for t in sum_j span(bases[j]) (x) rest."""
    t = field(t)
    dims = t.shape
    cols = []
    for j, B in enumerate(bases):
        comp = complement_dims(dims, j)
        size = int(np.prod(comp, dtype=np.int64))
        for a in np.asarray(B).reshape(-1, dims[j]):
            for e in range(size):
                unit = np.zeros(size, dtype=DTYPE)
                unit[e] = 1
                cols.append(place(a, j, unit.reshape(comp)).ravel())
    if not cols:
        return not t.any()
    A = np.array(cols, dtype=DTYPE).T % field.p
    return solve_linear(A, t.ravel(), field) is not None


def span_set(vectors, field: GF) -> frozenset:
    """All elements of the span, as a frozenset of tuples."""
    V = np.asarray(vectors, dtype=DTYPE)
    n = V.shape[1]
    out = set()
    for coeffs in itertools.product(range(field.p), repeat=len(V)):
        v = (np.array(coeffs, dtype=DTYPE) @ V) % field.p if len(V) else np.zeros(n, dtype=DTYPE)
        out.add(tuple(int(x) for x in v))
    return frozenset(out)


def brute_rank(m, field: GF) -> int:
    """Rank from the size of the row space: |span| = p^rank."""
    m = np.asarray(m, dtype=DTYPE)
    if m.size == 0:
        return 0
    size = len(span_set(m, field))
    r = 0
    while field.p**r < size:
        r += 1
    return r


def rank_levels(generators: np.ndarray, p: int, max_len: int) -> dict:
    """BFS over sums: minimal number of generators (flattened rows) summing to each reachable vector."""
    n = generators.shape[1]
    weights = p ** np.arange(n - 1, -1, -1, dtype=np.int64)
    zero = np.zeros(n, dtype=DTYPE)
    best = {0: 0}
    frontier = [zero]
    for level in range(1, max_len + 1):
        new = []
        for v in frontier:
            sums = (v + generators) % p
            for s, c in zip(sums, sums @ weights):
                c = int(c)
                if c not in best:
                    best[c] = level
                    new.append(s)
        frontier = new
    return best


def slice_term_generators(dims, field: GF) -> np.ndarray:
    """Every single slice term a (x) b with a nonzero and b arbitrary, flattened (over GF(p))."""
    gens = []
    for j, n in enumerate(dims):
        comp = complement_dims(dims, j)
        for a in field.nonzero_vectors(n):
            for b in field.vectors(int(np.prod(comp))):
                gens.append(place(a, j, b.reshape(comp)).ravel() % field.p)
    return np.unique(np.array(gens, dtype=DTYPE), axis=0)


def rank_one_generators(dims, field: GF) -> np.ndarray:
    gens = [outer(vs, field).ravel() for vs in itertools.product(*(field.nonzero_vectors(n) for n in dims))]
    return np.unique(np.array(gens, dtype=DTYPE), axis=0)


def tensor_code(t, p: int) -> int:
    flat = np.asarray(t, dtype=DTYPE).ravel()
    return int(flat @ (p ** np.arange(flat.size - 1, -1, -1, dtype=np.int64)))


def star_shifted_zero(rng, dims, field: GF, shape, shifts: int = 5) -> SliceDecomposition:
    """Zero decomposition obtained by star shifts applied to all-zero b's."""
    dec = zero_b_decomposition(rng, dims, field, shape)
    for _ in range(shifts):
        args = random_star_shift_args(rng, dec)
        if args is None:
            break
        dec = star_shift(dec, *args)
    return dec


def zero_decompositions_exhaustive(dims, field: GF, max_len: int):
    """Every decomposition with independent a-families, length <= max_len, assembling to zero."""
    dims = tuple(dims)
    d = len(dims)
    for shape in itertools.product(*(range(min(n, max_len) + 1) for n in dims)):
        if sum(shape) > max_len:
            continue
        fam_choices = []
        for n, r in zip(dims, shape):
            nz = field.nonzero_vectors(n)
            fams = [nz[list(c)] for c in itertools.permutations(range(len(nz)), r)]
            fam_choices.append([F for F in fams if rank(F, field) == r])
        b_sizes = [int(np.prod(complement_dims(dims, j))) for j in range(d)]
        b_vectors = [field.vectors(size) for size in b_sizes]
        for fams in itertools.product(*fam_choices):
            slots = [(j, i) for j in range(d) for i in range(shape[j])]
            for choice in itertools.product(*(range(len(b_vectors[j])) for j, _ in slots)):
                b_fams = [np.zeros((shape[j],) + complement_dims(dims, j), dtype=DTYPE) for j in range(d)]
                for (j, i), c in zip(slots, choice):
                    b_fams[j][i] = b_vectors[j][c].reshape(complement_dims(dims, j))
                dec = SliceDecomposition.from_families(dims, field, list(fams), b_fams)
                if not assemble(dec).any():
                    yield dec


def random_zero_form(rng, dims, field: GF, shape):
    """A decomposition built from random certificate entries obeying the cancellation rule.

    Returns ``(dec, entries)`` where the b's are defined by the representation
    rule, so the certificate holds by construction.
    """
    dims = tuple(dims)
    d = len(dims)
    a_fams = [random_independent(rng, r, n, field, tries=256) for n, r in zip(dims, shape)]
    entries = {}
    for size in range(2, d + 1):
        for J in itertools.combinations(range(d), size):
            rest_dims = complement_dims(dims, J)
            for full in itertools.product(*(range(shape[j]) for j in J)):
                vals = [field.random(rng, rest_dims) for _ in J[:-1]]
                vals.append(field(-np.sum(vals, axis=0)))
                for pos, j in enumerate(J):
                    idx = full[:pos] + full[pos + 1 :]
                    entries[(J, j, full[pos], idx)] = vals[pos]
    b_fams = [np.zeros((shape[j],) + complement_dims(dims, j), dtype=DTYPE) for j in range(d)]
    for (J, j, i, idx), val in entries.items():
        others = [x for x in J if x != j]
        vecs = {x: a_fams[x][ix] for x, ix in zip(others, idx)}
        rest = [x for x in range(d) if x not in J]
        b_fams[j][i] = (b_fams[j][i] + spread(dims, field, j, vecs, val, rest)) % field.p
    dec = SliceDecomposition.from_families(dims, field, a_fams, b_fams)
    return dec, {k: v for k, v in entries.items() if v.any()}

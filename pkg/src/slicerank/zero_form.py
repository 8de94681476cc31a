"""Zero-form certificates for slice decompositions of the zero tensor.

A certificate stores tensors ``c[J, j, i, idx]`` for axis subsets ``J``
(``|J| >= 2``), an axis ``j`` in ``J``, a term index ``i`` on axis ``j`` and
indices ``idx`` of terms on the axes ``J \\ {j}`` (increasing axis order).
Each value lives on the axes outside ``J`` (0-d when ``J`` is everything).
It certifies that

1. every ``b_{j,i}`` is the sum over keys ``(J, j, i, idx)`` of
   ``(prod_{j' in J\\{j}} a_{j', idx_j'}) (x) c[J, j, i, idx]``, and
2. for every ``J`` and every full index tuple on ``J`` the entries obtained
   by dropping one axis of ``J`` at a time sum to zero.

Only nonzero entries are stored.  Everything is 0-based.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass, field as dc_field

import numpy as np

from .decomposition import SliceDecomposition, ValidationReport, assemble
from .errors import DependentFamilies, DifferentTensors, DimensionMismatch, MismatchedOneVariableFunctions, NotZero
from .field import DTYPE, GF, dual_family, independent
from .tensor import apply_along, complement_dims, spread

Key = tuple[tuple[int, ...], int, int, tuple[int, ...]]


@dataclass(eq=False)
class ZeroFormCertificate:
    dims: tuple[int, ...]
    field: GF
    shape: tuple[int, ...]
    entries: dict = dc_field(default_factory=dict)

    def __post_init__(self):
        self.dims = tuple(int(n) for n in self.dims)
        self.shape = tuple(int(r) for r in self.shape)
        self.entries = {k: self.field(v) for k, v in sorted(self.entries.items())}

    def value(self, key: Key) -> np.ndarray:
        J = key[0]
        if key in self.entries:
            return self.entries[key]
        return np.zeros(complement_dims(self.dims, J), dtype=DTYPE)

    def layer(self, size: int) -> dict:
        return {k: v for k, v in self.entries.items() if len(k[0]) == size}

    def __len__(self):
        return len(self.entries)


def _key_problems(key, dims, shape) -> list[str]:
    d = len(dims)
    try:
        J, j, i, idx = key
        J, idx = tuple(J), tuple(idx)
    except (TypeError, ValueError):
        return [f"key {key!r}: expected (J, axis, index, indices)"]
    out = []
    if list(J) != sorted(set(J)) or len(J) < 2 or any(not 0 <= x < d for x in J):
        out.append(f"key {key}: J must be a sorted set of at least two axes in [0, {d})")
        return out
    if j not in J:
        out.append(f"key {key}: axis {j} not in J")
        return out
    if not 0 <= i < shape[j]:
        out.append(f"key {key}: index {i} out of range for axis {j} with {shape[j]} terms")
    others = [x for x in J if x != j]
    if len(idx) != len(others):
        out.append(f"key {key}: need {len(others)} indices for axes {others}")
    else:
        for x, ix in zip(others, idx):
            if not 0 <= ix < shape[x]:
                out.append(f"key {key}: index {ix} out of range for axis {x}")
    return out


def verify_zero_form(dec: SliceDecomposition, cert: ZeroFormCertificate) -> ValidationReport:
    """Check both certificate properties exactly; every violation is reported."""
    report = ValidationReport()
    field = dec.field
    if cert.dims != dec.dims or cert.shape != dec.shape or cert.field != field:
        report.violations.append(
            f"binding: certificate for dims {cert.dims}, shape {cert.shape}, {cert.field} "
            f"does not match decomposition dims {dec.dims}, shape {dec.shape}, {field}"
        )
        return report
    good = {}
    for key, val in cert.entries.items():
        problems = _key_problems(key, dec.dims, dec.shape)
        want = complement_dims(dec.dims, key[0]) if not problems else None
        if not problems and val.shape != want:
            problems.append(f"key {key}: value has dims {val.shape}, expected {want}")
        report.violations.extend(problems)
        if not problems:
            good[key] = val
    if report.violations:
        return report

    # property 1: rebuild every b from the certificate
    rebuilt = {(t.axis, i): np.zeros(t.b.shape, dtype=DTYPE) for j in range(dec.order) for i, t in enumerate(dec.axis_terms(j))}
    for (J, j, i, idx), val in good.items():
        others = [x for x in J if x != j]
        vecs = {x: dec.term(x, ix).a for x, ix in zip(others, idx)}
        rest = [x for x in range(dec.order) if x not in J]
        rebuilt[(j, i)] = rebuilt[(j, i)] + spread(dec.dims, field, j, vecs, val, rest)
    for (j, i), b in rebuilt.items():
        diff = (b - dec.term(j, i).b) % field.p
        if diff.any():
            report.violations.append(f"property 1: b[{j},{i}] differs from its certificate expansion at {int(np.count_nonzero(diff))} entries")

    # property 2: cancellation per (J, full index tuple)
    sums = defaultdict(lambda: 0)
    for (J, j, i, idx), val in good.items():
        full = list(idx)
        full.insert(J.index(j), i)
        sums[(J, tuple(full))] = sums[(J, tuple(full))] + val
    for (J, full), total in sorted(sums.items()):
        if (np.asarray(total) % field.p).any():
            report.violations.append(f"property 2: entries for J={list(J)}, indices {list(full)} do not sum to zero")
    return report


def _check_zero(dec: SliceDecomposition):
    if assemble(dec).any():
        raise NotZero("decomposition does not assemble to the zero tensor")
    for j in range(dec.order):
        if not independent(dec.a_family(j), dec.field, dec.dims[j]):
            raise DependentFamilies(f"a-vectors on axis {j} are linearly dependent")


def _projectors(dec: SliceDecomposition):
    field = dec.field
    duals, Q = [], []
    for j, n in enumerate(dec.dims):
        fam = dual_family(dec.a_family(j), field, n)
        duals.append(fam.duals)
        Q.append((np.eye(n, dtype=DTYPE) - fam.originals.T @ fam.duals) % field.p)
    return duals, Q


def extract_zero_form(dec: SliceDecomposition) -> ZeroFormCertificate:
    """A certificate for a decomposition of zero with independent a-families.

    Write the identity on each axis ``j'`` as ``P + Q`` with ``P`` the
    projection onto the span of the a's along the dual family.  Expanding
    ``b_{j,i}`` over these splits, the part using ``P`` on the axes of
    ``J \\ {j}`` and ``Q`` elsewhere gives the entries at ``J``; the all-``Q``
    part vanishes because the whole sum is zero.  Property 2 follows by
    applying ``a*_{J} (x) Q`` to the zero sum.
    """
    _check_zero(dec)
    field = dec.field
    d = dec.order
    shape = dec.shape
    duals, Q = _projectors(dec)
    live = [x for x in range(d) if shape[x] > 0]
    entries = {}
    for j in live:
        comp = [x for x in range(d) if x != j]
        pos = {x: k for k, x in enumerate(comp)}
        others = [x for x in live if x != j]
        for i, term in enumerate(dec.axis_terms(j)):
            if not term.b.any():
                continue
            for size in range(1, len(others) + 1):
                for S in itertools.combinations(others, size):
                    t = term.b
                    for x in comp:
                        t = apply_along(duals[x] if x in S else Q[x], t, pos[x]) % field.p
                    if not t.any():
                        continue
                    t = np.moveaxis(t, [pos[x] for x in S], list(range(size)))
                    J = tuple(sorted(S + (j,)))
                    for idx in itertools.product(*(range(shape[x]) for x in S)):
                        val = t[idx]
                        if np.any(val):
                            entries[(J, j, i, tuple(int(v) for v in idx))] = np.array(val, dtype=DTYPE)
    return ZeroFormCertificate(dec.dims, field, shape, entries)


@dataclass(eq=False)
class Order3Extraction:
    """The explicit order-3 functions and coefficients.

    Axes are ``x, y, z``; the a-vectors on them are ``a_i``, ``c_j``, ``e_k``
    with b-functions ``b_i``, ``d_j``, ``f_k``.  Arrays are indexed by the
    term indices first, e.g. ``p[i, j]`` is a function of ``z``.
    """

    p: np.ndarray
    g: np.ndarray
    q: np.ndarray
    u: np.ndarray
    h: np.ndarray
    v: np.ndarray
    lam: np.ndarray
    mu: np.ndarray
    nu: np.ndarray
    certificate: ZeroFormCertificate


def extract_zero_form_order3(dec: SliceDecomposition) -> Order3Extraction:
    """Order-3 certificate through the functions ``p, g, q, u, h, v``.

    ``b_i = sum_j c_j (x) p_ij + sum_k q_ik (x) e_k`` and likewise for ``d_j``
    and ``f_k``; the sums ``p+g``, ``q+u``, ``h+v`` lie in the spans of the
    ``e``, ``c``, ``a`` with coefficients ``lam``, ``mu``, ``nu`` adding up
    to zero.
    """
    if dec.order != 3:
        raise DimensionMismatch(f"order-3 extraction on an order-{dec.order} decomposition")
    _check_zero(dec)
    F = dec.field
    P = F.p
    (A_s, C_s, E_s), (Qx, Qy, Qz) = _projectors(dec)
    A, C, E = (dec.a_family(j) for j in range(3))
    B, D, Fk = (dec.b_family(j) for j in range(3))  # (r,n2,n3), (s,n1,n3), (t,n1,n2)
    r, s, t = dec.shape
    n1, n2, n3 = dec.dims

    p = np.einsum("jy,iyz->ijz", C_s, B) % P
    q = np.einsum("yw,kz,iwz->iky", Qy, E_s, B) % P
    g = np.einsum("ix,jxz->ijz", A_s, D) % P
    h = np.einsum("xw,kz,jwz->jkx", Qx, E_s, D) % P
    u = np.einsum("ix,kxy->iky", A_s, Fk) % P
    v = np.einsum("xw,jy,kwy->jkx", Qx, C_s, Fk) % P

    lam = np.einsum("kz,ijz->ijk", E_s, p + g) % P
    mu = np.einsum("jy,iky->ijk", C_s, q + u) % P
    nu = np.einsum("ix,jkx->ijk", A_s, h + v) % P

    X, Y, Z = (0, 1), (0, 2), (1, 2)
    entries = {}
    for i in range(r):
        for j in range(s):
            entries[(X, 0, i, (j,))] = (p[i, j] - lam[i, j] @ E.reshape(t, n3)) % P
            entries[(X, 1, j, (i,))] = g[i, j]
    for i in range(r):
        for k in range(t):
            entries[(Y, 0, i, (k,))] = q[i, k]
            entries[(Y, 2, k, (i,))] = (u[i, k] - mu[i, :, k] @ C.reshape(s, n2)) % P
    for j in range(s):
        for k in range(t):
            entries[(Z, 1, j, (k,))] = (h[j, k] - nu[:, j, k] @ A.reshape(r, n1)) % P
            entries[(Z, 2, k, (j,))] = v[j, k]
    XYZ = (0, 1, 2)
    for i, j, k in itertools.product(range(r), range(s), range(t)):
        entries[(XYZ, 0, i, (j, k))] = np.array(lam[i, j, k], dtype=DTYPE)
        entries[(XYZ, 1, j, (i, k))] = np.array(nu[i, j, k], dtype=DTYPE)
        entries[(XYZ, 2, k, (i, j))] = np.array(mu[i, j, k], dtype=DTYPE)
    entries = {key: val for key, val in entries.items() if np.any(val)}
    cert = ZeroFormCertificate(dec.dims, F, dec.shape, entries)
    return Order3Extraction(p, g, q, u, h, v, lam, mu, nu, cert)


def difference_decomposition(dec1: SliceDecomposition, dec2: SliceDecomposition) -> SliceDecomposition:
    """Same a's, b's replaced by ``b2 - b1``; assembles to zero when both give one tensor."""
    if dec1.dims != dec2.dims or dec1.field != dec2.field or dec1.shape != dec2.shape:
        raise MismatchedOneVariableFunctions("decompositions have different dims or shapes")
    for t1, t2 in zip(dec1.terms, dec2.terms):
        if not np.array_equal(t1.a, t2.a):
            raise MismatchedOneVariableFunctions("the one-variable functions differ")
    updates = {}
    for j in range(dec1.order):
        for i, (t1, t2) in enumerate(zip(dec1.axis_terms(j), dec2.axis_terms(j))):
            updates[(j, i)] = t2.b - t1.b
    return dec1.replace_b(updates)


def difference_certificate(dec1: SliceDecomposition, dec2: SliceDecomposition) -> ZeroFormCertificate:
    """Certificate for ``dec2 - dec1`` (shared a's, b's subtracted)."""
    diff = difference_decomposition(dec1, dec2)
    if assemble(diff).any():
        raise DifferentTensors("the two decompositions assemble to different tensors")
    return extract_zero_form(diff)

"""
Certificates for decompositions of zero
=======================================

Start from zero b's, apply random star shifts, then recover a certificate
explaining why everything cancels.
"""

# %%
import numpy as np

from slicerank import GF, SliceDecomposition, assemble, difference_certificate, extract_zero_form, extract_zero_form_order3, star_shift, verify_zero_form
from slicerank.zero_form import difference_decomposition
from slicerank.field import random_independent
from slicerank.tensor import complement_dims

F3 = GF(3)
rng = np.random.default_rng(4)
dims, shape = (3, 3, 3), (2, 1, 2)
a = [random_independent(rng, r, n, F3) for n, r in zip(dims, shape)]
b = [np.zeros((r,) + complement_dims(dims, j), dtype=np.int64) for j, r in enumerate(shape)]
dec = SliceDecomposition.from_families(dims, F3, a, b)

# %% five star shifts on all three axes
for _ in range(5):
    c = [F3.random(rng, ()) for _ in range(2)]
    c.append(F3(-(c[0] + c[1])))
    idx = [int(rng.integers(r)) for r in shape]
    dec = star_shift(dec, [0, 1, 2], idx, c)
print("nonzero b entries:", sum(int(np.count_nonzero(t.b)) for t in dec.terms), "| sum is zero:", not assemble(dec).any())

# %% general extraction
cert = extract_zero_form(dec)
print(len(cert), "certificate entries;", verify_zero_form(dec, cert))

# %% the order-3 route exposes lambda, mu, nu
ex = extract_zero_form_order3(dec)
print("lambda + mu + nu == 0:", not ((ex.lam + ex.mu + ex.nu) % 3).any())
print(verify_zero_form(dec, ex.certificate))

# %% two decompositions of one tensor with the same one-variable functions
base = dec.replace_b({(j, i): F3.random(rng, t.b.shape) for j in range(3) for i, t in enumerate(dec.axis_terms(j))})
other = star_shift(base, [0, 2], [1, 0], [np.array([1, 2, 0]), np.array([2, 1, 0])])
diff = difference_decomposition(base, other)
print("difference certificate:", verify_zero_form(diff, difference_certificate(base, other)))

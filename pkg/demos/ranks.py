"""
Slice rank and tensor rank of small tensors
===========================================

Exact ranks over GF(p), each returned with a decomposition that
reassembles to the input.
"""

# %%
import numpy as np

from slicerank import GF, assemble, assemble_tensor_rank, matrix_rank, slice_rank, tensor_rank
from slicerank.tensor import identity_tensor, outer

F2 = GF(2)

# %% the diagonal tensors I_{d,k}: slice rank k
for d, k in [(3, 1), (3, 2), (3, 3), (4, 2)]:
    res = slice_rank(identity_tensor(d, k, F2), F2)
    print(f"I_({d},{k}): slice rank {res.k}, subspace dims {[s.dim for s in res.spaces]}")

# %% the witness is an honest decomposition
res = slice_rank(identity_tensor(3, 2, F2), F2)
for term in res.witness.terms:
    print("axis", term.axis, "a =", term.a, "b =", term.b.tolist())
assert np.array_equal(assemble(res.witness), identity_tensor(3, 2, F2))

# %% tensor rank needs full outer products, so it can only be larger
t = identity_tensor(3, 2, F2)
k, trd = tensor_rank(t, F2)
print("tensor rank of I_(3,2):", k)
assert np.array_equal(assemble_tensor_rank(trd), t)

# %% a census of all 256 tensors in F_2^2 (x) F_2^2 (x) F_2^2
table = np.zeros((3, 4), dtype=int)
for bits in range(256):
    t = np.array([(bits >> s) & 1 for s in range(8)]).reshape(2, 2, 2)
    table[slice_rank(t, F2).k, tensor_rank(t, F2)[0]] += 1
print("rows: slice rank 0..2, columns: tensor rank 0..3")
print(table)

# %% order two: every notion agrees with matrix rank
m = outer([[1, 1, 0], [0, 1, 1]], F2) + np.eye(3, dtype=int)
print("matrix", matrix_rank(m, F2), "slice", slice_rank(m, F2).k, "tensor", tensor_rank(m % 2, F2)[0])

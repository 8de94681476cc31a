"""
Moves that change a decomposition but not its tensor
====================================================
"""

# %%
import numpy as np

from slicerank import GF, SliceDecomposition, assemble, basis_change, pair_shift, regroup_tensor_rank, slice_by_axis, star_shift
from slicerank.decomposition import TensorRankDecomposition
from slicerank.field import random_independent

F5 = GF(5)
rng = np.random.default_rng(0)

# %% a random decomposition with one term per axis
dims = (3, 3, 3)
a = [random_independent(rng, 1, 3, F5) for _ in dims]
b = [F5.random(rng, (1, 3, 3)) for _ in dims]
dec = SliceDecomposition.from_families(dims, F5, a, b)
T = assemble(dec)

# %% change of basis on axis 0 (a 1x1 change is just a scalar)
moved = basis_change(dec, 0, [[3]])
print("a on axis 0:", dec.term(0, 0).a, "->", moved.term(0, 0).a)
assert np.array_equal(assemble(moved), T)

# %% pair shift: b on axis 0 gains c_y (x) e, b on axis 1 loses a_x (x) e
e = np.array([1, 0, 4])
moved = pair_shift(dec, (0, 0), (1, 0), e)
assert np.array_equal(assemble(moved), T)

# %% star shift with scalar coefficients (1, 1, -2)
moved = star_shift(dec, [0, 1, 2], [0, 0, 0], [np.array(1), np.array(1), np.array(-2)])
assert np.array_equal(assemble(moved), T)
print("star shift kept the tensor; b on axis 2 changed by", int(np.count_nonzero((moved.term(2, 0).b - dec.term(2, 0).b) % 5)), "entries")

# %% regrouping rank-one terms onto axes, and slicing a tensor along one axis
e0, e1 = np.eye(2, dtype=int)
trd = TensorRankDecomposition((2, 2, 2), GF(2), ((e0, e0, e0), (e1, e1, e1)))
print("regrouped shape:", regroup_tensor_rank(trd, [[0], [1], []]).shape)
print("sliced along axis 2:", slice_by_axis(T, 2, F5).shape)

"""
Counting decompositions exactly
===============================
"""

# %%
import numpy as np

from slicerank import GF, admissible_census, count_matrix_decompositions, count_tensor_rank_decompositions, lower_bound_example_census, matrix_census
from slicerank.enumeration import OMEGA
from slicerank.tensor import identity_tensor, outer

F2, F3 = GF(2), GF(3)

# %% ordered bases of a k-dim space: (p^k - 1)(p^k - p)...
print(count_matrix_decompositions(np.eye(2, dtype=int), F2))
print(matrix_census(3, 3, F3))

# %% admissible subspace tuples for the diagonal tensor
print(admissible_census(identity_tensor(3, 2, F2), F2))

# %% tensor rank decompositions of M(x, y) a(z)
t = np.multiply.outer(np.eye(2, dtype=int), [0, 1])
print(count_tensor_rank_decompositions(t, F2))
print(count_tensor_rank_decompositions(outer([[1, 2], [1, 1], [2, 0]], F3), F3))

# %% many first-axis subspaces for M(x1, x2) c(x3, x4)
print("omega =", OMEGA)
print(lower_bound_example_census(1, np.eye(2, dtype=int), identity_tensor(2, 2, F2), F2))

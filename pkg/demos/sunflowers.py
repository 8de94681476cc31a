"""
Merging a sunflower of decompositions onto its center
=====================================================
"""

# %%
import numpy as np

from slicerank import GF, assemble, check_hypotheses, generate_sunflower_fixture, merge_to_center, sharpness_family
from slicerank.tensor import identity_tensor

F3 = GF(3)

# %% d = 3 needs h = 4 petals
fam = generate_sunflower_fixture(seed=7, dims=(6, 6, 6), field=F3, center_shape=(1, 2, 0), petal_shape=(1, 1, 1))
print("h =", fam.h, "| center shape", fam.center_shape, "|", check_hypotheses(fam))
for th in range(fam.h):
    print(f"petal {th}: shape {fam.decomposition(th).shape}")

# %% the merged decomposition only uses center functions
merged = merge_to_center(fam)
print("merged shape", merged.shape, "reassembles:", np.array_equal(assemble(merged), fam.tensor()))
print("so the slice rank is at most", sum(fam.center_shape))

# %% three petals are not enough in order three
F2 = GF(2)
sharp = sharpness_family(identity_tensor(3, 2, F2), F2)
print(check_hypotheses(sharp))

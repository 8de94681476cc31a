"""Exact slice rank, tensor rank and decomposition structure over small prime fields."""

from .decomposition import (
    SliceDecomposition,
    SliceTerm,
    TensorRankDecomposition,
    ValidationReport,
    assemble,
    assemble_tensor_rank,
    subspace_tuple,
    validate,
)
from .enumeration import (
    OMEGA,
    AdmissibleTupleSet,
    CensusReport,
    admissible_census,
    admissible_tuples,
    count_matrix_decompositions,
    count_slice_decompositions_given_tuple,
    count_tensor_rank_decompositions,
    lower_bound_example_census,
    matrix_census,
    verify_subspace_uniqueness_tensor_rank,
)
from .errors import *  # noqa: F401,F403
from .field import (
    GF,
    Subspace,
    dual_family,
    enumerate_subspaces,
    gaussian_binomial,
    rank,
    rref,
    solve_linear,
    subspace_from_vectors,
)
from .rank import (
    MembershipWitness,
    RankBudget,
    SliceRankResult,
    is_separated_decomposition,
    matrix_rank,
    membership_in_target,
    slice_rank,
    tensor_rank,
)
from .sunflower import Petal, SunflowerFamily, check_hypotheses, generate_sunflower_fixture, merge_to_center, sharpness_family
from .tensor import contract, identity_tensor, outer
from .transforms import basis_change, pair_shift, regroup_tensor_rank, slice_by_axis, star_shift, star_shift_as_pair_shifts
from .zero_form import (
    ZeroFormCertificate,
    difference_certificate,
    extract_zero_form,
    extract_zero_form_order3,
    verify_zero_form,
)

__version__ = "0.1.0"

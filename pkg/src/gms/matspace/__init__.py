"""Matrix spaces, graphical matrix spaces and the linear-algebraic side of the correspondences."""
from .space import (
    ENUM_CAP,
    InfeasibleError,
    MatrixSpace,
    batch_nilpotency_index,
    batch_rank,
    batch_zero_eigen_multiplicity,
    burnside_algebra_dim,
    composition_series_length,
    coordinate_rows,
    element_array,
    enumerate_elements,
    enumerate_subspaces,
    gaussian_binomial,
    coordinate_vectors,
    rref_coordinate_matrices,
    orthonormal_rows,
    graphical_space,
    induced_subspace_LR,
    induced_subspace_U,
    invariant_closure,
    is_invariant,
    is_irreducible,
    max_rank,
    nil_index,
    nilpotent_index,
    projective_points,
    span,
    supporting_graph,
    zero_eigenvalue_min,
    zero_eigenvalue_min_fast,
)
from .search import (
    NotNilError,
    SubspaceWitness,
    find_adapted_vector,
    max_bd_rank_dim,
    max_bd_rank_ord,
    max_eigen_bounded_dim,
    max_nil_dim,
    max_rdc_dim,
    meshulam_witness,
    nil_to_acyclic_subgraph,
    stabilizer_subspace,
)
from .threeway import (
    ConjugacyCheck,
    ThreeWayArray,
    congruence_to_isomorphism,
    congruent_images,
    conjugacy_criterion,
    conjugacy_to_permutation,
    horizontal_to_frontal,
    permutation_matrix,
    recombine,
    slice_of,
    threeway_from_space,
    transform,
)

__all__ = [name for name in dir() if not name.startswith("_")]

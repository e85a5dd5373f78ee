"""Tensor-network state factorization and numerical local-unitary invariants."""

from .tensor import (
    Tensor,
    ShapeError,
    contract,
    self_trace,
    permute_legs,
    group_legs,
    ungroup_legs,
    tensor_product,
    make_identity,
    make_cup,
    make_cap,
    make_swap,
    make_copy,
)
from .decompose import (
    SVDFactors,
    SchmidtForm,
    MPSChain,
    diagrammatic_svd,
    schmidt,
    mps_factor,
    mps_reconstruct,
    mps_truncate,
    classify_topology,
    verify_isometry,
    fidelity,
    SEPARABLE,
    MAXIMALLY_ENTANGLED,
    GENERIC,
)
from .invariants import (
    PermTuple,
    CanonicalClass,
    parse_label,
    format_label,
    canonicalize,
    conjugate_tuple,
    connected_components,
    component_subtuples,
    enumerate_invariants,
    permutation_operator,
    evaluate,
    evaluate_fast,
    is_real_guaranteed,
    verify_invariance,
    max_unitary_deviation,
    pure_jk,
)
from .entropy import (
    Spectrum,
    CharPolyCoeffs,
    CharPolyRelation,
    renyi,
    von_neumann,
    renyi_from_invariant,
    char_poly_relation,
    schmidt_from_jk,
)
from .states import (
    StateData,
    StateFileError,
    save_state,
    load_state,
    random_pure_state,
    random_local_unitary,
    density_from_pure,
    partial_trace,
    bipartition_density,
    apply_local_unitary,
)

__version__ = "0.1.0"

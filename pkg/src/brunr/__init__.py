"""Exact computation of Bogomolov multipliers and lattice obstructions for finite groups."""

__version__ = "0.1.0"

from brunr import _backend
from brunr.budgets import Budgets
from brunr.class2 import (
    CentralExtensionData,
    SubspaceClassification,
    Wedge2,
    bogomolov_class2,
    classify_subspace,
    example_case,
    pfaffian,
    pfaffian_family,
    plucker_quadric,
    s_bic,
    s_group,
    wedge,
)
from brunr.cohomology import (
    CocycleClassGroup,
    b0,
    h2_abelian_via_wedge,
    h2_qz,
    h2_trivial_mod,
    restrict_class,
)
from brunr.errors import (
    BrunrError,
    BudgetExceeded,
    ContainmentViolation,
    DimensionMismatch,
    InvalidLattice,
    InvalidPermutation,
    NotAGroup,
    NotASubgroup,
    OrderBoundExceeded,
    UnsupportedDimension,
    WitnessNotFound,
)
from brunr.exactalg import (
    AbelianStructure,
    IntMatrix,
    ModMatrix,
    cokernel_structure,
    howell_form,
    kernel_mod,
    smith_normal_form,
    subquotient_structure,
)
from brunr.groups import (
    CayleyGroup,
    Subgroup,
    abelian_subgroups,
    all_sylow_bicyclic,
    all_sylow_cyclic,
    bicyclic_subgroups,
    from_abelian,
    from_cayley_table,
    from_central_extension,
    from_permutations,
    named_group,
    sylow_subgroup,
)
from brunr.lattices import (
    GLattice,
    LatticeCohomology,
    h2_lattice,
    multiplicative_kernel,
    pair_lattice,
    regular_lattice,
    standard_kernel_lattice,
    standard_obstruction,
    tate_h0,
)

BACKEND = _backend.NAME

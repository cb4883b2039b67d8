"""Exact cohomology of generalized configuration spaces.

Everything here is exact: integer and rational sparse linear algebra,
set-partition lattices, bar complexes over poset functors, twisted
commutative dg algebras, symmetric functions with Laurent coefficients,
and Chevalley-Eilenberg complexes of twisted Lie algebras.  No floating
point anywhere.
"""

from .exactalg import (
    CohomologySummary,
    ExactMatrix,
    GradedComplex,
    cohomology,
    endomorphism_cohomology_traces,
    induced_map_on_cohomology,
    integer_determinant,
    invariant_factors,
    smith_normal_form,
    trace_on_cohomology,
)
from .partitions import (
    JoinClosure,
    SetPartition,
    UpSet,
    act,
    atoms,
    bell_number,
    cycle_type_representative,
    enumerate_partitions,
    join,
    join_closure,
    leq,
    lower_interval,
    meet,
    named_upset,
    orbit_upset,
    perm_from_cycles,
)
from .posetcx import (
    BarComplex,
    FinitePoset,
    PosetFunctor,
    bar_complex,
    constant_functor,
    order_complex,
    smash_check,
)
from .tcdga import (
    FiniteCdga,
    FiniteTcdga,
    GradedModuleInput,
    acyclic_cdga,
    constant_tcdga,
    formal_tcdga,
    point_cdga,
    shuffle_forget,
    suspension,
    tcdga_from_json,
    tcdga_to_json,
)
from .cfcd import (
    CharacterTable,
    E1Page,
    cd_complex,
    cf_complex,
    characters,
    e1_page,
    iacyclic_closed_form,
    invariants_dims,
    phi_functor,
    total_cohomology,
)
from .symfunc import (
    SymFunc,
    character_value,
    cycle_types,
    element_E,
    element_L,
    element_S,
    euler_specialize,
    kequals_series,
    parse_laurent,
    pi_k_char,
    schur,
)
from .celie import (
    LieWord,
    TwistedLie,
    ce_complex,
    ce_homology,
    compare_cf_ce,
    lie_basis,
    normalize_word,
    twisted_lie,
)
from .ainfty import (
    FiniteDga,
    IdealData,
    build_morphism,
    hypothesis_check,
    random_dga_fixture,
    verify_morphism,
)

__all__ = [name for name in dir() if not name.startswith("_")]

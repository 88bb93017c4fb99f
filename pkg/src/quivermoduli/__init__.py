"""Moduli of thin quiver representations as explicit toric varieties.

Exact, dependency-free tooling: quivers and stability parameters, zero
pattern classification, monomial semi-invariants and flow polytopes, fans
with combinatorial line-bundle cohomology, quivers of sections, and an
end-to-end verification pipeline identifying the moduli of the three-vertex
quiver with the blowup of projective space along a linear subspace.
"""

from .quiver import (
    Arrow,
    Quiver,
    Weight,
    blowup_quiver,
    is_admissible,
    kronecker_quiver,
    toric_form,
    validate,
    weight_from_toric_form,
)
from .stability import (
    Stability,
    ThinRep,
    ZeroPattern,
    chamber_decomposition,
    classify_patterns,
    closed_form_stability,
    fine_moduli_check,
    pattern_of,
    semistability,
    subrep_supports,
    theta_value,
)
from .semiinvariants import (
    FlowPolytope,
    degree_one_generation,
    evaluate_point,
    flow_polytope,
    hilbert_function,
    monomial_weight,
    projective_equal,
    semi_invariant_basis,
)
from .toric import (
    Fan,
    blowup_fan,
    cohomology,
    divisor_class,
    fan_equal,
    fans_isomorphic,
    hyperplane_class,
    is_complete,
    is_smooth,
    is_star_subdivision_blowdown,
    normal_fan,
    normal_fan_of_points,
    product_fan,
    projective_space_fan,
    star_subdivision,
    transform_fan,
)
from .sections import (
    LineBundleCollection,
    blowup_collection,
    bound_ideal,
    irreducible_sections,
    is_strong_exceptional,
    quiver_of_sections,
    section_basis,
)
from .pipeline import (
    DEFAULT_SEED,
    ModuliResult,
    blowdown_check,
    exceptional_locus,
    identify_reference_fan,
    moduli_fan,
    pushforward_rep,
    run_verification,
    tautological_rep,
    theta_prime_contraction,
    verify_commute,
)

__version__ = "0.1.0"

"""Zero patterns that are spectrally, refined inertially, or inertially arbitrary.

The package decides and certifies eigenvalue-freedom properties of zero
patterns: exact realization witnesses for target characteristic polynomials
and refined inertias, nilpotent-centralizer certificates for spectrally
arbitrary patterns, structural obstructions, properly signed nests, and
census tooling that classifies all small patterns up to equivalence.
"""

from .patterns import (
    CanonicalForm,
    CompositeCycle,
    PatternError,
    ZeroPattern,
    are_equivalent,
    canonicalize,
    composite_cycles,
    conforms_to,
    embeds_up_to_equivalence,
    is_irreducible,
    is_superpattern,
    parse_pattern,
    pattern_from_json,
    pattern_of,
    pattern_to_json,
    pattern_to_text,
    simple_cycles,
)
from .spectra import (
    CharPoly,
    InertiaReading,
    MatrixError,
    RationalMatrix,
    RefinedInertia,
    RootBox,
    SupportPolynomial,
    char_poly,
    evaluate_support_poly,
    inertia_targets,
    matrix_from_json,
    matrix_to_json,
    parse_matrix,
    principal_minor_sum,
    refined_inertia_of,
    refined_inertia_targets,
    roots,
    symbolic_coefficient,
)
from .families import (
    AppendixRow,
    appendix_rows,
    bordered_path_pattern,
    builtin_pattern,
    companion_pattern,
    figure_patterns,
    loop_chain_pattern,
    order3_riap_generators,
    order3_sap_generators,
    path_pattern,
    two_loop_path_pattern,
)

__version__ = "0.1.0"

"""liftforge: local rules of reversible cellular automata.

Construct, decide, classify and cryptanalytically evaluate Boolean local
rules whose induced shift-invariant maps are bijective on every circular
length, together with the landscape notation, composition expressions,
parametric families, the exhaustive diameter-6 involution search, and
differential-uniformity tables.
"""

from .corefn import (
    Anf,
    ArityCapError,
    EquivClassId,
    InvalidRuleError,
    LiftforgeError,
    Rule,
    canonicalize,
    complement,
    degree,
    from_anf,
    is_balanced,
    orbit,
    parse_anf,
    render_anf,
    reverse,
    rule_from_anf_text,
    rule_from_table,
    rule_from_text,
    rule_to_text,
    to_anf,
)
from .lifting import (
    InducedMap,
    PropernessVerdict,
    Witness,
    compose,
    compose_chain,
    decide_proper,
    divisor_check,
    expand,
    induce,
    is_lifting,
    iterate_order,
    replay_witness,
    sigma,
)
from .landscape import (
    InvalidLandscapeError,
    Landscape,
    LandscapeSet,
    canonical_symbols,
    check_shift_product,
    compile_landscape,
    compile_set,
    enumerate_conserved,
    is_conserved,
    parse_landscape,
)

__version__ = "0.1.0"

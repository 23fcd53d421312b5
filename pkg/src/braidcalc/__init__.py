"""Exact-arithmetic workbench for finite-dimensional braided vector spaces.

Computes, over a cyclotomic coefficient field and without any floating
point: primitive spaces of the braided tensor bialgebra, Nichols-algebra
dimensions by quantum-symmetrizer rank, symmetric-algebra towers and the
strongness degree (combinatorial rank), universal enveloping algebras of
braided Lie algebras with PBW verification, Hecke-type specializations, and
the root-of-unity symmetrization operators with their partial-bracket
identities.
"""

__version__ = "0.1.0"

from .errors import WorkbenchError
from .scalars import (
    CycloField,
    CycloScalar,
    Q,
    field_make,
    is_regular,
    is_regular_exact,
    q_binomial,
    q_factorial,
    q_int,
    root_order,
)
from .linalg import Echelon, Subspace
from .spaces import (
    BraidedSpace,
    BraidWord,
    braid_apply,
    braiding_block,
    hecke_analysis,
    make_braiding,
    make_preset,
    matsumoto_lift,
    minimal_polynomial,
    shuffles,
    word_index,
    word_letters,
)
from .tensorbialg import (
    delta_component,
    nichols_dims,
    primitive_space,
    symmetrizer,
    symmetrizer_block,
    symmetrizer_factorization_check,
)
from .tower import (
    IdealTower,
    QuotientBialgebra,
    SdegVerdict,
    ideal_closure,
    is_quadratic,
    nichols_via_tower,
    quotient_primitives,
    sdeg,
    symmetric_step,
    tower_iterates,
)
from .enveloping import (
    BracketTable,
    FilteredQuotient,
    LieVerdict,
    PbwVerdict,
    enveloping_filtration,
    hecke_presentation,
    lie_check,
    pbw_check,
    primitive_check,
    validate_bracket,
)
from .pareigis import (
    MixedZetaSpace,
    ZetaSpace,
    check_pi_in_E,
    check_pi_su,
    induced_bracket,
    mixed_zeta_space,
    pi_zeta,
    verify_PL,
    zeta_space,
)
from .fixtures import CATALOG, preset_bracket

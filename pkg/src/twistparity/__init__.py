"""twistparity: desk-scale verification that the parity of twisted Selmer
coranks matches twisted root numbers for mod-p congruent elliptic curve pairs.

The two sides of the identity are computed through independent code paths
(local-invariant correction characters vs. local root-number case formulas)
and checked prime by prime, in aggregate, and against absolute root numbers
where those are determined.
"""

from .alc import AlcRecord, alc_parity, alc_records, delta_trivial
from .congruence import CongruenceVerdict, check_congruence, sturm_bound
from .curve import (
    LocalReductionData,
    ReductionKind,
    WeierstrassCurve,
    bad_primes,
    classify_reduction,
    conductor,
    tate_local,
    trace_of_frobenius,
)
from .galoislocal import (
    LocalCharSpec,
    LocalGaloisDatum,
    SigmaSpec,
    det_sigma_minus_one,
    multiplicity,
    parse_local_datum,
    s3_kummer_local_datum,
)
from .numtheory import (
    CubeClassMu3,
    Place,
    SquareClass,
    cube_class_mu3,
    hilbert_symbol,
    square_class,
)
from .parity import (
    FieldData,
    ParityReport,
    classify_pair,
    compute_sigma_sets,
    global_report,
    local_root_ratio,
    select_sigma,
)
from .reptheory import (
    CharacterRep,
    FiniteGroup,
    character_table,
    det_character,
    frobenius_schur,
    inner_product,
    restrict,
)

__version__ = "0.1.0"

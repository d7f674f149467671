"""Normal forms and defect certificates for degree-p extensions of valued
rational function fields.

The package normalizes Artin-Schreier generators y^p - y = a and Kummer
generators y^p = a over K = k(x), where the value of x is either the
irrational sqrt(2) (value-transcendental mode) or zero with transcendental
residue (residue-transcendental mode).  Every normalization emits a
replayable certificate; ``certify`` rechecks it without trusting the
engine that produced it.
"""

from .values import Value, SubgroupSpec, subgroup_membership, quotient_index
from .fields import GaloisField, Poly, RatFunc
from .coeff import EqModel, MixedModel
from .laurent import ValConfig, LaurentPoly, LaurentRing
from .units import UnitRewrite, unit_level, high_level_bound
from .engine_vt import (
    Classification,
    ASNormalForm,
    KummerNormalForm,
    normalize_artin_schreier,
    normalize_kummer,
)
from .engine_rt import (
    ASRTNormalForm,
    KummerRTNormalForm,
    DescentRecord,
    descend_constant,
    normalize_artin_schreier_rt,
    normalize_kummer_rt,
)
from .certify import (
    DefectValue,
    ExtensionData,
    defect,
    check_fundamental_inequality,
    verify_value_witness,
    verify_residue_witness,
    insep_tower_data,
    verify_report,
)
from .parser import parse_element, print_element
from .errors import DefectlessError

__version__ = "0.1.0"

__all__ = [
    "Value", "SubgroupSpec", "subgroup_membership", "quotient_index",
    "GaloisField", "Poly", "RatFunc",
    "EqModel", "MixedModel", "high_level_bound",
    "ValConfig", "LaurentPoly", "LaurentRing",
    "UnitRewrite", "unit_level",
    "Classification", "ASNormalForm", "KummerNormalForm",
    "normalize_artin_schreier", "normalize_kummer",
    "ASRTNormalForm", "KummerRTNormalForm", "DescentRecord",
    "descend_constant", "normalize_artin_schreier_rt", "normalize_kummer_rt",
    "DefectValue", "ExtensionData", "defect", "check_fundamental_inequality",
    "verify_value_witness", "verify_residue_witness", "insep_tower_data",
    "verify_report",
    "parse_element", "print_element",
    "DefectlessError",
]

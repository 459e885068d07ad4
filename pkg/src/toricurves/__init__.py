"""Exact motivic classes of rational-curve moduli on smooth complete split
toric varieties, cross-checked against finite-field point counts."""

from importlib import resources

from .errors import BudgetError, FanValidationError, InternalCheckError
from .grothendieck import (
    MINUS_INFINITY,
    DimSeries,
    LaurentClass,
    MultiSeries,
    SeriesCap,
    dimser_mul,
    evaluate,
    inverse_one_minus_Linv_pow,
    multiseries_scale_vars,
    virtual_dimension,
)
from .toric import (
    Fan,
    FanReport,
    PatternSet,
    PicardData,
    class_of_variety,
    eff_dual_contains,
    eff_dual_enumerate,
    enumerate_cones,
    fan_product,
    parse_fan,
    pattern_set,
    picard_data,
    validate,
)
from .mobius import (
    IntPoly,
    MobiusTable,
    fan_mobius_polynomial,
    generating_polynomial,
    local_identity_check,
    mobius_table,
    torsor_class,
)
from .eulerprod import (
    GlobalMobius,
    closed_point_weight,
    euler_product_at_Linv,
    euler_product_p1,
    global_mobius,
    int_mobius,
    sym_p1_class,
    zeta_p1_coeffs,
)
from .moduli import (
    DegreeVector,
    ErrorReport,
    JetCondition,
    constrained_main_term,
    convergence_report,
    expected_dimension_check,
    hom_class,
    normalized_hom_class,
    open_curve_config_series,
    pattern_config_class,
    pattern_config_series,
    tamagawa,
)
from .oracle import (
    FFForm,
    JetSpec,
    OracleReport,
    enumerate_forms,
    ff_constrained_count,
    ff_hom_count,
    ff_pattern_count,
    has_common_projective_root,
    oracle_compare,
    reduce_point,
)

__version__ = "0.1.0"

FIXTURE_NAMES = ("p1", "p2", "p3", "p1xp1", "bl1p2", "dp6")


def fixture_fan(name: str) -> Fan:
    """Load one of the bundled fans by short name (see FIXTURE_NAMES)."""
    import json

    if name not in FIXTURE_NAMES:
        raise ValueError(f"unknown fixture fan {name!r}; have {FIXTURE_NAMES}")
    doc = json.loads(resources.files(__name__).joinpath(f"fans/{name}.json").read_text())
    return parse_fan(doc)

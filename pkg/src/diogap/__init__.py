"""Exact arithmetic toolkit for badly-approximable sets.

Decides membership in the sets {xi : |xi*q - p| >= gamma/q**tau for all p, q}
through certified continued-fraction computations, builds excluded-interval
covers with rigorous measure brackets, and certifies isolated points whose
flanking excluded intervals meet them exactly.
"""

from .exactnum import (
    Enclosure,
    Exponent,
    QuadIrr,
    Rational,
    Value,
    compare,
    decimal_str,
    exponent_str,
    make_quad,
    mobius,
    parse_exponent,
    parse_value,
    power_enclosure,
    value_str,
)
from .contfrac import (
    CFExpansion,
    equivalent_by,
    expand,
    from_periodic,
    from_purely_periodic,
    tail_agreement,
    tails_eventually_agree,
)
from .diocore import (
    DiophParams,
    ExcludedInterval,
    MembershipVerdict,
    OracleReport,
    TailCertificate,
    brute_force_member,
    excluded_interval,
    is_member,
    lemma_lhs,
    translate,
)
from .gapscan import (
    CertificationResult,
    IntervalCover,
    IsolationCertificate,
    MeasureBounds,
    MergedInterval,
    TouchingPoint,
    build_cover,
    certify_isolated,
    find_touching_points,
    measure_bounds,
    tail_series_bound,
    touching_survey,
)
from .construct import (
    HypothesisViolation,
    IndeterminateFloor,
    SearchHit,
    Theorem1Instance,
    Theorem2Instance,
    default_search_grid,
    search_isolation_params,
    theorem1,
    theorem1_params,
    theorem2_transform,
)

__version__ = "0.1.0"

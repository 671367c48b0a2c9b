"""Tropical tritangent (1,1)-curves to smooth tropical (3,3)-curves.

Exact-arithmetic tools for: regular Newton subdivisions and dual curves,
stable intersections, the classification of local tangencies, chip-firing
and theta characteristics on the genus-4 skeleton, lifting multiplicities
and fields of definition, and real-liftability verdicts per tritangent
class.
"""

from .curves import (
    CROSS,
    SLOPE_MINUS,
    SLOPE_PLUS,
    PlanarTropicalCurve,
    TritangentParams,
    dual_curve,
    lambda_curve,
    params_from_valuations,
)
from .divisors import (
    GraphDivisor,
    MetricGraph,
    Skeleton,
    canonical_divisor,
    class_of_divisor,
    linearly_equivalent,
    reduce_divisor,
    skeleton,
    theta_characteristics,
)
from .enumerator import (
    ClassReport,
    ClassSumError,
    classes_report,
    enumerate_tritangents,
)
from .intersect import (
    IntersectionComponent,
    StableDivisor,
    component_multiplicities,
    set_intersection,
    stable_intersection,
)
from .lifting import LiftReport, analyze_lifting, lifting_multiplicity
from .residuefields import (
    ResidueFieldSpec,
    RealVerdict,
    real_liftable,
    sign_solve,
    square_class,
)
from .sextic import (
    CoefficientDatum,
    SexticInput,
    example120_signs,
    honeycomb_sextic,
    random_smooth_sextic,
    sextic_from_heights,
)
from .subdivision import NewtonSubdivision, is_smooth, regular_subdivision
from .tangency import (
    GammaNonGenericError,
    TangencyRecord,
    analyze,
    classify_component,
    is_tritangent,
    locate_tangency_points,
)

__version__ = "0.1.0"

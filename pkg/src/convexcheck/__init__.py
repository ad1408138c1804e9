"""convexcheck: exact convexity analysis via quasiconvex linear perturbations.

A toolkit built entirely on exact rational arithmetic: classify points of
convex domains, test quasiconvexity, convexity and radial lower stability by
deterministic sampling, falsify perturbed families over coefficient grids,
and produce independently re-checkable convexity certificates.
"""

__version__ = "0.1.0"

from .errors import (
    CollinearOverlap,
    ConstantFunctional,
    ConstantFunctionalOnDomain,
    ConvexCheckError,
    DegenerateDomain,
    DegeneratePairing,
    DegenerateRay,
    DegenerateSimplex,
    DimensionMismatch,
    EmptyPlan,
    MalformedCertificate,
    NotInAffineHull,
    ParameterOutOfRange,
    PointOutsideDomain,
    SinglePointDomain,
    UnknownFixture,
)
from .geometry import (
    ConvexDomain,
    ConvexPolygon2D,
    EuclideanBall,
    Point,
    PointClass,
    PointSource,
    Scalar,
    Segment,
    Simplex,
    as_scalar,
    barycentric,
    classify_point,
    intersect_segments_2d,
    point,
    ray_exit_point,
    sample_flat_points,
    sample_points,
    segment_point,
    t_param,
)
from .functionals import (
    ConstancyCheck,
    Fixture,
    FixtureProfile,
    FunctionOracle,
    KNOWN_CONVEX,
    KNOWN_QUASICONVEX_FAMILY,
    KNOWN_STABLE,
    LinearFunctional,
    ball_probe_points,
    construct_nonconstant_functional,
    fixture,
    fixture_names,
    fixture_record,
    functional,
    is_constant_on,
    pair,
    perturbed,
)
from .checkers import (
    Inconclusive,
    Pass,
    SamplePlan,
    Verdict,
    Violation,
    convex_check,
    default_lambda_grid,
    default_t_grid,
    falsify_quasiconvex,
    family_quasiconvex_check,
    lambda_range,
    plan_pairs,
    quasiconvex_check,
    radial_stability_check,
)
from .reduction import (
    CONTINUITY_ON_INNER_SEGMENT,
    RADIAL_STABILITY_AT_FLAT_POINT,
    CaseA,
    CaseAStep,
    CaseB,
    CaseBStep,
    CertStatus,
    Certificate,
    Conclusion,
    InnerContinuity,
    LimitStep,
    Refutation,
    StabilityLimsup,
    TheoremReport,
    case_a_bound,
    case_b_bound,
    choose_w,
    default_s_sequence,
    select_lambda,
    validate_certificate,
    verify_convexity_via_theorem,
)

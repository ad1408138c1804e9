"""Exception hierarchy shared by all convexcheck modules."""


class ConvexCheckError(Exception):
    """Base class for every error raised by this package."""


class DimensionMismatch(ConvexCheckError):
    """Operands live in different ambient dimensions."""


class DegenerateSimplex(ConvexCheckError):
    """Simplex vertices are affinely dependent or otherwise unusable."""


class DegenerateDomain(ConvexCheckError):
    """Domain constructor arguments violate the domain's invariants."""


class NotInAffineHull(ConvexCheckError):
    """Point has no affine coordinates over a lower-dimensional simplex."""


class ParameterOutOfRange(ConvexCheckError):
    """Interpolation or grid parameter outside its admissible interval."""


class CollinearOverlap(ConvexCheckError):
    """Segment intersection is a nondegenerate segment, not a single point."""


class SinglePointDomain(ConvexCheckError):
    """Operation needs a domain with more than one point."""


class UnknownFixture(ConvexCheckError):
    """Requested fixture name is not in the registry."""


class EmptyPlan(ConvexCheckError):
    """Sampling plan yields no test triples, or an empty grid was supplied."""


class DegenerateRay(ConvexCheckError):
    """Ray endpoints coincide."""


class DegeneratePairing(ConvexCheckError):
    """The functional does not separate the two base points."""


class ConstantFunctional(ConvexCheckError):
    """No admissible auxiliary point: the functional is constant on the domain."""


class ConstantFunctionalOnDomain(ConvexCheckError):
    """Verification requires a functional that is not constant on the domain."""


class PointOutsideDomain(ConvexCheckError):
    """A point that must belong to the domain does not."""


class MalformedCertificate(ConvexCheckError):
    """Certificate structure is not interpretable (wrong shapes or variants)."""

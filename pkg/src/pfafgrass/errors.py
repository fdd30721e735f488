"""Exception types shared across the package."""


class PfafGrassError(Exception):
    """Base class for all package errors."""


class OrderMismatch(PfafGrassError):
    """Binary operation on cyclotomic numbers of different field orders."""


class NonDivisibleOrder(PfafGrassError):
    """Embedding Q(zeta_m) -> Q(zeta_n) requires m | n."""


class DivisionByZero(PfafGrassError):
    pass


class NotFiniteOrder(PfafGrassError):
    """Matrix has no power equal to the identity under the configured bound."""


class ClosureBoundExceeded(PfafGrassError):
    """Group closure exceeded the configured element bound."""


class NotASubgroup(PfafGrassError):
    pass


class NonIntegralMultiplicity(PfafGrassError):
    """Character decomposition produced a non-integer inner product."""


class TargetExceedsMultiplicity(PfafGrassError):
    pass


class InconsistentCenterSpec(PfafGrassError):
    pass


class OddSize(PfafGrassError):
    pass


class UnsupportedDimension(PfafGrassError):
    pass


class DimensionMismatch(PfafGrassError):
    pass


class StepBudgetExceeded(PfafGrassError):
    """Groebner pair-reduction budget ran out; carries partial-state info."""

    def __init__(self, message, steps=None, basis_size=None):
        super().__init__(message)
        self.steps = steps
        self.basis_size = basis_size


class PointNotOnVariety(PfafGrassError):
    pass


class RankNotFour(PfafGrassError):
    pass


class DegenerateFiber(PfafGrassError):
    pass


class CandidateVerificationFailed(PfafGrassError):
    pass


class NoExactPointFound(PfafGrassError):
    pass


class FieldDegreeBudgetExceeded(PfafGrassError):
    pass


class IrreducibleFactorTooLarge(PfafGrassError):
    pass


class ProjectionDegenerate(PfafGrassError):
    pass


class NotSmooth(PfafGrassError):
    pass


class GenusUncomputable(PfafGrassError):
    pass


class GroupMismatch(PfafGrassError):
    pass

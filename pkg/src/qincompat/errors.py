"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class DimensionMismatch(ValueError):
    """Operands act on incompatible spaces."""


class NotHermitian(ValueError):
    """A matrix expected to be Hermitian fails the Hermiticity check."""


class NotRank1(ValueError):
    """A measurement expected to be rank-1 has an operator of higher rank."""


class NotRank1Projective(NotRank1):
    """A measurement expected to be a basis measurement is not one."""


class NotMaximalPair(ValueError):
    """A pair expected to certify as maximally incompatible does not."""


class SolverDidNotConverge(RuntimeError):
    """The semidefinite solver failed to produce a usable solution."""


class SizeCapExceeded(ValueError):
    """A semidefinite program exceeds the supported problem size."""

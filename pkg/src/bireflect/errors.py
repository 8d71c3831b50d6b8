"""Exception hierarchy shared by all modules."""


class ReflectionError(Exception):
    """Base class for every error raised by bireflect."""


class NonConvergence(ReflectionError):
    """A Newton iteration did not converge within its budget."""


class OutsideValidity(ReflectionError):
    """Point is too far from the curve for the Schwarz function to be usable."""


class DerivativeSingular(ReflectionError):
    """S'(z) (or the inverse derivative) vanished or blew up."""


class DomainViolation(ReflectionError, ValueError):
    """Field evaluated at a singularity or across its branch cut."""


class NotOnCurve(ReflectionError, ValueError):
    pass


class Unsupported(ReflectionError):
    pass


class EmptyNullSpace(ReflectionError):
    """No nontrivial field in the basis satisfies the boundary conditions."""


class SingularArgument(ReflectionError, ValueError):
    pass


class NotConverged(ReflectionError):
    """Series truncation gate was never met within the term budget."""


class QuadratureFailure(ReflectionError):
    pass


class BranchCutCrossing(ReflectionError):
    pass


class ConfigError(ReflectionError, ValueError):
    pass

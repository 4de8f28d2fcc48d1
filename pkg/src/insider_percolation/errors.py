"""Exception types shared across the package."""


class ValidationError(ValueError):
    """Input violates a data-type invariant (unsorted boundaries, bad range...)."""


class DomainError(ValueError):
    """Argument outside the domain of an analytic formula."""


class DivergenceError(ArithmeticError):
    """Quantity diverges, e.g. mean cluster size at or above the threshold."""


class UnsupportedGeometryError(ValueError):
    pass


class ConvergenceError(RuntimeError):
    pass

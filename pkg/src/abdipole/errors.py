"""Exception types shared by the model, oracle and CLI layers."""


class DomainError(ValueError):
    """Input lies outside the physical domain of a formula."""


class RegimeError(ValueError):
    """The small-drift regime v_e >> v_q needed by the charge expansion is violated."""


class RegimeWarning(UserWarning):
    """Drift speed is close enough to v_e that the expansion degrades."""


class PoleWarning(UserWarning):
    """Impact parameter is close to the pole of the total-momentum denominator."""


class QuadratureError(RuntimeError):
    """Numerical integration did not reach the requested tolerance."""


class SamplingError(ValueError):
    """Too few samples to resolve the fringe pattern."""


class ConsistencyError(RuntimeError):
    """Two independent routes to the same quantity disagree."""

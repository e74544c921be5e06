"""Exception types shared across the solver."""


class SingularSystem(Exception):
    """A tridiagonal or dense factor turned out singular (zero pivot)."""


class NonConvergence(Exception):
    """A fixed-point iteration exhausted its iteration budget."""


class CflViolation(Exception):
    """A step was attempted that violates the step-size guard."""


class IndeterminateOrder(Exception):
    """Order estimation had no admissible nodes to average over."""


class ConfigError(Exception):
    """Scenario configuration text failed to parse or validate."""

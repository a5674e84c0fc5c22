"""Exception types shared across the package."""


class InfeasibleError(RuntimeError):
    """An exhaustive computation would exceed its size guard."""


class SolverTimeout(RuntimeError):
    """An exact chromatic-number computation ran past its time budget."""


class HypothesisError(ValueError):
    """A function fails the smoothness/sign hypotheses a verifier relies on."""


class ConvergenceError(RuntimeError):
    """A numerical optimizer failed to produce a trustworthy maximizer."""

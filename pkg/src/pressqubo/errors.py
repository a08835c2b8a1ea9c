"""Exception types shared across the package."""


class PressQuboError(Exception):
    """Base class for package-specific failures."""


class TooLarge(PressQuboError):
    """An exhaustive computation would exceed its hard size guard."""


class Infeasible(PressQuboError):
    """The instance admits no assignment satisfying all constraints."""


class GenerationFailed(PressQuboError):
    """The instance generator could not produce a feasible instance."""

"""Exception types shared across the package."""


class DegenerateMomentError(ArithmeticError):
    """Moment Gram matrix lost positive definiteness at working precision."""


class NonConvergenceError(RuntimeError):
    """An iterative solver ran out of iterations before reaching tolerance."""

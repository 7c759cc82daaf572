"""Exception types shared across the package."""


class TPSError(Exception):
    """Base class for all errors raised by thermocontact."""


class DimensionError(TPSError, ValueError):
    """Inputs of mismatched dimension were combined."""


class EvaluationError(TPSError, ArithmeticError):
    """A field evaluated to a non-finite value or left its domain."""

    def __init__(self, message, coords=None):
        if coords is not None:
            message = f"{message} at {format_coords(coords)}"
        super().__init__(message)
        self.coords = coords


class GaugeSingularityError(EvaluationError):
    """The gauge factor is (numerically) zero at the evaluation point."""


class ChartSingularityError(EvaluationError):
    """A thermodynamic chart is undefined at the point (e.g. T = 0)."""


class DomainError(EvaluationError):
    """A model or fundamental relation was evaluated outside its domain."""


def format_coords(coords) -> str:
    if hasattr(coords, "as_dict"):
        coords = coords.as_dict()
    if isinstance(coords, dict):
        return "(" + ", ".join(f"{k}={v:.17g}" for k, v in coords.items()) + ")"
    return "(" + ", ".join(f"{float(v):.17g}" for v in coords) + ")"

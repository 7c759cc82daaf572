"""Numerical contact geometry of the thermodynamic phase space.

Darboux coordinates are ordered ``(w, p1..pn, q1..qn)`` and the contact form
is ``eta = dw + sum_a p_a dq^a``.
"""

__version__ = "0.1.0"

from .chart import (  # noqa: E402
    CotangentVector,
    DarbouxPoint,
    ScalarField,
    TangentVector,
    differentiate,
    from_adapted,
    to_adapted,
)
from .contact import ContactChart, VectorField, d_eta, eta, horizontal_basis, lie_bracket, reeb  # noqa: E402
from .errors import (  # noqa: E402
    ChartSingularityError,
    DimensionError,
    DomainError,
    EvaluationError,
    GaugeSingularityError,
    TPSError,
)
from .gauge import GaugeFactor, GaugedStructure, transform, verify_gauge, zeta  # noqa: E402
from .structure import inverse_metric, metric_G, phi  # noqa: E402

__all__ = [
    "__version__",
    "CotangentVector",
    "DarbouxPoint",
    "ScalarField",
    "TangentVector",
    "differentiate",
    "from_adapted",
    "to_adapted",
    "ContactChart",
    "VectorField",
    "d_eta",
    "eta",
    "horizontal_basis",
    "lie_bracket",
    "reeb",
    "ChartSingularityError",
    "DimensionError",
    "DomainError",
    "EvaluationError",
    "GaugeSingularityError",
    "TPSError",
    "GaugeFactor",
    "GaugedStructure",
    "transform",
    "verify_gauge",
    "zeta",
    "inverse_metric",
    "metric_G",
    "phi",
]

"""qcover: exact symbolic computation for quantum covering groups.

Covers the (q,pi)-scalar tower, the half-quantum group f, the covering
group U with triangular normal form, braid operators on U and on
integrable modules, and orthogonal PBW bases in finite type.
"""

from .scalars import QPiScalar, RationalFunction, quantum_binomial, quantum_factorial, quantum_int
from .rootdata import CartanDatum, CartanValidationError, Weight

__all__ = [
    "QPiScalar",
    "RationalFunction",
    "quantum_int",
    "quantum_factorial",
    "quantum_binomial",
    "CartanDatum",
    "CartanValidationError",
    "Weight",
]

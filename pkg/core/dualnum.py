"""
Dual numbers a + εb with ε² = 0, the scalar ring of every other module.

Main functions:
- dual_arith: Adds, subtracts or multiplies two dual numbers.
- dual_inv: Inverts a dual number with non-vanishing primal part.
- parse_dual: Parses the command-line literal "a,b".
"""

from __future__ import annotations

from dataclasses import dataclass
from numbers import Real

from core.config import get_tolerance
from core.errors import InvalidParams, NotInvertible


@dataclass(frozen=True)
class DualNumber:
    """Dual number primal + ε·dual."""

    primal: float
    dual: float = 0.0

    @classmethod
    def coerce(cls, value: DualNumber | Real) -> DualNumber:
        if isinstance(value, DualNumber):
            return value
        if isinstance(value, Real):
            return cls(float(value), 0.0)
        raise TypeError(f'cannot interpret {value!r} as a dual number')

    def __add__(self, other: DualNumber | Real) -> DualNumber:
        other = DualNumber.coerce(other)
        return DualNumber(self.primal + other.primal, self.dual + other.dual)

    __radd__ = __add__

    def __sub__(self, other: DualNumber | Real) -> DualNumber:
        other = DualNumber.coerce(other)
        return DualNumber(self.primal - other.primal, self.dual - other.dual)

    def __rsub__(self, other: Real) -> DualNumber:
        return DualNumber.coerce(other) - self

    def __neg__(self) -> DualNumber:
        return DualNumber(-self.primal, -self.dual)

    def __mul__(self, other: DualNumber | Real) -> DualNumber:
        if not isinstance(other, (DualNumber, Real)):
            return NotImplemented
        other = DualNumber.coerce(other)
        return DualNumber(
            self.primal * other.primal,
            self.primal * other.dual + self.dual * other.primal,
        )

    def __rmul__(self, other: Real) -> DualNumber:
        return self * other

    def __truediv__(self, other: DualNumber | Real) -> DualNumber:
        return self * DualNumber.coerce(other).inverse()

    def __rtruediv__(self, other: Real) -> DualNumber:
        return DualNumber.coerce(other) * self.inverse()

    def is_invertible(self, tol: float | None = None) -> bool:
        """Tells whether the primal part exceeds the tolerance in size."""
        tol = get_tolerance() if tol is None else tol
        return abs(self.primal) > tol

    def inverse(self, tol: float | None = None) -> DualNumber:
        """Returns a⁻¹ − εba⁻².

        Raises:
            NotInvertible: If |primal| is not above the tolerance.
        """
        if not self.is_invertible(tol):
            raise NotInvertible(
                f'{self} has vanishing primal part and is not invertible'
            )
        inv = 1.0 / self.primal
        return DualNumber(inv, -self.dual * inv * inv)

    def isclose(self, other: DualNumber | Real, tol: float) -> bool:
        other = DualNumber.coerce(other)
        return (
            abs(self.primal - other.primal) <= tol
            and abs(self.dual - other.dual) <= tol
        )

    def to_json(self) -> dict:
        return {'p': self.primal, 'd': self.dual}

    @classmethod
    def from_json(cls, data: dict) -> DualNumber:
        return cls(float(data['p']), float(data['d']))

    def __str__(self) -> str:
        sign = '-' if self.dual < 0 else '+'
        return f'{self.primal:g} {sign} {abs(self.dual):g}ε'


ONE = DualNumber(1.0, 0.0)
EPSILON = DualNumber(0.0, 1.0)


def dual_arith(x: DualNumber, y: DualNumber, op: str) -> DualNumber:
    """Combines two dual numbers.

    Args:
        x (DualNumber): Left operand.
        y (DualNumber): Right operand.
        op (str): One of 'add', 'sub' or 'mul'.

    Returns:
        DualNumber: The result, using ε² = 0 for products.

    Raises:
        InvalidParams: If the operation is unknown.
    """
    if op == 'add':
        return x + y
    if op == 'sub':
        return x - y
    if op == 'mul':
        return x * y
    raise InvalidParams(f'unknown dual operation {op!r}')


def dual_inv(x: DualNumber, tol: float | None = None) -> DualNumber:
    """Inverts a dual number, raising NotInvertible on the null cone."""
    return x.inverse(tol)


def parse_dual(text: str) -> DualNumber:
    """Parses "a,b" (or a bare real "a") into a + εb.

    Raises:
        InvalidParams: If the literal is malformed.
    """
    parts = [part.strip() for part in text.split(',')]
    if len(parts) not in (1, 2) or any(part == '' for part in parts):
        raise InvalidParams(f'malformed dual number literal {text!r}')
    try:
        values = [float(part) for part in parts]
    except ValueError as exc:
        raise InvalidParams(f'malformed dual number literal {text!r}') from exc
    return DualNumber(values[0], values[1] if len(values) == 2 else 0.0)

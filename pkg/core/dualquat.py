"""
Quaternions and dual quaternions over the dual numbers, their conjugations
and norm, the Study quadric / null cone classification and the action of a
dual quaternion on points of real projective 3-space.

A dual quaternion q = p + εd is stored as two real quaternions. Points
(x0:x1:x2:x3) are embedded as x0 + ε(x1𝐢 + x2𝐣 + x3𝐤) and mapped by
[(p − εd) x (p̄ + εd̄)].

Main functions:
- dq_mul: Product of two dual quaternions.
- dq_conj: Quaternion conjugate or ε-conjugate.
- dq_norm: The dual number q·q̄.
- classify: Position of q relative to the Study quadric and the null cone.
- act_on_point: Image of a homogeneous point under q.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from numbers import Real
from typing import Sequence

import numpy as np

from core.config import get_tolerance
from core.dualnum import DualNumber
from core.errors import InvalidParams, InvariantViolation, NotInvertible, NullConeElement, ZeroElement


def qmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Hamilton product of quaternion arrays of shape (..., 4)."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    aw, ax, ay, az = a[..., 0], a[..., 1], a[..., 2], a[..., 3]
    bw, bx, by, bz = b[..., 0], b[..., 1], b[..., 2], b[..., 3]
    return np.stack(
        [
            aw * bw - ax * bx - ay * by - az * bz,
            aw * bx + ax * bw + ay * bz - az * by,
            aw * by - ax * bz + ay * bw + az * bx,
            aw * bz + ax * by - ay * bx + az * bw,
        ],
        axis=-1,
    )


def dqmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Dual quaternion product of arrays of shape (..., 8)."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    primal = qmul(a[..., :4], b[..., :4])
    dual = qmul(a[..., :4], b[..., 4:]) + qmul(a[..., 4:], b[..., :4])
    return np.concatenate([primal, dual], axis=-1)


def dqconj(a: np.ndarray) -> np.ndarray:
    """Quaternion conjugate of dual quaternion arrays of shape (..., 8)."""
    out = np.array(a, dtype=float, copy=True)
    out[..., 1:4] *= -1.0
    out[..., 5:8] *= -1.0
    return out


def dual_scale(primal: float, dual: float, a: np.ndarray) -> np.ndarray:
    """Multiplies dual quaternion arrays (..., 8) by primal + ε·dual."""
    a = np.asarray(a, dtype=float)
    return np.concatenate(
        [primal * a[..., :4], primal * a[..., 4:] + dual * a[..., :4]], axis=-1
    )


@dataclass(frozen=True)
class Quaternion:
    """Real quaternion w + x𝐢 + y𝐣 + z𝐤."""

    w: float = 0.0
    x: float = 0.0
    y: float = 0.0
    z: float = 0.0

    @classmethod
    def from_array(cls, values: Sequence[float]) -> Quaternion:
        w, x, y, z = (float(v) for v in values)
        return cls(w, x, y, z)

    def as_array(self) -> np.ndarray:
        return np.array([self.w, self.x, self.y, self.z])

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])

    def __add__(self, other: Quaternion) -> Quaternion:
        return Quaternion.from_array(self.as_array() + other.as_array())

    def __sub__(self, other: Quaternion) -> Quaternion:
        return Quaternion.from_array(self.as_array() - other.as_array())

    def __neg__(self) -> Quaternion:
        return Quaternion(-self.w, -self.x, -self.y, -self.z)

    def __mul__(self, other: Quaternion | Real) -> Quaternion:
        if isinstance(other, Quaternion):
            return Quaternion.from_array(qmul(self.as_array(), other.as_array()))
        if isinstance(other, Real):
            return Quaternion.from_array(float(other) * self.as_array())
        return NotImplemented

    def __rmul__(self, other: Real) -> Quaternion:
        return self * other

    def conj(self) -> Quaternion:
        return Quaternion(self.w, -self.x, -self.y, -self.z)

    def norm2(self) -> float:
        """Returns p·p̄ = w² + x² + y² + z²."""
        return float(self.as_array() @ self.as_array())


@dataclass(frozen=True)
class DualQuaternion:
    """Dual quaternion primal + ε·dual."""

    primal: Quaternion = Quaternion()
    dual: Quaternion = Quaternion()

    @classmethod
    def from_array(cls, values: Sequence[float]) -> DualQuaternion:
        values = np.asarray(values, dtype=float)
        if values.shape != (8,):
            raise InvalidParams(
                f'a dual quaternion needs 8 coordinates, got shape {values.shape}'
            )
        return cls(
            Quaternion.from_array(values[:4]), Quaternion.from_array(values[4:])
        )

    @classmethod
    def from_coords(cls, coords: Sequence[DualNumber]) -> DualQuaternion:
        """Builds q from its four dual-number coordinates q0..q3."""
        coords = [DualNumber.coerce(c) for c in coords]
        if len(coords) != 4:
            raise InvalidParams('a dual quaternion has four dual coordinates')
        return cls(
            Quaternion(*(c.primal for c in coords)),
            Quaternion(*(c.dual for c in coords)),
        )

    @classmethod
    def scalar(cls, value: DualNumber | Real) -> DualQuaternion:
        value = DualNumber.coerce(value)
        return cls(Quaternion(value.primal), Quaternion(value.dual))

    @classmethod
    def identity(cls) -> DualQuaternion:
        return cls(Quaternion(1.0))

    def as_array(self) -> np.ndarray:
        return np.concatenate([self.primal.as_array(), self.dual.as_array()])

    def coord(self, index: int) -> DualNumber:
        p = self.primal.as_array()
        d = self.dual.as_array()
        return DualNumber(float(p[index]), float(d[index]))

    def coords(self) -> list[DualNumber]:
        return [self.coord(i) for i in range(4)]

    def __add__(self, other: DualQuaternion) -> DualQuaternion:
        return DualQuaternion.from_array(self.as_array() + other.as_array())

    def __sub__(self, other: DualQuaternion) -> DualQuaternion:
        return DualQuaternion.from_array(self.as_array() - other.as_array())

    def __neg__(self) -> DualQuaternion:
        return DualQuaternion.from_array(-self.as_array())

    def __mul__(self, other: DualQuaternion | DualNumber | Real) -> DualQuaternion:
        if isinstance(other, DualQuaternion):
            return DualQuaternion.from_array(dqmul(self.as_array(), other.as_array()))
        if isinstance(other, (DualNumber, Real)):
            other = DualNumber.coerce(other)
            return DualQuaternion.from_array(
                dual_scale(other.primal, other.dual, self.as_array())
            )
        return NotImplemented

    def __rmul__(self, other: DualNumber | Real) -> DualQuaternion:
        # dual numbers are central
        return self * other

    def conj(self) -> DualQuaternion:
        return DualQuaternion(self.primal.conj(), self.dual.conj())

    def eps_conj(self) -> DualQuaternion:
        return DualQuaternion(self.primal, -self.dual)

    def norm(self) -> DualNumber:
        return dq_norm(self)

    def is_invertible(self, tol: float | None = None) -> bool:
        tol = get_tolerance() if tol is None else tol
        return self.primal.norm2() > tol

    def inverse(self, tol: float | None = None) -> DualQuaternion:
        """Returns q̄·(q q̄)⁻¹.

        Raises:
            NotInvertible: If the primal norm vanishes.
        """
        if not self.is_invertible(tol):
            raise NotInvertible(f'{self} lies on the null cone')
        return self.conj() * self.norm().inverse(0.0)

    def isclose(self, other: DualQuaternion, tol: float | None = None) -> bool:
        tol = get_tolerance() if tol is None else tol
        return bool(np.max(np.abs(self.as_array() - other.as_array())) <= tol)

    def to_json(self) -> dict:
        return {
            'primal': self.primal.as_array().tolist(),
            'dual': self.dual.as_array().tolist(),
        }

    @classmethod
    def from_json(cls, data: dict) -> DualQuaternion:
        return cls(
            Quaternion.from_array(data['primal']), Quaternion.from_array(data['dual'])
        )

    def __str__(self) -> str:
        names = ('', 'i', 'j', 'k', 'ε', 'εi', 'εj', 'εk')
        terms = [
            f'{value:+g}{name}'
            for value, name in zip(self.as_array(), names)
            if value != 0.0
        ]
        return ' '.join(terms) if terms else '0'


ONE = DualQuaternion.identity()
I = DualQuaternion(Quaternion(0.0, 1.0))
J = DualQuaternion(Quaternion(0.0, 0.0, 1.0))
K = DualQuaternion(Quaternion(0.0, 0.0, 0.0, 1.0))
EPS = DualQuaternion(Quaternion(), Quaternion(1.0))


class PoseClass(Enum):
    """Position of a dual quaternion relative to the Study quadric."""

    STUDY_REGULAR = 'StudyRegular'
    OFF_STUDY = 'OffStudy'
    NULL_CONE = 'NullCone'
    EXCEPTIONAL_GENERATOR = 'ExceptionalGenerator'


def dq_mul(q: DualQuaternion, r: DualQuaternion) -> DualQuaternion:
    """Returns the (noncommutative) product q·r."""
    return q * r


def dq_conj(q: DualQuaternion, kind: str = 'quaternion') -> DualQuaternion:
    """Conjugates a dual quaternion.

    Args:
        q (DualQuaternion): Input.
        kind (str): 'quaternion' negates the 𝐢, 𝐣, 𝐤 coordinates,
            'epsilon' negates the dual part.

    Raises:
        InvalidParams: If the kind is unknown.
    """
    if kind == 'quaternion':
        return q.conj()
    if kind == 'epsilon':
        return q.eps_conj()
    raise InvalidParams(f'unknown conjugation {kind!r}')


def dq_norm(q: DualQuaternion) -> DualNumber:
    """Returns q q̄ = pp̄ + ε(pd̄ + dp̄)."""
    product = dqmul(q.as_array(), dqconj(q.as_array()))
    scale = max(1.0, float(np.max(np.abs(product))))
    if not np.max(np.abs(product[[1, 2, 3, 5, 6, 7]])) <= 1e-9 * scale:
        raise InvariantViolation('vector part of the norm does not vanish')
    return DualNumber(float(product[0]), float(product[4]))


def classify(q: DualQuaternion, tol: float | None = None) -> PoseClass:
    """Classifies q against the Study quadric and the null cone.

    Raises:
        ZeroElement: If all eight coordinates are below the tolerance.
    """
    tol = get_tolerance() if tol is None else tol
    values = q.as_array()
    if np.max(np.abs(values)) <= tol:
        raise ZeroElement('the zero dual quaternion has no pose class')
    if np.linalg.norm(values[:4]) <= tol:
        return PoseClass.EXCEPTIONAL_GENERATOR
    norm = dq_norm(q)
    if norm.primal <= tol:
        return PoseClass.NULL_CONE
    if abs(norm.dual) <= tol * max(1.0, norm.primal):
        return PoseClass.STUDY_REGULAR
    return PoseClass.OFF_STUDY


def embed_point(x: Sequence[float]) -> DualQuaternion:
    """Embeds (x0:x1:x2:x3) as x0 + ε(x1𝐢 + x2𝐣 + x3𝐤)."""
    x0, x1, x2, x3 = (float(v) for v in x)
    return DualQuaternion(Quaternion(x0), Quaternion(0.0, x1, x2, x3))


def act_on_point(
    q: DualQuaternion, x: Sequence[float], tol: float | None = None
) -> np.ndarray:
    """Maps a homogeneous point by [(p − εd) x (p̄ + εd̄)].

    Args:
        q (DualQuaternion): Acting dual quaternion.
        x (Sequence[float]): Homogeneous point (x0, x1, x2, x3).
        tol (float, optional): Invertibility tolerance.

    Returns:
        np.ndarray: Homogeneous image (y0, y1, y2, y3).

    Raises:
        NullConeElement: If the norm of q is not invertible.
    """
    tol = get_tolerance() if tol is None else tol
    if not q.is_invertible(tol):
        raise NullConeElement(f'{q} lies on the null cone and has no action')
    y = dqmul(dqmul(q.eps_conj().as_array(), embed_point(x).as_array()),
              dqconj(q.as_array()))
    return np.array([y[0], y[5], y[6], y[7]])


def affine(y: Sequence[float]) -> np.ndarray:
    """Dehomogenizes (y0:y1:y2:y3) to (y1, y2, y3)/y0."""
    y = np.asarray(y, dtype=float)
    return y[1:] / y[0]


def rotation_quaternion(axis: Sequence[float], angle: float) -> DualQuaternion:
    """Rotation about a line through the origin, cos(ω/2) + sin(ω/2)·axis."""
    axis = np.asarray(axis, dtype=float)
    length = np.linalg.norm(axis)
    if length == 0.0:
        raise InvalidParams('rotation axis must be non-zero')
    axis = axis / length
    half = 0.5 * angle
    return DualQuaternion(Quaternion(math.cos(half), *(math.sin(half) * axis)))


def translation_quaternion(vector: Sequence[float]) -> DualQuaternion:
    """Translation by `vector`, 1 − ½ε·vector."""
    vx, vy, vz = (float(v) for v in vector)
    return DualQuaternion(Quaternion(1.0), Quaternion(0.0, -0.5 * vx, -0.5 * vy, -0.5 * vz))


def frame_for_axis(
    direction: Sequence[float], point: Sequence[float] = (0.0, 0.0, 0.0)
) -> DualQuaternion:
    """Unit displacement taking the z-axis to the line through `point`
    with direction `direction`."""
    u = np.asarray(direction, dtype=float)
    if np.linalg.norm(u) == 0.0:
        raise InvalidParams('axis direction must be non-zero')
    u = u / np.linalg.norm(u)
    ez = np.array([0.0, 0.0, 1.0])
    cross = np.cross(ez, u)
    sin_angle = np.linalg.norm(cross)
    cos_angle = float(ez @ u)
    if sin_angle < 1e-15:
        rot = ONE if cos_angle > 0 else rotation_quaternion((1.0, 0.0, 0.0), math.pi)
    else:
        rot = rotation_quaternion(cross, math.atan2(sin_angle, cos_angle))
    return translation_quaternion(point) * rot


def conjugate_by(g: DualQuaternion, q: DualQuaternion) -> DualQuaternion:
    """Returns g q ḡ for a unit displacement g."""
    return g * q * g.conj()

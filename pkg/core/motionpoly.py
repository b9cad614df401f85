"""
Motion polynomials: polynomials in a real, central indeterminate t with
dual quaternion coefficients, stored from the constant term upwards.

Also hosts the basic motions of the cylinder group about the 𝐤-axis
(rotation, translation, helical and vertical Darboux motion) with analytic
derivatives, and point trajectories with a degree estimate.

Main functions:
- mp_mul: Product of two motion polynomials.
- mp_eval / mp_eval_right: Evaluation at a real parameter (t = ∞ gives the
  leading coefficient) and right evaluation at a dual quaternion.
- mp_norm: The norm polynomial f·f̄ with dual number coefficients.
- make_basic_motion: Rotation, translation, helical or Darboux motion.
- trajectory_of_point: Sampled trajectory of a point and its degree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from numbers import Real
from typing import Sequence

import numpy as np
from numpy.polynomial import polynomial as P

from core.config import get_settings, get_tolerance
from core.dualnum import DualNumber
from core.dualquat import (
    DualQuaternion,
    act_on_point,
    conjugate_by,
    dqconj,
    dqmul,
    dual_scale,
    frame_for_axis,
)
from core.errors import InvalidParams, InvariantViolation, NullConeParameter
from core.log import get_logger
from core.projd import CurveEvaluator

logger = get_logger(__name__)

POLY_MAX_ORDER = 16


def _trim(values: np.ndarray) -> np.ndarray:
    values = np.atleast_2d(np.asarray(values, dtype=float))
    scale = float(np.max(np.abs(values))) if values.size else 0.0
    end = values.shape[0]
    while end > 1 and np.max(np.abs(values[end - 1])) <= 1e-14 * max(scale, 1e-300):
        end -= 1
    return values[:end].copy()


def _trim_real(values: np.ndarray) -> np.ndarray:
    values = np.atleast_1d(np.asarray(values, dtype=float))
    scale = float(np.max(np.abs(values))) if values.size else 0.0
    end = values.shape[0]
    while end > 1 and abs(values[end - 1]) <= 1e-14 * max(scale, 1e-300):
        end -= 1
    return values[:end].copy()


def _convolve(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    out = np.zeros((a.shape[0] + b.shape[0] - 1, 8))
    for i in range(a.shape[0]):
        for j in range(b.shape[0]):
            out[i + j] += dqmul(a[i], b[j])
    return out


@dataclass(frozen=True, eq=False)
class MotionPoly:
    """Polynomial Σ coeffs[i]·tⁱ with dual quaternion coefficients."""

    coeffs: tuple[DualQuaternion, ...]

    def __post_init__(self) -> None:
        if not self.coeffs:
            raise InvalidParams('a motion polynomial needs at least one coefficient')
        trimmed = _trim(np.array([c.as_array() for c in self.coeffs]))
        object.__setattr__(
            self, 'coeffs', tuple(DualQuaternion.from_array(row) for row in trimmed)
        )

    @classmethod
    def from_array(cls, values: np.ndarray) -> MotionPoly:
        values = np.atleast_2d(np.asarray(values, dtype=float))
        return cls(tuple(DualQuaternion.from_array(row) for row in values))

    @classmethod
    def constant(cls, value: DualQuaternion | DualNumber | Real) -> MotionPoly:
        if not isinstance(value, DualQuaternion):
            value = DualQuaternion.scalar(value)
        return cls((value,))

    @classmethod
    def linear(cls, h: DualQuaternion) -> MotionPoly:
        """Returns t − h."""
        return cls((-h, DualQuaternion.identity()))

    def as_array(self) -> np.ndarray:
        return np.array([c.as_array() for c in self.coeffs])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> DualQuaternion:
        return self.coeffs[-1]

    def primal_array(self) -> np.ndarray:
        return self.as_array()[:, :4]

    def __add__(self, other: MotionPoly) -> MotionPoly:
        a, b = self.as_array(), other.as_array()
        n = max(a.shape[0], b.shape[0])
        out = np.zeros((n, 8))
        out[: a.shape[0]] += a
        out[: b.shape[0]] += b
        return MotionPoly.from_array(out)

    def __neg__(self) -> MotionPoly:
        return MotionPoly.from_array(-self.as_array())

    def __sub__(self, other: MotionPoly) -> MotionPoly:
        return self + (-other)

    def __mul__(self, other: MotionPoly | DualQuaternion | DualNumber | Real) -> MotionPoly:
        if isinstance(other, MotionPoly):
            return MotionPoly.from_array(_convolve(self.as_array(), other.as_array()))
        if isinstance(other, DualQuaternion):
            return self * MotionPoly.constant(other)
        if isinstance(other, (DualNumber, Real)):
            other = DualNumber.coerce(other)
            return MotionPoly.from_array(dual_scale(other.primal, other.dual, self.as_array()))
        return NotImplemented

    def __rmul__(self, other: DualQuaternion | DualNumber | Real) -> MotionPoly:
        if isinstance(other, DualQuaternion):
            return MotionPoly.constant(other) * self
        return self * other

    def __call__(self, t: float) -> DualQuaternion:
        return mp_eval(self, t)

    def conj(self) -> MotionPoly:
        return MotionPoly.from_array(dqconj(self.as_array()))

    def derivative(self, order: int = 1) -> MotionPoly:
        values = self.as_array()
        if order > self.degree:
            return MotionPoly.from_array(np.zeros((1, 8)))
        return MotionPoly.from_array(P.polyder(values, m=order, axis=0))

    def divmod_real(self, s: Sequence[float]) -> tuple[MotionPoly, MotionPoly]:
        """Division by a real polynomial s, coordinatewise."""
        s = _trim_real(s)
        values = self.as_array()
        nq = max(values.shape[0] - s.size + 1, 1)
        nr = max(s.size - 1, 1)
        quotient = np.zeros((nq, 8))
        remainder = np.zeros((nr, 8))
        for col in range(8):
            q, r = P.polydiv(values[:, col], s)
            quotient[: q.size, col] = q
            remainder[: min(r.size, nr), col] = r[:nr]
        return MotionPoly.from_array(quotient), MotionPoly.from_array(remainder)

    def divmod_right(self, divisor: MotionPoly) -> tuple[MotionPoly, MotionPoly]:
        """Returns (Q, R) with self = Q·divisor + R and deg R < deg divisor.

        Raises:
            NotInvertible: If the leading coefficient of the divisor is not
                invertible.
        """
        lead_inv = divisor.leading.inverse().as_array()
        rem = self.as_array().copy()
        div = divisor.as_array()
        m = divisor.degree
        n = rem.shape[0] - 1
        if n < m:
            return MotionPoly.constant(0.0), self
        quot = np.zeros((n - m + 1, 8))
        for k in range(n, m - 1, -1):
            factor = dqmul(rem[k], lead_inv)
            quot[k - m] = factor
            for j in range(m + 1):
                rem[k - m + j] -= dqmul(factor, div[j])
        return MotionPoly.from_array(quot), MotionPoly.from_array(rem[: max(m, 1)])

    def monic(self) -> tuple[DualQuaternion, MotionPoly]:
        """Returns (L, L⁻¹·self) with L the leading coefficient."""
        lead = self.leading
        return lead, lead.inverse() * self

    def isclose(self, other: MotionPoly, tol: float | None = None) -> bool:
        tol = get_tolerance() if tol is None else tol
        a, b = self.as_array(), other.as_array()
        n = max(a.shape[0], b.shape[0])
        pa, pb = np.zeros((n, 8)), np.zeros((n, 8))
        pa[: a.shape[0]] = a
        pb[: b.shape[0]] = b
        return bool(np.max(np.abs(pa - pb)) <= tol)

    def curve(self, label: str = 'motion polynomial') -> CurveEvaluator:
        values = self.as_array()

        def func(t: float) -> np.ndarray:
            return P.polyval(t, values).T if values.shape[0] > 1 else values[0].copy()

        def derivs(t: float, order: int) -> np.ndarray:
            if order > self.degree:
                return np.zeros(8)
            return P.polyval(t, P.polyder(values, m=order, axis=0)).T

        return CurveEvaluator(func, derivs, POLY_MAX_ORDER, label)

    def to_json(self) -> dict:
        return {'coeffs': [c.to_json() for c in self.coeffs]}

    @classmethod
    def from_json(cls, data: dict) -> MotionPoly:
        return cls(tuple(DualQuaternion.from_json(c) for c in data['coeffs']))

    def __str__(self) -> str:
        return ' + '.join(f'({c})t^{i}' for i, c in enumerate(self.coeffs))


T = MotionPoly.from_array(np.array([np.zeros(8), np.eye(8)[0]]))


@dataclass(frozen=True)
class NormPolynomial:
    """Polynomial with dual number coefficients, primal(t) + ε·dual(t)."""

    primal: np.ndarray
    dual: np.ndarray

    def __call__(self, t: complex) -> tuple[complex, complex]:
        return P.polyval(t, self.primal), P.polyval(t, self.dual)

    def __mul__(self, other: NormPolynomial) -> NormPolynomial:
        return NormPolynomial(
            _trim_real(P.polymul(self.primal, other.primal)),
            _trim_real(P.polyadd(P.polymul(self.primal, other.dual),
                                 P.polymul(self.dual, other.primal))),
        )

    @property
    def degree(self) -> int:
        return self.primal.size - 1

    def is_real(self, tol: float | None = None) -> bool:
        tol = get_tolerance() if tol is None else tol
        scale = max(1.0, float(np.max(np.abs(self.primal))))
        return bool(np.max(np.abs(self.dual)) <= tol * scale)

    def isclose(self, other: NormPolynomial, tol: float) -> bool:
        for mine, theirs in ((self.primal, other.primal), (self.dual, other.dual)):
            n = max(mine.size, theirs.size)
            a, b = np.zeros(n), np.zeros(n)
            a[: mine.size], b[: theirs.size] = mine, theirs
            if np.max(np.abs(a - b)) > tol:
                return False
        return True


def mp_mul(f: MotionPoly, g: MotionPoly) -> MotionPoly:
    """Returns f·g; t commutes with the coefficients."""
    return f * g


def mp_eval(f: MotionPoly, t0: float) -> DualQuaternion:
    """Evaluates f at a real t0; t0 = ±inf returns the leading coefficient."""
    if math.isinf(t0):
        return f.leading
    values = f.as_array()
    acc = np.zeros(8)
    for row in values[::-1]:
        acc = acc * t0 + row
    return DualQuaternion.from_array(acc)


def mp_eval_right(f: MotionPoly, h: DualQuaternion) -> DualQuaternion:
    """Returns Σ cᵢ hⁱ with the powers of h on the right."""
    values = f.as_array()
    hv = h.as_array()
    acc = values[-1].copy()
    for row in values[-2::-1]:
        acc = dqmul(acc, hv) + row
    return DualQuaternion.from_array(acc)


def mp_norm(f: MotionPoly) -> NormPolynomial:
    """Returns f·f̄ split into its primal and dual real polynomials."""
    product = _convolve(f.as_array(), dqconj(f.as_array()))
    scale = max(1.0, float(np.max(np.abs(product))))
    if not np.max(np.abs(product[:, [1, 2, 3, 5, 6, 7]])) <= 1e-9 * scale:
        raise InvariantViolation('vector part of the norm polynomial does not vanish')
    return NormPolynomial(_trim_real(product[:, 0]), _trim_real(product[:, 4]))


def double_roots(coeffs: Sequence[float], cluster_tol: float | None = None) -> list[complex]:
    """Roots of a real polynomial that occur with multiplicity at least two.

    Roots come from the companion matrix; roots closer than the cluster
    tolerance (relative to the root size, square-rooted for double roots)
    are merged.
    """
    cluster_tol = get_settings().root_cluster_tolerance if cluster_tol is None else cluster_tol
    coeffs = _trim_real(coeffs)
    roots = list(np.roots(coeffs[::-1]))
    found: list[complex] = []
    used = [False] * len(roots)
    for i, root in enumerate(roots):
        if used[i]:
            continue
        for j in range(i + 1, len(roots)):
            if not used[j] and abs(roots[j] - root) <= math.sqrt(cluster_tol) * max(1.0, abs(root)):
                used[i] = used[j] = True
                found.append(0.5 * (root + roots[j]))
                break
    return found


# basic motions of the cylinder group


def cos_sin_jet(angle: Sequence[float]) -> tuple[list[float], list[float]]:
    """Derivatives up to order 3 of cos φ(t) and sin φ(t) from the jet
    (φ, φ', φ'', φ''')."""
    a0, a1, a2, a3 = (list(angle) + [0.0] * 4)[:4]
    c, s = math.cos(a0), math.sin(a0)
    cos_jet = [
        c,
        -s * a1,
        -c * a1**2 - s * a2,
        s * a1**3 - 3 * c * a1 * a2 - s * a3,
    ]
    sin_jet = [
        s,
        c * a1,
        -s * a1**2 + c * a2,
        -c * a1**3 - 3 * s * a1 * a2 + c * a3,
    ]
    return cos_jet, sin_jet


def _product_jet(f: Sequence[float], g: Sequence[float]) -> list[float]:
    return [
        sum(math.comb(n, k) * f[k] * g[n - k] for k in range(n + 1))
        for n in range(min(len(f), len(g)))
    ]


def cylinder_jet(angle: Sequence[float], height: Sequence[float]) -> list[np.ndarray]:
    """Derivatives up to order 3 of the cylinder-group element
    T(z)·R(ω) = cos(ω/2) + sin(ω/2)𝐤 + ½zε(sin(ω/2) − cos(ω/2)𝐤).

    Args:
        angle (Sequence[float]): Jet (ω, ω', ω'', ω''').
        height (Sequence[float]): Jet (z, z', z'', z''').
    """
    half = [0.5 * a for a in (list(angle) + [0.0] * 4)[:4]]
    height = [0.5 * z for z in (list(height) + [0.0] * 4)[:4]]
    cos_jet, sin_jet = cos_sin_jet(half)
    dual_w = _product_jet(height, sin_jet)
    dual_z = [-v for v in _product_jet(height, cos_jet)]
    return [
        np.array([cos_jet[n], 0.0, 0.0, sin_jet[n], dual_w[n], 0.0, 0.0, dual_z[n]])
        for n in range(4)
    ]


MOTION_KINDS = ('rotation', 'translation', 'helical', 'darboux')


@dataclass(frozen=True)
class TrigMotion:
    """Motion ω ↦ dual quaternion of the cylinder group of an axis.

    The motion is built about the 𝐤-axis and moved to its axis by
    conjugation with `frame`.
    """

    kind: str
    pitch: float = 0.0
    amplitude: float = 0.0
    speed: float = 1.0
    direction: tuple[float, float, float] = (0.0, 0.0, 1.0)
    frame: DualQuaternion = DualQuaternion.identity()

    def _jets(self, omega: float) -> list[np.ndarray]:
        if self.kind == 'translation':
            u = np.asarray(self.direction, dtype=float)
            u = u / np.linalg.norm(u)
            first = np.concatenate([np.zeros(4), [0.0], -0.5 * self.speed * u])
            value = np.concatenate([[1.0, 0.0, 0.0, 0.0], [0.0], -0.5 * self.speed * omega * u])
            return [value, first, np.zeros(8), np.zeros(8)]
        angle = [omega, 1.0, 0.0, 0.0]
        if self.kind == 'rotation':
            height = [0.0, 0.0, 0.0, 0.0]
        elif self.kind == 'helical':
            height = [self.pitch * omega, self.pitch, 0.0, 0.0]
        else:
            s, c = math.sin(omega), math.cos(omega)
            height = [self.amplitude * v for v in (s, c, -s, -c)]
        return cylinder_jet(angle, height)

    def _placed(self, values: np.ndarray) -> np.ndarray:
        if self.kind == 'translation':
            return values
        g = self.frame.as_array()
        return dqmul(dqmul(g, values), dqconj(g))

    def __call__(self, omega: float) -> DualQuaternion:
        return DualQuaternion.from_array(self._placed(self._jets(omega)[0]))

    def derivative(self, omega: float, order: int) -> np.ndarray:
        if order > 3:
            raise InvalidParams('analytic derivatives are available up to order 3')
        return self._placed(self._jets(omega)[order])

    def curve(self) -> CurveEvaluator:
        return CurveEvaluator(
            lambda w: self(w).as_array(), self.derivative, 3, f'{self.kind} motion'
        )

    @property
    def motion_poly(self) -> MotionPoly | None:
        """Rational form: t = tan(ω/2) for rotation and Darboux motion,
        t = ω for translation; None for the helical motion."""
        if self.kind == 'helical':
            return None
        if self.kind == 'translation':
            u = np.asarray(self.direction, dtype=float)
            u = u / np.linalg.norm(u)
            slope = np.concatenate([np.zeros(4), [0.0], -0.5 * self.speed * u])
            return MotionPoly.from_array(np.array([np.eye(8)[0], slope]))
        amplitude = self.amplitude if self.kind == 'darboux' else 0.0
        constant = DualQuaternion.scalar(DualNumber(1.0, amplitude))
        axis = conjugate_by(self.frame, DualQuaternion.from_array(np.eye(8)[3]))
        return MotionPoly((constant, axis))


@dataclass(frozen=True)
class BasicMotion:
    trig: TrigMotion
    poly: MotionPoly | None


def _finite(name: str, value: object) -> float:
    try:
        value = float(value)
    except (TypeError, ValueError) as exc:
        raise InvalidParams(f'{name} must be a number, got {value!r}') from exc
    if not math.isfinite(value):
        raise InvalidParams(f'{name} must be finite')
    return value


def make_basic_motion(
    kind: str,
    pitch: float | None = None,
    amplitude: float | None = None,
    distance: float | None = None,
    direction: Sequence[float] = (0.0, 0.0, 1.0),
    point: Sequence[float] = (0.0, 0.0, 0.0),
) -> BasicMotion:
    """Builds one of the basic motions.

    Args:
        kind (str): 'rotation', 'translation', 'helical' or 'darboux'.
        pitch (float, optional): Pitch p of the helical motion.
        amplitude (float, optional): Amplitude c of the Darboux motion.
        distance (float, optional): Translation distance δ per unit of the
            parameter, along `direction`.
        direction (Sequence[float]): Axis or translation direction.
        point (Sequence[float]): Point on the axis.

    Returns:
        BasicMotion: Trigonometric form and, where it exists, the motion
        polynomial form.

    Raises:
        InvalidParams: On unknown kinds or missing/invalid parameters.
    """
    if kind not in MOTION_KINDS:
        raise InvalidParams(f'unknown motion kind {kind!r}, expected one of {MOTION_KINDS}')
    direction = tuple(_finite('direction', v) for v in direction)
    point = tuple(_finite('point', v) for v in point)
    if len(direction) != 3 or len(point) != 3 or np.linalg.norm(direction) == 0.0:
        raise InvalidParams('direction and point need three coordinates, direction non-zero')
    frame = frame_for_axis(direction, point)
    if kind == 'helical':
        if pitch is None:
            raise InvalidParams('the helical motion needs a pitch')
        trig = TrigMotion('helical', pitch=_finite('pitch', pitch), frame=frame)
    elif kind == 'darboux':
        if amplitude is None:
            raise InvalidParams('the Darboux motion needs an amplitude')
        trig = TrigMotion('darboux', amplitude=_finite('amplitude', amplitude), frame=frame)
    elif kind == 'translation':
        speed = 1.0 if distance is None else _finite('distance', distance)
        trig = TrigMotion('translation', speed=speed, direction=direction)
    else:
        trig = TrigMotion('rotation', frame=frame)
    logger.info('[MOTION] built %s motion', kind)
    return BasicMotion(trig, trig.motion_poly)


# trajectories


@dataclass(frozen=True)
class Trajectory:
    """Sampled trajectory, homogeneous rows (y0, y1, y2, y3)."""

    params: np.ndarray
    points: np.ndarray
    degree: int | None

    def csv_rows(self) -> list[list[float]]:
        return [[float(t), *map(float, y)] for t, y in zip(self.params, self.points)]


def estimate_degree(
    params: Sequence[float], points: np.ndarray, max_degree: int = 8,
    rank_tol: float | None = None,
) -> int | None:
    """Smallest d such that the samples lie on a rational curve of degree d.

    Solves P(tⱼ) = λⱼ yⱼ for a polynomial vector P of degree d and scales
    λⱼ; singular values below rank_tol·σmax count as zero. Returns None
    if no degree up to max_degree fits or the samples are too few to tell.
    """
    rank_tol = get_settings().rank_tolerance if rank_tol is None else rank_tol
    params = np.asarray(params, dtype=float)
    points = np.asarray(points, dtype=float)
    points = points / np.linalg.norm(points, axis=1, keepdims=True)
    n = params.size
    for degree in range(max_degree + 1):
        width = degree + 1
        matrix = np.zeros((4 * n, 4 * width + n))
        powers = np.vander(params, width, increasing=True)
        for j in range(n):
            for i in range(4):
                matrix[4 * j + i, i * width: (i + 1) * width] = powers[j]
                matrix[4 * j + i, 4 * width + j] = -points[j, i]
        if matrix.shape[1] > matrix.shape[0]:
            return None
        sing = np.linalg.svd(matrix, compute_uv=False)
        if sing[-1] <= rank_tol * sing[0]:
            return degree
    return None


def trajectory_of_point(
    m: MotionPoly | TrigMotion | BasicMotion,
    x: Sequence[float],
    samples: Sequence[float],
    tol: float | None = None,
) -> Trajectory:
    """Applies the motion to the affine point x at each sample.

    Raises:
        NullConeParameter: If the motion is not invertible at a sample.
    """
    tol = get_tolerance() if tol is None else tol
    if isinstance(m, BasicMotion):
        m = m.poly if m.poly is not None else m.trig
    homogeneous = [1.0, *map(float, x)]
    rows = []
    for t in samples:
        q = m(t)
        if not q.is_invertible(tol):
            raise NullConeParameter(f'the motion meets the null cone at t = {t}')
        rows.append(act_on_point(q, homogeneous, tol))
    points = np.array(rows)
    degree = None
    if isinstance(m, MotionPoly):
        degree = estimate_degree(samples, points)
    elif m.motion_poly is not None:
        grid = np.linspace(-2.0, 2.0, get_settings().samples)
        poly_points = [act_on_point(m.motion_poly(t), homogeneous, tol) for t in grid]
        degree = estimate_degree(grid, np.array(poly_points))
    return Trajectory(np.asarray(samples, dtype=float), points, degree)

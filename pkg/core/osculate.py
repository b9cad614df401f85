"""
Cylinder-group motions, their development onto the plane and osculating
vertical Darboux motions.

A cylinder-group motion is given by an angle function ω(t) and a height
function z(t); unrolling the unit cylinder maps it to the planar curve
u = ω(t), z = z(t). A helical motion develops to a straight line and a
vertical Darboux motion to a sine curve, so fitting a sine to slope and
curvature of a development gives the osculating Darboux motion.

Main functions:
- develop: Samples (u, z, slope, curvature) of the development.
- sine_fit: Amplitude and phase of the sine with given slope and curvature.
- osculating_darboux: Darboux motion with second order contact at t0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from core.config import get_tolerance
from core.dualquat import DualQuaternion, rotation_quaternion, translation_quaternion
from core.errors import InvalidParams, StationaryAngle
from core.motionpoly import TrigMotion, cos_sin_jet, cylinder_jet
from core.projd import CurveEvaluator


@dataclass(frozen=True)
class ScalarFunction:
    """Real function Σ poly[i]·tⁱ + Σ a·sin(f·t + φ0) over `sinusoids`."""

    poly: tuple[float, ...] = (0.0,)
    sinusoids: tuple[tuple[float, float, float], ...] = ()

    @classmethod
    def linear(cls, slope: float, offset: float = 0.0) -> ScalarFunction:
        return cls((float(offset), float(slope)))

    @classmethod
    def sinusoid(cls, amplitude: float, frequency: float = 1.0, phase: float = 0.0) -> ScalarFunction:
        return cls((0.0,), ((float(amplitude), float(frequency), float(phase)),))

    def __add__(self, other: ScalarFunction) -> ScalarFunction:
        n = max(len(self.poly), len(other.poly))
        poly = [0.0] * n
        for i, v in enumerate(self.poly):
            poly[i] += v
        for i, v in enumerate(other.poly):
            poly[i] += v
        return ScalarFunction(tuple(poly), self.sinusoids + other.sinusoids)

    def jet(self, t: float) -> list[float]:
        """Value and derivatives up to order 3 at t."""
        poly = np.polynomial.Polynomial(self.poly)
        values = [float(poly(t))] + [float(poly.deriv(n)(t)) for n in (1, 2, 3)]
        for amp, freq, phase in self.sinusoids:
            arg = freq * t + phase
            for n in range(4):
                values[n] += amp * freq**n * math.sin(arg + n * math.pi / 2)
        return values

    def __call__(self, t: float) -> float:
        return self.jet(t)[0]

    def to_json(self) -> dict:
        return {'poly': list(self.poly), 'sinusoids': [list(s) for s in self.sinusoids]}

    @classmethod
    def from_json(cls, data: dict) -> ScalarFunction:
        sinusoids = tuple(tuple(float(v) for v in s) for s in data.get('sinusoids', []))
        if any(len(s) != 3 for s in sinusoids):
            raise InvalidParams('a sinusoid term needs amplitude, frequency and phase')
        return cls(tuple(float(v) for v in data.get('poly', [0.0])) or (0.0,), sinusoids)


@dataclass(frozen=True)
class CylinderMotion:
    """Motion t ↦ T(z(t))·R(ω(t)) about the 𝐤-axis."""

    angle: ScalarFunction
    height: ScalarFunction
    label: str = field(default='cylinder motion', compare=False)

    @classmethod
    def helical(cls, pitch: float) -> CylinderMotion:
        return cls(ScalarFunction.linear(1.0), ScalarFunction.linear(pitch), f'helical(p={pitch:g})')

    @classmethod
    def darboux(cls, amplitude: float) -> CylinderMotion:
        return cls(ScalarFunction.linear(1.0), ScalarFunction.sinusoid(amplitude),
                   f'darboux(c={amplitude:g})')

    @classmethod
    def rotation(cls) -> CylinderMotion:
        return cls(ScalarFunction.linear(1.0), ScalarFunction(), 'rotation')

    def jets(self, t: float) -> list[np.ndarray]:
        return cylinder_jet(self.angle.jet(t), self.height.jet(t))

    def __call__(self, t: float) -> DualQuaternion:
        return DualQuaternion.from_array(self.jets(t)[0])

    def curve(self) -> CurveEvaluator:
        return CurveEvaluator(
            lambda t: self.jets(t)[0], lambda t, order: self.jets(t)[order], 3, self.label
        )

    def to_json(self) -> dict:
        return {'angle': self.angle.to_json(), 'height': self.height.to_json(), 'label': self.label}

    @classmethod
    def from_json(cls, data: dict) -> CylinderMotion:
        return cls(
            ScalarFunction.from_json(data['angle']),
            ScalarFunction.from_json(data['height']),
            data.get('label', 'cylinder motion'),
        )


@dataclass(frozen=True)
class DevelopedSample:
    t: float
    u: float
    z: float
    slope: float
    curvature: float


@dataclass(frozen=True)
class DevelopedCurve:
    """Development of a cylinder-group motion on the unit cylinder."""

    samples: tuple[DevelopedSample, ...]

    @property
    def u(self) -> np.ndarray:
        return np.array([s.u for s in self.samples])

    @property
    def z(self) -> np.ndarray:
        return np.array([s.z for s in self.samples])

    def csv_rows(self) -> list[list[float]]:
        return [[s.u, s.z, s.slope, s.curvature] for s in self.samples]


def _slope_curvature(angle: Sequence[float], height: Sequence[float], t: float) -> tuple[float, float]:
    w1, w2 = angle[1], angle[2]
    z1, z2 = height[1], height[2]
    if abs(w1) <= get_tolerance():
        raise StationaryAngle(f'dω/dt vanishes at t = {t}, the development is not a graph')
    slope = z1 / w1
    second = (z2 * w1 - z1 * w2) / w1**3
    return slope, second / (1.0 + slope**2) ** 1.5


def develop_at(m: CylinderMotion, t: float) -> DevelopedSample:
    angle, height = m.angle.jet(t), m.height.jet(t)
    slope, curvature = _slope_curvature(angle, height, t)
    return DevelopedSample(t, angle[0], height[0], slope, curvature)


def develop(m: CylinderMotion, t_range: tuple[float, float], samples: int = 201) -> DevelopedCurve:
    """Samples the development of m on [t_start, t_end].

    Args:
        m (CylinderMotion): Motion in the cylinder group of the 𝐤-axis.
        t_range (tuple[float, float]): Parameter interval.
        samples (int): Number of equally spaced samples.

    Returns:
        DevelopedCurve: Points (u, z) with slope dz/du and curvature.

    Raises:
        StationaryAngle: If dω/dt vanishes at a sample.
    """
    if samples < 2:
        raise InvalidParams('a development needs at least two samples')
    grid = np.linspace(float(t_range[0]), float(t_range[1]), samples)
    return DevelopedCurve(tuple(develop_at(m, float(t)) for t in grid))


@dataclass(frozen=True)
class SineFit:
    """Point φ on the graph of a·sin with prescribed slope and curvature."""

    a: float
    phi: float

    def slope(self) -> float:
        return self.a * math.cos(self.phi)

    def curvature(self) -> float:
        return -self.a * math.sin(self.phi) / (1.0 + self.slope() ** 2) ** 1.5


def sine_fit(k: float, kappa: float) -> SineFit:
    """Fits a·sin at φ to slope k and curvature ϰ.

    (a, φ) are the polar coordinates of (k, −ϰ(1+k²)^{3/2}); a ≥ 0 and the
    signs of k and ϰ are carried by φ ∈ [0, 2π). k = ϰ = 0 gives (0, 0).
    """
    y = -kappa * (1.0 + k * k) ** 1.5
    a = math.hypot(k, y)
    if a == 0.0:
        return SineFit(0.0, 0.0)
    phi = math.atan2(y, k) % (2 * math.pi)
    return SineFit(a, phi)


@dataclass(frozen=True)
class OsculatingDarboux:
    """Darboux motion of amplitude fit.a placed by a parameter shift and a
    height offset: pose(u) = T(height_offset)·R(shift)·motion(u − shift).

    Its development is z = a·sin(u − shift) + height_offset.
    """

    fit: SineFit
    motion: TrigMotion
    shift: float
    height_offset: float
    contact_parameter: float
    aligned: CurveEvaluator = field(compare=False)

    @property
    def amplitude(self) -> float:
        return self.fit.a

    def pose(self, u: float) -> DualQuaternion:
        placement = translation_quaternion((0.0, 0.0, self.height_offset)) * rotation_quaternion(
            (0.0, 0.0, 1.0), self.shift
        )
        return placement * self.motion(u - self.shift)

    def developed_height(self, u: np.ndarray | float) -> np.ndarray | float:
        return self.fit.a * np.sin(np.asarray(u) - self.shift) + self.height_offset


def osculating_darboux(m: CylinderMotion, t0: float) -> OsculatingDarboux:
    """Vertical Darboux motion whose development osculates that of m at t0.

    The returned `aligned` curve runs through the Darboux motion with the
    angle function of m, so it can be compared with `m.curve()` at equal
    parameters.

    Raises:
        StationaryAngle: If dω/dt vanishes at t0.
    """
    sample = develop_at(m, t0)
    fit = sine_fit(sample.slope, sample.curvature)
    shift = sample.u - fit.phi
    height_offset = sample.z - fit.a * math.sin(fit.phi)
    angle_fn = m.angle

    def jets(t: float) -> list[np.ndarray]:
        angle = angle_fn.jet(t)
        _, sin_jet = cos_sin_jet([angle[0] - shift, angle[1], angle[2], angle[3]])
        height = [fit.a * v for v in sin_jet]
        height[0] += height_offset
        return cylinder_jet(angle, height)

    aligned = CurveEvaluator(
        lambda t: jets(t)[0], lambda t, order: jets(t)[order], 3, 'osculating darboux'
    )
    return OsculatingDarboux(
        fit, TrigMotion('darboux', amplitude=fit.a), shift, height_offset, sample.u, aligned
    )

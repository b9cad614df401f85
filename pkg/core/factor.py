"""
Factorization of quadratic motion polynomials into linear factors.

A monic quadratic null cone motion c = p + εd has primal norm σ² with a real
quadratic σ. Three cases are distinguished by the primal part p:

- Case A: p has no real factor. A factorization exists precisely if c is
  on the Study quadric at the roots of σ; it is found from the remainder of
  c modulo σ.
- Case B: p = σ is irreducible over the reals. c is a bounded (elliptic)
  translation; the factorizations form two families with two free
  parameters each, one family for circular translations.
- Case C: p = s1·s2 with distinct real linear s1, s2. c is a hyperbolic
  translation; after a dual scalar correction it factors like a Study
  polynomial and the correction splits into partial fractions.

Main functions:
- classify_case: Monic form, case and double roots of the norm.
- factor_generic_quadratic: Remainder-based factorization.
- factor_bounded_translation: Families of Case-B factorizations.
- reduce_to_study / factor_hyperbolic_translation: Case-C pipeline.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

import numpy as np

from core.config import get_settings, get_tolerance
from core.dualnum import DualNumber
from core.dualquat import DualQuaternion
from core.errors import (
    InvalidParams,
    InvalidSemiAxes,
    InvariantViolation,
    NoFactorization,
    NonInvertibleRemainder,
    NotCaseB,
    NotCaseC,
    NotInvertible,
    NotNullCone,
    QuadrupleRoot,
)
from core.log import get_logger
from core.motionpoly import MotionPoly, mp_norm
from core.projd import proj_distance

logger = get_logger(__name__)

BRANCHES = ('+', '-')


class NullConeCase(Enum):
    A_NO_REAL_FACTOR = 'A_no_real_factor'
    B_IRREDUCIBLE_QUADRATIC = 'B_irreducible_quadratic'
    C_TWO_REAL_LINEAR = 'C_two_real_linear'
    NOT_NULL_CONE = 'NotNullCone'


@dataclass(frozen=True)
class CaseReport:
    """Classification of a quadratic null cone motion.

    Attributes:
        case: Case of the primal part.
        roots: The two double roots of the primal norm.
        leading: Leading coefficient L with c = L·monic.
        monic: The monic polynomial L⁻¹·c.
        sigma: Real monic quadratic with primal norm σ², low to high.
    """

    case: NullConeCase
    roots: tuple[complex, complex]
    leading: DualQuaternion
    monic: MotionPoly
    sigma: np.ndarray


def _monic(c: MotionPoly, tol: float) -> tuple[DualQuaternion, MotionPoly]:
    if c.degree != 2:
        raise InvalidParams(f'a quadratic motion polynomial is required, got degree {c.degree}')
    if not c.leading.is_invertible(tol):
        raise InvalidParams('the leading coefficient must be invertible')
    lead, monic = c.monic()
    values = monic.as_array()
    values[2] = np.eye(8)[0]
    return lead, MotionPoly.from_array(values)


def classify_case(c: MotionPoly, tol: float | None = None) -> CaseReport:
    """Decides the case of a quadratic null cone motion.

    Raises:
        InvalidParams: If c is not quadratic with invertible leading
            coefficient.
        NotNullCone: If the primal norm is not the square of a real
            quadratic.
        QuadrupleRoot: If the primal norm has a single root of
            multiplicity four (such a motion cannot be a quadratic
            translation).
    """
    tol = get_tolerance() if tol is None else tol
    lead, monic = _monic(c, tol)
    quartic = mp_norm(monic).primal
    alpha = quartic[3] / 2
    beta = (quartic[2] - alpha**2) / 2
    sigma = np.array([beta, alpha, 1.0])
    defect = np.max(np.abs(np.convolve(sigma, sigma) - quartic)) / np.max(np.abs(quartic))
    if defect > get_settings().root_cluster_tolerance:
        raise NotNullCone(f'the primal norm is not a square (defect {defect:.3g})')
    disc = alpha**2 - 4 * beta
    if abs(disc) <= math.sqrt(get_settings().root_cluster_tolerance) * max(1.0, alpha**2, abs(beta)):
        raise QuadrupleRoot(
            'the primal norm has a fourfold root; the motion would be a '
            'quadratic translation with a single point at infinity, which is impossible'
        )
    t0, t1 = np.roots([1.0, alpha, beta])
    primal = monic.primal_array()
    vector = primal[:, 1:]
    if np.max(np.abs(vector)) <= tol * max(1.0, float(np.max(np.abs(primal)))):
        case = NullConeCase.B_IRREDUCIBLE_QUADRATIC if disc < 0 else NullConeCase.C_TWO_REAL_LINEAR
    else:
        case = NullConeCase.A_NO_REAL_FACTOR
    logger.info('[FACTOR] case %s, roots %s, %s', case.value, t0, t1)
    return CaseReport(case, (complex(t0), complex(t1)), lead, monic, sigma)


@dataclass(frozen=True)
class Prefactor:
    """Dual scalar 1 + ελ/(t − root)."""

    lam: float
    root: float

    def __call__(self, t: float) -> DualNumber:
        return DualNumber(1.0, self.lam / (t - self.root))

    def to_json(self) -> dict:
        return {'lambda': self.lam, 'root': self.root}


@dataclass(frozen=True)
class FactorizationResult:
    """c = leading · Πᵢ prefactorᵢ·factorᵢ with monic linear factors."""

    case: NullConeCase | None
    leading: DualQuaternion
    factors: tuple[MotionPoly, ...]
    prefactors: tuple[Prefactor, ...] = ()
    family_params: dict[str, float] = field(default_factory=dict)
    branch: str | None = None
    kinematically_identical: bool = False

    def product_at(self, t: float) -> DualQuaternion:
        value = self.leading
        for index, factor in enumerate(self.factors):
            if index < len(self.prefactors):
                value = value * self.prefactors[index](t)
            value = value * factor(t)
        return value

    def product(self) -> MotionPoly:
        """Polynomial product leading·F1·F2, prefactors left out."""
        result = MotionPoly.constant(self.leading)
        for factor in self.factors:
            result = result * factor
        return result

    def verify(self, c: MotionPoly, samples: Sequence[float] | None = None) -> float:
        """Largest projective distance between c and the product."""
        if samples is None:
            samples = np.linspace(-2.13, 2.07, 20)
        roots = [p.root for p in self.prefactors]
        residuals = [
            proj_distance(c(t), self.product_at(t))
            for t in samples
            if all(abs(t - r) > 1e-6 for r in roots)
        ]
        return float(max(residuals))

    def to_json(self) -> dict:
        return {
            'case': self.case.value if self.case else None,
            'leading': self.leading.to_json(),
            'factors': [f.to_json() for f in self.factors],
            'prefactors': [p.to_json() for p in self.prefactors],
            'family_params': dict(self.family_params),
            'branch': self.branch,
            'kinematically_identical': self.kinematically_identical,
        }


def factor_generic_quadratic(
    c: MotionPoly,
    s: Sequence[float],
    tol: float | None = None,
    case: NullConeCase | None = None,
) -> FactorizationResult:
    """Factors c = L·(t − g)·(t − h) with right factor of norm s.

    Args:
        c (MotionPoly): Quadratic motion polynomial.
        s (Sequence[float]): Real quadratic factor of the primal norm, low
            to high.
        tol (float, optional): Tolerance.
        case (NullConeCase, optional): Case label for the result.

    Raises:
        NoFactorization: If the dual norm does not vanish at the roots of s
            (c is off the Study quadric there) or the division leaves a
            remainder.
        NonInvertibleRemainder: If the linear remainder has a
            non-invertible leading coefficient.
    """
    tol = get_tolerance() if tol is None else tol
    lead, monic = _monic(c, tol)
    s = np.asarray(s, dtype=float)
    if s.size != 3 or s[2] == 0.0:
        raise InvalidParams('s must be a real quadratic polynomial')
    s = s / s[2]
    norm = mp_norm(monic)
    scale = max(1.0, float(np.max(np.abs(norm.primal))))
    for root in np.roots(s[::-1]):
        dual_value = abs(np.polynomial.polynomial.polyval(root, norm.dual))
        if dual_value > math.sqrt(tol) * scale:
            raise NoFactorization(
                'a factorization exists precisely if c lies on the Study quadric at '
                f'the roots of s; the dual norm is {dual_value:.3g} at t = {root}'
            )
    _, remainder = monic.divmod_real(s)
    values = remainder.as_array()
    if values.shape[0] < 2:
        raise NonInvertibleRemainder('the remainder of c modulo s is constant')
    r0 = DualQuaternion.from_array(values[0])
    r1 = DualQuaternion.from_array(values[1])
    try:
        h = -(r1.inverse(tol) * r0)
    except NotInvertible as exc:
        raise NonInvertibleRemainder('the linear remainder has a non-invertible leading coefficient') from exc
    right = MotionPoly.linear(h)
    left, rest = monic.divmod_right(right)
    if np.max(np.abs(rest.as_array())) > math.sqrt(tol) * max(1.0, float(np.max(np.abs(monic.as_array())))):
        raise NoFactorization('right division by the extracted factor leaves a remainder')
    return FactorizationResult(case, lead, (left, right))


# Case B


@dataclass(frozen=True)
class _AffineFrame:
    """t = w·τ + m with σ(t) = w²(τ² + 1)."""

    m: float
    w: float

    @classmethod
    def from_sigma(cls, sigma: np.ndarray) -> _AffineFrame:
        beta, alpha, _ = sigma
        m = -alpha / 2
        return cls(m, math.sqrt(beta - m * m))


@dataclass(frozen=True)
class _CanonicalB:
    frame: _AffineFrame
    gamma1: float
    gamma0: float
    v1: np.ndarray
    v0: np.ndarray


def _canonical_b(report: CaseReport) -> _CanonicalB:
    frame = _AffineFrame.from_sigma(report.sigma)
    dual = report.monic.as_array()[:, 4:]
    d0, d1 = dual[0], dual[1]
    top = d1 / frame.w
    bottom = (d1 * frame.m + d0) / frame.w**2
    return _CanonicalB(frame, float(top[0]), float(bottom[0]), top[1:], bottom[1:])


def _report_b(c: MotionPoly, tol: float) -> CaseReport:
    report = classify_case(c, tol)
    if report.case is not NullConeCase.B_IRREDUCIBLE_QUADRATIC:
        raise NotCaseB(f'the motion is in case {report.case.value}, not B')
    return report


@dataclass(frozen=True)
class SemiAxes:
    """Semi-axes a ≥ b of the translation ellipse and their directions."""

    a: float
    b: float
    directions: np.ndarray

    @property
    def circular(self) -> bool:
        return abs(self.a - self.b) <= math.sqrt(get_tolerance()) * max(1.0, self.a)


def translation_semi_axes(c: MotionPoly, tol: float | None = None) -> SemiAxes:
    """Semi-axes of the translation ellipse of a Case-B motion.

    The directions are the rows of the principal frame: major axis, minor
    axis, normal of the ellipse plane.

    Raises:
        NotCaseB: If c is not a bounded translation.
        InvalidSemiAxes: If both semi-axes vanish.
    """
    tol = get_tolerance() if tol is None else tol
    canon = _canonical_b(_report_b(c, tol))
    frame, sing = _principal_frame(canon.v0, canon.v1, tol)
    if sing[0] <= tol:
        raise InvalidSemiAxes('the translation has no extent (a = 0)')
    return SemiAxes(float(sing[0]), float(sing[1]), frame)


def _unit(v: np.ndarray) -> np.ndarray:
    return v / np.linalg.norm(v)


def _principal_frame(v0: np.ndarray, v1: np.ndarray, tol: float) -> tuple[np.ndarray, np.ndarray]:
    """Right-handed frame on the principal axes of the ellipse spanned by
    V0 and V1, with the singular values of [V0 V1].

    The major axis points to the side of V0 (of V1 if V0 is orthogonal to
    it) and the third axis along V0×V1. A circle has no principal axes;
    then the first axis is V0.
    """
    u, sing, _ = np.linalg.svd(np.column_stack([v0, v1]))
    ref = v0 if np.linalg.norm(v0) > tol else v1
    if sing[0] - sing[1] > math.sqrt(tol) * max(1.0, sing[0]):
        e1 = u[:, 0]
        if abs(e1 @ v0) <= tol * max(1.0, sing[0]):
            ref = v1
        e1 = e1 if e1 @ ref >= 0 else -e1
    else:
        e1 = _unit(ref)
    normal = np.cross(v0, v1)
    if np.linalg.norm(normal) <= tol * max(1.0, np.linalg.norm(v0) * np.linalg.norm(v1)):
        helper = u[:, 1] if abs(u[:, 1] @ e1) < 0.5 else u[:, 2]
        normal = np.cross(e1, helper)
    e3 = _unit(normal)
    return np.array([e1, np.cross(e3, e1), e3]), sing


def _axis_directions(v0: np.ndarray, v1: np.ndarray, branch: str, tol: float) -> tuple[float, np.ndarray]:
    """Solves λP − V1×P = V0 for unit P; returns (λ, P)."""
    n0, n1, dot = v0 @ v0, v1 @ v1, float(v0 @ v1)
    b = n1 - n0
    mu = (-b + math.sqrt(b * b + 4 * dot * dot)) / 2
    sign = 1.0 if branch == '+' else -1.0
    if mu > tol:
        lam = sign * math.sqrt(mu)
        p = (lam * lam * v0 + lam * np.cross(v1, v0) + v1 * (v1 @ v0)) / (lam * (lam * lam + n1))
        return lam, p
    if n1 <= tol:
        raise InvalidSemiAxes('the translation has no extent (a = 0)')
    extra = math.sqrt(max(n1 - n0, 0.0))
    p = np.cross(v1, v0) / n1 + sign * v1 * extra / n1
    return 0.0, p


def factor_bounded_translation(
    c: MotionPoly,
    v2: float = 0.0,
    v3: float = 0.0,
    branch: str = '+',
    tol: float | None = None,
) -> FactorizationResult:
    """Factorizations c = L·F1·F2 of a bounded translation.

    In the affine parameter τ with σ = w²(τ² + 1) and c = τ² + 1 +
    ε(D1τ + D0) the factors are F1 = τ + P + εU and F2 = τ − P + εV with
    a unit vector P. The free parameters are the coordinates v2, v3 of the
    vector part of V along the minor axis and the plane normal of the
    translation ellipse (the frame of translation_semi_axes); v1, its
    coordinate along the major axis, is fixed by P·V. If P is orthogonal
    to the major axis the free pair is v1, v2 instead.

    Args:
        c (MotionPoly): Case-B motion.
        v2, v3 (float): Family parameters.
        branch (str): '+' or '−' sign of λ, selecting the family.

    Raises:
        NotCaseB: If c is not in case B.
        InvalidSemiAxes: If the translation has no extent.
    """
    tol = get_tolerance() if tol is None else tol
    if branch not in BRANCHES:
        raise InvalidParams(f'branch must be one of {BRANCHES}')
    report = _report_b(c, tol)
    canon = _canonical_b(report)
    lam, p = _axis_directions(canon.v0, canon.v1, branch, tol)
    frame, _ = _principal_frame(canon.v0, canon.v1, tol)
    rhs = (canon.v1 @ p - canon.gamma0) / 2
    along = frame @ p
    solved = 0 if abs(along[0]) > math.sqrt(tol) else 2
    free = [i for i in range(3) if i != solved]
    coords = np.zeros(3)
    coords[free[0]], coords[free[1]] = v2, v3
    coords[solved] = (rhs - sum(coords[i] * along[i] for i in free)) / along[solved]
    vvec = frame.T @ coords
    v0 = (lam + canon.gamma1) / 2
    vq = np.concatenate([[v0], vvec])
    d1 = np.concatenate([[canon.gamma1], canon.v1])
    uq = d1 - vq
    pq = np.concatenate([[0.0], p])
    w, m = canon.frame.w, canon.frame.m
    shift = np.concatenate([[m], np.zeros(7)])
    h1 = shift + w * np.concatenate([-pq, -uq])
    h2 = shift + w * np.concatenate([pq, -vq])
    factors = (
        MotionPoly.linear(DualQuaternion.from_array(h1)),
        MotionPoly.linear(DualQuaternion.from_array(h2)),
    )
    names = ('v1', 'v2', 'v3')
    params = {names[free[0]]: float(v2), names[free[1]]: float(v3)}
    result = FactorizationResult(
        NullConeCase.B_IRREDUCIBLE_QUADRATIC, report.leading, factors,
        family_params=params, branch=branch,
    )
    residual = result.verify(c)
    if residual > math.sqrt(tol):
        raise NoFactorization(f'bounded translation factors do not reproduce c ({residual:.3g})')
    logger.info('[FACTOR] bounded translation, branch %s, λ = %.6g', branch, lam)
    return result


def choose_revolute_representative(c: MotionPoly, branch: str = '+', tol: float | None = None) -> MotionPoly:
    """Dual scalar multiple of c (same motion) whose first factor in the
    given branch has real norm and hence is a revolute joint.

    In canonical form the scalar dual part is set to γ1 = λ and
    γ0 = −(V0·V1)/λ; for perpendicular V0, V1 this is γ0 = 0 and
    γ1 = ±√(a² − b²).
    """
    tol = get_tolerance() if tol is None else tol
    if branch not in BRANCHES:
        raise InvalidParams(f'branch must be one of {BRANCHES}')
    report = _report_b(c, tol)
    canon = _canonical_b(report)
    lam, _ = _axis_directions(canon.v0, canon.v1, branch, tol)
    if abs(lam) <= tol:
        gamma1, gamma0 = 0.0, 0.0
    else:
        gamma1, gamma0 = lam, -float(canon.v0 @ canon.v1) / lam
    w, m = canon.frame.w, canon.frame.m
    delta1 = gamma1 * w
    delta0 = gamma0 * w * w - delta1 * m
    values = report.monic.as_array()
    values[1, 4] = delta1
    values[0, 4] = delta0
    return report.leading * MotionPoly.from_array(values)


@dataclass(frozen=True)
class CircularReport:
    circular: bool
    both_revolute: bool
    factorization: FactorizationResult


def circular_rotation_pair(c: MotionPoly, tol: float | None = None) -> CircularReport:
    """Checks whether a circular translation splits into two rotations.

    This happens exactly when c is also on the Study quadric.
    """
    tol = get_tolerance() if tol is None else tol
    axes = translation_semi_axes(c, tol)
    result = factor_bounded_translation(c, tol=tol)
    revolute = all(mp_norm(f).is_real(math.sqrt(tol)) for f in result.factors)
    return CircularReport(axes.circular, axes.circular and revolute, result)


# Case C


def _report_c(c: MotionPoly, tol: float) -> CaseReport:
    report = classify_case(c, tol)
    if report.case is not NullConeCase.C_TWO_REAL_LINEAR:
        raise NotCaseC(f'the motion is in case {report.case.value}, not C')
    return report


def _scalar_dual(monic: MotionPoly) -> np.ndarray:
    return monic.as_array()[:, 4].copy()


def reduce_to_study(
    c: MotionPoly, s1: Sequence[float], s2: Sequence[float], tol: float | None = None
) -> MotionPoly:
    """Returns c̃ = (1 − ε(d + d̄)/(2s1s2))·c as a polynomial.

    The monic part of c̃ has real norm s1²s2².

    Raises:
        NotCaseC: If c is not a hyperbolic translation or s1·s2 is not the
            primal part.
    """
    tol = get_tolerance() if tol is None else tol
    report = _report_c(c, tol)
    product = np.convolve(np.asarray(s1, dtype=float), np.asarray(s2, dtype=float))
    product = product / product[-1]
    if product.size != 3 or np.max(np.abs(product - report.sigma)) > math.sqrt(tol):
        raise NotCaseC('s1·s2 does not match the primal part of c')
    values = report.monic.as_array()
    values[:, 4] = 0.0
    reduced = MotionPoly.from_array(values)
    norm = mp_norm(reduced)
    expected = np.convolve(product, product)
    if not (
        norm.is_real(math.sqrt(tol))
        and np.max(np.abs(norm.primal - expected)) <= math.sqrt(tol) * np.max(np.abs(expected))
    ):
        raise InvariantViolation('the reduced polynomial does not have norm s1²s2²')
    return report.leading * reduced


def factor_hyperbolic_translation(c: MotionPoly, tol: float | None = None) -> FactorizationResult:
    """Factors c = L·(1 + ελ1/s1)F1·(1 + ελ2/s2)F2 for a Case-C motion.

    F1 has norm s1² and F2 norm s2²; both parametrize translations.

    Raises:
        NotCaseC: If c is not in case C.
    """
    tol = get_tolerance() if tol is None else tol
    report = _report_c(c, tol)
    r1, r2 = sorted(root.real for root in report.roots)
    s1, s2 = np.array([-r1, 1.0]), np.array([-r2, 1.0])
    reduced = reduce_to_study(c, s1, s2, tol)
    lead = report.leading
    monic_reduced = lead.inverse() * reduced
    split = factor_generic_quadratic(monic_reduced, np.convolve(s2, s2), tol)
    scalar = _scalar_dual(report.monic)
    sd = np.polynomial.polynomial.polyval
    lam1 = sd(r1, scalar) / (r1 - r2)
    lam2 = sd(r2, scalar) / (r2 - r1)
    logger.info('[FACTOR] hyperbolic translation, λ1 = %.6g, λ2 = %.6g', lam1, lam2)
    return FactorizationResult(
        NullConeCase.C_TWO_REAL_LINEAR,
        lead,
        split.factors,
        prefactors=(Prefactor(float(lam1), r1), Prefactor(float(lam2), r2)),
        kinematically_identical=True,
    )


def factor_motion(c: MotionPoly, branch: str = '+', v2: float = 0.0, v3: float = 0.0,
                  tol: float | None = None) -> FactorizationResult:
    """Classifies c and dispatches to the factorization of its case."""
    report = classify_case(c, tol)
    if report.case is NullConeCase.B_IRREDUCIBLE_QUADRATIC:
        return factor_bounded_translation(c, v2, v3, branch, tol)
    if report.case is NullConeCase.C_TWO_REAL_LINEAR:
        return factor_hyperbolic_translation(c, tol)
    t0, t1 = report.roots
    s = np.real(np.poly([t0, t1]))[::-1]
    return factor_generic_quadratic(c, s, tol, NullConeCase.A_NO_REAL_FACTOR)

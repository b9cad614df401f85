"""
Conics in projective space over the dual numbers.

Three points c0, c1, c2 and two invertible dual numbers γ0, γ2 determine the
quadratic curve c(t) = γ0c0 + (c1 − γ0c0 − γ2c2)t + γ2c2t², which passes
through [c0], [c1], [c2] at t = 0, 1, ∞. The fits below pick γ0, γ2 so that
the conic is a Bennett motion (inside the Study quadric) or a quadratic null
cone motion (primal norm a perfect square).

Main functions:
- interp_conic: The interpolating conic of a ConicFamily.
- real_norm_rescale: Dual number a with a·p of real norm.
- bennett_fit: Study conic through three poses.
- nullcone_conic_fit: Up to four null cone conics through three poses.
- nullcone_defect: Square defect of one member of the conic family.
- osculating_nullcone_conic: Limit of null cone conics through close samples.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from core.config import get_settings, get_tolerance
from core.dualnum import DualNumber
from core.dualquat import DualQuaternion, dual_scale
from core.errors import (
    BranchAmbiguity,
    DegenerateConfiguration,
    DegenerateData,
    InvalidParams,
    NoSolutionFound,
    NotInvertible,
)
from core.log import get_logger
from core.motionpoly import MotionPoly
from core.projd import CurveEvaluator, canonicalize

logger = get_logger(__name__)

NULLCONE_DEFECT_LIMIT = 1e-8


@dataclass(frozen=True)
class ConicFamily:
    """Interpolation data c0, c1, c2 with family parameters γ0, γ2."""

    c0: DualQuaternion
    c1: DualQuaternion
    c2: DualQuaternion
    gamma0: DualNumber = DualNumber(1.0)
    gamma2: DualNumber = DualNumber(1.0)

    def coefficients(self) -> np.ndarray:
        g0, g2 = DualNumber.coerce(self.gamma0), DualNumber.coerce(self.gamma2)
        a = dual_scale(g0.primal, g0.dual, self.c0.as_array())
        c = dual_scale(g2.primal, g2.dual, self.c2.as_array())
        return np.array([a, self.c1.as_array() - a - c, c])


def interp_conic(fam: ConicFamily, tol: float | None = None) -> MotionPoly:
    """Returns γ0c0 + (c1 − γ0c0 − γ2c2)t + γ2c2t².

    Raises:
        InvalidParams: If γ0 or γ2 is not invertible.
        DegenerateData: If the three coefficients are linearly dependent
            (the curve would be a line or a point).
    """
    tol = get_tolerance() if tol is None else tol
    for name, gamma in (('gamma0', fam.gamma0), ('gamma2', fam.gamma2)):
        if not DualNumber.coerce(gamma).is_invertible(tol):
            raise InvalidParams(f'{name} must be an invertible dual number')
    coeffs = fam.coefficients()
    scale = max(float(np.max(np.abs(coeffs))), 1e-300)
    rank = np.linalg.matrix_rank(coeffs.T, tol=get_settings().rank_tolerance * scale)
    if rank < 3:
        raise DegenerateData('conic coefficients are linearly dependent')
    return MotionPoly.from_array(coeffs)


def real_norm_rescale(p: DualQuaternion, tol: float | None = None) -> DualNumber:
    """Returns a = 1 + εa″ such that a·p has real norm.

    Raises:
        NotInvertible: If p lies on the null cone.
    """
    if not p.is_invertible(tol):
        raise NotInvertible(f'{p} lies on the null cone and cannot be rescaled')
    values = p.as_array()
    primal, dual = values[:4], values[4:]
    return DualNumber(1.0, -float(primal @ dual) / float(primal @ primal))


def _study_form(x: np.ndarray, y: np.ndarray) -> float:
    return float(x[:4] @ y[4:] + y[:4] @ x[4:])


def bennett_fit(
    c0: DualQuaternion, c1: DualQuaternion, c2: DualQuaternion, tol: float | None = None
) -> MotionPoly:
    """Study conic through three poses with real family parameters.

    After rescaling each pose to real norm, the dual norm coefficients of
    the conic vanish for λ0 = b12/b02 and λ2 = b01/b02 where b is the Study
    bilinear form pₓ·d_y + p_y·dₓ.

    Raises:
        DegenerateConfiguration: If b02 vanishes or a multiplier is zero.
    """
    tol = get_tolerance() if tol is None else tol
    points = []
    for c in (c0, c1, c2):
        a = real_norm_rescale(c, tol)
        points.append(dual_scale(a.primal, a.dual, c.as_array()))
    p0, p1, p2 = points
    b01, b02, b12 = _study_form(p0, p1), _study_form(p0, p2), _study_form(p1, p2)
    scale = float(np.linalg.norm(p0[:4]) * np.linalg.norm(p2[:4]))
    if abs(b02) <= tol * max(scale, 1.0):
        raise DegenerateConfiguration('the Study form of the outer poses vanishes')
    lam0, lam2 = b12 / b02, b01 / b02
    if abs(lam0) <= tol or abs(lam2) <= tol:
        raise DegenerateConfiguration('a Bennett multiplier vanishes')
    fam = ConicFamily(
        DualQuaternion.from_array(p0),
        DualQuaternion.from_array(p1),
        DualQuaternion.from_array(p2),
        DualNumber(lam0),
        DualNumber(lam2),
    )
    logger.info('[FIT] Bennett multipliers %.6g, %.6g', lam0, lam2)
    return interp_conic(fam, tol)


# null cone conics


def _primal_quartic(primals: np.ndarray, g0: float, g2: float) -> np.ndarray:
    a0, a1, a2 = primals
    coeffs = np.array([g0 * a0, a1 - g0 * a0 - g2 * a2, g2 * a2])
    quartic = np.zeros(5)
    for i in range(3):
        for j in range(3):
            quartic[i + j] += coeffs[i] @ coeffs[j]
    return quartic


def _square_residual(quartic: np.ndarray) -> np.ndarray:
    """Remainder of the quartic after subtracting q4·σ², relative to the
    largest coefficient."""
    q0, q1, q2, q3, q4 = quartic
    scale = max(float(np.max(np.abs(quartic))), 1e-300)
    if q4 <= 1e-14 * scale:
        return np.array([1.0, 1.0])
    alpha = q3 / (2 * q4)
    beta = (q2 / q4 - alpha**2) / 2
    return np.array([q1 - 2 * q4 * alpha * beta, q0 - q4 * beta**2]) / scale


def square_defect(poly: MotionPoly) -> float:
    """Relative distance of the primal norm from the square of a real
    quadratic; zero for null cone conics."""
    primal = poly.primal_array()
    quartic = np.zeros(2 * primal.shape[0] - 1)
    for i in range(primal.shape[0]):
        for j in range(primal.shape[0]):
            quartic[i + j] += primal[i] @ primal[j]
    if quartic.size != 5:
        raise InvalidParams('square defect is defined for quadratic motions')
    q4 = quartic[4]
    alpha = quartic[3] / (2 * q4)
    beta = (quartic[2] / q4 - alpha**2) / 2
    sigma = math.sqrt(q4) * np.array([beta, alpha, 1.0])
    square = np.convolve(sigma, sigma)
    return float(np.max(np.abs(square - quartic)) / np.max(np.abs(quartic)))


def _newton(primals: np.ndarray, start: Sequence[float], bound: float) -> np.ndarray | None:
    """Damped Newton on the square residual; None if it stalls or leaves
    the box max|g| ≤ bound."""
    settings = get_settings()
    g = np.asarray(start, dtype=float)

    def residual(x: np.ndarray) -> np.ndarray:
        return _square_residual(_primal_quartic(primals, x[0], x[1]))

    f = residual(g)
    for _ in range(settings.newton_max_iter):
        if np.max(np.abs(f)) < 1e-13:
            return g
        jac = np.zeros((2, 2))
        for col in range(2):
            step = 1e-7 * max(1.0, abs(g[col]))
            dg = np.zeros(2)
            dg[col] = step
            jac[:, col] = (residual(g + dg) - residual(g - dg)) / (2 * step)
        delta = np.linalg.lstsq(jac, -f, rcond=None)[0]
        damping = 1.0
        while damping > 1e-4:
            candidate = g + damping * delta
            f_new = residual(candidate)
            if np.linalg.norm(f_new) < np.linalg.norm(f):
                break
            damping *= 0.5
        else:
            return g if np.max(np.abs(f)) < 1e-10 else None
        if np.max(np.abs(candidate)) > bound:
            return None
        g, f = candidate, f_new
    return g if np.max(np.abs(f)) < 1e-10 else None


def _normalized_primals(c0: DualQuaternion, c1: DualQuaternion, c2: DualQuaternion) -> tuple[np.ndarray, np.ndarray]:
    primals = np.array([c.as_array()[:4] for c in (c0, c1, c2)])
    lengths = np.linalg.norm(primals, axis=1)
    if np.min(lengths) <= get_tolerance():
        raise InvalidParams('null cone fitting needs poses with non-zero primal parts')
    return primals / lengths[:, None], lengths


def elliptic_circle_seeds(
    c0: DualQuaternion, c1: DualQuaternion, c2: DualQuaternion
) -> list[tuple[float, float]]:
    """Closed-form family parameters of the circles on the unit 3-sphere
    through the primal parts, one per sign choice of the outer poses.

    Each circle is cut out by x·x = (l·x)² with l·a0 = ±1, l·a1 = 1 and
    l·a2 = ±1 on the unit primals, so there are at most four.
    """
    (a, b, c), lengths = _normalized_primals(c0, c1, c2)
    seeds = []
    for e0 in (1.0, -1.0):
        for e2 in (1.0, -1.0):
            denom = a @ c - e0 * e2
            if abs(denom) <= 1e-12:
                continue
            x = (b @ c - e2) / denom
            z = (a @ b - e0) / denom
            seeds.append((x * lengths[1] / lengths[0], z * lengths[1] / lengths[2]))
    return seeds


def nullcone_defect(
    c0: DualQuaternion, c1: DualQuaternion, c2: DualQuaternion, g0: float, g2: float
) -> float | None:
    """Square defect of the conic with real parameters (g0, g2), or None if
    that conic is degenerate."""
    try:
        poly = interp_conic(ConicFamily(c0, c1, c2, DualNumber(g0), DualNumber(g2)))
    except (DegenerateData, InvalidParams):
        return None
    return square_defect(poly)


def solve_nullcone_parameters(
    c0: DualQuaternion, c1: DualQuaternion, c2: DualQuaternion
) -> list[tuple[float, float]]:
    """Real parts (g0, g2) making the primal norm of the conic a square.

    The closed-form circles are polished by damped Newton. Only when none
    of them is admissible, Newton runs from a grid in the box
    |g| ≤ newton_box (unit primals) and may not leave ten times that box.
    A pair is admissible if its conic is non-degenerate with square defect
    below NULLCONE_DEFECT_LIMIT. At most four pairs are returned, sorted.
    """
    settings = get_settings()
    primals, lengths = _normalized_primals(c0, c1, c2)
    to_unit = np.array([lengths[0] / lengths[1], lengths[2] / lengths[1]])
    found: list[tuple[float, np.ndarray]] = []

    def admit(g: np.ndarray) -> None:
        if min(abs(g[0]), abs(g[1])) <= 1e-6:
            return
        if any(np.linalg.norm(g - other) <= settings.dedup_distance for _, other in found):
            return
        defect = nullcone_defect(c0, c1, c2, g[0] / to_unit[0], g[1] / to_unit[1])
        if defect is not None and defect < NULLCONE_DEFECT_LIMIT:
            found.append((defect, g))

    seeds = [np.array(s) * to_unit for s in elliptic_circle_seeds(c0, c1, c2)]
    for seed in seeds:
        polished = _newton(primals, seed, 2.0 * max(1.0, float(np.max(np.abs(seed)))))
        near = polished is not None and (
            np.linalg.norm(polished - seed) <= 1e-6 * max(1.0, np.linalg.norm(seed))
        )
        admit(polished if near else seed)
    if not found:
        logger.debug('[FIT] no closed-form circle admissible, searching the grid')
        grid = np.linspace(-settings.newton_box, settings.newton_box, settings.newton_grid)
        for start in ((g0, g2) for g0 in grid for g2 in grid):
            g = _newton(primals, start, 10.0 * settings.newton_box)
            if g is not None:
                admit(g)
    best = sorted(found, key=lambda item: item[0])[:4]
    solutions = sorted((float(g[0] / to_unit[0]), float(g[1] / to_unit[1])) for _, g in best)
    logger.info('[FIT] %d null cone solutions from %d closed-form circles', len(solutions), len(seeds))
    return solutions


def nullcone_conic_fit(
    c0: DualQuaternion,
    c1: DualQuaternion,
    c2: DualQuaternion,
    dual0: float = 0.0,
    dual2: float = 0.0,
) -> list[MotionPoly]:
    """Null cone conics through three poses, at most four.

    Args:
        c0, c1, c2 (DualQuaternion): Poses for t = 0, 1, ∞.
        dual0, dual2 (float): Free dual parts of γ0 and γ2.

    Raises:
        NoSolutionFound: If no admissible parameters are found.
    """
    solutions = solve_nullcone_parameters(c0, c1, c2)
    if not solutions:
        raise NoSolutionFound('no null cone conic through the given poses was found')
    return [
        interp_conic(ConicFamily(c0, c1, c2, DualNumber(g0, dual0), DualNumber(g2, dual2)))
        for g0, g2 in solutions
    ]


def _reparametrize(poly: MotionPoly, h: float) -> np.ndarray:
    """Substitutes t = (s + h)/(h − s) and clears the denominator."""
    k0, k1, k2 = poly.as_array()
    left = np.array([h * h, -2 * h, 1.0])      # (h − s)²
    middle = np.array([h * h, 0.0, -1.0])      # (s + h)(h − s)
    right = np.array([h * h, 2 * h, 1.0])      # (s + h)²
    return np.outer(left, k0) + np.outer(middle, k1) + np.outer(right, k2)


def _tangent_distance(poly: MotionPoly, basis: np.ndarray) -> float:
    params = np.tan(np.linspace(-1.5, 1.5, 31))
    values = [poly(t).as_array()[:4] for t in params] + [poly.leading.as_array()[:4]]
    distances = []
    for v in values:
        v = v / np.linalg.norm(v)
        distances.append(np.linalg.norm(v - basis @ (basis.T @ v)))
    return float(max(distances))


def _osculating_branch(curve: CurveEvaluator, t0: float, h: float) -> tuple[np.ndarray, float]:
    points = [DualQuaternion.from_array(curve(t)) for t in (t0 - h, t0, t0 + h)]
    candidates = nullcone_conic_fit(*points)
    basis, _ = np.linalg.qr(np.array([curve(t0)[:4], curve.derivative(t0, 1)[:4]]).T)
    ranked = sorted(
        ((_tangent_distance(c, basis), i) for i, c in enumerate(candidates)), reverse=True
    )
    if len(ranked) > 1 and ranked[1][0] >= 0.9 * ranked[0][0]:
        raise BranchAmbiguity('two null cone conics are equally far from the tangent')
    chosen = candidates[ranked[0][1]]
    values = _reparametrize(chosen, h) / (h * h)
    pivot = canonicalize(values[0]).pivot
    inv = DualNumber(values[0][pivot], values[0][4 + pivot]).inverse(0.0)
    normalized = np.array([dual_scale(inv.primal, inv.dual, row) for row in values])
    return normalized, ranked[0][0]


def osculating_nullcone_conic(
    curve: CurveEvaluator, t0: float, h: float = 0.05
) -> MotionPoly:
    """Null cone conic osculating `curve` at t0.

    Fits null cone conics through the samples at t0 − h, t0, t0 + h, keeps
    the branch farthest from the tangent span and extrapolates the results
    for h and h/2. The returned polynomial is in s = t − t0.

    Raises:
        BranchAmbiguity: If the branch choice is not clear or differs
            between h and h/2.
    """
    if h <= 0:
        raise InvalidParams('the sampling step h must be positive')
    coarse, _ = _osculating_branch(curve, t0, h)
    fine, _ = _osculating_branch(curve, t0, h / 2)
    spread = float(np.max(np.abs(coarse - fine)) / max(np.max(np.abs(fine)), 1e-300))
    if spread > 0.25:
        raise BranchAmbiguity(f'branches for h and h/2 disagree (relative change {spread:.3g})')
    result = MotionPoly.from_array((4 * fine - coarse) / 3)
    logger.info('[FIT] osculating null cone conic, square defect %.3g', square_defect(result))
    return result

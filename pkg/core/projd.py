"""
Projective 3-space over the dual numbers.

Points are dual quaternions up to multiplication by invertible dual
numbers. A straight line is the set {[αa + βb]} with real α, β. Curves are
compared through chart-normalized derivatives, which makes the contact
order independent of the homogeneous scale.

Main functions:
- canonicalize: Canonical representative with pivot coordinate 1 + 0ε.
- proj_eq: Equality up to an invertible dual factor.
- proj_distance: Scale-free coordinate distance used by closure checks.
- connecting_lines: Straight line through [c] and [d] for factors γ, δ.
- line_family_dimension: Number of essential parameters of the
  connecting lines of two points.
- contact_order: Order of contact of two curves at a shared point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from core.config import get_settings, get_tolerance
from core.dualnum import DualNumber
from core.dualquat import DualQuaternion, dual_scale
from core.errors import (
    AllCoordinatesNull,
    CoincidentPoints,
    InvalidParams,
    NonInvertibleFactor,
    PointsDiffer,
)


def _as_array(q: DualQuaternion | np.ndarray) -> np.ndarray:
    if isinstance(q, DualQuaternion):
        return q.as_array()
    return np.asarray(q, dtype=float)


def _eps_times(a: np.ndarray) -> np.ndarray:
    return np.concatenate([np.zeros(4), a[:4]])


def _pivot(values: np.ndarray, tol: float) -> int | None:
    for index in range(4):
        if abs(values[index]) > tol:
            return index
    return None


@dataclass(frozen=True)
class ProjPointD:
    """Point of P³(D) stored by its canonical representative."""

    rep: DualQuaternion
    pivot: int

    def as_array(self) -> np.ndarray:
        return self.rep.as_array()


def canonicalize(q: DualQuaternion | np.ndarray, tol: float | None = None) -> ProjPointD:
    """Divides q by its first invertible coordinate.

    Raises:
        AllCoordinatesNull: If no coordinate is invertible.
    """
    tol = get_tolerance() if tol is None else tol
    values = _as_array(q)
    pivot = _pivot(values, tol)
    if pivot is None:
        raise AllCoordinatesNull(
            'the point has no invertible coordinate and no canonical form'
        )
    inv = DualNumber(values[pivot], values[4 + pivot]).inverse(0.0)
    rep = dual_scale(inv.primal, inv.dual, values)
    rep[pivot] = 1.0
    rep[4 + pivot] = 0.0
    return ProjPointD(DualQuaternion.from_array(rep), pivot)


def proj_eq(
    x: ProjPointD | DualQuaternion | np.ndarray,
    y: ProjPointD | DualQuaternion | np.ndarray,
    tol: float | None = None,
) -> bool:
    """True if the canonical representatives agree coordinatewise."""
    tol = get_tolerance() if tol is None else tol
    if not isinstance(x, ProjPointD):
        x = canonicalize(x, tol)
    if not isinstance(y, ProjPointD):
        y = canonicalize(y, tol)
    if x.pivot != y.pivot:
        return False
    a, b = x.as_array(), y.as_array()
    scale = max(1.0, float(np.max(np.abs(a))), float(np.max(np.abs(b))))
    return bool(np.max(np.abs(a - b)) <= tol * scale)


def proj_distance(
    x: DualQuaternion | np.ndarray, y: DualQuaternion | np.ndarray
) -> float:
    """Coordinate distance after dividing both points by the coordinate
    where x has its largest primal entry.

    Returns:
        float: 0 for projectively equal points, inf if y is not invertible
        at the chosen coordinate.
    """
    a, b = _as_array(x), _as_array(y)
    pivot = int(np.argmax(np.abs(a[:4])))
    if a[pivot] == 0.0 or b[pivot] == 0.0:
        return math.inf
    inv_a = DualNumber(a[pivot], a[4 + pivot]).inverse(0.0)
    inv_b = DualNumber(b[pivot], b[4 + pivot]).inverse(0.0)
    na = dual_scale(inv_a.primal, inv_a.dual, a)
    nb = dual_scale(inv_b.primal, inv_b.dual, b)
    return float(np.max(np.abs(na - nb)))


def _null_space(matrix: np.ndarray, rank_tol: float) -> np.ndarray:
    _, sing, vt = np.linalg.svd(matrix)
    smax = sing[0] if sing.size else 0.0
    rank = int(np.sum(sing > rank_tol * max(smax, 1e-300)))
    return vt[rank:]


def _dual_multiple(a: np.ndarray, b: np.ndarray, rank_tol: float) -> bool:
    """True if b = μa for an invertible dual number μ."""
    basis = np.column_stack([a, _eps_times(a)])
    mu, *_ = np.linalg.lstsq(basis, b, rcond=None)
    residual = np.linalg.norm(basis @ mu - b)
    scale = max(np.linalg.norm(b), 1e-300)
    return residual <= rank_tol * scale and abs(mu[0]) > rank_tol


@dataclass(frozen=True)
class StraightLineD:
    """Straight line {[αa + βb] : (α, β) ∈ ℝ² ∖ 0}."""

    a: DualQuaternion
    b: DualQuaternion

    def __post_init__(self) -> None:
        rank_tol = get_settings().rank_tolerance
        a, b = self.a.as_array(), self.b.as_array()
        if np.linalg.matrix_rank(np.column_stack([a, b]), tol=rank_tol * max(
            np.linalg.norm(a), np.linalg.norm(b), 1e-300
        )) < 2 or _dual_multiple(a, b, rank_tol):
            raise CoincidentPoints('the span points are dual multiples of each other')

    def point(self, alpha: float, beta: float) -> DualQuaternion:
        return DualQuaternion.from_array(
            alpha * self.a.as_array() + beta * self.b.as_array()
        )

    def contains(self, x: DualQuaternion | np.ndarray) -> bool:
        """Membership test: αa + βb = μx for real α, β and μ ∈ 𝔻ˣ."""
        rank_tol = get_settings().rank_tolerance
        xv = _as_array(x)
        columns = [self.a.as_array(), self.b.as_array(), -xv, -_eps_times(xv)]
        scales = [max(np.linalg.norm(col), 1e-300) for col in columns]
        matrix = np.column_stack([col / s for col, s in zip(columns, scales)])
        null = _null_space(matrix, rank_tol)
        if null.shape[0] == 0:
            return False
        return bool(np.max(np.abs(null[:, 2])) > 1e-6)


def same_line(first: StraightLineD, second: StraightLineD) -> bool:
    """Set-theoretic equality of two straight lines."""
    return all(
        line.contains(point)
        for line, point in (
            (first, second.a),
            (first, second.b),
            (second, first.a),
            (second, first.b),
        )
    )


def connecting_lines(
    c: DualQuaternion,
    d: DualQuaternion,
    gamma: DualNumber,
    delta: DualNumber,
    tol: float | None = None,
) -> StraightLineD:
    """Returns the straight line spanned by γc and δd.

    Raises:
        CoincidentPoints: If [c] = [d].
        NonInvertibleFactor: If γ or δ is not invertible.
        AllCoordinatesNull: If neither point has a non-zero primal entry.
    """
    tol = get_tolerance() if tol is None else tol
    gamma, delta = DualNumber.coerce(gamma), DualNumber.coerce(delta)
    if not (gamma.is_invertible(tol) and delta.is_invertible(tol)):
        raise NonInvertibleFactor('γ and δ must be invertible dual numbers')
    cv, dv = c.as_array(), d.as_array()
    if np.max(np.abs(cv[:4])) <= tol and np.max(np.abs(dv[:4])) <= tol:
        raise AllCoordinatesNull('c or d needs an entry with non-zero primal part')
    if _dual_multiple(cv, dv, get_settings().rank_tolerance):
        raise CoincidentPoints('[c] and [d] coincide')
    return StraightLineD(gamma * c, delta * d)


def line_family_dimension(
    c: DualQuaternion,
    d: DualQuaternion,
    gamma: DualNumber = DualNumber(1.0),
    delta: DualNumber = DualNumber(1.0),
) -> int:
    """Essential real parameters of the connecting lines at (γ, δ).

    The map (γ, δ) ↦ (γc, δd) is differentiated and the directions of a
    common dual factor are divided out.
    """
    gamma, delta = DualNumber.coerce(gamma), DualNumber.coerce(delta)
    cv, dv = c.as_array(), d.as_array()
    zero = np.zeros(8)
    jac = np.column_stack(
        [
            np.concatenate([cv, zero]),
            np.concatenate([_eps_times(cv), zero]),
            np.concatenate([zero, dv]),
            np.concatenate([zero, _eps_times(dv)]),
        ]
    )
    a = dual_scale(gamma.primal, gamma.dual, cv)
    b = dual_scale(delta.primal, delta.dual, dv)
    orbit = np.column_stack(
        [np.concatenate([a, b]), np.concatenate([_eps_times(a), _eps_times(b)])]
    )
    rank_tol = get_settings().rank_tolerance
    scale = max(np.max(np.abs(jac)), 1e-300)
    return int(
        np.linalg.matrix_rank(jac, tol=rank_tol * scale)
        - np.linalg.matrix_rank(orbit, tol=rank_tol * scale)
    )


FD_MAX_ORDER = 6


def _fd_weights(order: int) -> tuple[np.ndarray, np.ndarray]:
    """Offsets and weights of the central stencil for the given order."""
    half = (order + 1) // 2
    offsets = np.arange(-half, half + 1, dtype=float)
    rhs = np.zeros(offsets.size)
    rhs[order] = math.factorial(order)
    return offsets, np.linalg.solve(np.vander(offsets, increasing=True).T, rhs)


def _fd_derivative(func: Callable[[float], np.ndarray], t: float, order: int) -> np.ndarray:
    if not 1 <= order <= FD_MAX_ORDER:
        raise InvalidParams(
            f'finite differences are provided for orders 1 to {FD_MAX_ORDER}, got {order}'
        )
    h = get_settings().fd_step ** (3.0 / (order + 2))
    offsets, weights = _fd_weights(order)
    total = sum(w * func(t + k * h) for k, w in zip(offsets, weights) if w != 0.0)
    return total / h**order


@dataclass(frozen=True)
class CurveEvaluator:
    """Curve t ↦ dual quaternion with derivatives.

    Attributes:
        func: Evaluation, returns an array of 8 coordinates.
        derivatives: Analytic derivative (t, order) ↦ array, or None.
        max_order: Highest analytic derivative order; beyond it central
            finite differences are used up to FD_MAX_ORDER.
    """

    func: Callable[[float], np.ndarray]
    derivatives: Callable[[float, int], np.ndarray] | None = None
    max_order: int = 0
    label: str = field(default='curve', compare=False)

    def __call__(self, t: float) -> np.ndarray:
        return np.asarray(self.func(t), dtype=float)

    def is_analytic(self, order: int) -> bool:
        return order == 0 or (self.derivatives is not None and order <= self.max_order)

    def derivative(self, t: float, order: int) -> np.ndarray:
        if order == 0:
            return self(t)
        if self.is_analytic(order):
            return np.asarray(self.derivatives(t, order), dtype=float)
        return _fd_derivative(self, t, order)

    def reparametrized(
        self, phi: Callable[[float], tuple[float, float, float, float]], label: str = ''
    ) -> CurveEvaluator:
        """Returns s ↦ f(φ(s)); `phi` gives (φ, φ', φ'', φ''') at s."""

        def func(s: float) -> np.ndarray:
            return self(phi(s)[0])

        def derivs(s: float, order: int) -> np.ndarray:
            p0, p1, p2, p3 = phi(s)
            d1 = self.derivative(p0, 1)
            if order == 1:
                return d1 * p1
            d2 = self.derivative(p0, 2)
            if order == 2:
                return d2 * p1**2 + d1 * p2
            d3 = self.derivative(p0, 3)
            return d3 * p1**3 + 3 * d2 * p1 * p2 + d1 * p3

        return CurveEvaluator(
            func, derivs, min(self.max_order, 3), label or f'{self.label}∘φ'
        )


def chart_derivatives(curve: CurveEvaluator, t: float, pivot: int, order: int) -> list[np.ndarray]:
    """Derivatives of f·(f_pivot)⁻¹ up to `order` at t (Leibniz rule)."""
    raw = [curve.derivative(t, m) for m in range(order + 1)]
    scalars = [(r[pivot], r[4 + pivot]) for r in raw]
    inv = DualNumber(*scalars[0]).inverse(0.0)
    normalized: list[np.ndarray] = []
    for n in range(order + 1):
        acc = raw[n].copy()
        for k in range(1, n + 1):
            acc -= math.comb(n, k) * dual_scale(scalars[k][0], scalars[k][1], normalized[n - k])
        normalized.append(dual_scale(inv.primal, inv.dual, acc))
    return normalized


def contact_order(
    f: CurveEvaluator,
    g: CurveEvaluator,
    tf: float,
    tg: float,
    max_m: int,
    tol: float | None = None,
) -> int:
    """Largest m ≤ max_m with equal chart-normalized derivatives up to m.

    Returns 0 if only the points agree. Orders without analytic
    derivatives come from finite differences, available up to FD_MAX_ORDER.

    Raises:
        PointsDiffer: If f(tf) and g(tg) are different points.
        InvalidParams: If max_m is negative or needs finite differences
            beyond FD_MAX_ORDER.
    """
    if max_m < 0:
        raise InvalidParams(f'max_m must be non-negative, got {max_m}')
    if max_m > FD_MAX_ORDER and not (f.is_analytic(max_m) and g.is_analytic(max_m)):
        raise InvalidParams(
            f'contact of order {max_m} needs analytic derivatives; '
            f'finite differences stop at order {FD_MAX_ORDER}'
        )
    settings = get_settings()
    base_tol = get_tolerance() if tol is None else tol
    f0, g0 = f(tf), g(tg)
    if not proj_eq(f0, g0, max(base_tol, get_tolerance())):
        raise PointsDiffer('the curves do not pass through the same point')
    pivot = canonicalize(f0).pivot
    fd = chart_derivatives(f, tf, pivot, max_m)
    gd = chart_derivatives(g, tg, pivot, max_m)
    for m in range(1, max_m + 1):
        analytic = f.is_analytic(m) and g.is_analytic(m)
        tol_m = base_tol if (analytic or tol is not None) else settings.fd_tolerance
        scale = max(1.0, float(np.max(np.abs(fd[m]))), float(np.max(np.abs(gd[m]))))
        if np.max(np.abs(fd[m] - gd[m])) > tol_m * scale:
            return m - 1
    return max_m

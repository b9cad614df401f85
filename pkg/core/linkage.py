"""
Spatial four-bar linkages from two factorizations of one motion.

A monic linear factor t − h is a rotation, a translation or a vertical
Darboux motion about an axis; its joint is revolute (R), prismatic (P) or
cylindrical (C). Two factorizations c = F1F2 = G1G2 close the loop
F1, F2, Ḡ2, Ḡ1.

Main functions:
- extract_joint: Plücker axis and joint type of a linear factor.
- synthesize_fourbar: Joint cycle, mobility and closure of two
  factorizations.
- cgk_dof: Chebyshev-Grübler-Kutzbach mobility count.
- closure_check: Largest discrepancy of the two chains along the motion.
- axis_report: Pairwise angles and distances of the joint axes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

import networkx as nx
import numpy as np

from core.config import get_tolerance
from core.dualquat import DualQuaternion
from core.errors import InvalidParams, InvariantViolation, MismatchedMotions, NoAxis
from core.factor import FactorizationResult, Prefactor
from core.log import get_logger
from core.motionpoly import MotionPoly
from core.projd import proj_distance

logger = get_logger(__name__)

CLOSURE_LIMIT = 1e-6
DEFAULT_SAMPLES = tuple(np.linspace(-2.13, 2.07, 20))


class JointType(Enum):
    REVOLUTE = 'R'
    PRISMATIC = 'P'
    CYLINDRICAL = 'C'


JOINT_DOF = {JointType.REVOLUTE: 1, JointType.PRISMATIC: 1, JointType.CYLINDRICAL: 2}


@dataclass(frozen=True, eq=False)
class Joint:
    """Joint of a linear factor; axis in Plücker coordinates.

    For prismatic joints only the direction is meaningful and the moment
    is zero.
    """

    direction: np.ndarray
    moment: np.ndarray
    jtype: JointType
    factor: MotionPoly = field(compare=False)
    pitch: float = 0.0

    @property
    def dof(self) -> int:
        return JOINT_DOF[self.jtype]

    def to_json(self) -> dict:
        return {
            'direction': self.direction.tolist(),
            'moment': self.moment.tolist(),
            'type': self.jtype.value,
            'dof': self.dof,
            'pitch': self.pitch,
            'factor': self.factor.to_json(),
        }


def extract_joint(f: MotionPoly, tol: float | None = None) -> Joint:
    """Axis and type of the monic linear factor f = t − h.

    Raises:
        InvalidParams: If f is not monic linear.
        NoAxis: If h has vanishing vector part.
    """
    tol = get_tolerance() if tol is None else tol
    values = f.as_array()
    if f.degree != 1 or np.max(np.abs(values[1] - np.eye(8)[0])) > tol:
        raise InvalidParams('joints are extracted from monic linear factors')
    h = -values[0]
    primal_vec, dual_vec = h[1:4], h[5:8]
    primal_len = float(np.linalg.norm(primal_vec))
    if primal_len <= tol:
        dual_len = float(np.linalg.norm(dual_vec))
        if dual_len <= tol:
            raise NoAxis('the factor has no axis: its vector part vanishes')
        return Joint(dual_vec / dual_len, np.zeros(3), JointType.PRISMATIC, f)
    u = primal_vec / primal_len
    along = float(dual_vec @ u)
    moment = -(dual_vec - along * u) / primal_len
    pitch = along / primal_len
    scale = max(1.0, float(np.max(np.abs(h))))
    real_norm = abs(h[4]) <= tol * scale and abs(along) <= tol * scale
    jtype = JointType.REVOLUTE if real_norm else JointType.CYLINDRICAL
    return Joint(u, moment, jtype, f, pitch)


def axis_angle(a: Joint, b: Joint) -> float:
    """Angle in [0, π/2] between the two axis lines."""
    cosine = min(1.0, abs(float(a.direction @ b.direction)))
    return math.acos(cosine)


def axis_distance(a: Joint, b: Joint, tol: float | None = None) -> float:
    """Length of the common perpendicular of the two axes."""
    tol = get_tolerance() if tol is None else tol
    cross = np.cross(a.direction, b.direction)
    if np.linalg.norm(cross) <= math.sqrt(tol):
        sign = 1.0 if a.direction @ b.direction > 0 else -1.0
        return float(np.linalg.norm(a.moment - sign * b.moment))
    reciprocal = float(a.direction @ b.moment + b.direction @ a.moment)
    return abs(reciprocal) / float(np.linalg.norm(cross))


@dataclass(frozen=True)
class AxisPair:
    first: int
    second: int
    angle: float
    distance: float
    parallel: bool

    def to_json(self) -> dict:
        return {
            'joints': [self.first, self.second],
            'angle': self.angle,
            'distance': self.distance,
            'parallel': self.parallel,
        }


def axis_report(joints: Sequence[Joint], tol: float | None = None) -> list[AxisPair]:
    tol = get_tolerance() if tol is None else tol
    pairs = []
    for i in range(len(joints)):
        for j in range(i + 1, len(joints)):
            angle = axis_angle(joints[i], joints[j])
            pairs.append(AxisPair(i, j, angle, axis_distance(joints[i], joints[j], tol),
                                  angle <= math.sqrt(tol)))
    return pairs


def cgk_dof(n_links: int, joint_dofs: Sequence[int]) -> int:
    """Mobility 6(n − 1 − j) + Σ fᵢ of a spatial mechanism."""
    if n_links < 2:
        raise InvalidParams('a mechanism needs at least two links')
    return 6 * (n_links - 1 - len(joint_dofs)) + sum(joint_dofs)


@dataclass(frozen=True)
class _Chain:
    leading: DualQuaternion
    prefactors: tuple[Prefactor, ...]

    def evaluate(self, factors: Sequence[MotionPoly], t: float) -> DualQuaternion:
        value = self.leading
        for index, factor in enumerate(factors):
            if index < len(self.prefactors):
                value = value * self.prefactors[index](t)
            value = value * factor(t)
        return value

    def poles(self) -> list[float]:
        return [p.root for p in self.prefactors]


@dataclass(frozen=True, eq=False)
class Linkage:
    """Closed loop of joints [F1, F2, Ḡ2, Ḡ1] with its link graph."""

    joints: tuple[Joint, ...]
    graph: nx.Graph = field(compare=False)
    chains: tuple[_Chain, _Chain] = field(compare=False)
    dof_cgk: int = 0
    closure_residual: float = 0.0
    same_family: bool = False
    degenerate: bool = False

    @property
    def links(self) -> int:
        return self.graph.number_of_nodes()

    @property
    def type_string(self) -> str:
        return ''.join(j.jtype.value for j in self.joints)

    def to_json(self) -> dict:
        return {
            'joints': [j.to_json() for j in self.joints],
            'types': self.type_string,
            'links': self.links,
            'connectivity': [list(edge) for edge in self.graph.edges()],
            'dof_cgk': self.dof_cgk,
            'closure_residual': self.closure_residual,
            'same_family': self.same_family,
            'degenerate': self.degenerate,
            'axes': [pair.to_json() for pair in axis_report(self.joints)],
        }


def _link_graph(joints: Sequence[Joint]) -> nx.Graph:
    graph = nx.Graph()
    count = len(joints)
    for index, joint in enumerate(joints):
        graph.add_edge(f'link{index}', f'link{(index + 1) % count}',
                       joint=index, jtype=joint.jtype.value)
    return graph


def closure_check(l: Linkage, samples: Sequence[float] = DEFAULT_SAMPLES) -> float:
    """Largest projective distance between the chains F1F2 and G1G2,
    rebuilt from the joint factors."""
    first, second = l.chains
    j = l.joints
    forward = (j[0].factor, j[1].factor)
    backward = (j[3].factor.conj(), j[2].factor.conj())
    poles = first.poles() + second.poles()
    residuals = [
        proj_distance(first.evaluate(forward, t), second.evaluate(backward, t))
        for t in samples
        if all(abs(t - r) > 1e-6 for r in poles)
    ]
    return float(max(residuals))


def synthesize_fourbar(
    fact1: FactorizationResult,
    fact2: FactorizationResult,
    samples: Sequence[float] = DEFAULT_SAMPLES,
    tol: float | None = None,
) -> Linkage:
    """Four-bar linkage from two factorizations of the same motion.

    Raises:
        MismatchedMotions: If the two products differ.
    """
    tol = get_tolerance() if tol is None else tol
    if len(fact1.factors) != 2 or len(fact2.factors) != 2:
        raise InvalidParams('four-bar synthesis needs two linear factors per factorization')
    f1, f2 = fact1.factors
    g1, g2 = fact2.factors
    joints = tuple(extract_joint(f, tol) for f in (f1, f2, g2.conj(), g1.conj()))
    graph = _link_graph(joints)
    if len(nx.cycle_basis(graph)) != 1:
        raise InvariantViolation('the joints do not form a single loop')
    chains = (
        _Chain(fact1.leading, fact1.prefactors),
        _Chain(fact2.leading, fact2.prefactors),
    )
    linkage = Linkage(joints, graph, chains)
    residual = closure_check(linkage, samples)
    if residual > CLOSURE_LIMIT:
        raise MismatchedMotions(
            f'the factorizations describe different motions (residual {residual:.3g})'
        )
    dof = cgk_dof(graph.number_of_nodes(), [j.dof for j in joints])
    same_family = all(
        np.linalg.norm(np.cross(joints[0].direction, j.direction)) <= math.sqrt(tol)
        for j in joints[1:]
    )
    degenerate = f1.isclose(g1, math.sqrt(tol)) and f2.isclose(g2, math.sqrt(tol))
    if same_family:
        logger.warning('[LINKAGE] all axes are parallel; the linkage has in general two degrees of freedom')
    if fact1.kinematically_identical or fact2.kinematically_identical:
        logger.warning('[LINKAGE] hyperbolic translation: all factorizations move the links alike, '
                       'no overconstrained linkage arises')
    if degenerate:
        logger.warning('[LINKAGE] both factorizations coincide; the linkage is degenerate')
    logger.info('[LINKAGE] %s linkage, CGK mobility %d, closure %.3g',
                ''.join(j.jtype.value for j in joints), dof, residual)
    return Linkage(joints, graph, chains, dof, residual, same_family, degenerate)

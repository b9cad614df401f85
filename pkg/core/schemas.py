"""
pydantic models of the JSON documents read and written by the command-line
front end, with conversions to the library types.

Every model forbids unknown fields, so a typo in an input file is reported
instead of silently ignored.
"""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field

from core.dualquat import DualQuaternion, Quaternion
from core.factor import FactorizationResult, NullConeCase, Prefactor
from core.motionpoly import MotionPoly, TrigMotion
from core.osculate import CylinderMotion, ScalarFunction


class _Strict(BaseModel):
    model_config = ConfigDict(extra='forbid', populate_by_name=True)


class DualNumberModel(_Strict):
    p: float
    d: float = 0.0


class DualQuaternionModel(_Strict):
    primal: list[float] = Field(min_length=4, max_length=4)
    dual: list[float] = Field(default_factory=lambda: [0.0] * 4, min_length=4, max_length=4)

    def to_dq(self) -> DualQuaternion:
        return DualQuaternion(Quaternion(*self.primal), Quaternion(*self.dual))


class MotionPolyModel(_Strict):
    coeffs: list[DualQuaternionModel] = Field(min_length=1)

    def to_poly(self) -> MotionPoly:
        return MotionPoly(tuple(c.to_dq() for c in self.coeffs))


class TrigMotionModel(_Strict):
    kind: Literal['rotation', 'translation', 'helical', 'darboux']
    pitch: float = 0.0
    amplitude: float = 0.0
    speed: float = 1.0
    direction: list[float] = Field(default_factory=lambda: [0.0, 0.0, 1.0], min_length=3, max_length=3)
    frame: Optional[DualQuaternionModel] = None


class BasicMotionModel(_Strict):
    kind: str
    trig: Optional[TrigMotionModel] = None
    poly: Optional[MotionPolyModel] = None


class ScalarFunctionModel(_Strict):
    poly: list[float] = Field(default_factory=lambda: [0.0])
    sinusoids: list[list[float]] = Field(default_factory=list)

    def to_function(self) -> ScalarFunction:
        return ScalarFunction.from_json(self.model_dump())


class CylinderMotionModel(_Strict):
    angle: ScalarFunctionModel
    height: ScalarFunctionModel
    label: str = 'cylinder motion'

    def to_motion(self) -> CylinderMotion:
        return CylinderMotion(self.angle.to_function(), self.height.to_function(), self.label)


class PrefactorModel(_Strict):
    lam: float = Field(alias='lambda')
    root: float


class FactorizationModel(_Strict):
    case: Optional[str] = None
    leading: DualQuaternionModel
    factors: list[MotionPolyModel]
    prefactors: list[PrefactorModel] = Field(default_factory=list)
    family_params: dict[str, float] = Field(default_factory=dict)
    branch: Optional[str] = None
    kinematically_identical: bool = False

    def to_result(self) -> FactorizationResult:
        return FactorizationResult(
            NullConeCase(self.case) if self.case else None,
            self.leading.to_dq(),
            tuple(f.to_poly() for f in self.factors),
            tuple(Prefactor(p.lam, p.root) for p in self.prefactors),
            dict(self.family_params),
            self.branch,
            self.kinematically_identical,
        )


class JointModel(_Strict):
    direction: list[float]
    moment: list[float]
    type: Literal['R', 'P', 'C']
    dof: int
    pitch: float
    factor: MotionPolyModel


class AxisPairModel(_Strict):
    joints: list[int]
    angle: float
    distance: float
    parallel: bool


class LinkageModel(_Strict):
    joints: list[JointModel]
    types: str
    links: int
    connectivity: list[list[str]]
    dof_cgk: int
    closure_residual: float
    same_family: bool
    degenerate: bool
    axes: list[AxisPairModel]


class FitSolutionModel(_Strict):
    gamma0: Optional[DualNumberModel] = None
    gamma2: Optional[DualNumberModel] = None
    poly: MotionPolyModel
    square_defect: Optional[float] = None
    dual_norm: Optional[float] = None


class FitResultModel(_Strict):
    method: Literal['bennett', 'nullcone']
    solutions: list[FitSolutionModel]


def trig_to_json(trig: TrigMotion) -> dict:
    return {
        'kind': trig.kind,
        'pitch': trig.pitch,
        'amplitude': trig.amplitude,
        'speed': trig.speed,
        'direction': list(trig.direction),
        'frame': trig.frame.to_json(),
    }


def checked(model: type[BaseModel], data: dict) -> dict:
    """Validates an output document against its model."""
    return model.model_validate(data).model_dump(by_alias=True)

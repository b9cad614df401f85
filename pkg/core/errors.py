"""
Exception hierarchy shared by every motionkit module.

Errors are split in two groups so the command-line front end can map them
to exit codes:

- InputError: malformed or inadmissible input (exit code 2).
- MathematicalFailure: the input is valid but the requested object does not
  exist or could not be found (exit code 3).
"""


class MotionKitError(Exception):
    """Base class of all motionkit errors."""

    exit_code = 1


class InputError(MotionKitError):
    """Invalid input data or parameters."""

    exit_code = 2


class MathematicalFailure(MotionKitError):
    """Valid input without a mathematical solution."""

    exit_code = 3


class InvariantViolation(MathematicalFailure):
    """A computed quantity breaks an identity of exact arithmetic, as with
    non-finite input."""


# dualnum / dualquat


class NotInvertible(InputError, ZeroDivisionError):
    """A dual number or dual quaternion with vanishing primal part."""


class ZeroElement(InputError):
    """All eight coordinates of a dual quaternion vanish."""


class NullConeElement(InputError):
    """The dual quaternion lies on the null cone and acts on no point."""


# projd


class AllCoordinatesNull(InputError):
    """No coordinate of the point is an invertible dual number."""


class CoincidentPoints(InputError):
    """The two points are projectively equal."""


class NonInvertibleFactor(InputError):
    """A scaling factor is not an invertible dual number."""


class PointsDiffer(InputError):
    """Curves compared for contact do not share the base point."""


# motionpoly / osculate


class InvalidParams(InputError):
    """Unknown motion kind or inadmissible motion parameters."""


class NullConeParameter(MathematicalFailure):
    """The motion passes through the null cone at a sampled parameter."""


class StationaryAngle(InputError):
    """The rotation angle is stationary, the development is not a graph."""


# conics


class DegenerateData(InputError):
    """Interpolation data spans a point or a line only."""


class DegenerateConfiguration(MathematicalFailure):
    """The linear conditions of a conic fit are singular."""


class NoSolutionFound(MathematicalFailure):
    """No start value of the solver converged."""


class BranchAmbiguity(MathematicalFailure):
    """The branch of a limit construction cannot be selected reliably."""


# factor


class NotNullCone(InputError):
    """The primal norm does not have two double roots."""


class QuadrupleRoot(InputError):
    """The primal norm has a single root of multiplicity four."""


class NoFactorization(MathematicalFailure):
    """The polynomial admits no factorization into linear factors."""


class NonInvertibleRemainder(MathematicalFailure):
    """The linear remainder has a non-invertible leading coefficient."""


class NotCaseB(InputError):
    """The primal part is not an irreducible real quadratic."""


class NotCaseC(InputError):
    """The primal part is not a product of two distinct real linear factors."""


class InvalidSemiAxes(InputError):
    """The translation ellipse has a vanishing major semi-axis."""


# linkage


class NoAxis(InputError):
    """A linear factor without rotational or translational part."""


class MismatchedMotions(MathematicalFailure):
    """The factorizations do not describe the same motion."""

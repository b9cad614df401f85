"""
Command-line front end of motionkit: builds motions, samples trajectories,
fits conics, factors quadratic motion polynomials, synthesizes four-bar
linkages and draws cylinder developments.

Subcommands:
- **`motion`**: Basic motion (rotation, translation, helical, Darboux) or
  the interpolating conic of three poses, written as JSON.
- **`sample`**: Trajectory of a point as CSV rows `t,y0,y1,y2,y3`.
- **`fit`**: Bennett or null cone conics through three poses.
- **`factor`**: Case and factorizations of a quadratic motion polynomial.
- **`linkage`**: Four-bar linkage of two factorizations.
- **`develop`**: SVG (and optionally CSV) of a cylinder development.

Global arguments:
- **`-c`/`--config`** (optional): Folder holding `motionkit.json`.
- **`--tolerance`** (optional): Global tolerance for this run, overrides MOTIONKIT_TOL.
- **`-v`/`--verbose`** (optional): Show progress messages.

Exit codes: 0 on success, 2 on invalid input, 3 when the mathematics fails
(no factorization, no solution, mismatched motions).

Usage Example:
```bash
python main.py motion --kind darboux --amplitude 1.5 --out m.json
python main.py factor --input c.json --out f.json
python main.py linkage --first f.json --second f.json --second-index 1 --out l.json
```
"""

import argparse
import json
import math
import sys

import numpy as np
from pydantic import ValidationError

from core.config import DEFAULT_CONFIG_PATH, TOLERANCE_ENV, configure, get_tolerance, scoped_settings
from core.conics import (
    ConicFamily,
    bennett_fit,
    interp_conic,
    solve_nullcone_parameters,
    square_defect,
)
from core.dualnum import DualNumber, parse_dual
from core.dualquat import DualQuaternion, Quaternion
from core.errors import InputError, InvalidParams, MathematicalFailure, NoSolutionFound
from core.factor import (
    NullConeCase,
    classify_case,
    factor_bounded_translation,
    factor_generic_quadratic,
    factor_motion,
)
from core.file_manager import read_json, write_csv, write_json, write_text_atomic
from core.linkage import synthesize_fourbar
from core.log import print_green, print_red, print_yellow, set_verbosity
from core.motionpoly import MotionPoly, TrigMotion, make_basic_motion, mp_norm, trajectory_of_point
from core.osculate import CylinderMotion, develop, osculating_darboux
from core.plot import development_svg
from core.schemas import (
    BasicMotionModel,
    CylinderMotionModel,
    DualQuaternionModel,
    FactorizationModel,
    FitResultModel,
    LinkageModel,
    MotionPolyModel,
    checked,
    trig_to_json,
)


def _vector(text: str) -> tuple[float, float, float]:
    try:
        values = tuple(float(v) for v in text.split(','))
    except ValueError as exc:
        raise InvalidParams(f'malformed vector {text!r}') from exc
    if len(values) != 3:
        raise InvalidParams(f'a vector needs three coordinates, got {text!r}')
    return values


def _load_pose(source: str) -> DualQuaternion:
    return DualQuaternionModel.model_validate(read_json(source)).to_dq()


def _load_poly(source: str) -> MotionPoly:
    data = read_json(source)
    if 'coeffs' in data:
        return MotionPolyModel.model_validate(data).to_poly()
    motion = BasicMotionModel.model_validate(data)
    if motion.poly is None:
        raise InvalidParams('the motion has no polynomial form')
    return motion.poly.to_poly()


def _load_motion(source: str) -> MotionPoly | TrigMotion:
    data = read_json(source)
    if 'coeffs' in data:
        return MotionPolyModel.model_validate(data).to_poly()
    motion = BasicMotionModel.model_validate(data)
    if motion.poly is not None:
        return motion.poly.to_poly()
    if motion.trig is None:
        raise InvalidParams('the motion document has neither a polynomial nor a trigonometric form')
    trig = motion.trig
    frame = trig.frame.to_dq() if trig.frame else DualQuaternion(Quaternion(1.0))
    return TrigMotion(trig.kind, trig.pitch, trig.amplitude, trig.speed,
                      tuple(trig.direction), frame)


def _load_factorization(source: str, index: int):
    data = read_json(source)
    if 'factorizations' in data:
        try:
            data = data['factorizations'][index]
        except IndexError as exc:
            raise InvalidParams(f'{source} has no factorization number {index}') from exc
    return FactorizationModel.model_validate(data).to_result()


def cmd_motion(args: argparse.Namespace) -> int:
    if args.kind == 'conic':
        if not args.points or len(args.points) != 3:
            raise InvalidParams('a conic needs exactly three --points')
        c0, c1, c2 = (_load_pose(p) for p in args.points)
        poly = interp_conic(
            ConicFamily(c0, c1, c2, parse_dual(args.gamma0), parse_dual(args.gamma2))
        )
        document = {'kind': 'conic', 'trig': None, 'poly': poly.to_json()}
    else:
        motion = make_basic_motion(
            args.kind,
            pitch=args.pitch,
            amplitude=args.amplitude,
            distance=args.distance,
            direction=_vector(args.direction),
            point=_vector(args.point),
        )
        document = {
            'kind': args.kind,
            'trig': trig_to_json(motion.trig),
            'poly': motion.poly.to_json() if motion.poly is not None else None,
        }
    write_json(args.out, checked(BasicMotionModel, document))
    print_green(f'[MOTION] {args.kind} motion written to {args.out}')
    return 0


def cmd_sample(args: argparse.Namespace) -> int:
    motion = _load_motion(args.input)
    samples = np.linspace(args.t_range[0], args.t_range[1], args.samples)
    trajectory = trajectory_of_point(motion, _vector(args.point), samples)
    write_csv(args.out, ['t', 'y0', 'y1', 'y2', 'y3'], trajectory.csv_rows())
    degree = 'unknown' if trajectory.degree is None else trajectory.degree
    print_green(f'[SAMPLE] {len(samples)} samples written to {args.out}, degree {degree}')
    return 0


def cmd_fit(args: argparse.Namespace) -> int:
    c0, c1, c2 = (_load_pose(p) for p in args.points)
    solutions = []
    if args.method == 'bennett':
        poly = bennett_fit(c0, c1, c2)
        dual = float(np.max(np.abs(mp_norm(poly).dual)))
        solutions.append({'poly': poly.to_json(), 'dual_norm': dual})
    else:
        for g0, g2 in solve_nullcone_parameters(c0, c1, c2):
            gamma0, gamma2 = DualNumber(g0, args.dual0), DualNumber(g2, args.dual2)
            poly = interp_conic(ConicFamily(c0, c1, c2, gamma0, gamma2))
            solutions.append({
                'gamma0': gamma0.to_json(),
                'gamma2': gamma2.to_json(),
                'poly': poly.to_json(),
                'square_defect': square_defect(poly),
            })
        if not solutions:
            raise NoSolutionFound('no null cone conic through the given poses was found')
    write_json(args.out, checked(FitResultModel, {'method': args.method, 'solutions': solutions}))
    print_green(f'[FIT] {len(solutions)} {args.method} solution(s) written to {args.out}')
    return 0


def cmd_factor(args: argparse.Namespace) -> int:
    c = _load_poly(args.input)
    if args.norm_factor:
        s = [float(v) for v in args.norm_factor.split(',')]
        results = [factor_generic_quadratic(c, s)]
        case = None
    else:
        report = classify_case(c)
        case = report.case.value
        if report.case is NullConeCase.B_IRREDUCIBLE_QUADRATIC:
            results = [
                factor_bounded_translation(c, args.v2, args.v3, branch)
                for branch in ('+', '-')
            ]
        else:
            results = [factor_motion(c)]
    for result in results:
        residual = result.verify(c)
        if residual > math.sqrt(get_tolerance()):
            print_yellow(f'[FACTOR] product residual {residual:.3g}')
    document = {
        'case': case,
        'factorizations': [checked(FactorizationModel, r.to_json()) for r in results],
    }
    write_json(args.out, document)
    print_green(f'[FACTOR] {len(results)} factorization(s) written to {args.out}')
    return 0


def cmd_linkage(args: argparse.Namespace) -> int:
    first = _load_factorization(args.first, args.first_index)
    second = _load_factorization(args.second, args.second_index)
    linkage = synthesize_fourbar(first, second)
    write_json(args.out, checked(LinkageModel, linkage.to_json()))
    print_green(
        f'[LINKAGE] {linkage.type_string} linkage, CGK mobility {linkage.dof_cgk}, '
        f'written to {args.out}'
    )
    return 0


def cmd_develop(args: argparse.Namespace) -> int:
    if args.input:
        motion = CylinderMotionModel.model_validate(read_json(args.input)).to_motion()
    elif args.kind == 'helical':
        motion = CylinderMotion.helical(args.pitch if args.pitch is not None else 1.0)
    elif args.kind == 'darboux':
        motion = CylinderMotion.darboux(args.amplitude if args.amplitude is not None else 1.0)
    else:
        motion = CylinderMotion.rotation()
    curve = develop(motion, tuple(args.t_range), args.samples)
    osculating = osculating_darboux(motion, args.osculate) if args.osculate is not None else None
    write_text_atomic(args.out, development_svg(curve, osculating, motion.label))
    if args.csv:
        write_csv(args.csv, ['u', 'z', 'slope', 'curvature'], curve.csv_rows())
    print_green(f'[DEVELOP] development of {motion.label} written to {args.out}')
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description='Rigid-body motions as curves over the dual numbers.'
    )
    parser.add_argument('-c', '--config', type=str, default=None,
                        help=f'Folder holding motionkit.json (default: {DEFAULT_CONFIG_PATH}).')
    parser.add_argument('--tolerance', type=float, default=None,
                        help=f'Global tolerance, overrides {TOLERANCE_ENV}.')
    parser.add_argument('-v', '--verbose', action='store_true', help='Show progress messages.')
    sub = parser.add_subparsers(dest='command', required=True)

    motion = sub.add_parser('motion', help='Build a basic motion or an interpolating conic.')
    motion.add_argument('--kind', required=True,
                        choices=['rotation', 'translation', 'helical', 'darboux', 'conic'])
    motion.add_argument('--pitch', type=float, default=None)
    motion.add_argument('--amplitude', type=float, default=None)
    motion.add_argument('--distance', type=float, default=None)
    motion.add_argument('--direction', type=str, default='0,0,1')
    motion.add_argument('--point', type=str, default='0,0,0')
    motion.add_argument('--points', nargs=3, default=None, help='Three pose JSON files.')
    motion.add_argument('--gamma0', type=str, default='1,0', help='Dual number "a,b".')
    motion.add_argument('--gamma2', type=str, default='1,0', help='Dual number "a,b".')
    motion.add_argument('--out', required=True)
    motion.set_defaults(handler=cmd_motion)

    sample = sub.add_parser('sample', help='Sample the trajectory of a point.')
    sample.add_argument('--input', required=True)
    sample.add_argument('--point', type=str, default='1,0,0')
    sample.add_argument('--t-range', type=float, nargs=2, default=[-2.0, 2.0])
    sample.add_argument('--samples', type=int, default=41)
    sample.add_argument('--out', required=True)
    sample.set_defaults(handler=cmd_sample)

    fit = sub.add_parser('fit', help='Fit Bennett or null cone conics through three poses.')
    fit.add_argument('method', choices=['bennett', 'nullcone'])
    fit.add_argument('--points', nargs=3, required=True)
    fit.add_argument('--dual0', type=float, default=0.0)
    fit.add_argument('--dual2', type=float, default=0.0)
    fit.add_argument('--out', required=True)
    fit.set_defaults(handler=cmd_fit)

    factor = sub.add_parser('factor', help='Factor a quadratic motion polynomial.')
    factor.add_argument('--input', required=True)
    factor.add_argument('--v2', type=float, default=0.0)
    factor.add_argument('--v3', type=float, default=0.0)
    factor.add_argument('--norm-factor', type=str, default=None,
                        help='Real quadratic factor "s0,s1,s2" of the norm.')
    factor.add_argument('--out', required=True)
    factor.set_defaults(handler=cmd_factor)

    linkage = sub.add_parser('linkage', help='Synthesize a four-bar linkage.')
    linkage.add_argument('--first', required=True)
    linkage.add_argument('--second', required=True)
    linkage.add_argument('--first-index', type=int, default=0)
    linkage.add_argument('--second-index', type=int, default=0)
    linkage.add_argument('--out', required=True)
    linkage.set_defaults(handler=cmd_linkage)

    dev = sub.add_parser('develop', help='Draw the development of a cylinder motion.')
    dev.add_argument('--input', default=None, help='Cylinder motion JSON.')
    dev.add_argument('--kind', choices=['rotation', 'helical', 'darboux'], default='helical')
    dev.add_argument('--pitch', type=float, default=None)
    dev.add_argument('--amplitude', type=float, default=None)
    dev.add_argument('--t-range', type=float, nargs=2, default=[0.0, 2 * math.pi])
    dev.add_argument('--samples', type=int, default=201)
    dev.add_argument('--osculate', type=float, default=None)
    dev.add_argument('--csv', default=None)
    dev.add_argument('--out', required=True)
    dev.set_defaults(handler=cmd_develop)
    return parser


def main(argv: list[str] | None = None) -> int:
    """Runs one subcommand and returns its exit code."""
    args = build_parser().parse_args(argv)
    set_verbosity(args.verbose)
    try:
        with scoped_settings():
            if args.config:
                configure(args.config)
            if args.tolerance is None:
                return args.handler(args)
            with scoped_settings(tolerance=args.tolerance):
                return args.handler(args)
    except MathematicalFailure as exc:
        print_red(f'[ERROR] {type(exc).__name__}: {exc}')
        return exc.exit_code
    except InputError as exc:
        print_red(f'[ERROR] {type(exc).__name__}: {exc}')
        return exc.exit_code
    except (ValidationError, json.JSONDecodeError, FileNotFoundError, ValueError) as exc:
        print_red(f'[ERROR] invalid input: {exc}')
        return 2


if __name__ == '__main__':
    sys.exit(main())

#!/usr/bin/env python3
"""
End-to-end tests of the command-line front end: every subcommand is run
through main() on files in a temporary folder.
"""

import csv
import json
import math
import os
import sys
import tempfile

from core.config import TOLERANCE_ENV, Settings, get_settings, get_tolerance
from core.dualquat import DualQuaternion, Quaternion
from core.motionpoly import MotionPoly
from main import build_parser, main
from test_conics import BENNETT, _circle_conic
from test_factor import CASE_A, EXAMPLE, R3


def _write(folder, name, data):
    path = os.path.join(folder, name)
    with open(path, 'w', encoding='utf-8') as file:
        json.dump(data, file)
    return path


def _read(path):
    with open(path, 'r', encoding='utf-8') as file:
        return file.read()


def test_motion_and_sample():
    print("[TEST 1] motion and sample...")
    with tempfile.TemporaryDirectory() as folder:
        motion = os.path.join(folder, 'darboux.json')
        assert main(['motion', '--kind', 'darboux', '--amplitude', '1.5', '--out', motion]) == 0
        document = json.loads(_read(motion))
        assert document['kind'] == 'darboux' and document['poly'] is not None

        assert main(['motion', '--kind', 'helical', '--out', os.path.join(folder, 'h.json')]) == 2

        points = os.path.join(folder, 'points.csv')
        assert main(['sample', '--input', motion, '--point', '1,0,0', '--out', points]) == 0
        with open(points, 'r', encoding='utf-8') as file:
            rows = list(csv.reader(file))
        assert rows[0] == ['t', 'y0', 'y1', 'y2', 'y3']
        assert len(rows) == 42
    print("[PASS] motion document and 41 trajectory samples")


def test_factor_and_linkage():
    print("[TEST 2] factor and linkage...")
    with tempfile.TemporaryDirectory() as folder:
        source = _write(folder, 'example.json', EXAMPLE.to_json())
        factors = os.path.join(folder, 'factors.json')
        assert main(['factor', '--input', source, '--v3', repr(1 / R3), '--out', factors]) == 0
        document = json.loads(_read(factors))
        assert document['case'] == 'B_irreducible_quadratic'
        assert len(document['factorizations']) == 2

        linkage = os.path.join(folder, 'linkage.json')
        assert main(['linkage', '--first', factors, '--second', factors,
                     '--second-index', '1', '--out', linkage]) == 0
        document = json.loads(_read(linkage))
        assert document['types'] == 'RCRC' and document['dof_cgk'] == 0

        assert main(['linkage', '--first', factors, '--second', factors,
                     '--second-index', '5', '--out', linkage]) == 2
    print("[PASS] two factorizations and an RCRC linkage")


def test_factor_failures():
    print("[TEST 3] factor failures...")
    with tempfile.TemporaryDirectory() as folder:
        broken = CASE_A + MotionPoly.constant(DualQuaternion(Quaternion(), Quaternion(0.5)))
        source = _write(folder, 'broken.json', broken.to_json())
        out = os.path.join(folder, 'out.json')
        assert main(['factor', '--input', source, '--out', out]) == 3
        assert not os.path.exists(out), "failed commands leave no output"
        assert main(['factor', '--input', '{"coeffs": [', '--out', out]) == 2
        assert main(['factor', '--input', os.path.join(folder, 'missing.json'), '--out', out]) == 2
    print("[PASS] exit code 3 for no factorization, 2 for bad input")


def test_fit():
    print("[TEST 4] fit...")
    with tempfile.TemporaryDirectory() as folder:
        circle = _circle_conic(0.7)
        poses = [_write(folder, f'c{i}.json', pose.to_json())
                 for i, pose in enumerate((circle(0.0), circle(1.0), circle(math.inf)))]
        out = os.path.join(folder, 'nullcone.json')
        assert main(['fit', 'nullcone', '--points', *poses, '--out', out]) == 0
        document = json.loads(_read(out))
        assert document['method'] == 'nullcone' and document['solutions']
        assert all(s['square_defect'] < 1e-6 for s in document['solutions'])

        poses = [_write(folder, f'b{i}.json', BENNETT(t).to_json())
                 for i, t in enumerate((-1.0, 0.5, 2.0))]
        out = os.path.join(folder, 'bennett.json')
        assert main(['fit', 'bennett', '--points', *poses, '--out', out]) == 0
        solution = json.loads(_read(out))['solutions'][0]
        scale = max(abs(v) for c in solution['poly']['coeffs'] for v in c['primal'])
        assert solution['dual_norm'] < 1e-8 * max(1.0, scale) ** 2
    print("[PASS] null cone and Bennett fits")


def test_develop():
    print("[TEST 5] develop...")
    with tempfile.TemporaryDirectory() as folder:
        outputs = []
        for name in ('first', 'second'):
            svg = os.path.join(folder, f'{name}.svg')
            table = os.path.join(folder, f'{name}.csv')
            assert main(['develop', '--kind', 'darboux', '--amplitude', '1.2', '--osculate', '0.5',
                         '--samples', '30', '--csv', table, '--out', svg]) == 0
            outputs.append((_read(svg), _read(table)))
        assert outputs[0] == outputs[1], "developments are reproducible"
        assert '<svg' in outputs[0][0]
        assert outputs[0][1].splitlines()[0] == 'u,z,slope,curvature'
        assert len(outputs[0][1].splitlines()) == 31
    print("[PASS] identical SVG and CSV on repeated runs")


def test_parser():
    print("[TEST 6] argument parsing...")
    try:
        build_parser().parse_args(['factor', '--bogus'])
    except SystemExit as exc:
        assert exc.code == 2
    else:
        raise AssertionError("unknown flags are rejected")
    try:
        build_parser().parse_args([])
    except SystemExit as exc:
        assert exc.code == 2
        print("[PASS] usage errors exit with 2")
    else:
        raise AssertionError("a subcommand is required")


def test_tolerance_flag_is_local():
    print("[TEST 7] --tolerance stays local to one run...")
    previous = os.environ.pop(TOLERANCE_ENV, None)
    try:
        with tempfile.TemporaryDirectory() as folder:
            out = os.path.join(folder, 'darboux.json')
            command = ['motion', '--kind', 'darboux', '--amplitude', '1.5', '--out', out]
            assert main(['--tolerance', '1e-6', *command]) == 0
            assert TOLERANCE_ENV not in os.environ
            assert get_tolerance() == Settings().tolerance
            assert main(['--tolerance', '-1', *command]) == 2
            assert get_settings() == Settings()
    finally:
        if previous is not None:
            os.environ[TOLERANCE_ENV] = previous
    print("[PASS] environment and settings untouched after the run")


if __name__ == '__main__':
    test_motion_and_sample()
    test_factor_and_linkage()
    test_factor_failures()
    test_fit()
    test_develop()
    test_parser()
    test_tolerance_flag_is_local()
    print("[SUCCESS] All tests passed!")
    sys.exit(0)

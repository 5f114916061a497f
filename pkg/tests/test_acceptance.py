"""Exit criteria for the package, one test per criterion.

Each test records a one-line PASS/FAIL summary; the lines are printed at the
end of the pytest run (see ``conftest.py``) or by running this file directly.
"""

import itertools
import json
import time
from pathlib import Path

import numpy as np
import pytest

from conftest import euclidean_space
from ghspace import (
    Correspondence,
    Relation,
    diameter,
    distortion,
    enumerate_correspondences,
    gh_exact,
    hausdorff,
    hausdorff_between_parts,
    is_isometric,
    relation_distance,
    validate_metric,
    validate_pseudometric,
)
from ghspace.cli import main
from ghspace.correspondence import oracle_min_distortion
from ghspace.formats import parse_correspondence, parse_realization, parse_space
from ghspace.geodesic import check_geodesic, make_geodesic, sample
from ghspace.metric_core import MetricError
from ghspace.realization import glue, realize, verify_realization

FIXTURES = Path(__file__).parent / "fixtures"
RESULTS: list[str] = []


def record(number, title, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title} ({detail})"
    RESULTS.append(line)
    print(line)
    assert ok, line


def random_correspondence(rng, X, Y):
    cells = [(i, j) for i in range(X.n) for j in range(Y.n)]
    while True:
        keep = rng.random(len(cells)) < rng.uniform(0.1, 1.0)
        pairs = [c for c, k in zip(cells, keep) if k]
        if {i for i, _ in pairs} == set(range(X.n)) and {j for _, j in pairs} == set(range(Y.n)):
            return Correspondence(X, Y, pairs)


def random_relation(rng, X, Y):
    cells = [(i, j) for i in range(X.n) for j in range(Y.n)]
    k = int(rng.integers(1, len(cells) + 1))
    return Relation(X, Y, [cells[c] for c in rng.choice(len(cells), size=k, replace=False)])


def test_1_oracle_equivalence():
    rng = np.random.default_rng(1)
    start = time.perf_counter()
    worst = 0.0
    for _ in range(200):
        n, m = (int(v) for v in rng.integers(1, 5, size=2))
        X, Y = euclidean_space(rng, n), euclidean_space(rng, m)
        r = gh_exact(X, Y)
        brute, _ = oracle_min_distortion(X, Y)
        worst = max(worst, abs(r.value - brute / 2) if r.exact else np.inf)
    elapsed = time.perf_counter() - start
    record(1, "gh_exact matches exhaustive enumeration", worst <= 1e-12 and elapsed < 30,
           f"200 pairs, max |diff| = {worst:.3g}, {elapsed:.1f}s")


def test_2_realization_theorem():
    rng = np.random.default_rng(2)
    start = time.perf_counter()
    worst, bad_embed = 0.0, 0
    for _ in range(100):
        n, m = (int(v) for v in rng.integers(1, 7, size=2))
        X, Y = euclidean_space(rng, n), euclidean_space(rng, m)
        r = realize(X, Y)
        value = gh_exact(X, Y).value
        ex, ey = np.asarray(r.embed_X), np.asarray(r.embed_Y)
        if not (np.array_equal(r.Z.dist[np.ix_(ex, ex)], X.dist)
                and np.array_equal(r.Z.dist[np.ix_(ey, ey)], Y.dist)):
            bad_embed += 1
        worst = max(worst, abs(r.achieved - value), abs(hausdorff(r.Z, ex, ey) - value))
    elapsed = time.perf_counter() - start
    record(2, "realization attains d_GH", worst <= 1e-12 and bad_embed == 0 and elapsed < 60,
           f"100 pairs, max |diff| = {worst:.3g}, embedding failures = {bad_embed}, {elapsed:.1f}s")


def test_3_gluing_theorem():
    rng = np.random.default_rng(3)
    start = time.perf_counter()
    worst, invalid = 0.0, 0
    for _ in range(500):
        n, m = (int(v) for v in rng.integers(1, 6, size=2))
        X, Y = euclidean_space(rng, n), euclidean_space(rng, m)
        R = random_correspondence(rng, X, Y)
        g = glue(X, Y, R)
        try:
            validate_pseudometric(g.space.dist)
        except MetricError:
            invalid += 1
        worst = max(worst, abs(hausdorff_between_parts(g.space, g.part_X, g.part_Y) - distortion(R) / 2))
    elapsed = time.perf_counter() - start
    record(3, "gluing along R sits at half its distortion",
           worst <= 1e-12 and invalid == 0 and elapsed < 30,
           f"500 triples, max |diff| = {worst:.3g}, invalid = {invalid}, {elapsed:.1f}s")


def _geodesic_curves():
    rng = np.random.default_rng(4)
    curves = []
    while len(curves) < 30:
        n, m = (int(v) for v in rng.integers(1, 6, size=2))
        c = make_geodesic(euclidean_space(rng, n), euclidean_space(rng, m))
        if len(c.R) <= 6:
            curves.append(c)
    return curves


@pytest.fixture(scope="module")
def curves():
    return _geodesic_curves()


def test_4_geodesic_theorem(curves):
    start = time.perf_counter()
    worst = max(check_geodesic(c, [0, 0.25, 0.5, 0.75, 1]).max_deviation for c in curves)
    elapsed = time.perf_counter() - start
    record(4, "sampled curves are geodesics", worst < 1e-9 and elapsed < 120,
           f"30 curves, max deviation = {worst:.3g}, {elapsed:.1f}s")


def test_5_endpoint_identity(curves):
    failures = sum(
        not (is_isometric(sample(c, 0), c.X) and is_isometric(sample(c, 1), c.Y)) for c in curves
    )
    record(5, "curve endpoints are isometric to X and Y", failures == 0,
           f"{len(curves)} curves, failures = {failures}")


def _near_copy(rng, X):
    while True:
        i, j = sorted(rng.choice(X.n, size=2, replace=False))
        d = np.array(X.dist)
        d[i, j] += 1e-3
        d[j, i] += 1e-3
        try:
            return validate_metric(d)
        except MetricError:
            continue


def test_6_metric_axioms():
    rng = np.random.default_rng(6)
    dh_bad = 0
    for _ in range(1000):
        S = euclidean_space(rng, int(rng.integers(1, 9)))
        A, B, C = (rng.choice(S.n, size=int(rng.integers(1, S.n + 1)), replace=False) for _ in range(3))
        if hausdorff(S, A, C) > hausdorff(S, A, B) + hausdorff(S, B, C) + 1e-9:
            dh_bad += 1
    sym_bad = tri_bad = 0
    for _ in range(100):
        X, Y, Z = (euclidean_space(rng, int(rng.integers(1, 6))) for _ in range(3))
        xy, yx = gh_exact(X, Y).value, gh_exact(Y, X).value
        xz, yz = gh_exact(X, Z).value, gh_exact(Y, Z).value
        sym_bad += abs(xy - yx) > 1e-9
        tri_bad += xz > xy + yz + 1e-9
    iff_bad = 0
    near_min = np.inf
    for _ in range(40):
        X = euclidean_space(rng, int(rng.integers(2, 6)))
        perm = rng.permutation(X.n)
        copy = validate_metric(X.dist[np.ix_(perm, perm)])
        near = _near_copy(rng, X)
        for Y in (X, copy, near):
            value = gh_exact(X, Y).value
            iff_bad += (value == 0) != is_isometric(X, Y)
        near_value = gh_exact(X, near).value
        near_min = min(near_min, near_value)
        iff_bad += near_value < 5e-4 - 1e-9
    ok = dh_bad == tri_bad == sym_bad == iff_bad == 0
    record(6, "metric axioms for d_H and d_GH", ok,
           f"d_H triangle failures = {dh_bad}/1000, GH symmetry failures = {sym_bad}/100,"
           f" GH triangle failures = {tri_bad}/100, zero-iff-isometric failures = {iff_bad},"
           f" smallest near-copy distance = {near_min:.6g}")


def test_7_distortion_continuity():
    rng = np.random.default_rng(7)
    violations = 0
    for _ in range(1000):
        X = euclidean_space(rng, int(rng.integers(1, 6)))
        Y = euclidean_space(rng, int(rng.integers(1, 6)))
        s, t = random_relation(rng, X, Y), random_relation(rng, X, Y)
        violations += abs(distortion(s) - distortion(t)) > 4 * relation_distance(s, t) + 1e-12
    record(7, "distortion is 4-Lipschitz in the relation distance", violations == 0,
           f"1000 relation pairs, violations = {violations}")


def test_8_forced_values():
    rng = np.random.default_rng(8)
    point = validate_metric([[0]])
    point_bad = sum(
        gh_exact(point, X).value != diameter(X) / 2
        for X in (euclidean_space(rng, int(rng.integers(1, 9))) for _ in range(50))
    )
    two = gh_exact(validate_metric([[0, 2], [2, 0]]), validate_metric([[0, 5], [5, 0]])).value
    count = sum(1 for _ in enumerate_correspondences(2, 2))
    ok = point_bad == 0 and two == 1.5 and count == 7
    record(8, "forced values", ok,
           f"point-vs-X failures = {point_bad}/50, 2-vs-5 = {two!r}, |R(2,2)| = {count}")


def _run_cli(capsys, argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_9_cli_round_trip(capsys, tmp_path):
    cases = sorted(FIXTURES.glob("case*_x.json"))
    problems = []
    for fx in cases:
        fy = fx.with_name(fx.name.replace("_x", "_y"))
        X = parse_space(json.loads(fx.read_text()))
        Y = parse_space(json.loads(fy.read_text()))
        outputs = {}
        for cmd in ("gh", "realize", "geodesic"):
            extra = ["--ts", "0,0.25,0.5,0.75,1"] if cmd == "geodesic" else []
            runs = [_run_cli(capsys, [cmd, fx, fy, *extra]) for _ in range(2)]
            if any(code != 0 for code, _, _ in runs):
                problems.append(f"{fx.name} {cmd}: nonzero exit")
                continue
            if runs[0][1] != runs[1][1]:
                problems.append(f"{fx.name} {cmd}: output differs between runs")
            outputs[cmd] = json.loads(runs[0][1])

        gh = outputs["gh"]
        witness = parse_correspondence(gh["witness"], X, Y)
        if not gh["exact"] or distortion(witness) / 2 != gh["value"]:
            problems.append(f"{fx.name} gh: witness does not certify value")

        r = parse_realization(outputs["realize"], X, Y)
        report = verify_realization(r, X, Y)
        if not report.ok or r.achieved != gh["value"]:
            problems.append(f"{fx.name} realize: {report.violations}")

        geo = outputs["geodesic"]
        curve = make_geodesic(X, Y, witness=parse_correspondence(geo["witness"], X, Y))
        for s in geo["samples"]:
            space = parse_space(s)
            if not np.array_equal(space.dist, sample(curve, s["t"]).dist):
                problems.append(f"{fx.name} geodesic: sample at t={s['t']} does not round-trip")
        if not (is_isometric(parse_space(geo["samples"][0]), X)
                and is_isometric(parse_space(geo["samples"][-1]), Y)):
            problems.append(f"{fx.name} geodesic: endpoints not isometric to inputs")

        out_dir = tmp_path / fx.stem
        if _run_cli(capsys, ["geodesic", fx, fy, "--steps", "4", "-o", out_dir])[0] != 0:
            problems.append(f"{fx.name} geodesic -o: nonzero exit")
        else:
            manifest = json.loads((out_dir / "manifest.json").read_text())
            for s in manifest["samples"]:
                parse_space(json.loads((out_dir / s["file"]).read_text()))
    ok = len(cases) == 10 and not problems
    record(9, "CLI output re-parses, re-validates, re-verifies and is deterministic", ok,
           f"{len(cases)} fixture pairs, problems = {problems or 0}")


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))

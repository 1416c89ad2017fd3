"""Acceptance gate: one test per criterion, at the stated tolerances.

Each test prints a single PASS line when its assertions hold (run with -s to
see them); the test name carries the criterion number.
"""

import math
import statistics
import time

import numpy as np
import pytest

from bsf.bezier import BezierSimplex, embed_on_face, face_indices, multi_indices
from bsf.cli import main as cli_main
from bsf.fitting import (
    FitConfig,
    fit_all_at_once,
    fit_inductive_skeleton,
    initialize_control_net,
    project_parameter,
    sse,
)
from bsf.harness import ExperimentConfig, run_experiment, run_sweep, summarize
from bsf.metrics import gd, igd
from bsf.pareto import SampleSet, enumerate_faces

TIGHT = FitConfig(degree=3, newton_tol=1e-10, outer_tol=1e-10)


def _report(number, text):
    print(f"ACCEPTANCE {number}: PASS - {text}")


def _random_model(rng, m, degree, ambient):
    n = len(multi_indices(m, degree))
    return BezierSimplex(m, degree, rng.uniform(-2.0, 2.0, size=(n, ambient)))


def _naive_evaluate(model, t):
    out = np.zeros(model.ambient)
    for d, p in zip(model.indices, model.points):
        w = math.factorial(model.degree)
        for di in d:
            w //= math.factorial(di)
        mono = 1.0
        for tv, di in zip(t, d):
            mono *= float(tv) ** di
        out += w * mono * p
    return out


def _naive_gradient(model, t):
    out = np.zeros((model.ambient, model.m))
    for d, p in zip(model.indices, model.points):
        w = math.factorial(model.degree)
        for di in d:
            w //= math.factorial(di)
        for j in range(model.m):
            if d[j] == 0:
                continue
            mono = 1.0
            for k in range(model.m):
                mono *= float(t[k]) ** (d[k] - (1 if k == j else 0))
            out[:, j] += w * d[j] * mono * p
    return out


def _perturbed_net(m, degree, vertices, scale, seed):
    rng = np.random.default_rng(seed)
    net = initialize_control_net(vertices, degree)
    pts = net.points + rng.normal(scale=scale, size=net.points.shape)
    for j, d in enumerate(net.indices):
        if max(d) == degree:
            pts[j] = net.points[j]
    return BezierSimplex(m, degree, pts)


# -- criterion 1 ---------------------------------------------------------------


def test_criterion_1_combinatorics():
    assert len(multi_indices(5, 3)) == 35
    assert len(multi_indices(2, 3)) == 4
    _, interior_edge = face_indices(3, 3, (0, 1))
    _, interior_face = face_indices(3, 3, (0, 1, 2))
    assert len(interior_edge) == 2
    assert len(interior_face) == 1
    _report(1, "index counts 35/4 and interior counts 2/1")


# -- criterion 2 ---------------------------------------------------------------


def test_criterion_2_face_consistency():
    start = time.perf_counter()
    rng = np.random.default_rng(2)
    checks = 0
    while checks < 50:
        m = int(rng.integers(2, 6))
        degree = int(rng.integers(1, 5))
        model = _random_model(rng, m, degree, int(rng.integers(1, 6)))
        size = int(rng.integers(1, m + 1))
        face = tuple(sorted(rng.choice(m, size=size, replace=False).tolist()))
        sub = model.restrict(face)
        s = rng.dirichlet(np.ones(size))
        lhs = model.evaluate(embed_on_face(s, face, m))
        assert np.max(np.abs(lhs - sub.evaluate(s))) <= 1e-12
        checks += 1
    elapsed = time.perf_counter() - start
    assert elapsed < 1.0
    _report(2, f"50 restriction identities to 1e-12 in {elapsed:.2f}s")


# -- criterion 3 ---------------------------------------------------------------


def test_criterion_3_derivatives_vs_finite_differences():
    start = time.perf_counter()
    rng = np.random.default_rng(3)
    for _ in range(100):
        m = int(rng.integers(2, 5))
        degree = int(rng.integers(1, 5))
        model = _random_model(rng, m, degree, int(rng.integers(1, 5)))
        t = rng.dirichlet(np.ones(m)) * 0.9 + 0.1 / m
        t = t / t.sum()
        h = 1e-6
        fd_g = np.empty((model.ambient, m))
        for j in range(m):
            tp, tm = t.copy(), t.copy()
            tp[j] += h
            tm[j] -= h
            fd_g[:, j] = (_naive_evaluate(model, tp) - _naive_evaluate(model, tm)) / (2 * h)
        g = model.gradient(t)
        assert np.linalg.norm(g - fd_g) / max(np.linalg.norm(g), 1.0) <= 1e-5
        h = 1e-5
        fd_h = np.empty((model.ambient, m, m))
        for j in range(m):
            tp, tm = t.copy(), t.copy()
            tp[j] += h
            tm[j] -= h
            fd_h[:, :, j] = (_naive_gradient(model, tp) - _naive_gradient(model, tm)) / (2 * h)
        hess = model.hessian(t)
        assert np.linalg.norm((hess - fd_h).ravel()) / max(np.linalg.norm(hess.ravel()), 1.0) <= 1e-4
    elapsed = time.perf_counter() - start
    assert elapsed < 5.0
    _report(3, f"100 gradient/hessian FD checks in {elapsed:.2f}s")


# -- criterion 4 ---------------------------------------------------------------


def test_criterion_4_round_trip_recovery():
    start = time.perf_counter()
    V = np.eye(3) * 2.0
    true = _perturbed_net(3, 3, V, 0.1, seed=4)
    rng = np.random.default_rng(4)

    # all-at-once, sample count = control point count (the same regime the
    # (1,2,1) training scheme produces for three objectives)
    T = rng.dirichlet(np.ones(3), size=10)
    X = true.evaluate_batch(T)
    res_once = fit_all_at_once(SampleSet(X), V, TIGHT)
    T_fresh = np.vstack(
        [project_parameter(res_once.model, x, np.full(3, 1 / 3), TIGHT) for x in X]
    )
    once = math.sqrt(sse(res_once.model, X, T_fresh)) / X.shape[0]
    assert once <= 1e-6

    # inductive skeleton on exact per-face data
    training = {}
    for face in enumerate_faces(3, 3):
        k = len(face)
        if k == 1:
            corner = tuple(3 if i == face[0] else 0 for i in range(3))
            pts = true.points[[true.index_row(corner)]]
        else:
            s = rng.dirichlet(np.ones(k), size=2 if k == 2 else 1)
            pts = true.evaluate_batch(embed_on_face(s, face, 3))
        training[face] = SampleSet(pts)
    res_skel = fit_inductive_skeleton(training, V, TIGHT)
    all_X = np.vstack([S.objectives for S in training.values()])
    T_fresh = np.vstack(
        [project_parameter(res_skel.model, x, np.full(3, 1 / 3), TIGHT) for x in all_X]
    )
    skel = math.sqrt(sse(res_skel.model, all_X, T_fresh)) / all_X.shape[0]
    assert skel <= 1e-6

    elapsed = time.perf_counter() - start
    assert elapsed < 10.0
    _report(4, f"sqrt(SSR)/N = {once:.1e} (all-at-once), {skel:.1e} (skeleton) in {elapsed:.1f}s")


# -- criterion 5 ---------------------------------------------------------------


def test_criterion_5_gd_igd_oracle_equality():
    start = time.perf_counter()
    assert gd(np.array([[0.0, 0.0]]), np.array([[3.0, 4.0]])) == 5.0
    rng = np.random.default_rng(5)
    for _ in range(100):
        m = int(rng.integers(2, 6))
        X = rng.normal(size=(int(rng.integers(1, 50)), m))
        Y = rng.normal(size=(int(rng.integers(1, 50)), m))
        mins_x = [min(float(np.sqrt(np.sum((x - y) ** 2))) for y in Y) for x in X]
        mins_y = [min(float(np.sqrt(np.sum((x - y) ** 2))) for x in X) for y in Y]
        assert gd(X, Y) == sum(mins_x) / len(mins_x)
        assert igd(X, Y) == sum(mins_y) / len(mins_y)
    elapsed = time.perf_counter() - start
    assert elapsed < 5.0
    _report(5, f"100 exact brute-force matches in {elapsed:.2f}s")


# -- criteria 6 and 10 ------------------------------------------------------------


@pytest.fixture(scope="module")
def med3_experiment():
    cfg = ExperimentConfig(
        "med3",
        ("inductive", "all-at-once", "response-surface"),
        sizes=(1, 2, 1),
        trials=20,
        seed=0,
        validation_size=1000,
    )
    start = time.perf_counter()
    rows = run_experiment(cfg)
    elapsed = time.perf_counter() - start
    return summarize(rows), elapsed


def test_criterion_6_three_med_table_style(med3_experiment):
    summary, elapsed = med3_experiment
    inductive = summary["inductive"]
    all_at_once = summary["all-at-once"]
    assert inductive["failures"] == 0 and all_at_once["failures"] == 0
    assert inductive["gd_mean"] < all_at_once["gd_mean"]
    assert 2e-2 <= inductive["igd_mean"] <= 2e-1
    assert inductive["iterations_mean"] <= 5.0
    assert elapsed < 120.0
    _report(
        6,
        f"GD {inductive['gd_mean']:.2e} < {all_at_once['gd_mean']:.2e}, "
        f"IGD {inductive['igd_mean']:.2e} in band, "
        f"{inductive['iterations_mean']:.2f} iterations, {elapsed:.0f}s",
    )


def test_criterion_10_response_surface_has_worse_gd(med3_experiment):
    summary, _ = med3_experiment
    surface = summary["response-surface"]
    inductive = summary["inductive"]
    assert surface["failures"] == 0
    assert surface["gd_mean"] > inductive["gd_mean"]
    _report(
        10,
        f"response surface GD {surface['gd_mean']:.2e} > inductive {inductive['gd_mean']:.2e}",
    )


# -- criterion 7 ---------------------------------------------------------------


def test_criterion_7_two_objective_parity():
    start = time.perf_counter()
    reports = []
    for problem in ("schaffer", "osyczka2"):
        cfg = ExperimentConfig(
            problem,
            ("inductive", "all-at-once"),
            sizes=(1, 3),
            trials=20,
            seed=0,
            validation_size=1000,
        )
        summary = summarize(run_experiment(cfg))
        for metric in ("gd_mean", "igd_mean"):
            a = summary["inductive"][metric]
            b = summary["all-at-once"][metric]
            assert abs(a - b) / max(a, b) <= 0.05, (problem, metric, a, b)
        if problem == "schaffer":
            schaffer_igd = summary["inductive"]["igd_mean"]
            assert 2.49e-2 / 2 <= schaffer_igd <= 2.49e-2 * 2
        reports.append(f"{problem} parity ok")
    elapsed = time.perf_counter() - start
    assert elapsed < 30.0
    _report(7, f"{'; '.join(reports)}; schaffer IGD {schaffer_igd:.3e} in factor-2 band; {elapsed:.0f}s")


# -- criterion 8 ---------------------------------------------------------------


def test_criterion_8_sample_size_plateau():
    start = time.perf_counter()
    cfg = ExperimentConfig(
        "med5",
        ("inductive",),
        sizes=(1, 2, 1),
        trials=10,
        seed=1,
        validation_size=1000,
    )
    rows = run_sweep(cfg, range(1, 11))
    medians = {}
    for n3 in range(1, 11):
        values = [r.igd for r in rows if r.sizes[2] == n3 and r.error is None]
        assert len(values) == 10
        medians[n3] = statistics.median(values)
    gap = abs(medians[4] - medians[10]) / medians[10]
    assert gap <= 0.25, medians
    elapsed = time.perf_counter() - start
    assert elapsed < 600.0
    _report(
        8,
        f"median IGD {medians[4]:.3e} (N3=4) vs {medians[10]:.3e} (N3=10), gap {gap:.0%}, {elapsed:.0f}s",
    )


# -- criterion 9 ---------------------------------------------------------------


def test_criterion_9_graph_approximation():
    start = time.perf_counter()
    cfg = ExperimentConfig(
        "med5",
        ("inductive",),
        sizes=(1, 2, 1),
        trials=10,
        seed=0,
        validation_size=1000,
        graph=True,
    )
    summary = summarize(run_experiment(cfg))["inductive"]
    assert summary["failures"] == 0
    assert 5e-2 <= summary["gd_mean"] <= 1.0
    assert 5e-2 <= summary["igd_mean"] <= 1.0
    elapsed = time.perf_counter() - start
    assert elapsed < 300.0
    _report(
        9,
        f"graph GD {summary['gd_mean']:.2e}, IGD {summary['igd_mean']:.2e} in [5e-2, 1e0], {elapsed:.0f}s",
    )


# -- criterion 11 ----------------------------------------------------------------


def test_criterion_11_end_to_end_determinism(tmp_path):
    outputs = []
    for name in ("run1", "run2"):
        base = tmp_path / name
        data = base / "data"
        assert cli_main([
            "generate", "--problem", "med3", "--sizes", "1,2,1", "--seed", "9",
            "--validation", "60", "--out", str(data),
        ]) == 0
        model = base / "model.json"
        assert cli_main([
            "fit", "--method", "inductive", "--data", str(data), "--out", str(model),
        ]) == 0
        exp = base / "exp"
        assert cli_main([
            "experiment", "--problem", "med3", "--method", "inductive",
            "--sizes", "1,2,1", "--trials", "3", "--seed", "9",
            "--validation", "60", "--out", str(exp),
        ]) == 0
        payload = {}
        for path in sorted(base.rglob("*")):
            if path.is_file():
                payload[str(path.relative_to(base))] = path.read_bytes()
        outputs.append(payload)
    assert outputs[0] == outputs[1]
    _report(11, f"{len(outputs[0])} files byte-identical across two seeded runs")

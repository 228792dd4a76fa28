"""End-to-end acceptance battery.

Each test covers one numbered criterion and prints a single
`[criterion NN] PASS/FAIL` line (visible under `pytest -s` or in the
captured output of a failing run).
"""

import math
import pathlib
import time

import numpy as np

from fgeom.ambient import (
    Chart,
    MetricField,
    check_f_structure,
    check_fundamental_form,
    check_identities,
    check_kenmotsu,
    check_kenmotsu_fails,
    check_nearly_kenmotsu,
    check_normal,
    flat_control_structure,
    kenmotsu_f_model,
    sectional_curvature,
    sphere_metric,
)
from fgeom.battery import (
    reproduce_paper,
    suite_cone_example,
    suite_surface_example,
)
from fgeom.subgeom import check_submanifold_identities, check_slant_relations
from fgeom.warpineq import (
    check_bound_perp_fiber,
    check_bound_slant_fiber,
    check_lemma_warped_connection,
    check_mixed_identities_perp_base,
    check_mixed_identities_slant_base,
    check_reductions,
    check_structure_derivative,
    pseudo_slant_config,
    random_warped_product,
    slant_submanifold,
)

GOLDEN = pathlib.Path(__file__).resolve().parent / "golden"


def _emit(num, desc, body):
    try:
        body()
    except BaseException:
        print(f"[criterion {num:02d}] FAIL: {desc}")
        raise
    print(f"[criterion {num:02d}] PASS: {desc}")


def _all_pass(records):
    for rec in records:
        if rec.kind != "info":
            assert rec.passed, f"{rec.name}: value {rec.value:.3e} > tol {rec.tolerance}"


def test_criterion_01_ambient_axioms_and_runtime():
    def body():
        start = time.perf_counter()
        structure = kenmotsu_f_model(6, 2, name="example-1")
        rng = np.random.default_rng(101)
        points = structure.sample(rng, 100)
        _all_pass(check_f_structure(structure, points, tol=1e-9))
        assert check_normal(structure, points, tol=1e-8).passed
        assert check_fundamental_form(structure, points, tol=1e-8).passed
        elapsed = time.perf_counter() - start
        assert elapsed < 10.0, f"took {elapsed:.1f}s"

    _emit(1, "structure axioms, normality and d(Phi) on the big model", body)


def test_criterion_02_kenmotsu_condition_with_control():
    def body():
        model = kenmotsu_f_model(3, 1)
        rng = np.random.default_rng(102)
        assert check_kenmotsu(model, model.sample(rng, 50), tol=1e-8).passed
        big = kenmotsu_f_model(6, 2)
        _all_pass(check_nearly_kenmotsu(big, big.sample(rng, 50), tol=1e-8))
        control = flat_control_structure(3, 1)
        gate = check_kenmotsu_fails(control, control.sample(rng, 50))
        assert gate.passed, "flat control was not rejected"

    _emit(2, "covariant structure condition holds on the model, fails on flat control", body)


def test_criterion_03_curvature_identities_and_sphere_oracle():
    def body():
        model = kenmotsu_f_model(3, 1)
        rng = np.random.default_rng(103)
        _all_pass(check_identities(model, model.sample(rng, 50), tol=1e-7))
        sphere = sphere_metric(1.0)
        for p in sphere.chart.sample(rng, 25):
            assert abs(sectional_curvature(sphere, p) - 1.0) < 1e-6

    _emit(3, "curvature identities on the single-field model, unit-sphere oracle", body)


def test_criterion_04_example_slant_angles():
    def body():
        rng = np.random.default_rng(104)
        cone = {r.name: r for r in suite_cone_example(20, rng, 1e-9, 1e-7)}
        assert cone["cone frame slant angle"].passed
        assert cone["cone frame slant constancy"].passed
        assert cone["cone third frame field anti-invariance"].passed
        surface = {r.name: r for r in suite_surface_example(20, rng, 1e-9, 1e-7)}
        assert surface["surface frame slant angle"].passed
        assert surface["surface frame slant constancy"].passed
        # the third field is anti-invariant within its own distribution; its
        # pairing with the rest of the frame is surfaced as an info record
        assert surface["surface third frame field self-orthogonality"].passed
        flagged = surface["surface third frame field against the full tangent space"]
        assert flagged.kind == "info" and flagged.value > 0.1

    _emit(4, "slant angles 1/3, sqrt(10)/20 and the pi/2 distributions", body)


def test_criterion_05_example_induced_metrics():
    def body():
        rng = np.random.default_rng(105)
        cone = {r.name: r for r in suite_cone_example(20, rng, 1e-9, 1e-7)}
        rec = cone["cone induced metric"]
        assert rec.passed and rec.value < 1e-9
        assert "u1^2 + u2^2" in rec.notes and "u2^2 + u3^2" in rec.notes
        surface = {r.name: r for r in suite_surface_example(20, rng, 1e-9, 1e-7)}
        assert surface["surface induced metric diagonal"].passed
        assert "4 v w" in surface["surface induced metric off-diagonal"].notes

    _emit(5, "induced metrics of both examples, with the coefficient discrepancy noted", body)


def test_criterion_06_submanifold_identities_synthesized():
    def body():
        cfg = pseudo_slant_config(theta=math.pi / 4, s=1)
        rng = np.random.default_rng(106)
        points = cfg.imm.sample(rng, 30)
        _all_pass(check_submanifold_identities(cfg.imm, points, tol=1e-6))
        slant = slant_submanifold(theta=math.pi / 3, s=1)
        _all_pass(
            check_slant_relations(slant, math.pi / 3, slant.sample(rng, 30), tol=1e-8)
        )

    _emit(6, "T/N/t/n identities and slant relations at 30 synthesized points", body)


def test_criterion_07_warped_connection_and_mixed_identities():
    def body():
        rng = np.random.default_rng(107)
        for _ in range(20):
            wp = random_warped_product(rng)
            _all_pass(check_lemma_warped_connection(wp, wp.chart().sample(rng, 3), tol=1e-7))
        cfg = pseudo_slant_config(theta=math.pi / 4, s=1)
        points = cfg.imm.sample(rng, 10)
        assert check_structure_derivative(cfg, points, tol=1e-9).passed
        _all_pass(check_mixed_identities_slant_base(cfg, points, tol=1e-6))
        _all_pass(check_mixed_identities_perp_base(cfg, points, tol=1e-6))

    _emit(7, "warped connection blocks and mixed second-fundamental-form identities", body)


def test_criterion_08_bounds_and_reductions():
    def body():
        cfg = pseudo_slant_config(theta=math.pi / 4, s=1)
        rng = np.random.default_rng(108)
        points = cfg.imm.sample(rng, 10)
        note_seen = False
        for checker in (check_bound_perp_fiber, check_bound_slant_fiber):
            records = checker(cfg, points, tol=1e-6)
            gaps = [r for r in records if r.kind == "gap"]
            assert gaps
            for rec in gaps:
                assert rec.passed and rec.value >= -1e-6
            note_seen |= any(
                "positive" in (r.notes or "") for r in records if r.kind == "info"
            )
        assert note_seen, "missing the non-positive right side record"
        _all_pass(check_reductions(tol=1e-12))

    _emit(8, "squared-norm lower bounds, dimension reductions, sign caveat recorded", body)


def test_criterion_09_reproduction_is_deterministic():
    def body():
        first = reproduce_paper(samples=8, seed=1).render()
        second = reproduce_paper(samples=8, seed=1).render()
        assert first == second
        golden = (GOLDEN / "reproduce-paper-s8-seed1.txt").read_text()
        assert first == golden

    _emit(9, "byte-identical reproduction report at samples=8, seed=1", body)


def test_criterion_10_christoffels_match_finite_differences():
    def body():
        rng = np.random.default_rng(110)
        chart = Chart("rand3", ("x", "y", "z"))
        coords = chart.coords
        step = 1e-4
        for _ in range(10):
            a = [float(x) for x in rng.uniform(0.05, 0.3, size=3)]
            b = [float(x) for x in rng.uniform(0.02, 0.1, size=3)]
            entries = [["0"] * 3 for _ in range(3)]
            for i in range(3):
                entries[i][i] = f"{2.0 + i} + {a[i]!r}*sin({coords[i]})"
            pairs = [(0, 1), (0, 2), (1, 2)]
            for k, (i, j) in enumerate(pairs):
                e = f"{b[k]!r}*{coords[i]}*{coords[j]}"
                entries[i][j] = entries[j][i] = e
            metric = MetricField(chart, [[c for c in row] for row in entries])
            for p in chart.sample(rng, 3):
                mp = metric.at(p)
                dg = np.zeros((3, 3, 3))
                for k in range(3):
                    up = np.array(p, dtype=float)
                    dn = np.array(p, dtype=float)
                    up[k] += step
                    dn[k] -= step
                    dg[k] = (metric.value(up) - metric.value(dn)) / (2 * step)
                # dg[k, i, j] holds d_k g_ij; assemble d_i g_jl + d_j g_il - d_l g_ij
                sym = dg + np.swapaxes(dg, 0, 1) - np.moveaxis(dg, 0, 2)
                gamma_fd = 0.5 * np.einsum("kl,ijl->kij", mp.ginv, sym)
                scale = 1.0 + np.max(np.abs(gamma_fd))
                assert np.max(np.abs(mp.gamma - gamma_fd)) / scale < 1e-5

    _emit(10, "exact Christoffel symbols agree with central finite differences", body)

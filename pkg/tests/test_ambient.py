import math

import numpy as np
import pytest

from fgeom.ambient import (
    Chart,
    FramedStructure,
    MetricField,
    builtin_structure,
    check_f_structure,
    check_fundamental_form,
    check_identities,
    check_kenmotsu,
    check_kenmotsu_fails,
    check_normal,
    flat_control_structure,
    kenmotsu_f_model,
    sectional_curvature,
    sphere_metric,
)
from fgeom.errors import ContractViolationError, DegeneracyError
from fgeom.exprlang import Const, parse


def test_flat_metric_has_vanishing_christoffels():
    chart = Chart("flat", ("x", "y", "z"))
    eye = [[Const(1.0 if i == j else 0.0) for j in range(3)] for i in range(3)]
    metric = MetricField(chart, eye)
    mp = metric.at([0.3, -0.2, 0.9])
    assert np.max(np.abs(mp.gamma)) == 0.0
    assert np.max(np.abs(mp.curvature().riemann)) == 0.0


def test_warped_model_christoffel_oracles():
    # g = exp(2z)(dx^2 + dy^2) + dz^2
    model = kenmotsu_f_model(1, 1)
    p = [0.4, -0.7, 0.5]
    gamma = model.metric.at(p).gamma
    idx = {c: i for i, c in enumerate(model.chart.coords)}
    x, y, z = idx["x1"], idx["y1"], idx["z1"]
    assert gamma[x, x, z] == pytest.approx(1.0, abs=1e-12)
    assert gamma[x, z, x] == pytest.approx(1.0, abs=1e-12)
    assert gamma[z, x, x] == pytest.approx(-math.exp(2 * 0.5), rel=1e-12)
    assert gamma[z, y, y] == pytest.approx(-math.exp(2 * 0.5), rel=1e-12)
    # torsion-free: symmetric in the argument slots
    assert np.allclose(gamma, np.swapaxes(gamma, 1, 2), atol=1e-14)


def test_polar_metric_christoffel_oracles():
    chart = Chart("polar", ("r", "t"), {"r": (0.5, 3.0)})
    metric = MetricField(chart, [[Const(1.0), Const(0.0)], [Const(0.0), parse("r^2")]])
    gamma = metric.at([2.0, 1.0]).gamma
    assert gamma[0, 1, 1] == pytest.approx(-2.0, abs=1e-12)
    assert gamma[1, 0, 1] == pytest.approx(0.5, abs=1e-12)
    # flat in disguise
    assert np.max(np.abs(metric.at([2.0, 1.0]).curvature().riemann)) < 1e-13


def test_degenerate_metric_raises():
    chart = Chart("bad", ("x", "y"))
    metric = MetricField(chart, [[parse("x"), Const(0.0)], [Const(0.0), Const(1.0)]])
    with pytest.raises(DegeneracyError):
        metric.at([-1.0, 0.0])


def test_sphere_sectional_curvature_scaling():
    for radius in (1.0, 2.0):
        metric = sphere_metric(radius)
        rng = np.random.default_rng(0)
        for p in metric.chart.sample(rng, 10):
            assert sectional_curvature(metric, p) == pytest.approx(
                1.0 / radius**2, abs=1e-9
            )


def test_model_satisfies_structure_axioms():
    model = kenmotsu_f_model(3, 2)
    rng = np.random.default_rng(1)
    points = model.sample(rng, 20)
    for record in check_f_structure(model, points):
        assert record.passed, record.name
    assert check_normal(model, points).passed
    assert check_fundamental_form(model, points).passed


def test_scaled_phi_breaks_cubic_axiom():
    model = kenmotsu_f_model(2, 1)
    scaled = [
        [parse(f"1.1*({e})") for e in map(str, row)] for row in model.phi
    ]
    bad = FramedStructure(
        model.chart, model.metric, scaled, model.xi, model.eta, name="scaled"
    )
    rng = np.random.default_rng(2)
    records = check_f_structure(bad, bad.sample(rng, 5))
    cubic = records[0]
    assert cubic.name == "f-structure cubic axiom"
    assert not cubic.passed
    assert cubic.value > 1e-2


def test_flat_control_fails_kenmotsu_condition():
    control = flat_control_structure(3, 1)
    rng = np.random.default_rng(3)
    points = control.sample(rng, 40)
    assert not check_kenmotsu(control, points).passed
    assert check_kenmotsu_fails(control, points).passed


def test_sheared_eta_breaks_normality():
    model = kenmotsu_f_model(1, 1)
    eta = [["0", "0.3*x1", "1"]]
    xi = [["0", "0", "1"]]
    sheared = FramedStructure(
        model.chart, model.metric, model.phi, xi, eta, name="sheared"
    )
    rng = np.random.default_rng(4)
    record = check_normal(sheared, sheared.sample(rng, 10))
    assert not record.passed
    assert record.value > 0.1


def test_identities_hold_on_single_field_model():
    model = kenmotsu_f_model(3, 1)
    rng = np.random.default_rng(5)
    for record in check_identities(model, model.sample(rng, 10)):
        if record.kind != "info":
            assert record.passed, record.name


def test_builtin_lookup():
    assert builtin_structure("example-1").s == 2
    assert builtin_structure("kenmotsu-f-model").s == 1
    with pytest.raises(ContractViolationError):
        builtin_structure("nope")

import math

import numpy as np
import pytest

from fgeom.ambient import Chart, FramedStructure, MetricField
from fgeom.errors import ContractViolationError, DegeneracyError
from fgeom.exprlang import Const, eval_value, parse
from fgeom.subgeom import (
    Immersion,
    check_slant_relations,
    check_submanifold_identities,
    example2_frame_fields,
    example2_immersion,
    example3_frame_fields,
    example3_immersion,
    frames,
    h_norm_squared,
    induced_metric,
    second_fundamental_form,
    shape_operator,
    slant_angle,
    structure_matrices,
    tn_decompose,
    umbilicity_defect,
)
from fgeom.warpineq import pseudo_slant_config, slant_submanifold


def flat_ambient(dim, name="flat"):
    """Structure-free carrier for Euclidean submanifold oracles."""
    chart = Chart(name, tuple(f"c{i}" for i in range(dim)))
    eye = [[Const(1.0 if i == j else 0.0) for j in range(dim)] for i in range(dim)]
    zero_phi = [[Const(0.0)] * dim for _ in range(dim)]
    return FramedStructure(chart, MetricField(chart, eye), zero_phi, [], [])


def test_circle_curvature_oracle():
    imm = Immersion(Chart("circle", ("t",)), flat_ambient(2), ["2*cos(t)", "2*sin(t)"])
    u = [0.9]
    pf = frames(imm, u)
    sff = second_fundamental_form(imm, u, pf)
    assert pf.g.norm(sff.h[0, 0]) == pytest.approx(0.5, abs=1e-12)
    assert h_norm_squared(sff) == pytest.approx(0.25, abs=1e-12)
    assert umbilicity_defect(sff) < 1e-12
    a, residual = shape_operator(imm, u, pf.normal[0])
    assert abs(a[0, 0]) == pytest.approx(0.5, abs=1e-12)
    assert residual < 1e-8


def test_plane_normal_frame():
    imm = Immersion(Chart("plane", ("u", "v")), flat_ambient(3), ["u", "v", "0"])
    pf = frames(imm, [0.2, -0.5])
    assert len(pf.normal) == 1
    assert np.allclose(np.abs(pf.normal[0]), [0.0, 0.0, 1.0], atol=1e-14)
    sff = second_fundamental_form(imm, [0.2, -0.5], pf)
    assert h_norm_squared(sff) < 1e-24


def test_paraboloid_second_fundamental_form_at_apex():
    imm = Immersion(
        Chart("parab", ("u", "v")), flat_ambient(3), ["u", "v", "u^2+v^2"]
    )
    u = [0.0, 0.0]
    sff = second_fundamental_form(imm, u)
    # h(e_a, e_b) = 2 delta_ab n at the apex
    assert np.allclose(sff.h[0, 0], [0.0, 0.0, 2.0], atol=1e-12)
    assert np.allclose(sff.h[1, 1], [0.0, 0.0, 2.0], atol=1e-12)
    assert np.allclose(sff.h[0, 1], 0.0, atol=1e-12)
    assert h_norm_squared(sff) == pytest.approx(8.0, abs=1e-10)
    assert umbilicity_defect(sff) < 1e-10


def test_degenerate_immersion_raises():
    imm = Immersion(Chart("cusp", ("t",)), flat_ambient(2), ["t^2", "0"])
    with pytest.raises(DegeneracyError):
        induced_metric(imm, [0.0])


def test_shape_operator_rejects_tangent_direction():
    imm = Immersion(Chart("plane", ("u", "v")), flat_ambient(3), ["u", "v", "0"])
    pf = frames(imm, [0.0, 0.0])
    with pytest.raises(ContractViolationError):
        shape_operator(imm, [0.0, 0.0], pf.tangent[0])


def test_cone_induced_metric_matches_jacobian():
    imm = example2_immersion()
    rng = np.random.default_rng(0)
    for u in imm.sample(rng, 10):
        G = induced_metric(imm, u).matrix
        expected = np.diag([u[1] ** 2 + u[2] ** 2, 3.0, 3.0, 1.0, 1.0])
        assert np.max(np.abs(G - expected)) < 1e-12


def test_surface_induced_metric_and_cross_term():
    imm = example3_immersion()
    u = [0.4, 0.8, 1.1, 0.6, -0.6]  # zero-warp slice
    G = induced_metric(imm, u).matrix
    v, w = u[1], u[2]
    assert np.allclose(
        np.diag(G), [w**4 + v**4, 8 * v**2, 8 * w**2, 1.0, 1.0], atol=1e-12
    )
    assert G[1, 2] == pytest.approx(4 * v * w, abs=1e-12)


def _eval_fields(fields, coords, u):
    bindings = dict(zip(coords, (float(x) for x in u)))
    return [np.array([eval_value(parse(c), bindings) for c in vec]) for vec in fields]


def test_cone_frame_slant_angles():
    imm = example2_immersion()
    structure = imm.ambient
    rng = np.random.default_rng(1)
    for u in imm.sample(rng, 5):
        amb = imm.point(u)
        w = _eval_fields(example2_frame_fields(), imm.chart.coords, u)
        for x in w[:2]:
            assert math.cos(slant_angle(structure, amb, w[:2], x)) == pytest.approx(
                1.0 / 3.0, abs=1e-12
            )
        assert slant_angle(structure, amb, w, w[2]) == pytest.approx(
            math.pi / 2, abs=1e-12
        )


def test_surface_frame_slant_angles():
    imm = example3_immersion()
    structure = imm.ambient
    rng = np.random.default_rng(2)
    for u in imm.sample(rng, 5):
        amb = imm.point(u)
        f = _eval_fields(example3_frame_fields(), imm.chart.coords, u)
        for x in f[:2]:
            assert math.cos(slant_angle(structure, amb, f[:2], x)) == pytest.approx(
                math.sqrt(10.0) / 20.0, abs=1e-12
            )
        assert slant_angle(structure, amb, [f[2]], f[2]) == pytest.approx(
            math.pi / 2, abs=1e-12
        )


def test_slant_angle_undefined_on_structure_direction():
    cfg = pseudo_slant_config(s=1)
    u = [0.1, 0.2, 0.3, 0.5]
    pf = frames(cfg.imm, u)
    xi = pf.jacobian @ cfg.xi_dom[0]
    with pytest.raises(ContractViolationError):
        slant_angle(cfg.imm.ambient, pf.ambient_point, [pf.tangent[0]], xi)


def test_structure_matrices_duality_and_pythagoras():
    imm = slant_submanifold(theta=1.1, s=1)
    rng = np.random.default_rng(3)
    for u in imm.sample(rng, 5):
        pf = frames(imm, u)
        sm = structure_matrices(imm.ambient, pf)
        # g(NX, V) = -g(X, tV)
        assert np.max(np.abs(sm.N + sm.t.T)) < 1e-12
        for x in pf.tangent:
            tx, nx = tn_decompose(imm.ambient, pf, x)
            phix = imm.ambient.eval_at(pf.ambient_point).phi @ x
            lhs = pf.g.inner(tx, tx) + pf.g.inner(nx, nx)
            assert lhs == pytest.approx(pf.g.inner(phix, phix), abs=1e-12)


def test_submanifold_identities_on_synthesized_config():
    cfg = pseudo_slant_config(theta=0.9, s=1)
    rng = np.random.default_rng(4)
    points = cfg.imm.sample(rng, 3)
    for record in check_submanifold_identities(cfg.imm, points):
        assert record.passed, f"{record.name}: {record.value:.3e}"


def test_slant_relations_on_slant_slice():
    theta = math.pi / 5
    imm = slant_submanifold(theta=theta, s=1)
    rng = np.random.default_rng(5)
    for record in check_slant_relations(imm, theta, imm.sample(rng, 5)):
        assert record.passed, f"{record.name}: {record.value:.3e}"

import math

import numpy as np
import pytest

from fgeom.ambient import Chart
from fgeom.errors import ContractViolationError
from fgeom.warpineq import (
    WarpedProduct,
    bound_rhs_perp_fiber,
    bound_rhs_slant_fiber,
    check_bound_perp_fiber,
    check_bound_slant_fiber,
    check_lemma_warped_connection,
    check_mixed_identities_perp_base,
    check_mixed_identities_slant_base,
    check_reductions,
    check_structure_derivative,
    grad_ln_f,
    pseudo_slant_config,
    random_warped_product,
    slant_submanifold,
    totally_geodesic_trichotomy,
    warped_metric,
    warping_gradient,
)


def sample_product_points(wp, rng, count):
    chart = wp.chart()
    return chart.sample(rng, count)


def test_warped_connection_blocks_on_random_products():
    rng = np.random.default_rng(8)
    for _ in range(5):
        wp = random_warped_product(rng)
        points = sample_product_points(wp, rng, 4)
        for record in check_lemma_warped_connection(wp, points):
            assert record.passed, f"{record.name}: {record.value:.3e}"


def test_warping_gradient_oracle():
    base = Chart("base", ("u2", "u3"), {"u2": (1.0, 5.0), "u3": (1.0, 5.0)})
    fiber = Chart("fiber", ("p",))
    wp = WarpedProduct(
        base, [["1", "0"], ["0", "1"]], fiber, [["1"]], "sqrt(u2^2+u3^2)"
    )
    grad, sq = warping_gradient(wp, [3.0, 4.0])
    assert np.allclose(grad, [3.0 / 25.0, 4.0 / 25.0], atol=1e-14)
    assert sq == pytest.approx(1.0 / 25.0, abs=1e-14)


def test_warped_metric_blocks():
    base = Chart("base", ("x",))
    fiber = Chart("fiber", ("p",))
    wp = WarpedProduct(base, [["1"]], fiber, [["1"]], "exp(x)")
    mp = warped_metric(wp).at([0.5, 0.2])
    assert mp.g[0, 0] == pytest.approx(1.0)
    assert mp.g[1, 1] == pytest.approx(math.exp(1.0))
    assert mp.g[0, 1] == 0.0


def test_factor_charts_must_be_disjoint():
    base = Chart("base", ("x", "y"))
    fiber = Chart("fiber", ("y",))
    with pytest.raises(ContractViolationError):
        WarpedProduct(base, [["1", "0"], ["0", "1"]], fiber, [["1"]], "exp(x)")


def test_nonpositive_warping_rejected():
    base = Chart("base", ("x",))
    fiber = Chart("fiber", ("p",))
    wp = WarpedProduct(base, [["1"]], fiber, [["1"]], "x")
    with pytest.raises(ContractViolationError):
        warping_gradient(wp, [-1.0])


def test_grad_ln_f_on_model_configuration():
    cfg = pseudo_slant_config(theta=math.pi / 4, s=1)
    full, slant_sq, perp_sq, xi_sum = grad_ln_f(cfg, [0.3, -0.2, 0.7, 0.5])
    # ln f = z1 and the z direction is unit, so every piece equals one
    assert full == pytest.approx(1.0, abs=1e-10)
    assert slant_sq == pytest.approx(1.0, abs=1e-10)
    assert perp_sq == pytest.approx(1.0, abs=1e-10)
    assert xi_sum == pytest.approx(1.0, abs=1e-10)
    # restricted gradients never exceed the full one
    assert slant_sq <= full + 1e-10
    assert perp_sq <= full + 1e-10


def test_structure_derivative_and_mixed_identities():
    cfg = pseudo_slant_config(theta=1.0, s=1)
    rng = np.random.default_rng(9)
    points = cfg.imm.sample(rng, 4)
    assert check_structure_derivative(cfg, points).passed
    for record in check_mixed_identities_slant_base(cfg, points):
        assert record.passed, f"{record.name}: {record.value:.3e}"
    for record in check_mixed_identities_perp_base(cfg, points):
        assert record.passed, f"{record.name}: {record.value:.3e}"


def test_trichotomy_reports_nonvanishing_h():
    cfg = pseudo_slant_config(s=1)
    rng = np.random.default_rng(10)
    records = totally_geodesic_trichotomy(cfg, cfg.imm.sample(rng, 3))
    # the circle factor is curved, so h does not vanish
    assert any(r.kind == "info" for r in records)


def test_bound_gap_records():
    cfg = pseudo_slant_config(theta=0.8, s=1)
    rng = np.random.default_rng(11)
    points = cfg.imm.sample(rng, 4)
    for checker in (check_bound_perp_fiber, check_bound_slant_fiber):
        records = checker(cfg, points)
        gaps = [r for r in records if r.kind == "gap"]
        assert gaps and all(r.passed for r in gaps)
        infos = [r for r in records if r.kind == "info"]
        assert any("positive" in (r.notes or "") for r in infos)


def test_bound_right_sides_and_reductions():
    theta = 0.9
    assert bound_rhs_perp_fiber(2, theta, 4.0, 1.0) == pytest.approx(
        2 * (math.cos(theta) / math.sin(theta)) ** 2 * 3.0
    )
    assert bound_rhs_slant_fiber(2, theta, 4.0, 1.0) == pytest.approx(
        (4.0 / 9.0) * math.cos(theta) ** 2 * 3.0
    )
    for record in check_reductions():
        assert record.passed, record.name


def test_slant_fiber_checker_requires_even_slant_dimension():
    cfg = pseudo_slant_config(s=1)
    odd = pseudo_slant_config(s=1)
    odd.d_theta.vectors.append(["0", "0", "1", "0"])
    rng = np.random.default_rng(12)
    with pytest.raises(ContractViolationError):
        check_bound_slant_fiber(odd, cfg.imm.sample(rng, 1))


def test_slant_submanifold_is_minimal_in_slant_directions():
    imm = slant_submanifold(theta=0.7, s=1)
    # sanity: the builder yields a genuine immersion of the right dimension
    assert imm.chart.dim == 3
    assert imm.ambient.chart.dim == 7

import numpy as np
import pytest

from fgeom.errors import ContractViolationError, DegeneracyError, EvalDomainError
from fgeom.exprlang import BinOp, Call, Const, Neg, Var, eval_jet, eval_value
from fgeom.numcore import (
    BilinearForm,
    Jet,
    check_orthonormal,
    complete_frame,
    gram_schmidt,
    gram_schmidt_coeffs,
    identity_form,
    jet_eval,
    project,
)

VARS = ("x0", "x1", "x2")


def random_tree(rng, depth):
    """A random expression tree that stays finite and smooth on (-1, 1)^3."""
    if depth == 0 or rng.random() < 0.2:
        if rng.random() < 0.5:
            return Var(VARS[rng.integers(len(VARS))])
        return Const(float(rng.uniform(0.1, 2.0)))
    kind = rng.integers(6)
    if kind == 0:
        return Neg(random_tree(rng, depth - 1))
    if kind == 1:
        return Call(("sin", "cos")[rng.integers(2)], random_tree(rng, depth - 1))
    if kind == 2:
        # bounded exponent keeps magnitudes sane
        return Call("exp", BinOp("*", Const(0.3), random_tree(rng, depth - 1)))
    if kind == 3:
        # denominator bounded away from zero
        safe = BinOp("+", Const(2.0), BinOp("^", Var(VARS[rng.integers(3)]), Const(2.0)))
        return BinOp("/", random_tree(rng, depth - 1), safe)
    op = ("+", "-", "*")[rng.integers(3)]
    return BinOp(op, random_tree(rng, depth - 1), random_tree(rng, depth - 1))


def fd_gradient(expr, point, h=1e-6):
    grad = np.zeros(3)
    for i in range(3):
        up = dict(zip(VARS, point)); up[VARS[i]] += h
        dn = dict(zip(VARS, point)); dn[VARS[i]] -= h
        grad[i] = (eval_value(expr, up) - eval_value(expr, dn)) / (2 * h)
    return grad


def fd_hessian(expr, point, h=1e-4):
    hess = np.zeros((3, 3))
    f0 = eval_value(expr, dict(zip(VARS, point)))
    for i in range(3):
        for j in range(i, 3):
            if i == j:
                up = dict(zip(VARS, point)); up[VARS[i]] += h
                dn = dict(zip(VARS, point)); dn[VARS[i]] -= h
                hess[i, i] = (eval_value(expr, up) - 2 * f0 + eval_value(expr, dn)) / h**2
            else:
                vals = 0.0
                for si, sj in ((1, 1), (1, -1), (-1, 1), (-1, -1)):
                    b = dict(zip(VARS, point))
                    b[VARS[i]] += si * h
                    b[VARS[j]] += sj * h
                    vals += si * sj * eval_value(expr, b)
                hess[i, j] = hess[j, i] = vals / (4 * h**2)
    return hess


def test_jet_derivatives_match_finite_differences():
    rng = np.random.default_rng(7)
    for _ in range(100):
        expr = random_tree(rng, 6)
        for _ in range(10):
            point = rng.uniform(-1.0, 1.0, 3)
            bindings = {v: Jet.variable(point[i], i, 3) for i, v in enumerate(VARS)}
            jet = eval_jet(expr, bindings)
            scale = 1.0 + abs(jet.value)
            grad_fd = fd_gradient(expr, point)
            assert np.max(np.abs(jet.grad - grad_fd)) / (1.0 + np.max(np.abs(grad_fd))) < 1e-6
            hess_fd = fd_hessian(expr, point)
            assert np.max(np.abs(jet.hess - hess_fd)) / (1.0 + np.max(np.abs(hess_fd))) < 1e-4
            assert np.allclose(jet.hess, jet.hess.T), scale


def test_jet_integer_powers_are_exact():
    x = Jet.variable(3.0, 0, 1)
    p = x**4
    assert p.value == 81.0
    assert p.grad[0] == 108.0
    assert p.hess[0, 0] == 108.0
    inv = x**-2
    assert inv.value == pytest.approx(1.0 / 9.0, rel=1e-15)
    assert inv.grad[0] == pytest.approx(-2.0 / 27.0, rel=1e-14)


def test_jet_division_by_zero_raises():
    x = Jet.variable(0.0, 0, 1)
    with pytest.raises(EvalDomainError):
        1.0 / x


def test_jet_eval_seeds_variables():
    def mapping(jets):
        x, y = jets
        return [x * y, x + 2.0]

    out = jet_eval(mapping, [2.0, 5.0])
    assert out[0].value == 10.0
    assert np.allclose(out[0].grad, [5.0, 2.0])
    assert out[1].grad[0] == 1.0


def test_gram_schmidt_produces_metric_orthonormal_frame():
    rng = np.random.default_rng(3)
    for dim in (2, 5, 9, 14):
        a = rng.normal(size=(dim, dim))
        g = BilinearForm(a @ a.T + dim * np.eye(dim))
        vectors = [rng.normal(size=dim) for _ in range(dim)]
        frame, coeffs, kept = gram_schmidt_coeffs(vectors, g)
        assert kept == list(range(dim))
        assert check_orthonormal(frame, g, tol=1e-10)
        stacked = np.array(vectors)
        for f, row in zip(frame, coeffs):
            assert np.allclose(f, row @ stacked, atol=1e-10)


def test_gram_schmidt_rank_deficiency_reports_index():
    g = identity_form(3)
    v = np.array([1.0, 0.0, 0.0])
    with pytest.raises(DegeneracyError) as err:
        gram_schmidt([v, 2.0 * v], g)
    assert err.value.index == 1


def test_complete_frame_skips_dependent_candidates():
    g = identity_form(3)
    frame = gram_schmidt([np.array([1.0, 1.0, 0.0])], g)
    basis = [np.eye(3)[:, i] for i in range(3)]
    extra = complete_frame(frame, basis, g)
    assert len(extra) == 2
    assert check_orthonormal(frame + extra, g)


def test_project_is_idempotent_and_contained():
    rng = np.random.default_rng(11)
    a = rng.normal(size=(4, 4))
    g = BilinearForm(a @ a.T + 4 * np.eye(4))
    frame = gram_schmidt([rng.normal(size=4) for _ in range(2)], g)
    v = rng.normal(size=4)
    p = project(v, frame, g)
    assert np.allclose(project(p, frame, g), p, atol=1e-12)
    # residual is g-orthogonal to the span
    for f in frame:
        assert abs(g.inner(v - p, f)) < 1e-12


def test_project_rejects_non_orthonormal_frame():
    g = identity_form(2)
    with pytest.raises(ContractViolationError):
        project(np.ones(2), [np.array([2.0, 0.0])], g)

"""Warped products, mixed second fundamental form identities and bounds.

Covers the Levi-Civita connection of a warped metric, gradient bookkeeping
for the warping function, the mixed identities relating h to the slant angle
on pseudo-slant warped submanifolds, and the squared-norm lower bounds with
their dimension-count reductions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .ambient import Chart, MetricField, kenmotsu_f_model
from .errors import ContractViolationError
from .exprlang import eval_jet, parse
from .numcore import BilinearForm, Jet, gram_schmidt
from .report import gap_check, info_record, residual_check
from .subgeom import (
    Distribution,
    Immersion,
    frames,
    h_norm_squared,
    second_fundamental_form,
    slant_angle,
)

__all__ = [
    "WarpedProduct",
    "warped_metric",
    "check_lemma_warped_connection",
    "warping_gradient",
    "random_warped_product",
    "PseudoSlantConfig",
    "pseudo_slant_config",
    "slant_submanifold",
    "grad_ln_f",
    "check_structure_derivative",
    "check_mixed_identities_slant_base",
    "check_mixed_identities_perp_base",
    "totally_geodesic_trichotomy",
    "bound_rhs_slant_fiber",
    "bound_rhs_perp_fiber",
    "check_bound_slant_fiber",
    "check_bound_perp_fiber",
    "check_reductions",
]


def _expr(e):
    return parse(e) if isinstance(e, str) else e


# --------------------------------------------------------------------------
# Warped product metrics
# --------------------------------------------------------------------------


@dataclass
class WarpedProduct:
    """Base metric plus f^2 times a fiber metric on the product chart.

    Metric entries are expressions over the respective factor coordinates;
    the warping is a positive expression over the base coordinates only.
    """

    base_chart: Chart
    base_metric: list  # entries over base coords
    fiber_chart: Chart
    fiber_metric: list  # entries over fiber coords
    warping: object  # Expr over base coords

    def __post_init__(self):
        self.warping = _expr(self.warping)
        self.base_metric = [[_expr(e) for e in row] for row in self.base_metric]
        self.fiber_metric = [[_expr(e) for e in row] for row in self.fiber_metric]
        overlap = set(self.base_chart.coords) & set(self.fiber_chart.coords)
        if overlap:
            raise ContractViolationError(
                f"factor charts share coordinates {sorted(overlap)}"
            )

    def chart(self):
        bounds = dict(self.base_chart.bounds)
        bounds.update(self.fiber_chart.bounds)
        return Chart(
            f"{self.base_chart.name}x{self.fiber_chart.name}",
            self.base_chart.coords + self.fiber_chart.coords,
            bounds,
        )


def warped_metric(wp):
    """MetricField of g1 + f^2 g2 on the product chart."""
    from .exprlang import BinOp, Const

    nb = wp.base_chart.dim
    nf = wp.fiber_chart.dim
    dim = nb + nf
    zero = Const(0.0)
    fsq = BinOp("^", wp.warping, Const(2.0))
    entries = [[zero] * dim for _ in range(dim)]
    for i in range(nb):
        for j in range(nb):
            entries[i][j] = wp.base_metric[i][j]
    for a in range(nf):
        for b in range(nf):
            entries[nb + a][nb + b] = BinOp("*", fsq, wp.fiber_metric[a][b])
    return MetricField(wp.chart(), entries)


def _base_lnf_grad(wp, base_point):
    nb = wp.base_chart.dim
    bindings = {
        c: Jet.variable(base_point[i], i, nb)
        for i, c in enumerate(wp.base_chart.coords)
    }
    f = eval_jet(wp.warping, bindings)
    if f.value <= 0.0:
        raise ContractViolationError("warping function must be positive")
    return f.grad / f.value


def check_lemma_warped_connection(wp, points, tol=1e-7):
    """Connection of a warped metric against the three block formulas.

    For base fields X, Y and fiber fields Z, W: nabla_X Y stays tangent to
    the base, nabla_Z X = (X ln f) Z, and nabla_Z W equals the fiber
    connection minus g(Z, W) grad ln f.
    """
    metric = warped_metric(wp)
    base_metric = MetricField(wp.base_chart, wp.base_metric)
    fiber_metric = MetricField(wp.fiber_chart, wp.fiber_metric)
    nb = wp.base_chart.dim
    nf = wp.fiber_chart.dim
    r_base = r_mixed = r_fiber = 0.0
    for u in points:
        u = np.asarray(u, dtype=float)
        mp = metric.at(u)
        gamma = mp.gamma
        bp = base_metric.at(u[:nb])
        fp = fiber_metric.at(u[nb:])
        dlnf = _base_lnf_grad(wp, u[:nb])

        # base arguments: no fiber components, base block matches g1 alone
        r_base = max(
            r_base,
            float(np.max(np.abs(gamma[nb:, :nb, :nb]))),
            float(np.max(np.abs(gamma[:nb, :nb, :nb] - bp.gamma))),
        )
        # mixed arguments: (X ln f) times the fiber identity, no base part
        expected = np.einsum("i,ab->bia", dlnf, np.eye(nf))
        r_mixed = max(
            r_mixed,
            float(np.max(np.abs(gamma[nb:, :nb, nb:] - expected))),
            float(np.max(np.abs(gamma[:nb, :nb, nb:]))),
        )
        # fiber arguments: fiber connection minus g(Z, W) grad ln f
        grad_lnf = bp.ginv @ dlnf
        g_fiber = mp.g[nb:, nb:]
        expected_base = -np.einsum("ab,j->jab", g_fiber, grad_lnf)
        r_fiber = max(
            r_fiber,
            float(np.max(np.abs(gamma[nb:, nb:, nb:] - fp.gamma))),
            float(np.max(np.abs(gamma[:nb, nb:, nb:] - expected_base))),
        )
    count = len(points)
    return [
        residual_check(
            "warped connection, base block",
            "nabla_X Y tangent to the base with the base connection",
            count,
            r_base,
            tol,
        ),
        residual_check(
            "warped connection, mixed block",
            "nabla_Z X = (X ln f) Z",
            count,
            r_mixed,
            tol,
        ),
        residual_check(
            "warped connection, fiber block",
            "nabla_Z W = fiber connection - g(Z, W) grad ln f",
            count,
            r_fiber,
            tol,
        ),
    ]


def warping_gradient(wp, base_point):
    """(grad ln f components, squared norm) in the base metric at a point."""
    base_metric = MetricField(wp.base_chart, wp.base_metric)
    bp = base_metric.at(np.asarray(base_point, dtype=float))
    dlnf = _base_lnf_grad(wp, np.asarray(base_point, dtype=float))
    grad = bp.ginv @ dlnf
    return grad, float(dlnf @ grad)


def random_warped_product(rng):
    """A random smooth positive-definite warped product on (-1, 1) boxes."""
    a, b = (float(x) for x in rng.uniform(0.1, 1.0, size=2))
    c = float(rng.uniform(-0.2, 0.2))
    d, e = (float(x) for x in rng.uniform(0.1, 1.0, size=2))
    al, be = (float(x) for x in rng.uniform(-0.5, 0.5, size=2))
    ga = float(rng.uniform(0.1, 1.0))
    base = Chart("base", ("x", "y"))
    fiber = Chart("fiber", ("p", "q"))
    base_metric = [
        [f"1+{a!r}*x^2", f"{c!r}*x*y"],
        [f"{c!r}*x*y", f"1.5+{b!r}*y^2"],
    ]
    fiber_metric = [
        [f"1+{d!r}*p^2", "0"],
        ["0", f"1+{e!r}*q^2"],
    ]
    warping = f"exp({al!r}*x+{be!r}*y)*(1+{ga!r}*x^2)"
    return WarpedProduct(base, base_metric, fiber, fiber_metric, warping)


# --------------------------------------------------------------------------
# Pseudo-slant warped configurations inside the warped ambient model
# --------------------------------------------------------------------------


@dataclass
class PseudoSlantConfig:
    """A pseudo-slant immersion with a product splitting of its domain.

    `ln_f_grad_expr` holds ln f up to an additive constant (only derivatives
    of ln f enter the identities and bounds).  `xi_dom` lists the domain
    coordinate representations of the structure fields; they are tangent by
    construction.
    """

    imm: Immersion
    theta: float
    d_theta: Distribution
    d_perp: Distribution
    xi_dom: list
    ln_f: object  # Expr over domain coords, up to an additive constant

    @property
    def s(self):
        return self.imm.ambient.s


def pseudo_slant_config(theta=math.pi / 4, s=1, radius=1.0):
    """Slant plane times an anti-invariant circle inside the warped model.

    The slant factor is the (p, q)-plane immersed at angle theta in the
    first two complex directions, the anti-invariant factor a circle of
    radius `radius` in the third; the structure directions are carried along
    unchanged.  The induced metric is a warped product for either ordering
    of the factors, with warping exp(z_1 + ... + z_s) times a constant.
    """
    if not 0.0 < theta <= math.pi / 2:
        raise ContractViolationError("slant angle must lie in (0, pi/2]")
    ambient = kenmotsu_f_model(3, s)
    coords = ("p", "q", "w") + tuple(f"z{k + 1}" for k in range(s))
    bounds = {f"z{k + 1}": (0.1, 1.0) for k in range(s)}
    chart = Chart("pseudo-slant-domain", coords, bounds)
    st = repr(math.sin(theta))
    ct = repr(math.cos(theta))
    r = repr(float(radius))
    components = [
        "p",  # x1
        f"{st}*q",  # x2
        f"{r}*cos(w)",  # x3
        f"{ct}*q",  # y1
        "0",  # y2
        f"{r}*sin(w)",  # y3
    ] + [f"z{k + 1}" for k in range(s)]
    imm = Immersion(chart, ambient, components, name="pseudo-slant")
    m = chart.dim

    def unit(i):
        vec = ["0"] * m
        vec[i] = "1"
        return vec

    d_theta = Distribution("slant-plane", "slant", [unit(0), unit(1)])
    d_perp = Distribution("anti-invariant-circle", "anti-invariant", [unit(2)])
    xi_dom = [np.eye(m)[3 + k] for k in range(s)]
    ln_f = parse("+".join(f"z{k + 1}" for k in range(s)))
    return PseudoSlantConfig(imm, theta, d_theta, d_perp, xi_dom, ln_f)


def slant_submanifold(theta=math.pi / 4, s=1):
    """The slant factor alone (with structure directions), no circle."""
    ambient = kenmotsu_f_model(3, s)
    coords = ("p", "q") + tuple(f"z{k + 1}" for k in range(s))
    bounds = {f"z{k + 1}": (0.1, 1.0) for k in range(s)}
    chart = Chart("slant-domain", coords, bounds)
    st = repr(math.sin(theta))
    ct = repr(math.cos(theta))
    components = ["p", f"{st}*q", "0", f"{ct}*q", "0", "0"] + [
        f"z{k + 1}" for k in range(s)
    ]
    return Immersion(chart, ambient, components, name="slant-slice")


# --------------------------------------------------------------------------
# Warping gradients along an immersion
# --------------------------------------------------------------------------


def _lnf_partials(config, u):
    m = config.imm.chart.dim
    u = np.asarray(u, dtype=float)
    bindings = {
        c: Jet.variable(u[i], i, m)
        for i, c in enumerate(config.imm.chart.coords)
    }
    return eval_jet(config.ln_f, bindings).grad


def _domain_coeffs(pf, v):
    """Domain components of a tangent ambient vector (least squares exact)."""
    G = pf.jacobian.T @ pf.g.matrix @ pf.jacobian
    return np.linalg.solve(G, pf.jacobian.T @ (pf.g.matrix @ np.asarray(v)))


def _directional_lnf(config, pf, dlnf, v_amb):
    return float(_domain_coeffs(pf, v_amb) @ dlnf)


def grad_ln_f(config, u):
    """Gradient data of ln f at a domain point.

    Returns (full squared norm, squared norm over the slant factor frame
    including the structure fields, squared norm over the anti-invariant
    factor frame including the structure fields, sum of xi_k ln f).
    """
    pf = frames(config.imm, u)
    dlnf = _lnf_partials(config, u)
    G = BilinearForm(pf.jacobian.T @ pf.g.matrix @ pf.jacobian)
    full = float(dlnf @ np.linalg.solve(G.matrix, dlnf))
    xi_amb = [pf.jacobian @ c for c in config.xi_dom]
    theta_amb = [
        pf.jacobian @ c for c in config.d_theta.evaluate(config.imm.chart, u)
    ]
    perp_amb = [
        pf.jacobian @ c for c in config.d_perp.evaluate(config.imm.chart, u)
    ]
    theta_frame = gram_schmidt(theta_amb + xi_amb, pf.g)
    perp_frame = gram_schmidt(perp_amb + xi_amb, pf.g)
    slant_sq = sum(
        _directional_lnf(config, pf, dlnf, e) ** 2 for e in theta_frame
    )
    perp_sq = sum(
        _directional_lnf(config, pf, dlnf, e) ** 2 for e in perp_frame
    )
    xi_sum = sum(_directional_lnf(config, pf, dlnf, x) for x in xi_amb)
    return full, slant_sq, perp_sq, xi_sum


def check_structure_derivative(config, points, tol=1e-9):
    """sum_k xi_k ln f = s for warpings induced by the ambient model."""
    worst = 0.0
    for u in points:
        _, _, _, xi_sum = grad_ln_f(config, u)
        worst = max(worst, abs(xi_sum - config.s))
    return residual_check(
        "structure derivative of the warping",
        "sum_k xi_k ln f = s",
        len(points),
        worst,
        tol,
    )


# --------------------------------------------------------------------------
# Mixed identities
# --------------------------------------------------------------------------


def _point_data(config, u):
    pf = frames(config.imm, u)
    sff = second_fundamental_form(config.imm, u, pf)
    sp = config.imm.ambient.eval_at(pf.ambient_point)
    dlnf = _lnf_partials(config, u)
    return pf, sff, sp, dlnf


def _frame_of(config, pf, dist, u):
    vecs = [pf.jacobian @ c for c in dist.evaluate(config.imm.chart, u)]
    return gram_schmidt(vecs, pf.g)


def _h_of(pf, sff, x, y):
    xf = np.array([pf.g.inner(x, e) for e in pf.tangent])
    yf = np.array([pf.g.inner(y, e) for e in pf.tangent])
    return np.einsum("a,b,abC->C", xf, yf, sff.h)


def _eta_sum(sp, g, v):
    return sum(float(e @ v) for e in sp.eta)


def check_mixed_identities_slant_base(config, points, tol=1e-6):
    """Mixed h identities when the slant factor carries the structure fields.

    For X tangent to the slant factor (structure fields included) and unit Z
    in the anti-invariant factor:
      g(h(Z, Z), NTX) = g(h(Z, TX), phi Z) + {s sum eta^k(X) - X ln f} cos^2(theta)
      g(h(Z, Z), NX)  = g(h(Z, X), phi Z) - (TX ln f)
    """
    mu = math.cos(config.theta) ** 2
    s = config.s
    r1 = r2 = 0.0
    for u in points:
        pf, sff, sp, dlnf = _point_data(config, u)
        g = pf.g
        xi_amb = [pf.jacobian @ c for c in config.xi_dom]
        x_list = _frame_of(config, pf, config.d_theta, u) + xi_amb
        z_list = _frame_of(config, pf, config.d_perp, u)
        for x in x_list:
            phix = sp.phi @ x
            tx = pf.tangent_part(phix)
            ntx = pf.normal_part(sp.phi @ tx)
            nx = phix - tx
            x_lnf = _directional_lnf(config, pf, dlnf, x)
            tx_lnf = _directional_lnf(config, pf, dlnf, tx)
            eta_x = _eta_sum(sp, g, x)
            for z in z_list:
                phiz = sp.phi @ z
                hzz = _h_of(pf, sff, z, z)
                lhs1 = g.inner(hzz, ntx)
                rhs1 = g.inner(_h_of(pf, sff, z, tx), phiz) + (
                    s * eta_x - x_lnf
                ) * mu
                r1 = max(r1, abs(lhs1 - rhs1))
                lhs2 = g.inner(hzz, nx)
                rhs2 = g.inner(_h_of(pf, sff, z, x), phiz) - tx_lnf
                r2 = max(r2, abs(lhs2 - rhs2))
    count = len(points)
    return [
        residual_check(
            "mixed identity, slant base, rotated argument",
            "g(h(Z,Z), NTX) = g(h(Z,TX), phi Z) + {s sum eta(X) - X ln f} cos^2 theta ||Z||^2",
            count,
            r1,
            tol,
        ),
        residual_check(
            "mixed identity, slant base, plain argument",
            "g(h(Z,Z), NX) = g(h(Z,X), phi Z) - (TX ln f) ||Z||^2",
            count,
            r2,
            tol,
        ),
    ]


def check_mixed_identities_perp_base(config, points, tol=1e-6):
    """Mixed h identities when the anti-invariant factor carries xi.

    For unit X in the slant factor and Z tangent to the anti-invariant factor
    (structure fields included):
      g(h(X, TX), phi Z) = g(h(X, Z), NTX)
                           + (1/3) {sum eta^k(Z) - Z ln f} cos^2(theta)
      g(h(X, X), phi Z) = g(h(Z, X), NX)
      g(h(TX, TX), phi Z) = g(h(Z, TX), NTX)
    """
    mu = math.cos(config.theta) ** 2
    r1 = r2 = r3 = 0.0
    for u in points:
        pf, sff, sp, dlnf = _point_data(config, u)
        g = pf.g
        xi_amb = [pf.jacobian @ c for c in config.xi_dom]
        x_list = _frame_of(config, pf, config.d_theta, u)
        z_list = _frame_of(config, pf, config.d_perp, u) + xi_amb
        for x in x_list:
            phix = sp.phi @ x
            tx = pf.tangent_part(phix)
            ntx = pf.normal_part(sp.phi @ tx)
            nx = phix - tx
            for z in z_list:
                phiz = sp.phi @ z
                z_lnf = _directional_lnf(config, pf, dlnf, z)
                eta_z = _eta_sum(sp, g, z)
                lhs1 = g.inner(_h_of(pf, sff, x, tx), phiz)
                rhs1 = g.inner(_h_of(pf, sff, x, z), ntx) + (
                    (eta_z - z_lnf) * mu / 3.0
                )
                r1 = max(r1, abs(lhs1 - rhs1))
                lhs2 = g.inner(_h_of(pf, sff, x, x), phiz)
                rhs2 = g.inner(_h_of(pf, sff, z, x), nx)
                r2 = max(r2, abs(lhs2 - rhs2))
                lhs3 = g.inner(_h_of(pf, sff, tx, tx), phiz)
                rhs3 = g.inner(_h_of(pf, sff, z, tx), ntx)
                r3 = max(r3, abs(lhs3 - rhs3))
    count = len(points)
    return [
        residual_check(
            "mixed identity, anti-invariant base",
            "g(h(X,TX), phi Z) = g(h(X,Z), NTX) + (1/3){sum eta(Z) - Z ln f} cos^2 theta ||X||^2",
            count,
            r1,
            tol,
        ),
        residual_check(
            "mixed identity, plain pair",
            "g(h(X,X), phi Z) = g(h(Z,X), NX)",
            count,
            r2,
            tol,
        ),
        residual_check(
            "mixed identity, rotated pair",
            "g(h(TX,TX), phi Z) = g(h(Z,TX), NTX)",
            count,
            r3,
            tol,
        ),
    ]


def totally_geodesic_trichotomy(config, points, tol=1e-8):
    """Trichotomy diagnostic for totally geodesic warped configurations.

    If h vanishes, one of: the slant factor is anti-invariant, or invariant,
    or Z ln f = sum eta^k(Z) for every Z in the anti-invariant factor.  When
    h does not vanish the hypothesis is idle and the defects are reported
    for information.
    """
    h_max = 0.0
    anti_defect = 0.0
    inv_defect = 0.0
    lnf_defect = 0.0
    for u in points:
        pf, sff, sp, dlnf = _point_data(config, u)
        g = pf.g
        m = sff.h.shape[0]
        for a in range(m):
            for b in range(m):
                h_max = max(h_max, g.norm(sff.h[a, b]))
        for x in _frame_of(config, pf, config.d_theta, u):
            phix = sp.phi @ x
            tx = pf.tangent_part(phix)
            anti_defect = max(anti_defect, g.norm(tx))
            inv_defect = max(inv_defect, g.norm(phix - tx))
        for z in _frame_of(config, pf, config.d_perp, u):
            z_lnf = _directional_lnf(config, pf, dlnf, z)
            lnf_defect = max(lnf_defect, abs(z_lnf - _eta_sum(sp, g, z)))
    count = len(points)
    branch = min(anti_defect, inv_defect, lnf_defect)
    if h_max <= tol:
        verdict = residual_check(
            "totally geodesic trichotomy",
            "h = 0 forces anti-invariant, invariant, or Z ln f = sum eta(Z)",
            count,
            branch,
            tol,
        )
    else:
        verdict = info_record(
            "totally geodesic trichotomy",
            "hypothesis h = 0 not satisfied on this configuration",
            count,
            h_max,
            notes=(
                f"defects: anti-invariant {anti_defect:.3e}, "
                f"invariant {inv_defect:.3e}, warping branch {lnf_defect:.3e}"
            ),
        )
    return [verdict]


# --------------------------------------------------------------------------
# Squared-norm bounds
# --------------------------------------------------------------------------


def bound_rhs_perp_fiber(alpha, theta, grad_slant_sq, s):
    """Right side when the anti-invariant factor is the fiber."""
    cot = math.cos(theta) / math.sin(theta)
    return alpha * cot * cot * (grad_slant_sq - s * s)


def bound_rhs_slant_fiber(beta, theta, grad_perp_sq, s):
    """Right side when the slant factor is the fiber."""
    return (2.0 * beta / 9.0) * math.cos(theta) ** 2 * (grad_perp_sq - s * s)


def _gate_checks(config, points, gate_tol):
    """Common admissibility gates for the bounds."""
    mixed = 0.0
    angles = []
    xi_res = 0.0
    for u in points:
        pf, sff, sp, _ = _point_data(config, u)
        g = pf.g
        theta_frame = _frame_of(config, pf, config.d_theta, u)
        perp_frame = _frame_of(config, pf, config.d_perp, u)
        xi_amb = [pf.jacobian @ c for c in config.xi_dom]
        for x in theta_frame + xi_amb:
            for z in perp_frame:
                mixed = max(mixed, g.norm(_h_of(pf, sff, x, z)))
        theta_vecs = [
            pf.jacobian @ c
            for c in config.d_theta.evaluate(config.imm.chart, u)
        ]
        for x in theta_frame:
            angles.append(
                slant_angle(config.imm.ambient, pf.ambient_point, theta_vecs, x)
            )
        _, _, _, xi_sum = grad_ln_f(config, u)
        xi_res = max(xi_res, abs(xi_sum - config.s))
    dev = max(angles) - min(angles) if angles else 0.0
    dev = max(dev, abs(angles[0] - config.theta) if angles else 0.0)
    count = len(points)
    return [
        residual_check(
            "gate: mixed totally geodesic",
            "h(D_theta + xi, D_perp) = 0",
            count,
            mixed,
            gate_tol,
        ),
        residual_check(
            "gate: slant constancy",
            "theta constant and equal to the declared angle",
            count,
            dev,
            gate_tol,
        ),
        residual_check(
            "gate: warping compatibility",
            "sum_k xi_k ln f = s",
            count,
            xi_res,
            gate_tol,
        ),
    ]


def check_bound_perp_fiber(config, points, tol=1e-6, gate_tol=1e-6):
    """||h||^2 >= alpha cot^2(theta) (||grad^theta ln f||^2 - s^2).

    The slant factor (with the structure fields) is the base; alpha is the
    anti-invariant fiber dimension.  Gradient norms are taken over the base
    frame including the structure directions.
    """
    checks = _gate_checks(config, points, gate_tol)
    alpha = len(config.d_perp.vectors)
    min_gap = math.inf
    max_rhs = -math.inf
    base_h = 0.0
    fiber_umb = 0.0
    for u in points:
        pf, sff, sp, _ = _point_data(config, u)
        g = pf.g
        hsq = h_norm_squared(sff)
        _, slant_sq, _, _ = grad_ln_f(config, u)
        rhs = bound_rhs_perp_fiber(alpha, config.theta, slant_sq, config.s)
        min_gap = min(min_gap, hsq - rhs)
        max_rhs = max(max_rhs, rhs)
        base_frame = _frame_of(config, pf, config.d_theta, u) + [
            pf.jacobian @ c for c in config.xi_dom
        ]
        for x in base_frame:
            for y in base_frame:
                base_h = max(base_h, g.norm(_h_of(pf, sff, x, y)))
        fiber_frame = _frame_of(config, pf, config.d_perp, u)
        mean = sum(
            (_h_of(pf, sff, z, z) for z in fiber_frame),
            np.zeros(config.imm.ambient.dim),
        ) / len(fiber_frame)
        for i, z in enumerate(fiber_frame):
            for j, zz in enumerate(fiber_frame):
                target = mean if i == j else 0.0
                fiber_umb = max(
                    fiber_umb, g.norm(_h_of(pf, sff, z, zz) - target)
                )
    count = len(points)
    checks.append(
        gap_check(
            "squared norm bound, anti-invariant fiber",
            "||h||^2 - alpha cot^2(theta) (||grad ln f||_theta^2 - s^2) >= 0",
            count,
            min_gap,
            tol,
        )
    )
    checks.append(
        info_record(
            "bound right side, anti-invariant fiber",
            "max of alpha cot^2(theta) (||grad ln f||_theta^2 - s^2)",
            count,
            max_rhs,
            notes=(
                "non-positive for every model-induced warping: "
                "the restricted gradient norm equals s while s^2 is subtracted"
            )
            if max_rhs <= 0.0
            else "",
        )
    )
    checks.append(
        info_record(
            "equality diagnostics, anti-invariant fiber",
            "base totally geodesic and fiber umbilical defects",
            count,
            max(base_h, fiber_umb),
            notes=f"base h {base_h:.3e}, fiber umbilicity {fiber_umb:.3e}",
        )
    )
    return checks


def check_bound_slant_fiber(config, points, tol=1e-6, gate_tol=1e-6):
    """||h||^2 >= (2 beta / 9) cos^2(theta) (||grad^perp ln f||^2 - s^2).

    The anti-invariant factor (with the structure fields) is the base; the
    slant fiber has dimension 2 beta.  Gradient norms are taken over the base
    frame including the structure directions.
    """
    checks = _gate_checks(config, points, gate_tol)
    two_beta = len(config.d_theta.vectors)
    if two_beta % 2:
        raise ContractViolationError("slant distribution must be even dimensional")
    beta = two_beta // 2
    min_gap = math.inf
    max_rhs = -math.inf
    for u in points:
        pf, sff, sp, _ = _point_data(config, u)
        hsq = h_norm_squared(sff)
        _, _, perp_sq, _ = grad_ln_f(config, u)
        rhs = bound_rhs_slant_fiber(beta, config.theta, perp_sq, config.s)
        min_gap = min(min_gap, hsq - rhs)
        max_rhs = max(max_rhs, rhs)
    count = len(points)
    checks.append(
        gap_check(
            "squared norm bound, slant fiber",
            "||h||^2 - (2 beta / 9) cos^2(theta) (||grad ln f||_perp^2 - s^2) >= 0",
            count,
            min_gap,
            tol,
        )
    )
    checks.append(
        info_record(
            "bound right side, slant fiber",
            "max of (2 beta / 9) cos^2(theta) (||grad ln f||_perp^2 - s^2)",
            count,
            max_rhs,
            notes=(
                "non-positive for every model-induced warping: "
                "the restricted gradient norm equals s while s^2 is subtracted"
            )
            if max_rhs <= 0.0
            else "",
        )
    )
    return checks


def check_reductions(tol=1e-12):
    """Structure-count reductions of the two bounds at s = 0 and s = 1.

    At s = 1 the subtracted constant is 1; at s = 0 the structure fields drop
    out and the bounds reduce to the almost-Hermitian forms.  Compared
    against independently written closed forms at a few sample inputs.
    """
    worst = 0.0
    samples = [
        (math.pi / 6, 0.7, 1, 2),
        (math.pi / 4, 1.3, 2, 1),
        (1.2, 2.5, 3, 2),
    ]
    for theta, nsq, alpha, beta in samples:
        cot2 = (math.cos(theta) / math.sin(theta)) ** 2
        cos2 = math.cos(theta) ** 2
        worst = max(
            worst,
            abs(bound_rhs_perp_fiber(alpha, theta, nsq, 1) - alpha * cot2 * (nsq - 1.0)),
            abs(bound_rhs_perp_fiber(alpha, theta, nsq, 0) - alpha * cot2 * nsq),
            abs(
                bound_rhs_slant_fiber(beta, theta, nsq, 1)
                - (2.0 * beta / 9.0) * cos2 * (nsq - 1.0)
            ),
            abs(
                bound_rhs_slant_fiber(beta, theta, nsq, 0)
                - (2.0 * beta / 9.0) * cos2 * nsq
            ),
        )
    return [
        residual_check(
            "bound reductions at s = 0 and s = 1",
            "structure-count specializations match the reduced closed forms",
            len(samples),
            worst,
            tol,
        )
    ]

"""Framed metric f-manifolds on coordinate charts.

Everything is evaluated pointwise through second-order jets: metric first and
second derivatives are exact, so Christoffel symbols and the Riemann tensor
carry only rounding error and the residuals of the structure identities are
meaningful down to ~1e-12.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import exprlang
from .errors import ContractViolationError, DegeneracyError
from .exprlang import Const, Expr, Var, eval_jet, parse
from .numcore import Jet
from .report import gap_check, info_record, residual_check

__all__ = [
    "Chart",
    "MetricField",
    "FramedStructure",
    "ConnectionValue",
    "CurvatureValue",
    "MetricPoint",
    "christoffel",
    "covariant_derivative_vector",
    "check_f_structure",
    "nijenhuis",
    "check_normal",
    "check_kenmotsu",
    "check_nearly_kenmotsu",
    "check_identities",
    "check_fundamental_form",
    "kenmotsu_f_model",
    "flat_control_structure",
    "sectional_curvature",
    "builtin_structure",
]


@dataclass(frozen=True)
class Chart:
    """A named coordinate chart with a sampling box per coordinate."""

    name: str
    coords: tuple
    bounds: dict = field(default_factory=dict)

    def __post_init__(self):
        if len(set(self.coords)) != len(self.coords):
            raise ContractViolationError("chart coordinate names must be unique")

    @property
    def dim(self):
        return len(self.coords)

    def bound(self, coord):
        return self.bounds.get(coord, (-1.0, 1.0))

    def sample(self, rng, count):
        """Seeded uniform draws inside the per-coordinate box."""
        lows = np.array([self.bound(c)[0] for c in self.coords])
        highs = np.array([self.bound(c)[1] for c in self.coords])
        return lows + (highs - lows) * rng.random((count, self.dim))

    def index(self, coord):
        return self.coords.index(coord)


def _as_expr(e):
    if isinstance(e, Expr):
        return e
    if isinstance(e, str):
        return parse(e)
    return Const(float(e))


def _eval_exprs_jets(exprs_flat, coords, point):
    """Evaluate a flat list of Exprs as jets with per-node sharing."""
    n = len(coords)
    bindings = {c: Jet.variable(point[i], i, n) for i, c in enumerate(coords)}
    cache = {}
    out = []
    for e in exprs_flat:
        key = id(e)
        if key not in cache:
            cache[key] = eval_jet(e, bindings)
        out.append(cache[key])
    return out


def matrix_jets(entries, coords, point):
    """Jets of a matrix of Exprs: values (m,n), jac (dim,m,n), hess (dim,dim,m,n)."""
    m = len(entries)
    n = len(entries[0])
    flat = [entries[i][j] for i in range(m) for j in range(n)]
    jets = _eval_exprs_jets(flat, coords, point)
    dim = len(coords)
    vals = np.empty((m, n))
    jac = np.empty((dim, m, n))
    hess = np.empty((dim, dim, m, n))
    for i in range(m):
        for j in range(n):
            jt = jets[i * n + j]
            vals[i, j] = jt.value
            jac[:, i, j] = jt.grad
            hess[:, :, i, j] = jt.hess
    return vals, jac, hess


def field_jets(components, coords, point):
    """Values and Jacobian of a vector field given by Exprs: (vals (m,), jac (m,dim))."""
    jets = _eval_exprs_jets(list(components), coords, point)
    vals = np.array([j.value for j in jets])
    jac = np.array([j.grad for j in jets])
    return vals, jac


class MetricField:
    """A symmetric matrix of Exprs over a chart."""

    def __init__(self, chart, entries):
        self.chart = chart
        n = chart.dim
        rows = [[_as_expr(entries[i][j]) for j in range(n)] for i in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                if rows[i][j] != rows[j][i]:
                    raise ContractViolationError(
                        f"metric entries ({i},{j}) and ({j},{i}) differ structurally"
                    )
        self.entries = rows

    def value(self, point):
        """Plain (derivative-free) evaluation; used by finite-difference oracles."""
        bindings = dict(zip(self.chart.coords, (float(x) for x in point)))
        n = self.chart.dim
        return np.array(
            [
                [exprlang.eval_value(self.entries[i][j], bindings) for j in range(n)]
                for i in range(n)
            ]
        )

    def at(self, point):
        return MetricPoint(self, np.asarray(point, dtype=float))


@dataclass
class ConnectionValue:
    """Christoffel symbols at a point, gamma[k, i, j] = Gamma^k_ij."""

    point: np.ndarray
    gamma: np.ndarray


@dataclass
class CurvatureValue:
    """Riemann tensor riemann[l, i, j, k] = (R(d_i, d_j) d_k)^l and Ricci matrix."""

    point: np.ndarray
    riemann: np.ndarray
    ricci: np.ndarray


class MetricPoint:
    """Metric jets and derived connection/curvature data at one point."""

    def __init__(self, metric, point):
        self.metric = metric
        self.point = point
        g, dg, d2g = matrix_jets(metric.entries, metric.chart.coords, point)
        self.g = 0.5 * (g + g.T)
        self.dg = dg  # dg[k, i, j] = d_k g_ij
        self.d2g = d2g  # d2g[m, k, i, j] = d_m d_k g_ij
        try:
            np.linalg.cholesky(self.g)
        except np.linalg.LinAlgError:
            raise DegeneracyError(
                f"metric is not positive-definite at {point.tolist()}"
            )
        self.ginv = np.linalg.inv(self.g)
        self._gamma = None
        self._dgamma = None
        self._curvature = None

    @property
    def gamma(self):
        if self._gamma is None:
            # C[l, i, j] = d_i g_jl + d_j g_il - d_l g_ij
            C = (
                np.einsum("ijl->lij", self.dg)
                + np.einsum("jil->lij", self.dg)
                - self.dg
            )
            self._C = C
            self._gamma = 0.5 * np.einsum("kl,lij->kij", self.ginv, C)
        return self._gamma

    @property
    def dgamma(self):
        """dgamma[m, k, i, j] = d_m Gamma^k_ij."""
        if self._dgamma is None:
            _ = self.gamma
            dC = (
                np.einsum("mijl->mlij", self.d2g)
                + np.einsum("mjil->mlij", self.d2g)
                - np.einsum("mlij->mlij", self.d2g)
            )
            dginv = -np.einsum("ka,mab,bl->mkl", self.ginv, self.dg, self.ginv)
            self._dgamma = 0.5 * (
                np.einsum("mkl,lij->mkij", dginv, self._C)
                + np.einsum("kl,mlij->mkij", self.ginv, dC)
            )
        return self._dgamma

    def connection(self):
        return ConnectionValue(self.point, self.gamma)

    def curvature(self):
        """Riemann R(d_i, d_j) d_k and Ricci S(Y, Z) = tr(X -> R(X, Y) Z)."""
        if self._curvature is None:
            gamma = self.gamma
            dgamma = self.dgamma
            riem = (
                np.einsum("iljk->lijk", dgamma)
                - np.einsum("jlik->lijk", dgamma)
                + np.einsum("lim,mjk->lijk", gamma, gamma)
                - np.einsum("ljm,mik->lijk", gamma, gamma)
            )
            ricci = np.einsum("iijk->jk", riem)
            self._curvature = CurvatureValue(self.point, riem, ricci)
        return self._curvature


def christoffel(metric, point):
    """Levi-Civita Christoffel symbols of `metric` at `point`."""
    return metric.at(point).connection()


def covariant_derivative_vector(metric, x_field, y_field, point):
    """(nabla_X Y)^k = X^i d_i Y^k + Gamma^k_ij X^i Y^j at `point`."""
    mp = metric.at(point)
    coords = metric.chart.coords
    xv, _ = field_jets(x_field, coords, point)
    yv, yjac = field_jets(y_field, coords, point)
    return yjac @ xv + np.einsum("kij,i,j->k", mp.gamma, xv, yv)


class FramedStructure:
    """(phi, xi_k, eta^k, g) on a chart; everything a matrix/list of Exprs."""

    def __init__(self, chart, metric, phi, xi, eta, name="structure"):
        self.chart = chart
        self.metric = metric
        n = chart.dim
        self.phi = [[_as_expr(phi[i][j]) for j in range(n)] for i in range(n)]
        self.xi = [[_as_expr(c) for c in v] for v in xi]
        self.eta = [[_as_expr(c) for c in v] for v in eta]
        if len(self.xi) != len(self.eta):
            raise ContractViolationError("xi and eta counts differ")
        self.s = len(self.xi)
        self.name = name

    @property
    def dim(self):
        return self.chart.dim

    def eval_at(self, point):
        return StructurePoint(self, np.asarray(point, dtype=float))

    def sample(self, rng, count):
        return self.chart.sample(rng, count)


class StructurePoint:
    """All structure tensors and their first derivatives at one point."""

    def __init__(self, structure, point):
        self.structure = structure
        self.point = point
        coords = structure.chart.coords
        self.mp = structure.metric.at(point)
        phi, dphi, _ = matrix_jets(structure.phi, coords, point)
        self.phi = phi  # phi[i, j]: i-th component of phi(d_j)
        self.dphi = dphi  # dphi[k, i, j] = d_k phi^i_j
        self.xi = []
        self.dxi = []
        for v in structure.xi:
            vals, jac = field_jets(v, coords, point)
            self.xi.append(vals)
            self.dxi.append(jac)
        self.eta = []
        self.deta = []
        for w in structure.eta:
            vals, jac = field_jets(w, coords, point)
            self.eta.append(vals)
            self.deta.append(jac)

    @property
    def g(self):
        return self.mp.g

    def fundamental_form(self):
        """Phi_ij = g(d_i, phi d_j)."""
        return self.mp.g @ self.phi

    def covariant_phi(self):
        """cphi[k, i, j]: k-th component of (nabla_{d_i} phi)(d_j)."""
        gamma = self.mp.gamma
        return (
            np.einsum("ikj->kij", self.dphi)
            + np.einsum("lj,kil->kij", self.phi, gamma)
            - np.einsum("lij,kl->kij", gamma, self.phi)
        )


def _max_abs(arr):
    return float(np.max(np.abs(arr))) if np.size(arr) else 0.0


# --------------------------------------------------------------------------
# Structure axiom checks
# --------------------------------------------------------------------------


def check_f_structure(structure, points, tol=1e-9):
    """Residuals of the framed metric f-structure axioms over sample points."""
    n = structure.dim
    s = structure.s
    names = [
        ("f-structure cubic axiom", "phi^3 + phi = 0"),
        ("structure pairing", "eta^j(xi_i) = delta_ij"),
        ("phi squared decomposition", "phi^2 = -I + sum eta^k (x) xi_k"),
        ("structure fields in kernel", "phi(xi_i) = 0"),
        ("one-forms annihilate image", "eta^i o phi = 0"),
        ("metric duality of eta", "eta^i(X) = g(X, xi_i)"),
        ("metric compatibility", "g(phi X, phi Y) = g(X, Y) - sum eta^i eta^i"),
        ("fundamental form antisymmetry", "g(X, phi Y) = -g(Y, phi X)"),
        ("projector decomposition", "P1 + P2 = I with P1, P2 idempotent"),
    ]
    worst = np.zeros(len(names))
    for p in points:
        sp = structure.eval_at(p)
        phi = sp.phi
        g = sp.g
        phi2 = phi @ phi
        res = []
        res.append(_max_abs(phi2 @ phi + phi))
        pair = np.array([[sp.eta[j] @ sp.xi[i] for i in range(s)] for j in range(s)])
        res.append(_max_abs(pair - np.eye(s)) if s else 0.0)
        eta_xi = sum(
            (np.outer(sp.xi[k], sp.eta[k]) for k in range(s)),
            np.zeros((n, n)),
        )
        res.append(_max_abs(phi2 + np.eye(n) - eta_xi))
        res.append(max((_max_abs(phi @ sp.xi[k]) for k in range(s)), default=0.0))
        res.append(max((_max_abs(sp.eta[k] @ phi) for k in range(s)), default=0.0))
        res.append(
            max((_max_abs(sp.eta[k] - g @ sp.xi[k]) for k in range(s)), default=0.0)
        )
        eta_sq = sum(
            (np.outer(sp.eta[k], sp.eta[k]) for k in range(s)),
            np.zeros((n, n)),
        )
        res.append(_max_abs(phi.T @ g @ phi - g + eta_sq))
        fund = g @ phi
        res.append(_max_abs(fund + fund.T))
        p1 = -phi2
        p2 = phi2 + np.eye(n)
        res.append(
            max(
                _max_abs(p1 + p2 - np.eye(n)),
                _max_abs(p1 @ p1 - p1),
                _max_abs(p2 @ p2 - p2),
            )
        )
        worst = np.maximum(worst, res)
    return [
        residual_check(name, ref, len(points), worst[i], tol)
        for i, (name, ref) in enumerate(names)
    ]


# --------------------------------------------------------------------------
# Nijenhuis tensor and normality
# --------------------------------------------------------------------------


def _nijenhuis_components(sp):
    """N[m, i, j]: m-th component of N_phi(d_i, d_j)."""
    phi = sp.phi
    dphi = sp.dphi  # dphi[k, m, j] = d_k phi^m_j
    # [phi d_i, phi d_j]^m = phi^l_i d_l phi^m_j - phi^l_j d_l phi^m_i
    br_pp = np.einsum("li,lmj->mij", phi, dphi) - np.einsum(
        "lj,lmi->mij", phi, dphi
    )
    # [phi d_i, d_j]^m = -d_j phi^m_i ; [d_i, phi d_j]^m = d_i phi^m_j
    br_p1 = -np.einsum("jmi->mij", dphi)
    br_1p = np.einsum("imj->mij", dphi)
    # [d_i, d_j] = 0, so the phi^2 term drops for coordinate fields
    return br_pp - np.einsum("mk,kij->mij", phi, br_p1) - np.einsum(
        "mk,kij->mij", phi, br_1p
    )


def nijenhuis(structure, x_field, y_field, point):
    """N_phi(X, Y) at `point` for Expr vector fields X, Y."""
    sp = structure.eval_at(point)
    coords = structure.chart.coords
    xv, xjac = field_jets(x_field, coords, point)
    yv, yjac = field_jets(y_field, coords, point)
    phi = sp.phi
    dphi = sp.dphi

    def bracket(av, ajac, bv, bjac):
        return bjac @ av - ajac @ bv

    def phi_apply(v, vjac):
        # (phi v)^m and its Jacobian d_k (phi^m_l v^l)
        pv = phi @ v
        pjac = np.einsum("kml,l->mk", dphi, v) + phi @ vjac
        return pv, pjac

    px, pxjac = phi_apply(xv, xjac)
    py, pyjac = phi_apply(yv, yjac)
    term = bracket(px, pxjac, py, pyjac)
    lie_xy = bracket(xv, xjac, yv, yjac)
    term = term + phi @ (phi @ lie_xy)
    term = term - phi @ bracket(px, pxjac, yv, yjac)
    term = term - phi @ bracket(xv, xjac, py, pyjac)
    return term


def check_normal(structure, points, tol=1e-8):
    """Residual of N_phi + 2 sum_k d(eta^k) (x) xi_k over coordinate pairs."""
    worst = 0.0
    for p in points:
        sp = structure.eval_at(p)
        nij = _nijenhuis_components(sp)
        total = nij.copy()
        for k in range(structure.s):
            deta = sp.deta[k]  # deta[i, j]? field_jets gives jac[comp, var]
            two_form = deta.T - deta  # (d eta)_ij = d_i eta_j - d_j eta_i
            total += 2.0 * np.einsum("m,ij->mij", sp.xi[k], two_form)
        worst = max(worst, _max_abs(total))
    return residual_check(
        "normality",
        "N_phi + 2 sum d(eta^k) (x) xi_k = 0",
        len(points),
        worst,
        tol,
    )


# --------------------------------------------------------------------------
# Kenmotsu conditions and the derived identities
# --------------------------------------------------------------------------


def _kenmotsu_residuals(sp):
    """Residual tensors of the Kenmotsu condition and its symmetrization."""
    n = sp.phi.shape[0]
    cphi = sp.covariant_phi()  # [k, i, j]
    g = sp.g
    phi = sp.phi
    rhs = np.zeros_like(cphi)
    for u in range(len(sp.xi)):
        # g(phi d_i, d_j) xi_u - eta^u(d_j) (phi d_i)
        gphi = (g @ phi).T  # gphi[i, j] = g(phi d_i, d_j)
        rhs += np.einsum("ij,k->kij", gphi, sp.xi[u])
        rhs -= np.einsum("j,ki->kij", sp.eta[u], phi)
    kenmotsu = cphi - rhs
    sym = cphi + np.einsum("kij->kji", cphi)
    near_rhs = np.zeros((n, n, n))
    for u in range(len(sp.xi)):
        near_rhs -= np.einsum("i,kj->kij", sp.eta[u], phi)
        near_rhs -= np.einsum("j,ki->kij", sp.eta[u], phi)
    nearly = sym - near_rhs
    return kenmotsu, nearly


def check_kenmotsu(structure, points, tol=1e-8):
    worst = 0.0
    for p in points:
        kenmotsu, _ = _kenmotsu_residuals(structure.eval_at(p))
        worst = max(worst, _max_abs(kenmotsu))
    return residual_check(
        "kenmotsu condition",
        "(nabla_X phi)Y = sum {g(phi X, Y) xi_k - eta^k(Y) phi X}",
        len(points),
        worst,
        tol,
    )


def check_nearly_kenmotsu(structure, points, tol=1e-8):
    worst_k = 0.0
    worst_n = 0.0
    for p in points:
        kenmotsu, nearly = _kenmotsu_residuals(structure.eval_at(p))
        worst_k = max(worst_k, _max_abs(kenmotsu))
        worst_n = max(worst_n, _max_abs(nearly))
    results = [
        residual_check(
            "kenmotsu condition",
            "(nabla_X phi)Y = sum {g(phi X, Y) xi_k - eta^k(Y) phi X}",
            len(points),
            worst_k,
            tol,
        ),
        residual_check(
            "nearly kenmotsu condition",
            "(nabla_X phi)Y + (nabla_Y phi)X = -sum {eta^k(X) phi Y + eta^k(Y) phi X}",
            len(points),
            worst_n,
            tol,
        ),
    ]
    note = (
        "implication holds: kenmotsu residual bounds the symmetrized residual"
        if worst_k <= tol
        else "structure is not kenmotsu at this tolerance"
    )
    results.append(
        info_record(
            "kenmotsu implies nearly kenmotsu",
            "symmetrizing the kenmotsu condition",
            len(points),
            max(worst_n - 2.0 * worst_k, 0.0),
            notes=note,
        )
    )
    return results


def check_kenmotsu_fails(structure, points, threshold=1e-2):
    """Control check: fraction of samples where the Kenmotsu residual is large."""
    hits = 0
    for p in points:
        kenmotsu, _ = _kenmotsu_residuals(structure.eval_at(p))
        if _max_abs(kenmotsu) > threshold:
            hits += 1
    frac = hits / max(len(points), 1)
    return gap_check(
        "kenmotsu control rejection",
        "flat-metric control must violate the kenmotsu condition",
        len(points),
        frac - 0.9,
        0.0,
        notes=f"violation fraction {frac:.3f} (needs >= 0.9)",
    )


def check_identities(structure, points, tol=1e-7, informational=False):
    """Connection/curvature identities of the nearly Kenmotsu structure.

    The curvature-and-structure identities are checked argument-by-argument
    over the coordinate frame.  For structures with a single structure field
    they hold everywhere; with several structure fields the records for the
    curvature identities can be requested as informational, since pairs of
    distinct structure directions deviate on the warped model (the z-block
    is flat while the stated right sides are not).
    """
    n = structure.dim
    s = structure.s
    res_xi = 0.0
    res_r_xi_first = 0.0
    res_r_xi_last = 0.0
    res_ricci = 0.0
    res_eta = 0.0
    res_eta_curv = 0.0
    res_antisym = 0.0
    res_bianchi = 0.0
    for p in points:
        sp = structure.eval_at(p)
        g = sp.g
        gamma = sp.mp.gamma
        phi = sp.phi
        cv = sp.mp.curvature()
        riem = cv.riemann  # [l, i, j, k]
        eta_mat = np.array(sp.eta) if s else np.zeros((0, n))
        xi_mat = np.array(sp.xi) if s else np.zeros((0, n))

        # nabla_{d_i} xi_k = -phi^2 d_i
        phi2 = phi @ phi
        for k in range(s):
            lhs = sp.dxi[k] + np.einsum("mij,j->mi", gamma, sp.xi[k])
            res_xi = max(res_xi, _max_abs(lhs + phi2))

        # R(xi_u, X) Y = sum_k {-g(X, Y) xi_k + eta^k(Y) X}
        eta_sum = eta_mat.sum(axis=0) if s else np.zeros(n)
        xi_sum = xi_mat.sum(axis=0) if s else np.zeros(n)
        for u in range(s):
            lhs = np.einsum("lijk,i->ljk", riem, sp.xi[u])
            rhs = -np.einsum("jk,l->ljk", g, xi_sum)
            rhs = rhs + np.einsum("k,lj->ljk", eta_sum, np.eye(n))
            res_r_xi_first = max(res_r_xi_first, _max_abs(lhs - rhs))

        # R(X, Y) xi_u = sum_k {eta^k(X) Y - eta^k(Y) X}
        rhs_last = np.einsum("i,lj->lij", eta_sum, np.eye(n)) - np.einsum(
            "j,li->lij", eta_sum, np.eye(n)
        )
        for u in range(s):
            lhs = np.einsum("lijk,k->lij", riem, sp.xi[u])
            res_r_xi_last = max(res_r_xi_last, _max_abs(lhs - rhs_last))

        # S(phi X, phi Y) = S(X, Y) + (2n + s - 1) sum eta^k(X) eta^k(Y)
        ric = cv.ricci
        half_dim = (n - s) // 2
        const = 2 * half_dim + s - 1
        eta_sq = (
            np.einsum("ui,uj->ij", eta_mat, eta_mat) if s else np.zeros((n, n))
        )
        res_ricci = max(
            res_ricci, _max_abs(phi.T @ ric @ phi - ric - const * eta_sq)
        )

        # (nabla_{d_i} eta^u)(d_j) = g_ij - sum eta^k(d_i) eta^k(d_j)
        for u in range(s):
            lhs = sp.deta[u].T - np.einsum("mij,m->ij", gamma, sp.eta[u])
            res_eta = max(res_eta, _max_abs(lhs - g + eta_sq))

        # eta^u(R(X, Y) Z) = sum_k {g(X, Z) eta^k(Y) - g(Y, Z) eta^k(X)}
        rhs_curv = np.einsum("ik,j->ijk", g, eta_sum) - np.einsum(
            "jk,i->ijk", g, eta_sum
        )
        for u in range(s):
            lhs = np.einsum("l,lijk->ijk", sp.eta[u], riem)
            res_eta_curv = max(res_eta_curv, _max_abs(lhs - rhs_curv))

        res_antisym = max(
            res_antisym, _max_abs(riem + np.einsum("lijk->ljik", riem))
        )
        bianchi = (
            riem
            + np.einsum("lijk->ljki", riem)
            + np.einsum("lijk->lkij", riem)
        )
        res_bianchi = max(res_bianchi, _max_abs(bianchi))

    count = len(points)
    make = info_record if informational else (
        lambda name, ref, cnt, val, note="": residual_check(name, ref, cnt, val, tol, note)
    )
    results = [
        make(
            "structure field covariant derivative",
            "nabla_X xi_i = -phi^2 X",
            count,
            res_xi,
        ),
        make(
            "curvature with structure field first",
            "R(xi_i, X)Y = sum {-g(X, Y) xi_k + eta^k(Y) X}",
            count,
            res_r_xi_first,
        ),
        make(
            "curvature with structure field last",
            "R(X, Y) xi_i = sum {eta^k(X) Y - eta^k(Y) X}",
            count,
            res_r_xi_last,
        ),
        make(
            "eta covariant derivative",
            "(nabla_X eta^i)Y = g(X, Y) - sum eta^k(X) eta^k(Y)",
            count,
            res_eta,
        ),
        make(
            "eta of curvature",
            "eta^k(R(X, Y)Z) = sum {g(X, Z) eta^k(Y) - g(Y, Z) eta^k(X)}",
            count,
            res_eta_curv,
        ),
        info_record(
            "ricci phi-invariance defect",
            "S(phi X, phi Y) - S(X, Y) - (2n + s - 1) sum eta eta",
            count,
            res_ricci,
            notes="informational: the stated constant only matches one structure field",
        ),
        residual_check(
            "curvature antisymmetry",
            "R(X, Y) = -R(Y, X)",
            count,
            res_antisym,
            1e-8,
        ),
        residual_check(
            "first bianchi identity",
            "R(X, Y)Z + R(Y, Z)X + R(Z, X)Y = 0",
            count,
            res_bianchi,
            1e-8,
        ),
    ]
    return results


def check_fundamental_form(structure, points, tol=1e-8):
    """Residual of d(Phi) = 2 (sum_k eta^k) wedge Phi over coordinate triples."""
    n = structure.dim
    coords = structure.chart.coords
    worst = 0.0
    for p in points:
        sp = structure.eval_at(p)
        # Phi as jets: Phi_ij = g_ik phi^k_j, with derivative via product rule
        phi_val = sp.phi
        g_val = sp.g
        dphi = sp.dphi  # [k, i, j]
        dg = sp.mp.dg  # [k, i, j]
        fund = g_val @ phi_val
        dfund = np.einsum("kil,lj->kij", dg, phi_val) + np.einsum(
            "il,klj->kij", g_val, dphi
        )
        # (d Phi)_{abc} = d_a Phi_bc - d_b Phi_ac + d_c Phi_ab
        dPhi = (
            dfund
            - np.einsum("bac->abc", dfund)
            + np.einsum("cab->abc", dfund)
        )
        eta_sum = (
            np.sum(np.array(sp.eta), axis=0) if structure.s else np.zeros(n)
        )
        wedge = (
            np.einsum("a,bc->abc", eta_sum, fund)
            + np.einsum("b,ca->abc", eta_sum, fund)
            + np.einsum("c,ab->abc", eta_sum, fund)
        )
        worst = max(worst, _max_abs(dPhi - 2.0 * wedge))
    return residual_check(
        "fundamental form exterior derivative",
        "d(Phi) = 2 (sum eta^k) wedge Phi",
        len(points),
        worst,
        tol,
    )


def sectional_curvature(metric, point, i=0, j=1):
    """Sectional curvature of the coordinate plane (d_i, d_j)."""
    mp = metric.at(point)
    riem = mp.curvature().riemann
    g = mp.g
    # K = g(R(d_i, d_j) d_j, d_i) / (g_ii g_jj - g_ij^2)
    num = float(g[:, i] @ riem[:, i, j, j])
    den = g[i, i] * g[j, j] - g[i, j] ** 2
    return num / den


# --------------------------------------------------------------------------
# Built-in models
# --------------------------------------------------------------------------


def kenmotsu_f_model(n, s, name=None):
    """Warped coordinate model carrying a Kenmotsu f-structure.

    Chart (x_1..x_n, y_1..y_n, z_1..z_s), metric
    exp(2(z_1+..+z_s)) sum(dx^2 + dy^2) + sum dz^2, phi(dx_i) = dy_i,
    phi(dy_i) = -dx_i, xi_k = dz_k, eta^k = dz_k.
    """
    if n < 1 or s < 0:
        raise ContractViolationError("need n >= 1 and s >= 0")
    coords = (
        tuple(f"x{i + 1}" for i in range(n))
        + tuple(f"y{i + 1}" for i in range(n))
        + tuple(f"z{k + 1}" for k in range(s))
    )
    bounds = {f"z{k + 1}": (0.1, 1.0) for k in range(s)}
    chart = Chart(name or f"kenmotsu-f-model-{n}-{s}", coords, bounds)
    dim = 2 * n + s
    zero = Const(0.0)
    one = Const(1.0)
    if s:
        zsum = Var("z1")
        for k in range(1, s):
            zsum = exprlang.BinOp("+", zsum, Var(f"z{k + 1}"))
        warp = exprlang.Call("exp", exprlang.BinOp("*", Const(2.0), zsum))
    else:
        warp = one
    entries = [[zero] * dim for _ in range(dim)]
    for a in range(2 * n):
        entries[a][a] = warp
    for k in range(s):
        entries[2 * n + k][2 * n + k] = one
    metric = MetricField(chart, entries)
    phi = [[zero] * dim for _ in range(dim)]
    for i in range(n):
        phi[n + i][i] = one  # phi(dx_i) = dy_i
        phi[i][n + i] = Const(-1.0)  # phi(dy_i) = -dx_i
    xi = []
    eta = []
    for k in range(s):
        vec = [zero] * dim
        vec[2 * n + k] = one
        xi.append(vec)
        eta.append(list(vec))
    return FramedStructure(
        chart, metric, phi, xi, eta, name=name or f"kenmotsu-f-model({n},{s})"
    )


def flat_control_structure(n, s):
    """Same phi, xi, eta as the model but with the flat coordinate metric.

    A control that keeps the algebraic axioms but breaks the Kenmotsu
    condition (the covariant derivative of phi vanishes identically).
    """
    model = kenmotsu_f_model(n, s)
    dim = model.dim
    flat = [
        [Const(1.0) if i == j else Const(0.0) for j in range(dim)]
        for i in range(dim)
    ]
    chart = Chart(f"flat-control-{n}-{s}", model.chart.coords, dict(model.chart.bounds))
    return FramedStructure(
        chart,
        MetricField(chart, flat),
        model.phi,
        model.xi,
        model.eta,
        name=f"flat-control({n},{s})",
    )


def sphere_metric(radius=1.0):
    """Round metric on the 2-sphere of given radius (polar chart)."""
    chart = Chart(
        "sphere",
        ("theta", "phi"),
        {"theta": (0.3, 2.8), "phi": (-3.0, 3.0)},
    )
    r2 = Const(radius * radius)
    entries = [
        [r2, Const(0.0)],
        [Const(0.0), parse(f"{radius * radius}*sin(theta)^2")],
    ]
    return MetricField(chart, entries)


_BUILTIN_STRUCTURES = {
    "example-1": lambda: kenmotsu_f_model(6, 2, name="example-1"),
    "kenmotsu-f-model": lambda: kenmotsu_f_model(3, 1),
}


def builtin_structure(name):
    try:
        return _BUILTIN_STRUCTURES[name]()
    except KeyError:
        raise ContractViolationError(f"unknown built-in structure {name!r}")

"""Scenario file loading, validation and execution.

Scenario files are YAML with expression-language strings for all
mathematical content.  Every structural problem is reported as a
ScenarioError before any numerical work starts.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import yaml

from .ambient import (
    Chart,
    FramedStructure,
    MetricField,
    builtin_structure,
    check_f_structure,
    check_fundamental_form,
    check_identities,
    check_kenmotsu,
    check_kenmotsu_fails,
    check_nearly_kenmotsu,
    check_normal,
)
from .battery import run_suite as run_builtin_suite
from .errors import ContractViolationError, ExprSyntaxError, ScenarioError
from .exprlang import free_vars, parse
from .report import Report, residual_check
from .subgeom import (
    Distribution,
    Immersion,
    check_slant_relations,
    check_submanifold_identities,
    classify_pseudo_slant,
    frames,
    induced_metric,
)
from .warpineq import WarpedProduct, check_lemma_warped_connection

__all__ = ["Scenario", "load_scenario", "scenario_from_dict", "run_scenario"]

_AMBIENT_SUITES = (
    "f-structure",
    "normality",
    "kenmotsu",
    "nearly-kenmotsu",
    "kenmotsu-control",
    "fundamental-form",
    "identities",
    "identities-informational",
)

_SUBMANIFOLD_SUITES = ("frames", "induced-metric", "identities", "slant-relations", "pseudo-slant")

_BUILTIN_SUITES = (
    "ambient-axioms",
    "model-identities",
    "cone-example",
    "surface-example",
    "synthesized-submanifolds",
    "warped-products",
    "paper-theorems",
)

_TOP_KEYS = {
    "name",
    "seed",
    "samples",
    "tolerances",
    "ambient",
    "suites",
    "builtin-suites",
    "submanifolds",
    "warped",
}


def _require_mapping(obj, what):
    if not isinstance(obj, dict):
        raise ScenarioError(f"{what} must be a mapping, got {type(obj).__name__}")
    return obj


def _require_list(obj, what):
    if not isinstance(obj, list):
        raise ScenarioError(f"{what} must be a list, got {type(obj).__name__}")
    return obj


def _parse_expr(text, what, coords=None):
    if isinstance(text, (int, float)) and not isinstance(text, bool):
        text = repr(float(text))
    if not isinstance(text, str):
        raise ScenarioError(f"{what} must be an expression string, got {text!r}")
    try:
        expr = parse(text)
    except ExprSyntaxError as err:
        raise ScenarioError(f"{what}: {err}")
    if coords is not None:
        extra = free_vars(expr) - set(coords)
        if extra:
            raise ScenarioError(
                f"{what} uses unknown coordinate(s) {sorted(extra)}"
            )
    return expr


def _parse_chart(data, what, default_name):
    data = _require_mapping(data, what)
    unknown = set(data) - {"name", "coords", "bounds"}
    if unknown:
        raise ScenarioError(f"{what} has unknown keys {sorted(unknown)}")
    coords = _require_list(data.get("coords"), f"{what}.coords")
    if not coords or not all(isinstance(c, str) for c in coords):
        raise ScenarioError(f"{what}.coords must be a non-empty list of names")
    if len(set(coords)) != len(coords):
        raise ScenarioError(f"{what}.coords contains duplicates")
    bounds = {}
    for c, rng in _require_mapping(data.get("bounds", {}), f"{what}.bounds").items():
        if c not in coords:
            raise ScenarioError(f"{what}.bounds names unknown coordinate {c!r}")
        if (
            not isinstance(rng, list)
            or len(rng) != 2
            or not all(isinstance(x, (int, float)) for x in rng)
            or not rng[0] < rng[1]
        ):
            raise ScenarioError(f"{what}.bounds[{c!r}] must be [lo, hi] with lo < hi")
        bounds[c] = (float(rng[0]), float(rng[1]))
    return Chart(str(data.get("name", default_name)), tuple(coords), bounds)


def _parse_matrix(data, what, dim, coords, rows=None):
    data = _require_list(data, what)
    rows = dim if rows is None else rows
    if len(data) != rows:
        raise ScenarioError(f"{what} must have {rows} rows, got {len(data)}")
    out = []
    for i, row in enumerate(data):
        row = _require_list(row, f"{what}[{i}]")
        if len(row) != dim:
            raise ScenarioError(
                f"{what}[{i}] must have {dim} entries, got {len(row)}"
            )
        out.append([_parse_expr(e, f"{what}[{i}][{j}]", coords) for j, e in enumerate(row)])
    return out


def _parse_ambient(data):
    data = _require_mapping(data, "ambient")
    if "builtin" in data:
        extra = set(data) - {"builtin"}
        if extra:
            raise ScenarioError(
                f"ambient with 'builtin' admits no other keys, got {sorted(extra)}"
            )
        try:
            return builtin_structure(data["builtin"])
        except ContractViolationError as err:
            raise ScenarioError(str(err))
    required = {"chart", "metric", "phi", "xi", "eta"}
    missing = required - set(data)
    if missing:
        raise ScenarioError(f"ambient missing keys {sorted(missing)}")
    unknown = set(data) - required - {"name"}
    if unknown:
        raise ScenarioError(f"ambient has unknown keys {sorted(unknown)}")
    chart = _parse_chart(data["chart"], "ambient.chart", "ambient")
    dim = chart.dim
    coords = chart.coords
    metric = _parse_matrix(data["metric"], "ambient.metric", dim, coords)
    phi = _parse_matrix(data["phi"], "ambient.phi", dim, coords)
    xi = _parse_matrix(data["xi"], "ambient.xi", dim, coords, rows=len(data["xi"]))
    eta = _parse_matrix(data["eta"], "ambient.eta", dim, coords, rows=len(data["eta"]))
    if len(xi) != len(eta):
        raise ScenarioError("ambient.xi and ambient.eta must have equal length")
    return FramedStructure(
        chart,
        MetricField(chart, metric),
        phi,
        xi,
        eta,
        name=str(data.get("name", "ambient")),
    )


@dataclass
class SubmanifoldSpec:
    name: str
    imm: Immersion
    suites: list
    distributions: dict
    slant: dict | None  # {"distribution": name, "theta": float}
    pseudo_slant: dict | None  # {"slant": name, "anti": name}
    expected_metric: list | None  # diagonal entries as Exprs over the chart


def _parse_submanifold(data, idx, ambient):
    what = f"submanifolds[{idx}]"
    data = _require_mapping(data, what)
    unknown = set(data) - {
        "name",
        "chart",
        "components",
        "suites",
        "distributions",
        "slant",
        "pseudo-slant",
        "expected-metric-diagonal",
    }
    if unknown:
        raise ScenarioError(f"{what} has unknown keys {sorted(unknown)}")
    if ambient is None:
        raise ScenarioError(f"{what} requires an ambient section")
    name = str(data.get("name", f"submanifold-{idx}"))
    chart = _parse_chart(data.get("chart"), f"{what}.chart", name)
    comps = _require_list(data.get("components"), f"{what}.components")
    if len(comps) != ambient.dim:
        raise ScenarioError(
            f"{what}.components must have {ambient.dim} entries, got {len(comps)}"
        )
    components = [
        _parse_expr(c, f"{what}.components[{i}]", chart.coords)
        for i, c in enumerate(comps)
    ]
    imm = Immersion(chart, ambient, components, name=name)
    suites = _require_list(data.get("suites", []), f"{what}.suites")
    for s in suites:
        if s not in _SUBMANIFOLD_SUITES:
            raise ScenarioError(
                f"{what}.suites: unknown suite {s!r}; known: {list(_SUBMANIFOLD_SUITES)}"
            )
    distributions = {}
    for j, d in enumerate(_require_list(data.get("distributions", []), f"{what}.distributions")):
        dwhat = f"{what}.distributions[{j}]"
        d = _require_mapping(d, dwhat)
        extra = set(d) - {"name", "role", "vectors"}
        if extra:
            raise ScenarioError(f"{dwhat} has unknown keys {sorted(extra)}")
        dname = str(d.get("name", f"distribution-{j}"))
        role = str(d.get("role", "slant"))
        if role not in ("slant", "anti-invariant", "structure"):
            raise ScenarioError(f"{dwhat}.role must be slant/anti-invariant/structure")
        vectors = []
        for k, vec in enumerate(_require_list(d.get("vectors"), f"{dwhat}.vectors")):
            vec = _require_list(vec, f"{dwhat}.vectors[{k}]")
            if len(vec) != chart.dim:
                raise ScenarioError(
                    f"{dwhat}.vectors[{k}] must have {chart.dim} entries"
                )
            vectors.append(
                [_parse_expr(c, f"{dwhat}.vectors[{k}][{i}]", chart.coords) for i, c in enumerate(vec)]
            )
        distributions[dname] = Distribution(dname, role, vectors)
    slant = data.get("slant")
    if slant is not None:
        slant = _require_mapping(slant, f"{what}.slant")
        if set(slant) != {"theta"} and set(slant) != {"theta", "distribution"}:
            raise ScenarioError(f"{what}.slant needs 'theta' (and optional 'distribution')")
        if not isinstance(slant["theta"], (int, float)):
            raise ScenarioError(f"{what}.slant.theta must be a number")
        dist = slant.get("distribution")
        if dist is not None and dist not in distributions:
            raise ScenarioError(f"{what}.slant names unknown distribution {dist!r}")
    pseudo = data.get("pseudo-slant")
    if pseudo is not None:
        pseudo = _require_mapping(pseudo, f"{what}.pseudo-slant")
        if set(pseudo) != {"slant", "anti"}:
            raise ScenarioError(f"{what}.pseudo-slant needs exactly 'slant' and 'anti'")
        for key in ("slant", "anti"):
            if pseudo[key] not in distributions:
                raise ScenarioError(
                    f"{what}.pseudo-slant names unknown distribution {pseudo[key]!r}"
                )
    expected = data.get("expected-metric-diagonal")
    if expected is not None:
        expected = _require_list(expected, f"{what}.expected-metric-diagonal")
        if len(expected) != chart.dim:
            raise ScenarioError(
                f"{what}.expected-metric-diagonal must have {chart.dim} entries"
            )
        expected = [
            _parse_expr(e, f"{what}.expected-metric-diagonal[{i}]", chart.coords)
            for i, e in enumerate(expected)
        ]
    if "slant-relations" in suites and slant is None:
        raise ScenarioError(f"{what}: suite 'slant-relations' requires a 'slant' section")
    if "pseudo-slant" in suites and pseudo is None:
        raise ScenarioError(f"{what}: suite 'pseudo-slant' requires a 'pseudo-slant' section")
    if "induced-metric" in suites and expected is None:
        raise ScenarioError(
            f"{what}: suite 'induced-metric' requires 'expected-metric-diagonal'"
        )
    return SubmanifoldSpec(name, imm, suites, distributions, slant, pseudo, expected)


def _parse_warped(data, idx):
    what = f"warped[{idx}]"
    data = _require_mapping(data, what)
    unknown = set(data) - {"name", "base", "fiber", "warping"}
    if unknown:
        raise ScenarioError(f"{what} has unknown keys {sorted(unknown)}")
    factors = []
    for key in ("base", "fiber"):
        fdata = _require_mapping(data.get(key), f"{what}.{key}")
        extra = set(fdata) - {"coords", "bounds", "metric", "name"}
        if extra:
            raise ScenarioError(f"{what}.{key} has unknown keys {sorted(extra)}")
        chart = _parse_chart(
            {k: fdata[k] for k in ("name", "coords", "bounds") if k in fdata},
            f"{what}.{key}",
            key,
        )
        metric = _parse_matrix(
            fdata.get("metric"), f"{what}.{key}.metric", chart.dim, chart.coords
        )
        factors.append((chart, metric))
    (base_chart, base_metric), (fiber_chart, fiber_metric) = factors
    warping = _parse_expr(data.get("warping"), f"{what}.warping", base_chart.coords)
    try:
        wp = WarpedProduct(base_chart, base_metric, fiber_chart, fiber_metric, warping)
    except ContractViolationError as err:
        raise ScenarioError(f"{what}: {err}")
    return str(data.get("name", f"warped-{idx}")), wp


@dataclass
class Scenario:
    """A validated scenario, ready to run."""

    name: str
    seed: int
    samples: int
    tol_alg: float
    tol_curv: float
    ambient: FramedStructure | None
    suites: list
    builtin_suites: list
    submanifolds: list = field(default_factory=list)
    warped: list = field(default_factory=list)


def scenario_from_dict(data, default_name="scenario"):
    data = _require_mapping(data, "scenario")
    unknown = set(data) - _TOP_KEYS
    if unknown:
        raise ScenarioError(f"scenario has unknown keys {sorted(unknown)}")
    name = str(data.get("name", default_name))
    seed = data.get("seed", 42)
    samples = data.get("samples", 64)
    if not isinstance(seed, int) or isinstance(seed, bool):
        raise ScenarioError("seed must be an integer")
    if not isinstance(samples, int) or isinstance(samples, bool) or samples < 1:
        raise ScenarioError("samples must be a positive integer")
    tols = _require_mapping(data.get("tolerances", {}), "tolerances")
    extra = set(tols) - {"algebraic", "curvature"}
    if extra:
        raise ScenarioError(f"tolerances has unknown keys {sorted(extra)}")
    tol_alg = float(tols.get("algebraic", 1e-9))
    tol_curv = float(tols.get("curvature", 1e-7))
    if tol_alg <= 0 or tol_curv <= 0:
        raise ScenarioError("tolerances must be positive")
    ambient = _parse_ambient(data["ambient"]) if "ambient" in data else None
    suites = _require_list(data.get("suites", []), "suites")
    for s in suites:
        if s not in _AMBIENT_SUITES:
            raise ScenarioError(
                f"unknown ambient suite {s!r}; known: {list(_AMBIENT_SUITES)}"
            )
    if suites and ambient is None:
        raise ScenarioError("ambient suites require an ambient section")
    builtin_suites = _require_list(data.get("builtin-suites", []), "builtin-suites")
    for s in builtin_suites:
        if s not in _BUILTIN_SUITES:
            raise ScenarioError(
                f"unknown builtin suite {s!r}; known: {list(_BUILTIN_SUITES)}"
            )
    submanifolds = [
        _parse_submanifold(d, i, ambient)
        for i, d in enumerate(_require_list(data.get("submanifolds", []), "submanifolds"))
    ]
    warped = [
        _parse_warped(d, i)
        for i, d in enumerate(_require_list(data.get("warped", []), "warped"))
    ]
    if not (suites or builtin_suites or submanifolds or warped):
        raise ScenarioError("scenario declares nothing to run")
    return Scenario(
        name=name,
        seed=seed,
        samples=samples,
        tol_alg=tol_alg,
        tol_curv=tol_curv,
        ambient=ambient,
        suites=suites,
        builtin_suites=builtin_suites,
        submanifolds=submanifolds,
        warped=warped,
    )


def load_scenario(path):
    try:
        with open(path, "r") as fh:
            data = yaml.safe_load(fh)
    except yaml.YAMLError as err:
        raise ScenarioError(f"cannot parse {path}: {err}")
    if data is None:
        raise ScenarioError(f"{path} is empty")
    import os

    stem = os.path.splitext(os.path.basename(str(path)))[0]
    return scenario_from_dict(data, default_name=stem)


# --------------------------------------------------------------------------
# Execution
# --------------------------------------------------------------------------


def _run_ambient_suite(name, structure, points, tol_alg, tol_curv):
    if name == "f-structure":
        return check_f_structure(structure, points, tol=tol_alg)
    if name == "normality":
        return [check_normal(structure, points, tol=tol_curv)]
    if name == "kenmotsu":
        return [check_kenmotsu(structure, points, tol=tol_curv)]
    if name == "nearly-kenmotsu":
        return check_nearly_kenmotsu(structure, points, tol=tol_curv)
    if name == "kenmotsu-control":
        return [check_kenmotsu_fails(structure, points)]
    if name == "fundamental-form":
        return [check_fundamental_form(structure, points, tol=tol_curv)]
    if name == "identities":
        return check_identities(structure, points, tol=tol_curv)
    if name == "identities-informational":
        return check_identities(structure, points, tol=tol_curv, informational=True)
    raise ScenarioError(f"unknown ambient suite {name!r}")


def _run_submanifold(spec, rng, samples, tol_alg, tol_curv):
    from .exprlang import eval_value

    count = max(3, min(samples, 20))
    points = spec.imm.sample(rng, count)
    out = []
    if "frames" in spec.suites:
        worst = 0.0
        for u in points:
            pf = frames(spec.imm, u)
            full = pf.tangent + pf.normal
            gram = np.array(
                [[pf.g.inner(a, b) for b in full] for a in full]
            )
            worst = max(worst, float(np.max(np.abs(gram - np.eye(len(full))))))
        out.append(
            residual_check(
                f"{spec.name}: adapted frame orthonormality",
                "tangent plus normal frame is a g-orthonormal basis",
                count,
                worst,
                tol_alg,
            )
        )
    if "induced-metric" in spec.suites:
        worst = 0.0
        for u in points:
            G = induced_metric(spec.imm, u).matrix
            bindings = dict(zip(spec.imm.chart.coords, (float(x) for x in u)))
            expected = np.diag(
                [eval_value(e, bindings) for e in spec.expected_metric]
            )
            worst = max(worst, float(np.max(np.abs(G - expected))))
        out.append(
            residual_check(
                f"{spec.name}: induced metric",
                "Jacobian pullback matches the declared diagonal",
                count,
                worst,
                tol_alg,
            )
        )
    if "identities" in spec.suites:
        for rec in check_submanifold_identities(spec.imm, points, tol=1e-6):
            rec.name = f"{spec.name}: {rec.name}"
            out.append(rec)
    if "slant-relations" in spec.suites:
        for rec in check_slant_relations(
            spec.imm, float(spec.slant["theta"]), points, tol=tol_curv
        ):
            rec.name = f"{spec.name}: {rec.name}"
            out.append(rec)
    if "pseudo-slant" in spec.suites:
        d_theta = spec.distributions[spec.pseudo_slant["slant"]]
        d_perp = spec.distributions[spec.pseudo_slant["anti"]]
        for rec in classify_pseudo_slant(spec.imm, d_theta, d_perp, points):
            rec.name = f"{spec.name}: {rec.name}"
            out.append(rec)
    return out


def run_scenario(sc, samples=None, seed=None, tol_alg=None, tol_curv=None):
    """Execute a validated scenario; overrides replace the declared values."""
    samples = sc.samples if samples is None else samples
    seed = sc.seed if seed is None else seed
    tol_alg = sc.tol_alg if tol_alg is None else tol_alg
    tol_curv = sc.tol_curv if tol_curv is None else tol_curv
    rng = np.random.default_rng(seed)
    report = Report(sc.name, seed, samples)
    if sc.suites:
        points = sc.ambient.sample(rng, samples)
        for name in sc.suites:
            report.extend(
                _run_ambient_suite(name, sc.ambient, points, tol_alg, tol_curv)
            )
    for name in sc.builtin_suites:
        report.extend(run_builtin_suite(name, samples, rng, tol_alg, tol_curv))
    for spec in sc.submanifolds:
        report.extend(_run_submanifold(spec, rng, samples, tol_alg, tol_curv))
    for name, wp in sc.warped:
        points = wp.chart().sample(rng, max(3, min(samples, 20)))
        for rec in check_lemma_warped_connection(wp, points, tol=tol_curv):
            rec.name = f"{name}: {rec.name}"
            report.add(rec)
    return report

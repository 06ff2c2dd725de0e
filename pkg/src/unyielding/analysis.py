"""One-shot analysis of a configuration: dependence, frameworks, invariants, flex verdicts."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import curved, invariants
from .dependence import Flavor, affine_dependence, build_framework, radon_partition
from .errors import UnsupportedDimension
from .flex import first_order_flex
from .geometry import MetricSignature, PointConfiguration, Space
from .reports import configuration_dict, framework_dict, framework_from_spec
from .sampling import random_curved_points, trial_rng

DEFAULT_TOLERANCES = {
    "general_position": 1e-8,
    "root_zero": invariants.ROOT_ZERO_TOL,
    "repeated_root": invariants.REPEATED_ROOT_TOL,
    "perpendicular": invariants.PERPENDICULAR_TOL,
    "cosphericity": 1e-9,
    "unyielding": 1e-8,
}


@dataclass
class AnalysisReport:
    configuration: dict
    tolerances: dict
    dependence: dict
    frameworks: list
    invariants: dict
    flex: list
    cosphericity: dict | None = None
    orthocentric: dict | None = None
    framework_request: dict | None = None
    warnings: list = field(default_factory=list)
    seed: int = 0

    def to_dict(self) -> dict:
        d = {
            "kind": "analysis",
            "seed": self.seed,
            "configuration": self.configuration,
            "tolerances": self.tolerances,
            "dependence": self.dependence,
            "frameworks": self.frameworks,
            "invariants": self.invariants,
        }
        if self.cosphericity is not None:
            d["cosphericity"] = self.cosphericity
        if self.orthocentric is not None:
            d["orthocentric"] = self.orthocentric
        d["flex"] = self.flex
        if self.framework_request is not None:
            d["framework_request"] = self.framework_request
        d["warnings"] = self.warnings
        return d


def _names(config, idx):
    return [config.labels[i] for i in idx]


def _relative_gap(a, b) -> float:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    scale = max(float(np.abs(a).max()), 1.0)
    return float(np.abs(a - b).max() / scale)


def _euclidean_invariants(config, dep, rng, tol, warnings):
    n = config.n
    P = rng.normal(size=n)
    Q = rng.normal(size=n)
    direct = [invariants.c_direct(k, dep, config, P, Q) for k in range(n + 1)]
    if config.m == n + 2:
        prof = invariants.c_matrix(dep, config)
        roots, pos, neg = invariants.roots_and_signs(prof, dep, tol["root_zero"])
        predicted = invariants.predicted_sign_counts(dep)
        return {
            "route": "matrix",
            "c": prof.c,
            "c_direct": direct,
            "max_route_deviation": _relative_gap(prof.c, direct),
            "charpoly": prof.charpoly,
            "roots": roots,
            "positive_count": pos,
            "negative_count": neg,
            "predicted_counts": list(predicted),
            "sign_counts_match": [pos, neg] == list(predicted),
        }, prof
    warnings.append("more than n + 2 points: dependence is not unique, reported alpha is one representative")
    prof = invariants.generalized_charpoly(config, dep.alpha)
    companion = np.sort(invariants.companion_roots(prof).real)
    return {
        "route": "generalized",
        "c": prof.c,
        "c_direct": direct,
        "max_route_deviation": _relative_gap(prof.c, direct),
        "charpoly": prof.charpoly,
        "roots": prof.roots,
        "companion_roots": companion,
    }, prof


def _curved_invariants(config, dep, rng, warnings):
    n = config.n
    cp = curved.curved_charpoly(dep, config)
    big = MetricSignature(config.space, n + 2)
    P, Q = random_curved_points(big, 2, rng, scale=0.5)
    probe = []
    for k in range(n + 1):
        try:
            probe.append(curved.curved_c_probe(k, dep, config, P, Q))
        except UnsupportedDimension:
            probe.append(float("nan"))
    if n > curved.MAX_EXACT_C:
        warnings.append(f"curved c_4..c_{n} unavailable in closed form; charpoly incomplete")
    sum_alpha = float(np.sum(dep.alpha))
    both = np.isfinite(cp.c) & np.isfinite(probe)
    out = {
        "route": "curved",
        "c": cp.c,
        "c_probe": probe,
        "max_route_deviation": _relative_gap(np.asarray(cp.c)[both], np.asarray(probe)[both]),
        "c1_identity": 2.0 * config.metric.curvature * sum_alpha,
        "charpoly": cp.profile.charpoly,
        "roots_real": cp.real,
        "discriminant_margin": cp.margin,
    }
    if cp.roots is not None:
        roots = np.asarray(cp.roots)
        out["roots"] = roots.real if np.isrealobj(roots) else [[float(r.real), float(r.imag)] for r in roots]
    return out


def analyze(doc, seed: int = 0, tolerances=None, framework_spec=None) -> AnalysisReport:
    """Analysis report for a parsed input document."""
    config: PointConfiguration = doc.config
    tol = dict(DEFAULT_TOLERANCES)
    tol.update(tolerances or {})
    warnings = []
    dep = affine_dependence(config, doc.alpha, tol["general_position"])
    if "all-positive" in dep.flags:
        warnings.append("all alpha are positive: the second Radon part is empty")
    x1, x2 = radon_partition(dep)
    dep_section = {
        "alpha": dep.alpha,
        "canonical": dep.canonical,
        "flags": list(dep.flags),
        "X1": _names(config, x1),
        "X2": _names(config, x2),
        "s": dep.s,
    }
    spec = framework_spec or doc.framework
    if spec is not None:
        frameworks = [framework_from_spec(spec, dep, config.m)]
    else:
        frameworks = [build_framework(dep, k, f) for k in range(1, config.n + 1) for f in (Flavor.G, Flavor.F)]

    rng = trial_rng(seed, 0)
    cos_section = ortho_section = None
    if config.space is Space.EUCLIDEAN:
        inv, prof = _euclidean_invariants(config, dep, rng, tol, warnings)
        if config.m == config.n + 2:
            verdict, c1 = invariants.cosphericity(dep, config, tol["cosphericity"])
            cos_section = {"verdict": verdict.value, "c1": c1}
            ortho_section = {
                "perpendicular": invariants.perpendicularity_test(config, tol["perpendicular"]),
                "repeated_roots": invariants.repeated_root_check(prof, tol["repeated_root"]),
            }
    else:
        inv = _curved_invariants(config, dep, rng, warnings)

    flex_rows = []
    for fw in frameworks:
        try:
            rep = first_order_flex(fw, config, config.n, tol["unyielding"])
            flex_rows.append({"k": fw.k, "flavor": fw.flavor.value, "ambient_dim": config.n,
                              "verdict": rep.verdict.value, "optimum": rep.optimum})
        except UnsupportedDimension as exc:
            warnings.append(f"flex k={fw.k} {fw.flavor.value}: {exc}")
    conf = configuration_dict(config)
    if doc.alpha is not None:
        conf["alpha"] = doc.alpha
    return AnalysisReport(
        configuration=conf,
        tolerances=tol,
        dependence=dep_section,
        frameworks=[framework_dict(fw) for fw in frameworks],
        invariants=inv,
        flex=flex_rows,
        cosphericity=cos_section,
        orthocentric=ortho_section,
        framework_request=spec,
        warnings=warnings,
        seed=seed,
    )

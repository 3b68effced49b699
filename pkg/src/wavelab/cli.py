"""Command-line experiment runner.

    wavelab <command> --config <file.json> [--out <dir>] [--seed <u64>]
            [--grid t=<N>,r=<N>]

One command id per laboratory procedure; each run validates its config
against the published JSON schema, executes, and writes
<out>/<command>/<config-hash>/report.json plus CSV artifacts.  Exit codes:
0 all checks passed, 1 a check failed, 2 config error.  Identical config
and seed give byte-identical report bodies except for the wall-clock
field.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys
import time
from pathlib import Path

import numpy as np

from wavelab import exponents as expo
from wavelab import fd, geometry, inequalities as ineq, storage
from wavelab.grids import Grid, RadialField
from wavelab.iteration import (
    CauchyProblem,
    Nonlinearity,
    blowup_indicator,
    contraction_constant_check,
    epsilon_threshold_search,
    john_pointwise_check,
    picard_iterate,
)
from wavelab.norms import Region, WeightSpec, dyadic_layers, null_coords, \
    null_coords_inverse, weighted_norm
from wavelab.profiles import cone_bump_forcing, make_data_profile
from wavelab.radial import RadialForcing, SupportBox, duhamel_radial, free_radial_n3
from wavelab.schema import ConfigError, validate_config

#: where each public operation surfaces (used by the completeness test)
OPERATION_COMMANDS = {
    "critical_power": "exponents",
    "weight_window": "exponents",
    "radial_estimate_params": "exponents",
    "duhamel_radial": "solve",
    "free_radial_n3": "free",
    "legendre": "geometry",
    "mu": "geometry",
    "huygens_support_check": "geometry",
    "tangent_sphere_angle_bound": "geometry",
    "internal_tangency_angle_window": "geometry",
    "picard_iterate": "iterate",
    "contraction_constant_check": "iterate",
    "epsilon_threshold_search": "threshold",
    "blowup_indicator": "blowup",
    "john_pointwise_check": "john-check",
    "weighted_norm": "norm",
    "null_coords": "norm",
    "dyadic_layers": "norm",
    "frac_integral": "verify-1d",
    "ratio_1d": "verify-1d",
    "hardy_littlewood_check": "hardy",
    "splitting_check": "splitting",
    "kernel_domination_2d": "domination",
    "tensor_estimate_2d": "verify-2d",
    "overlap_bound": "overlap",
    "sweep": "sweep",
}


def config_hash(config: dict) -> str:
    canon = json.dumps(config, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode()).hexdigest()[:12]


def _build_grid(spec: dict, r_max_default: float | None = None) -> Grid:
    t_max = spec["t_max"]
    r_max = spec.get("r_max", r_max_default if r_max_default is not None else t_max)
    if "step" in spec:
        return Grid.aligned(t_max, r_max, spec["step"])
    return Grid(t_max=t_max, r_max=r_max, nt=spec["nt"], nr=spec["nr"])


def _build_forcing(spec: dict):
    preset = spec["preset"]
    if preset == "constant":
        return RadialForcing.constant(spec.get("value", 1.0))
    if preset == "cone_bump":
        fn = cone_bump_forcing(
            spec.get("s_center", 1.5),
            spec.get("s_width", 0.5),
            spec.get("d_center", 0.375),
            spec.get("d_width", 0.125),
            spec.get("amplitude", 1.0),
        )
        box = SupportBox(
            s_lo=spec.get("s_center", 1.5) - spec.get("s_width", 0.5),
            s_hi=spec.get("s_center", 1.5) + spec.get("s_width", 0.5),
            d_lo=spec.get("d_center", 0.375) - spec.get("d_width", 0.125),
            d_hi=spec.get("d_center", 0.375) + spec.get("d_width", 0.125),
        )
        return RadialForcing.from_callable(fn, box, name="cone_bump")
    if preset == "csv":
        return storage.forcing_from_csv(spec["csv"], spec["sidecar"])
    raise ConfigError(f"forcing.preset: unknown preset {preset!r}")


def _build_gfun(spec: dict):
    kind = spec["kind"]
    if kind == "indicator":
        hi = spec.get("hi", 1.0)
        return lambda x: (np.asarray(x) <= hi).astype(float)
    if kind == "gauss":
        c = spec.get("center", 8.0)
        w = spec.get("width", 1.5)
        amp = spec.get("amplitude", 1.0)
        return lambda x: amp * np.exp(-(((np.asarray(x) - c) / w) ** 2))
    if kind == "bump":
        return ineq._make_bump(spec.get("center", 2.0), spec.get("width", 1.0),
                               spec.get("amplitude", 1.0))
    if kind == "power":
        return ineq._make_power(spec.get("exponent", 0.5), spec.get("lo", 0.0),
                                spec.get("hi", 1.0), spec.get("amplitude", 1.0))
    raise ConfigError(f"g.kind: unknown kind {kind!r}")


def _problem_from_params(params: dict, grid_spec: dict) -> CauchyProblem:
    p = params["p"]
    gamma = params.get("gamma")
    if gamma == "midpoint":
        gamma = expo.weight_window(3, p).midpoint
    kind = params.get("nonlinearity", "abs_power")
    nonlin = getattr(Nonlinearity, kind)(p)
    support_radius = params["support_radius"]
    grid = _build_grid(grid_spec, r_max_default=grid_spec["t_max"] + support_radius)
    return CauchyProblem(
        epsilon=params.get("epsilon", 0.0),
        f=make_data_profile(params["f"]),
        g=make_data_profile(params["g"]),
        support_radius=support_radius,
        nonlinearity=nonlin,
        gamma=gamma,
        grid=grid,
    )


# ---------------------------------------------------------------------------
# command handlers: each returns (results, checks, artifacts)


def _cmd_exponents(params, grid_spec, seed, outdir):
    n = params["n"]
    es = expo.ExponentSet.for_dimension(n)
    results = {
        "n": n,
        "p_c": es.p_c,
        "p_conf": float(es.p_conf),
        "p_conf_exact": str(es.p_conf),
        "q_strichartz": float(es.q_strichartz),
        "q_strichartz_exact": str(es.q_strichartz),
        "quadratic_residual": es.quadratic_residual(),
    }
    checks = {"quadratic_residual": abs(es.quadratic_residual()) <= 1e-12 * (n + 1)}
    if "p" in params:
        win = expo.weight_window(n, params["p"])
        results["weight_window"] = {
            "lower": win.lower,
            "upper": win.upper,
            "classification": win.classify(),
        }
        checks["window_dichotomy"] = win.is_nonempty() == (params["p"] > es.p_c + 1e-12)
    if "q" in params and n % 2 == 1 and n >= 3:
        rp = expo.radial_estimate_params(n, params["q"]).as_floats()
        results["radial_estimate"] = {
            "gamma": rp.gamma,
            "beta_max": rp.beta_max,
            "exponent_sum": rp.exponent_sum,
            "alpha_plus_beta": rp.alpha_plus_beta,
        }
        checks["alpha_plus_beta_nonnegative"] = rp.alpha_plus_beta >= -1e-12
    return results, checks, {}


def _cmd_solve(params, grid_spec, seed, outdir):
    grid = _build_grid(grid_spec)
    forcing = _build_forcing(params["forcing"])
    w = duhamel_radial(
        forcing,
        params["n"],
        grid,
        kappa=params.get("kappa"),
        enforce_cone=params.get("enforce_cone", True),
    )
    storage.field_to_csv(w, outdir / "field.csv")
    storage.field_to_binary(w, outdir / "field.bin")
    results = {
        "max_abs": w.max_abs(),
        "support_violation": w.support_violation(),
        "grid": {"nt": grid.nt, "nr": grid.nr},
    }
    checks = {}
    if params.get("expect_constant_exact"):
        tt, _ = grid.meshes()
        target = 0.5 * tt * tt * params["forcing"].get("value", 1.0)
        err = float(np.max(np.abs(w.values - target)) / max(np.max(np.abs(target)), 1e-300))
        results["constant_rel_sup_error"] = err
        checks["constant_solution"] = err <= 1e-3
    return results, checks, {"field": "field.csv"}


def _cmd_free(params, grid_spec, seed, outdir):
    support_radius = params["support_radius"]
    grid = _build_grid(grid_spec, r_max_default=grid_spec["t_max"] + support_radius)
    field, decay = free_radial_n3(
        make_data_profile(params["f"]),
        make_data_profile(params["g"]),
        params["epsilon"],
        grid,
        support_radius,
    )
    storage.field_to_csv(field, outdir / "field.csv")
    results = {
        "decay_constant": decay,
        "max_abs": field.max_abs(),
        "support_violation": field.support_violation(),
    }
    checks = {
        "support": field.support_violation() <= 1e-9 * max(field.max_abs(), 1e-300)
    }
    return results, checks, {"field": "field.csv"}


def _cmd_iterate(params, grid_spec, seed, outdir):
    prob = _problem_from_params(params, grid_spec)
    u, trace = picard_iterate(
        prob,
        max_steps=params.get("max_steps", 12),
        tol=params.get("tol", 1e-6),
    )
    storage.write_csv(outdir / "trace.csv", ["m", "A_m", "B_m", "ratio"],
                      storage.trace_rows(trace))
    storage.field_to_binary(u, outdir / "field.bin")
    results = {
        "status": trace.status,
        "steps": trace.steps,
        "a": list(trace.a),
        "b": list(trace.b),
        "ratios": trace.ratios,
        "contraction_ok": trace.contraction_ok,
        "residual": trace.residual,
        "decay_constant": trace.decay_constant,
    }
    checks = {}
    expect = params.get("expect")
    if expect == "contraction":
        checks["contraction"] = trace.contraction_ok and trace.status != "diverged"
    elif expect == "divergence":
        checks["divergence"] = trace.status == "diverged"
    if "compare_amplitude_ratio" in params and prob.epsilon > 0:
        consts = contraction_constant_check(
            prob, amplitude_ratio=params["compare_amplitude_ratio"],
            max_steps=params.get("max_steps", 8),
        )
        results["fitted_constants"] = {
            "k_first": consts.k_first,
            "k_second": consts.k_second,
            "ratio": consts.ratio,
        }
        checks["constants_consistent"] = consts.consistent
    return results, checks, {"trace": "trace.csv"}


def _cmd_threshold(params, grid_spec, seed, outdir):
    prob = _problem_from_params({**params, "epsilon": params["eps_lo"]}, grid_spec)
    res = epsilon_threshold_search(
        prob,
        eps_lo=params["eps_lo"],
        eps_hi=params["eps_hi"],
        resolution=params["resolution"],
        max_steps=params.get("max_steps", 8),
    )
    storage.write_csv(outdir / "evaluations.csv", ["epsilon", "contracts"],
                      [(e, int(ok)) for e, ok in res.evaluations])
    results = {
        "eps_lo": res.eps_lo,
        "eps_hi": res.eps_hi,
        "estimate": res.estimate,
        "status": res.status,
    }
    return results, {}, {"evaluations": "evaluations.csv"}


def _cmd_blowup(params, grid_spec, seed, outdir):
    prob = _problem_from_params({**params, "gamma": None}, grid_spec)
    rep = blowup_indicator(
        prob,
        growth_factor=params.get("growth_factor", 10.0),
        max_steps=params.get("max_steps", 8),
    )
    storage.write_csv(outdir / "growth.csv", ["T", "norm"], list(rep.curve))
    results = {
        "flag": rep.flag,
        "status": rep.status,
        "steps": rep.steps,
        "curve": [[t, v] for t, v in rep.curve],
    }
    checks = {}
    if "expect_flag" in params:
        checks["flag"] = rep.flag == params["expect_flag"]
    return results, checks, {"growth": "growth.csv"}


def _cmd_john_check(params, grid_spec, seed, outdir):
    forcing = _build_forcing(params["forcing"])
    grid = _build_grid(grid_spec)
    w = duhamel_radial(forcing, 3, grid)
    rep = john_pointwise_check(w, forcing, params["p"])
    results = {
        "ratio": rep.ratio,
        "numerator": rep.numerator,
        "denominator": rep.denominator,
        "undefined": rep.undefined,
    }
    checks = {}
    if params.get("refine"):
        fine = grid.refine()
        w2 = duhamel_radial(forcing, 3, fine)
        rep2 = john_pointwise_check(w2, forcing, params["p"])
        results["ratio_refined"] = rep2.ratio
        pct = params.get("agreement_pct", 10.0)
        if rep.undefined or rep2.undefined:
            checks["refinement_agreement"] = False
        else:
            checks["refinement_agreement"] = (
                abs(rep2.ratio - rep.ratio) <= pct / 100.0 * abs(rep.ratio)
            )
    return results, checks, {}


def _cmd_norm(params, grid_spec, seed, outdir):
    op = params["op"]
    if op == "weighted_norm":
        grid = _build_grid(grid_spec)
        forcing = _build_forcing(params["field"])
        tt, rr = grid.meshes()
        field = RadialField(grid, forcing.eval(tt, rr))
        spec_w = WeightSpec(
            gamma=params.get("gamma", 0.0),
            shift=params.get("shift", 0.0),
            q=params.get("q", 2.0),
        )
        reg = params.get("region", {})
        region = Region(
            t_lo=reg.get("t_lo", 0.0),
            t_hi=reg.get("t_hi", grid.t_max),
            cone_lo=reg.get("cone_lo", -math.inf),
            cone_hi=reg.get("cone_hi", math.inf),
            interior=reg.get("interior", False),
            region_id="config",
        )
        value = weighted_norm(field, spec_w, region)
        rows = [(region.region_id, spec_w.gamma, spec_w.shift, spec_w.q, value,
                 f"{grid.nt}x{grid.nr}")]
        storage.write_csv(outdir / "norms.csv",
                          ["region", "gamma", "R", "q", "value", "grid"], rows)
        return {"value": value}, {}, {"norms": "norms.csv"}
    if op == "dyadic_layers":
        layers = dyadic_layers(params["T"], params.get("t_minus_r_max", math.inf))
        rows = [(lay.region_id, lay.t_lo, lay.t_hi, lay.cone_lo, lay.cone_hi)
                for lay in layers]
        storage.write_csv(outdir / "layers.csv",
                          ["id", "t_lo", "t_hi", "cone_lo", "cone_hi"], rows)
        return {"count": len(layers)}, {}, {"layers": "layers.csv"}
    # null_roundtrip
    rng = np.random.default_rng(seed)
    t = rng.uniform(0, 100, params.get("count", 10000))
    r = rng.uniform(0, 100, params.get("count", 10000))
    u, v = null_coords(t, r)
    t2, r2 = null_coords_inverse(u, v)
    worst = float(np.max(np.abs(t2 - t) + np.abs(r2 - r)))
    return {"max_roundtrip_error": worst}, {"roundtrip": worst <= 1e-12}, {}


def _cmd_verify_1d(params, grid_spec, seed, outdir):
    kp = ineq.KernelParams(alpha=params["alpha"], beta=params["beta"],
                           gamma=params["gamma"], p=params["p"], q=params["q"])
    fam_spec = params["family"]
    if fam_spec["kind"] == "bump_power":
        family = ineq.bump_power_family(fam_spec.get("count", 200), seed=seed)
    else:
        family = ineq.concentrating_family(kp.p, levels=fam_spec.get("levels", 6))
    sups = []
    for length in params["lengths"]:
        rep = ineq.ratio_1d(family, kp, length, params["h"])
        sups.append((length, rep.sup_ratio))
    storage.write_csv(outdir / "ratios.csv", ["L", "sup_ratio"], sups)
    results = {"admissible": kp.admissible(), "sups": [[l, s] for l, s in sups]}
    checks = {}
    expect = params.get("expect")
    if expect == "stable" and len(sups) >= 2:
        pct = params.get("stability_pct", 5.0)
        changes = [
            abs(sups[i + 1][1] - sups[i][1]) / sups[i][1]
            for i in range(len(sups) - 1)
        ]
        results["max_change_pct"] = 100.0 * max(changes)
        checks["stable"] = max(changes) <= pct / 100.0
    elif expect == "growth":
        checks["monotone_growth"] = all(
            sups[i + 1][1] > sups[i][1] for i in range(len(sups) - 1)
        )
    return results, checks, {"ratios": "ratios.csv"}


def _cmd_verify_2d(params, grid_spec, seed, outdir):
    kp = ineq.KernelParams(alpha=params["alpha"], beta=params["beta"],
                           gamma=params["gamma"], p=params["p"], q=params["q"])
    rng = np.random.default_rng(seed)
    cg = rng.uniform(2.0, 0.8 * params["length"], 2)
    ch = rng.uniform(2.0, 0.8 * params["length"], 2)
    wd = rng.uniform(0.5, 2.0, 4)

    def sample(n, centers, widths):
        m = (np.arange(n) + 0.5) * (params["length"] / n)
        X, Y = np.meshgrid(m, m, indexing="ij")
        return np.exp(-(((X - max(centers)) / widths[0]) ** 2)
                      - ((Y - min(centers)) / widths[1]) ** 2)

    ratios = []
    for n in params["sizes"]:
        r = ineq.tensor_estimate_2d(sample(n, cg, wd[:2]), sample(n, ch, wd[2:]),
                                    kp, params["length"])
        ratios.append((n, r))
    storage.write_csv(outdir / "ratios.csv", ["N", "ratio"], ratios)
    pct = params.get("stability_pct", 10.0)
    rel = abs(ratios[-1][1] - ratios[-2][1]) / max(abs(ratios[-2][1]), 1e-300)
    results = {"ratios": [[n, r] for n, r in ratios], "last_change_pct": 100 * rel}
    return results, {"stable": rel <= pct / 100.0}, {"ratios": "ratios.csv"}


def _cmd_hardy(params, grid_spec, seed, outdir):
    fn = _build_gfun(params["g"])
    ratios = []
    for h in params["steps"]:
        g = ineq.GridFunction1D.from_callable(fn, params["length"], h)
        rep = ineq.hardy_littlewood_check(g, params["exponent"], params["p"],
                                          params["q"])
        ratios.append((h, rep["ratio"]))
    storage.write_csv(outdir / "ratios.csv", ["h", "ratio"], ratios)
    pct = params.get("stability_pct", 5.0)
    rel = abs(ratios[-1][1] - ratios[-2][1]) / max(abs(ratios[-2][1]), 1e-300)
    return (
        {"ratios": [[h, r] for h, r in ratios], "last_change_pct": 100 * rel},
        {"stable": rel <= pct / 100.0},
        {"ratios": "ratios.csv"},
    )


def _cmd_splitting(params, grid_spec, seed, outdir):
    kp = ineq.KernelParams(alpha=params["alpha"], beta=params["beta"],
                           gamma=params["gamma"], p=params["p"], q=params["q"])
    g = ineq.GridFunction1D.from_callable(_build_gfun(params["g"]),
                                          params["length"], params["h"])
    rep = ineq.splitting_check(g, kp)
    results = {
        "c_head_tail": rep.c_head_tail,
        "fitted_c": rep.fitted_c,
        "c_self_similar": rep.c_self_similar,
        "fitted_c_prime": rep.fitted_c_prime,
        "f1_norm": rep.f1_norm,
        "f2_norm": rep.f2_norm,
        "norm_bound": rep.norm_bound,
    }
    checks = {
        "pointwise_head_tail": rep.pointwise_a_ok,
        "pointwise_self_similar": rep.pointwise_b_ok,
        "norm_bound": rep.norm_ok,
    }
    return results, checks, {}


def _cmd_domination(params, grid_spec, seed, outdir):
    kp = ineq.KernelParams(alpha=params["alpha"], beta=params["beta"],
                           gamma=params["gamma"], p=params["p"], q=params["q"])
    rng = np.random.default_rng(seed)
    rep = ineq.kernel_domination_2d(kp, params["count"], rng)
    results = {
        "checked": rep.checked,
        "violations": rep.violations,
        "skipped": rep.skipped,
        "worst_excess": rep.worst_excess,
    }
    expect = params.get("expect_violations", False)
    checks = {"domination": (rep.violations > 0) == expect}
    return results, checks, {}


def _cmd_overlap(params, grid_spec, seed, outdir):
    rng = np.random.default_rng(seed)
    rows = []
    all_hold = True
    for i in range(params["instances"]):
        op = ineq.BandedBlockOperator.random(
            rng, params["n_blocks"], params["block_size"], params["band"],
            d=params.get("d", 1),
        )
        rep = ineq.overlap_bound(op, rng=rng)
        rows.append((i, rep.norm_bound, rep.direct_norm, int(rep.holds)))
        all_hold &= rep.holds
    storage.write_csv(outdir / "instances.csv",
                      ["instance", "bound", "direct", "holds"], rows)
    return (
        {"instances": len(rows)},
        {"bound_holds": bool(all_hold)},
        {"instances": "instances.csv"},
    )


def _cmd_geometry(params, grid_spec, seed, outdir):
    rng = np.random.default_rng(seed)
    op = params["op"]
    count = params["count"]
    if op == "identity":
        worst = 0.0
        for _ in range(count):
            x = rng.normal(size=3) * rng.uniform(0.5, 50)
            y = rng.normal(size=3) * rng.uniform(0.5, 50)
            worst = max(worst, geometry.angle_identity_residual(x, y))
        return {"worst_residual": worst}, {"identity": worst <= 1e-12}, {}
    if op == "huygens":
        inside = 0
        for _ in range(count):
            t, s = sorted(rng.uniform(0, 10, 2))[::-1]
            x = rng.normal(size=3)
            y = rng.normal(size=3)
            inside += int(geometry.huygens_support_check(t, s, x, y))
        return {"inside": inside, "count": count}, {}, {}
    if op == "tangent_sphere":
        t = params.get("t", 100.0)
        tuples = geometry.sample_tangent_sphere(t, count, rng)
        worst_angle = 0.0
        worst_resid = 0.0
        ok = True
        for x, s, y in tuples:
            res = geometry.tangent_sphere_angle_bound(t, x, s, y)
            worst_angle = max(worst_angle, res.angle)
            worst_resid = max(worst_resid, res.identity_residual)
            ok &= res.bound_ok
        return (
            {"constant": geometry.tangent_sphere_constant(t),
             "worst_angle": worst_angle, "worst_identity_residual": worst_resid},
            {"angle_bound": bool(ok), "identity": worst_resid <= 1e-12},
            {},
        )
    # internal_tangency
    t = params.get("t", 10.0)
    delta = params.get("delta", 0.01)
    c0 = params.get("c0", geometry.INTERNAL_TANGENCY_C0)
    pairs = geometry.sample_internal_tangency(t, delta, count, rng)
    ok = True
    worst_resid = 0.0
    for x, y in pairs:
        res = geometry.internal_tangency_angle_window(t, x, y, delta, c0=c0)
        ok &= res.bound_ok
        worst_resid = max(worst_resid, res.identity_residual)
    return (
        {"c0": c0, "worst_identity_residual": worst_resid},
        {"window": bool(ok), "identity": worst_resid <= 1e-12},
        {},
    )


HANDLERS = {
    "exponents": _cmd_exponents,
    "solve": _cmd_solve,
    "free": _cmd_free,
    "iterate": _cmd_iterate,
    "threshold": _cmd_threshold,
    "blowup": _cmd_blowup,
    "john-check": _cmd_john_check,
    "norm": _cmd_norm,
    "verify-1d": _cmd_verify_1d,
    "verify-2d": _cmd_verify_2d,
    "hardy": _cmd_hardy,
    "splitting": _cmd_splitting,
    "domination": _cmd_domination,
    "overlap": _cmd_overlap,
    "geometry": _cmd_geometry,
}


def run_config(config: dict, out_root: Path) -> tuple[dict, int]:
    """Validate, execute, and persist one config; returns (report, status)."""
    validate_config(config)
    command = config["command"]
    if command == "sweep":
        return _run_sweep(config, out_root)
    chash = config_hash(config)
    outdir = out_root / command / chash
    outdir.mkdir(parents=True, exist_ok=True)
    seed = config.get("seed", 0)
    started = time.perf_counter()
    results, checks, artifacts = HANDLERS[command](
        config.get("params", {}), config.get("grid", {}), seed, outdir
    )
    report = {
        "command": command,
        "config": config,
        "config_hash": chash,
        "results": _jsonable(results),
        "checks": checks,
        "artifacts": artifacts,
        "wall_clock_s": time.perf_counter() - started,
    }
    (outdir / "report.json").write_text(
        json.dumps(report, indent=2, sort_keys=True) + "\n"
    )
    status = 0 if all(checks.values()) else 1
    return report, status


def _run_sweep(config: dict, out_root: Path) -> tuple[dict, int]:
    rows = []
    status = 0
    reports = []
    for i, sub in enumerate(config["runs"]):
        try:
            rep, st = run_config(sub, out_root)
        except ConfigError as exc:
            rep, st = {"error": str(exc)}, 2
        reports.append(rep)
        status = max(status, st)
        rows.append((
            i,
            sub.get("command", "?"),
            rep.get("config_hash", ""),
            st,
            json.dumps(_scalar_summary(rep.get("results", {})), sort_keys=True),
        ))
    chash = config_hash(config)
    outdir = out_root / "sweep" / chash
    outdir.mkdir(parents=True, exist_ok=True)
    storage.write_csv(outdir / "aggregate.csv",
                      ["index", "command", "config_hash", "status", "summary"], rows)
    report = {
        "command": "sweep",
        "config_hash": chash,
        "runs": len(rows),
        "statuses": [r[3] for r in rows],
        "reports": reports,
    }
    (outdir / "report.json").write_text(
        json.dumps(_strip_wall_clock(report), indent=2, sort_keys=True) + "\n"
    )
    return report, status


def _scalar_summary(results: dict) -> dict:
    return {
        k: v
        for k, v in results.items()
        if isinstance(v, (int, float, bool, str)) and not isinstance(v, list)
    }


def _strip_wall_clock(obj):
    if isinstance(obj, dict):
        return {k: _strip_wall_clock(v) for k, v in obj.items() if k != "wall_clock_s"}
    if isinstance(obj, list):
        return [_strip_wall_clock(v) for v in obj]
    return obj


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, float) and math.isnan(obj):
        return "nan"
    return obj


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="wavelab",
        description="numerical laboratory for radial semilinear wave estimates",
    )
    parser.add_argument("command", choices=sorted([*HANDLERS.keys(), "sweep"]))
    parser.add_argument("--config", required=True, help="JSON config file")
    parser.add_argument("--out", default="wavelab-out", help="output directory")
    parser.add_argument("--seed", type=int, default=None, help="override config seed")
    parser.add_argument("--grid", default=None,
                        help="override grid point counts, e.g. t=200,r=240")
    args = parser.parse_args(argv)

    try:
        config = json.loads(Path(args.config).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    if config.get("command", args.command) != args.command:
        print(
            f"config error: command mismatch (config says "
            f"{config.get('command')!r}, CLI says {args.command!r})",
            file=sys.stderr,
        )
        return 2
    config["command"] = args.command
    if args.seed is not None:
        config["seed"] = args.seed
    if args.grid:
        try:
            overrides = dict(part.split("=") for part in args.grid.split(","))
            grid = config.setdefault("grid", {})
            if "t" in overrides:
                grid["nt"] = int(overrides["t"])
            if "r" in overrides:
                grid["nr"] = int(overrides["r"])
            grid.pop("step", None)
        except ValueError:
            print("config error: --grid expects t=<N>,r=<N>", file=sys.stderr)
            return 2

    try:
        report, status = run_config(config, Path(args.out))
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    checks = report.get("checks", {})
    for name, ok in checks.items():
        print(f"[{'PASS' if ok else 'FAIL'}] {report['command']}: {name}")
    if report["command"] == "sweep":
        print(f"sweep: {report['runs']} runs, statuses {report['statuses']}")
    print(f"report: {args.out}/{report['command']}/{report.get('config_hash', '')}")
    return status


if __name__ == "__main__":
    sys.exit(main())

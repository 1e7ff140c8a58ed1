"""Named benchmark scenarios: each runs a physical sweep, writes one CSV of
per-sample rows plus a JSON summary, and reports a pass flag against its
analytic expectation.

Scenario configs are plain JSON; unknown keys are rejected so typos fail
loudly (exit code 2 at the CLI).
"""

from __future__ import annotations

import csv
import json
import os
from dataclasses import dataclass, field
import numpy as np

from . import constitutive as cst
from . import surface_geometry as sg
from . import surface_kinematics as sk
from . import tensor_core as tc
from . import volume_kinematics as vk
from .config import DEFAULT_TOLERANCES, Tolerances
from .errors import ConfigInvalid, UnknownScenario
from .verification import check_rng

SCENARIO_SEED_STRIDE_BASE = 10_000


@dataclass(frozen=True)
class ScenarioConfig:
    """Validated scenario inputs (charts, materials, thermal model, seed)."""

    seed: int = 42
    chart: str = "sphere"
    chart_params: dict = field(default_factory=lambda: {"radius": 2.0})
    volume_material: dict = field(default_factory=dict)
    surface_material: dict = field(default_factory=dict)
    thermal: dict = field(default_factory=dict)
    sweep: dict = field(default_factory=dict)
    tolerance_overrides: dict = field(default_factory=dict)

    _KEYS = ("seed", "chart", "chart_params", "volume_material",
             "surface_material", "thermal", "sweep", "tolerance_overrides")

    @classmethod
    def from_dict(cls, raw: dict) -> "ScenarioConfig":
        if not isinstance(raw, dict):
            raise ConfigInvalid("scenario config must be a JSON object")
        unknown = set(raw) - set(cls._KEYS)
        if unknown:
            raise ConfigInvalid(f"unknown config keys: {sorted(unknown)}")
        if "seed" in raw and not isinstance(raw["seed"], int):
            raise ConfigInvalid("seed must be an integer")
        return cls(**raw)

    def tolerances(self) -> Tolerances:
        try:
            return DEFAULT_TOLERANCES.overridden(**self.tolerance_overrides)
        except (KeyError, TypeError) as exc:
            raise ConfigInvalid(f"bad tolerance overrides: {exc}") from exc


DEFAULT_VOLUME_MATERIAL = dict(mu0=1.0e6, lam=2.0e6, c1=1.5e6, c2=1.0e-3,
                               T_ref=293.15, T0=300.0, rho0=1200.0)
DEFAULT_SURFACE_MATERIAL = dict(K=500.0, mu_s=300.0, c1=50.0, c3=0.5,
                                rho0s=1.0, t0=0.01)
DEFAULT_THERMAL = dict(alpha_volume=1.0e-3, alpha_inplane=8.0e-4,
                       alpha_normal=5.0e-4, theta0=300.0)


def _materials(config: ScenarioConfig):
    vol = cst.VolumeMaterialParams(**{**DEFAULT_VOLUME_MATERIAL, **config.volume_material})
    surf = cst.SurfaceMaterialParams(**{**DEFAULT_SURFACE_MATERIAL, **config.surface_material})
    thr = {**DEFAULT_THERMAL, **config.thermal}
    vol_model = cst.ThermalExpansionModel(alpha=thr["alpha_volume"] * np.eye(3),
                                          theta0=thr["theta0"])
    surf_model = cst.SurfaceThermalExpansionModel(alpha_inplane=thr["alpha_inplane"],
                                                  theta0=thr["theta0"],
                                                  alpha_normal=thr["alpha_normal"])
    return vol, surf, vol_model, surf_model


def _write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow(["" if v is None else repr(v) if isinstance(v, float) else v
                             for v in row])


def _write_summary(path, summary):
    with open(path, "w") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")


# ---------------------------------------------------------------------------

def run_thermal_expansion_zero_stress(config: ScenarioConfig, out_dir: str) -> dict:
    """Purely thermal volume/shell deformations must carry no stress."""
    vol, surf, vol_model, surf_model = _materials(config)
    tol = config.tolerances()
    sweep = {**dict(dT_max=200.0, steps=20), **config.sweep}
    chart = sg.chart_from_config(config.chart, config.chart_params)
    rng = check_rng(config.seed, SCENARIO_SEED_STRIDE_BASE + 1)
    u = chart.domain[:, 0] + rng.uniform(0.3, 0.7, size=2) * (chart.domain[:, 1] - chart.domain[:, 0])
    rfr = sg.frame(chart, u)
    mu_scale = 2.0 * surf.c3 * max(1.0, np.abs(rfr.b_cov).max())
    rows = []
    worst = 0.0
    for dt in np.linspace(0.0, sweep["dT_max"], int(sweep["steps"])):
        t = vol_model.theta0 + float(dt)
        vresp = cst.volume_response(vol_model.deformation(t), t, vol_model, vol)
        vol_rel = float(np.abs(vresp.S).max() / vol.mu0)
        cur = surf_model.intermediate_chart(chart, t)
        cfr = sg.frame(cur, u, tc.CURRENT)
        st = sk.surface_deformation(rfr, cfr, lam3=surf_model.lam_T3(t))
        st = sk.thermo_split_surface(st, surf_model.map_at(rfr, t),
                                     b_t_pull_cov=surf_model.b_t_pull_cov(chart, u, t))
        sresp = cst.shell_response(st, t, surf_model, surf)
        sig_rel = float(np.abs(sresp.sigma_pull).max() / (surf.K + surf.mu_s))
        mu_rel = float(np.abs(sresp.mu_pull).max() / mu_scale)
        worst = max(worst, vol_rel, sig_rel, mu_rel)
        rows.append([t, vol_rel, sig_rel, mu_rel])
    _write_csv(os.path.join(out_dir, "thermal_expansion_zero_stress.csv"),
               ["temperature", "volume_stress_rel", "shell_stress_rel", "shell_moment_rel"],
               rows)
    summary = {"scenario": "thermal-expansion-zero-stress", "seed": config.seed,
               "samples": len(rows), "max_error": worst,
               "tolerance": tol.identity_abs, "pass": bool(worst <= tol.identity_abs)}
    _write_summary(os.path.join(out_dir, "thermal_expansion_zero_stress.json"), summary)
    return summary


def run_sphere_curvature(config: ScenarioConfig, out_dir: str) -> dict:
    """|H| = 1/R and kappa_G = 1/R^2 over a radius sweep, with an
    independent finite-difference normal-gradient oracle per sample."""
    tol = config.tolerances()
    sweep = {**dict(radii=[0.5, 1.0, 2.0, 4.0], points=5), **config.sweep}
    rng = check_rng(config.seed, SCENARIO_SEED_STRIDE_BASE + 2)
    rows = []
    worst = 0.0
    for radius in sweep["radii"]:
        chart = sg.sphere_chart(float(radius))
        lo, hi = chart.domain[:, 0], chart.domain[:, 1]
        for _ in range(int(sweep["points"])):
            u = lo + rng.uniform(0.2, 0.8, size=2) * (hi - lo)
            fr = sg.frame(chart, u)

            def normal_at(x, chart=chart):
                t = chart.tangents(x)
                raw = np.cross(t[:, 0], t[:, 1])
                return raw / np.linalg.norm(raw)

            from .fd import partial_diff
            n_fd = np.column_stack([partial_diff(normal_at, u, k) for k in range(2)])
            b_fd = -(fr.a_cov.T @ n_fd)
            b_fd = 0.5 * (b_fd + b_fd.T)
            h_fd = abs(0.5 * np.trace(b_fd @ fr.metric_con))
            err = max(abs(abs(fr.mean_curvature) - 1.0 / radius),
                      abs(fr.gauss_curvature - 1.0 / radius ** 2),
                      abs(abs(fr.mean_curvature) - h_fd))
            worst = max(worst, err)
            rows.append([float(radius), float(u[0]), float(u[1]),
                         abs(fr.mean_curvature), fr.gauss_curvature,
                         1.0 / radius, 1.0 / radius ** 2, float(err)])
    _write_csv(os.path.join(out_dir, "sphere_curvature.csv"),
               ["radius", "xi1", "xi2", "abs_mean_curvature", "gauss_curvature",
                "expected_abs_H", "expected_kappa_G", "max_error"], rows)
    summary = {"scenario": "sphere-curvature", "seed": config.seed, "samples": len(rows),
               "max_error": worst, "tolerance": 1.0e-8, "pass": bool(worst <= 1.0e-8)}
    _write_summary(os.path.join(out_dir, "sphere_curvature.json"), summary)
    return summary


def run_plate_bending_moment(config: ScenarioConfig, out_dir: str) -> dict:
    """Imposed curvature change on a flat plate: M^{11} = 2 c3 kappa_11."""
    _, surf, _, surf_model = _materials(config)
    tol = config.tolerances()
    sweep = {**dict(kappa_max=0.5, steps=11), **config.sweep}
    chart = sg.plane_chart()
    fr = sg.frame(chart, np.zeros(2))
    rows = []
    worst = 0.0
    for kap in np.linspace(0.0, sweep["kappa_max"], int(sweep["steps"])):
        kappa_cov = np.array([[float(kap), 0.0], [0.0, 0.0]])
        kappa_amb = fr.from_cov_components(kappa_cov)
        _, _, dw_dkappa, _ = cst.surface_energy_density(
            fr.identity_inplane, fr.normal, kappa_amb, surf_model.theta0, surf,
            surf_model.theta0)
        m_con = fr.a_dual.T @ dw_dkappa @ fr.a_dual  # = -mu-pull components
        expected = 2.0 * surf.c3 * kap
        err = abs(m_con[0, 0] - expected) / max(abs(expected), 1.0)
        worst = max(worst, err)
        rows.append([float(kap), float(m_con[0, 0]), float(expected), float(err)])
    _write_csv(os.path.join(out_dir, "plate_bending_moment.csv"),
               ["kappa_11", "moment_11", "expected_moment", "rel_error"], rows)
    summary = {"scenario": "plate-bending-moment", "seed": config.seed,
               "samples": len(rows), "max_error": worst,
               "tolerance": tol.identity_abs, "pass": bool(worst <= tol.identity_abs)}
    _write_summary(os.path.join(out_dir, "plate_bending_moment.json"), summary)
    return summary


def run_heated_patch_entropy(config: ScenarioConfig, out_dir: str) -> dict:
    """Conductive entropy production stays nonnegative for psd conductivities."""
    tol = config.tolerances()
    sweep = {**dict(samples=2000), **config.sweep}
    rng = check_rng(config.seed, SCENARIO_SEED_STRIDE_BASE + 4)
    n = int(sweep["samples"])
    rows = []
    worst_min = np.inf
    for i in range(n):
        q_rot = vk.random_rotation(rng)
        k = q_rot @ np.diag(rng.uniform(0.0, 2.0, size=3)) @ q_rot.T
        skew = rng.normal(size=(3, 3))
        k = k + 0.5 * (skew - skew.T)
        g = rng.normal(size=3)
        t = float(rng.uniform(220.0, 600.0))
        gamma = cst.conductive_entropy_production(t, g, cst.fourier_flux(k, g))
        worst_min = min(worst_min, gamma)
        rows.append([i, t, float(g[0]), float(g[1]), float(g[2]), float(gamma)])
    spot = cst.conductive_entropy_production(300.0, np.array([1.0, 0.0, 0.0]),
                                             cst.fourier_flux(np.eye(3), [1.0, 0.0, 0.0]))
    rows.append([n, 300.0, 1.0, 0.0, 0.0, float(spot)])
    _write_csv(os.path.join(out_dir, "heated_patch_entropy.csv"),
               ["sample", "temperature", "grad_T_x", "grad_T_y", "grad_T_z",
                "gamma_con"], rows)
    ok = worst_min >= tol.entropy_floor and abs(spot - 1.0 / 90000.0) < 1e-15
    summary = {"scenario": "heated-patch-entropy", "seed": config.seed, "samples": n,
               "min_gamma_con": float(worst_min), "spot_value": float(spot),
               "tolerance": tol.entropy_floor, "pass": bool(ok)}
    _write_summary(os.path.join(out_dir, "heated_patch_entropy.json"), summary)
    return summary


def run_hencky_additivity(config: ScenarioConfig, out_dir: str) -> dict:
    """Log-strain additivity for coaxial stretch pairs; exact composition
    rule for the quadratic member of the strain family."""
    tol = config.tolerances()
    sweep = {**dict(pairs=10), **config.sweep}
    rng = check_rng(config.seed, SCENARIO_SEED_STRIDE_BASE + 5)
    rows = []
    worst_log = worst_comp = 0.0
    for i in range(int(sweep["pairs"])):
        q = vk.random_rotation(rng)
        d1 = np.diag(rng.uniform(0.6, 1.7, size=3))
        d2 = np.diag(rng.uniform(0.6, 1.7, size=3))
        f1 = q @ d1 @ q.T
        f2 = q @ d2 @ q.T
        rep = vk.hencky_additivity_check(f1, f2, orders=(0.0, 2.0))
        for entry in rep.entries:
            rows.append([i, entry.order, float(entry.additive_defect),
                         float(entry.composition_defect)])
            if entry.order == 0.0:
                worst_log = max(worst_log, entry.additive_defect)
            else:
                worst_comp = max(worst_comp, entry.composition_defect)
    _write_csv(os.path.join(out_dir, "hencky_additivity.csv"),
               ["pair", "order", "additive_defect", "composition_defect"], rows)
    ok = worst_log <= tol.geometry_abs and worst_comp <= tol.identity_abs
    summary = {"scenario": "hencky-additivity", "seed": config.seed,
               "samples": len(rows), "max_log_defect": float(worst_log),
               "max_composition_defect": float(worst_comp),
               "tolerance_log": tol.geometry_abs,
               "tolerance_composition": tol.identity_abs, "pass": bool(ok)}
    _write_summary(os.path.join(out_dir, "hencky_additivity.json"), summary)
    return summary


SCENARIOS = {
    "thermal-expansion-zero-stress": run_thermal_expansion_zero_stress,
    "sphere-curvature": run_sphere_curvature,
    "plate-bending-moment": run_plate_bending_moment,
    "heated-patch-entropy": run_heated_patch_entropy,
    "hencky-additivity": run_hencky_additivity,
}


def run_scenario(name: str, config: ScenarioConfig, out_dir: str) -> dict:
    if name not in SCENARIOS:
        raise UnknownScenario(f"unknown scenario {name!r}; built-ins: {sorted(SCENARIOS)}")
    os.makedirs(out_dir, exist_ok=True)
    return SCENARIOS[name](config, out_dir)


# ---------------------------------------------------------------------------
# linearization / response table

def build_table_rows(config: ScenarioConfig):
    """Rows for the table command: linearization entries at a (C, b) state
    plus a temperature sweep of the volume stress through its stress-free
    point."""
    from . import weak_forms as wf

    vol, _, _, _ = _materials(config)
    table_cfg = {**dict(c=None, b=None, random_state=False,
                        t_star=340.0, t_min=300.0, t_max=380.0, steps=17),
                 **config.sweep}
    rng = check_rng(config.seed, SCENARIO_SEED_STRIDE_BASE + 6)
    if table_cfg["random_state"]:
        c2 = vk.random_spd(rng, dim=2)
        b2 = rng.normal(size=(2, 2))
        b2 = 0.5 * (b2 + b2.T)
    else:
        c2 = np.eye(2) if table_cfg["c"] is None else np.asarray(table_cfg["c"], dtype=float)
        b2 = np.zeros((2, 2)) if table_cfg["b"] is None else np.asarray(table_cfg["b"], dtype=float)
    table = wf.linearization_table(c2, b2)
    thr = {**DEFAULT_THERMAL, **config.thermal}
    model = cst.ThermalExpansionModel(alpha=thr["alpha_volume"] * np.eye(3),
                                      theta0=thr["theta0"])
    f_star = model.deformation(float(table_cfg["t_star"]))

    header = ["temperature"]
    header += [f"C_{i+1}{j+1}" for i in range(2) for j in range(2)]
    header += [f"b_{i+1}{j+1}" for i in range(2) for j in range(2)]
    header += ["J", "H", "kappa"]
    for nm in ("dJ_dC", "dH_dC", "dH_db", "dkappa_dC", "dkappa_db"):
        header += [f"{nm}_{i+1}{j+1}" for i in range(2) for j in range(2)]
    for nm in ("dCinv_dC", "dbsharp_dC", "dbsharp_db"):
        header += [f"{nm}_{i+1}{j+1}{k+1}{l+1}"
                   for i in range(2) for j in range(2) for k in range(2) for l in range(2)]
    header += [f"S_{i+1}{j+1}" for i in range(3) for j in range(3)]
    header += ["S_norm", "entropy"]

    fixed = []
    fixed += [float(c2[i, j]) for i in range(2) for j in range(2)]
    fixed += [float(b2[i, j]) for i in range(2) for j in range(2)]
    fixed += [table.J, table.H, table.kappa]
    for entry in (table.dJ_dC, table.dH_dC, table.dH_db, table.dkappa_dC, table.dkappa_db):
        if entry is None:
            fixed += [None] * 4
        else:
            fixed += [float(entry[i, j]) for i in range(2) for j in range(2)]
    for entry in (table.dCinv_dC, table.dbsharp_dC, table.dbsharp_db):
        fixed += [float(entry[i, j, k, l])
                  for i in range(2) for j in range(2) for k in range(2) for l in range(2)]

    rows = []
    for t in np.linspace(float(table_cfg["t_min"]), float(table_cfg["t_max"]),
                         int(table_cfg["steps"])):
        resp = cst.volume_response(f_star, float(t), model, vol)
        row = [float(t)] + fixed
        row += [float(resp.S[i, j]) for i in range(3) for j in range(3)]
        row += [float(np.linalg.norm(resp.S)), resp.entropy]
        rows.append(row)
    return header, rows


def write_table(config: ScenarioConfig, out_file: str) -> None:
    header, rows = build_table_rows(config)
    parent = os.path.dirname(os.path.abspath(out_file))
    os.makedirs(parent, exist_ok=True)
    _write_csv(out_file, header, rows)

"""Command-line surface: regime maps, spectra, predictions, simulations.

Every command validates its flags, runs one library call chain, and emits
CSV or JSON. Exit codes: 0 on success, 1 on validation errors, 2 on
numerical failures; failures print a machine-readable JSON object on stderr.
"""

from __future__ import annotations

import hashlib
import io
import json
import math
import sys
import time
from pathlib import Path

import click
import numpy as np

from . import dwfamily, evans, sim, spectral
from .errors import NumericalError, SpinwallError
from .model import Frame, MaterialParams, classify_regime, is_marginal
from .sim import Grid, LocalizedBump, SimConfig, StepWall


def _num(x) -> str:
    # shortest decimal that round-trips, so emitted CSVs are reproducible
    return repr(float(x))


def _write_csv(path: str | None, header: list[str], rows) -> str:
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(row) + "\n")
    text = buf.getvalue()
    if path is None or path == "-":
        click.echo(text, nl=False)
    else:
        Path(path).write_text(text)
    return text


def _emit_json(obj, path: str | None = None) -> str:
    text = json.dumps(obj, indent=2) + "\n"
    if path is None or path == "-":
        click.echo(text, nl=False)
    else:
        Path(path).write_text(text)
    return text


def _material_options(fn):
    fn = click.option("--ccp", type=float, default=0.0, show_default=True)(fn)
    fn = click.option("--mu", type=float, default=-1.0, show_default=True)(fn)
    fn = click.option("--beta", type=float, default=0.75, show_default=True)(fn)
    fn = click.option("--alpha", type=float, default=1.0, show_default=True)(fn)
    return fn


def _params(alpha, beta, mu, ccp, h) -> MaterialParams:
    return MaterialParams(alpha=alpha, beta=beta, mu=mu, ccp=ccp, h=h)


@click.group()
def cli():
    """Domain-wall selection toolbox for the axially symmetric LLGS wire."""


@cli.command()
@_material_options
@click.option("--h-min", type=float, default=-2.0, show_default=True)
@click.option("--h-max", type=float, default=8.0, show_default=True)
@click.option("--h-steps", type=int, default=101, show_default=True)
@click.option("--ccp-min", type=float, default=-0.9, show_default=True)
@click.option("--ccp-max", type=float, default=0.9, show_default=True)
@click.option("--ccp-steps", type=int, default=181, show_default=True)
@click.option("--output", type=str, default="-", show_default=True)
def regime(alpha, beta, mu, ccp, h_min, h_max, h_steps, ccp_min, ccp_max, ccp_steps, output):
    """Stability-regime codes over an (h, ccp) grid, as CSV."""
    del ccp
    rows = []
    for h in np.linspace(h_min, h_max, h_steps):
        for c in np.linspace(ccp_min, ccp_max, ccp_steps):
            p = _params(alpha, beta, mu, float(c), float(h))
            rows.append(
                [
                    _num(h),
                    _num(c),
                    str(int(classify_regime(p))),
                    "1" if is_marginal(p) else "0",
                ]
            )
    _write_csv(output, ["h", "ccp", "regime", "marginal"], rows)


@cli.command()
@_material_options
@click.option("--h", type=float, required=True)
@click.option("--pole", type=click.Choice(["+1", "-1"]), default="-1", show_default=True)
@click.option("--s", "s_", type=float, default=None, help="Frame speed; wall frame if omitted.")
@click.option("--omega", type=float, default=None, help="Frame frequency; wall frame if omitted.")
@click.option("--eta", type=float, default=0.0, show_default=True)
@click.option("--k-max", type=float, default=10.0, show_default=True)
@click.option("--k-steps", type=int, default=401, show_default=True)
@click.option("--r-max", type=float, default=25.0, show_default=True)
@click.option("--r-steps", type=int, default=201, show_default=True)
@click.option("--output", type=str, default="-", show_default=True)
@click.option("--doubles", type=str, default=None, help="Write double-root JSON here.")
def spectrum(alpha, beta, mu, ccp, h, pole, s_, omega, eta, k_max, k_steps, r_max, r_steps, output, doubles):
    """Weighted essential and absolute spectra of a rest state, as CSV."""
    p = _params(alpha, beta, mu, ccp, h)
    if (s_ is None) != (omega is None):
        raise click.UsageError("give both --s and --omega or neither")
    frame = Frame(s=s_, omega=omega) if s_ is not None else dwfamily.frame_m0(p)
    c = spectral.llgs_coefficients(p, frame, int(pole))
    ks = np.linspace(-k_max, k_max, k_steps)
    lam_p, lam_m = spectral.weighted_essential_curves(c, eta, ks)
    rows = []
    for k, lam in zip(ks, lam_p):
        rows.append(["ess", _num(eta), _num(k), _num(lam.real), _num(lam.imag)])
    for k, lam in zip(ks, lam_m):
        rows.append(["ess", _num(eta), _num(k), _num(lam.real), _num(lam.imag)])
    half_p, half_m = spectral.absolute_spectrum(c)
    rs = np.linspace(0.0, r_max, r_steps)
    for half in (half_p, half_m):
        for r in rs:
            lam = half.point(float(r))
            rows.append(["abs", _num(eta), _num(r), _num(lam.real), _num(lam.imag)])
    _write_csv(output, ["curve_id", "eta", "k_or_r", "re_lambda", "im_lambda"], rows)
    if doubles is not None:
        out = []
        for root in spectral.double_roots(c):
            out.append(
                {
                    "lambda_re": root.lam.real,
                    "lambda_im": root.lam.imag,
                    "nu_re": root.nu.real,
                    "nu_im": root.nu.imag,
                    "simple": root.simple,
                    "pinched": root.pinched,
                }
            )
        _emit_json(out, doubles)


@cli.command()
@_material_options
@click.option("--h", type=float, required=True)
def spreading(alpha, beta, mu, ccp, h):
    """Linear spreading speed and frequency of the unstable state, as JSON."""
    p = _params(alpha, beta, mu, ccp, h)
    _emit_json(
        {
            "s_lin": spectral.linear_spreading_speed(p),
            "omega_lin": spectral.linear_spreading_frequency(p),
        }
    )


@cli.command()
@_material_options
@click.option("--h", type=float, required=True)
def dw(alpha, beta, mu, ccp, h):
    """Explicit wall frame and the critical fields of the family, as JSON."""
    p = _params(alpha, beta, mu, ccp, h)
    out = {
        "s": None,
        "omega": None,
        "h_s_plus": None,
        "h_s_minus": None,
        "h_omega": None,
        "stability_bound": None,
        "H": dwfamily.standing_field_H(p),
    }
    if p.ccp == 0.0 and p.mu < 0.0:
        frame = dwfamily.frame_m0(p)
        fields = dwfamily.critical_fields(p)
        out.update(
            {
                "s": frame.s,
                "omega": frame.omega,
                "h_s_plus": fields.h_s_plus,
                "h_s_minus": fields.h_s_minus,
                "h_omega": fields.h_omega,
                "stability_bound": dwfamily.stability_threshold(p),
            }
        )
    _emit_json(out)


@cli.command()
@_material_options
@click.option("--h", type=float, required=True)
@click.option("--orientation", type=click.Choice(["+1", "-1"]), default="+1", show_default=True)
def standing(alpha, beta, mu, ccp, h, orientation):
    """Standing-wall field and the propagation direction of a bistable wall."""
    p = _params(alpha, beta, mu, ccp, h)
    H = dwfamily.standing_field_H(p)
    sign = dwfamily.propagation_sign(p, orientation=int(orientation))
    _emit_json({"h": h, "H": H, "sign": sign})


def _config_from_flags(p, init, orientation, amplitude, width, center, half_width, n, dt, t_final, averaging_window):
    if init == "step":
        initial = StepWall(orientation=int(orientation))
    else:
        initial = LocalizedBump(amplitude=amplitude, width=width, center=center)
    return SimConfig(
        params=p,
        grid=Grid(half_width=half_width, n=n),
        dt=dt,
        t_final=t_final,
        initial=initial,
        averaging_window=averaging_window,
    )


def _config_from_json(doc: dict) -> SimConfig:
    p = MaterialParams(**doc["params"])
    g = Grid(**doc["grid"])
    idoc = dict(doc["initial"])
    kind = idoc.pop("kind")
    if kind == "step":
        initial = StepWall(**idoc)
    elif kind == "bump":
        initial = LocalizedBump(**idoc)
    else:
        raise ValueError(f"unknown initial kind {kind!r}")
    return SimConfig(
        params=p,
        grid=g,
        dt=doc["dt"],
        t_final=doc["t_final"],
        initial=initial,
        averaging_window=doc.get("averaging_window", 0.2),
    )


def _config_to_json(config: SimConfig) -> dict:
    if isinstance(config.initial, StepWall):
        idoc = {"kind": "step", "orientation": config.initial.orientation}
    else:
        idoc = {
            "kind": "bump",
            "amplitude": config.initial.amplitude,
            "width": config.initial.width,
            "center": config.initial.center,
        }
    return {
        "params": {
            "alpha": config.params.alpha,
            "beta": config.params.beta,
            "mu": config.params.mu,
            "ccp": config.params.ccp,
            "h": config.params.h,
        },
        "grid": {"half_width": config.grid.half_width, "n": config.grid.n},
        "dt": config.dt,
        "t_final": config.t_final,
        "initial": idoc,
        "averaging_window": config.averaging_window,
    }


def _run_and_emit(config: SimConfig, history: str | None, snapshot: str | None):
    result = sim.run(config)
    if history is not None:
        rows = []
        nstep = result.freezing.s_history.shape[0] - 1
        for t, x in zip(result.wall_times, result.wall_positions):
            k = min(nstep, round(t / config.dt))
            rows.append(
                [
                    _num(t),
                    _num(result.freezing.s_history[k]),
                    _num(result.freezing.omega_history[k]),
                    _num(x),
                ]
            )
        _write_csv(history, ["t", "s", "omega", "wall_position"], rows)
    if snapshot is not None:
        xi = config.grid.xi
        m = result.field.values
        rows = [
            [_num(xi[i]), _num(m[0, i]), _num(m[1, i]), _num(m[2, i])]
            for i in range(xi.size)
        ]
        _write_csv(snapshot, ["xi", "m1", "m2", "m3"], rows)
    _emit_json(
        {
            "s_inf": result.s_inf,
            "omega_inf": result.omega_inf,
            "converged": result.converged,
            "oscillation_s": result.oscillation_s,
            "oscillation_omega": result.oscillation_omega,
            "t_final_used": result.t_final_used,
            "config": _config_to_json(config),
        }
    )


@cli.command()
@_material_options
@click.option("--h", type=float, default=None)
@click.option("--init", type=click.Choice(["step", "bump"]), default="step", show_default=True)
@click.option("--orientation", type=click.Choice(["+1", "-1"]), default="+1", show_default=True)
@click.option("--amplitude", type=float, default=0.5, show_default=True)
@click.option("--width", type=float, default=2.0, show_default=True)
@click.option("--center", type=float, default=0.0, show_default=True)
@click.option("--half-width", type=float, default=50.0, show_default=True)
@click.option("--n", type=int, default=10001, show_default=True)
@click.option("--dt", type=float, default=1e-4, show_default=True)
@click.option("--t-final", type=float, default=100.0, show_default=True)
@click.option("--averaging-window", type=float, default=0.2, show_default=True)
@click.option("--config", "config_path", type=str, default=None, help="SimConfig JSON; overrides flags.")
@click.option("--history", type=str, default=None, help="Write t,s,omega,wall CSV here.")
@click.option("--snapshot", type=str, default=None, help="Write final-state CSV here.")
def simulate(alpha, beta, mu, ccp, h, init, orientation, amplitude, width, center,
             half_width, n, dt, t_final, averaging_window, config_path, history, snapshot):
    """Freezing-frame simulation; summary JSON on stdout."""
    if config_path is not None:
        config = _config_from_json(json.loads(Path(config_path).read_text()))
    else:
        if h is None:
            raise click.UsageError("--h is required without --config")
        p = _params(alpha, beta, mu, ccp, h)
        config = _config_from_flags(
            p, init, orientation, amplitude, width, center,
            half_width, n, dt, t_final, averaging_window,
        )
    _run_and_emit(config, history, snapshot)


@cli.command()
@_material_options
@click.option("--h-list", type=str, required=True, help="Comma-separated field values.")
@click.option("--half-width", type=float, default=50.0, show_default=True)
@click.option("--n", type=int, default=10001, show_default=True)
@click.option("--dt", type=float, default=1e-4, show_default=True)
@click.option("--t-final", type=float, default=None)
@click.option("--n-jobs", type=int, default=-1, show_default=True)
@click.option("--output", type=str, default="-", show_default=True)
def scan(alpha, beta, mu, ccp, h_list, half_width, n, dt, t_final, n_jobs, output):
    """Pushed/pulled front scan over several field values, as CSV."""
    hs = [float(x) for x in h_list.split(",") if x.strip()]
    if not hs:
        raise click.UsageError("--h-list is empty")
    p = _params(alpha, beta, mu, ccp, hs[0])
    rows = sim.pushed_pulled_scan(
        hs, p, grid=Grid(half_width=half_width, n=n), dt=dt,
        t_final=t_final, n_jobs=n_jobs,
    )
    _write_csv(output, list(sim.ScanRow.__dataclass_fields__), [
        [
            _num(r.h), _num(r.s_sim), _num(r.omega_sim), _num(r.s_wall),
            _num(r.omega_wall), _num(r.s_invasion), _num(r.omega_invasion),
            r.label, "1" if r.converged else "0",
        ]
        for r in rows
    ])


@cli.command(name="evans")
@_material_options
@click.option("--h", type=float, required=True)
@click.option("--eta", type=float, required=True)
@click.option("--radius", type=float, default=100.0, show_default=True)
@click.option("--inner-radius", type=float, default=0.1, show_default=True)
@click.option("--mesh", type=int, default=1500, show_default=True)
@click.option("--l", "--L", "half_width", type=float, default=100.0, show_default=True)
@click.option("--max-refine", type=int, default=4, show_default=True)
@click.option("--contour-csv", type=str, default=None, help="Write contour values CSV here.")
def evans_cmd(alpha, beta, mu, ccp, h, eta, radius, inner_radius, mesh, half_width, max_refine, contour_csv):
    """Evans-function winding number over the half-annulus contour, as JSON."""
    p = _params(alpha, beta, mu, ccp, h)
    prob = evans.EvansProblem(params=p, eta=eta, half_width=half_width)
    result = evans.winding_number(
        prob, radius=radius, inner_radius=inner_radius, mesh=mesh,
        max_refine=max_refine,
    )
    if contour_csv is not None:
        rows = [
            [_num(lam.real), _num(lam.imag), _num(val.real), _num(val.imag)]
            for lam, val in zip(result.nodes, result.values)
        ]
        _write_csv(contour_csv, ["re_lambda", "im_lambda", "re_e", "im_e"], rows)
    _emit_json(
        {
            "winding": result.winding,
            "min_modulus": result.min_modulus,
            "phase_resolved": result.phase_resolved,
            "mesh_used": result.mesh_used,
        }
    )


# ----------------------------------------------------------------------------
# figure reproduction


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _fig2(outdir: Path, prm: dict) -> list[str]:
    p = MaterialParams(alpha=prm["alpha"], beta=prm["beta"], mu=prm["mu"], ccp=0.0, h=prm["h_list"][0])
    rows = sim.pushed_pulled_scan(
        prm["h_list"], p,
        grid=Grid(half_width=prm["half_width"], n=prm["n"]),
        dt=prm["dt"], t_final=prm.get("t_final"),
    )
    out = []
    for r in rows:
        out.append(
            [
                _num(r.h), _num(r.s_sim), _num(r.omega_sim), _num(r.s_wall),
                _num(r.omega_wall), _num(r.s_invasion), _num(r.omega_invasion),
                r.label, "1" if r.converged else "0",
            ]
        )
    _write_csv(
        str(outdir / "speed_frequency_scan.csv"),
        list(sim.ScanRow.__dataclass_fields__), out,
    )
    return ["speed_frequency_scan.csv"]


def _fig3a(outdir: Path, prm: dict) -> list[str]:
    rows = []
    for c in np.linspace(prm["ccp_min"], prm["ccp_max"], prm["ccp_steps"]):
        for h in np.linspace(prm["h_min"], prm["h_max"], prm["h_steps"]):
            p = MaterialParams(alpha=prm["alpha"], beta=prm["beta"], mu=prm["mu"], ccp=float(c), h=float(h))
            H = dwfamily.standing_field_H(p)
            try:
                sign = str(dwfamily.propagation_sign(p))
            except SpinwallError:
                sign = ""
            rows.append([_num(c), _num(h), _num(H), _num(h - H), sign])
    _write_csv(
        str(outdir / "sign_map.csv"), ["ccp", "h", "H", "h_minus_H", "sign"], rows
    )
    return ["sign_map.csv"]


def _winding_files(outdir: Path, cases: list[dict], mesh: int, radius: float,
                   inner_radius: float, half_width: float) -> tuple[list[str], list[dict]]:
    files = []
    summaries = []
    for case in cases:
        p = MaterialParams(alpha=case["alpha"], beta=case["beta"], mu=case["mu"], ccp=0.0, h=case["h"])
        prob = evans.EvansProblem(params=p, eta=case["eta"], half_width=half_width)
        result = evans.winding_number(
            prob, radius=radius, inner_radius=inner_radius, mesh=mesh
        )
        name = f"contour_h{case['h']:g}.csv"
        rows = [
            [_num(lam.real), _num(lam.imag), _num(val.real), _num(val.imag)]
            for lam, val in zip(result.nodes, result.values)
        ]
        _write_csv(str(outdir / name), ["re_lambda", "im_lambda", "re_e", "im_e"], rows)
        files.append(name)
        summaries.append(
            {
                "h": case["h"],
                "eta": case["eta"],
                "winding": result.winding,
                "min_modulus": result.min_modulus,
                "phase_resolved": result.phase_resolved,
                "mesh_used": result.mesh_used,
            }
        )
    return files, summaries


def _fig4(outdir: Path, prm: dict) -> list[str]:
    files, summaries = _winding_files(
        outdir, [{"alpha": prm["alpha"], "beta": prm["beta"], "mu": prm["mu"],
                  "h": prm["h"], "eta": prm["eta"]}],
        prm["mesh"], prm["radius"], prm["inner_radius"], prm["half_width"],
    )
    _emit_json(summaries[0], str(outdir / "winding.json"))
    return files + ["winding.json"]


def _fig5(outdir: Path, prm: dict) -> list[str]:
    cases = [
        {"alpha": prm["alpha"], "beta": prm["beta"], "mu": prm["mu"],
         "h": case["h"], "eta": case["eta"]}
        for case in prm["cases"]
    ]
    files, summaries = _winding_files(
        outdir, cases, prm["mesh"], prm["radius"], prm["inner_radius"], prm["half_width"]
    )
    _emit_json(summaries, str(outdir / "windings.json"))
    return files + ["windings.json"]


def _closed_form_rows(p0: MaterialParams, hs: np.ndarray) -> list[list[str]]:
    rows = []
    for h in hs:
        p = MaterialParams(alpha=p0.alpha, beta=p0.beta, mu=p0.mu, ccp=p0.ccp, h=float(h))
        if p.ccp == 0.0 and p.mu < 0.0:
            frame = dwfamily.frame_m0(p)
            s_m0, om_m0 = frame.s, frame.omega
        else:
            s_m0 = om_m0 = math.nan
        try:
            s_lin = spectral.linear_spreading_speed(p)
            om_lin = spectral.linear_spreading_frequency(p)
        except SpinwallError:
            s_lin = om_lin = math.nan
        rows.append([_num(h), _num(s_m0), _num(om_m0), _num(s_lin), _num(om_lin)])
    return rows


def _fig7(outdir: Path, prm: dict) -> list[str]:
    p0 = MaterialParams(alpha=prm["alpha"], beta=prm["beta"], mu=prm["mu"], ccp=0.0, h=1.0)
    hs = np.linspace(prm["h_min"], prm["h_max"], prm["h_steps"])
    _write_csv(
        str(outdir / "closed_forms.csv"),
        ["h", "s_m0", "omega_m0", "s_lin", "omega_lin"],
        _closed_form_rows(p0, hs),
    )
    rows = sim.pushed_pulled_scan(
        prm["h_sim"], p0,
        grid=Grid(half_width=prm["half_width"], n=prm["n"]),
        dt=prm["dt"], t_final=prm.get("t_final"),
    )
    out = [
        [
            _num(r.h), _num(r.s_sim), _num(r.omega_sim), _num(r.s_wall),
            _num(r.omega_wall), _num(r.s_invasion), _num(r.omega_invasion),
            r.label, "1" if r.converged else "0",
        ]
        for r in rows
    ]
    _write_csv(str(outdir / "simulated.csv"), list(sim.ScanRow.__dataclass_fields__), out)
    return ["closed_forms.csv", "simulated.csv"]


def _fig8(outdir: Path, prm: dict) -> list[str]:
    files = []
    for ccp, h_sim in ((-0.5, prm["h_sim_minus"]), (0.5, prm["h_sim_plus"])):
        p0 = MaterialParams(alpha=prm["alpha"], beta=prm["beta"], mu=prm["mu"], ccp=ccp, h=1.0)
        hs = np.linspace(prm["h_min"], prm["h_max"], prm["h_steps"])
        tag = "minus" if ccp < 0 else "plus"
        name = f"closed_forms_ccp_{tag}.csv"
        _write_csv(
            str(outdir / name),
            ["h", "s_m0", "omega_m0", "s_lin", "omega_lin"],
            _closed_form_rows(p0, hs),
        )
        files.append(name)
        rows = sim.pushed_pulled_scan(
            h_sim, p0, grid=Grid(half_width=prm["half_width"], n=prm["n"]),
            dt=prm["dt"], t_final=prm.get("t_final"),
        )
        name = f"simulated_ccp_{tag}.csv"
        out = [
            [
                _num(r.h), _num(r.s_sim), _num(r.omega_sim), _num(r.s_wall),
                _num(r.omega_wall), _num(r.s_invasion), _num(r.omega_invasion),
                r.label, "1" if r.converged else "0",
            ]
            for r in rows
        ]
        _write_csv(str(outdir / name), list(sim.ScanRow.__dataclass_fields__), out)
        files.append(name)
    return files


_BASE = {"alpha": 1.0, "beta": 0.75, "mu": -1.0}

_FIGURES = {
    "fig2": (
        _fig2,
        {
            **_BASE,
            "h_list": [1.2, 1.5, 1.75, 1.8, 1.85, 1.9, 2.0, 2.2, 2.4, 2.75, 3.0, 3.375, 3.75],
            "half_width": 50.0, "n": 5001, "dt": 2e-4,
        },
    ),
    "fig3a": (
        _fig3a,
        {
            **_BASE,
            "ccp_min": -0.8, "ccp_max": 0.8, "ccp_steps": 9,
            "h_min": -0.25, "h_max": 1.75, "h_steps": 9,
        },
    ),
    "fig4": (
        _fig4,
        {
            **_BASE, "h": 1.9, "eta": -0.29,
            "mesh": 1500, "radius": 100.0, "inner_radius": 0.1, "half_width": 100.0,
        },
    ),
    "fig5": (
        _fig5,
        {
            **_BASE,
            "cases": [{"h": 8.0, "eta": -1.5}, {"h": 20.0, "eta": -1.1}],
            "mesh": 1500, "radius": 100.0, "inner_radius": 0.1, "half_width": 100.0,
        },
    ),
    "fig7": (
        _fig7,
        {
            **_BASE,
            "h_min": 0.8, "h_max": 10.75, "h_steps": 40,
            "h_sim": [1.0, 1.9, 2.4, 4.0, 7.0, 10.0],
            "half_width": 50.0, "n": 5001, "dt": 2e-4, "t_final": 60.0,
        },
    ),
    "fig8": (
        _fig8,
        {
            **_BASE,
            "h_min": 0.8, "h_max": 5.75, "h_steps": 34,
            "h_sim_minus": [2.5, 4.0], "h_sim_plus": [3.5, 5.0],
            "half_width": 50.0, "n": 5001, "dt": 2e-4, "t_final": 60.0,
        },
    ),
}

_TOLERANCES = {"convergence_std": 1e-3, "freeze_det_floor": 1e-12}


def _generate(figure: str, outdir: Path, prm: dict) -> dict:
    outdir.mkdir(parents=True, exist_ok=True)
    maker = _FIGURES[figure][0]
    t0 = time.perf_counter()
    files = maker(outdir, prm)
    elapsed = time.perf_counter() - t0
    return {
        "figure": figure,
        "parameters": prm,
        "tolerances": _TOLERANCES,
        "files": [{"name": f, "sha256": _sha256(outdir / f)} for f in files],
        "runtimes": {"total_seconds": elapsed},
    }


@cli.command()
@click.argument("figure", required=False,
                type=click.Choice(sorted(_FIGURES)))
@click.option("--outdir", type=str, default="artifacts", show_default=True)
@click.option("--from-manifest", type=str, default=None,
              help="Regenerate from a manifest and verify file hashes.")
def reproduce(figure, outdir, from_manifest):
    """Emit plot-ready data files for one figure, plus a manifest."""
    if from_manifest is not None:
        doc = json.loads(Path(from_manifest).read_text())
        target = Path(outdir) / f"{doc['figure']}_check"
        manifest = _generate(doc["figure"], target, doc["parameters"])
        want = {f["name"]: f["sha256"] for f in doc["files"]}
        got = {f["name"]: f["sha256"] for f in manifest["files"]}
        if want != got:
            bad = sorted(set(want.items()) ^ set(got.items()))
            raise ValueError(f"regenerated files differ from manifest: {bad}")
        _emit_json({"verified": True, "figure": doc["figure"], "files": sorted(want)})
        return
    if figure is None:
        raise click.UsageError("give a figure id or --from-manifest")
    target = Path(outdir) / figure
    manifest = _generate(figure, target, _FIGURES[figure][1])
    _emit_json(manifest, str(target / "manifest.json"))
    _emit_json({"figure": figure, "outdir": str(target),
                "files": [f["name"] for f in manifest["files"]]})


def main(argv=None) -> int:
    try:
        cli.main(args=argv, standalone_mode=False)
    except click.exceptions.Abort:
        return 1
    except click.UsageError as exc:
        _emit_json_err("UsageError", exc.format_message())
        return 1
    except NumericalError as exc:
        _emit_json_err(type(exc).__name__, str(exc))
        return 2
    except (SpinwallError, ValueError) as exc:
        _emit_json_err(type(exc).__name__, str(exc))
        return 1
    return 0


def _emit_json_err(kind: str, message: str):
    sys.stderr.write(json.dumps({"error": kind, "message": message}) + "\n")


if __name__ == "__main__":
    sys.exit(main())

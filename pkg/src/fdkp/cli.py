"""Batch front end: subcommands driven by a TOML config file.

Subcommands: dispersion | simulate | soliton-check | verify-integrals |
stability-eigen | stability-perturb | sweep.  Exit codes: 0 success,
2 validation error, 3 numerical failure.  FDKP_LOG sets the log level.
"""

import argparse
import concurrent.futures
import csv
import hashlib
import json
import logging
import os
import sys

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from . import __version__, kernels, models, solver, spectral, stability, waves
from .errors import ConfigError, FdkpError, UnstableRun

log = logging.getLogger("fdkp")

_FMT = "%.17g"


def _fmt(x):
    return _FMT % x


def load_config(path):
    try:
        with open(path, "rb") as fh:
            return tomllib.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"invalid config syntax: {exc}") from exc


def _kernel_from_config(cfg):
    fam = cfg.get("kernel", {}).get("family", "whitham_shallow")
    if fam == "whitham_shallow":
        return kernels.whitham_shallow()
    if fam == "green_exponential":
        return kernels.green_exponential()
    raise ConfigError(f"unknown kernel.family {fam!r} "
                      "(custom kernels are registered programmatically)")


def _model_from_config(cfg):
    m = cfg.get("model", {})
    tag = m.get("tag")
    if tag not in models.ALL_TAGS:
        raise ConfigError(f"model.tag must be one of {models.ALL_TAGS}")
    kernel = _kernel_from_config(cfg) if tag in models.KERNEL_TAGS else None
    try:
        return models.ModelSpec(tag, mu=float(m.get("mu", 1.0)),
                                nu=m.get("nu"), kernel=kernel)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _grid_from_config(cfg):
    g = cfg.get("grid", {})
    try:
        return spectral.Grid(int(g.get("nx", 256)), int(g.get("ny", 1)),
                             float(g.get("lx", 80.0)), float(g.get("ly", 80.0)))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _wave_from_config(cfg, model):
    w = cfg.get("wave", {})
    family = w.get("family", "mkdv")
    try:
        return waves.soliton_params(family, float(w.get("c", 2.0)),
                                    model.mu, model.nu_value)
    except (ValueError, FdkpError) as exc:
        raise ConfigError(str(exc)) from exc


def _out_dir(cfg, args):
    out = args.out or cfg.get("output", {}).get("dir", "out")
    os.makedirs(out, exist_ok=True)
    return out


def _write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([c if isinstance(c, (str, int)) else _fmt(c)
                             for c in row])


def _write_manifest(out, config_path, files):
    digest = ""
    if config_path and os.path.exists(config_path):
        with open(config_path, "rb") as fh:
            digest = hashlib.sha256(fh.read()).hexdigest()
    manifest = {"config_sha256": digest, "version": __version__,
                "files": sorted(files)}
    with open(os.path.join(out, "manifest.json"), "w") as fh:
        json.dump(manifest, fh, indent=1, sort_keys=True)
        fh.write("\n")


def cmd_dispersion(cfg, args):
    d = cfg.get("dispersion", {})
    kernel = _kernel_from_config(cfg)
    nu = d.get("nu")
    nu = float(nu) if nu is not None else kernels.nu_coefficient(kernel)
    nk = int(d.get("nk", 64))
    nl = int(d.get("nl", 64))
    kmax = float(d.get("kmax", 4.0))
    lmax = float(d.get("lmax", 4.0))
    ks = np.linspace(0.0, kmax, nk)
    ls = np.linspace(0.0, lmax, nl)
    rows = []
    for k in ks:
        for l in ls:
            w_full = kernels.omega(kernel, k, l, mode="full")
            singular = k == 0.0 and l != 0.0
            if k == 0.0:
                w_kp = float("nan")
            else:
                w_kp = kernels.omega(kernel, k, l, mode="kp-longwave", nu=nu)
            rows.append((k, l, w_full, w_kp, int(singular)))
    out = _out_dir(cfg, args)
    path = os.path.join(out, "dispersion.csv")
    _write_csv(path, ["k", "l", "omega_full", "omega_kp_longwave",
                      "kp_singular_ray"], rows)
    _write_manifest(out, args.config, ["dispersion.csv"])
    log.info("wrote %s (%d rows)", path, len(rows))
    return 0


def cmd_simulate(cfg, args):
    model = _model_from_config(cfg)
    grid = _grid_from_config(cfg)
    s = cfg.get("stepper", {})
    config = solver.StepperConfig(
        scheme=s.get("scheme"), dt=s.get("dt"),
        t_final=float(s.get("t_final", 1.0)),
        snapshot_every=int(s.get("snapshot_every", 100)),
        monitor_every=int(s.get("monitor_every", 100)))
    w = cfg.get("wave", {})
    params = _wave_from_config(cfg, model)
    delta = float(w.get("delta", 0.0))
    if delta:
        n = int(w.get("lambda_mode", 1))
        lam = 2.0 * np.pi * n / grid.ly
        initial = waves.perturbed_soliton(params, grid, lam, delta,
                                          profile=w.get("profile", "z0"))
    else:
        initial = waves.line_soliton_field(params, grid,
                                           zero_mass=model.is_kp_family)
    out = _out_dir(cfg, args)
    traj = solver.run(model, initial, config)
    files = []
    mon_path = os.path.join(out, "monitor.csv")
    _write_csv(mon_path,
               ["time", "Q", "E", "P", "dQ_rel", "dE_rel", "dP_rel",
                "max_abs_v"],
               [(r.time, r.Q, r.E, r.P, r.dQ_rel, r.dE_rel, r.dP_rel, vmax)
                for r, vmax in traj.monitor])
    files.append("monitor.csv")
    for t, f in zip(traj.times, traj.fields):
        name = f"snapshot_t{t:012.6f}.bin"
        spectral.save_snapshot(os.path.join(out, name), f, time=t,
                               model_tag=model.tag)
        files += [name, name + ".json"]
    _write_manifest(out, args.config, files)
    log.info("run finished at t = %g; %d snapshots", traj.times[-1],
             len(traj.times))
    return 0


def cmd_soliton_check(cfg, args):
    model = _model_from_config(cfg)
    grid = _grid_from_config(cfg)
    params = _wave_from_config(cfg, model)
    field = waves.line_soliton_field(params, grid)
    # traveling ODE residual R'' + kappa^2 (2R^2 - 1) R on the profile
    prof = field.real[0] / params.alpha
    kx = 2.0 * np.pi * np.fft.rfftfreq(grid.nx, d=grid.lx / grid.nx)
    d2 = np.fft.irfft(-(kx ** 2) * np.fft.rfft(prof), n=grid.nx)
    ode_res = float(np.max(np.abs(
        d2 + params.kappa ** 2 * (2.0 * prof ** 2 - 1.0) * prof)))
    # traveling-frame residual rhs + c v_x of the evolution model
    ev = models.ModelEvaluator(model, grid)
    vhat = field.spec
    rhs = ev.rhs_spec(vhat)
    cvx = params.c * spectral.derivative_x_symbol(grid) * vhat
    frame_res = float(np.max(np.abs(np.fft.irfft2(
        rhs + cvx, s=grid.real_shape, norm="forward"))))
    out = _out_dir(cfg, args)
    report = {"family": params.family, "c": params.c, "mu": params.mu,
              "nu": params.nu, "alpha": params.alpha, "kappa": params.kappa,
              "ode_residual_max": ode_res,
              "traveling_frame_residual_max": frame_res}
    path = os.path.join(out, "soliton_check.json")
    with open(path, "w") as fh:
        json.dump(report, fh, indent=1, sort_keys=True)
        fh.write("\n")
    _write_manifest(out, args.config, ["soliton_check.json"])
    print(f"ode residual {ode_res:.3e}  traveling residual {frame_res:.3e}")
    return 0


def cmd_verify_integrals(cfg, args):
    st = cfg.get("stability", {})
    kappas = st.get("kappa_list", [0.5, 1.0, 2.0])
    tol = float(st.get("tolerance", 1e-10))
    rows = []
    n_pass = n_all = 0
    for kap in kappas:
        for name, computed, expected in stability.inner_product_table(kap):
            ok = abs(computed - expected) <= tol
            n_all += 1
            n_pass += ok
            rows.append((name, kap, computed, expected,
                         abs(computed - expected), "PASS" if ok else "FAIL"))
    out = _out_dir(cfg, args)
    path = os.path.join(out, "inner_products.csv")
    _write_csv(path, ["name", "kappa", "computed", "closed_form", "abs_err",
                      "status"], rows)
    _write_manifest(out, args.config, ["inner_products.csv"])
    print(f"{n_pass}/{n_all} PASS at {tol:g}")
    return 0 if n_pass == n_all else 3


def _eigen_point(task):
    family, c, nu, lam, n_modes, length = task
    pencil = stability.build_pencil(family, c, nu, lam, n_modes, length)
    om = stability.growth_rates(pencil)[0]
    return (family, c, nu, lam, float(om.real), float(om.imag),
            pencil.n_modes, pencil.length)


def _eigen_tasks(cfg):
    st = cfg.get("stability", {})
    family = st.get("family", "whitham")
    if family not in (stability.WHITHAM, stability.BBM):
        raise ConfigError(f"unknown stability.family {family!r}")
    c_list = st.get("c_list", [])
    lambda_list = st.get("lambda_list", [])
    if not c_list or not lambda_list:
        raise ConfigError("stability.c_list and stability.lambda_list "
                          "must be non-empty")
    nu = float(st.get("nu", 1.0))
    n_modes = int(st.get("n_modes", 512))
    length = st.get("length")
    return [(family, float(c), nu, float(lam), n_modes, length)
            for c in c_list for lam in lambda_list]


def cmd_stability_eigen(cfg, args):
    rows = [_eigen_point(t) for t in _eigen_tasks(cfg)]
    out = _out_dir(cfg, args)
    path = os.path.join(out, "stability_eigen.csv")
    _write_csv(path, ["family", "c", "nu", "lambda", "re_omega_max",
                      "im_omega_at_max", "N", "L"], rows)
    _write_manifest(out, args.config, ["stability_eigen.csv"])
    log.info("wrote %s (%d rows)", path, len(rows))
    return 0


def cmd_stability_perturb(cfg, args):
    model = _model_from_config(cfg)
    grid = _grid_from_config(cfg)
    params = _wave_from_config(cfg, model)
    w = cfg.get("wave", {})
    delta = float(w.get("delta", 1e-4))
    n = int(w.get("lambda_mode", 1))
    lam = 2.0 * np.pi * n / grid.ly
    s = cfg.get("stepper", {})
    config = solver.StepperConfig(
        scheme=s.get("scheme"), dt=s.get("dt"),
        t_final=float(s.get("t_final", 25.0)),
        snapshot_every=int(s.get("snapshot_every", 25)),
        monitor_every=int(s.get("monitor_every", 0)))
    initial = waves.perturbed_soliton(params, grid, lam, delta,
                                      profile=w.get("profile", "z0"))
    traj = solver.run(model, initial, config)
    rate, r2, t0, t1 = stability.measure_growth(traj, lam, alpha=params.alpha)
    out = _out_dir(cfg, args)
    path = os.path.join(out, "stability_perturb.csv")
    _write_csv(path, ["lambda", "fitted_rate", "r_squared", "window_start",
                      "window_end"], [(lam, rate, r2, t0, t1)])
    _write_manifest(out, args.config, ["stability_perturb.csv"])
    print(f"lambda {lam:g}: rate {rate:.6g}  R^2 {r2:.4f}")
    return 0


def cmd_sweep(cfg, args):
    tasks = _eigen_tasks(cfg)
    jobs = max(1, args.jobs)
    if jobs == 1:
        rows = [_eigen_point(t) for t in tasks]
    else:
        with concurrent.futures.ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_eigen_point, tasks))
    out = _out_dir(cfg, args)
    path = os.path.join(out, "sweep.csv")
    _write_csv(path, ["family", "c", "nu", "lambda", "re_omega_max",
                      "im_omega_at_max", "N", "L"], rows)
    _write_manifest(out, args.config, ["sweep.csv"])
    log.info("wrote %s (%d rows)", path, len(rows))
    return 0


_COMMANDS = {
    "dispersion": cmd_dispersion,
    "simulate": cmd_simulate,
    "soliton-check": cmd_soliton_check,
    "verify-integrals": cmd_verify_integrals,
    "stability-eigen": cmd_stability_eigen,
    "stability-perturb": cmd_stability_perturb,
    "sweep": cmd_sweep,
}


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="fdkp",
        description="Pseudo-spectral solvers and transverse-instability "
                    "analysis for full dispersion KP models")
    parser.add_argument("command", choices=sorted(_COMMANDS))
    parser.add_argument("--config", required=True, help="TOML config path")
    parser.add_argument("--out", default=None, help="output directory")
    parser.add_argument("--jobs", type=int, default=1,
                        help="parallel jobs for sweep")
    args = parser.parse_args(argv)
    logging.basicConfig(level=os.environ.get("FDKP_LOG", "INFO").upper(),
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = load_config(args.config)
        return _COMMANDS[args.command](cfg, args)
    except ConfigError as exc:
        log.error("invalid configuration: %s", exc)
        return 2
    except UnstableRun as exc:
        log.error("numerical failure: %s (last valid t = %s)", exc,
                  exc.last_time)
        return 3
    except FdkpError as exc:
        log.error("numerical failure: %s", exc)
        return 3


if __name__ == "__main__":
    sys.exit(main())

"""
Command-line pipeline: every stage is a subcommand emitting plot-ready
files plus a reproducibility manifest.

    ground-state      solve and store the field-free ground state
    sample-env        draw disorder configurations
    run               propagate the ensemble and store records
    spectrum          harmonic spectrum from stored records
    gabor             time-frequency map from stored records
    purity            purity series and decay fit from stored snapshots
    density-map       |ρ(x,x')|² and ρ(x,x,t) maps from stored snapshots
    sfa               field-only recollision channels and cutoff scaling
    orbits            periodic orbits of the classical companion
    pair-correlation  scatterer distance histogram

Propagation happens once (`run`); every analysis command re-reads the
stored records and never mutates them.  Exit codes: 0 success, 2 bad
configuration, 3 missing upstream artifact, 4 numerical failure.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import __version__
from .config import (ConfigError, RunConfig, load_config, parse_config,
                     render_config)
from .ensemble import (EnsembleRecord, PropagationFailure,
                       density_matrix_map, ensemble_expectation,
                       probability_density_map, purity_series, run_ensemble)
from .model import potential_atom
from .sampler import pair_correlation, sample_ensemble, save_configurations, \
    load_configurations
from .semiclassics import (OrbitError, find_periodic_orbit, find_returns,
                           max_return_energy, quiver_guess, symmetry_partner)
from .spectra import fit_purity_decay, gabor, hhg_spectrum
from .storage import (Manifest, MissingArtifactError, read_map,
                      read_wavefunctions, write_csv, write_map,
                      write_wavefunctions)
from .tdse import ConvergenceError, Grid, ground_state

EXIT_CONFIG = 2
EXIT_MISSING = 3
EXIT_NUMERICAL = 4


def _resolve_config(args) -> RunConfig:
    cfg = load_config(args.config) if args.config else RunConfig()
    if getattr(args, "seed", None) is not None:
        cfg = replace(cfg, master_seed=args.seed)
    if getattr(args, "workers", None) is not None:
        cfg = replace(cfg, workers=args.workers)
    if getattr(args, "out", None) is not None:
        cfg = replace(cfg, out_dir=args.out)
    return cfg


def _new_manifest(cfg: RunConfig) -> Manifest:
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    manifest = Manifest(out, render_config(cfg), cfg.master_seed)
    return manifest


def _load_records_manifest(records: str) -> Manifest:
    manifest = Manifest.load(records)
    stale = manifest.verify_outputs()
    for name in stale:
        print(f"warning: checksum mismatch for {name} (records were edited?)",
              file=sys.stderr)
    return manifest


def cmd_ground_state(args) -> int:
    cfg = _resolve_config(args)
    manifest = _new_manifest(cfg)
    grid = Grid(cfg.x_min, cfg.x_max, cfg.n_grid)
    psi, energy = ground_state(grid, lambda x: potential_atom(x, cfg.atom))
    out = Path(cfg.out_dir)
    write_csv(out / "ground_state.csv",
              {"x": grid.x, "density": np.abs(psi.amplitudes) ** 2,
               "potential": potential_atom(grid.x, cfg.atom)},
              "ground-state", manifest.checksum(),
              extra_comments=(f"energy_au: {energy:.12f}",))
    write_wavefunctions(out / "ground_state.bin", cfg.x_min, cfg.x_max,
                        [0.0], [psi.amplitudes])
    manifest.record_output(out / "ground_state.csv")
    manifest.record_output(out / "ground_state.bin")
    manifest.save()
    print(f"ground-state energy: {energy:.8f} a.u.")
    return 0


def cmd_sample_env(args) -> int:
    cfg = _resolve_config(args)
    manifest = _new_manifest(cfg)
    configs = sample_ensemble(cfg.master_seed, cfg.n_c, cfg.structure)
    out = Path(cfg.out_dir)
    save_configurations(out / "environment.txt", configs, cfg.structure,
                        cfg.master_seed)
    manifest.record_output(out / "environment.txt")
    manifest.save()
    print(f"sampled {cfg.n_c} configurations -> {out / 'environment.txt'}")
    return 0


def cmd_run(args) -> int:
    cfg = _resolve_config(args)
    manifest = _new_manifest(cfg)
    out = Path(cfg.out_dir)
    record = run_ensemble(cfg.ensemble_spec(), workers=cfg.workers)
    (out / "config.txt").write_text(render_config(cfg))
    save_configurations(out / "environment.txt", record.configs,
                        cfg.structure, cfg.master_seed)
    write_csv(out / "mean_series.csv",
              {"t": record.times,
               "norm": ensemble_expectation(record, "norm"),
               "x_expect": ensemble_expectation(record, "x_expect"),
               "accel": ensemble_expectation(record, "accel")},
              "run", manifest.checksum(),
              extra_comments=(f"ground_energy_au: {record.ground_energy:.12f}",
                              f"n_c: {record.n_c}"))
    config_axis = np.arange(record.n_c, dtype=float)
    for name in ("accel", "norm", "x_expect"):
        write_map(out / f"{name}_configs.bin", record.times, config_axis,
                  getattr(record, name), "t", "config")
    snap_dir = out / "snapshots"
    snap_dir.mkdir(exist_ok=True)
    for i in range(record.n_c):
        write_wavefunctions(snap_dir / f"config_{i:04d}.bin",
                            cfg.x_min, cfg.x_max, record.snapshot_times,
                            record.snapshots[:, i, :])
    for p in sorted(out.rglob("*")):
        if p.is_file() and p.name != "manifest.json":
            manifest.record_output(p)
    manifest.save()
    print(f"ensemble of {record.n_c} configurations stored in {out}")
    return 0


def _records_record(records: str):
    """Reload the pieces of a stored run that analyses need."""
    manifest = _load_records_manifest(records)
    cfg = parse_config(manifest.data["config"])
    rdir = Path(records)
    t_axis, _, accel, _, _ = read_map(rdir / "accel_configs.bin")
    return manifest, cfg, rdir, t_axis, accel


def cmd_spectrum(args) -> int:
    manifest, cfg, rdir, t_axis, accel = _records_record(args.records)
    series = accel[:, args.member] if args.member is not None \
        else accel.mean(axis=1)
    spec = hhg_spectrum(t_axis, series, cfg.laser, hann=args.hann)
    out = Path(args.out) if args.out else rdir
    out.mkdir(parents=True, exist_ok=True)
    tag = f"member{args.member}" if args.member is not None else "mean"
    path = out / f"spectrum_{tag}.csv"
    write_csv(path, {"order": spec.orders, "magnitude": spec.magnitude},
              "spectrum", manifest.checksum(),
              extra_comments=(f"source: {tag}", f"hann: {args.hann}"))
    if out == rdir:
        manifest.record_output(path)
        manifest.save()
    print(f"spectrum -> {path}")
    return 0


def cmd_gabor(args) -> int:
    manifest, cfg, rdir, t_axis, accel = _records_record(args.records)
    series = accel[:, args.member] if args.member is not None \
        else accel.mean(axis=1)
    t_w = cfg.gabor_window_cycles * cfg.laser.period
    omegas = np.arange(0.0, args.max_order + 1e-9, args.d_order) \
        * cfg.laser.omega_L
    gmap = gabor(t_axis, series, t_w, omegas, laser=cfg.laser)
    out = Path(args.out) if args.out else rdir
    out.mkdir(parents=True, exist_ok=True)
    path = out / "gabor.bin"
    write_map(path, gmap.taus, gmap.omegas / cfg.laser.omega_L, gmap.values,
              "tau", "order")
    if out == rdir:
        manifest.record_output(path)
        manifest.save()
    print(f"gabor map ({gmap.taus.size} x {gmap.omegas.size}) -> {path}")
    return 0


def _load_snapshots(rdir: Path, cfg: RunConfig):
    snap_dir = rdir / "snapshots"
    files = sorted(snap_dir.glob("config_*.bin"))
    if not files:
        raise MissingArtifactError(f"no snapshots under {snap_dir}")
    all_states, times = [], None
    for f in files:
        _, _, t, states = read_wavefunctions(f)
        times = t if times is None else times
        all_states.append(states)
    return times, np.stack(all_states, axis=1)  # (n_probe, n_c, n)


def cmd_purity(args) -> int:
    manifest = _load_records_manifest(args.records)
    cfg = parse_config(manifest.data["config"])
    rdir = Path(args.records)
    times, snaps = _load_snapshots(rdir, cfg)
    record = EnsembleRecord(
        spec=cfg.ensemble_spec(), configs=[None] * snaps.shape[1],
        times=times, norm=np.empty(0), x_expect=np.empty(0),
        accel=np.empty(0), snapshot_times=times, snapshots=snaps)
    t_axis, p_tot, p_ph = purity_series(record, cfg.mask)
    out = Path(args.out) if args.out else rdir
    out.mkdir(parents=True, exist_ok=True)
    path = out / "purity.csv"
    write_csv(path, {"t": t_axis, "purity_total": p_tot,
                     "purity_photoelectron": p_ph},
              "purity", manifest.checksum())
    window = (cfg.laser.n_up * cfg.laser.period, cfg.laser.duration)
    rows = {"which": [], "gamma": [], "t_star_fs": [], "t0_fs": [],
            "residual": []}
    for which, series in (("total", p_tot), ("photoelectron", p_ph)):
        fit = fit_purity_decay(t_axis, series, window)
        rows["which"].append(0.0 if which == "total" else 1.0)
        rows["gamma"].append(fit.gamma)
        rows["t_star_fs"].append(fit.t_star)
        rows["t0_fs"].append(fit.t0)
        rows["residual"].append(fit.residual_norm)
        print(f"{which}: gamma={fit.gamma:.3f} t*={fit.t_star:.3f} fs "
              f"t0={fit.t0:.3f} fs residual={fit.residual_norm:.2e}")
    fit_path = out / "purity_fit.csv"
    write_csv(fit_path, rows, "purity", manifest.checksum(),
              extra_comments=("which: 0 = total, 1 = photoelectron",))
    if out == rdir:
        manifest.record_output(path)
        manifest.record_output(fit_path)
        manifest.save()
    return 0


def cmd_density_map(args) -> int:
    manifest = _load_records_manifest(args.records)
    cfg = parse_config(manifest.data["config"])
    rdir = Path(args.records)
    times, snaps = _load_snapshots(rdir, cfg)
    grid = Grid(cfg.x_min, cfg.x_max, cfg.n_grid)
    out = Path(args.out) if args.out else rdir
    out.mkdir(parents=True, exist_ok=True)

    idx = int(np.argmin(np.abs(times - args.time))) if args.time is not None \
        else len(times) // 2
    x_range = (args.x_lo, args.x_hi) if args.x_lo is not None else None
    dmap = density_matrix_map(snaps[idx], grid,
                              mask=cfg.mask if args.masked else None,
                              x_range=x_range, stride=args.stride)
    dpath = out / "density_matrix.bin"
    write_map(dpath, dmap.row_axis, dmap.col_axis, dmap.values, "x", "x'")

    record = EnsembleRecord(
        spec=cfg.ensemble_spec(), configs=[None] * snaps.shape[1],
        times=times, norm=np.empty(0), x_expect=np.empty(0),
        accel=np.empty(0), snapshot_times=times, snapshots=snaps)
    pmap = probability_density_map(record)
    ppath = out / "probability_density.bin"
    write_map(ppath, pmap.row_axis, pmap.col_axis, pmap.values, "t", "x")
    if out == rdir:
        manifest.record_output(dpath)
        manifest.record_output(ppath)
        manifest.save()
    print(f"density matrix at t={times[idx]:.2f} -> {dpath}")
    print(f"probability density map -> {ppath}")
    return 0


def cmd_sfa(args) -> int:
    cfg = _resolve_config(args)
    manifest = _new_manifest(cfg)
    out = Path(cfg.out_dir)
    ells = [float(v) for v in args.ell_list.split(",")]
    laser = cfg.laser
    emax = []
    for ell in ells:
        cols = {"t_i": [], "t_r": [], "e_r": [], "side": []}
        for t_i in np.linspace(0.0, laser.period, args.launches,
                               endpoint=False):
            for ev in find_returns(t_i, ell, laser, horizon=args.horizon):
                cols["t_i"].append(ev.t_i)
                cols["t_r"].append(ev.t_r)
                cols["e_r"].append(ev.e_r)
                cols["side"].append(float(ev.side))
        path = out / f"sfa_returns_ell{ell:g}.csv"
        write_csv(path, {k: np.array(v) for k, v in cols.items()},
                  "sfa", manifest.checksum(),
                  extra_comments=(f"ell_au: {ell}",))
        manifest.record_output(path)
        emax.append(max_return_energy(ell, laser, horizon=args.horizon,
                                      n_launch=args.launches))
    epath = out / "sfa_emax.csv"
    write_csv(epath, {"ell": np.array(ells), "e_max": np.array(emax)},
              "sfa", manifest.checksum())
    manifest.record_output(epath)
    manifest.save()
    print(f"return maps for ell = {ells} -> {out}")
    return 0


def cmd_orbits(args) -> int:
    cfg = _resolve_config(args)
    manifest = _new_manifest(cfg)
    out = Path(cfg.out_dir)
    anchors = [float(v) for v in args.anchors.split(",")]
    lines = []
    for anchor in anchors:
        t0 = anchor * cfg.laser.period
        orbit = find_periodic_orbit(quiver_guess(t0, cfg.laser), t0,
                                    cfg.laser, cfg.atom)
        partner = symmetry_partner(orbit, cfg.laser, cfg.atom)
        for name, orb in (("orbit", orbit), ("partner", partner)):
            m = orb.monodromy
            lines += [
                f"[{name} anchor={anchor:g}]",
                f"t0_au = {orb.t0:.12g}",
                f"x = {orb.z_star[0]:.12g}",
                f"p = {orb.z_star[1]:.12g}",
                f"monodromy = {m[0, 0]:.12g} {m[0, 1]:.12g} "
                f"{m[1, 0]:.12g} {m[1, 1]:.12g}",
                f"classification = {orb.classification}",
                f"residual = {orb.residual:.3e}",
                "",
            ]
        print(f"anchor {anchor} T_L: z* = ({orbit.z_star[0]:.6f}, "
              f"{orbit.z_star[1]:.6f}), {orbit.classification}, "
              f"|tr M| = {abs(np.trace(orbit.monodromy)):.4f}")
    path = out / "orbits.txt"
    path.write_text("\n".join(lines))
    manifest.record_output(path)
    manifest.save()
    return 0


def cmd_pair_correlation(args) -> int:
    if args.env:
        configs, header = load_configurations(args.env)
        out = Path(args.out) if args.out else Path(args.env).parent
        checksum = ""
    else:
        manifest = _load_records_manifest(args.records)
        rdir = Path(args.records)
        configs, header = load_configurations(rdir / "environment.txt")
        out = Path(args.out) if args.out else rdir
        checksum = manifest.checksum()
    out.mkdir(parents=True, exist_ok=True)
    edges, mass = pair_correlation(configs, args.bin_width, args.r_max)
    centers = 0.5 * (edges[:-1] + edges[1:])
    path = out / "pair_correlation.csv"
    write_csv(path, {"r": centers, "mass": mass}, "pair-correlation", checksum)
    print(f"pair correlation from {len(configs)} configurations -> {path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hhg1d",
        description="strong-field dynamics of a 1D atom in a disordered "
                    "scattering environment")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, records=False, run_cfg=True):
        p = sub.add_parser(name)
        if run_cfg:
            p.add_argument("--config", help="configuration file")
            p.add_argument("--seed", type=int, help="override master seed")
            p.add_argument("--workers", type=int, help="worker processes")
        p.add_argument("--out", help="output directory")
        if records:
            p.add_argument("--records", required=True,
                           help="directory written by `run`")
        p.set_defaults(handler=fn)
        return p

    add("ground-state", cmd_ground_state)
    add("sample-env", cmd_sample_env)
    add("run", cmd_run)

    p = add("spectrum", cmd_spectrum, records=True, run_cfg=False)
    p.add_argument("--member", type=int, help="single configuration index")
    p.add_argument("--hann", action="store_true")

    p = add("gabor", cmd_gabor, records=True, run_cfg=False)
    p.add_argument("--member", type=int)
    p.add_argument("--max-order", type=float, default=60.0)
    p.add_argument("--d-order", type=float, default=0.25)

    add("purity", cmd_purity, records=True, run_cfg=False)

    p = add("density-map", cmd_density_map, records=True, run_cfg=False)
    p.add_argument("--time", type=float, help="snapshot time (a.u.)")
    p.add_argument("--x-lo", type=float)
    p.add_argument("--x-hi", type=float)
    p.add_argument("--stride", type=int, default=1)
    p.add_argument("--masked", action="store_true")

    p = add("sfa", cmd_sfa)
    p.add_argument("--ell-list", default="0")
    p.add_argument("--horizon", type=float, default=1.5)
    p.add_argument("--launches", type=int, default=2000)

    p = add("orbits", cmd_orbits)
    p.add_argument("--anchors", default="2.0,2.5",
                   help="orbit anchor times in laser cycles")

    p = add("pair-correlation", cmd_pair_correlation, records=False,
            run_cfg=False)
    p.add_argument("--records", help="directory written by `run`")
    p.add_argument("--env", help="environment.txt from sample-env")
    p.add_argument("--bin-width", type=float, default=0.5)
    p.add_argument("--r-max", type=float, default=80.0)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except MissingArtifactError as exc:
        print(f"missing artifact: {exc}", file=sys.stderr)
        return EXIT_MISSING
    except (PropagationFailure, ConvergenceError, OrbitError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())

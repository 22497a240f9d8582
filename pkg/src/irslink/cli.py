"""Command-line entry points.

Verbs:
    validate  run internal consistency checks on the configured scenario
    sweep     evaluate the configured layouts/methods and write the CSV
    rate      print the closed-form rate of the statistical design
    oracle    compare the statistical design against the exhaustive grid

All verbs accept --config (flat key=value file), --seed and --trials
overrides; sweep/oracle honour --out. Exit code 0 on success, 1 on any
validation or runtime failure.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace

import numpy as np

from .analysis import build_moment_matrices, closed_form_rate
from .beamforming import solve_statistical_reflection
from .channel import sample_channels
from .config import ConfigError, SystemConfig, load_config
from .estimation import estimation_error_variance, sample_estimates
from .geometry import sample_geometry
from .harness import emit_csv, render_csv, run_sweep
from .scenario import build_statistics
from .simulator import grid_search_from_stats, monte_carlo_rate
from .streams import GEOMETRY_STREAM, derive_seed, keyed_rng


def _load(args) -> SystemConfig:
    cfg = load_config(args.config) if args.config else SystemConfig()
    overrides = {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.trials is not None:
        overrides["trials"] = args.trials
    return replace(cfg, **overrides) if overrides else cfg


def _scenario(cfg: SystemConfig):
    seed = derive_seed(cfg.seed, f"N{cfg.N}_L{cfg.L}")
    geom = sample_geometry(cfg, keyed_rng(seed, GEOMETRY_STREAM))
    return geom, build_statistics(cfg, geom)


def cmd_validate(args) -> int:
    cfg = _load(args)
    geom, stats = _scenario(cfg)
    checks: list[tuple[str, bool, str]] = []

    unweighted = np.abs(np.exp(1j * np.angle(stats.Hbar[np.nonzero(stats.Hbar)])))
    checks.append(("los entries unit modulus",
                   bool(np.max(np.abs(unweighted - 1.0)) < 1e-12), ""))
    herm = np.max(np.abs(stats.R - stats.R.conj().T))
    eigmin = float(np.linalg.eigvalsh(stats.R).min())
    checks.append(("element correlation Hermitian PSD",
                   herm < 1e-12 and eigmin > -1e-12,
                   f"hermiticity {herm:.1e}, min eig {eigmin:.1e}"))
    d1 = geom.bs_surface_distances()
    d2 = geom.surface_user_distances()
    checks.append(("geometry distance bounds",
                   bool(np.all(d1 <= cfg.d1_max) and np.all(d2 <= cfg.d2_max)
                        and np.all(d1 >= cfg.d_min) and np.all(d2 >= cfg.d_min)),
                   f"d1 in [{d1.min():.2f}, {d1.max():.2f}], "
                   f"d2 in [{d2.min():.2f}, {d2.max():.2f}]"))
    _, stats_again = _scenario(cfg)
    checks.append(("scenario deterministic",
                   bool(np.array_equal(stats.Hbar, stats_again.Hbar)
                        and np.array_equal(stats.gbar_diag, stats_again.gbar_diag)), ""))
    rng = keyed_rng(cfg.seed, 0)
    real = sample_channels(stats, rng)
    checks.append(("cascade identity Z = diag(g) H",
                   bool(np.array_equal(real.Z, real.gdiag[:, None] * real.H)), ""))
    xi = estimation_error_variance(cfg.T, cfg.rho, cfg.perfect_csi)
    est = sample_estimates(real, xi, rng)
    # rounding scale set by the larger of channel and error magnitudes
    scale = np.abs(real.Z) + np.abs(est.E_Z)
    resid = np.abs((est.Z_hat + est.E_Z) - real.Z)
    checks.append(("estimate + error reconstructs channel",
                   bool(np.all(resid <= 8 * np.spacing(scale) + 1e-300)),
                   f"max residual {resid.max():.2e}"))
    sm = build_moment_matrices(stats, cfg)
    eigmin_q = float(np.linalg.eigvalsh(sm.Q).min())
    checks.append(("noise quadratic form positive definite", eigmin_q > 0,
                   f"min eig {eigmin_q:.3e}"))

    ok = True
    for name, passed, detail in checks:
        print(f"{'ok' if passed else 'FAIL':4s} {name}" + (f" ({detail})" if detail else ""))
        ok &= passed
    return 0 if ok else 1


def cmd_sweep(args) -> int:
    cfg = _load(args)
    rows = run_sweep(cfg, methods=args.methods.split(",") if args.methods else None,
                     workers=args.workers)
    if args.out:
        emit_csv(rows, args.out)
        print(f"wrote {len(rows)} rows to {args.out}")
    else:
        sys.stdout.write(render_csv(rows))
    return 0


def cmd_rate(args) -> int:
    cfg = _load(args)
    _, stats = _scenario(cfg)
    sm = build_moment_matrices(stats, cfg)
    v = solve_statistical_reflection(sm)
    rate = closed_form_rate(v, sm, cfg.P)
    print(f"closed-form rate (statistical design): {rate:.9g} bits/s/Hz "
          f"(N={cfg.N}, L={cfg.L}, M={cfg.M}, xi={sm.xi:.9g})")
    if args.mc:
        mc = monte_carlo_rate(stats, v, cfg)
        print(f"monte carlo rate: {mc.rate:.9g} +/- {mc.std_error:.9g} "
              f"({mc.trials} trials)")
    return 0


def cmd_oracle(args) -> int:
    cfg = _load(args)
    _, stats = _scenario(cfg)
    sm = build_moment_matrices(stats, cfg)
    v = solve_statistical_reflection(sm)
    solver_rate = closed_form_rate(v, sm, cfg.P)
    _, grid_rate = grid_search_from_stats(stats, cfg, args.levels)
    ratio = solver_rate / grid_rate if grid_rate > 0 else float("nan")
    print(f"solver rate: {solver_rate:.9g}")
    print(f"grid oracle rate ({args.levels} levels): {grid_rate:.9g}")
    print(f"ratio: {ratio:.6f}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="irslink",
                                description="Reflect-assisted downlink toolkit")
    sub = p.add_subparsers(dest="verb", required=True)

    def common(sp):
        sp.add_argument("--config", help="flat key=value config file")
        sp.add_argument("--seed", type=int, help="override config seed")
        sp.add_argument("--trials", type=int, help="override config trials")

    sp = sub.add_parser("validate", help="run internal consistency checks")
    common(sp)
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("sweep", help="evaluate layouts and write CSV")
    common(sp)
    sp.add_argument("--out", help="output CSV path (stdout when omitted)")
    sp.add_argument("--methods", help="comma-separated methods override")
    sp.add_argument("--workers", type=int, default=1,
                    help="Monte Carlo thread count (output is identical for any value)")
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("rate", help="closed-form rate of the configured layout")
    common(sp)
    sp.add_argument("--mc", action="store_true", help="also run Monte Carlo")
    sp.set_defaults(func=cmd_rate)

    sp = sub.add_parser("oracle", help="statistical design vs exhaustive grid")
    common(sp)
    sp.add_argument("--levels", type=int, default=16, help="phase grid levels")
    sp.add_argument("--out", help=argparse.SUPPRESS)
    sp.set_defaults(func=cmd_oracle)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

"""Command-line entry point: figure data, band tables, verification, experiments."""

import argparse
import math
import os
import sys
import time

import numpy as np

from . import dynamics, identities, linops, smallamp, wave
from ._io import fmt, write_csv, write_json
from .config import RunConfig
from .errors import CnoidalError

OUT_ENV = "CNOIDAL_LAB_OUT"


def _meta(cfg, **extra):
    meta = {"config": cfg.digest()}
    meta.update({k: v for k, v in extra.items()})
    return meta


def _out(cfg, name):
    return os.path.join(cfg.out_dir, name)


def _tag(x):
    return format(float(x), "g")


def cmd_figure1(cfg, ee_list, n=256):
    paths = []
    for ee in ee_list:
        w = wave.family_from_ee(ee)
        orbit = wave.phase_orbit(w, n)
        meta = _meta(cfg, ee=fmt(ee), n=n, orbit="heteroclinic" if w.is_soliton else "closed")
        paths.append(write_csv(_out(cfg, f"figure1_ee{_tag(ee)}.csv"), ["u0", "du0"], orbit, meta))
    return paths


def cmd_figure2(cfg, a=0.2, c=2.0, n_kappa=201):
    kappas = np.linspace(-0.5, 0.5, n_kappa)
    ns = range(-3, 4)
    exact = smallamp.exact_band_rows(c, kappas, ns)
    header = ["kappa"] + [f"n{n:+d}" for n in ns]
    p1 = write_csv(_out(cfg, "figure2_exact.csv"), header, exact, _meta(cfg, a=0, c=fmt(c)))
    inside = abs(c - 2.0) <= math.sqrt(2.0) * a
    model = smallamp.figure2_rows(a, c, kappas)
    meta = _meta(cfg, a=fmt(a), c=fmt(c), asymptotic_interval="inside" if inside else "outside")
    p2 = write_csv(_out(cfg, "figure2_model.csv"), ["kappa", "lam_minus1", "lam_plus1"], model, meta)
    return [p1, p2]


def figure3_grid(n_points=51):
    """ee = j / (n_points - 1); decimal-exact so rows like ee = 0.8 appear verbatim."""
    return [j / (n_points - 1) for j in range(n_points)]


def cmd_figure3(cfg, n_points=51):
    rows = linops.c_interval_sweep(figure3_grid(n_points))
    header = ["ee", "c_minus", "c_plus", "asym_c_minus", "asym_c_plus"]
    return [write_csv(_out(cfg, "figure3.csv"), header, rows, _meta(cfg, n=n_points))]


def cmd_bands(cfg, ee, c, kind="Pminus", n_bands=6, n_kappa=33):
    w = wave.family_from_ee(ee)
    g = linops.z_grid(cfg.grid_m) if kind.startswith("P") else linops.grid_for(w, cfg.grid_m)
    kappas = np.linspace(-0.5, 0.5, n_kappa) if kind.startswith("P") else [0.0]
    bs = linops.bands(kind, w, c, kappas, n_bands, g)
    header = ["kappa"] + [f"band{j}" for j in range(n_bands)]
    meta = _meta(cfg, ee=fmt(ee), c=fmt(c), kind=kind)
    return [write_csv(_out(cfg, f"bands_{kind}_ee{_tag(ee)}_c{_tag(c)}.csv"), header, bs.rows(), meta)]


# ---------------------------------------------------------------- verification


def _check_interval(cfg):
    lo, hi = linops.c_interval_exact(0.8)
    return max(abs(lo - 1.4), abs(hi - 2.6)), 0.0


def _check_kernels(cfg):
    worst = 0.0
    for ee in (0.1, 0.3, 0.5, 0.7, 0.9):
        w = wave.family_from_ee(ee)
        g = linops.grid_for(w, cfg.grid_m)
        for kind in ("Kplus", "Kminus"):
            ev = np.sort(np.abs(linops.assemble(kind, w, 2.0, 0.0, g).eigvalsh()))
            if ev[1] <= 1e-4:
                return math.inf, cfg.kernel_tol
            worst = max(worst, ev[0])
    return worst, cfg.kernel_tol


def _check_positivity(cfg):
    worst = 0.0
    kappas = np.linspace(-0.5, 0.5, 33)
    for ee in (0.1, 0.5, 0.9):
        for kind in ("Pplus", "Pminus"):
            b = linops.bands(kind, ee, 2.0, kappas, 4, linops.z_grid(cfg.grid_m))
            worst = max(worst, -float(b.lowest().min()))
    return worst, cfg.kernel_tol


def _check_negative(cfg):
    b = linops.bands("Pminus", 0.8, 2.9, np.linspace(-0.5, 0.5, 33), 4, linops.z_grid(cfg.grid_m))
    # passes when the band dips below -1e-6; the value is the margin
    return float(b.lowest().min()) + 1e-6, 0.0


def _check_identities(cfg):
    worst = 0.0
    for k in (0.2, 0.5, 0.8):
        for tag in identities.IDENTITIES:
            worst = max(worst, identities.verify_identity(tag, k, cfg.grid_m))
    return worst, cfg.identity_tol


def _check_curvature(cfg):
    worst = 0.0
    for ee in (0.2, 0.5, 0.8):
        for c in (1.5, 2.0, 2.5):
            ex = linops.mu_curvature_explicit(ee, c)
            nu = linops.mu_curvature_numeric(ee, c, linops.z_grid(cfg.grid_m))
            worst = max(worst, abs(nu - ex) / abs(ex))
    return worst, 1e-6


def _check_intertwining(cfg):
    rng = np.random.default_rng(cfg.seed)
    worst = 0.0
    for ee in (0.3, 0.7):
        w = wave.family_from_ee(ee)
        g = linops.grid_for(w, cfg.grid_m)
        f = dynamics.random_direction(rng, g.m, g.period, g.m // 8, decay=0.0).real
        for c in (1.3, 2.0, 2.7):
            worst = max(worst, linops.intertwine_residual(w, c, f, g))
    return worst, 1e-6


def _check_smallamp(cfg):
    # value is the worst error in units of the tolerance 5 a^4 + 1e-8
    worst = 0.0
    for a in (0.05, 0.1, 0.2):
        for kappa in np.linspace(-0.4, 0.4, 17):
            lo, hi = smallamp.full_pair(a, kappa)
            mhi, mlo = smallamp.band_expansion("minus", smallamp.SmallAmpParams(a, 0.0, kappa))
            worst = max(worst, max(abs(lo - mlo), abs(hi - mhi)) / (5.0 * a ** 4 + 1e-8))
    return worst, 1.0


def _check_flip(cfg):
    worst = 0.0
    for a in (0.05, 0.1, 0.2):
        lo, hi = smallamp.curvature_flip(a)
        r = math.sqrt(2.0) * a
        worst = max(worst, abs((hi - 2.0) / r - 1.0), abs((2.0 - lo) / r - 1.0))
    return worst, 0.1


def _check_stability(cfg):
    worst = 0.0
    for ee in (0.3, 0.7):
        w = wave.family_from_ee(ee)
        worst = max(worst, linops.spectral_stability_check(w, linops.grid_for(w, cfg.grid_m), np.linspace(-0.5, 0.5, 17)))
    return worst, cfg.kernel_tol


CHECKS = {
    "interval_exact": _check_interval,
    "kernels_c2": _check_kernels,
    "positivity_c2": _check_positivity,
    "negative_direction": _check_negative,
    "identities": _check_identities,
    "curvature": _check_curvature,
    "intertwining": _check_intertwining,
    "smallamp_oracle": _check_smallamp,
    "curvature_flip": _check_flip,
    "jl_stability": _check_stability,
}


def cmd_verify(cfg, only=None, stream=None):
    """Run the checks; return (exit_code, rows) and write verify.csv."""
    stream = sys.stdout if stream is None else stream
    names = list(CHECKS) if not only else [only]
    rows = []
    for name in names:
        if name not in CHECKS:
            raise CnoidalError(f"unknown check {name!r}; choose from {', '.join(CHECKS)}")
        value, threshold = CHECKS[name](cfg)
        ok = value <= threshold
        rows.append((name, value, threshold, ok))
    header = ["check", "value", "threshold", "status"]
    stream.write(",".join(header) + "\n")
    for row in rows:
        stream.write(",".join(fmt(v) for v in row) + "\n")
    write_csv(_out(cfg, "verify.csv"), header, rows, _meta(cfg))
    if only in (None, "identities"):
        table = identities.identity_table((0.2, 0.5, 0.8), cfg.grid_m)
        write_csv(_out(cfg, "identities.csv"), ["identity", "k", "m", "residual"], table, _meta(cfg))
    return (0 if all(r[3] for r in rows) else 1), rows


def cmd_evolve(cfg, ee, n_periods=1, delta=1e-3, t_end=20.0):
    report = dynamics.stability_experiment(
        ee, n_periods, delta, t_end, cfg.dt, m=cfg.grid_m, seed=cfg.seed
    )
    stem = f"evolve_ee{_tag(ee)}_N{n_periods}_d{_tag(delta)}"
    payload = report.as_dict()
    payload["params"]["config"] = cfg.digest()
    p1 = write_json(_out(cfg, stem + ".json"), payload)
    keys, rows = report.csv_rows()
    p2 = write_csv(_out(cfg, stem + ".csv"), list(keys), rows, _meta(cfg, ee=fmt(ee), delta=fmt(delta)))
    return [p1, p2], report


# ---------------------------------------------------------------- argparse


def _ee(text):
    value = float(text)
    if not 0.0 <= value <= 1.0:
        raise argparse.ArgumentTypeError(f"ee must lie in [0, 1], got {text}")
    return value


def _open_ee(text):
    value = _ee(text)
    if not 0.0 < value < 1.0:
        raise argparse.ArgumentTypeError(f"ee must lie in (0, 1), got {text}")
    return value


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--grid-m", type=int, default=256)
    common.add_argument("--kernel-tol", type=float, default=1e-7)
    common.add_argument("--identity-tol", type=float, default=1e-6)
    common.add_argument("--dt", type=float, default=1e-3)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out-dir", default=".")

    parser = argparse.ArgumentParser(prog="cnoidal-lab", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("figure1", parents=[common], help="phase-plane level sets")
    p.add_argument("--ee", type=_ee, nargs="+", default=[0.0, 0.4, 0.8])
    p.add_argument("--n", type=int, default=256)

    p = sub.add_parser("figure2", parents=[common], help="small-amplitude band model")
    p.add_argument("--a", type=float, default=0.2)
    p.add_argument("--c", type=float, default=2.0)

    p = sub.add_parser("figure3", parents=[common], help="stability interval sweep")
    p.add_argument("--n-points", type=int, default=51)

    p = sub.add_parser("bands", parents=[common], help="Floquet-Bloch band table")
    p.add_argument("--ee", type=_open_ee, default=0.5)
    p.add_argument("--c", type=float, default=2.0)
    p.add_argument("--kind", choices=linops.KINDS, default="Pminus")
    p.add_argument("--n-bands", type=int, default=6)
    p.add_argument("--n-kappa", type=int, default=33)

    p = sub.add_parser("verify", parents=[common], help="run the invariant checks")
    p.add_argument("--check", choices=list(CHECKS), default=None, help="run a single check")

    p = sub.add_parser("evolve", parents=[common], help="orbital-stability experiment")
    p.add_argument("--ee", type=_open_ee, default=0.5)
    p.add_argument("--n-periods", type=int, default=1)
    p.add_argument("--delta", type=float, default=1e-3)
    p.add_argument("--t-end", type=float, default=20.0)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    out_dir = os.environ.get(OUT_ENV) or args.out_dir
    try:
        cfg = RunConfig(
            grid_m=args.grid_m,
            kernel_tol=args.kernel_tol,
            identity_tol=args.identity_tol,
            dt=args.dt,
            seed=args.seed,
            out_dir=out_dir,
        )
    except ValueError as exc:
        parser.error(str(exc))
    start = time.perf_counter()
    try:
        if args.command == "figure1":
            paths = cmd_figure1(cfg, args.ee, args.n)
        elif args.command == "figure2":
            paths = cmd_figure2(cfg, args.a, args.c)
        elif args.command == "figure3":
            paths = cmd_figure3(cfg, args.n_points)
        elif args.command == "bands":
            paths = cmd_bands(cfg, args.ee, args.c, args.kind, args.n_bands, args.n_kappa)
        elif args.command == "verify":
            code, _ = cmd_verify(cfg, args.check)
            return code
        else:
            paths, report = cmd_evolve(cfg, args.ee, args.n_periods, args.delta, args.t_end)
            for key in sorted(report.summary):
                print(f"{key}={fmt(report.summary[key])}")
    except CnoidalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    for path in paths:
        print(path)
    print(f"# {time.perf_counter() - start:.2f}s", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())

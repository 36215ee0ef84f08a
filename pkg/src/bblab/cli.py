"""Command-line front end for the resonator-energy studies.

Subcommands: planck | direct | exact | converge | invert | singularity.
CSV is the contract (one header row, 17 significant digits); JSON
summaries carry verdicts plus a version field; SVG plots are a
convenience. Identical invocations produce byte-identical files: no
timestamps, no randomness.

Exit codes: 0 success, 1 numeric or solver failure, 2 usage or parse
failure.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import __version__
from .density import (
    EnsembleConfig,
    PhysicalConstants,
    REDUCED,
    alpha_grid,
    energy_curve,
    load_curve_csv,
    parse_density,
)
from .ensemble import convergence_study, exact_mean_energies, planck_u
from .errors import ComputationError
from .inverse import (
    reconstruct_log_phi,
    reconstruct_weight,
    singularity_test,
    total_energy_divergence,
)
from .svgplot import write_lines
from .transform import mean_resonator_energy

# Default eta0 ladder for the singularity probe: halving steps toward 0.
_ETA0_DEFAULT = "0.5,0.25,0.125,0.0625,0.03125,0.015625"


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _parse_grid(text: str, log: bool) -> list[float]:
    parts = text.split(":")
    if len(parts) != 3:
        raise ValueError(f"grid {text!r} must be min:max:count")
    try:
        lo = float(parts[0])
        hi = float(parts[1])
        count = int(parts[2])
    except ValueError:
        raise ValueError(f"grid {text!r} must be min:max:count with numbers")
    return list(alpha_grid(lo, hi, count, "log" if log else "linear").values)


def _parse_constants(text: str | None) -> PhysicalConstants:
    if not text:
        return REDUCED
    values = {"kB": 1.0, "h": 1.0, "c": 1.0}
    for item in text.split(","):
        key, sep, raw = item.partition("=")
        key = key.strip()
        if not sep or key not in values:
            raise ValueError(f"constants need kB=..,h=..,c=.. entries, got {item!r}")
        values[key] = float(raw)
    return PhysicalConstants(k_b=values["kB"], h=values["h"], c=values["c"])


def _parse_int_list(text: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",") if part]
    except ValueError:
        raise ValueError(f"expected comma-separated integers, got {text!r}")


def _write_csv(path: str | None, header: str, rows) -> None:
    text = header + "\n" + "".join(",".join(row) + "\n" for row in rows)
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _write_json(path: str | None, payload: dict) -> None:
    payload = dict(payload, version=__version__)
    text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def cmd_planck(args) -> int:
    consts = _parse_constants(args.constants)
    nus = _parse_grid(args.nu, args.log)
    us = [planck_u(nu, args.T, consts).u for nu in nus]
    _write_csv(args.out, "nu,u", ([_fmt(n), _fmt(u)] for n, u in zip(nus, us)))
    if args.json:
        _write_json(
            args.json,
            {"command": "planck", "columns": ["nu", "u"], "rows": [list(r) for r in zip(nus, us)]},
        )
    if args.plot:
        write_lines(
            args.plot,
            [("u(nu)", nus, us)],
            title="spectral energy density",
            xlabel="nu",
            ylabel="u",
        )
    return 0


def cmd_direct(args) -> int:
    consts = _parse_constants(args.constants)
    w = parse_density(args.w)
    alphas = _parse_grid(args.alpha, args.log)
    temps = [1.0 / (consts.k_b * a) for a in alphas]
    ys = [mean_resonator_energy(w, a) for a in alphas]
    _write_csv(
        args.out,
        "alpha,T,Y",
        ([_fmt(a), _fmt(t), _fmt(y)] for a, t, y in zip(alphas, temps, ys)),
    )
    if args.json:
        _write_json(
            args.json,
            {
                "command": "direct",
                "columns": ["alpha", "T", "Y"],
                "rows": [list(r) for r in zip(alphas, temps, ys)],
            },
        )
    if args.plot:
        write_lines(
            args.plot,
            [("Y(alpha)", alphas, ys)],
            title="mean resonator energy",
            xlabel="alpha",
            ylabel="Y",
        )
    return 0


def cmd_exact(args) -> int:
    w = parse_density(args.w)
    rows = []
    for n in _parse_int_list(args.n):
        config = EnsembleConfig(n=n, p=args.p, e_total=args.E)
        res = exact_mean_energies(w, config, step=args.step)
        rows.append([str(n), str(args.p), _fmt(args.E), _fmt(res.y), _fmt(res.x)])
    _write_csv(args.out, "n,p,E_total,Y_exact,X_exact", rows)
    if args.json:
        _write_json(
            args.json,
            {
                "command": "exact",
                "columns": ["n", "p", "E_total", "Y_exact", "X_exact"],
                "rows": [
                    [int(r[0]), int(r[1]), float(r[2]), float(r[3]), float(r[4])]
                    for r in rows
                ],
            },
        )
    return 0


def cmd_converge(args) -> int:
    w = parse_density(args.w)
    sizes = _parse_int_list(args.n)
    rows = convergence_study(w, args.beta, args.r, sizes, step=args.step)
    _write_csv(
        args.out,
        "n,p,Y_exact,Y_asymptotic,abs_error",
        (
            [str(r.n), str(r.p), _fmt(r.y_exact), _fmt(r.y_asymptotic), _fmt(r.abs_error)]
            for r in rows
        ),
    )
    if args.json:
        _write_json(
            args.json,
            {
                "command": "converge",
                "columns": ["n", "p", "Y_exact", "Y_asymptotic", "abs_error"],
                "rows": [
                    [r.n, r.p, r.y_exact, r.y_asymptotic, r.abs_error] for r in rows
                ],
            },
        )
    if args.plot:
        write_lines(
            args.plot,
            [("abs error", [float(r.n) for r in rows], [r.abs_error for r in rows])],
            title="finite-size error",
            xlabel="n",
            ylabel="|Y_exact - Y_asymptotic|",
        )
    return 0


def cmd_invert(args) -> int:
    consts = _parse_constants(args.constants)
    if (args.curve is None) == (args.w is None):
        raise ValueError("give exactly one of --curve or --w")
    if args.curve is not None:
        if args.alpha is not None:
            raise ValueError("--alpha only applies when synthesizing from --w")
        curve = load_curve_csv(args.curve)
        density = None
    else:
        if args.alpha is None:
            raise ValueError("--w needs an --alpha grid to synthesize the curve")
        density = parse_density(args.w)
        alphas = _parse_grid(args.alpha, args.log)
        curve = energy_curve(
            alphas, [mean_resonator_energy(density, a) for a in alphas]
        )
    log_phi = reconstruct_log_phi(curve)
    samples = np.column_stack((log_phi[:, 0], np.exp(log_phi[:, 1])))
    recon = reconstruct_weight(
        samples, args.eta_max, args.grid_size, args.lam, args.max_iter
    )
    step = recon.eta_grid[1] - recon.eta_grid[0]
    # An atom sitting within one detection window of the origin is mass
    # that refuses to vanish with eta: the discrete signature of a
    # singular weight. Extrapolating cumulative mass on the gridded
    # reconstruction would instead see half a cell of any smooth density
    # parked at eta=0, so the flag keys on detected atoms.
    singular = any(atom.position <= 3.0 * step for atom in recon.atoms)
    note = ""
    if density is not None:
        verdict = total_energy_divergence(density, args.T, constants=consts)
        divergence = verdict.classification
        note = verdict.note
    else:
        divergence = "inconclusive"
        note = "divergence verdict needs a density family, not a raw curve"
    if args.out:
        _write_csv(
            args.out,
            "eta,mass",
            ([_fmt(e), _fmt(m)] for e, m in zip(recon.eta_grid, recon.masses)),
        )
    _write_json(
        args.json,
        {
            "command": "invert",
            "atoms": [[a.position, a.mass] for a in recon.atoms],
            "residual_rms": recon.residual_rms,
            "lambda": recon.lam,
            "kkt_residual": recon.kkt_residual,
            "converged": recon.converged,
            "iterations": recon.iterations,
            "singular": singular,
            "divergence": divergence,
            "note": note,
        },
    )
    if args.plot:
        write_lines(
            args.plot,
            [("mass", list(recon.eta_grid), list(recon.masses))],
            title="reconstructed weight",
            xlabel="eta",
            ylabel="mass",
        )
    if not recon.converged:
        print(
            f"solver stopped after {recon.iterations} passes with KKT residual "
            f"{recon.kkt_residual:.3g}; artifacts carry the best iterate",
            file=sys.stderr,
        )
        return 1
    return 0


def cmd_singularity(args) -> int:
    w = parse_density(args.w)
    eta0 = [float(part) for part in args.eta0.split(",") if part]
    verdict = singularity_test(w, eta0)
    _write_json(
        args.json,
        {
            "command": "singularity",
            "singular": verdict.singular,
            "limit": verdict.limit,
            "exponent": verdict.exponent,
            "eta0": eta0,
        },
    )
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bblab",
        description="Mean-energy laws of resonators from their weight density, "
        "and the inverse reconstruction.",
    )
    parser.add_argument("--version", action="version", version=f"bblab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, plot=True):
        p.add_argument("--out", help="CSV output path (default: stdout)")
        p.add_argument("--json", help="JSON output path")
        p.add_argument(
            "--constants",
            help="physical constants as kB=..,h=..,c=.. (default: all 1)",
        )
        if plot:
            p.add_argument("--plot", help="SVG plot output path")

    p = sub.add_parser("planck", help="blackbody spectral density u(nu) at fixed T")
    p.add_argument("--T", type=float, default=1.0, help="temperature (default 1)")
    p.add_argument("--nu", required=True, help="frequency grid min:max:count")
    p.add_argument("--log", action="store_true", help="log-spaced grid")
    common(p)
    p.set_defaults(func=cmd_planck)

    p = sub.add_parser("direct", help="mean energy Y(alpha) from a weight density")
    p.add_argument("--w", required=True, help="density spec (const | exp | comb:... | table:...)")
    p.add_argument("--alpha", required=True, help="alpha grid min:max:count")
    p.add_argument("--log", action="store_true", help="log-spaced grid")
    common(p)
    p.set_defaults(func=cmd_direct)

    p = sub.add_parser("exact", help="closed-system mean energies by exact sums")
    p.add_argument("--w", required=True, help="density spec")
    p.add_argument("--n", required=True, help="resonator counts, comma separated")
    p.add_argument("--p", type=int, required=True, help="molecule count")
    p.add_argument("--E", type=float, required=True, help="total energy")
    p.add_argument("--step", type=float, help="quadrature step for continuous densities")
    common(p, plot=False)
    p.set_defaults(func=cmd_exact)

    p = sub.add_parser("converge", help="exact vs asymptotic mean energy over n")
    p.add_argument("--w", required=True, help="density spec")
    p.add_argument("--beta", type=float, required=True, help="energy per resonator E/n")
    p.add_argument("--r", type=float, required=True, help="molecule ratio p/n")
    p.add_argument("--n", required=True, help="resonator counts, comma separated")
    p.add_argument("--step", type=float, help="quadrature step for continuous densities")
    common(p)
    p.set_defaults(func=cmd_converge)

    p = sub.add_parser("invert", help="reconstruct the weight density from Y(alpha)")
    p.add_argument("--curve", help="CSV of alpha,Y samples")
    p.add_argument("--w", help="density spec to synthesize the curve from")
    p.add_argument("--alpha", help="alpha grid min:max:count (with --w)")
    p.add_argument("--log", action="store_true", help="log-spaced grid")
    p.add_argument("--eta-max", type=float, default=6.0, help="reconstruction range")
    p.add_argument("--grid-size", type=int, default=601, help="reconstruction nodes")
    p.add_argument("--lam", type=float, default=1e-6, help="regularization weight")
    p.add_argument("--max-iter", type=int, default=10**5, help="solver pass cap")
    p.add_argument("--T", type=float, default=1.0, help="temperature for the divergence verdict")
    common(p)
    p.set_defaults(func=cmd_invert)

    p = sub.add_parser("singularity", help="does the density hold mass at the origin")
    p.add_argument("--w", required=True, help="density spec")
    p.add_argument(
        "--eta0",
        default=_ETA0_DEFAULT,
        help="descending eta0 probe values, comma separated",
    )
    p.add_argument("--json", help="JSON output path (default: stdout)")
    p.set_defaults(func=cmd_singularity)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ComputationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

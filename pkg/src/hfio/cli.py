"""Command-line front end.

``hfio run <command> --config c.json [flags]`` builds the multiplier bank
described by the config, runs one command, and writes CSV/JSON artifacts
(plus rendered figures) atomically into the output directory.

Exit codes: 0 when everything passed, 1 when any experiment fit failed its
target, 2 on configuration or input errors.  Identical config + seed produce
byte-identical artifacts at any ``--threads`` setting.
"""

from __future__ import annotations

import argparse
import copy
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

COMMANDS = ("norm", "equivalence", "scaling", "kernel-decay", "ballvol",
            "aperture", "lemmas", "multiplier", "make-corpus")

DEFAULT_CONFIG = {
    "grid": {"n": 2, "N": 64, "L": math.pi},
    "bank": {"J": 4, "K": 2, "M": 16,
             "tau_nodes_per_octave": 48, "sphere_nodes": 2048},
    "norms": {"alpha": 2.5, "p": 1.0},
    "experiments": {
        "seed": 0x48464F31,
        "taus": [0.125, 0.0625],
        "s": 0.25,
        "s_control": 0.1,
        "lambdas": [1.0, 2.0, 4.0],
        "N_list": [1, 2, 3],
        "sigma": 0.125,
        "pairs": [[0, 0]],
        "gamma": None,
        "rate": 4.0,
        "trials_absorption": 1000,
        "trials_summation": 100,
        "aperture_functions": 6,
        "tolerances": {
            "equivalence_band": 25.0,
            "scaling": 0.1,
            "scaling_control": -0.1,
            "aperture": 0.3,
            "multiplier_slope": 0.15,
            "multiplier_max": 1.5,
        },
    },
    "io": {"output_dir": "hfio-out", "formats": "both", "figures": True},
}


class ConfigError(Exception):
    pass


def _merge(base: dict, override: dict) -> dict:
    out = copy.deepcopy(base)
    for k, v in override.items():
        if isinstance(v, dict) and isinstance(out.get(k), dict):
            out[k] = _merge(out[k], v)
        else:
            out[k] = v
    return out


def load_config(path: str | None, args: argparse.Namespace) -> dict:
    cfg = copy.deepcopy(DEFAULT_CONFIG)
    if path is not None:
        try:
            with open(path) as fh:
                user = json.load(fh)
        except (OSError, json.JSONDecodeError) as e:
            raise ConfigError(f"cannot read config {path}: {e}") from e
        if not isinstance(user, dict):
            raise ConfigError("config root must be a JSON object")
        cfg = _merge(cfg, user)
    if args.seed is not None:
        cfg["experiments"]["seed"] = args.seed
    if args.output_dir is not None:
        cfg["io"]["output_dir"] = args.output_dir
    elif os.environ.get("HFIO_OUTPUT_DIR"):
        cfg["io"]["output_dir"] = os.environ["HFIO_OUTPUT_DIR"]
    if args.format is not None:
        cfg["io"]["formats"] = args.format
    validate_config(cfg)
    return cfg


def validate_config(cfg: dict) -> None:
    g = cfg["grid"]
    if g["n"] != 2:
        raise ConfigError("only n = 2 is supported")
    N, L = g["N"], float(g["L"])
    if N < 8 or (N & (N - 1)) != 0:
        raise ConfigError(f"grid.N must be a power of two >= 8, got {N}")
    if L <= 0:
        raise ConfigError("grid.L must be positive")
    b = cfg["bank"]
    if b["J"] < 1 or b["K"] < 1:
        raise ConfigError("bank.J and bank.K must be >= 1")
    if b["M"] < 8 or b["M"] % 4:
        raise ConfigError("bank.M must be a multiple of 4, at least 8")
    nyquist = math.pi * N / L
    if 2.0 * 2.0 ** b["J"] > nyquist:
        raise ConfigError(
            f"nyquist-violation: finest scale 2^-{b['J']} needs frequencies up "
            f"to {2.0 * 2.0 ** b['J']:g} but the lattice reaches {nyquist:g}")
    if cfg["norms"]["alpha"] <= 0:
        raise ConfigError("norms.alpha must be positive")
    if cfg["io"]["formats"] not in ("csv", "json", "both"):
        raise ConfigError("io.formats must be csv, json, or both")


def build_from_config(cfg: dict):
    from .lattice import make_grid
    from .packets import DirectionSet, ProfileSet, ScaleGrid, build_bank

    g, b = cfg["grid"], cfg["bank"]
    grid = make_grid(g["n"], g["N"], float(g["L"]))
    dirs = DirectionSet.uniform(b["M"])
    scales = ScaleGrid.geometric(b["J"], b["K"])
    profiles = ProfileSet(tau_nodes_per_octave=b["tau_nodes_per_octave"],
                          sphere_nodes=b["sphere_nodes"])
    return build_bank(grid, dirs, scales, profiles)


# ---------------------------------------------------------------------------
# artifact helpers
# ---------------------------------------------------------------------------

def _emit_fits(fits, outdir: Path, stem: str, formats: str) -> None:
    from .report import write_fits_csv, write_fits_json

    if formats in ("csv", "both"):
        write_fits_csv(outdir / f"{stem}.csv", fits)
    if formats in ("json", "both"):
        write_fits_json(outdir / f"{stem}.json", fits)


def _print_fits(fits) -> None:
    for f in fits:
        status = "PASS" if f.passed else "FAIL"
        print(f"{status} {f.experiment_id}: fitted={f.fitted:.6g} "
              f"target={f.target:.6g} tol={f.tolerance:.6g} ({f.mode})")


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_make_corpus(cfg, bank, outdir: Path, args) -> int:
    from .corpus import make_corpus
    from .lattice import to_physical, write_field
    from .report import _atomic_write

    corpus = make_corpus(bank, seed=cfg["experiments"]["seed"])
    cdir = outdir / "corpus"
    cdir.mkdir(parents=True, exist_ok=True)
    names = []
    for name, f in corpus:
        write_field(to_physical(f), cdir / f"{name}.hfio")
        names.append(name)
    _atomic_write(cdir / "manifest.json",
                  lambda fh: json.dump({"seed": cfg["experiments"]["seed"],
                                        "functions": names}, fh, indent=2))
    print(f"wrote {len(names)} corpus fields to {cdir}")
    return 0


def cmd_norm(cfg, bank, outdir: Path, args) -> int:
    from .lattice import read_field
    from .norms import norm_report
    from .report import write_norm_reports_csv, write_norm_reports_json

    if args.input is None:
        raise ConfigError("norm requires --input")
    try:
        f = read_field(args.input)
    except (OSError, ValueError) as e:
        raise ConfigError(f"cannot read input field {args.input}: {e}") from e
    if f.grid != bank.grid:
        raise ConfigError("input field grid does not match config grid")
    rep = norm_report(Path(args.input).stem, f, bank,
                      alpha=cfg["norms"]["alpha"], threads=args.threads)
    formats = cfg["io"]["formats"]
    if formats in ("csv", "both"):
        write_norm_reports_csv(outdir / "norm.csv", [rep])
    if formats in ("json", "both"):
        write_norm_reports_json(outdir / "norm.json", [rep])
    for c, v in rep.values.items():
        print(f"{c}: {v:.8g}")
    return 0


def cmd_equivalence(cfg, bank, outdir: Path, args) -> int:
    from .corpus import make_corpus
    from .experiments import FitResult
    from .norms import compare
    from .report import (render_ratio_figure, write_norm_reports_csv,
                         write_norm_reports_json)

    corpus = make_corpus(bank, seed=cfg["experiments"]["seed"])
    reports, summary = compare(corpus, bank, alpha=cfg["norms"]["alpha"],
                               threads=args.threads)
    formats = cfg["io"]["formats"]
    if formats in ("csv", "both"):
        write_norm_reports_csv(outdir / "equivalence.csv", reports, summary)
    if formats in ("json", "both"):
        write_norm_reports_json(outdir / "equivalence.json", reports, summary)
    if cfg["io"]["figures"]:
        render_ratio_figure(outdir / "equivalence.png", reports)
    band = max(summary.values())
    fit = FitResult("equivalence-band", band,
                    cfg["experiments"]["tolerances"]["equivalence_band"], 0.0,
                    mode="upper", meta={"per_pair": summary})
    _emit_fits([fit], outdir, "equivalence-band", formats)
    _print_fits([fit])
    return 0 if fit.passed else 1


def cmd_scaling(cfg, bank, outdir: Path, args) -> int:
    from .experiments import FitResult, scaling_experiment
    from .report import render_fit_figure

    ex = cfg["experiments"]
    tol = ex["tolerances"]
    main = scaling_experiment(bank, ex["taus"], s=ex["s"],
                              threads=args.threads, tolerance=tol["scaling"])
    tile_norms = {s_["tau"]: s_["tile_norm"] for s_ in main.samples}
    ctrl_raw = scaling_experiment(bank, ex["taus"], s=ex["s_control"],
                                  threads=args.threads, tile_norms=tile_norms,
                                  experiment_id="scaling-control")
    # the control is a sharpness check: it passes by FAILING the null slope
    ctrl = FitResult("scaling-control", ctrl_raw.fitted,
                     tol["scaling_control"], 0.0, mode="upper",
                     samples=ctrl_raw.samples,
                     meta={"s": ex["s_control"], "critical_s": ex["s"]})
    fits = [main, ctrl]
    _emit_fits(fits, outdir, "scaling", cfg["io"]["formats"])
    if cfg["io"]["figures"]:
        render_fit_figure(outdir / "scaling.png", main, "tau", "ratio")
    _print_fits(fits)
    return 0 if all(f.passed for f in fits) else 1


def cmd_kernel_decay(cfg, bank, outdir: Path, args) -> int:
    from .experiments import kernel_decay
    from .report import render_fit_figure

    ex = cfg["experiments"]
    fits = []
    for i, j in ex["pairs"]:
        fits += kernel_decay(bank, i, j, sigma=ex["sigma"],
                             N_list=ex["N_list"],
                             experiment_id=f"kernel-decay-{i}-{j}")
    _emit_fits(fits, outdir, "kernel-decay", cfg["io"]["formats"])
    if cfg["io"]["figures"]:
        for f in fits:
            if f.samples:
                render_fit_figure(outdir / f"{f.experiment_id}.png", f,
                                  "ratio", "peak")
    _print_fits(fits)
    return 0 if all(f.passed for f in fits) else 1


def cmd_ballvol(cfg, bank, outdir: Path, args) -> int:
    from .experiments import ball_volume_experiment
    from .report import render_fit_figure

    fits = ball_volume_experiment(seed=cfg["experiments"]["seed"])
    _emit_fits(fits, outdir, "ballvol", cfg["io"]["formats"])
    if cfg["io"]["figures"]:
        for f in fits:
            if f.samples:
                render_fit_figure(outdir / f"{f.experiment_id}.png", f,
                                  "tau", "volume")
    _print_fits(fits)
    return 0 if all(f.passed for f in fits) else 1


def cmd_aperture(cfg, bank, outdir: Path, args) -> int:
    from .corpus import make_corpus
    from .experiments import aperture_experiment

    ex = cfg["experiments"]
    corpus = make_corpus(bank, seed=ex["seed"])[: ex["aperture_functions"]]
    fit = aperture_experiment(bank, corpus, lambdas=tuple(ex["lambdas"]),
                              threads=args.threads,
                              tolerance=ex["tolerances"]["aperture"])
    _emit_fits([fit], outdir, "aperture", cfg["io"]["formats"])
    _print_fits([fit])
    return 0 if fit.passed else 1


def cmd_lemmas(cfg, bank, outdir: Path, args) -> int:
    from .experiments import discrete_lemmas

    ex = cfg["experiments"]
    fits = discrete_lemmas(trials_absorption=ex["trials_absorption"],
                           trials_summation=ex["trials_summation"],
                           seed=ex["seed"])
    _emit_fits(fits, outdir, "lemmas", cfg["io"]["formats"])
    _print_fits(fits)
    return 0 if all(f.passed for f in fits) else 1


def cmd_multiplier(cfg, bank, outdir: Path, args) -> int:
    from .corpus import wave_packet
    from .experiments import multiplier_invariance

    ex = cfg["experiments"]
    tol = ex["tolerances"]
    gamma = ex["gamma"] if ex["gamma"] is not None else bank.grid.n / 4.0
    family = [(f"wp-{int(round(-np.log2(t)))}-0", wave_packet(bank, 0, t))
              for t in ex["taus"]]
    fits = [
        multiplier_invariance(bank, family, "identity", threads=args.threads,
                              fit_slope=False, tolerance=1.0 + 1e-12,
                              experiment_id="multiplier-identity"),
        multiplier_invariance(bank, family, "mikhlin-test",
                              threads=args.threads, fit_slope=False,
                              tolerance=tol["multiplier_max"],
                              experiment_id="multiplier-mikhlin"),
        multiplier_invariance(bank, family, "riesz-local",
                              threads=args.threads, fit_slope=False,
                              tolerance=tol["multiplier_max"],
                              experiment_id="multiplier-riesz-local"),
        multiplier_invariance(bank, family, "gamma-class",
                              {"gamma": gamma, "rate": ex["rate"]},
                              threads=args.threads, reference="modulus",
                              tolerance=tol["multiplier_slope"],
                              experiment_id="multiplier-gamma-critical"),
    ]
    _emit_fits(fits, outdir, "multiplier", cfg["io"]["formats"])
    _print_fits(fits)
    return 0 if all(f.passed for f in fits) else 1


HANDLERS = {
    "make-corpus": cmd_make_corpus,
    "norm": cmd_norm,
    "equivalence": cmd_equivalence,
    "scaling": cmd_scaling,
    "kernel-decay": cmd_kernel_decay,
    "ballvol": cmd_ballvol,
    "aperture": cmd_aperture,
    "lemmas": cmd_lemmas,
    "multiplier": cmd_multiplier,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hfio", description=__doc__)
    sub = p.add_subparsers(dest="verb", required=True)
    run = sub.add_parser("run", help="run one command")
    run.add_argument("command", choices=COMMANDS)
    run.add_argument("--config", default=None, help="JSON config file")
    run.add_argument("--input", default=None, help="input field file (.hfio)")
    run.add_argument("--output-dir", default=None)
    run.add_argument("--seed", type=int, default=None)
    run.add_argument("--threads", type=int, default=1)
    run.add_argument("--dry-run", action="store_true")
    run.add_argument("--format", choices=("csv", "json", "both"), default=None)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config, args)
        if args.threads < 1:
            raise ConfigError("--threads must be >= 1")
        outdir = Path(cfg["io"]["output_dir"])
        if args.dry_run:
            g, b = cfg["grid"], cfg["bank"]
            print(f"plan: run {args.command}")
            print(f"  grid: n={g['n']} N={g['N']} L={float(g['L']):g}")
            print(f"  bank: M={b['M']} J={b['J']} K={b['K']}")
            print(f"  seed: {cfg['experiments']['seed']}")
            print(f"  output: {outdir} (formats={cfg['io']['formats']})")
            return 0
        bank = build_from_config(cfg)
        return HANDLERS[args.command](cfg, bank, outdir, args)
    except ConfigError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

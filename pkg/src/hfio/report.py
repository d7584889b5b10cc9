"""Delimited/structured report emission and figure rendering.

Norm reports and experiment fits are written as CSV and/or JSON, with
matplotlib figures rendered alongside.  All writes are atomic (temp file in
the destination directory, then rename), so a crashed run never leaves a
truncated artifact.  Output is fully deterministic: keys are emitted in a
fixed order and floats use repr round-tripping.
"""

from __future__ import annotations

import csv
import json
import os
import tempfile
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from .experiments import FitResult
from .norms import CHARACTERIZATIONS, NormReport


def _atomic_write(path: Path, write_fn) -> None:
    """Write via a temp file in the same directory, then rename over."""
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name + ".", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            write_fn(fh)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _jsonable(x):
    if isinstance(x, (np.floating, np.integer)):
        return x.item()
    if isinstance(x, np.ndarray):
        return x.tolist()
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


# ---------------------------------------------------------------------------
# norm reports
# ---------------------------------------------------------------------------

def write_norm_reports_csv(path: str | Path, reports: list[NormReport],
                           summary: dict | None = None) -> None:
    """One row per function: every characterization, lowpass, every ratio."""
    path = Path(path)
    ratio_keys = sorted({k for r in reports for k in r.ratios})

    def emit(fh) -> None:
        w = csv.writer(fh)
        w.writerow(["function"] + list(CHARACTERIZATIONS) + ["lowpass"] + ratio_keys)
        for r in reports:
            row = [r.function_id]
            row += [repr(r.values.get(c, "")) for c in CHARACTERIZATIONS]
            row.append(repr(r.lowpass))
            row += [repr(r.ratios[k]) if k in r.ratios else "" for k in ratio_keys]
            w.writerow(row)
        if summary:
            for k in sorted(summary):
                w.writerow([f"band:{k}", repr(summary[k])])

    _atomic_write(path, emit)


def write_norm_reports_json(path: str | Path, reports: list[NormReport],
                            summary: dict | None = None) -> None:
    path = Path(path)
    doc = {
        "reports": [
            {
                "function": r.function_id,
                "values": _jsonable(r.values),
                "lowpass": r.lowpass,
                "ratios": _jsonable(r.ratios),
                "fingerprint": _jsonable(r.fingerprint),
            }
            for r in reports
        ],
        "summary": _jsonable(summary or {}),
    }
    _atomic_write(path, lambda fh: json.dump(doc, fh, indent=2, sort_keys=True))


# ---------------------------------------------------------------------------
# experiment fits
# ---------------------------------------------------------------------------

def write_fits_csv(path: str | Path, fits: list[FitResult]) -> None:
    path = Path(path)

    def emit(fh) -> None:
        w = csv.writer(fh)
        w.writerow(["experiment", "fitted", "target", "tolerance", "mode", "passed"])
        for f in fits:
            w.writerow([f.experiment_id, repr(float(f.fitted)), repr(float(f.target)),
                        repr(float(f.tolerance)), f.mode, f.passed])

    _atomic_write(path, emit)


def write_fits_json(path: str | Path, fits: list[FitResult]) -> None:
    path = Path(path)
    doc = [
        {
            "experiment": f.experiment_id,
            "fitted": float(f.fitted),
            "target": float(f.target),
            "tolerance": float(f.tolerance),
            "mode": f.mode,
            "passed": f.passed,
            "samples": _jsonable(f.samples),
            "meta": _jsonable(f.meta),
        }
        for f in fits
    ]
    _atomic_write(path, lambda fh: json.dump(doc, fh, indent=2, sort_keys=True))


# ---------------------------------------------------------------------------
# figures
# ---------------------------------------------------------------------------

def render_ratio_figure(path: str | Path, reports: list[NormReport]) -> None:
    """Scatter of every pairwise characterization ratio per corpus function."""
    path = Path(path)
    ratio_keys = sorted({k for r in reports for k in r.ratios})
    fig, ax = plt.subplots(figsize=(8, 4.5))
    for i, key in enumerate(ratio_keys):
        ys = [r.ratios[key] for r in reports if key in r.ratios]
        ax.semilogy([i] * len(ys), ys, "o", alpha=0.6, label=key)
    ax.set_xticks(range(len(ratio_keys)))
    ax.set_xticklabels(ratio_keys, rotation=45, ha="right")
    ax.set_ylabel("norm ratio")
    ax.set_title("pairwise characterization ratios across corpus")
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def render_fit_figure(path: str | Path, fit: FitResult,
                      x_key: str, y_key: str, logx: bool = True,
                      logy: bool = True) -> None:
    """Samples of one experiment with its fitted power law overlaid."""
    path = Path(path)
    xs = np.array([s[x_key] for s in fit.samples if x_key in s and y_key in s],
                  dtype=float)
    ys = np.array([s[y_key] for s in fit.samples if x_key in s and y_key in s],
                  dtype=float)
    fig, ax = plt.subplots(figsize=(6, 4.5))
    ax.plot(xs, ys, "o", label="samples")
    if len(xs) >= 2 and logx and logy:
        order = np.argsort(xs)
        c = np.polyfit(np.log(xs[order]), np.log(ys[order]), 1)
        ax.plot(xs[order], np.exp(np.polyval(c, np.log(xs[order]))), "-",
                label=f"fit slope {c[0]:.3f}")
    if logx:
        ax.set_xscale("log")
    if logy:
        ax.set_yscale("log")
    ax.set_xlabel(x_key)
    ax.set_ylabel(y_key)
    ax.set_title(fit.experiment_id)
    ax.legend()
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)

"""The equivalent norm characterizations and their comparison reports.

Five characterizations of the same space are computed; each is the L^1
phase-space norm of a size functional plus the L^1 norm of a smooth
low-frequency part (the functionals only see frequencies above ~1/2, so the
low-pass term is what makes each expression a norm):

* ``S``       conical square function;
* ``G``       vertical square function;
* ``max``     grand maximal function over Gaussian dilations;
* ``gstar``   weighted square function G*_alpha (alpha > 2);
* ``angular`` directional decomposition measured in the classical Hardy norm,
  integrated over directions.

The theory guarantees these are equivalent with constants independent of the
function; numerically that shows up as pairwise ratios confined to a fixed
band across a diverse corpus, with no drift as the input's frequency
localization refines.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .functionals import (
    conical_square,
    grand_maximal,
    gstar,
    hardy_norm,
    vertical_square,
)
from .lattice import Field, apply_multiplier, lp_norm
from .packets import MultiplierBank

CHARACTERIZATIONS = ("S", "G", "max", "gstar", "angular")


def lowpass_term(f: Field, bank: MultiplierBank) -> float:
    """L^1 norm of the smooth low-frequency part of f."""
    return lp_norm(apply_multiplier(f, bank.q_symbol()), 1.0)


def hfio_norm(f: Field, bank: MultiplierBank, characterization: str,
              alpha: float = 2.5, threads: int = 1) -> float:
    """One norm characterization evaluated on f (see module docstring)."""
    if characterization == "S":
        body = conical_square(f, bank, threads=threads).lp_norm(1.0)
    elif characterization == "G":
        body = vertical_square(f, bank, threads=threads).lp_norm(1.0)
    elif characterization == "max":
        body = grand_maximal(f, bank, threads=threads)
    elif characterization == "gstar":
        body = gstar(f, bank, alpha, threads=threads).lp_norm(1.0)
    elif characterization == "angular":
        dirs = bank.dirs
        parts = [
            hardy_norm(apply_multiplier(f, bank.phi_omega(i)), local=False)
            for i in range(dirs.M)
        ]
        body = float(np.dot(parts, dirs.weights))
    else:
        raise ValueError(f"unknown characterization {characterization!r}")
    return body + lowpass_term(f, bank)


@dataclass
class NormReport:
    """All characterizations of one function, with pairwise ratios."""

    function_id: str
    values: dict[str, float]
    lowpass: float
    ratios: dict[str, float] = field(default_factory=dict)
    fingerprint: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if any(v < 0 for v in self.values.values()):
            raise ValueError("norm values must be nonnegative")
        if not self.ratios:
            for a, b in itertools.combinations(CHARACTERIZATIONS, 2):
                va, vb = self.values.get(a, 0.0), self.values.get(b, 0.0)
                if va > 0 and vb > 0:
                    self.ratios[f"{a}/{b}"] = va / vb


def norm_report(name: str, f: Field, bank: MultiplierBank, alpha: float = 2.5,
                threads: int = 1,
                characterizations: tuple[str, ...] = CHARACTERIZATIONS) -> NormReport:
    values = {
        c: hfio_norm(f, bank, c, alpha=alpha, threads=threads)
        for c in characterizations
    }
    return NormReport(
        function_id=name,
        values=values,
        lowpass=lowpass_term(f, bank),
        fingerprint=bank.fingerprint(),
    )


def compare(corpus: list[tuple[str, Field]], bank: MultiplierBank,
            alpha: float = 2.5, threads: int = 1) -> tuple[list[NormReport], dict]:
    """Per-function reports plus a summary of worst-case ratio spread.

    The summary maps each characterization pair to max/min of its ratio over
    the corpus -- the empirical equivalence band.
    """
    if not corpus:
        raise ValueError("empty-corpus")
    reports = [norm_report(name, f, bank, alpha=alpha, threads=threads)
               for name, f in corpus]
    summary: dict[str, float] = {}
    for a, b in itertools.combinations(CHARACTERIZATIONS, 2):
        key = f"{a}/{b}"
        vals = [r.ratios[key] for r in reports if key in r.ratios]
        if vals:
            summary[key] = max(vals) / min(vals)
    return reports, summary

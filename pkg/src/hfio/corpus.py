"""Seeded test-function corpus.

The standard corpus holds 19 functions chosen to exercise every regime the
norms distinguish: frequency-localized tiles at several scales and
directions, random band-limited fields, low-frequency Gaussians, a radial
chirp, and mean-zero two-bump atoms.  Everything is generated from a seeded
RNG so reports are bit-reproducible.
"""

from __future__ import annotations

import numpy as np

from .lattice import Field, GridSpec, frequency_field, lp_norm, physical_field, to_physical
from .packets import MultiplierBank

DEFAULT_SEED = 0x48464F31


def wave_packet(bank: MultiplierBank, direction: int, tau: float) -> Field:
    """The grid function whose Fourier transform is one tile symbol."""
    return frequency_field(bank.grid, bank.theta(direction, tau).astype(complex))


def _normalized(f: Field) -> Field:
    nrm = lp_norm(f, 2.0)
    g = to_physical(f)
    return Field(f.grid, "physical", g.values / nrm)


def _gaussian(grid: GridSpec, center: tuple[float, float], width: float) -> Field:
    x = grid.axis_coords()
    d = [(x - c + grid.L / 2.0) % grid.L - grid.L / 2.0 for c in center]
    vals = np.exp(-(d[0][:, None] ** 2 + d[1][None, :] ** 2) / (2.0 * width**2))
    return physical_field(grid, vals)


def _radial_chirp(grid: GridSpec, rate: float) -> Field:
    x = grid.axis_coords()
    c = grid.L / 2.0
    d = [(x - c + grid.L / 2.0) % grid.L - grid.L / 2.0 for _ in range(2)]
    r2 = d[0][:, None] ** 2 + d[1][None, :] ** 2
    env = np.exp(-r2 / (2.0 * (grid.L / 8.0) ** 2))
    return physical_field(grid, env * np.cos(rate * r2))


def corpus_taus(bank: MultiplierBank) -> list[float]:
    """The three tile scales used by the standard corpus (finest resolvable
    octaves of the bank's scale grid, leaving one octave of headroom)."""
    J = bank.scales.J
    return [float(np.exp2(-(J - 3))), float(np.exp2(-(J - 2))), float(np.exp2(-(J - 1)))]


def make_corpus(bank: MultiplierBank, seed: int = DEFAULT_SEED) -> list[tuple[str, Field]]:
    """The standard 19-function corpus on the bank's grid."""
    grid = bank.grid
    dirs = bank.dirs
    rng = np.random.default_rng(seed)
    out: list[tuple[str, Field]] = []

    # 9 tiles: 3 scales x 3 directions
    dir_idx = [0, dirs.M // 8, dirs.M // 3]
    for tau in corpus_taus(bank):
        for di in dir_idx:
            name = f"wp-{int(round(-np.log2(tau)))}-{di}"
            out.append((name, _normalized(wave_packet(bank, di, tau))))

    # 5 random band-limited fields on the annulus [R/2, 2R]
    r = grid.freq_radius()
    from .packets import psi as _psi  # annulus profile as the band mask

    R = np.exp2(bank.scales.J - 2)
    mask = _psi(r / R)
    for k in range(5):
        noise = rng.standard_normal(grid.shape) + 1j * rng.standard_normal(grid.shape)
        out.append((f"bl-{k}", _normalized(frequency_field(grid, mask * noise))))

    # 2 Gaussians (low-frequency bulk)
    c = (grid.L / 2.0, grid.L / 2.0)
    out.append(("gauss-wide", _normalized(_gaussian(grid, c, grid.L / 16.0))))
    out.append(("gauss-narrow", _normalized(_gaussian(grid, c, grid.L / 64.0))))

    # 1 radial chirp reaching ~30% of the band limit
    rate = 0.3 * grid.nyquist / (2.0 * grid.L / 4.0)
    out.append(("chirp", _normalized(_radial_chirp(grid, rate))))

    # 2 mean-zero two-bump atoms
    for k, sep in enumerate((grid.L / 8.0, grid.L / 3.0)):
        w = grid.L / 48.0
        a = _gaussian(grid, (c[0] - sep / 2.0, c[1]), w)
        b = _gaussian(grid, (c[0] + sep / 2.0, c[1]), w)
        out.append((f"atom-{k}", _normalized(physical_field(grid, a.values - b.values))))

    assert len(out) == 19
    return out

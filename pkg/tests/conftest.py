"""Shared rigs and expensive session-scoped computations.

Three rigs are used throughout:

* oracle rig (32^2, M=16): small enough for literal brute-force references;
* corpus rig (128^2, M=48): the standard 19-function corpus comparisons;
* slope rig (256^2, M=48, 7 octaves): scale-refinement slope fits.

The heavy norm computations are session fixtures so every test that needs a
corpus norm value shares one computation.
"""

from __future__ import annotations

import numpy as np
import pytest

from hfio.corpus import make_corpus, wave_packet
from hfio.lattice import frequency_field, make_grid
from hfio.packets import DirectionSet, ScaleGrid, build_bank


@pytest.fixture(scope="session")
def oracle_bank():
    return build_bank(make_grid(2, 32, np.pi), DirectionSet.uniform(16),
                      ScaleGrid.geometric(4, 2))


@pytest.fixture(scope="session")
def oracle_fields(oracle_bank):
    """Two high-frequency test functions on the oracle rig."""
    grid = oracle_bank.grid
    rng = np.random.default_rng(7)
    r = grid.freq_radius()
    mask = (r >= 4.0) & (r <= 14.0)
    noise = mask * (rng.standard_normal(grid.shape)
                    + 1j * rng.standard_normal(grid.shape))
    return [
        ("packet", wave_packet(oracle_bank, 3, 2.0**-3)),
        ("noise", frequency_field(grid, noise)),
    ]


@pytest.fixture(scope="session")
def corpus_bank():
    return build_bank(make_grid(2, 128, np.pi), DirectionSet.uniform(48),
                      ScaleGrid.geometric(6, 3))


@pytest.fixture(scope="session")
def corpus(corpus_bank):
    return make_corpus(corpus_bank)


@pytest.fixture(scope="session")
def corpus_reports(corpus, corpus_bank):
    from hfio.norms import compare

    return compare(corpus, corpus_bank, alpha=2.5)


@pytest.fixture(scope="session")
def slope_bank():
    return build_bank(make_grid(2, 256, np.pi), DirectionSet.uniform(48),
                      ScaleGrid.geometric(7, 3))


@pytest.fixture(scope="session")
def slope_taus():
    return [float(2.0 ** (-k / 2.0)) for k in range(6, 13)]


@pytest.fixture(scope="session")
def pair_slope_values(slope_bank, scaling_fits):
    """All five characterizations of the refining tile family.

    Tile scales keep two octaves of headroom above the bank's finest scale:
    once a tile's scale reaches the grid resolution the conical averaging
    balls degenerate to single cells and every ratio picks up a spurious
    drift.  The conical values are shared with the scaling fits.
    """
    from hfio.norms import CHARACTERIZATIONS, hfio_norm

    main, _ = scaling_fits
    s_vals = {s["tau"]: s["tile_norm"] for s in main.samples}
    taus = [2.0**-3, 2.0**-4, 2.0**-5]
    out = {c: [] for c in CHARACTERIZATIONS}
    for tau in taus:
        f = wave_packet(slope_bank, 0, tau)
        out["S"].append(s_vals[tau])
        for c in CHARACTERIZATIONS[1:]:
            out[c].append(hfio_norm(f, slope_bank, c))
    return taus, out


@pytest.fixture(scope="session")
def scaling_fits(slope_bank, slope_taus):
    """Critical and control scaling fits, sharing the tile norms."""
    from hfio.experiments import scaling_experiment

    main = scaling_experiment(slope_bank, slope_taus, s=0.25)
    tile_norms = {s["tau"]: s["tile_norm"] for s in main.samples}
    control = scaling_experiment(slope_bank, slope_taus, s=0.10,
                                 tile_norms=tile_norms,
                                 experiment_id="scaling-control")
    return main, control

"""Square functions and maximal functions on the phase space.

Given a multiplier bank, a grid function f splits into channels
``theta_{omega,sigma}(D) f``, one per (direction, scale).  This module
aggregates the channels into the equivalent size-functionals:

* ``conical_square``   S(f): channel energy averaged over shrinking
  anisotropic balls (radius aperture * sqrt(sigma)), then integrated in scale;
* ``vertical_square``  G(f): pointwise-in-(x, omega) scale aggregation only;
* ``gstar``            G*_alpha(f): like S but with the sharp ball indicator
  replaced by the full polynomially-decaying phase-space weight
  (1 + d^2/sigma)^(-n*alpha), normalized by sigma^n;
* ``peetre_max``       M*_alpha(f): per-scale weighted supremum over all of
  phase space (exact discrete sup);
* ``grand_maximal``    L^1 integral of the sup over dilations of a Gaussian
  approximate identity applied after the directional window;
* ``hardy_norm`` / ``sobolev_norm``: classical comparison norms.

Scale integrals use the bank's geometric scale grid with log weights; ball
and weight sums are exact circular convolutions per direction pair (the
weight table for the pair (i, j) equals that of (j, i), which halves the
kernel transforms).

All reductions accumulate in fixed index order, so results are
bit-reproducible regardless of the worker-thread count.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .cosphere import PhaseSpaceField, _pair_gaps, offset_distance_sq
from .lattice import Field, GridSpec, apply_multiplier, lp_norm, to_frequency
from .packets import MultiplierBank, ScaleGrid, bump, psi


def _map_ordered(fn, items, threads: int):
    """Apply fn over items, possibly in parallel, preserving order."""
    if threads <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def _ipow_recip(base: np.ndarray, p: float) -> np.ndarray:
    """base**(-p), with a fast path for small integer p."""
    if abs(p - round(p)) < 1e-12 and 1 <= round(p) <= 16:
        k = int(round(p))
        inv = 1.0 / base
        out = inv if k % 2 else np.ones_like(inv)
        sq = inv
        k //= 2
        while k:
            sq = sq * sq
            if k % 2:
                out = out * sq
            k //= 2
        return out
    return base ** (-p)


class ChannelDecomposition:
    """Lazy per-(direction, scale) channel access for one grid function."""

    def __init__(self, f: Field, bank: MultiplierBank):
        if f.grid != bank.grid:
            raise ValueError("grid-mismatch between field and bank")
        self.bank = bank
        self.grid = f.grid
        self.fhat = to_frequency(f).values

    def channel_hat(self, i: int, sigma: float) -> np.ndarray:
        return self.bank.theta(i, sigma) * self.fhat

    def channel(self, i: int, sigma: float) -> np.ndarray:
        """Physical-domain channel theta_{omega_i, sigma}(D) f."""
        scale = self.grid.dx**self.grid.n
        return np.fft.ifft2(self.channel_hat(i, sigma)) / scale

    def channels_at(self, sigma: float) -> np.ndarray:
        """All direction channels at one scale, shape (M, N, N), physical."""
        M = self.bank.dirs.M
        hats = np.stack([self.channel_hat(i, sigma) for i in range(M)])
        scale = self.grid.dx**self.grid.n
        return np.fft.ifft2(hats, axes=(-2, -1)) / scale


def decompose(f: Field, bank: MultiplierBank) -> ChannelDecomposition:
    return ChannelDecomposition(f, bank)


# ---------------------------------------------------------------------------
# square functions
# ---------------------------------------------------------------------------

def conical_square(f: Field, bank: MultiplierBank, aperture: float = 1.0,
                   threads: int = 1) -> PhaseSpaceField:
    """Conical square function with the given aperture (>= 1)."""
    if aperture < 1.0:
        raise ValueError("aperture must be >= 1")
    dec = decompose(f, bank)
    grid, dirs, scales = bank.grid, bank.dirs, bank.scales
    gaps = _pair_gaps(dirs)
    M = dirs.M

    def node_term(node):
        sigma, w = node
        rad2 = aperture * aperture * sigma
        U = np.abs(dec.channels_at(sigma)) ** 2
        Uhat = np.fft.fft2(U)
        kern_hat: dict[tuple[int, int], tuple[np.ndarray, int]] = {}
        out = np.empty((M,) + grid.shape)
        for i in range(M):
            acc = np.zeros(grid.shape, dtype=complex)
            cnt = 0
            for j in range(M):
                if gaps[i, j] ** 2 >= rad2:
                    continue
                key = (min(i, j), max(i, j))
                if key not in kern_hat:
                    kern = offset_distance_sq(grid, dirs.vectors[i], dirs.vectors[j]) < rad2
                    kern_hat[key] = (np.fft.fft2(kern.astype(float)), int(kern.sum()))
                kh, kc = kern_hat[key]
                acc += kh * Uhat[j]
                cnt += kc
            out[i] = np.fft.ifft2(acc).real / cnt
        return w * out

    total = sum(_map_ordered(node_term, list(zip(scales.sigmas, scales.weights)), threads))
    return PhaseSpaceField(grid, dirs, np.sqrt(np.maximum(total, 0.0)))


def vertical_square(f: Field, bank: MultiplierBank, extended: bool = False,
                    threads: int = 1) -> PhaseSpaceField:
    """Pointwise scale aggregation; ``extended`` integrates scales up to 16
    (beyond which every channel vanishes identically)."""
    dec = decompose(f, bank)
    scales = bank.scales
    if extended:
        scales = ScaleGrid.geometric(scales.J, scales.K, lo_octaves=4)

    def node_term(node):
        sigma, w = node
        return w * np.abs(dec.channels_at(sigma)) ** 2

    total = sum(_map_ordered(node_term, list(zip(scales.sigmas, scales.weights)), threads))
    return PhaseSpaceField(bank.grid, bank.dirs, np.sqrt(np.maximum(total, 0.0)))


def gstar(f: Field, bank: MultiplierBank, alpha: float,
          threads: int = 1) -> PhaseSpaceField:
    """Weighted phase-space square function (needs alpha > 2 for the norm
    theorems; any alpha > 0 is computable)."""
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    dec = decompose(f, bank)
    grid, dirs, scales = bank.grid, bank.dirs, bank.scales
    n = grid.n
    M = dirs.M
    cell = grid.dx**n * 2.0 * np.pi / M

    def node_term(node):
        sigma, w = node
        U = np.abs(dec.channels_at(sigma)) ** 2
        Uhat = np.fft.fft2(U)
        wt_hat: dict[tuple[int, int], np.ndarray] = {}
        out = np.empty((M,) + grid.shape)
        for i in range(M):
            acc = np.zeros(grid.shape, dtype=complex)
            for j in range(M):
                key = (min(i, j), max(i, j))
                if key not in wt_hat:
                    d2 = offset_distance_sq(grid, dirs.vectors[i], dirs.vectors[j])
                    wt = _ipow_recip(1.0 + d2 / sigma, n * alpha)
                    wt_hat[key] = np.fft.fft2(wt)
                acc += wt_hat[key] * Uhat[j]
            out[i] = np.fft.ifft2(acc).real
        return (w * cell / sigma**n) * out

    total = sum(_map_ordered(node_term, list(zip(scales.sigmas, scales.weights)), threads))
    return PhaseSpaceField(grid, dirs, np.sqrt(np.maximum(total, 0.0)))


# ---------------------------------------------------------------------------
# maximal functions
# ---------------------------------------------------------------------------

def peetre_max(f: Field, bank: MultiplierBank, alpha: float) -> list[PhaseSpaceField]:
    """Per-scale weighted suprema, one phase-space field per scale node.

    The sup runs over the entire discrete phase space (exact); cost is
    quadratic in the number of phase-space cells, so this is intended for
    small grids.
    """
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    dec = decompose(f, bank)
    grid, dirs, scales = bank.grid, bank.dirs, bank.scales
    M, N = dirs.M, grid.N
    # gather index: row x (flat), column delta (flat) -> flat index of x - delta
    ix = np.arange(N)
    x1 = ix[:, None, None, None]
    x2 = ix[None, :, None, None]
    d1 = ix[None, None, :, None]
    d2 = ix[None, None, None, :]
    gidx = (((x1 - d1) % N) * N + (x2 - d2) % N).reshape(N * N, N * N)
    out: list[PhaseSpaceField] = []
    for sigma in scales.sigmas:
        A = np.abs(dec.channels_at(sigma)).reshape(M, N * N)
        best = np.zeros((M, N * N))
        wts: dict[tuple[int, int], np.ndarray] = {}
        for i in range(M):
            for j in range(M):
                key = (min(i, j), max(i, j))
                if key not in wts:
                    d2 = offset_distance_sq(grid, dirs.vectors[i], dirs.vectors[j])
                    wts[key] = _ipow_recip(1.0 + d2 / sigma, alpha).ravel()
                cand = (A[j][gidx] * wts[key][None, :]).max(axis=1)
                np.maximum(best[i], cand, out=best[i])
        out.append(PhaseSpaceField(grid, dirs, best.reshape(M, N, N)))
    return out


def grand_maximal(f: Field, bank: MultiplierBank, sigma_max: float = 32.0,
                  sigma_min: float = 2.0**-9, per_octave: int = 8,
                  threads: int = 1) -> float:
    """L^1-of-phase-space norm of the dilation supremum.

    For each direction, a Gaussian approximate identity at every scale of a
    geometric ladder is applied after the directional window; the discrete
    sup over the ladder stands in for the continuum sup (the Gaussian varies
    slowly in scale, so 8 samples per octave suffice).
    """
    if sigma_max < 16.0:
        raise ValueError("sigma_max must cover all nontrivial scales (>= 16)")
    dec = decompose(f, bank)
    grid, dirs = bank.grid, bank.dirs
    octaves = np.log2(sigma_max / sigma_min)
    count = int(np.ceil(octaves * per_octave)) + 1
    ladder = sigma_max * np.exp2(-np.arange(count) / per_octave)
    scale = grid.dx**grid.n

    def dir_term(i):
        loc = bank.phi_omega(i) * dec.fhat
        best = np.zeros(grid.shape)
        for sigma in ladder:
            vals = np.abs(np.fft.ifft2(bank.Phi_sigma(sigma) * loc)) / scale
            np.maximum(best, vals, out=best)
        return best.sum() * scale

    sums = _map_ordered(dir_term, range(dirs.M), threads)
    return float(np.dot(sums, dirs.weights))


# ---------------------------------------------------------------------------
# classical comparison norms
# ---------------------------------------------------------------------------

def _dyadic_js(grid: GridSpec) -> range:
    """Dyadic indices whose annuli [2^(j-1), 2^(j+1)] meet the lattice."""
    xi_min = 2.0 * np.pi / grid.L
    j_lo = int(np.floor(np.log2(xi_min))) - 1
    j_hi = int(np.ceil(np.log2(grid.nyquist * np.sqrt(grid.n)))) + 1
    return range(j_lo, j_hi + 1)


def hardy_norm(f: Field, local: bool = False) -> float:
    """Square-function estimator of the (local, if requested) Hardy norm.

    The global estimator is the L^1 norm of the dyadic square function
    (sum over representable octaves of |psi(2^-j |D|) f|^2)^(1/2); the local
    variant measures a smooth low-frequency part in L^1 instead.
    """
    grid = f.grid
    fhat = to_frequency(f).values
    r = grid.freq_radius()
    scale = grid.dx**grid.n
    if local:
        low = bump(r / 8.0)  # == 1 wherever the standard low-pass cutoff lives
        f_low = Field(grid, "frequency", low * fhat)
        f_high = Field(grid, "frequency", (1.0 - low) * fhat)
        return lp_norm(f_low, 1.0) + hardy_norm(f_high, local=False)
    total = np.zeros(grid.shape)
    for j in _dyadic_js(grid):
        sym = psi(r * np.exp2(-j))
        if not sym.any():
            continue
        total += np.abs(np.fft.ifft2(sym * fhat) / scale) ** 2
    return float(np.sqrt(total).sum() * scale)


def sobolev_norm(f: Field, s: float, p: float = 1.0) -> float:
    """L^p norm after smoothing/roughening order s: ||(1+|D|^2)^(s/2) f||_p."""
    grid = f.grid
    r = grid.freq_radius()
    sym = (1.0 + r**2) ** (s / 2.0)
    return lp_norm(apply_multiplier(f, sym), p)

"""Brute-force reference implementations for the phase-space functionals.

Everything here trades speed for transparency: the aggregation over phase
space is written as literal sums over offsets (via exact circular rolls) or
per-center gathers, with no shared code with the production pair-convolution
paths.  Intended for small grids (32^2, M = 16).
"""

from __future__ import annotations

import numpy as np

from hfio.cosphere import (
    PhaseSpaceField,
    _pair_gaps,
    maximal_radii,
    offset_distance_sq,
)
from hfio.functionals import decompose
from hfio.lattice import Field
from hfio.packets import MultiplierBank


def _roll_sum(U: np.ndarray, kernel: np.ndarray) -> np.ndarray:
    """sum_y kernel(x - y) U(y) by explicit circular shifts.

    ``kernel`` is boolean/real on the offset lattice in FFT index order
    (offset of index m is m for m <= N/2 else m - N, in cells).
    """
    out = np.zeros_like(U, dtype=float)
    for m1, m2 in zip(*np.nonzero(kernel)):
        out += kernel[m1, m2] * np.roll(U, shift=(m1, m2), axis=(0, 1))
    return out


def oracle_conical_square(f: Field, bank: MultiplierBank,
                          aperture: float = 1.0) -> PhaseSpaceField:
    dec = decompose(f, bank)
    grid, dirs, scales = bank.grid, bank.dirs, bank.scales
    M = dirs.M
    total = np.zeros((M,) + grid.shape)
    for sigma, w in zip(scales.sigmas, scales.weights):
        rad2 = aperture * aperture * sigma
        U = [np.abs(dec.channel(j, sigma)) ** 2 for j in range(M)]
        for i in range(M):
            acc = np.zeros(grid.shape)
            cnt = 0
            for j in range(M):
                kernel = offset_distance_sq(grid, dirs.vectors[i], dirs.vectors[j]) < rad2
                if not kernel.any():
                    continue
                cnt += int(kernel.sum())
                acc += _roll_sum(U[j], kernel)
            total[i] += w * acc / cnt
    return PhaseSpaceField(grid, dirs, np.sqrt(np.maximum(total, 0.0)))


def oracle_vertical_square(f: Field, bank: MultiplierBank) -> PhaseSpaceField:
    dec = decompose(f, bank)
    grid, dirs, scales = bank.grid, bank.dirs, bank.scales
    total = np.zeros((dirs.M,) + grid.shape)
    for sigma, w in zip(scales.sigmas, scales.weights):
        for j in range(dirs.M):
            total[j] += w * np.abs(dec.channel(j, sigma)) ** 2
    return PhaseSpaceField(grid, dirs, np.sqrt(np.maximum(total, 0.0)))


def _gather_index(N: int) -> np.ndarray:
    """gidx[x_flat, y_flat] = flat offset index of x - y (mod N per axis)."""
    ix = np.arange(N)
    x1 = ix[:, None, None, None]
    x2 = ix[None, :, None, None]
    y1 = ix[None, None, :, None]
    y2 = ix[None, None, None, :]
    return (((x1 - y1) % N) * N + (x2 - y2) % N).reshape(N * N, N * N)


def oracle_gstar(f: Field, bank: MultiplierBank, alpha: float) -> PhaseSpaceField:
    dec = decompose(f, bank)
    grid, dirs, scales = bank.grid, bank.dirs, bank.scales
    M, N, n = dirs.M, grid.N, grid.n
    cell = grid.dx**n * 2.0 * np.pi / M
    gidx = _gather_index(N)
    total = np.zeros((M, N * N))
    for sigma, w in zip(scales.sigmas, scales.weights):
        U = [np.abs(dec.channel(j, sigma)).ravel() ** 2 for j in range(M)]
        for i in range(M):
            acc = np.zeros(N * N)
            for j in range(M):
                d2 = offset_distance_sq(grid, dirs.vectors[i], dirs.vectors[j]).ravel()
                wt = (1.0 + d2 / sigma) ** (-n * alpha)
                acc += wt[gidx] @ U[j]
            total[i] += (w * cell / sigma**n) * acc
    return PhaseSpaceField(grid, dirs, np.sqrt(np.maximum(total, 0.0)).reshape(M, N, N))


def oracle_peetre_max(f: Field, bank: MultiplierBank, alpha: float,
                      centers: list[tuple[int, int, int]]) -> dict:
    """M*_alpha at sampled centers: {(sigma_index, i, x_flat): value}.

    Per center a literal maximum over every (direction, position) candidate.
    """
    dec = decompose(f, bank)
    grid, dirs, scales = bank.grid, bank.dirs, bank.scales
    M, N = dirs.M, grid.N
    out = {}
    for si, sigma in enumerate(scales.sigmas):
        A = np.stack([np.abs(dec.channel(j, sigma)) for j in range(M)])
        wt = np.stack([
            [
                (1.0 + offset_distance_sq(grid, dirs.vectors[i], dirs.vectors[j]) / sigma)
                ** (-alpha)
                for j in range(M)
            ]
            for i in range(M)
        ])  # (i, j, offset1, offset2)
        for (i, x1, x2) in centers:
            best = 0.0
            for j in range(M):
                # weight at offset x - y for every y: roll the offset table
                # by x (it is even in the offset, so wt[y-x] = wt[x-y])
                w_at_y = np.roll(wt[i, j], shift=(x1, x2), axis=(0, 1))
                best = max(best, float((A[j] * w_at_y).max()))
            out[(si, i, x1 * N + x2)] = best
    return out


def oracle_ball_average(F: PhaseSpaceField, tau: float) -> PhaseSpaceField:
    grid, dirs = F.grid, F.dirs
    tau2 = tau * tau
    M = dirs.M
    out = np.zeros((M,) + grid.shape)
    for i in range(M):
        acc = np.zeros(grid.shape)
        cnt = 0
        for j in range(M):
            kernel = offset_distance_sq(grid, dirs.vectors[i], dirs.vectors[j]) < tau2
            if not kernel.any():
                continue
            cnt += int(kernel.sum())
            acc += _roll_sum(np.abs(F.values[j]), kernel)
        out[i] = acc / cnt
    return PhaseSpaceField(grid, dirs, out)


def oracle_hl_maximal(F: PhaseSpaceField) -> PhaseSpaceField:
    best = np.abs(F.values).astype(float)
    for tau in maximal_radii(F.grid, F.dirs):
        if tau < F.grid.dx:
            continue
        avg = oracle_ball_average(F, tau).values
        best = np.maximum(best, avg)
    return PhaseSpaceField(F.grid, F.dirs, best)

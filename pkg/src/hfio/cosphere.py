"""The phase space: positions crossed with unit directions.

Points are pairs (x, omega) of a grid position and a unit direction.  The
anisotropic quasi-distance between (x, omega) and (y, nu) is

    d((x,w),(y,v)) = sqrt( |<w, x-y>|/2 + |<v, x-y>|/2 + |x-y|^2 + |w-v|^2 )

with x - y the periodic representative of minimal Euclidean norm.  (The first
term is symmetrized over the two directions; the cross term it adds relative
to the one-sided form is dominated by the remaining terms, so the two are
equivalent up to fixed constants.)  Position offsets enter linearly along the
direction and quadratically across it, so balls of radius tau < 1 have volume
~ tau^(2n) while large balls grow like tau^n; the measure dx * d(omega) is
doubling for this metric.

Ball membership in the direction variable uses the chord distance |w - v|
(not arc length); the difference is a bounded factor.

All averaging operators are exact circular convolutions per direction pair,
so they are linear, translation equivariant, and deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .lattice import GridSpec
from .packets import DirectionSet


@dataclass(frozen=True)
class PhaseSpacePoint:
    """A grid position index pair and a direction index."""

    x: tuple[int, ...]
    omega: int


@dataclass(frozen=True)
class PhaseSpaceField:
    """Scalar field on the phase space; values indexed [direction, x1, x2]."""

    grid: GridSpec
    dirs: DirectionSet
    values: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        expected = (self.dirs.M,) + self.grid.shape
        if self.values.shape != expected:
            raise ValueError(f"shape-mismatch: {self.values.shape} != {expected}")

    @property
    def cell_measure(self) -> float:
        """Quadrature weight of one (x, omega) cell: dx^n * 2*pi/M."""
        return self.grid.dx**self.grid.n * 2.0 * np.pi / self.dirs.M

    def integral(self) -> float:
        return float(self.values.sum().real * self.cell_measure)

    def lp_norm(self, p: float) -> float:
        a = np.abs(self.values)
        if np.isinf(p):
            return float(a.max())
        return float((a**p).sum() ** (1.0 / p) * self.cell_measure ** (1.0 / p))


# ---------------------------------------------------------------------------
# the quasi-distance
# ---------------------------------------------------------------------------

def _offset_mesh(grid: GridSpec) -> tuple[np.ndarray, ...]:
    """Minimal periodic offsets in FFT index order (offset of index m is
    m*dx for m <= N/2, else (m-N)*dx)."""
    N = grid.N
    idx = np.arange(N)
    delta = np.where(idx <= N // 2, idx, idx - N) * grid.dx
    return tuple(
        delta.reshape((1,) * i + (N,) + (1,) * (grid.n - 1 - i))
        for i in range(grid.n)
    )


def offset_distance_sq(grid: GridSpec, omega: np.ndarray, nu: np.ndarray) -> np.ndarray:
    """d^2 as a function of the offset x - y, for one direction pair.

    Returns the full lattice table in FFT index order (even in the offset),
    including the |omega - nu|^2 term.  At the half-period offset +-L/2 the
    minimal representative is ambiguous; the directional part is minimized
    over both choices so the table is symmetric and well defined.
    """
    mesh = _offset_mesh(grid)
    half = grid.L / 2.0
    d1 = np.broadcast_to(mesh[0], grid.shape)
    d2 = np.broadcast_to(mesh[1], grid.shape) if grid.n == 2 else np.zeros(grid.shape)
    reps1 = (d1, np.where(np.abs(d1) == half, -d1, d1))
    reps2 = (d2, np.where(np.abs(d2) == half, -d2, d2))
    ang = None
    for a in reps1:
        for b in reps2:
            s_w = a * omega[0] + (b * omega[1] if grid.n == 2 else 0.0)
            s_v = a * nu[0] + (b * nu[1] if grid.n == 2 else 0.0)
            cand = 0.5 * np.abs(s_w) + 0.5 * np.abs(s_v)
            ang = cand if ang is None else np.minimum(ang, cand)
    r2 = d1**2 + (d2**2 if grid.n == 2 else 0.0)
    gap = float(np.sum((omega - nu) ** 2))
    return ang + r2 + gap


def quasi_distance(grid: GridSpec, dirs: DirectionSet,
                   a: PhaseSpacePoint, b: PhaseSpacePoint) -> float:
    """Quasi-distance between two phase-space points."""
    xa = np.array(a.x) * grid.dx
    xb = np.array(b.x) * grid.dx
    half = grid.L / 2.0
    delta = (xa - xb + half) % grid.L - half
    w = dirs.vectors[a.omega]
    v = dirs.vectors[b.omega]
    # at the ambiguous half-period offset, minimize over both representatives
    reps = [delta]
    for i in range(grid.n):
        if abs(abs(delta[i]) - half) < 1e-15:
            reps = reps + [np.where(np.arange(grid.n) == i, -d, d) for d in reps]
    ang = min(0.5 * abs(float(d @ w)) + 0.5 * abs(float(d @ v)) for d in reps)
    d2 = ang + float(delta @ delta) + float(np.sum((w - v) ** 2))
    return float(np.sqrt(d2))


# ---------------------------------------------------------------------------
# balls, averages, maximal function
# ---------------------------------------------------------------------------

def _pair_gaps(dirs: DirectionSet) -> np.ndarray:
    """Chord distances |omega_i - omega_j|, shape (M, M)."""
    diff = dirs.vectors[:, None, :] - dirs.vectors[None, :, :]
    return np.sqrt((diff**2).sum(axis=-1))


def ball_volume(grid: GridSpec, dirs: DirectionSet,
                center: PhaseSpacePoint, tau: float) -> float:
    """Measure of the quasi-metric ball of radius tau under dx * d(omega)."""
    if tau <= 0:
        raise ValueError("nonpositive-radius")
    w = dirs.vectors[center.omega]
    tau2 = tau * tau
    cell = grid.dx**grid.n * 2.0 * np.pi / dirs.M
    # spatial membership requires |offset| < tau, so only a box of that many
    # cells around the center can contribute
    b = min(int(np.ceil(tau / grid.dx)) + 1, grid.N // 2)
    axis = np.arange(-b, b + 1) * grid.dx
    if b == grid.N // 2:
        axis = axis[1:]  # +-L/2 is one lattice offset, not two
    d1 = axis[:, None]
    d2 = axis[None, :]
    r2 = d1**2 + d2**2
    total = 0
    for j in range(dirs.M):
        v = dirs.vectors[j]
        gap2 = float(np.sum((w - v) ** 2))
        if gap2 >= tau2:
            continue
        s_w = d1 * w[0] + d2 * w[1]
        s_v = d1 * v[0] + d2 * v[1]
        dist2 = 0.5 * np.abs(s_w) + 0.5 * np.abs(s_v) + r2 + gap2
        total += int((dist2 < tau2).sum())
    return total * cell


def ball_average(F: PhaseSpaceField, tau: float) -> PhaseSpaceField:
    """Mean over quasi-metric balls of radius tau, at every (x, omega).

    Exact reordering of the defining double sum: one circular convolution per
    close direction pair, then division by the (direction-dependent) discrete
    ball volume.
    """
    if tau <= 0:
        raise ValueError("nonpositive-radius")
    if tau < F.grid.dx:
        raise ValueError(f"radius-below-resolution: tau={tau} < dx={F.grid.dx}")
    grid, dirs = F.grid, F.dirs
    tau2 = tau * tau
    gaps = _pair_gaps(dirs)
    fhat = np.fft.fft2(F.values)  # per-direction transforms of the data
    out = np.zeros_like(F.values, dtype=complex)
    counts = np.zeros(dirs.M)
    for i in range(dirs.M):
        acc = np.zeros(grid.shape, dtype=complex)
        cnt = 0
        for j in range(dirs.M):
            if gaps[i, j] ** 2 >= tau2:
                continue
            kernel = (offset_distance_sq(grid, dirs.vectors[i], dirs.vectors[j]) < tau2)
            cnt += int(kernel.sum())
            acc += np.fft.fft2(kernel.astype(float)) * fhat[j]
        out[i] = np.fft.ifft2(acc) / cnt
        counts[i] = cnt
    vals = out if np.iscomplexobj(F.values) else out.real
    return PhaseSpaceField(grid, dirs, vals)


def maximal_radii(grid: GridSpec, dirs: DirectionSet) -> np.ndarray:
    """Geometric radius ladder {2**(k/2) * dx} used by the maximal operator.

    Starts below the smallest nonzero distance (so the first ball is the
    center cell alone) and stops once balls cover the whole space.
    """
    lo = 0.9 * min(grid.dx, float(np.linalg.norm(dirs.vectors[0] - dirs.vectors[1])))
    diam = np.sqrt(0.5 * grid.n * grid.L**2 / 4.0 + grid.L * np.sqrt(grid.n) / 2.0 + 4.0)
    k_max = int(np.ceil(2.0 * np.log2(diam / (grid.dx)))) + 1
    radii = grid.dx * np.exp2(np.arange(k_max + 1) / 2.0)
    return np.concatenate([[lo], radii[radii > lo]])


def hl_maximal(F: PhaseSpaceField) -> PhaseSpaceField:
    """Centered maximal function of |F| over the geometric radius ladder."""
    absF = PhaseSpaceField(F.grid, F.dirs, np.abs(F.values))
    best = np.array(absF.values, dtype=float)  # radius below one cell
    for tau in maximal_radii(F.grid, F.dirs):
        if tau < F.grid.dx:
            continue
        avg = ball_average(absF, tau).values.real
        np.maximum(best, avg, out=best)
    return PhaseSpaceField(F.grid, F.dirs, best)


def lp_lq_norm(Fs: list[PhaseSpaceField] | tuple[PhaseSpaceField, ...],
               p: float, q: float) -> float:
    """Mixed norm: l^q over the sequence index, then L^p over phase space."""
    if not Fs:
        raise ValueError("empty sequence")
    if p < 1 or q < 1:
        raise ValueError("p and q must be >= 1")
    first = Fs[0]
    for F in Fs[1:]:
        if F.values.shape != first.values.shape:
            raise ValueError("shape-mismatch across sequence")
    stack = np.stack([np.abs(F.values) for F in Fs])
    inner = (stack**q).sum(axis=0) ** (1.0 / q)
    return float((inner**p).sum() ** (1.0 / p) * first.cell_measure ** (1.0 / p))

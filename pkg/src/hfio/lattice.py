"""Periodic grids, spectral transforms, and Fourier multipliers.

Everything downstream computes on a flat torus: an ``n``-dimensional box of
side ``L`` with ``N`` samples per axis and periodic boundary conditions.  The
frequency lattice is ``xi_k = 2*pi*k/L`` for integer ``k`` in
``[-N/2, N/2)``; multiplier operators act by pointwise multiplication on that
lattice, so they discretize exactly (no truncation error beyond the grid's
band limit).

Transform normalization mimics the continuum convention::

    fhat(xi) = dx^n * sum_x f(x) e^{-i xi.x}
    f(x)     = L^{-n} * sum_k fhat(xi_k) e^{+i xi_k.x}

so that ``lp_norm(f, 2)**2 == L**-n * sum |fhat|**2`` (Parseval with the
period-cell quadrature measure).

Frequency arrays are kept in FFT (unshifted) order throughout.
"""

from __future__ import annotations

import os
import struct
from dataclasses import dataclass, field

import numpy as np

FILE_MAGIC = b"HFIO"
FILE_VERSION = 1
_HEADER = struct.Struct("<4sIIIdB")

_DOMAIN_TAGS = {"physical": 0, "frequency": 1}
_DOMAIN_NAMES = {v: k for k, v in _DOMAIN_TAGS.items()}


class FieldFileError(Exception):
    """Raised for malformed or truncated binary field files."""


@dataclass(frozen=True)
class GridSpec:
    """Periodic sampling of an ``n``-dimensional box of side ``L``."""

    n: int
    N: int
    L: float

    def __post_init__(self) -> None:
        if self.n not in (1, 2, 3):
            raise ValueError(f"invalid dimension n={self.n}; must be 1, 2, or 3")
        if self.N < 8 or (self.N & (self.N - 1)) != 0:
            raise ValueError(f"N={self.N} must be a power of two >= 8")
        if not self.L > 0:
            raise ValueError(f"nonpositive length L={self.L}")

    @property
    def dx(self) -> float:
        return self.L / self.N

    @property
    def nyquist(self) -> float:
        """Largest representable |xi| along one axis, pi*N/L."""
        return np.pi * self.N / self.L

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.N,) * self.n

    def axis_coords(self) -> np.ndarray:
        """Physical sample positions along one axis, ``0, dx, ..., L-dx``."""
        return np.arange(self.N) * self.dx

    def axis_freqs(self) -> np.ndarray:
        """Frequency lattice along one axis in FFT order."""
        return np.fft.fftfreq(self.N, d=1.0 / self.N) * (2.0 * np.pi / self.L)

    def freq_mesh(self) -> tuple[np.ndarray, ...]:
        """Broadcastable frequency coordinate arrays, FFT order."""
        xi = self.axis_freqs()
        return tuple(
            xi.reshape((1,) * i + (self.N,) + (1,) * (self.n - 1 - i))
            for i in range(self.n)
        )

    def freq_radius(self) -> np.ndarray:
        """|xi| on the full frequency lattice, FFT order, shape ``(N,)*n``."""
        mesh = self.freq_mesh()
        r2 = sum(np.broadcast_to(m, self.shape) ** 2 for m in mesh)
        return np.sqrt(r2)


def make_grid(n: int, N: int, L: float) -> GridSpec:
    """Validated grid constructor (see :class:`GridSpec` invariants)."""
    return GridSpec(n=n, N=int(N), L=float(L))


@dataclass(frozen=True)
class Field:
    """Complex-valued grid function, in physical or frequency representation."""

    grid: GridSpec
    domain: str
    values: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        if self.domain not in _DOMAIN_TAGS:
            raise ValueError(f"unknown domain tag {self.domain!r}")
        if self.values.shape != self.grid.shape:
            raise ValueError(
                f"values shape {self.values.shape} != grid shape {self.grid.shape}"
            )
        if self.values.dtype != np.complex128:
            object.__setattr__(self, "values", self.values.astype(np.complex128))


def physical_field(grid: GridSpec, values: np.ndarray) -> Field:
    return Field(grid, "physical", np.asarray(values, dtype=np.complex128))


def frequency_field(grid: GridSpec, values: np.ndarray) -> Field:
    return Field(grid, "frequency", np.asarray(values, dtype=np.complex128))


def to_frequency(f: Field) -> Field:
    if f.domain == "frequency":
        return f
    fhat = np.fft.fftn(f.values) * f.grid.dx**f.grid.n
    return Field(f.grid, "frequency", fhat)


def to_physical(f: Field) -> Field:
    if f.domain == "physical":
        return f
    vals = np.fft.ifftn(f.values) / f.grid.dx**f.grid.n
    return Field(f.grid, "physical", vals)


def _symbol_table(grid: GridSpec, symbol) -> np.ndarray:
    """Evaluate ``symbol`` on the frequency lattice (or pass a table through)."""
    if isinstance(symbol, np.ndarray):
        if symbol.shape != grid.shape:
            raise ValueError(
                f"grid mismatch: symbol table shape {symbol.shape} != {grid.shape}"
            )
        return symbol
    if np.isscalar(symbol):
        return np.full(grid.shape, symbol)
    return np.broadcast_to(symbol(*grid.freq_mesh()), grid.shape)


def apply_multiplier(f: Field, symbol) -> Field:
    """Apply the Fourier multiplier with the given symbol; returns a physical field.

    ``symbol`` may be a callable of the frequency coordinates, a precomputed
    lattice table, or a scalar.
    """
    table = _symbol_table(f.grid, symbol)
    fhat = to_frequency(f).values
    out = np.fft.ifftn(table * fhat) / f.grid.dx**f.grid.n
    return Field(f.grid, "physical", out)


def lp_norm(f: Field, p: float) -> float:
    """Riemann-sum L^p norm over the period cell (physical representation)."""
    if p < 1:
        raise ValueError(f"p={p} must be >= 1 (or inf)")
    a = np.abs(to_physical(f).values)
    if np.isinf(p):
        return float(a.max())
    g = f.grid
    return float((a**p).sum() ** (1.0 / p) * g.dx ** (g.n / p))


def translate(f: Field, shift: tuple[int, ...]) -> Field:
    """Translate a physical field by a lattice vector (cells); exact on the torus."""
    g = to_physical(f)
    return Field(f.grid, "physical", np.roll(g.values, shift, axis=tuple(range(f.grid.n))))


def write_field(f: Field, path: str | os.PathLike) -> None:
    """Serialize a field (header + interleaved little-endian f64 re/im payload).

    The write is atomic: a temporary sibling file is renamed into place.
    """
    header = _HEADER.pack(
        FILE_MAGIC, FILE_VERSION, f.grid.n, f.grid.N, f.grid.L, _DOMAIN_TAGS[f.domain]
    )
    payload = np.ascontiguousarray(f.values, dtype="<c16").tobytes()
    tmp = f"{os.fspath(path)}.tmp"
    try:
        with open(tmp, "wb") as fh:
            fh.write(header)
            fh.write(payload)
        os.replace(tmp, path)
    except OSError as exc:
        raise FieldFileError(f"io-failure writing {path}: {exc}") from exc


def read_field(path: str | os.PathLike) -> Field:
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        raise FieldFileError(f"io-failure reading {path}: {exc}") from exc
    if len(raw) < _HEADER.size:
        raise FieldFileError(f"truncated-payload: {path} shorter than header")
    magic, version, n, N, L, dom = _HEADER.unpack_from(raw)
    if magic != FILE_MAGIC:
        raise FieldFileError(f"bad-magic: {magic!r}")
    if version != FILE_VERSION:
        raise FieldFileError(f"unsupported version {version}")
    if dom not in _DOMAIN_NAMES:
        raise FieldFileError(f"unknown domain tag {dom}")
    grid = GridSpec(n=n, N=N, L=L)
    expected = 16 * N**n
    payload = raw[_HEADER.size :]
    if len(payload) != expected:
        raise FieldFileError(
            f"truncated-payload: expected {expected} bytes, got {len(payload)}"
        )
    values = np.frombuffer(payload, dtype="<c16").reshape(grid.shape).copy()
    return Field(grid, _DOMAIN_NAMES[dom], values)

"""Scripted quantitative experiments: scaling laws, decay fits, and bounds.

Each experiment produces a :class:`FitResult` carrying the fitted quantity,
its target, the tolerance, a pass flag, and the raw samples (for CSV export
and plotting).  Slope fits are least squares on log-log samples.  Randomized
experiments draw from a seeded generator, so results are bit-reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np

from .corpus import wave_packet
from .cosphere import (
    PhaseSpacePoint,
    PhaseSpaceField,
    ball_volume,
    lp_lq_norm,
)
from .functionals import conical_square, hardy_norm
from .lattice import Field, GridSpec, lp_norm, make_grid, to_physical
from .norms import hfio_norm, lowpass_term
from .packets import DirectionSet, MultiplierBank

DEFAULT_SEED = 0x48464F31


@dataclass
class FitResult:
    """Outcome of one experiment.

    ``mode`` is "abs" (pass iff |fitted - target| <= tolerance) or "upper"
    (pass iff fitted <= target + tolerance).
    """

    experiment_id: str
    fitted: float
    target: float
    tolerance: float
    mode: str = "abs"
    samples: list[dict] = dc_field(default_factory=list)
    meta: dict = dc_field(default_factory=dict)

    @property
    def passed(self) -> bool:
        if self.mode == "abs":
            return bool(abs(self.fitted - self.target) <= self.tolerance)
        if self.mode == "upper":
            return bool(self.fitted <= self.target + self.tolerance)
        raise ValueError(f"unknown fit mode {self.mode!r}")


def _slope(xs, ys) -> float:
    return float(np.polyfit(np.asarray(xs, dtype=float), np.asarray(ys, dtype=float), 1)[0])


# ---------------------------------------------------------------------------
# sharp scaling of tile norms
# ---------------------------------------------------------------------------

def scaling_experiment(bank: MultiplierBank, taus: list[float], s: float = 0.25,
                       direction: int = 0, threads: int = 1,
                       target: float = 0.0, tolerance: float = 0.1,
                       tile_norms: dict[float, float] | None = None,
                       experiment_id: str = "scaling") -> FitResult:
    """Slope of log(tile-norm / smoothed-Hardy-norm) against log(1/tau).

    With the critical smoothing order s = (n-1)/2 * |1/2 - 1/p| = 1/4 (n = 2,
    p = 1) the two norms scale identically across tile scales tau and the
    slope is 0.  Any s below the critical order makes the slope strictly
    negative -- the control run demonstrating sharpness.
    """
    from .lattice import apply_multiplier

    samples = []
    r = bank.grid.freq_radius()
    for tau in taus:
        f = wave_packet(bank, direction, tau)
        if tile_norms is not None and tau in tile_norms:
            a = tile_norms[tau]
        else:
            a = hfio_norm(f, bank, "S", threads=threads)
        smoothed = apply_multiplier(f, (1.0 + r**2) ** (-s / 2.0))
        b = hardy_norm(smoothed, local=True)
        samples.append({"tau": tau, "tile_norm": a, "smoothed_hardy": b,
                        "ratio": a / b})
    slope = _slope([np.log(1.0 / s_["tau"]) for s_ in samples],
                   [np.log(s_["ratio"]) for s_ in samples])
    return FitResult(experiment_id, slope, target, tolerance,
                     samples=samples, meta={"s": s, "critical_s": 0.25})


# ---------------------------------------------------------------------------
# kernel decay
# ---------------------------------------------------------------------------

def kernel_decay(bank: MultiplierBank, i_omega: int, j_nu: int, sigma: float,
                 N_list: list[int] | None = None,
                 ratios: tuple[float, ...] = (1.0, 2.0, 4.0, 8.0),
                 experiment_id: str = "kernel-decay") -> list[FitResult]:
    """Decay fits for composed tile/dual-tile kernels.

    Returns three results: the spatial decay exponent of |K| against
    (1 + d^2/rho) at equal scales (pass for each requested N iff the fitted
    exponent is at least max(N_list)); the scale-separation slope of
    log max|K| against log(tau/sigma); and the disjoint-support check at
    scale ratio 8 (kernel uniformly below 1e-12 of the equal-scale peak).

    The spatial exponent is fitted on the binned envelope of |K| (per-bin
    maximum of log|K| over equal-width bins in log(1 + d^2/rho)), restricted
    to the far field (outer 40% of the binned range): the decay is faster
    than every polynomial, so the exponent measured against any one
    polynomial weight keeps growing with distance, and only the far field
    reflects it.  A least-squares slope over the raw scatter would instead be
    dragged toward zero by the oscillation nulls below the envelope and by
    the flat near field.
    """
    from .cosphere import offset_distance_sq

    N_list = N_list or [1, 2, 3]
    grid, dirs = bank.grid, bank.dirs
    if 2.0 / sigma > grid.nyquist:
        raise ValueError("nyquist-violation")
    if sigma * max(ratios) >= 1.0:
        raise ValueError("scale-out-of-range")
    scale = grid.dx**grid.n
    peaks = []
    for ratio in ratios:
        tau = sigma * ratio
        sym = bank.theta(i_omega, sigma) * bank.chi(j_nu, tau)
        K = np.fft.ifft2(sym) / scale
        peaks.append((ratio, float(np.abs(K).max())))
        if ratio == 1.0:
            d2 = offset_distance_sq(grid, dirs.vectors[i_omega], dirs.vectors[j_nu])
            absK = np.abs(K)
            mask = absK > absK.max() * 1e-10
            xs = np.log1p(d2[mask] / sigma)
            ys = np.log(absK[mask])
            edges = np.linspace(xs.min(), xs.max(), 33)
            which = np.clip(np.searchsorted(edges, xs, side="right") - 1, 0, 31)
            bx, by = [], []
            for kbin in range(32):
                sel = which == kbin
                if sel.any():
                    bx.append(0.5 * (edges[kbin] + edges[kbin + 1]))
                    by.append(ys[sel].max())
            bx, by = np.array(bx), np.array(by)
            tail = bx >= bx.min() + 0.6 * (bx.max() - bx.min())
            if tail.sum() < 4:
                raise ValueError("insufficient-far-field")
            spatial = -_slope(bx[tail], by[tail])
    # pass iff the fitted decay exponent covers the largest requested N;
    # stored negated so the "upper" pass rule applies
    results = [
        FitResult(f"{experiment_id}-spatial", -spatial, -float(max(N_list)),
                  0.0, mode="upper",
                  meta={"spatial_exponent": spatial, "N_list": N_list}),
    ]
    nonzero = [(r, p) for r, p in peaks if p > peaks[0][1] * 1e-12]
    sep_slope = _slope([np.log(r) for r, _ in nonzero], [np.log(p) for _, p in nonzero])
    results.append(FitResult(f"{experiment_id}-separation", sep_slope, -1.0, 0.0,
                             mode="upper",
                             samples=[{"ratio": r, "peak": p} for r, p in peaks]))
    disjoint = peaks[-1][1] / peaks[0][1]
    results.append(FitResult(f"{experiment_id}-disjoint", disjoint, 1e-12, 0.0,
                             mode="upper", meta={"ratio": ratios[-1]}))
    return results


# ---------------------------------------------------------------------------
# change of aperture
# ---------------------------------------------------------------------------

def aperture_experiment(bank: MultiplierBank, corpus: list[tuple[str, Field]],
                        lambdas: tuple[float, ...] = (1.0, 2.0, 4.0),
                        threads: int = 1, tolerance: float = 0.3,
                        experiment_id: str = "aperture") -> FitResult:
    """Growth exponent of the conical square-function norm in the aperture."""
    n = bank.grid.n
    samples = []
    for name, f in corpus:
        base = None
        for lam in lambdas:
            val = conical_square(f, bank, aperture=lam, threads=threads).lp_norm(1.0)
            if lam == lambdas[0]:
                base = val
            samples.append({"function": name, "aperture": lam, "norm": val,
                            "ratio": val / base})
    mean_log = {
        lam: float(np.mean([np.log(s["ratio"]) for s in samples if s["aperture"] == lam]))
        for lam in lambdas
    }
    slope = _slope([np.log(l) for l in lambdas], [mean_log[l] for l in lambdas])
    return FitResult(experiment_id, slope, float(n), tolerance, mode="upper",
                     samples=samples, meta={"lambdas": list(lambdas)})


# ---------------------------------------------------------------------------
# discrete sequence lemmas
# ---------------------------------------------------------------------------

def absorption_lemma_trial(rng: np.random.Generator, length: int = 24,
                           N: int = 3, r: float = 0.5, C: float = 2.0,
                           iters: int = 200) -> float:
    """One randomized instance of the self-improvement lemma.

    Builds b >= 0 at random and the largest d satisfying
    d_l <= C * sum_j 2^(-|j-l|N) b_j d_j^(1-r) (by fixed-point iteration from
    above), then returns the worst ratio d_l^r / (C * sum_j 2^(-|j-l|Nr) b_j)
    -- at most 1 when the lemma's conclusion holds with the same constant.
    """
    ls = np.arange(length)
    k = np.abs(ls[:, None] - ls[None, :])
    b = rng.uniform(0.0, 1.0, length) * (rng.uniform(size=length) < 0.7)
    d = np.full(length, 1e6)
    A = np.exp2(-k * N)
    for _ in range(iters):
        d = np.minimum(d, C * A @ (b * d ** (1.0 - r)))
    rhs = C * np.exp2(-k * N * r) @ b
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = np.where(rhs > 0, d**r / np.where(rhs > 0, rhs, 1.0), float(d.max() > 1e-12))
    return float(ratios.max())


def summation_lemma_trial(rng: np.random.Generator, grid: GridSpec,
                          dirs: DirectionSet, levels: int = 12, N: int = 2,
                          p: float = 1.0, q: float = 2.0) -> float:
    """One randomized instance of the off-diagonal summation bound.

    Random nonnegative level sequences g_j on phase space are smeared by the
    exponentially-decaying level coupling; returns the mixed-norm ratio
    ||h|| / ||g||, which is bounded by the geometric-series constant
    1 + 2/(2^N - 1) independent of the draw.
    """
    shape = (levels, dirs.M) + grid.shape
    g = rng.exponential(1.0, size=shape)
    k = np.abs(np.arange(levels)[:, None] - np.arange(levels)[None, :])
    W = np.exp2(-k * N)
    h = np.einsum("lj,j...->l...", W, g)
    Gs = [PhaseSpaceField(grid, dirs, g[j]) for j in range(levels)]
    Hs = [PhaseSpaceField(grid, dirs, h[j]) for j in range(levels)]
    return lp_lq_norm(Hs, p, q) / lp_lq_norm(Gs, p, q)


def discrete_lemmas(trials_absorption: int = 1000, trials_summation: int = 100,
                    seed: int = DEFAULT_SEED) -> list[FitResult]:
    """Randomized verification of both sequence lemmas."""
    rng = np.random.default_rng(seed)
    worst_a = max(absorption_lemma_trial(rng) for _ in range(trials_absorption))
    res_a = FitResult("lemma-absorption", worst_a, 1.0, 1e-9, mode="upper",
                      meta={"trials": trials_absorption})
    grid = make_grid(2, 32, np.pi)
    dirs = DirectionSet.uniform(16)
    N = 2
    vals = [summation_lemma_trial(rng, grid, dirs, N=N)
            for _ in range(trials_summation)]
    bound = 1.0 + 2.0 / (2.0**N - 1.0)
    res_b = FitResult("lemma-summation", float(max(vals)), bound, 0.0,
                      mode="upper",
                      meta={"trials": trials_summation,
                            "spread": float(max(vals) / min(vals))})
    return [res_a, res_b]


# ---------------------------------------------------------------------------
# multiplier invariance
# ---------------------------------------------------------------------------

def multiplier_invariance(bank: MultiplierBank, family: list[tuple[str, Field]],
                          symbol_kind: str, params: dict | None = None,
                          threads: int = 1, tolerance: float = 0.15,
                          fit_slope: bool = True, reference: str = "unit",
                          experiment_id: str = "multiplier") -> FitResult:
    """Norm ratios ||m(D)f|| / ||reference(D)f|| across a function family.

    The symbol acts on the frequency representation directly, so the identity
    symbol reproduces the input bit-exactly (ratio 1.0, no rounding).  For a
    tile family indexed by scale the slope of the log-ratio against
    log(1/tau) is fitted (target 0); otherwise the max ratio is reported.

    ``reference`` picks the denominator: "unit" is ||f|| itself, for
    operator-boundedness checks.  "modulus" is |m|(D)f, which isolates the
    cost of the symbol's oscillation: on a frequency-localized family the
    unit-referenced ratio of ANY symbol of order -gamma simply tracks
    sup|m| ~ tau^gamma (pure weight decay, the same for an oscillating symbol
    and a plain power), so only the modulus-referenced ratio can show that
    the critical half-regular oscillation costs nothing extra.
    """
    if symbol_kind == "identity":
        sym = np.ones(bank.grid.shape)
    else:
        sym = bank.aux(symbol_kind, params or {})
    if reference not in ("unit", "modulus"):
        raise ValueError(f"unknown reference {reference!r}")
    from .lattice import to_frequency

    samples = []
    for name, f in family:
        fh = to_frequency(f)
        g = Field(bank.grid, "frequency", sym * fh.values)
        a = hfio_norm(g, bank, "S", threads=threads)
        if reference == "modulus":
            ref = Field(bank.grid, "frequency", np.abs(sym) * fh.values)
            b = hfio_norm(ref, bank, "S", threads=threads)
        else:
            b = hfio_norm(fh, bank, "S", threads=threads)
        rec = {"function": name, "ratio": a / b, "norm_m": a, "norm_f": b}
        if name.startswith("wp-"):
            rec["tau"] = float(np.exp2(-int(name.split("-")[1])))
        samples.append(rec)
    if fit_slope and all("tau" in s_ for s_ in samples):
        slope = _slope([np.log(1.0 / s_["tau"]) for s_ in samples],
                       [np.log(s_["ratio"]) for s_ in samples])
        return FitResult(experiment_id, slope, 0.0, tolerance,
                         samples=samples, meta={"symbol": symbol_kind,
                                                "max_ratio": max(s_["ratio"] for s_ in samples)})
    worst = max(s_["ratio"] for s_ in samples)
    return FitResult(experiment_id, worst, tolerance, 0.0, mode="upper",
                     samples=samples, meta={"symbol": symbol_kind})


# ---------------------------------------------------------------------------
# ball volumes
# ---------------------------------------------------------------------------

def _mc_ball_volume(grid: GridSpec, dirs: DirectionSet, omega: int, tau: float,
                    samples: int, rng: np.random.Generator) -> float:
    """Monte-Carlo estimate of the same discrete ball volume."""
    w = dirs.vectors[omega]
    b = min(tau, grid.L / 2.0)
    pts = rng.uniform(-b, b, size=(samples, 2))
    js = rng.integers(0, dirs.M, size=samples)
    v = dirs.vectors[js]
    gap2 = ((w[None, :] - v) ** 2).sum(axis=1)
    d2 = (0.5 * np.abs(pts @ w) + 0.5 * np.abs((pts * v).sum(axis=1))
          + (pts**2).sum(axis=1) + gap2)
    frac = float((d2 < tau * tau).mean())
    return frac * (2.0 * b) ** 2 * 2.0 * np.pi


def ball_volume_experiment(seed: int = DEFAULT_SEED) -> list[FitResult]:
    """Volume growth exponents, doubling bound, and a Monte-Carlo cross-check.

    Small balls are measured on a fine unit-size torus; large balls on a wide
    torus with radii above the direction-space diameter (below it the
    direction factor is still filling up and the growth is transitional).
    """
    rng = np.random.default_rng(seed)
    dirs = DirectionSet.uniform(96)
    fine = make_grid(2, 1024, 2.0 * np.pi)
    center = PhaseSpacePoint((0, 0), 7)
    taus_small = np.exp2(np.arange(-3.5, -0.9, 0.25))
    vs = [ball_volume(fine, dirs, center, float(t)) for t in taus_small]
    small = FitResult("ballvol-small",
                      _slope(np.log(taus_small), np.log(vs)), 4.0, 0.15,
                      samples=[{"tau": float(t), "volume": v}
                               for t, v in zip(taus_small, vs)])
    wide = make_grid(2, 512, 64.0)
    taus_large = np.exp2(np.arange(2.0, 4.51, 0.25))
    vl = [ball_volume(wide, dirs, center, float(t)) for t in taus_large]
    large = FitResult("ballvol-large",
                      _slope(np.log(taus_large), np.log(vl)), 2.0, 0.2,
                      samples=[{"tau": float(t), "volume": v}
                               for t, v in zip(taus_large, vl)])
    worst = 0.0
    for _ in range(20):
        om = int(rng.integers(0, dirs.M))
        tau = float(np.exp2(rng.uniform(-3.0, 0.0)))
        c = PhaseSpacePoint((0, 0), om)
        worst = max(worst, ball_volume(fine, dirs, c, 2.0 * tau)
                    / ball_volume(fine, dirs, c, tau))
    doubling = FitResult("ballvol-doubling", worst, 4.0 * 2.0**4, 0.0, mode="upper",
                         meta={"centers": 20})
    mc_worst = 0.0
    for tau in (0.2, 0.4, 0.8):
        exact = ball_volume(fine, dirs, center, tau)
        approx = _mc_ball_volume(fine, dirs, 7, tau, 4_000_000, rng)
        mc_worst = max(mc_worst, abs(approx / exact - 1.0))
    mc = FitResult("ballvol-montecarlo", mc_worst, 0.03, 0.0, mode="upper",
                   meta={"radii": [0.2, 0.4, 0.8]})
    return [small, large, doubling, mc]

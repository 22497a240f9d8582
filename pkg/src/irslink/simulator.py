r"""Exact link-level Monte Carlo and an exhaustive phase-grid oracle.

Per trial the simulator draws the channels, the estimation errors, applies
MRT on the estimates, and scores the per-draw SNR

    SNR = P * X / (sigma2 + Y / X),
    X = ||hd_hat^H + v^H Z_hat||^2,
    Y = |(e_d^H + v^H E_Z)(hd_hat + Z_hat^H v)|^2,

whose expectation-ratio form is what the closed-form rate approximates.
With xi = 0 the error terms vanish and SNR = (P/sigma2) * X exactly.

Determinism contract: trial t draws from a Philox stream keyed (seed, t), so
the per-trial values — and hence the mean, reduced in fixed trial order with
numpy's pairwise summation — are identical for any worker count and any
execution schedule.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .analysis import StatMatrices, build_moment_matrices, rate_quadratic_forms
from .beamforming import random_reflection
from .channel import sample_channels
from .config import SystemConfig
from .estimation import CsiEstimates, estimation_error_variance, sample_estimates
from .scenario import ChannelStatistics
from .channel import ChannelRealization
from .streams import keyed_rng

GRID_BUDGET = 10_000_000


def instantaneous_snr(real: ChannelRealization, est: CsiEstimates,
                      v: np.ndarray, P: float, sigma2: float) -> float:
    """Per-draw SNR under MRT with the realized estimation errors."""
    if P <= 0 or sigma2 <= 0:
        raise ValueError("P and sigma2 must be > 0")
    vc = np.conj(v)
    row = np.conj(est.h_d_hat) + vc @ est.Z_hat
    x = float(np.real(np.vdot(row, row)))
    if x == 0.0:
        return 0.0  # zero combined channel carries no signal
    err_row = np.conj(est.e_d) + vc @ est.E_Z
    inner = err_row @ np.conj(row)
    y = float(abs(inner) ** 2)
    return P * x / (sigma2 + y / x)


@dataclass
class McEstimate:
    """Ergodic-rate estimate with its Monte Carlo uncertainty."""

    rate: float
    std_error: float
    trials: int
    seed: int


def _trial_rate(stats: ChannelStatistics, v_spec, xi: float, P: float,
                sigma2: float, seed: int, t: int) -> float:
    rng = keyed_rng(seed, t)
    real = sample_channels(stats, rng)
    est = sample_estimates(real, xi, rng)
    v = random_reflection(stats.NL, rng) if isinstance(v_spec, str) else v_spec
    return float(np.log2(1.0 + instantaneous_snr(real, est, v, P, sigma2)))


def monte_carlo_rate(stats: ChannelStatistics, v_spec, cfg: SystemConfig,
                     trials: int | None = None, seed: int | None = None,
                     workers: int = 1) -> McEstimate:
    """Ergodic rate E{log2(1 + SNR)} by Monte Carlo.

    v_spec is either a fixed unit-modulus vector or the string "random" for
    independent per-trial phases. trials/seed default to the config values.
    Results are bit-identical for any ``workers``.
    """
    trials = cfg.trials if trials is None else trials
    seed = cfg.seed if seed is None else seed
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    if isinstance(v_spec, str):
        if v_spec != "random":
            raise ValueError(f"unknown reflection policy {v_spec!r}")
    else:
        v_spec = np.asarray(v_spec, dtype=complex)
        if v_spec.shape != (stats.NL,):
            raise ValueError(
                f"reflection vector must have shape ({stats.NL},), got {v_spec.shape}")
    xi = estimation_error_variance(cfg.T, cfg.rho, cfg.perfect_csi)
    rates = np.empty(trials)

    def run_block(lo: int, hi: int) -> None:
        for t in range(lo, hi):
            rates[t] = _trial_rate(stats, v_spec, xi, cfg.P, cfg.sigma2, seed, t)

    if workers <= 1:
        run_block(0, trials)
    else:
        step = max(1, (trials + workers - 1) // workers)
        spans = [(lo, min(lo + step, trials)) for lo in range(0, trials, step)]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(lambda s: run_block(*s), spans))

    mean = float(np.add.reduce(rates) / trials)
    if trials > 1:
        std_error = float(np.std(rates, ddof=1) / np.sqrt(trials))
    else:
        std_error = 0.0
    return McEstimate(rate=mean, std_error=std_error, trials=trials, seed=seed)


def _decode_phase_grid(idx: np.ndarray, NL: int, levels: int) -> np.ndarray:
    """Lexicographic candidate decoding: first element is the most
    significant digit, so candidate 0 is all-zero phases."""
    digits = np.empty((idx.shape[0], NL), dtype=np.int64)
    rem = idx.copy()
    for k in range(NL - 1, -1, -1):
        digits[:, k] = rem % levels
        rem //= levels
    return np.exp(2j * np.pi * digits / levels)


def grid_objective(V: np.ndarray, sm: StatMatrices, P: float) -> np.ndarray:
    """Closed-form rate for a batch of reflection vectors (rows of V)."""
    JX = V.conj() @ sm.J
    x = np.einsum("bi,bi->b", JX, V).real
    QX = V.conj() @ sm.Q
    q = np.einsum("bi,bi->b", QX, V).real
    return np.log2(1.0 + P * x * x / q)


def grid_search_reflection(sm: StatMatrices, P: float, levels: int,
                           chunk: int = 1 << 15) -> tuple[np.ndarray, float]:
    """Exhaustive search over the uniform phase grid {2 pi k/levels}^NL.

    Returns (best vector, best closed-form rate). Ties — exact or within
    1e-12 relative, to absorb rounding noise across equivalent phases — go
    to the lexicographically smallest index tuple. Guarded to
    levels**NL <= 10^7 evaluations.
    """
    if levels < 1:
        raise ValueError(f"levels must be >= 1, got {levels}")
    NL = sm.NL
    total = levels ** NL
    if total > GRID_BUDGET:
        raise ValueError(
            f"grid of {levels}^{NL} = {total} candidates exceeds the "
            f"{GRID_BUDGET} evaluation budget")
    values = np.empty(total)
    for lo in range(0, total, chunk):
        hi = min(lo + chunk, total)
        V = _decode_phase_grid(np.arange(lo, hi, dtype=np.int64), NL, levels)
        values[lo:hi] = grid_objective(V, sm, P)
    vmax = float(values.max())
    tol = 1e-12 * max(1.0, abs(vmax))
    best_idx = int(np.nonzero(values >= vmax - tol)[0][0])
    v = _decode_phase_grid(np.array([best_idx], dtype=np.int64), NL, levels)[0]
    return v, float(values[best_idx])


def grid_search_from_stats(stats: ChannelStatistics, cfg: SystemConfig,
                           levels: int) -> tuple[np.ndarray, float]:
    """Grid oracle for a deployment under the configured pilot model."""
    return grid_search_reflection(build_moment_matrices(stats, cfg), cfg.P, levels)

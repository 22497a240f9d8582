r"""Transmit and reflection beamforming.

Active side: maximum-ratio transmission on the estimated effective link,
f = (hd_hat^H + v^H Z_hat)^H / ||.||.

Passive side: the statistical reflection design maximizes the closed-form
rate objective (v^H J v)^2 / (v^H Q v) over its scale-invariant direction
class via the dominant eigenvector of the symmetrized pencil
B = Q^{-1/2} J Q^{-1/2}, then projects entrywise onto unit modulus. With
perfect CSI Q is exactly proportional to J and the pencil carries no
direction information; the solver then falls back to the dominant
eigenvector of J, which reproduces the aligned closed-form design for M = 1.
"""

from __future__ import annotations

import numpy as np

from .analysis import StatMatrices
from .scenario import ChannelStatistics


class ConvergenceError(RuntimeError):
    """Iterative eigensolver failed to converge within its iteration cap."""


class DegenerateChannelError(ValueError):
    """Combined channel is numerically zero; MRT direction undefined."""


def mrt_vector(h_d_hat: np.ndarray, Z_hat: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Unit-norm MRT beamformer for the estimated combined row channel.

    The row channel is r = hd_hat^H + v^H Z_hat and f = r^H / ||r||, so the
    received inner product r @ f equals ||r|| (real, maximal).
    """
    row = np.conj(h_d_hat) + np.conj(v) @ Z_hat
    norm = np.linalg.norm(row)
    if norm < 1e-300:
        raise DegenerateChannelError("combined channel is zero; MRT undefined")
    return np.conj(row) / norm


def phase_extract(v: np.ndarray) -> np.ndarray:
    """Project entrywise onto the unit circle; zero entries map to phase 0."""
    v = np.asarray(v, dtype=complex)
    out = np.ones_like(v)
    nz = v != 0
    out[nz] = v[nz] / np.abs(v[nz])
    return out


def random_reflection(NL: int, rng: np.random.Generator) -> np.ndarray:
    """Independent uniform phases on all NL elements."""
    if NL < 1:
        raise ValueError(f"NL must be >= 1, got {NL}")
    return np.exp(1j * rng.uniform(0.0, 2.0 * np.pi, NL))


def aligned_phases(stats: ChannelStatistics) -> np.ndarray:
    """Phase-align each element's LoS cascade (optimal for M = 1).

    Entry i of the returned vector is exp(j(angle(gbar_i) + angle(Hbar_i0))),
    which makes every term of v^H Gbar Hbar real nonnegative and attains the
    coherent upper bound. Elements whose LoS coefficient vanishes keep
    phase 0.
    """
    if stats.M != 1:
        raise ValueError(f"aligned design requires M = 1, got M = {stats.M}")
    prod = stats.gbar_diag * stats.Hbar[:, 0]
    return phase_extract(np.where(prod == 0, 1.0, prod))


def power_iteration(B: np.ndarray, tol: float = 1e-10, max_iter: int = 10_000,
                    start: np.ndarray | None = None) -> tuple[np.ndarray, float]:
    """Dominant eigenpair of a Hermitian PSD matrix.

    Convergence is measured by the phase-invariant direction change
    1 - |<v_k, v_{k+1}>|. Near-degenerate spectra can stall below tol before
    the direction settles; prefer the dense path when NL is small.
    """
    B = np.asarray(B)
    n = B.shape[0]
    if start is None:
        # deterministic pseudo-random start, reproducible across runs
        srng = np.random.Generator(np.random.Philox(key=np.array([0x706F7765, 0], np.uint64)))
        w = srng.standard_normal(n) + 1j * srng.standard_normal(n)
    else:
        w = start.astype(complex)
    w = w / np.linalg.norm(w)
    lam = float(np.real(np.vdot(w, B @ w)))
    for _ in range(max_iter):
        nxt = B @ w
        norm = np.linalg.norm(nxt)
        if norm == 0.0:  # B w = 0: w already spans the (zero) dominant space
            return w, 0.0
        nxt = nxt / norm
        change = 1.0 - abs(np.vdot(w, nxt))
        w = nxt
        lam = float(np.real(np.vdot(w, B @ w)))
        if change < tol:
            return w, lam
    raise ConvergenceError(
        f"power iteration did not converge within {max_iter} iterations "
        f"(last direction change above {tol})")


def _dominant_eigvec(B: np.ndarray) -> tuple[np.ndarray, float]:
    w, V = np.linalg.eigh(B)
    return V[:, -1], float(w[-1])


def _inv_sqrt_psd(Q: np.ndarray) -> np.ndarray:
    w, V = np.linalg.eigh(Q)
    if w[0] <= 0:
        raise ValueError(f"Q must be positive definite (min eigenvalue {w[0]:.3e})")
    return (V / np.sqrt(w)) @ V.conj().T


def solve_statistical_reflection(sm: StatMatrices, method: str = "auto",
                                 dense_limit: int = 512,
                                 project: bool = True) -> np.ndarray:
    """Reflection design from second-order statistics.

    Computes the dominant eigenvector w of B = Q^{-1/2} J Q^{-1/2}, maps it
    back through v' = Q^{-1/2} w (the maximizing direction class of
    (v^H J v)^2 / (v^H Q v)), and by default projects onto unit modulus.

    method: 'dense' | 'power' | 'auto' (dense when NL <= dense_limit).
    project=False returns the unprojected direction v'.
    """
    J, Q = sm.J, sm.Q
    NL = sm.NL
    if method not in ("auto", "dense", "power"):
        raise ValueError(f"unknown method {method!r}")
    use_dense = method == "dense" or (method == "auto" and NL <= dense_limit)
    Qis = _inv_sqrt_psd(Q)
    B = Qis @ J @ Qis
    B = (B + B.conj().T) / 2.0
    eigvals = np.linalg.eigvalsh(B) if use_dense else None
    if use_dense:
        spread = (eigvals[-1] - eigvals[0]) / max(abs(eigvals[-1]), 1e-300)
        if spread < 1e-10:
            # Q proportional to J: the pencil is directionless and the
            # objective reduces to v^H J v on the feasible scale.
            w, _ = _dominant_eigvec((J + J.conj().T) / 2.0)
            vprime = w
        else:
            w, _ = _dominant_eigvec(B)
            vprime = Qis @ w
    else:
        w, _ = power_iteration(B)
        vprime = Qis @ w
    return phase_extract(vprime) if project else vprime

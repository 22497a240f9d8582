r"""Correlated Rician channel sampling.

Per draw, with stacked statistics (see scenario module):

* first hop:  ``H = Hbar + K1 @ R^{1/2} @ W`` with W iid CN(0, 1) of shape
  (NL, M) — columns share the element correlation R, BS antennas are
  uncorrelated;
* second hop: per surface, ``g_n = w_los * gbar_n + w_nlos * conj(noise)``
  folded directly into the diagonal ``gdiag = gbar_diag + K2 @ conj(noise)``
  (conjugation leaves the circular Gaussian law unchanged);
* direct link: ``h_d`` iid CN(0, 1), M entries, no pathloss;
* cascade: ``Z = diag(gdiag) @ H`` exactly.

Deterministic hops (K = inf) contribute zero NLoS weight, so the same code
path produces exact pure-LoS draws. Draw order within one rng stream is
fixed: W, then the second-hop noise, then h_d.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .scenario import ChannelStatistics


def matrix_sqrt_psd(A: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """Hermitian PSD square root via eigendecomposition.

    Eigenvalues below -tol*max_eig raise; small negatives are clamped to 0.
    """
    A = np.asarray(A)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {A.shape}")
    if not np.allclose(A, A.conj().T, atol=1e-12):
        raise ValueError("matrix is not Hermitian")
    w, V = np.linalg.eigh(A)
    scale = max(w.max(), 0.0)
    if np.any(w < -tol * max(scale, 1.0)):
        raise ValueError(f"matrix is not PSD (min eigenvalue {w.min():.3e})")
    w = np.clip(w, 0.0, None)
    S = (V * np.sqrt(w)) @ V.conj().T
    if np.isrealobj(A):
        S = S.real
    return S


def complex_normal(rng: np.random.Generator, size) -> np.ndarray:
    """iid CN(0, 1): unit-variance circular complex Gaussian entries."""
    re = rng.standard_normal(size)
    im = rng.standard_normal(size)
    return (re + 1j * im) / np.sqrt(2.0)


@dataclass
class ChannelRealization:
    """One joint draw of the links; Z is derived, never sampled separately."""

    H: np.ndarray      # (NL, M) first hop
    gdiag: np.ndarray  # (NL,) conjugated second hop on the cascade diagonal
    h_d: np.ndarray    # (M,) direct link
    Z: np.ndarray      # (NL, M) cascade diag(gdiag) @ H

    @property
    def Gdiag(self) -> np.ndarray:
        return np.diag(self.gdiag)

    def g(self, stats: ChannelStatistics, n: int) -> np.ndarray:
        """Physical second-hop vector of surface n (undo the conjugation)."""
        return np.conj(self.gdiag[stats.block(n)])


def sample_channels(stats: ChannelStatistics,
                    rng: np.random.Generator) -> ChannelRealization:
    """Draw one channel realization from the given statistics."""
    NL, M = stats.NL, stats.M
    W = complex_normal(rng, (NL, M))
    colored = W if stats.r_is_identity() else stats.R_sqrt() @ W
    H = stats.Hbar + stats.k1_diag[:, None] * colored
    g_noise = complex_normal(rng, NL)
    gdiag = stats.gbar_diag + stats.k2_diag * np.conj(g_noise)
    h_d = complex_normal(rng, M)
    Z = gdiag[:, None] * H
    return ChannelRealization(H=H, gdiag=gdiag, h_d=h_d, Z=Z)

"""Imperfect CSI model.

Estimation error variance follows the pilot model xi = 1/(1 + T*rho). Truth
and error are sampled independently and the estimate defined by subtraction:

    Z_hat  = Z  - E_Z,    E_Z iid CN(0, xi)
    hd_hat = h_d - e_d,   e_d iid CN(0, xi)

so estimate + error reconstructs the truth by construction (up to one ulp —
see tests). xi = 0 yields exact estimates with zero error arrays. Draw order
in one rng stream: E_Z first, then e_d.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import ChannelRealization, complex_normal


def estimation_error_variance(T: int, rho: float, perfect_csi: bool = False) -> float:
    """Per-entry error variance xi = 1/(1 + T*rho); 0 when perfect_csi."""
    if perfect_csi:
        return 0.0
    if T < 0:
        raise ValueError(f"T must be >= 0, got {T}")
    if rho < 0:
        raise ValueError(f"rho must be >= 0, got {rho}")
    return 1.0 / (1.0 + T * rho)


@dataclass
class CsiEstimates:
    """Estimates and the error realizations that produced them."""

    Z_hat: np.ndarray   # (NL, M)
    h_d_hat: np.ndarray  # (M,)
    E_Z: np.ndarray     # (NL, M) cascade estimation error
    e_d: np.ndarray     # (M,) direct-link estimation error
    xi: float


def sample_estimates(real: ChannelRealization, xi: float,
                     rng: np.random.Generator) -> CsiEstimates:
    """Draw estimation errors for one realization and form the estimates."""
    if xi < 0:
        raise ValueError(f"xi must be >= 0, got {xi}")
    NL, M = real.Z.shape
    if xi == 0.0:
        E_Z = np.zeros((NL, M), dtype=complex)
        e_d = np.zeros(M, dtype=complex)
        return CsiEstimates(Z_hat=real.Z.copy(), h_d_hat=real.h_d.copy(),
                            E_Z=E_Z, e_d=e_d, xi=0.0)
    s = np.sqrt(xi)
    E_Z = s * complex_normal(rng, (NL, M))
    e_d = s * complex_normal(rng, M)
    return CsiEstimates(Z_hat=real.Z - E_Z, h_d_hat=real.h_d - e_d,
                        E_Z=E_Z, e_d=e_d, xi=xi)

r"""Statistical channel description of a deployment.

Large-scale model per surface n:

* pathloss: ``C0 * (d / D0)^(-alpha_exp)`` with beta_n on the BS->surface hop
  (distance d1) and alpha_n on the surface->user hop (distance d2);
* Rician factor: ``K(d) = 10^(1.3 - 0.003 d)``, applied as K1_n on the first
  hop and K2_n on the second. ``K = inf`` encodes a deterministic (pure LoS)
  hop and is carried through all formulas by exact limits, never by large
  finite surrogates.

Line-of-sight responses are deterministic unit-modulus phase profiles
``exp(-j 2 pi d / lambda)`` computed element-to-element from the geometry.

The stacked description used downstream lives in :class:`ChannelStatistics`:
``Hbar`` is the (NL, M) weighted LoS of the first hop, ``gbar_diag`` the
weighted conjugate LoS of the second hop (a diagonal in the cascade algebra),
``k1_diag``/``k2_diag`` the diagonal NLoS weights, and ``R`` the
block-diagonal element correlation. The second-hop matrix is kept diagonal —
the cascade then reads Z = diag(gbar + noise) @ H with compatible (NL, M)
shapes throughout.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .config import SystemConfig
from .geometry import DeploymentGeometry


def pathloss(d, C0: float = 1e-3, D0: float = 1.0, alpha_exp: float = 2.5):
    """Distance-power law C0 * (d/D0)^(-alpha_exp). Requires d > 0."""
    d = np.asarray(d, dtype=float)
    if np.any(d <= 0):
        raise ValueError(f"pathloss requires d > 0, got min d = {d.min()}")
    return C0 * (d / D0) ** (-alpha_exp)


def rician_k(d):
    """Distance-dependent Rician factor 10^(1.3 - 0.003 d). Requires d >= 0."""
    d = np.asarray(d, dtype=float)
    if np.any(d < 0):
        raise ValueError(f"rician_k requires d >= 0, got min d = {d.min()}")
    return 10.0 ** (1.3 - 0.003 * d)


def los_power_frac(K):
    """K/(K+1) with the exact limit 1 at K = inf."""
    K = np.asarray(K, dtype=float)
    if np.any(K < 0):
        raise ValueError("Rician factor must be >= 0")
    finite = np.where(np.isinf(K), 0.0, K)
    return np.where(np.isinf(K), 1.0, finite / (finite + 1.0))


def nlos_power_frac(K):
    """1/(K+1) with the exact limit 0 at K = inf."""
    K = np.asarray(K, dtype=float)
    if np.any(K < 0):
        raise ValueError("Rician factor must be >= 0")
    finite = np.where(np.isinf(K), 0.0, K)
    return np.where(np.isinf(K), 0.0, 1.0 / (finite + 1.0))


def los_matrix(element_positions: np.ndarray, antenna_positions: np.ndarray,
               wavelength: float) -> np.ndarray:
    """Unit-modulus LoS response between two arrays.

    Args:
        element_positions: (L, 2) receiving-side coordinates.
        antenna_positions: (M, 2) transmitting-side coordinates.
        wavelength: carrier wavelength in the same units.

    Returns:
        (L, M) complex matrix with entries exp(-j 2 pi d_ij / lambda) where
        d_ij is the element-to-antenna distance.
    """
    if wavelength <= 0:
        raise ValueError("wavelength must be > 0")
    diff = element_positions[:, None, :] - antenna_positions[None, :, :]
    d = np.linalg.norm(diff, axis=2)
    return np.exp(-2j * np.pi * d / wavelength)


def los_vector(element_positions: np.ndarray, point: np.ndarray,
               wavelength: float) -> np.ndarray:
    """(L,) unit-modulus LoS response from an array to a single point."""
    return los_matrix(element_positions, np.asarray(point, float)[None, :],
                      wavelength)[:, 0]


def correlation_block(L: int, corr_r: float) -> np.ndarray:
    """Exponential element correlation R[i, j] = corr_r^|i-j| (real, PSD)."""
    if not 0.0 <= corr_r < 1.0:
        raise ValueError(f"corr_r must lie in [0, 1), got {corr_r}")
    idx = np.arange(L)
    return corr_r ** np.abs(idx[:, None] - idx[None, :]).astype(float)


@dataclass
class ChannelStatistics:
    """Stacked first/second-hop statistics of one deployment.

    Shapes use NL = N*L rows, surfaces stacked in order. ``K1``/``K2`` may
    contain ``inf`` for deterministic hops.
    """

    M: int
    N: int
    L: int
    alpha: np.ndarray      # (N,) surface->user pathloss
    beta: np.ndarray       # (N,) BS->surface pathloss
    K1: np.ndarray         # (N,) first-hop Rician factors
    K2: np.ndarray         # (N,) second-hop Rician factors
    Hbar: np.ndarray       # (NL, M) weighted LoS, first hop
    gbar_diag: np.ndarray  # (NL,) weighted conjugate LoS, second hop
    k1_diag: np.ndarray    # (NL,) NLoS weight, first hop (real >= 0)
    k2_diag: np.ndarray    # (NL,) NLoS weight, second hop (real >= 0)
    R: np.ndarray          # (NL, NL) block-diagonal element correlation
    _R_sqrt: np.ndarray | None = field(default=None, repr=False, compare=False)
    _R_identity: bool | None = field(default=None, repr=False, compare=False)

    @property
    def NL(self) -> int:
        return self.N * self.L

    @property
    def Gbar(self) -> np.ndarray:
        """(NL, NL) diagonal second-hop LoS matrix."""
        return np.diag(self.gbar_diag)

    @property
    def K1_mat(self) -> np.ndarray:
        return np.diag(self.k1_diag)

    @property
    def K2_mat(self) -> np.ndarray:
        return np.diag(self.k2_diag)

    def R_sqrt(self) -> np.ndarray:
        """Cached PSD square root of R (exact identity shortcut)."""
        if self._R_sqrt is None:
            if self.r_is_identity():
                self._R_sqrt = self.R
            else:
                from .channel import matrix_sqrt_psd
                self._R_sqrt = matrix_sqrt_psd(self.R)
        return self._R_sqrt

    def r_is_identity(self) -> bool:
        if self._R_identity is None:
            self._R_identity = bool(np.array_equal(self.R, np.eye(self.NL)))
        return self._R_identity

    def block(self, n: int) -> slice:
        """Row slice of surface n in the stacked layout."""
        if not 0 <= n < self.N:
            raise IndexError(f"surface index {n} out of range [0, {self.N})")
        return slice(n * self.L, (n + 1) * self.L)


def build_statistics(cfg: SystemConfig, geom: DeploymentGeometry) -> ChannelStatistics:
    """Derive the stacked statistics of a deployment. Deterministic.

    Pathloss and Rician factors come from centre-to-centre distances; LoS
    phase profiles from per-element distances. ``cfg.force_pure_los``
    overrides both Rician factors with infinity.
    """
    if (geom.M, geom.N, geom.L) != (cfg.M, cfg.N, cfg.L):
        raise ValueError(
            f"geometry shape (M={geom.M}, N={geom.N}, L={geom.L}) does not match "
            f"config (M={cfg.M}, N={cfg.N}, L={cfg.L})"
        )
    d1 = geom.bs_surface_distances()
    d2 = geom.surface_user_distances()
    beta = pathloss(d1, cfg.C0, cfg.D0, cfg.alpha_exp)
    alpha = pathloss(d2, cfg.C0, cfg.D0, cfg.alpha_exp)
    if cfg.force_pure_los:
        K1 = np.full(cfg.N, np.inf)
        K2 = np.full(cfg.N, np.inf)
    else:
        K1 = rician_k(d1)
        K2 = rician_k(d2)

    NL = cfg.N * cfg.L
    Hbar = np.empty((NL, cfg.M), dtype=complex)
    gbar = np.empty(NL, dtype=complex)
    k1d = np.empty(NL)
    k2d = np.empty(NL)
    R = np.zeros((NL, NL))
    Rblk = correlation_block(cfg.L, cfg.corr_r)
    w1_los = np.sqrt(beta * los_power_frac(K1))
    w1_nlos = np.sqrt(beta * nlos_power_frac(K1))
    w2_los = np.sqrt(alpha * los_power_frac(K2))
    w2_nlos = np.sqrt(alpha * nlos_power_frac(K2))
    for n in range(cfg.N):
        rows = slice(n * cfg.L, (n + 1) * cfg.L)
        elems = geom.element_positions[n]
        Hbar[rows] = w1_los[n] * los_matrix(elems, geom.bs_positions, cfg.wavelength)
        gbar[rows] = w2_los[n] * np.conj(
            los_vector(elems, geom.user_position, cfg.wavelength))
        k1d[rows] = w1_nlos[n]
        k2d[rows] = w2_nlos[n]
        R[rows, rows] = Rblk
    return ChannelStatistics(M=cfg.M, N=cfg.N, L=cfg.L, alpha=alpha, beta=beta,
                             K1=K1, K2=K2, Hbar=Hbar, gbar_diag=gbar,
                             k1_diag=k1d, k2_diag=k2d, R=R)


def synthetic_statistics(rng: np.random.Generator, N: int, L: int, M: int,
                         alpha=None, beta=None, K1=None, K2=None,
                         corr_r: float = 0.0) -> ChannelStatistics:
    """Statistics with random unit-modulus LoS phases; handy for unit tests.

    Unspecified large-scale parameters are drawn from broad ranges; K arrays
    may contain inf for deterministic hops.
    """
    def arr(x, default):
        return np.asarray(default if x is None else x, dtype=float) * np.ones(N)

    alpha = arr(alpha, rng.uniform(0.1, 2.0, N))
    beta = arr(beta, rng.uniform(0.1, 2.0, N))
    K1 = arr(K1, rng.uniform(0.0, 30.0, N))
    K2 = arr(K2, rng.uniform(0.0, 30.0, N))
    NL = N * L
    theta_h = rng.uniform(0, 2 * np.pi, size=(NL, M))
    theta_g = rng.uniform(0, 2 * np.pi, size=NL)
    Hbar = np.exp(1j * theta_h)
    gbar = np.exp(-1j * theta_g)
    k1d = np.empty(NL)
    k2d = np.empty(NL)
    R = np.zeros((NL, NL))
    Rblk = correlation_block(L, corr_r)
    for n in range(N):
        rows = slice(n * L, (n + 1) * L)
        Hbar[rows] *= np.sqrt(beta[n] * los_power_frac(K1[n]))
        gbar[rows] *= np.sqrt(alpha[n] * los_power_frac(K2[n]))
        k1d[rows] = np.sqrt(beta[n] * nlos_power_frac(K1[n]))
        k2d[rows] = np.sqrt(alpha[n] * nlos_power_frac(K2[n]))
        R[rows, rows] = Rblk
    return ChannelStatistics(M=M, N=N, L=L, alpha=alpha, beta=beta, K1=K1, K2=K2,
                             Hbar=Hbar, gbar_diag=gbar, k1_diag=k1d, k2_diag=k2d, R=R)

r"""Closed-form ergodic rate analysis under statistical CSI.

With maximum-ratio transmission on the estimated links, the ergodic rate of
the reflect-assisted downlink is approximated by a ratio of expectations:

    rate ~= log2(1 + P * X^2 / (sigma2 * X + Y)),
    X = E{ || hd_hat^H + v^H Z_hat ||^2 },
    Y = E{ | (e_d^H + v^H E_Z)(hd_hat + Z_hat^H v) |^2 },

where v is the unit-modulus reflection vector (||v||^2 = NL). Both
expectations are quadratic forms in v:  X = v^H J v  and
sigma2*X + Y = v^H Q v  for the matrices built here. Scalar (v-independent)
contributions are folded onto the identity as scalar/NL * I, exact for any
unit-modulus v.

The expectation calculus assumes the additive estimation model of the
estimation module (truth and error independent, estimate by subtraction).
That model makes the estimate correlated with its error, which contributes
the cross term 2*xi^2*M^2*NL to Y — dropping it biases the Y oracle by tens
of standard errors at xi = 0.1 (see tests).

High-SNR specializations for M = 1, uncorrelated elements and perfect CSI
(aligned phases, second-hop gains alpha_n, first-hop gains beta_n):

* general Rician factors: ``siso_uncorrelated_rate``;
* both hops deterministic: ``pure_los_rate``;
* both hops Rayleigh: ``rayleigh_rate``;
* a deterministic subset, Rayleigh elsewhere: ``mixed_los_rate``.

The published deterministic-hop formula keeps the incoherent term
L*sum(alpha*beta) that the K -> inf limit of the general formula drops;
``pure_los_limit_gap`` quantifies that discrepancy instead of silently
resolving it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .scenario import ChannelStatistics, los_power_frac, nlos_power_frac
from .config import SystemConfig
from .estimation import estimation_error_variance

_UNIT_MODULUS_TOL = 1e-9


def cascade_second_moment(stats: ChannelStatistics) -> np.ndarray:
    """E{Z Z^H} of the cascade as a quadratic form for unit-modulus v.

    Returns the Hermitian PSD (NL, NL) matrix

        C = Gbar Hbar Hbar^H Gbar^H + M * Gbar K1 R K1 Gbar^H
            + [tr(K2 Hbar Hbar^H K2) + M * tr(K2 K1 R K1 K2)] / NL * I.

    The diffuse second hop only reaches v through element-wise magnitudes,
    so its contribution is a trace folded onto the identity; v^H C v equals
    v^H E{Z Z^H} v exactly whenever |v_i| = 1 for all i.
    """
    NL, M = stats.NL, stats.M
    g = stats.gbar_diag
    k1 = stats.k1_diag
    k2 = stats.k2_diag
    GH = g[:, None] * stats.Hbar                      # Gbar @ Hbar
    C = GH @ GH.conj().T
    K1RK1 = k1[:, None] * stats.R * k1[None, :]       # K1 R K1
    C += M * (g[:, None] * K1RK1 * np.conj(g)[None, :])
    hbar_row_power = np.einsum("ij,ij->i", stats.Hbar, stats.Hbar.conj()).real
    trace_term = float(np.sum(k2 ** 2 * hbar_row_power))
    trace_term += M * float(np.sum(k2 ** 2 * k1 ** 2 * np.diag(stats.R).real))
    C += (trace_term / NL) * np.eye(NL)
    return (C + C.conj().T) / 2.0


@dataclass
class StatMatrices:
    """Quadratic-form matrices of the rate approximation plus bookkeeping.

    gamma1..gamma4 are the standard scalar ledger
    (gamma1 = (1+xi)M, gamma2 = xi M + xi^2 M (M+1),
    gamma3 = gamma1 + xi M + xi (M+1) M NL, gamma4 = xi (1+NL));
    Q additionally folds the estimate/error cross term 2 xi^2 M^2.
    """

    C: np.ndarray
    J: np.ndarray
    Q: np.ndarray
    xi: float
    M: int
    NL: int
    sigma2: float
    gamma1: float
    gamma2: float
    gamma3: float
    gamma4: float


def moment_matrices_from_c(C: np.ndarray, xi: float, M: int,
                           sigma2: float) -> StatMatrices:
    """Assemble J and Q from a cascade moment matrix and scalar parameters."""
    C = np.asarray(C)
    if C.ndim != 2 or C.shape[0] != C.shape[1]:
        raise ValueError(f"C must be square, got shape {C.shape}")
    if xi < 0:
        raise ValueError(f"xi must be >= 0, got {xi}")
    if sigma2 <= 0:
        raise ValueError(f"sigma2 must be > 0, got {sigma2}")
    if M < 1:
        raise ValueError(f"M must be >= 1, got {M}")
    NL = C.shape[0]
    g1 = (1.0 + xi) * M
    g2 = xi * M + xi ** 2 * M * (M + 1)
    g3 = g1 + xi * M + xi * (M + 1) * M * NL
    g4 = xi * (1.0 + NL)
    eye = np.eye(NL)
    J = ((g1 + xi * M * NL) / NL) * eye + C
    cross = 2.0 * xi ** 2 * M ** 2 * NL  # estimate/error correlation term
    q0 = (sigma2 * g1 + g2 + (sigma2 * M + g3) * NL * xi + cross) / NL
    Q = q0 * eye + (sigma2 + g4) * C
    return StatMatrices(C=C, J=J, Q=Q, xi=xi, M=M, NL=NL, sigma2=sigma2,
                        gamma1=g1, gamma2=g2, gamma3=g3, gamma4=g4)


def build_moment_matrices(stats: ChannelStatistics,
                          cfg: SystemConfig) -> StatMatrices:
    """J and Q for a deployment under the configured pilot model."""
    xi = estimation_error_variance(cfg.T, cfg.rho, cfg.perfect_csi)
    return moment_matrices_from_c(cascade_second_moment(stats), xi, cfg.M,
                                  cfg.sigma2)


def _check_reflection(v: np.ndarray, NL: int) -> np.ndarray:
    v = np.asarray(v)
    if v.shape != (NL,):
        raise ValueError(f"reflection vector must have shape ({NL},), got {v.shape}")
    dev = np.max(np.abs(np.abs(v) - 1.0))
    if dev > _UNIT_MODULUS_TOL:
        raise ValueError(
            f"reflection vector entries must be unit modulus (max |.|-1 deviation "
            f"{dev:.2e} exceeds {_UNIT_MODULUS_TOL})")
    return v.astype(complex, copy=False)


def rate_quadratic_forms(v: np.ndarray, sm: StatMatrices) -> tuple[float, float]:
    """(v^H J v, v^H Q v) as real scalars; no unit-modulus check."""
    v = np.asarray(v, dtype=complex)
    x = np.real(np.vdot(v, sm.J @ v))
    q = np.real(np.vdot(v, sm.Q @ v))
    return float(x), float(q)


def closed_form_rate(v: np.ndarray, sm: StatMatrices, P: float) -> float:
    """Ergodic-rate approximation log2(1 + P (v^H J v)^2 / (v^H Q v)).

    v must be unit-modulus of length NL; the denominator equals
    sigma2 * X + Y, so the expression is the cancellation-free form
    X^2/(sigma2 X + Y) of the ratio approximation.
    """
    if P <= 0:
        raise ValueError(f"P must be > 0, got {P}")
    v = _check_reflection(v, sm.NL)
    x, q = rate_quadratic_forms(v, sm)
    return float(np.log2(1.0 + P * x * x / q))


def _coef_incoherent(K1, K2):
    """(K1 + K2 + 1) / ((K1+1)(K2+1)) via exact-limit power fractions."""
    l1, n1 = los_power_frac(K1), nlos_power_frac(K1)
    l2, n2 = los_power_frac(K2), nlos_power_frac(K2)
    return l1 * n2 + n1 * l2 + n1 * n2


def siso_uncorrelated_rate(alpha, beta, K1, K2, L: int, P: float,
                           sigma2: float) -> float:
    """Closed-form rate for M = 1, perfect CSI, uncorrelated elements,
    aligned reflection phases.

    rate = log2(1 + (P/sigma2) (1 + U)) with

        U = L^2 (sum_n sqrt(alpha_n beta_n K1_n K2_n /((K1_n+1)(K2_n+1))))^2
            + L sum_n alpha_n beta_n (K1_n + K2_n + 1)/((K1_n+1)(K2_n+1)).

    K entries may be inf (deterministic hops); limits are exact.
    """
    alpha, beta = np.asarray(alpha, float), np.asarray(beta, float)
    K1, K2 = np.asarray(K1, float), np.asarray(K2, float)
    if np.any(alpha < 0) or np.any(beta < 0):
        raise ValueError("alpha and beta must be >= 0")
    if L < 1:
        raise ValueError(f"L must be >= 1, got {L}")
    _check_snr(P, sigma2)
    coherent = L ** 2 * np.sum(
        np.sqrt(alpha * beta * los_power_frac(K1) * los_power_frac(K2))) ** 2
    incoherent = L * np.sum(alpha * beta * _coef_incoherent(K1, K2))
    return float(np.log2(1.0 + (P / sigma2) * (1.0 + coherent + incoherent)))


def _check_snr(P: float, sigma2: float) -> None:
    if P <= 0:
        raise ValueError(f"P must be > 0, got {P}")
    if sigma2 <= 0:
        raise ValueError(f"sigma2 must be > 0, got {sigma2}")


def pure_los_rate(alpha, beta, L: int, P: float, sigma2: float) -> float:
    """Published both-hops-deterministic formula
    log2(1 + (P/sigma2)(1 + L^2 (sum sqrt(alpha beta))^2 + L sum alpha beta)).

    Note the trailing incoherent term; see pure_los_limit_gap.
    """
    alpha, beta = np.asarray(alpha, float), np.asarray(beta, float)
    _check_snr(P, sigma2)
    coherent = L ** 2 * np.sum(np.sqrt(alpha * beta)) ** 2
    incoherent = L * np.sum(alpha * beta)
    return float(np.log2(1.0 + (P / sigma2) * (1.0 + coherent + incoherent)))


def rayleigh_rate(alpha, beta, L: int, P: float, sigma2: float) -> float:
    """Both hops Rayleigh: log2(1 + (P/sigma2)(1 + L sum alpha beta))."""
    alpha, beta = np.asarray(alpha, float), np.asarray(beta, float)
    _check_snr(P, sigma2)
    return float(np.log2(1.0 + (P / sigma2) * (1.0 + L * np.sum(alpha * beta))))


class MixedLosRate(NamedTuple):
    rate: float   # published mixed-deployment value
    bound: float  # normalized-gain upper bound log2(1+(P/s2)(1+L^2 m^2+L N))


def mixed_los_rate(alpha, beta, L: int, pure_los_set, P: float,
                   sigma2: float) -> MixedLosRate:
    """Deployment where surfaces in ``pure_los_set`` have both hops
    deterministic and the rest are Rayleigh on both hops.

    rate  = log2(1 + (P/sigma2)(1 + L^2 (sum_{j in set} sqrt(alpha_j beta_j))^2
                                 + L sum_{all n} alpha_n beta_n))
    bound = log2(1 + (P/sigma2)(1 + L^2 m^2 + L N)) with m = |set| and
            unit gains, the best case over which surfaces are deterministic.
    """
    alpha, beta = np.asarray(alpha, float), np.asarray(beta, float)
    _check_snr(P, sigma2)
    N = alpha.shape[0]
    sel = np.zeros(N, dtype=bool)
    idx = np.asarray(list(pure_los_set), dtype=int)
    if idx.size:
        if idx.min() < 0 or idx.max() >= N:
            raise ValueError(f"pure_los_set indices must lie in [0, {N})")
        sel[idx] = True
    m = int(sel.sum())
    coherent = L ** 2 * np.sum(np.sqrt(alpha[sel] * beta[sel])) ** 2
    incoherent = L * np.sum(alpha * beta)
    rate = float(np.log2(1.0 + (P / sigma2) * (1.0 + coherent + incoherent)))
    bound = float(np.log2(1.0 + (P / sigma2) * (1.0 + L ** 2 * m ** 2 + L * N)))
    return MixedLosRate(rate=rate, bound=bound)


class PureLosGap(NamedTuple):
    published_rate: float   # pure_los_rate value
    limit_rate: float       # K -> inf limit of siso_uncorrelated_rate
    extra_snr_term: float   # the incoherent L * sum(alpha beta) the limit drops


def pure_los_limit_gap(alpha, beta, L: int, P: float,
                       sigma2: float) -> PureLosGap:
    """Quantify the known discrepancy between the published deterministic-hop
    formula and the K -> inf limit of the general closed form.

    The general formula's incoherent coefficient (K1+K2+1)/((K1+1)(K2+1))
    vanishes as both factors grow, yet the published special case keeps the
    incoherent term L * sum(alpha beta). Returns both rates and that term.
    """
    alpha, beta = np.asarray(alpha, float), np.asarray(beta, float)
    inf = np.full(alpha.shape, np.inf)
    published = pure_los_rate(alpha, beta, L, P, sigma2)
    limit = siso_uncorrelated_rate(alpha, beta, inf, inf, L, P, sigma2)
    return PureLosGap(published_rate=published, limit_rate=limit,
                      extra_snr_term=float(L * np.sum(alpha * beta)))

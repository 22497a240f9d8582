"""Deployment geometry: antenna/element coordinates for BS, surfaces, user.

The BS is a uniform linear array centred at the origin along the y-axis with
half-wavelength spacing. Each reflecting surface is a uniform linear array of
L elements, also along y at half-wavelength spacing, centred at a position
drawn uniformly over the region satisfying the distance bounds
d_min <= d1 <= d1_max (to the BS) and d_min <= d2 <= d2_max (to the user).
The user is a fixed point taken from the config. All coordinates are 2-D
metres; distances used by the pathloss and Rician-factor laws are
centre-to-centre.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import ConfigError, SystemConfig

_MAX_REJECTION_DRAWS = 100_000


@dataclass
class DeploymentGeometry:
    """Coordinates of every radiating element in the deployment."""

    bs_positions: np.ndarray       # (M, 2) BS antenna coordinates
    element_positions: np.ndarray  # (N, L, 2) surface element coordinates
    user_position: np.ndarray      # (2,)

    @property
    def M(self) -> int:
        return self.bs_positions.shape[0]

    @property
    def N(self) -> int:
        return self.element_positions.shape[0]

    @property
    def L(self) -> int:
        return self.element_positions.shape[1]

    def surface_centers(self) -> np.ndarray:
        """(N, 2) centre of each surface array."""
        return self.element_positions.mean(axis=1)

    def bs_center(self) -> np.ndarray:
        return self.bs_positions.mean(axis=0)

    def bs_surface_distances(self) -> np.ndarray:
        """(N,) centre-to-centre distance BS -> surface (d1)."""
        return np.linalg.norm(self.surface_centers() - self.bs_center(), axis=1)

    def surface_user_distances(self) -> np.ndarray:
        """(N,) centre-to-centre distance surface -> user (d2)."""
        return np.linalg.norm(self.user_position - self.surface_centers(), axis=1)


def _ula(center: np.ndarray, count: int, spacing: float) -> np.ndarray:
    """Uniform linear array along y centred at ``center``."""
    offsets = (np.arange(count) - (count - 1) / 2.0) * spacing
    pts = np.tile(np.asarray(center, dtype=float), (count, 1))
    pts[:, 1] += offsets
    return pts


def sample_geometry(cfg: SystemConfig, rng: np.random.Generator) -> DeploymentGeometry:
    """Draw a deployment satisfying the configured distance bounds.

    Surface centres are sampled by rejection inside the bounding box of the
    feasible region; an infeasible configuration (e.g. user farther than
    d1_max + d2_max from the BS) is rejected with a ConfigError.
    """
    user = np.array([cfg.user_x, cfg.user_y], dtype=float)
    if np.linalg.norm(user) > cfg.d1_max + cfg.d2_max:
        raise ConfigError(
            "user position is unreachable: |user| > d1_max + d2_max "
            f"({np.linalg.norm(user):.3f} > {cfg.d1_max + cfg.d2_max:.3f})"
        )
    spacing = cfg.wavelength / 2.0
    bs = _ula(np.zeros(2), cfg.M, spacing)

    centers = np.empty((cfg.N, 2))
    found = 0
    for _ in range(_MAX_REJECTION_DRAWS):
        cand = rng.uniform(-cfg.d1_max, cfg.d1_max, size=2)
        d1 = np.linalg.norm(cand)
        d2 = np.linalg.norm(cand - user)
        if cfg.d_min <= d1 <= cfg.d1_max and cfg.d_min <= d2 <= cfg.d2_max:
            centers[found] = cand
            found += 1
            if found == cfg.N:
                break
    else:
        raise ConfigError(
            "could not place surfaces inside the distance bounds; "
            "check user position and d1_max/d2_max/d_min"
        )

    elements = np.stack([_ula(c, cfg.L, spacing) for c in centers])
    return DeploymentGeometry(bs_positions=bs, element_positions=elements,
                              user_position=user)

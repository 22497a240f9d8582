"""System configuration and flat key=value config parsing.

All physical quantities are stored in linear units. Config files may give
``P``, ``rho`` and ``sigma2`` in dB via a ``_db`` key suffix; the parser
converts them on load. Every run parameter, including seeds, lives here so
a config file fully determines a run.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields, replace


class ConfigError(ValueError):
    """Invalid, out-of-range, or unknown configuration input."""


#: Methods understood by the sweep harness.
METHODS = ("statistical", "random", "siso_optimal", "grid_oracle")


@dataclass
class SystemConfig:
    """Scalar parameters of the downlink under study.

    Defaults reproduce the reference numerical setup: M=9 BS antennas,
    N=4 surfaces of L=16 elements, transmit power 20 dB over unit noise,
    pilot length T=10 at 20 dB pilot SNR, carrier wavelength 0.1 m,
    pathloss C0*(d/D0)^(-alpha_exp) and distance-dependent Rician factors
    10^(1.3 - 0.003 d).
    """

    M: int = 9                  # BS antennas
    N: int = 4                  # number of surfaces
    L: int = 16                 # elements per surface
    P: float = 100.0            # transmit power (linear; 20 dB)
    sigma2: float = 1.0         # noise power at the user
    T: int = 10                 # pilot symbols per coherence block
    rho: float = 100.0          # pilot SNR (linear; 20 dB)
    wavelength: float = 0.1     # carrier wavelength, metres (config key: lambda)
    C0: float = 1e-3            # pathloss at the reference distance
    D0: float = 1.0             # reference distance, metres
    alpha_exp: float = 2.5      # pathloss exponent
    corr_r: float = 0.0         # exponential correlation coefficient across elements
    perfect_csi: bool = False   # force zero estimation error
    force_pure_los: bool = False  # force both Rician factors to infinity
    user_x: float = 25.0        # user position, metres
    user_y: float = 0.0
    d1_max: float = 10.0        # max BS-surface distance
    d2_max: float = 20.0        # max surface-user distance
    d_min: float = 1.0          # min distance to either end (reference distance)
    seed: int = 1
    trials: int = 1000
    sweep: str = "4:16,1:64"    # comma-separated N:L pairs for the sweep verb
    methods: str = "statistical,random"

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        """Raise ConfigError naming the offending key when out of range."""
        for key in ("M", "N", "L", "T", "trials"):
            val = getattr(self, key)
            if not isinstance(val, int) or isinstance(val, bool):
                raise ConfigError(f"{key} must be an integer, got {val!r}")
        if self.M < 1:
            raise ConfigError(f"M must be >= 1, got {self.M}")
        if self.N < 1:
            raise ConfigError(f"N must be >= 1, got {self.N}")
        if self.L < 1:
            raise ConfigError(f"L must be >= 1, got {self.L}")
        if self.T < 0:
            raise ConfigError(f"T must be >= 0, got {self.T}")
        if self.trials < 1:
            raise ConfigError(f"trials must be >= 1, got {self.trials}")
        if not self.P > 0:
            raise ConfigError(f"P must be > 0, got {self.P}")
        if not self.sigma2 > 0:
            raise ConfigError(f"sigma2 must be > 0, got {self.sigma2}")
        if self.rho < 0:
            raise ConfigError(f"rho must be >= 0, got {self.rho}")
        if not self.wavelength > 0:
            raise ConfigError(f"wavelength must be > 0, got {self.wavelength}")
        if not self.C0 > 0:
            raise ConfigError(f"C0 must be > 0, got {self.C0}")
        if not self.D0 > 0:
            raise ConfigError(f"D0 must be > 0, got {self.D0}")
        if self.alpha_exp < 0:
            raise ConfigError(f"alpha_exp must be >= 0, got {self.alpha_exp}")
        if not 0.0 <= self.corr_r < 1.0:
            raise ConfigError(f"corr_r must lie in [0, 1), got {self.corr_r}")
        if not (self.d_min > 0 and self.d1_max >= self.d_min and self.d2_max >= self.d_min):
            raise ConfigError(
                f"distance bounds must satisfy 0 < d_min <= d1_max, d2_max; "
                f"got d_min={self.d_min}, d1_max={self.d1_max}, d2_max={self.d2_max}"
            )
        if self.seed < 0:
            raise ConfigError(f"seed must be >= 0, got {self.seed}")
        for m in self.method_list():
            if m not in METHODS:
                raise ConfigError(f"methods contains unknown method {m!r}")
        self.sweep_list()  # raises on malformed pairs

    @property
    def NL(self) -> int:
        return self.N * self.L

    def sweep_list(self) -> list[tuple[int, int]]:
        """Parse the sweep string into (N, L) pairs."""
        pairs = []
        for item in self.sweep.split(","):
            item = item.strip()
            if not item:
                continue
            parts = item.split(":")
            try:
                n, l = int(parts[0]), int(parts[1])
            except (ValueError, IndexError):
                raise ConfigError(f"sweep entry {item!r} is not of the form N:L") from None
            if n < 1 or l < 1:
                raise ConfigError(f"sweep entry {item!r} must have N, L >= 1")
            pairs.append((n, l))
        if not pairs:
            raise ConfigError("sweep must contain at least one N:L pair")
        return pairs

    def method_list(self) -> list[str]:
        return [m.strip() for m in self.methods.split(",") if m.strip()]


# Config-file key -> (dataclass field, converter). "lambda" is a keyword in
# Python, so the file key maps onto the wavelength field.
_INT_KEYS = {"M", "N", "L", "T", "seed", "trials"}
_FLOAT_KEYS = {
    "P", "sigma2", "rho", "C0", "D0", "alpha_exp", "corr_r",
    "user_x", "user_y", "d1_max", "d2_max", "d_min",
}
_BOOL_KEYS = {"perfect_csi", "force_pure_los"}
_STR_KEYS = {"sweep", "methods"}
_DB_KEYS = {"P_db": "P", "rho_db": "rho", "sigma2_db": "sigma2"}
_ALIAS_KEYS = {"lambda": "wavelength"}


def _parse_bool(key: str, raw: str) -> bool:
    low = raw.lower()
    if low in ("true", "1", "yes", "on"):
        return True
    if low in ("false", "0", "no", "off"):
        return False
    raise ConfigError(f"{key} must be a boolean, got {raw!r}")


def parse_config_text(text: str) -> SystemConfig:
    """Parse flat ``key = value`` lines with ``#`` comments into a SystemConfig.

    Keys with a ``_db`` suffix are converted to linear before assignment.
    Giving both a base key and its ``_db`` twin is ambiguous and rejected.
    Unknown keys are rejected by name.
    """
    overrides: dict[str, object] = {}
    seen_sources: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {body!r}")
        key, raw = (part.strip() for part in body.split("=", 1))
        field_name = key
        value: object
        if key in _DB_KEYS:
            field_name = _DB_KEYS[key]
            try:
                value = 10.0 ** (float(raw) / 10.0)
            except ValueError:
                raise ConfigError(f"{key} must be numeric (dB), got {raw!r}") from None
        elif key in _ALIAS_KEYS:
            field_name = _ALIAS_KEYS[key]
            try:
                value = float(raw)
            except ValueError:
                raise ConfigError(f"{key} must be numeric, got {raw!r}") from None
        elif key in _INT_KEYS:
            try:
                value = int(raw)
            except ValueError:
                raise ConfigError(f"{key} must be an integer, got {raw!r}") from None
        elif key in _FLOAT_KEYS:
            try:
                value = float(raw)
            except ValueError:
                raise ConfigError(f"{key} must be numeric, got {raw!r}") from None
        elif key in _BOOL_KEYS:
            value = _parse_bool(key, raw)
        elif key in _STR_KEYS:
            value = raw
        else:
            raise ConfigError(f"unknown config key: {key}")
        prior = seen_sources.get(field_name)
        if prior is not None and prior != key:
            raise ConfigError(f"{key} conflicts with earlier key {prior} (same parameter)")
        seen_sources[field_name] = key
        overrides[field_name] = value
    try:
        return SystemConfig(**overrides)
    except TypeError as exc:  # unreachable with the key tables above, kept defensive
        raise ConfigError(str(exc)) from None


def load_config(path: str) -> SystemConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config_text(fh.read())


def with_layout(cfg: SystemConfig, N: int, L: int) -> SystemConfig:
    """Copy of cfg with a different surface layout (same everything else)."""
    return replace(cfg, N=N, L=L)


def db_to_linear(db: float) -> float:
    return 10.0 ** (db / 10.0)


def linear_to_db(linear: float) -> float:
    if linear <= 0:
        raise ValueError(f"dB undefined for non-positive value {linear}")
    return 10.0 * math.log10(linear)

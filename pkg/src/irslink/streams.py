"""Deterministic random-stream derivation.

Monte Carlo trials and scenario geometry draw from counter-based Philox
streams keyed by (seed, index), so results are independent of execution
order and worker count. String labels are folded into 64-bit keys with
SHA-256 (stable across platforms and Python processes, unlike hash()).
"""

from __future__ import annotations

import hashlib

import numpy as np


def derive_seed(base: int, label: str) -> int:
    """Map (base seed, label) to a stable uint64 sub-seed."""
    digest = hashlib.sha256(f"{base}:{label}".encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "little")


def keyed_rng(seed: int, index: int) -> np.random.Generator:
    """Stream keyed directly by (seed, index); same pair -> same stream."""
    key = np.array([seed & 0xFFFFFFFFFFFFFFFF, index & 0xFFFFFFFFFFFFFFFF],
                   dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


#: fixed stream indices, so different purposes never collide on one key
GEOMETRY_STREAM = 0x67656F6D  # "geom"
DESIGN_STREAM = 0x64736E67    # "dsng"

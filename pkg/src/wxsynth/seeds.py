"""Deterministic per-item RNG derivation.

Batch stages derive one RNG stream per (global seed, item name[, stage])
so output never depends on worker scheduling.
"""

import hashlib

import numpy as np


def derive_rng(seed, *tokens):
    """numpy Generator seeded from a global seed plus string tokens."""
    entropy = [int(seed) & 0xFFFFFFFFFFFFFFFF]
    for token in tokens:
        digest = hashlib.sha256(str(token).encode("utf-8")).digest()
        entropy.append(int.from_bytes(digest[:8], "big"))
    return np.random.default_rng(entropy)

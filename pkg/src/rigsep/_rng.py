"""Deterministic stream splitting for nested randomized constructions.

Monte Carlo drivers need many independent draws whose identity is stable
under refactoring (adding a level to a tree must not shift every later
draw).  We key each substream by the master seed plus a structural path
(component id, tree node path, purpose tag) hashed through blake2b, so a
draw depends only on *what* it is for, never on draw order.
"""
from __future__ import annotations

import hashlib

import numpy as np

__all__ = ["substream", "substream_seed"]


def substream_seed(seed: int, *path) -> int:
    """64-bit seed for the substream identified by (seed, *path)."""
    h = hashlib.blake2b(digest_size=8)
    h.update(repr(int(seed)).encode())
    for part in path:
        h.update(b"/")
        h.update(repr(part).encode())
    return int.from_bytes(h.digest(), "big")


def substream(seed: int, *path) -> np.random.Generator:
    """Independent generator for the substream identified by (seed, *path)."""
    return np.random.default_rng(substream_seed(seed, *path))

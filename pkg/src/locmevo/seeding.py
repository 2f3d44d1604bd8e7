"""Seed derivation: every random stream is a pure function of a key tuple."""

from __future__ import annotations

import hashlib
import random

MASK64 = (1 << 64) - 1


def derive_seed(*parts: object) -> int:
    """Return a 64-bit seed determined by ``parts`` (ints/strings)."""
    text = "\x1f".join(str(p) for p in parts)
    return int.from_bytes(hashlib.blake2b(text.encode(), digest_size=8).digest(), "little")


def derive_rng(*parts: object) -> random.Random:
    return random.Random(derive_seed(*parts))

"""Deterministic seed derivation.

Every randomized stage draws its seed from a labeled blake2b hash of the
master seed plus its own coordinates, so adding stages or changing the
worker count never shifts another stage's stream.
"""

from __future__ import annotations

import hashlib


def derive_seed(*parts: object) -> int:
    """Collapse labels, ints, and strings into a stable 64-bit seed."""
    digest = hashlib.blake2b(digest_size=8)
    for part in parts:
        token = part if isinstance(part, bytes) else repr(part).encode()
        digest.update(token)
        digest.update(b"\x1f")
    return int.from_bytes(digest.digest(), "big")

"""Instances: a design plus a permutation stretch n bits to m bits.

Output bit i of the generator on input x is the hard bit of the unique
permutation preimage of x restricted to design row i.  An instance also
carries a target string b certified to lie outside the generator's range,
and the per-game query budget c.
"""

from __future__ import annotations

import dataclasses
import random
from dataclasses import dataclass

from .bits import all_bitstrings, bits_to_hex, check_bits, hex_to_bits, int_to_bits
from .crypto import HardBit, Permutation, preimage_bit
from .design import Design, require_valid, restrict
from .errors import SearchExhausted, ValidationError
from .seeds import derive_seed

ENUMERATION_MAX_N = 20
BITSET_MAX_M = 24


@dataclass(frozen=True)
class Instance:
    design: Design
    h: Permutation
    hard_bit: HardBit
    c: int
    b: str | None = None
    b_certified: bool = False

    def __post_init__(self) -> None:
        if self.design.ell != self.h.ell:
            raise ValueError(
                f"design ell={self.design.ell} does not match permutation ell={self.h.ell}"
            )
        if self.c < 1:
            raise ValueError(f"query budget c must be >= 1, got {self.c}")
        if self.b is not None:
            check_bits(self.b, self.design.m, "off-range string b")

    @property
    def n(self) -> int:
        return self.design.n

    @property
    def m(self) -> int:
        return self.design.m

    @property
    def ell(self) -> int:
        return self.design.ell

    def to_json_dict(self) -> dict:
        return {
            "design": self.design.to_json_dict(),
            "permutation": self.h.to_json_dict(),
            "hard_bit": self.hard_bit.kind,
            "c": self.c,
            "b_hex": None if self.b is None else bits_to_hex(self.b),
            "b_certified": self.b_certified,
        }

    @staticmethod
    def from_json_dict(data: dict) -> "Instance":
        design = Design.from_json_dict(data["design"])
        b_hex = data.get("b_hex")
        return Instance(
            design=design,
            h=Permutation.from_json_dict(data["permutation"]),
            hard_bit=HardBit(data.get("hard_bit", "last-bit")),
            c=int(data["c"]),
            b=None if b_hex is None else hex_to_bits(b_hex, design.m),
            b_certified=bool(data.get("b_certified", False)),
        )


def evaluate(inst: Instance, x: str) -> str:
    """The m-bit generator output on an n-bit input."""
    check_bits(x, inst.n, "generator input")
    return "".join(
        str(preimage_bit(inst.h, inst.hard_bit, restrict(x, row))) for row in inst.design.sets
    )


def _range_bitset(inst: Instance) -> bytearray:
    # 2^m bits; m <= BITSET_MAX_M keeps this at 2 MiB or less
    hit = bytearray(1 << max(inst.m - 3, 0))
    for x in all_bitstrings(inst.n):
        y = int(evaluate(inst, x), 2)
        hit[y >> 3] |= 1 << (y & 7)
    return hit


def _range_sorted(inst: Instance) -> list[int]:
    return sorted({int(evaluate(inst, x), 2) for x in all_bitstrings(inst.n)})


def find_off_range(inst: Instance, mode: str = "lex-min", seed: int = 0) -> str:
    """Search for an m-bit string outside the generator's range, certified
    by full enumeration of all 2^n inputs (hence n <= 20).

    mode 'lex-min' returns the numerically smallest such string; mode
    'seeded-random' draws candidates from a seeded stream until one misses.
    """
    if inst.n > ENUMERATION_MAX_N:
        raise ValueError(f"off-range certification needs n <= {ENUMERATION_MAX_N}, got {inst.n}")
    if mode not in ("lex-min", "seeded-random"):
        raise ValueError(f"unknown off-range search mode {mode!r}")
    if inst.m <= BITSET_MAX_M:
        hit = _range_bitset(inst)

        def in_range(y: int) -> bool:
            return bool(hit[y >> 3] & (1 << (y & 7)))

    else:
        members = _range_sorted(inst)
        memberset = set(members)

        def in_range(y: int) -> bool:
            return y in memberset

    space = 1 << inst.m
    if mode == "lex-min":
        for y in range(space):
            if not in_range(y):
                return int_to_bits(y, inst.m)
        raise SearchExhausted("generator is surjective; no off-range string exists")
    rng = random.Random(derive_seed("off-range", inst.m, seed))
    for _ in range(1000):
        y = rng.randrange(space)
        if not in_range(y):
            return int_to_bits(y, inst.m)
    raise SearchExhausted("no off-range string found in 1000 seeded draws")


def certify_off_range(inst: Instance, b: str) -> bool:
    """Independent recheck: compare b against every generator output
    directly, without the bitset used by the search."""
    check_bits(b, inst.m, "off-range string b")
    if inst.n > ENUMERATION_MAX_N:
        raise ValueError(f"certification needs n <= {ENUMERATION_MAX_N}, got {inst.n}")
    return all(evaluate(inst, x) != b for x in all_bitstrings(inst.n))


def with_off_range(inst: Instance, mode: str = "lex-min", seed: int = 0) -> Instance:
    b = find_off_range(inst, mode=mode, seed=seed)
    return dataclasses.replace(inst, b=b, b_certified=True)


def with_explicit_b(inst: Instance, b: str, allow_unverified: bool = False) -> Instance:
    """Attach a caller-supplied b.  Certified when n permits enumeration;
    otherwise refused unless the caller accepts an unverified instance."""
    check_bits(b, inst.m, "off-range string b")
    if inst.n <= ENUMERATION_MAX_N:
        if not certify_off_range(inst, b):
            raise ValidationError(f"b={b} is in the generator's range")
        return dataclasses.replace(inst, b=b, b_certified=True)
    if not allow_unverified:
        raise ValueError(f"n={inst.n} too large to certify b; pass allow_unverified=True")
    return dataclasses.replace(inst, b=b, b_certified=False)


def strict_violations(inst: Instance) -> list[str]:
    """Deviations from the strict parameter regime: m = n+1, ell the rounded
    cube root of n, d = ceil(log2 m).  Informational unless strict mode."""
    out = []
    if inst.m != inst.n + 1:
        out.append(f"m={inst.m}, strict regime wants n+1={inst.n + 1}")
    want_ell = round(inst.n ** (1 / 3))
    if inst.ell != want_ell:
        out.append(f"ell={inst.ell}, strict regime wants round(n^(1/3))={want_ell}")
    want_d = (inst.m - 1).bit_length() if inst.m > 1 else 0
    if inst.design.d != want_d:
        out.append(f"d={inst.design.d}, strict regime wants ceil(log2 m)={want_d}")
    return out


def make_instance(
    design: Design,
    h: Permutation,
    hard_bit: HardBit,
    c: int,
    b_mode: str = "lex-min",
    seed: int = 0,
) -> Instance:
    """Validated construction: checks the design, then finds and certifies b."""
    require_valid(design)
    return with_off_range(Instance(design, h, hard_bit, c), mode=b_mode, seed=seed)

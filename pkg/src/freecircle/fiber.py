"""The fiber cohomology algebra Q[a,b,c]/(a^2, b^2, c^2).

A product of three spheres S^n x S^m x S^l has rational cohomology with one
exterior-type generator per factor; every class squares to zero regardless of
its parity, which the subset representation encodes for free.  Monomials are
bitmasks over the generator set {a, b, c} with the fixed order a < b < c;
all Koszul signs are computed against that order and the engine never
reorders generators.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

GEN_NAMES = ("a", "b", "c")
MONOMIALS = tuple(range(8))  # bitmask: bit0=a, bit1=b, bit2=c
UNIT = 0


@dataclass(frozen=True, order=True)
class SpaceSignature:
    """Sphere degrees (n, m, l) with 1 <= n <= m <= l."""

    n: int
    m: int
    l: int

    def __post_init__(self):
        if not (isinstance(self.n, int) and isinstance(self.m, int) and isinstance(self.l, int)):
            raise TypeError("sphere degrees must be integers")
        if not (1 <= self.n <= self.m <= self.l):
            raise ValueError(f"need 1 <= n <= m <= l, got ({self.n},{self.m},{self.l})")

    @property
    def top_degree(self) -> int:
        return self.n + self.m + self.l

    def gen_degrees(self) -> tuple[int, int, int]:
        return (self.n, self.m, self.l)


def mono_name(mono: int) -> str:
    if mono == UNIT:
        return "1"
    return "".join(GEN_NAMES[i] for i in range(3) if mono >> i & 1)


def mono_from_name(name: str) -> int:
    if name == "1":
        return UNIT
    mono = 0
    for ch in name:
        if ch not in GEN_NAMES:
            raise ValueError(f"unknown generator {ch!r}")
        bit = 1 << GEN_NAMES.index(ch)
        if mono & bit:
            raise ValueError(f"repeated generator in {name!r}")
        mono |= bit
    return mono


def mono_degree(sig: SpaceSignature, mono: int) -> int:
    degs = sig.gen_degrees()
    return sum(degs[i] for i in range(3) if mono >> i & 1)


def mono_product(sig: SpaceSignature, u: int, v: int) -> Optional[tuple[int, int]]:
    """(sign, u*v) in the monomial basis, or None when the product is zero.

    Zero iff the supports intersect (every generator squares to zero).  The
    sign is the Koszul count: each pair x in u, y in v with y < x in the
    order a < b < c contributes deg(x) * deg(y) transposition weight.
    """
    if u & v:
        return None
    degs = sig.gen_degrees()
    t = 0
    for x in range(3):
        if not (u >> x & 1):
            continue
        for y in range(x):
            if v >> y & 1:
                t += degs[x] * degs[y]
    return (-1 if t % 2 else 1, u | v)


@lru_cache(maxsize=None)
def fiber_degrees(sig: SpaceSignature) -> tuple[int, ...]:
    """The distinct monomial degrees, ascending."""
    return tuple(sorted({mono_degree(sig, m) for m in MONOMIALS}))


@lru_cache(maxsize=None)
def monomials_of_degree(sig: SpaceSignature, q: int) -> tuple[int, ...]:
    return tuple(m for m in MONOMIALS if mono_degree(sig, m) == q)


@lru_cache(maxsize=None)
def mono_index(sig: SpaceSignature, q: int) -> dict[int, int]:
    return {m: i for i, m in enumerate(monomials_of_degree(sig, q))}

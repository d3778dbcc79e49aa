"""Tame logarithmic signatures, random covers and their evaluation.

A tame signature here is a transversal one: block i owns a run of base-p
digit slots, and its r_i entries enumerate every digit pattern of that run
(composed with a secret permutation).  Summing one entry per block then
hits each value of the addressed space exactly once, and decoding is just
reading the digits back.

Plane signatures address F_{q^2} through the b coordinate of S(1, b, N(b)/2).
Center signatures address F_q through S(1, 0, epsilon*v).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import prod
from typing import Sequence

from .fieldtower import FieldError, FieldTower
from .hgroup import HGroup, Triple, IDENTITY
from .rng import Stream

PLANE, CENTER = "plane", "center"
GENERAL, UNIT_A, DERIVED = "general", "unit_a", "derived"


def to_digits(radices: Sequence[int], Q: int) -> tuple[int, ...]:
    """Little-endian mixed radix: Q = j1 + j2*r1 + j3*r1*r2 + ..."""
    if not 0 <= Q < prod(radices):
        raise ValueError(f"index {Q} out of range for type {tuple(radices)}")
    out = []
    for r in radices:
        Q, j = divmod(Q, r)
        out.append(j)
    return tuple(out)


def from_digits(radices: Sequence[int], digits: Sequence[int]) -> int:
    if len(digits) != len(radices):
        raise ValueError("digit count does not match type")
    Q, scale = 0, 1
    for j, r in zip(digits, radices):
        if not 0 <= j < r:
            raise ValueError(f"digit {j} out of range for radix {r}")
        Q += j * scale
        scale *= r
    return Q


def default_types(F: FieldTower) -> tuple[tuple[int, ...], tuple[int, ...]]:
    return (F.p,) * (2 * F.n), (F.p,) * F.n


def _slot_offsets(p: int, radices: Sequence[int], slots: int) -> tuple[int, ...]:
    offsets, off = [], 0
    for r in radices:
        k, rr = 0, r
        while rr % p == 0:
            rr //= p
            k += 1
        if rr != 1 or k == 0:
            raise ValueError(f"block size {r} is not a power of {p}")
        offsets.append(off)
        off += k
    if off != slots:
        raise ValueError(f"type {tuple(radices)} does not address {p}^{slots} elements")
    return tuple(offsets)


@dataclass(frozen=True)
class LogSignature:
    kind: str
    radices: tuple[int, ...]
    perms: tuple[tuple[int, ...], ...]
    offsets: tuple[int, ...]
    blocks: tuple[tuple[Triple, ...], ...]

    @property
    def size(self) -> int:
        return prod(self.radices)


@dataclass(frozen=True)
class Cover:
    shape: str
    radices: tuple[int, ...]
    blocks: tuple[tuple[Triple, ...], ...]

    @property
    def size(self) -> int:
        return prod(self.radices)


def _span_value(F: FieldTower, offset: int, j: int) -> int:
    return j * F.p**offset


def build_signature(G: HGroup, kind: str, radices, perms) -> LogSignature:
    """Assemble a signature from its type and per-block permutations."""
    F = G.F
    radices = tuple(radices)
    slots = 2 * F.n if kind == PLANE else F.n
    offsets = _slot_offsets(F.p, radices, slots)
    blocks = []
    for r, off, perm in zip(radices, offsets, perms):
        if sorted(perm) != list(range(r)):
            raise ValueError("block permutation is not a bijection")
        entries = []
        for j in range(r):
            v = _span_value(F, off, perm[j])
            entries.append(G.canonical(1, v, 0) if kind == PLANE else G.center(v))
        blocks.append(tuple(entries))
    return LogSignature(kind, radices, tuple(tuple(p) for p in perms), offsets, tuple(blocks))


def _make_tame(G, kind, radices, rng, permute):
    perms = [rng.permutation(r) if permute else tuple(range(r)) for r in radices]
    return build_signature(G, kind, radices, perms)


def make_tame_plane(G: HGroup, radices, rng: Stream | None = None, permute: bool = True) -> LogSignature:
    if prod(radices) != G.q**2:
        raise ValueError("plane signature type must multiply to q^2")
    return _make_tame(G, PLANE, radices, rng, permute)


def make_tame_center(G: HGroup, radices, rng: Stream | None = None, permute: bool = True) -> LogSignature:
    if prod(radices) != G.q:
        raise ValueError("center signature type must multiply to q")
    return _make_tame(G, CENTER, radices, rng, permute)


def sig_sum(F: FieldTower, sig: LogSignature, Q: int) -> int:
    """Sum of the selected b-parts (plane) or g-parts (center)."""
    total = 0
    for block, j in zip(sig.blocks, to_digits(sig.radices, Q)):
        entry = block[j]
        total = F.add(total, entry.b if sig.kind == PLANE else entry.g)
    return total


def sig_decode(F: FieldTower, sig: LogSignature, v: int) -> int:
    """The unique Q with sig_sum(sig, Q) == v."""
    if sig.kind == CENTER:
        v = F.tz_unpack(v)  # raises on a non-trace-zero value
    elif not 0 <= v < F.size:
        raise FieldError("value outside F_q^2")
    p = F.p
    digits = []
    for r, off, perm in zip(sig.radices, sig.offsets, sig.perms):
        coord = (v // p**off) % r
        digits.append(perm.index(coord))
    return from_digits(sig.radices, digits)


def make_cover(G: HGroup, radices, shape: str, rng: Stream) -> Cover:
    F = G.F
    blocks = []
    for r in radices:
        entries = []
        for _ in range(r):
            if shape == GENERAL:
                entries.append(G.canonical(F.random_nonzero(rng), F.random(rng), F.random_fq(rng)))
            elif shape == UNIT_A:
                entries.append(G.canonical(1, F.random(rng), F.random_fq(rng)))
            elif shape == CENTER:
                entries.append(G.center(F.random_fq(rng)))
            else:
                raise ValueError(f"unknown cover shape {shape!r}")
        blocks.append(tuple(entries))
    return Cover(shape, tuple(radices), tuple(blocks))


def evaluate(G: HGroup, cover, Q: int, op: str = "dot") -> Triple:
    """Ordered product of the entries picked by Q, block 1 first."""
    mul = G.dot if op == "dot" else G.circ
    r = IDENTITY
    for block, j in zip(cover.blocks, to_digits(cover.radices, Q)):
        r = mul(r, block[j])
    return r

"""The group H(P_inf) of triples S(a, b, g) over F_{q^2}.

Two products live here.  ``dot`` is the Hermitian group law

    S(a1,b1,g1) . S(a2,b2,g2) = S(a1 a2, a2 b1 + b2, a2^(q+1) g1 + a2 b2^q b1 + g2)

and ``circ`` is the same law without the cross term a2 b2^q b1.  Both agree
on the (a, b) coordinates, which is what the decryption algebra relies on.
circ does not preserve the Hermitian condition g^q + g = b^(q+1), so that
condition is a predicate (``is_hermitian``) and not a property of Triple.
"""

from __future__ import annotations

from typing import Iterator, NamedTuple

from .fieldtower import FieldError, FieldTower
from .rng import Stream


class Triple(NamedTuple):
    a: int
    b: int
    g: int


IDENTITY = Triple(1, 0, 0)


class HGroup:
    def __init__(self, field: FieldTower):
        self.F = field
        self.q = field.q
        self.identity = IDENTITY

    @property
    def order(self) -> int:
        q = self.q
        return q**3 * (q * q - 1)

    def dot(self, x: Triple, y: Triple) -> Triple:
        F = self.F
        a1, b1, g1 = x
        a2, b2, g2 = y
        cross = F.mul(F.mul(a2, F.frob(b2)), b1)
        return Triple(
            F.mul(a1, a2),
            F.add(F.mul(a2, b1), b2),
            F.add(F.add(F.mul(F.norm(a2), g1), cross), g2),
        )

    def circ(self, x: Triple, y: Triple) -> Triple:
        F = self.F
        a1, b1, g1 = x
        a2, b2, g2 = y
        return Triple(
            F.mul(a1, a2),
            F.add(F.mul(a2, b1), b2),
            F.add(F.mul(F.norm(a2), g1), g2),
        )

    def dot_inv(self, x: Triple) -> Triple:
        # a^-(q+1) (b^(q+1) - g); equals a^-(q+1) g^q on Hermitian triples
        F = self.F
        a, b, g = x
        ai = F.inv(a)
        return Triple(ai, F.neg(F.mul(ai, b)), F.mul(F.inv(F.norm(a)), F.sub(F.norm(b), g)))

    def circ_inv(self, x: Triple) -> Triple:
        F = self.F
        a, b, g = x
        ai = F.inv(a)
        return Triple(ai, F.neg(F.mul(ai, b)), F.neg(F.mul(F.inv(F.norm(a)), g)))

    def dot_all(self, *xs: Triple) -> Triple:
        r = IDENTITY
        for x in xs:
            r = self.dot(r, x)
        return r

    def circ_all(self, *xs: Triple) -> Triple:
        r = IDENTITY
        for x in xs:
            r = self.circ(r, x)
        return r

    def is_hermitian(self, x: Triple) -> bool:
        F = self.F
        return x.a != 0 and F.trace(x.g) == F.norm(x.b)

    def canonical(self, a: int, b: int, u: int) -> Triple:
        """S(a, b, b^(q+1)/2 + epsilon*u)."""
        F = self.F
        if a == 0:
            raise FieldError("first coordinate must be nonzero")
        return Triple(a, b, F.add(F.half(F.norm(b)), F.tz_pack(u)))

    def split(self, x: Triple) -> tuple[int, int, int]:
        if not self.is_hermitian(x):
            raise FieldError(f"{self.wire(x)} is not in H(P_inf)")
        F = self.F
        return x.a, x.b, F.tz_unpack(F.sub(x.g, F.half(F.norm(x.b))))

    def center(self, u: int) -> Triple:
        return Triple(1, 0, self.F.tz_pack(u))

    def enumerate(self, which: str = "all") -> Iterator[Triple]:
        """Elements of H(P_inf) ("all"), the a=1 subgroup ("sylow") or the center."""
        F = self.F
        if F.q > 9:
            raise ValueError("enumeration is limited to q <= 9")
        a_range = range(1, F.size) if which == "all" else (1,)
        b_range = F.elements() if which in ("all", "sylow") else (0,)
        if which not in ("all", "sylow", "center"):
            raise ValueError(f"unknown subset {which!r}")
        for a in a_range:
            for b in b_range:
                for u in range(F.q):
                    yield self.canonical(a, b, u)

    def unipotent_matrix_oracle(self, x: Triple, y: Triple) -> Triple:
        """Multiply the 3x3 unitriangular matrices of two a=1 triples."""
        if x.a != 1 or y.a != 1:
            raise ValueError("matrix presentation needs a = 1")
        F = self.F

        def mat(t):
            return [[1, t.b, t.g], [0, 1, F.frob(t.b)], [0, 0, 1]]

        m1, m2 = mat(x), mat(y)
        prod = [[0] * 3 for _ in range(3)]
        for i in range(3):
            for j in range(3):
                acc = 0
                for k in range(3):
                    acc = F.add(acc, F.mul(m1[i][k], m2[k][j]))
                prod[i][j] = acc
        return Triple(prod[0][0], prod[0][1], prod[0][2])

    @staticmethod
    def factor_projection(x: Triple) -> int:
        return x.a

    def random_element(self, rng: Stream) -> Triple:
        F = self.F
        return self.canonical(F.random_nonzero(rng), F.random(rng), F.random_fq(rng))

    def random_noncentral(self, rng: Stream) -> Triple:
        F = self.F
        a = F.random_nonzero(rng)
        b = F.random_nonzero(rng)
        return self.canonical(a, b, F.random_fq(rng))

    def wire(self, x: Triple) -> str:
        F = self.F
        return ";".join(F.wire(c) for c in x)

    def parse_wire(self, s: str) -> Triple:
        parts = s.split(";")
        if len(parts) != 3:
            raise FieldError(f"bad triple {s!r}")
        x = Triple(*(self.F.parse_wire(t) for t in parts))
        if x.a == 0:
            raise FieldError(f"triple {s!r} has a = 0")
        return x

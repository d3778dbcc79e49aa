"""Arithmetic in the tower F_p < F_q < F_{q^2}, q = p^n, p odd.

Elements are plain ints.  An element of F_q is the integer whose base-p
digits (little-endian) are its coefficients over the generator of
F_p[x]/(fq_poly).  F_{q^2} = F_q[w]/(w^2 - d) with d a non-residue, and
c0 + c1*w is stored as c0 + q*c1.  With this packing the base-p digits of
an F_{q^2} element are exactly the wire digits (c0's digits, then c1's),
F_q sits inside F_{q^2} as the ints below q, and the trace-zero element
epsilon = w is the int q.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import gcd
from typing import Iterator

from .rng import Stream


class FieldError(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def prime_factors(n: int) -> list[int]:
    out, i = [], 2
    while i * i <= n:
        if n % i == 0:
            out.append(i)
            while n % i == 0:
                n //= i
        i += 1
    if n > 1:
        out.append(n)
    return out


def prime_power(q: int) -> tuple[int, int]:
    """Split q = p**n; raises if q is not a prime power."""
    if q < 2:
        raise FieldError(f"{q} is not a prime power")
    p = prime_factors(q)[0]
    n, r = 0, q
    while r % p == 0:
        r //= p
        n += 1
    if r != 1:
        raise FieldError(f"{q} is not a prime power")
    return p, n


# polynomials over F_p: little-endian coefficient lists

def _poly_rem(a: list[int], m: list[int], p: int) -> list[int]:
    a = list(a)
    dm = len(m) - 1
    lead_inv = pow(m[-1], -1, p)
    while len(a) - 1 >= dm and any(a):
        while a and a[-1] == 0:
            a.pop()
        if len(a) - 1 < dm:
            break
        c = a[-1] * lead_inv % p
        shift = len(a) - 1 - dm
        for i, mc in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mc) % p
        a.pop()
    return a


def is_irreducible(low: tuple[int, ...], p: int) -> bool:
    """Irreducibility of the monic x^n + sum(low[i] x^i) by trial division."""
    n = len(low)
    f = list(low) + [1]
    if n == 1:
        return True
    for k in range(1, n // 2 + 1):
        for code in range(p**k):
            g = [(code // p**i) % p for i in range(k)] + [1]
            if not any(_poly_rem(f, g, p)):
                return False
    return True


def irreducible_polys(p: int, n: int) -> Iterator[tuple[int, ...]]:
    """Monic irreducibles of degree n, ordered by the integer sum(c_i p^i)."""
    for code in range(p**n):
        low = tuple((code // p**i) % p for i in range(n))
        if is_irreducible(low, p):
            yield low


@dataclass(frozen=True)
class FieldParams:
    p: int
    n: int
    fq_poly: tuple[int, ...]  # low coefficients of the monic modulus
    d: int                    # non-residue in F_q, w^2 = d
    g2_gen: int               # generator of F_{q^2}^*

    @property
    def q(self) -> int:
        return self.p**self.n

    @property
    def epsilon(self) -> int:
        return self.q  # the element w


class FieldTower:
    """Table-driven arithmetic for one FieldParams.  Build via ``tower()``."""

    def __init__(self, params: FieldParams):
        p, n = params.p, params.n
        if p % 2 == 0 or not is_prime(p):
            raise FieldError(f"p = {p} must be an odd prime")
        if n < 1 or len(params.fq_poly) != n:
            raise FieldError("fq_poly must have n low coefficients")
        if any(not 0 <= c < p for c in params.fq_poly):
            raise FieldError("fq_poly coefficients out of range")
        if not is_irreducible(params.fq_poly, p):
            raise FieldError(f"fq_poly {params.fq_poly} is reducible over F_{p}")
        self.params = params
        self.p, self.n = p, n
        self.q = q = p**n
        self.size = q * q
        self.order = q * q - 1
        self.epsilon = q
        self.inv2 = (p + 1) // 2
        self._build_fq(params.fq_poly)
        if not 0 < params.d < q or self._fq_pow(params.d, (q - 1) // 2) != self._fq_neg[1]:
            raise FieldError(f"d = {params.d} is not a non-residue in F_{q}")
        self.d = params.d
        self._build_logs(params.g2_gen)
        self.g2_gen = params.g2_gen

    # ---- F_q ----

    def _build_fq(self, low):
        p, n, q = self.p, self.n, self.q
        dig = [[(x // p**i) % p for i in range(n)] for x in range(q)]
        pack = lambda ds: sum(c * p**i for i, c in enumerate(ds))  # noqa: E731
        self._fq_add = [[pack([(a + b) % p for a, b in zip(dig[x], dig[y])]) for y in range(q)] for x in range(q)]
        self._fq_neg = [pack([(-a) % p for a in dig[x]]) for x in range(q)]
        modulus = list(low) + [1]
        mul = []
        for x in range(q):
            row = []
            for y in range(q):
                prod = [0] * (2 * n - 1)
                for i, a in enumerate(dig[x]):
                    if a:
                        for j, b in enumerate(dig[y]):
                            prod[i + j] = (prod[i + j] + a * b) % p
                r = _poly_rem(prod, modulus, p) if n > 1 else prod
                r = (list(r) + [0] * n)[:n]
                row.append(pack(r))
            mul.append(row)
        self._fq_mul = mul
        self._fq_inv = [0] * q
        for x in range(1, q):
            for y in range(1, q):
                if mul[x][y] == 1:
                    self._fq_inv[x] = y
                    break

    def _fq_pow(self, x: int, k: int) -> int:
        r = 1
        while k:
            if k & 1:
                r = self._fq_mul[r][x]
            x = self._fq_mul[x][x]
            k >>= 1
        return r

    def fq_add(self, x: int, y: int) -> int:
        return self._fq_add[x][y]

    def fq_mul(self, x: int, y: int) -> int:
        return self._fq_mul[x][y]

    def fq_neg(self, x: int) -> int:
        return self._fq_neg[x]

    def fq_inv(self, x: int) -> int:
        if x == 0:
            raise ZeroDivisionError("inverse of 0 in F_q")
        return self._fq_inv[x]

    # ---- F_{q^2} ----

    def _slow_mul(self, x: int, y: int) -> int:
        q, M, A = self.q, self._fq_mul, self._fq_add
        a0, a1 = x % q, x // q
        b0, b1 = y % q, y // q
        c0 = A[M[a0][b0]][M[self.d][M[a1][b1]]]
        c1 = A[M[a0][b1]][M[a1][b0]]
        return c0 + q * c1

    def _build_logs(self, gen: int):
        m = self.order
        if not 0 < gen < self.size:
            raise FieldError("g2_gen out of range")
        exp = [0] * (2 * m)
        log = [-1] * self.size
        x = 1
        for k in range(m):
            if log[x] != -1:
                raise FieldError(f"g2_gen {gen} does not generate F_q^2*")
            exp[k] = x
            log[x] = k
            x = self._slow_mul(x, gen)
        exp[m:] = exp[:m]
        self._exp, self._log = exp, log

    def add(self, x: int, y: int) -> int:
        q, A = self.q, self._fq_add
        return A[x % q][y % q] + q * A[x // q][y // q]

    def neg(self, x: int) -> int:
        q, N = self.q, self._fq_neg
        return N[x % q] + q * N[x // q]

    def sub(self, x: int, y: int) -> int:
        return self.add(x, self.neg(y))

    def mul(self, x: int, y: int) -> int:
        if x == 0 or y == 0:
            return 0
        return self._exp[self._log[x] + self._log[y]]

    def inv(self, x: int) -> int:
        if x == 0:
            raise ZeroDivisionError("inverse of 0 in F_q^2")
        return self._exp[(-self._log[x]) % self.order]

    def div(self, x: int, y: int) -> int:
        return self.mul(x, self.inv(y))

    def pow(self, x: int, k: int) -> int:
        if x == 0:
            if k < 0:
                raise ZeroDivisionError("negative power of 0")
            return 1 if k == 0 else 0
        return self._exp[(self._log[x] * k) % self.order]

    def half(self, x: int) -> int:
        return self.mul(x, self.inv2)

    def log(self, x: int) -> int:
        """Discrete log to base g2_gen."""
        if x == 0:
            raise ZeroDivisionError("log of 0")
        return self._log[x]

    def gen_pow(self, k: int) -> int:
        return self._exp[k % self.order]

    def frob(self, x: int) -> int:
        # w^q = -w because d is a non-residue
        q = self.q
        return x % q + q * self._fq_neg[x // q]

    def norm(self, x: int) -> int:
        return self.mul(x, self.frob(x))

    def trace(self, x: int) -> int:
        return self.add(x, self.frob(x))

    def norm_trace(self, x: int) -> tuple[int, int]:
        return self.norm(x), self.trace(x)

    def is_trace_zero(self, x: int) -> bool:
        return x % self.q == 0

    def trace_zero_enum(self) -> list[int]:
        """All c with c^q + c = 0: zero plus the powers gen^((q+1)/2 + i(q+1))."""
        q = self.q
        half = (q + 1) // 2
        return [0] + [self.gen_pow(half + i * (q + 1)) for i in range(q - 1)]

    def tz_pack(self, u: int) -> int:
        if not 0 <= u < self.q:
            raise FieldError(f"{u} is not an element of F_q")
        return self.mul(self.epsilon, u)

    def tz_unpack(self, c: int) -> int:
        if not self.is_trace_zero(c):
            raise FieldError(f"{self.wire(c)} is not trace-zero")
        return self.mul(c, self.inv(self.epsilon)) if c else 0

    def in_fq(self, x: int) -> bool:
        return 0 <= x < self.q

    # ---- digits, wire form, sampling ----

    def digits(self, x: int) -> list[int]:
        p = self.p
        return [(x // p**i) % p for i in range(2 * self.n)]

    def from_digits(self, ds) -> int:
        p = self.p
        return sum((c % p) * p**i for i, c in enumerate(ds))

    def wire(self, x: int) -> str:
        return ",".join(map(str, self.digits(x)))

    def parse_wire(self, s: str) -> int:
        try:
            ds = [int(t) for t in s.split(",")]
        except ValueError as exc:
            raise FieldError(f"bad field element {s!r}") from exc
        if len(ds) != 2 * self.n or any(not 0 <= c < self.p for c in ds):
            raise FieldError(f"bad field element {s!r}")
        return self.from_digits(ds)

    def elements(self) -> range:
        return range(self.size)

    def random(self, rng: Stream) -> int:
        return self.from_digits(rng.digits(self.p, 2 * self.n))

    def random_nonzero(self, rng: Stream) -> int:
        while True:
            x = self.random(rng)
            if x:
                return x

    def random_fq(self, rng: Stream) -> int:
        return self.from_digits(rng.digits(self.p, self.n))

    def __repr__(self):
        return f"FieldTower(p={self.p}, n={self.n}, fq_poly={self.params.fq_poly}, d={self.d}, g2_gen={self.wire(self.g2_gen)})"


@lru_cache(maxsize=32)
def tower(params: FieldParams) -> FieldTower:
    return FieldTower(params)


def _generator_ok(F: FieldTower, x: int) -> bool:
    m = F.order
    for r in prime_factors(m):
        y, k, base = 1, m // r, x
        while k:
            if k & 1:
                y = F._slow_mul(y, base)
            base = F._slow_mul(base, base)
            k >>= 1
        if y == 1:
            return False
    return True


def make_params(p: int, n: int, seed: int = 0) -> FieldParams:
    """Choose fq_poly, d and g2_gen.

    seed 0 takes the smallest admissible candidate of each (ordered by the
    integer packing); any other seed picks uniformly among the admissible
    ones with streams labelled fq_poly, d and g2_gen.
    """
    if p % 2 == 0 or not is_prime(p):
        raise FieldError(f"p = {p} must be an odd prime")
    if n < 1:
        raise FieldError("n must be >= 1")
    polys = list(irreducible_polys(p, n))
    if not polys:
        raise FieldError(f"no irreducible polynomial of degree {n} over F_{p}")
    poly = polys[0] if seed == 0 else polys[Stream(seed, b"fq_poly").below(len(polys))]

    # a throwaway tower only for F_q arithmetic; the generator is fixed below
    probe = FieldTower.__new__(FieldTower)
    probe.p, probe.n, probe.q = p, n, p**n
    probe._build_fq(poly)
    q = probe.q
    minus_one = probe._fq_neg[1]
    residues = [x for x in range(1, q) if probe._fq_pow(x, (q - 1) // 2) == minus_one]
    d = residues[0] if seed == 0 else residues[Stream(seed, b"d").below(len(residues))]
    probe.d = d
    probe.order = q * q - 1

    gen = next(x for x in range(2, q * q) if _generator_ok(probe, x))
    if seed != 0:
        m = probe.order
        rng = Stream(seed, b"g2_gen")
        k = rng.below(m)
        while gcd(k, m) != 1:
            k = rng.below(m)
        y, base = 1, gen
        while k:
            if k & 1:
                y = probe._slow_mul(y, base)
            base = probe._slow_mul(base, base)
            k >>= 1
        gen = y
    return FieldParams(p, n, poly, d, gen)


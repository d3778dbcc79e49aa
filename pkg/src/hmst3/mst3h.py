"""Improved MST3 scheme over H(P_inf) with a secret additive cover map f.

Key layout, for chain k = 1 (plane, Q1 in [0, q^2)) and k = 2 (center,
Q2 in [0, q)):

    h_ij(1) = t_(i-1)^-1 . w_ij . b_ij . t_i          (dot)
    h_ij(2) = t_(i-1)^-1 o w_ij o b_ij o t_i          (circ)
    g_ij(1) = tau_(i-1)^-1 . f(w_ij) . tau_i          (dot)
    g_ij(2) = tau_(i-1)^-1 o f(w_ij) o tau_i          (circ)

with t_s(1) = t_0(2) and tau_s(1) = tau_0(2) gluing the chains.  The
ciphertext is y1 = a'(Q1) a'(Q2) x, y2 = h'(Q1) . h'(Q2), y3 = g'(Q1) . g'(Q2).
The chains telescope on the (a, b) coordinates under either product, which
is enough to peel off the cover noise and read Q1 from the b coordinate
and then Q2 from the center.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from .fieldtower import FieldError, FieldParams, FieldTower, tower
from .hgroup import HGroup, Triple
from .logsig import (
    DERIVED, GENERAL, UNIT_A, Cover, LogSignature, default_types, evaluate,
    make_cover, make_tame_center, make_tame_plane, sig_decode,
)
from .rng import Stream

PLACEMENT = {"h1": "dot", "h2": "circ", "g1": "dot", "g2": "circ"}


class IntegrityError(ValueError):
    """Ciphertext does not decrypt consistently under the given key."""


# ---- additive map f on F_{q^2} ----

def _mat_inv_mod(m, p):
    k = len(m)
    a = [list(row) + [int(i == j) for j in range(k)] for i, row in enumerate(m)]
    for col in range(k):
        piv = next((r for r in range(col, k) if a[r][col] % p), None)
        if piv is None:
            return None
        a[col], a[piv] = a[piv], a[col]
        s = pow(a[col][col], -1, p)
        a[col] = [v * s % p for v in a[col]]
        for r in range(k):
            if r != col and a[r][col]:
                c = a[r][col]
                a[r] = [(v - c * w) % p for v, w in zip(a[r], a[col])]
    return tuple(tuple(row[k:]) for row in a)


@dataclass(frozen=True)
class HomMap:
    """Invertible F_p-linear map on the digit vectors of F_{q^2}."""

    p: int
    matrix: tuple[tuple[int, ...], ...]
    inverse: tuple[tuple[int, ...], ...] = field(default=None, compare=False)

    def __post_init__(self):
        if self.inverse is None:
            inv = _mat_inv_mod(self.matrix, self.p)
            if inv is None:
                raise ValueError("cover map matrix is singular")
            object.__setattr__(self, "inverse", inv)


def hom_from_matrix(p: int, matrix) -> HomMap:
    return HomMap(p, tuple(tuple(int(v) % p for v in row) for row in matrix))


def hom_make(F: FieldTower, rng: Stream) -> HomMap:
    k = 2 * F.n
    while True:
        m = tuple(tuple(rng.digits(F.p, k)) for _ in range(k))
        if _mat_inv_mod(m, F.p) is not None:
            return HomMap(F.p, m)


def hom_identity(F: FieldTower) -> HomMap:
    k = 2 * F.n
    return hom_from_matrix(F.p, [[int(i == j) for j in range(k)] for i in range(k)])


def _matvec(F: FieldTower, m, x: int) -> int:
    v = F.digits(x)
    return F.from_digits(sum(r * c for r, c in zip(row, v)) for row in m)


def hom_apply(F: FieldTower, f: HomMap, x: int) -> int:
    return _matvec(F, f.matrix, x)


def hom_unapply(F: FieldTower, f: HomMap, x: int) -> int:
    return _matvec(F, f.inverse, x)


def hom_apply_triple(F: FieldTower, f: HomMap, x: Triple) -> Triple:
    if x.a != 1:
        raise IntegrityError("cover map is only defined on a = 1 triples")
    return Triple(1, hom_apply(F, f, x.b), hom_apply(F, f, x.g))


def hom_unapply_triple(F: FieldTower, f: HomMap, x: Triple) -> Triple:
    if x.a != 1:
        raise IntegrityError("cover map is only defined on a = 1 triples")
    return Triple(1, hom_unapply(F, f, x.b), hom_unapply(F, f, x.g))


# ---- keys ----

@dataclass(frozen=True)
class PublicKeyI:
    params: FieldParams
    a1: Cover
    a2: Cover
    h1: Cover
    h2: Cover
    g1: Cover
    g2: Cover
    placement: dict = field(default_factory=lambda: dict(PLACEMENT), compare=False)

    @property
    def types(self):
        return self.a1.radices, self.a2.radices


@dataclass(frozen=True)
class PrivateKeyI:
    params: FieldParams
    f: HomMap
    sig1: LogSignature
    sig2: LogSignature
    t1: tuple[Triple, ...]
    t2: tuple[Triple, ...]
    tau1: tuple[Triple, ...]
    tau2: tuple[Triple, ...]
    # kept only so tests can check the telescoping identities
    w1: Cover | None = None
    w2: Cover | None = None

    def __post_init__(self):
        if self.t1[-1] != self.t2[0] or self.tau1[-1] != self.tau2[0]:
            raise ValueError("sandwich chains are not glued (t_s(1) != t_0(2))")
        for t in self.t1 + self.t2 + self.tau1 + self.tau2:
            if t.b == 0:
                raise ValueError("sandwich element with b = 0")

    def without_fixtures(self) -> "PrivateKeyI":
        return replace(self, w1=None, w2=None)


@dataclass(frozen=True)
class CiphertextI:
    y1: Triple
    y2: Triple
    y3: Triple


def _chain(G: HGroup, rng: Stream, length: int) -> list[Triple]:
    return [G.random_noncentral(rng) for _ in range(length)]


def _sandwich(G, op, left, middle, right):
    if op == "dot":
        return G.dot_all(G.dot_inv(left), *middle, right)
    return G.circ_all(G.circ_inv(left), *middle, right)


def keygen_improved(params: FieldParams, types=None, seed: int = 0, f: HomMap | None = None):
    """Key pair from a seed; streams are labelled per array."""
    F = tower(params)
    G = HGroup(F)
    plane_t, center_t = types or default_types(F)
    rng = lambda label: Stream(seed, b"improved/" + label)  # noqa: E731

    sig1 = make_tame_plane(G, plane_t, rng(b"sig1"))
    sig2 = make_tame_center(G, center_t, rng(b"sig2"))
    a1 = make_cover(G, plane_t, GENERAL, rng(b"a1"))
    a2 = make_cover(G, center_t, GENERAL, rng(b"a2"))
    w1 = make_cover(G, plane_t, UNIT_A, rng(b"w1"))
    w2 = make_cover(G, center_t, UNIT_A, rng(b"w2"))
    s1, s2 = len(plane_t), len(center_t)
    t = _chain(G, rng(b"t"), s1 + s2 + 1)
    tau = _chain(G, rng(b"tau"), s1 + s2 + 1)
    t1, t2 = tuple(t[: s1 + 1]), tuple(t[s1:])
    tau1, tau2 = tuple(tau[: s1 + 1]), tuple(tau[s1:])
    if f is None:
        f = hom_make(F, rng(b"f"))

    def chain_h(ts, w, sig, op):
        return tuple(
            tuple(_sandwich(G, op, ts[i], (wj, bj), ts[i + 1]) for wj, bj in zip(w.blocks[i], sig.blocks[i]))
            for i in range(len(sig.blocks))
        )

    def chain_g(taus, w, op):
        return tuple(
            tuple(_sandwich(G, op, taus[i], (hom_apply_triple(F, f, wj),), taus[i + 1]) for wj in w.blocks[i])
            for i in range(len(w.blocks))
        )

    pk = PublicKeyI(
        params, a1, a2,
        Cover(DERIVED, plane_t, chain_h(t1, w1, sig1, "dot")),
        Cover(DERIVED, center_t, chain_h(t2, w2, sig2, "circ")),
        Cover(DERIVED, plane_t, chain_g(tau1, w1, "dot")),
        Cover(DERIVED, center_t, chain_g(tau2, w2, "circ")),
    )
    sk = PrivateKeyI(params, f, sig1, sig2, t1, t2, tau1, tau2, w1, w2)
    return pk, sk


# ---- encryption ----

def check_key_range(pk, Q1, Q2):
    q = pk.params.q
    if not (0 <= Q1 < q * q and 0 <= Q2 < q):
        raise ValueError(f"key ({Q1}, {Q2}) out of range")


def draw_key(params: FieldParams, rng: Stream) -> tuple[int, int]:
    q = params.q
    return rng.below(q * q), rng.below(q)


def encrypt_improved(pk: PublicKeyI, x: Triple, Q=None, rng: Stream | None = None) -> CiphertextI:
    G = HGroup(tower(pk.params))
    if not G.is_hermitian(x):
        raise FieldError("message is not an element of H(P_inf)")
    if Q is None:
        Q = draw_key(pk.params, rng)
    Q1, Q2 = Q
    check_key_range(pk, Q1, Q2)
    y1 = G.dot_all(evaluate(G, pk.a1, Q1), evaluate(G, pk.a2, Q2), x)
    y2 = G.dot(evaluate(G, pk.h1, Q1, "dot"), evaluate(G, pk.h2, Q2, "circ"))
    y3 = G.dot(evaluate(G, pk.g1, Q1, "dot"), evaluate(G, pk.g2, Q2, "circ"))
    return CiphertextI(y1, y2, y3)


def unwrap(G: HGroup, sk: PrivateKeyI, ct: CiphertextI) -> tuple[Triple, Triple]:
    """D and G after stripping the outer sandwich elements."""
    D = G.circ(G.dot(sk.t1[0], ct.y2), G.circ_inv(sk.t2[-1]))
    Gq = G.circ(G.dot(sk.tau1[0], ct.y3), G.circ_inv(sk.tau2[-1]))
    return D, Gq


def decrypt_improved(sk: PrivateKeyI, pk: PublicKeyI, ct: CiphertextI, trace: dict | None = None):
    """Recover (x, (Q1, Q2)).  ``trace`` collects intermediates when given."""
    F = tower(pk.params)
    G = HGroup(F)
    D, Gq = unwrap(G, sk, ct)
    if D.a != 1 or Gq.a != 1:
        raise IntegrityError("outer sandwich does not cancel")
    D1 = G.dot(D, G.dot_inv(hom_unapply_triple(F, sk.f, Gq)))
    try:
        Q1 = sig_decode(F, sk.sig1, D1.b)
    except (FieldError, ValueError) as exc:
        raise IntegrityError(str(exc)) from exc

    y2r = G.dot(G.dot_inv(evaluate(G, pk.h1, Q1, "dot")), ct.y2)
    y3r = G.dot(G.dot_inv(evaluate(G, pk.g1, Q1, "dot")), ct.y3)
    Dc = G.circ(sk.t2[0], G.circ(y2r, G.circ_inv(sk.t2[-1])))
    Gc = G.circ(sk.tau2[0], G.circ(y3r, G.circ_inv(sk.tau2[-1])))
    if Gc.a != 1:
        raise IntegrityError("inner sandwich does not cancel")
    D2 = G.dot(Dc, G.dot_inv(hom_unapply_triple(F, sk.f, Gc)))
    if D2.a != 1 or D2.b != 0:
        raise IntegrityError("center residue is not central")
    try:
        Q2 = sig_decode(F, sk.sig2, D2.g)
    except (FieldError, ValueError) as exc:
        raise IntegrityError(str(exc)) from exc

    x = G.dot(G.dot_inv(G.dot(evaluate(G, pk.a1, Q1), evaluate(G, pk.a2, Q2))), ct.y1)
    if not G.is_hermitian(x):
        raise IntegrityError("recovered message is not in H(P_inf)")
    if trace is not None:
        trace.update(D=D, G=Gq, D1=D1, Dc=Dc, Gc=Gc, D2=D2)
    return x, (Q1, Q2)

"""The basic (pre-homomorphic) scheme, kept as an attack target.

Public maps f1(S(a,b,g)) = S(1, b, g) and f2(S(a,b,g)) = S(1, 0, g - b^(q+1)/2)
are applied entry by entry to the a-covers.  The ciphertext carries
y3 = f1(a1)'(Q1) and y4 = f2(a2)'(Q2), each of which depends on one half of
the key only; that is the weakness ``attacks.attack_legacy_sequential`` uses.
"""

from __future__ import annotations

from dataclasses import dataclass

from .fieldtower import FieldError, FieldParams, tower
from .hgroup import HGroup, Triple
from .logsig import (
    DERIVED, GENERAL, Cover, LogSignature, default_types, evaluate,
    make_cover, make_tame_center, make_tame_plane, sig_decode,
)
from .mst3h import IntegrityError, check_key_range, draw_key
from .rng import Stream

F1_DESCRIPTOR = "drop-a"
F2_DESCRIPTOR = "center-residual"


def f1f2_apply(G: HGroup, which: int, x: Triple) -> Triple:
    F = G.F
    if which == 1:
        return Triple(1, x.b, x.g)
    if which == 2:
        return Triple(1, 0, F.sub(x.g, F.half(F.norm(x.b))))
    raise ValueError("which must be 1 or 2")


def map_cover(G: HGroup, which: int, cover: Cover) -> Cover:
    blocks = tuple(tuple(f1f2_apply(G, which, e) for e in block) for block in cover.blocks)
    return Cover(DERIVED, cover.radices, blocks)


@dataclass(frozen=True)
class PublicKeyL:
    params: FieldParams
    a1: Cover
    a2: Cover
    g1: Cover
    g2: Cover

    @property
    def types(self):
        return self.a1.radices, self.a2.radices


@dataclass(frozen=True)
class PrivateKeyL:
    params: FieldParams
    sig1: LogSignature
    sig2: LogSignature
    tau1: tuple[Triple, ...]
    tau2: tuple[Triple, ...]

    def __post_init__(self):
        if self.tau1[-1] != self.tau2[0]:
            raise ValueError("sandwich chains are not glued (tau_s(1) != tau_0(2))")
        for t in self.tau1 + self.tau2:
            if t.b == 0:
                raise ValueError("sandwich element with b = 0")


@dataclass(frozen=True)
class CiphertextL:
    y1: Triple
    y2: Triple
    y3: Triple
    y4: Triple


def keygen_legacy(params: FieldParams, types=None, seed: int = 0):
    F = tower(params)
    G = HGroup(F)
    plane_t, center_t = types or default_types(F)
    rng = lambda label: Stream(seed, b"legacy/" + label)  # noqa: E731

    sig1 = make_tame_plane(G, plane_t, rng(b"sig1"))
    sig2 = make_tame_center(G, center_t, rng(b"sig2"))
    a1 = make_cover(G, plane_t, GENERAL, rng(b"a1"))
    a2 = make_cover(G, center_t, GENERAL, rng(b"a2"))
    s1, s2 = len(plane_t), len(center_t)
    tau_rng = rng(b"tau")
    tau = [G.random_noncentral(tau_rng) for _ in range(s1 + s2 + 1)]
    tau1, tau2 = tuple(tau[: s1 + 1]), tuple(tau[s1:])

    def chain(taus, cover, which, sig):
        return tuple(
            tuple(
                G.dot_all(G.dot_inv(taus[i]), f1f2_apply(G, which, aj), bj, taus[i + 1])
                for aj, bj in zip(cover.blocks[i], sig.blocks[i])
            )
            for i in range(len(sig.blocks))
        )

    pk = PublicKeyL(
        params, a1, a2,
        Cover(DERIVED, plane_t, chain(tau1, a1, 1, sig1)),
        Cover(DERIVED, center_t, chain(tau2, a2, 2, sig2)),
    )
    return pk, PrivateKeyL(params, sig1, sig2, tau1, tau2)


def encrypt_legacy(pk: PublicKeyL, x: Triple, Q=None, rng: Stream | None = None) -> CiphertextL:
    G = HGroup(tower(pk.params))
    if not G.is_hermitian(x):
        raise FieldError("message is not an element of H(P_inf)")
    if Q is None:
        Q = draw_key(pk.params, rng)
    Q1, Q2 = Q
    check_key_range(pk, Q1, Q2)
    return CiphertextL(
        G.dot_all(evaluate(G, pk.a1, Q1), evaluate(G, pk.a2, Q2), x),
        G.dot(evaluate(G, pk.g1, Q1), evaluate(G, pk.g2, Q2)),
        evaluate(G, map_cover(G, 1, pk.a1), Q1),
        evaluate(G, map_cover(G, 2, pk.a2), Q2),
    )


def decrypt_legacy(sk: PrivateKeyL, pk: PublicKeyL, ct: CiphertextL, trace: dict | None = None):
    F = tower(pk.params)
    G = HGroup(F)
    D1 = G.dot_all(sk.tau1[0], ct.y2, G.dot_inv(sk.tau2[-1]))
    Ds = G.dot(G.dot_inv(ct.y3), D1)
    if Ds.a != 1:
        raise IntegrityError("outer sandwich does not cancel")
    try:
        Q1 = sig_decode(F, sk.sig1, Ds.b)
    except (FieldError, ValueError) as exc:
        raise IntegrityError(str(exc)) from exc
    y2r = G.dot(G.dot_inv(evaluate(G, pk.g1, Q1)), ct.y2)
    D2 = G.dot_all(sk.tau2[0], y2r, G.dot_inv(sk.tau2[-1]))
    Dss = G.dot(D2, G.dot_inv(ct.y4))
    if Dss.a != 1 or Dss.b != 0:
        raise IntegrityError("center residue is not central")
    try:
        Q2 = sig_decode(F, sk.sig2, Dss.g)
    except (FieldError, ValueError) as exc:
        raise IntegrityError(str(exc)) from exc
    x = G.dot(G.dot_inv(G.dot(evaluate(G, pk.a1, Q1), evaluate(G, pk.a2, Q2))), ct.y1)
    if not G.is_hermitian(x):
        raise IntegrityError("recovered message is not in H(P_inf)")
    if trace is not None:
        trace.update(D1=D1, Ds=Ds, D2=D2, Dss=Dss)
    return x, (Q1, Q2)

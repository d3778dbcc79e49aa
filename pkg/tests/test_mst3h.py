import itertools
from dataclasses import replace

import pytest
from hypothesis import given, strategies as st

from hmst3.fieldtower import FieldError, make_params, tower
from hmst3.hgroup import IDENTITY, HGroup, Triple as S
from hmst3.logsig import evaluate, sig_sum, to_digits
from hmst3.mst3h import (
    CiphertextI, IntegrityError, PrivateKeyI, decrypt_improved, encrypt_improved,
    hom_apply, hom_apply_triple, hom_from_matrix, hom_identity, hom_make,
    hom_unapply, hom_unapply_triple, keygen_improved, unwrap,
)
from hmst3.rng import Stream
from hmst3.serialize import serialize

W = 3
SHEAR = ((1, 1), (0, 1))


@pytest.fixture(scope="module")
def key3():
    fp = make_params(3, 1)
    return keygen_improved(fp, seed=42)


# ---- the cover map ----

def test_hom_examples(q3):
    F = q3[1]
    f = hom_from_matrix(3, SHEAR)
    assert hom_apply(F, f, W) == 1 + W
    assert hom_apply(F, f, 0) == 0
    assert hom_apply_triple(F, f, IDENTITY) == IDENTITY
    assert hom_apply_triple(F, f, S(1, W, 2)) == S(1, 1 + W, 2)


def test_hom_exhaustive_q3(q3):
    F = q3[1]
    for seed in range(5):
        f = hom_make(F, Stream(seed, b"f"))
        for x, y in itertools.product(F.elements(), repeat=2):
            assert hom_apply(F, f, F.add(x, y)) == F.add(hom_apply(F, f, x), hom_apply(F, f, y))
        assert sorted(hom_apply(F, f, x) for x in F.elements()) == list(F.elements())
        assert all(hom_unapply(F, f, hom_apply(F, f, x)) == x for x in F.elements())


def test_hom_triples(q9):
    F, G = q9[1], q9[2]
    f = hom_make(F, Stream(1, b"f"))
    rng = Stream(2, b"t")
    for _ in range(1000):
        x = S(1, F.random(rng), F.random(rng))
        assert hom_unapply_triple(F, f, hom_apply_triple(F, f, x)) == x
    with pytest.raises(IntegrityError):
        hom_apply_triple(F, f, S(2, 0, 0))


def test_singular_matrix_rejected():
    with pytest.raises(ValueError):
        hom_from_matrix(3, ((1, 2), (2, 1)))


@given(st.integers(0, 80), st.integers(0, 80), st.integers(0, 2**32))
def test_hom_additive_q9(x, y, seed):
    F = tower(make_params(3, 2))
    f = hom_make(F, Stream(seed, b"f"))
    assert hom_apply(F, f, F.add(x, y)) == F.add(hom_apply(F, f, x), hom_apply(F, f, y))


# ---- key structure ----

def test_keygen_deterministic(key3):
    pk, sk = keygen_improved(make_params(3, 1), seed=42)
    assert serialize(pk) == serialize(key3[0])
    assert serialize(sk, include_fixtures=True) == serialize(key3[1], include_fixtures=True)
    assert serialize(keygen_improved(make_params(3, 1), seed=43)[0]) != serialize(pk)


def test_chain_invariants(key3):
    _, sk = key3
    assert sk.t1[-1] == sk.t2[0] and sk.tau1[-1] == sk.tau2[0]
    assert all(t.b != 0 for t in sk.t1 + sk.t2 + sk.tau1 + sk.tau2)
    with pytest.raises(ValueError):
        replace(sk, t2=(sk.t1[0],) + sk.t2[1:])


def _wb_product(G, w, sig, Q, op):
    mul = G.dot if op == "dot" else G.circ
    r = IDENTITY
    for i, j in enumerate(to_digits(w.radices, Q)):
        r = mul(mul(r, w.blocks[i][j]), sig.blocks[i][j])
    return r


def test_h1_telescopes(key3, q3):
    G = q3[2]
    pk, sk = key3
    for Q1 in range(9):
        lhs = evaluate(G, pk.h1, Q1, "dot")
        rhs = G.dot_all(G.dot_inv(sk.t1[0]), _wb_product(G, sk.w1, sk.sig1, Q1, "dot"), sk.t1[-1])
        assert lhs == rhs


def test_g2_b_coordinate(key3, q3):
    F, G = q3[1], q3[2]
    pk, sk = key3
    for Q2 in range(3):
        wsum = evaluate(G, sk.w2, Q2, "circ").b
        lhs = evaluate(G, pk.g2, Q2, "circ")
        rhs = G.dot_all(G.dot_inv(sk.tau2[0]), S(1, hom_apply(F, sk.f, wsum), 0), sk.tau2[-1])
        assert lhs[:2] == rhs[:2]


def test_ciphertext_a_is_constant(key3, q3):
    F, G = q3[1], q3[2]
    pk, sk = key3
    x = S(1, 1, 2)
    a2 = {encrypt_improved(pk, x, Q).y2.a for Q in itertools.product(range(9), range(3))}
    a3 = {encrypt_improved(pk, x, Q).y3.a for Q in itertools.product(range(9), range(3))}
    assert a2 == {F.mul(F.inv(sk.t1[0].a), sk.t2[-1].a)}
    assert a3 == {F.mul(F.inv(sk.tau1[0].a), sk.tau2[-1].a)}


# ---- decryption algebra ----

def _b_sum(G, cover, Q, op="dot"):
    return evaluate(G, cover, Q, op).b


@pytest.mark.parametrize("seed", [42, 1, 2])
def test_decryption_identities_q3(seed, q3):
    F, G = q3[1], q3[2]
    pk, sk = keygen_improved(make_params(3, 1), seed=seed)
    rng = Stream(seed, b"msgs")
    for Q1, Q2 in itertools.product(range(9), range(3)):
        x = G.random_element(rng)
        ct = encrypt_improved(pk, x, (Q1, Q2))
        trace = {}
        assert decrypt_improved(sk, pk, ct, trace) == (x, (Q1, Q2))
        D, Gq = unwrap(G, sk, ct)
        w1, w2 = _b_sum(G, sk.w1, Q1), _b_sum(G, sk.w2, Q2, "circ")
        s1, s2 = sig_sum(F, sk.sig1, Q1), sig_sum(F, sk.sig2, Q2)
        # unwrapped pair
        assert D.a == 1 and D.b == F.add(F.add(w1, s1), w2)
        assert Gq.a == 1 and Gq.b == hom_apply(F, sk.f, F.add(w1, w2))
        # first-key recovery
        assert trace["D1"].a == 1 and trace["D1"].b == s1
        # center recovery
        assert trace["Dc"] == _wb_product(G, sk.w2, sk.sig2, Q2, "circ")
        assert trace["D2"] == S(1, 0, s2)


def test_first_key_recovery_independent_of_q2_and_message(key3, q3):
    G = q3[2]
    pk, sk = key3
    rng = Stream(5, b"indep")
    for Q1 in range(9):
        vals = set()
        for Q2 in range(3):
            for _ in range(3):
                trace = {}
                decrypt_improved(sk, pk, encrypt_improved(pk, G.random_element(rng), (Q1, Q2)), trace)
                vals.add(trace["D1"].b)
        assert len(vals) == 1


@pytest.mark.parametrize("p,n,msgs", [(3, 1, 20), (5, 1, 20), (3, 2, 2)])
def test_roundtrip_exhaustive(p, n, msgs):
    fp = make_params(p, n)
    G = HGroup(tower(fp))
    pk, sk = keygen_improved(fp, seed=7)
    rng = Stream(7, b"rt")
    xs = [G.random_element(rng) for _ in range(msgs)]
    q = fp.q
    for Q in itertools.product(range(q * q), range(q)):
        for x in xs:
            assert decrypt_improved(sk, pk, encrypt_improved(pk, x, Q)) == (x, Q)


def test_roundtrip_larger_q():
    for p, n in ((3, 3), (3, 4), (7, 1)):
        fp = make_params(p, n)
        G = HGroup(tower(fp))
        pk, sk = keygen_improved(fp, seed=3)
        rng = Stream(3, b"big")
        for _ in range(30):
            x = G.random_element(rng)
            ct = encrypt_improved(pk, x, rng=rng)
            assert decrypt_improved(sk, pk, ct)[0] == x


def test_mixed_types():
    fp = make_params(3, 2)
    G = HGroup(tower(fp))
    pk, sk = keygen_improved(fp, ((9, 9), (9,)), seed=3)
    rng = Stream(4, b"mixed")
    for Q in itertools.product(range(81), range(9)):
        x = G.random_element(rng)
        assert decrypt_improved(sk, pk, encrypt_improved(pk, x, Q)) == (x, Q)


def test_identity_cover_map_still_works(q3):
    G = q3[2]
    fp = make_params(3, 1)
    pk, sk = keygen_improved(fp, seed=9, f=hom_identity(G.F))
    for Q in itertools.product(range(9), range(3)):
        assert decrypt_improved(sk, pk, encrypt_improved(pk, S(1, 1, 2), Q)) == (S(1, 1, 2), Q)


def test_golden_pair(key3):
    pk, sk = key3
    assert decrypt_improved(sk, pk, encrypt_improved(pk, S(1, 1, 2), (5, 2))) == (S(1, 1, 2), (5, 2))


def test_joint_dependence_q3():
    fp = make_params(3, 1)
    x = S(1, 1, 2)
    for seed in range(10):
        pk, _ = keygen_improved(fp, seed=seed)
        grid = {Q: encrypt_improved(pk, x, Q) for Q in itertools.product(range(9), range(3))}
        for Q1 in range(9):
            assert len({(grid[Q1, Q2].y2, grid[Q1, Q2].y3) for Q2 in range(3)}) == 3
        for Q2 in range(3):
            assert len({(grid[Q1, Q2].y2, grid[Q1, Q2].y3) for Q1 in range(9)}) == 9


# ---- errors ----

def test_encrypt_errors(key3):
    pk, _ = key3
    with pytest.raises(FieldError):
        encrypt_improved(pk, S(1, 0, 1), (0, 0))
    with pytest.raises(ValueError):
        encrypt_improved(pk, S(1, 1, 2), (9, 0))
    with pytest.raises(ValueError):
        encrypt_improved(pk, S(1, 1, 2), (0, 3))


def test_trivial_message(key3, q3):
    G = q3[2]
    pk, _ = key3
    ct = encrypt_improved(pk, IDENTITY, (0, 0))
    assert ct.y1 == G.dot(evaluate(G, pk.a1, 0), evaluate(G, pk.a2, 0))


def test_corrupted_ciphertext(key3, q3):
    G = q3[2]
    pk, sk = key3
    ct = encrypt_improved(pk, S(1, 1, 2), (5, 2))
    bad = CiphertextI(ct.y1, S(G.F.mul(ct.y2.a, 2), ct.y2.b, ct.y2.g), ct.y3)
    with pytest.raises(IntegrityError):
        decrypt_improved(sk, pk, bad)


def test_wrong_key_never_silently_correct(key3, q3):
    G = q3[2]
    pk, _ = key3
    _, other = keygen_improved(make_params(3, 1), seed=1)
    x = S(1, 1, 2)
    outcomes = []
    for Q in itertools.product(range(9), range(3)):
        try:
            outcomes.append(decrypt_improved(other, pk, encrypt_improved(pk, x, Q)) == (x, Q))
        except IntegrityError:
            outcomes.append(False)
    assert not all(outcomes)


def test_private_key_without_fixtures(key3):
    _, sk = key3
    bare = sk.without_fixtures()
    assert bare.w1 is None and isinstance(bare, PrivateKeyI)

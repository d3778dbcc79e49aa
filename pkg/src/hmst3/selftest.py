"""Exhaustive self-checks run by ``hmstool selftest``."""

from __future__ import annotations

from .attacks import attack_legacy_sequential, decoupling_detector
from .codec import msg_decode, msg_encode, payload_space
from .fieldtower import make_params, tower
from .hgroup import HGroup
from .legacy import decrypt_legacy, encrypt_legacy, keygen_legacy
from .mst3h import decrypt_improved, encrypt_improved, keygen_improved
from .rng import Stream


def _group(G, q):
    if q > 9:
        return True
    return sum(1 for _ in G.enumerate()) == q**3 * (q * q - 1) and sum(1 for _ in G.enumerate("center")) == q


def _roundtrip(G, fp, keygen, enc, dec, rng, msgs):
    pk, sk = keygen(fp, seed=rng.next_u64())
    q = fp.q
    xs = [G.random_element(rng) for _ in range(msgs)]
    for Q1 in range(q * q):
        for Q2 in range(q):
            for x in xs:
                if dec(sk, pk, enc(pk, x, (Q1, Q2))) != (x, (Q1, Q2)):
                    return False
    return True


def _sequential(G, fp, rng):
    pk, _ = keygen_legacy(fp, seed=rng.next_u64())
    q = fp.q
    for Q1 in range(q * q):
        for Q2 in range(q):
            x = G.random_element(rng)
            rep = attack_legacy_sequential(pk, encrypt_legacy(pk, x, (Q1, Q2)))
            if rep.found_q != (Q1, Q2) or rep.x != x or rep.trials > q * q + q:
                return False
    return True


def _codec(G, q):
    n = payload_space(q)
    step = max(1, n // 5000)
    return all(msg_decode(G, msg_encode(G, i)) == i for i in range(0, n, step))


def run_selftest(q: int = 3, seed: int = 0, msgs: int = 3) -> list[tuple[str, bool]]:
    p = {3: (3, 1), 5: (5, 1), 9: (3, 2)}.get(q)
    if p is None:
        raise ValueError("selftest supports q in {3, 5, 9}")
    fp = make_params(*p)
    G = HGroup(tower(fp))
    rng = Stream(seed, b"selftest")
    checks = [
        ("group-order", lambda: _group(G, q)),
        ("trace-zero", lambda: sorted(G.F.trace_zero_enum())
         == sorted(c for c in G.F.elements() if G.F.is_trace_zero(c))),
        ("codec", lambda: _codec(G, q)),
        ("improved-roundtrip", lambda: _roundtrip(G, fp, keygen_improved, encrypt_improved, decrypt_improved, rng, msgs)),
        ("legacy-roundtrip", lambda: _roundtrip(G, fp, keygen_legacy, encrypt_legacy, decrypt_legacy, rng, msgs)),
        ("sequential-attack", lambda: _sequential(G, fp, rng)),
    ]
    if q <= 5:
        checks.append(("decoupling", lambda: decoupling_detector(keygen_legacy(fp, seed=1)[0])
                       and not decoupling_detector(keygen_improved(fp, seed=1)[0])))
    return [(name, bool(fn())) for name, fn in checks]

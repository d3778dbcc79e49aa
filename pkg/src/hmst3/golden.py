"""Fixed q=3 vectors checked into tests/golden.

Field parameters from seed 0, keys from seed 42, message S(1,1,2) under
Q = (5, 2).  ``golden_files`` regenerates every file byte for byte.
"""

from __future__ import annotations

import json

from .codec import msg_decode
from .fieldtower import make_params, tower
from .hgroup import HGroup, Triple
from .legacy import decrypt_legacy, encrypt_legacy, keygen_legacy
from .mst3h import decrypt_improved, encrypt_improved, keygen_improved
from .serialize import CiphertextBundle, make_param_set, serialize

KEY_SEED = 42
MESSAGE = Triple(1, 1, 2)
Q = (5, 2)


def _trace(G, trace: dict) -> bytes:
    return json.dumps({k: G.wire(v) for k, v in trace.items()}, separators=(",", ":")).encode()


def golden_files() -> dict[str, bytes]:
    ps = make_param_set(3, 1, 0)
    fp = ps.field
    G = HGroup(tower(fp))
    out = {"params.json": serialize(ps)}
    for scheme, keygen, enc, dec in (
        ("improved", keygen_improved, encrypt_improved, decrypt_improved),
        ("legacy", keygen_legacy, encrypt_legacy, decrypt_legacy),
    ):
        pk, sk = keygen(fp, seed=KEY_SEED)
        ct = enc(pk, MESSAGE, Q)
        trace = {}
        if dec(sk, pk, ct, trace) != (MESSAGE, Q):
            raise AssertionError(f"{scheme} golden vector does not round-trip")
        out[f"{scheme}_pub.json"] = serialize(pk)
        out[f"{scheme}_priv.json"] = serialize(sk)
        out[f"{scheme}_ct.json"] = serialize(CiphertextBundle(fp, scheme, "int", (ct,)))
        out[f"{scheme}_trace.json"] = _trace(G, trace)
    out["message.txt"] = f"{msg_decode(G, MESSAGE)}".encode()
    return {k: v + b"\n" for k, v in out.items()}

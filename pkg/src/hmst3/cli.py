"""hmstool: key generation, encryption, attacks and benchmarks from the shell.

Exit codes: 0 ok, 2 usage, 3 integrity or decode failure, 4 attack exhausted.
"""

from __future__ import annotations

import argparse
import secrets
import sys
import time
from pathlib import Path

from .attacks import (
    attack_improved_joint_cover, attack_improved_known_plaintext,
    attack_legacy_sequential, decoupled_components,
)
from .codec import bytes_to_payloads, capacity_bits, msg_decode, msg_encode, payload_space, payloads_to_bytes
from .fieldtower import FieldError, make_params, prime_power, tower
from .hgroup import HGroup
from .legacy import PrivateKeyL, PublicKeyL, decrypt_legacy, encrypt_legacy, keygen_legacy
from .mst3h import IntegrityError, PrivateKeyI, PublicKeyI, decrypt_improved, encrypt_improved, keygen_improved
from .rng import Stream
from .selftest import run_selftest
from .serialize import CiphertextBundle, FormatError, ParamSet, deserialize, make_param_set, serialize

OK, USAGE, INTEGRITY, EXHAUSTED = 0, 2, 3, 4

KEYGEN = {"improved": keygen_improved, "legacy": keygen_legacy}
ENCRYPT = {"improved": encrypt_improved, "legacy": encrypt_legacy}
DECRYPT = {"improved": decrypt_improved, "legacy": decrypt_legacy}
PRIVATE = {"improved": PrivateKeyI, "legacy": PrivateKeyL}


class UsageError(Exception):
    pass


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    seed = secrets.randbits(64)
    print(f"seed: {seed}", file=sys.stderr)
    return seed


def _read(path, expect=None):
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise UsageError(str(exc)) from exc
    obj = deserialize(data)
    if expect is not None and not isinstance(obj, expect):
        raise UsageError(f"{path}: wrong container kind")
    return obj


def _write(path, data: bytes):
    if path is None or path == "-":
        sys.stdout.buffer.write(data + b"\n")
    else:
        Path(path).write_bytes(data + b"\n")


def _scheme(pk) -> str:
    return "improved" if isinstance(pk, PublicKeyI) else "legacy"


# ---- commands ----

def cmd_params(args):
    _write(args.out, serialize(make_param_set(args.p, args.n, args.seed or 0)))
    return OK


def cmd_keygen(args):
    ps = _read(args.params, ParamSet)
    pk, sk = KEYGEN[args.scheme](ps.field, (ps.plane, ps.center), seed=_seed(args))
    _write(args.out_pub, serialize(pk))
    _write(args.out_priv, serialize(sk, include_fixtures=args.include_test_fixtures))
    return OK


def cmd_encrypt(args):
    pk = _read(args.pub, (PublicKeyI, PublicKeyL))
    G = HGroup(tower(pk.params))
    q = pk.params.q
    if args.msg is not None:
        if not 0 <= args.msg < payload_space(q):
            raise UsageError(f"--msg must lie in [0, {payload_space(q)})")
        payloads, encoding = [args.msg], "int"
    else:
        try:
            data = Path(args.msg_file).read_bytes()
        except OSError as exc:
            raise UsageError(str(exc)) from exc
        payloads, encoding = bytes_to_payloads(data, capacity_bits(q)), "bytes"
    if (args.q1 is None) != (args.q2 is None):
        raise UsageError("--q1 and --q2 go together")
    fixed = None if args.q1 is None else (args.q1, args.q2)
    rng = Stream(_seed(args), b"encrypt")
    enc = ENCRYPT[_scheme(pk)]
    try:
        items = tuple(enc(pk, msg_encode(G, m), fixed, rng) for m in payloads)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    _write(args.out, serialize(CiphertextBundle(pk.params, _scheme(pk), encoding, items)))
    return OK


def cmd_decrypt(args):
    pk = _read(args.pub, (PublicKeyI, PublicKeyL))
    sk = _read(args.priv, (PrivateKeyI, PrivateKeyL))
    bundle = _read(args.inp, CiphertextBundle)
    scheme = _scheme(pk)
    if bundle.scheme != scheme or not isinstance(sk, PRIVATE[scheme]):
        raise IntegrityError("key and ciphertext schemes differ")
    if sk.params != pk.params or bundle.params != pk.params:
        raise IntegrityError("key and ciphertext parameters differ")
    G = HGroup(tower(pk.params))
    payloads = [msg_decode(G, DECRYPT[scheme](sk, pk, ct)[0]) for ct in bundle.items]
    if bundle.encoding == "int":
        out = "\n".join(map(str, payloads)).encode()
        _write(args.out, out)
    else:
        try:
            data = payloads_to_bytes(payloads, capacity_bits(pk.params.q))
        except ValueError as exc:
            raise IntegrityError(str(exc)) from exc
        if args.out in (None, "-"):
            sys.stdout.buffer.write(data)
        else:
            Path(args.out).write_bytes(data)
    return OK


def cmd_attack(args):
    pk = _read(args.pub, (PublicKeyI, PublicKeyL))
    scheme = _scheme(pk)
    if args.mode == "detect":
        if pk.params.q > 5:
            raise UsageError("detect is limited to q <= 5")
        G = HGroup(tower(pk.params))
        comps = decoupled_components(pk, G.random_element(Stream(args.seed or 0, b"detect")))
        verdict = "vulnerable" if comps else "not-vulnerable"
        print(f"scheme={scheme} decoupled={','.join(comps) or '-'} verdict={verdict}")
        return OK
    if args.inp is None:
        raise UsageError("--in is required for this mode")
    bundle = _read(args.inp, CiphertextBundle)
    if bundle.scheme != scheme:
        raise UsageError("ciphertext and key schemes differ")
    G = HGroup(tower(pk.params))
    if args.mode == "sequential" and scheme != "legacy":
        raise UsageError("sequential mode targets legacy keys")
    if args.mode != "sequential" and scheme != "improved":
        raise UsageError(f"{args.mode} mode targets improved keys")
    if args.mode == "kpa" and args.plain is None:
        raise UsageError("kpa mode needs --plain")
    status = OK
    for ct in bundle.items:
        if args.mode == "sequential":
            rep = attack_legacy_sequential(pk, ct)
        elif args.mode == "kpa":
            rep = attack_improved_known_plaintext(pk, ct, msg_encode(G, args.plain))
        else:
            rep = attack_improved_joint_cover(pk, ct, args.mode.split("-")[1])
        _write(None, serialize(rep, params=pk.params))
        if not rep.success:
            print(f"attack exhausted after {rep.trials} trials", file=sys.stderr)
            status = EXHAUSTED
    return status


def cmd_selftest(args):
    results = run_selftest(args.q, seed=args.seed or 0)
    for name, ok in results:
        print(f"{'PASS' if ok else 'FAIL'} {name} q={args.q}")
    return OK if all(ok for _, ok in results) else INTEGRITY


def bench(q: int, reps: int, seed: int = 0) -> list[tuple[str, int, int, float, float]]:
    """Time keygen, encrypt and decrypt for both schemes at field size q."""
    p, n = prime_power(q)
    fp = make_params(p, n)
    G = HGroup(tower(fp))
    rng = Stream(seed, b"bench")
    rows = []
    for scheme in ("improved", "legacy"):
        t0 = time.perf_counter()
        for i in range(reps):
            pk, sk = KEYGEN[scheme](fp, seed=seed + i)
        t_key = time.perf_counter() - t0
        xs = [G.random_element(rng) for _ in range(reps)]
        t0 = time.perf_counter()
        cts = [ENCRYPT[scheme](pk, x, None, rng) for x in xs]
        t_enc = time.perf_counter() - t0
        t0 = time.perf_counter()
        for x, ct in zip(xs, cts):
            if DECRYPT[scheme](sk, pk, ct)[0] != x:
                raise IntegrityError("benchmark round-trip failed")
        t_dec = time.perf_counter() - t0
        for op, t in (("keygen", t_key), ("encrypt", t_enc), ("decrypt", t_dec)):
            rows.append((f"{scheme}.{op}", q, reps, t * 1000.0, t * 1e6 / reps))
    return rows


def cmd_bench(args):
    if args.reps < 1:
        raise UsageError("--reps must be positive")
    try:
        rows = bench(args.q, args.reps)
    except FieldError as exc:
        raise UsageError(str(exc)) from exc
    print("op,q,reps,total_ms,per_op_us")
    for op, q, reps, total, per in rows:
        print(f"{op},{q},{reps},{total:.3f},{per:.1f}")
    return OK


# ---- parser ----

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hmstool", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="cmd", required=True)

    s = sub.add_parser("params", help="write a parameter container")
    s.add_argument("--p", type=int, required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--seed", type=int)
    s.add_argument("--out")
    s.set_defaults(fn=cmd_params)

    s = sub.add_parser("keygen", help="generate a key pair")
    s.add_argument("--scheme", choices=sorted(KEYGEN), required=True)
    s.add_argument("--params", required=True)
    s.add_argument("--seed", type=int)
    s.add_argument("--out-pub", required=True)
    s.add_argument("--out-priv", required=True)
    s.add_argument("--include-test-fixtures", action="store_true")
    s.set_defaults(fn=cmd_keygen)

    s = sub.add_parser("encrypt", help="encrypt an integer or a file")
    s.add_argument("--pub", required=True)
    m = s.add_mutually_exclusive_group(required=True)
    m.add_argument("--msg", type=int)
    m.add_argument("--msg-file")
    s.add_argument("--q1", type=int)
    s.add_argument("--q2", type=int)
    s.add_argument("--seed", type=int)
    s.add_argument("--out", required=True)
    s.set_defaults(fn=cmd_encrypt)

    s = sub.add_parser("decrypt", help="decrypt a ciphertext container")
    s.add_argument("--priv", required=True)
    s.add_argument("--pub", required=True)
    s.add_argument("--in", dest="inp", required=True)
    s.add_argument("--out")
    s.set_defaults(fn=cmd_decrypt)

    s = sub.add_parser("attack", help="run a key-recovery search")
    s.add_argument("--mode", choices=["sequential", "kpa", "joint-y2", "joint-y3", "detect"], required=True)
    s.add_argument("--pub", required=True)
    s.add_argument("--in", dest="inp")
    s.add_argument("--plain", type=int)
    s.add_argument("--seed", type=int)
    s.set_defaults(fn=cmd_attack)

    s = sub.add_parser("selftest", help="exhaustive self-checks")
    s.add_argument("--q", type=int, choices=[3, 5], default=3)
    s.add_argument("--seed", type=int)
    s.set_defaults(fn=cmd_selftest)

    s = sub.add_parser("bench", help="time keygen/encrypt/decrypt")
    s.add_argument("--q", type=int, required=True)
    s.add_argument("--reps", type=int, default=10)
    s.set_defaults(fn=cmd_bench)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except UsageError as exc:
        print(f"hmstool: {exc}", file=sys.stderr)
        return USAGE
    except (IntegrityError, FormatError, FieldError) as exc:
        print(f"hmstool: {exc}", file=sys.stderr)
        return INTEGRITY


if __name__ == "__main__":
    sys.exit(main())

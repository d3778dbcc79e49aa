"""Canonical text containers for parameters, keys, ciphertexts and reports.

A container is compact JSON with a fixed key order::

    {"version":"hmst3/1","scheme":...,"kind":...,"params":{...},"payload":{...}}

Field elements use their digit wire form ("1,2"), triples join three of
those with ';'.  Equal objects always serialize to identical bytes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .fieldtower import FieldError, FieldParams, make_params, tower
from .hgroup import HGroup, Triple
from .legacy import F1_DESCRIPTOR, F2_DESCRIPTOR, CiphertextL, PrivateKeyL, PublicKeyL
from .logsig import CENTER, DERIVED, GENERAL, PLANE, Cover, LogSignature, build_signature, default_types
from .mst3h import PLACEMENT, CiphertextI, HomMap, PrivateKeyI, PublicKeyI

VERSION = "hmst3/1"


class FormatError(ValueError):
    pass


@dataclass(frozen=True)
class ParamSet:
    field: FieldParams
    plane: tuple[int, ...]
    center: tuple[int, ...]


def make_param_set(p: int, n: int, seed: int = 0) -> ParamSet:
    fp = make_params(p, n, seed)
    plane, center = default_types(tower(fp))
    return ParamSet(fp, plane, center)


@dataclass(frozen=True)
class CiphertextBundle:
    """One or more ciphertexts of a single message."""

    params: FieldParams
    scheme: str
    encoding: str  # "int" or "bytes"
    items: tuple = field(default_factory=tuple)


# ---- writing ----

def _fq_digits(F, x: int) -> str:
    return ",".join(map(str, F.digits(x)[: F.n]))


def _params_block(fp: FieldParams, plane, center) -> dict:
    F = tower(fp)
    return {
        "p": fp.p,
        "n": fp.n,
        "fq_poly": ",".join(map(str, fp.fq_poly)),
        "d": _fq_digits(F, fp.d),
        "g2_gen": F.wire(fp.g2_gen),
        "plane": list(plane),
        "center": list(center),
    }


def _blocks(G, blocks) -> list:
    return [[G.wire(e) for e in block] for block in blocks]


def _cover(G, c: Cover) -> dict:
    return {"shape": c.shape, "blocks": _blocks(G, c.blocks)}


def _sig(G, s: LogSignature) -> dict:
    return {"kind": s.kind, "perms": [list(p) for p in s.perms], "blocks": _blocks(G, s.blocks)}


def _seq(G, ts) -> list:
    return [G.wire(t) for t in ts]


def _container(scheme: str, kind: str, params: dict, payload: dict) -> bytes:
    doc = {"version": VERSION, "scheme": scheme, "kind": kind, "params": params, "payload": payload}
    return json.dumps(doc, separators=(",", ":"), ensure_ascii=True).encode()


def serialize(obj, *, include_fixtures: bool = False, params: FieldParams | None = None) -> bytes:
    """Canonical bytes for a ParamSet, key, CiphertextBundle or AttackReport."""
    if isinstance(obj, ParamSet):
        return _container("none", "params", _params_block(obj.field, obj.plane, obj.center), {})

    if isinstance(obj, (PublicKeyI, PublicKeyL)):
        G = HGroup(tower(obj.params))
        pb = _params_block(obj.params, *obj.types)
        if isinstance(obj, PublicKeyI):
            payload = {"placement": dict(PLACEMENT)}
            for name in ("a1", "a2", "h1", "h2", "g1", "g2"):
                payload[name] = _cover(G, getattr(obj, name))
            return _container("improved", "public_key", pb, payload)
        payload = {"f1": F1_DESCRIPTOR, "f2": F2_DESCRIPTOR}
        for name in ("a1", "a2", "g1", "g2"):
            payload[name] = _cover(G, getattr(obj, name))
        return _container("legacy", "public_key", pb, payload)

    if isinstance(obj, (PrivateKeyI, PrivateKeyL)):
        G = HGroup(tower(obj.params))
        pb = _params_block(obj.params, obj.sig1.radices, obj.sig2.radices)
        payload = {}
        if isinstance(obj, PrivateKeyI):
            payload["f"] = {"matrix": [list(r) for r in obj.f.matrix]}
        payload["sig1"] = _sig(G, obj.sig1)
        payload["sig2"] = _sig(G, obj.sig2)
        if isinstance(obj, PrivateKeyI):
            payload["t1"], payload["t2"] = _seq(G, obj.t1), _seq(G, obj.t2)
        payload["tau1"], payload["tau2"] = _seq(G, obj.tau1), _seq(G, obj.tau2)
        scheme = "improved" if isinstance(obj, PrivateKeyI) else "legacy"
        if scheme == "improved" and include_fixtures and obj.w1 is not None:
            payload["w1"], payload["w2"] = _cover(G, obj.w1), _cover(G, obj.w2)
        return _container(scheme, "private_key", pb, payload)

    if isinstance(obj, CiphertextBundle):
        G = HGroup(tower(obj.params))
        F = G.F
        plane, center = default_types(F)
        names = ("y1", "y2", "y3") if obj.scheme == "improved" else ("y1", "y2", "y3", "y4")
        items = [{k: G.wire(getattr(ct, k)) for k in names} for ct in obj.items]
        payload = {"encoding": obj.encoding, "items": items}
        return _container(obj.scheme, "ciphertext", _params_block(obj.params, plane, center), payload)

    from .attacks import AttackReport

    if isinstance(obj, AttackReport):
        if params is None:
            raise ValueError("reports need the field parameters")
        F = tower(params)
        plane, center = default_types(F)
        payload = {
            "scheme": obj.scheme,
            "target": obj.target,
            "q": obj.q,
            "trials": obj.trials,
            "found_Q": None if obj.found_q is None else list(obj.found_q),
            "x": None if obj.x is None else HGroup(F).wire(obj.x),
            "elapsed_ms": f"{obj.elapsed_ms:.3f}",
        }
        return _container(obj.scheme, "report", _params_block(params, plane, center), payload)

    raise TypeError(f"cannot serialize {type(obj).__name__}")


# ---- reading ----

def _need(d: dict, key: str):
    if not isinstance(d, dict) or key not in d:
        raise FormatError(f"missing field {key!r}")
    return d[key]


def _ints(s: str) -> tuple[int, ...]:
    try:
        return tuple(int(t) for t in s.split(","))
    except (AttributeError, ValueError) as exc:
        raise FormatError(f"bad digit list {s!r}") from exc


def _read_params(pb: dict) -> ParamSet:
    try:
        p, n = int(_need(pb, "p")), int(_need(pb, "n"))
        poly = _ints(_need(pb, "fq_poly"))
        d_digits = _ints(_need(pb, "d"))
        if len(d_digits) != n:
            raise FormatError("d must have n digits")
        d = sum(c * p**i for i, c in enumerate(d_digits))
        g_digits = _ints(_need(pb, "g2_gen"))
        if len(g_digits) != 2 * n or any(not 0 <= c < p for c in g_digits + d_digits):
            raise FormatError("bad g2_gen")
        gen = sum(c * p**i for i, c in enumerate(g_digits))
        fp = FieldParams(p, n, poly, d, gen)
        tower(fp)  # validates irreducibility, non-residue, generator
    except FieldError as exc:
        raise FormatError(str(exc)) from exc
    return ParamSet(fp, tuple(_need(pb, "plane")), tuple(_need(pb, "center")))


def _read_triple(G, s) -> Triple:
    try:
        return G.parse_wire(s)
    except (FieldError, AttributeError) as exc:
        raise FormatError(str(exc)) from exc


def _read_blocks(G, blocks, radices) -> tuple:
    if not isinstance(blocks, list) or [len(b) for b in blocks] != list(radices):
        raise FormatError("cover blocks do not match the type vector")
    return tuple(tuple(_read_triple(G, e) for e in b) for b in blocks)


def _read_cover(G, d, radices, expect: str | None = None) -> Cover:
    shape = _need(d, "shape")
    if expect is not None and shape != expect:
        raise FormatError(f"cover shape {shape!r}, expected {expect!r}")
    blocks = _read_blocks(G, _need(d, "blocks"), radices)
    if shape == GENERAL:
        for block in blocks:
            for e in block:
                if not G.is_hermitian(e):
                    raise FormatError(f"cover entry {G.wire(e)} is not in H(P_inf)")
    return Cover(shape, tuple(radices), blocks)


def _read_sig(G, d, radices, kind) -> LogSignature:
    if _need(d, "kind") != kind:
        raise FormatError("signature kind mismatch")
    blocks = _read_blocks(G, _need(d, "blocks"), radices)
    F = G.F
    for block in blocks:
        for e in block:
            if e.a != 1 or (kind == CENTER and (e.b != 0 or not F.is_trace_zero(e.g))):
                raise FormatError(f"signature entry {G.wire(e)} is not a {kind} element")
            if kind == PLANE and not G.is_hermitian(e):
                raise FormatError(f"signature entry {G.wire(e)} is not in H(P_inf)")
    try:
        sig = build_signature(G, kind, radices, [tuple(p) for p in _need(d, "perms")])
    except (ValueError, TypeError) as exc:
        raise FormatError(str(exc)) from exc
    if sig.blocks != blocks:
        raise FormatError("signature entries disagree with their permutations")
    return sig


def deserialize(data: bytes):
    """Inverse of ``serialize``; validates structure and group membership."""
    try:
        doc = json.loads(data)
    except (ValueError, UnicodeDecodeError) as exc:
        raise FormatError(f"not a container: {exc}") from exc
    if not isinstance(doc, dict):
        raise FormatError("not a container")
    if doc.get("version") != VERSION:
        raise FormatError(f"unsupported version {doc.get('version')!r}")
    scheme, kind = _need(doc, "scheme"), _need(doc, "kind")
    ps = _read_params(_need(doc, "params"))
    fp = ps.field
    G = HGroup(tower(fp))
    payload = _need(doc, "payload")
    plane, center = ps.plane, ps.center

    if kind == "params":
        return ps

    try:
        if kind == "public_key":
            if scheme == "improved":
                if _need(payload, "placement") != PLACEMENT:
                    raise FormatError("unsupported operation placement")
                a1 = _read_cover(G, _need(payload, "a1"), plane, GENERAL)
                a2 = _read_cover(G, _need(payload, "a2"), center, GENERAL)
                rest = [_read_cover(G, _need(payload, k), t, DERIVED)
                        for k, t in (("h1", plane), ("h2", center), ("g1", plane), ("g2", center))]
                return PublicKeyI(fp, a1, a2, *rest)
            if scheme == "legacy":
                if (_need(payload, "f1"), _need(payload, "f2")) != (F1_DESCRIPTOR, F2_DESCRIPTOR):
                    raise FormatError("unknown public maps")
                a1 = _read_cover(G, _need(payload, "a1"), plane, GENERAL)
                a2 = _read_cover(G, _need(payload, "a2"), center, GENERAL)
                g1 = _read_cover(G, _need(payload, "g1"), plane, DERIVED)
                g2 = _read_cover(G, _need(payload, "g2"), center, DERIVED)
                return PublicKeyL(fp, a1, a2, g1, g2)

        if kind == "private_key":
            sig1 = _read_sig(G, _need(payload, "sig1"), plane, PLANE)
            sig2 = _read_sig(G, _need(payload, "sig2"), center, CENTER)
            seq = lambda k: tuple(_read_triple(G, s) for s in _need(payload, k))  # noqa: E731
            if scheme == "improved":
                m = _need(_need(payload, "f"), "matrix")
                f = HomMap(fp.p, tuple(tuple(int(v) for v in row) for row in m))
                if len(f.matrix) != 2 * fp.n or any(len(r) != 2 * fp.n or any(not 0 <= v < fp.p for v in r) for r in f.matrix):
                    raise FormatError("bad cover map matrix")
                w1 = w2 = None
                if "w1" in payload:
                    w1 = _read_cover(G, payload["w1"], plane, "unit_a")
                    w2 = _read_cover(G, _need(payload, "w2"), center, "unit_a")
                return PrivateKeyI(fp, f, sig1, sig2, seq("t1"), seq("t2"), seq("tau1"), seq("tau2"), w1, w2)
            if scheme == "legacy":
                return PrivateKeyL(fp, sig1, sig2, seq("tau1"), seq("tau2"))

        if kind == "ciphertext":
            encoding = _need(payload, "encoding")
            if encoding not in ("int", "bytes"):
                raise FormatError(f"unknown encoding {encoding!r}")
            cls, names = (CiphertextI, ("y1", "y2", "y3")) if scheme == "improved" else (CiphertextL, ("y1", "y2", "y3", "y4"))
            if scheme not in ("improved", "legacy"):
                raise FormatError(f"unknown scheme {scheme!r}")
            items = []
            for item in _need(payload, "items"):
                if set(item) != set(names):
                    raise FormatError("ciphertext fields do not match the scheme")
                ct = cls(*(_read_triple(G, item[k]) for k in names))
                if not G.is_hermitian(ct.y1):
                    raise FormatError("y1 is not in H(P_inf)")
                items.append(ct)
            return CiphertextBundle(fp, scheme, encoding, tuple(items))

        if kind == "report":
            return dict(payload)
    except ValueError as exc:
        if isinstance(exc, FormatError):
            raise
        raise FormatError(str(exc)) from exc

    raise FormatError(f"unknown container kind {kind!r} for scheme {scheme!r}")

"""Integer and byte payloads <-> group elements."""

from __future__ import annotations

from .hgroup import HGroup, Triple


def payload_space(q: int) -> int:
    return (q * q - 1) * q * q * q


def capacity_bits(q: int) -> int:
    return payload_space(q).bit_length() - 1


def msg_encode(G: HGroup, payload: int) -> Triple:
    """payload -> canonical(gen^(1+i_a), element i_b, scalar i_u), radices (q^2-1, q^2, q)."""
    F = G.F
    if not 0 <= payload < payload_space(F.q):
        raise ValueError(f"payload {payload} out of range")
    i_a, rest = payload % F.order, payload // F.order
    i_b, i_u = rest % F.size, rest // F.size
    return G.canonical(F.gen_pow(1 + i_a), i_b, i_u)


def msg_decode(G: HGroup, x: Triple) -> int:
    F = G.F
    a, b, u = G.split(x)
    i_a = (F.log(a) - 1) % F.order
    return i_a + F.order * (b + F.size * u)


def bytes_to_payloads(data: bytes, bits: int) -> list[int]:
    """16-bit big-endian length header, then the bytes, cut into bits-sized chunks."""
    if len(data) > 0xFFFF:
        raise ValueError("message longer than 65535 bytes")
    stream = len(data).to_bytes(2, "big") + data
    total = len(stream) * 8
    value = int.from_bytes(stream, "big")
    nchunks = -(-total // bits)
    value <<= nchunks * bits - total
    mask = (1 << bits) - 1
    return [(value >> (bits * (nchunks - 1 - i))) & mask for i in range(nchunks)]


def payloads_to_bytes(chunks: list[int], bits: int) -> bytes:
    value = 0
    for c in chunks:
        if not 0 <= c < 1 << bits:
            raise ValueError("chunk does not fit the element capacity")
        value = (value << bits) | c
    total = len(chunks) * bits
    if total < 16:
        raise ValueError("missing length header")
    nbytes = total // 8
    raw = (value >> (total - nbytes * 8)).to_bytes(nbytes, "big")
    length = int.from_bytes(raw[:2], "big")
    if len(raw) < 2 + length:
        raise ValueError("truncated byte payload")
    return raw[2 : 2 + length]

"""Deterministic splitmix64 streams keyed by (seed, label).

Every random choice in key generation and encryption goes through one of
these streams, so a seed fully determines keys, covers and ciphertexts.
"""

import hashlib

MASK64 = (1 << 64) - 1


def _label_word(label: bytes) -> int:
    return int.from_bytes(hashlib.sha256(label).digest()[:8], "little")


class Stream:
    """splitmix64 generator; initial state is seed XOR sha256(label)[:8]."""

    def __init__(self, seed: int, label: bytes = b""):
        if isinstance(label, str):
            label = label.encode()
        self.seed = seed & MASK64
        self.label = label
        self.state = (self.seed ^ _label_word(label)) & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def below(self, m: int) -> int:
        # plain reduction; the bias is < m / 2**64 and is part of the format
        if m <= 0:
            raise ValueError("range must be positive")
        return self.next_u64() % m

    def digits(self, p: int, k: int) -> list[int]:
        """k base-p digits, one 64-bit word per digit."""
        return [self.next_u64() % p for _ in range(k)]

    def permutation(self, r: int) -> tuple[int, ...]:
        perm = list(range(r))
        for i in range(r - 1, 0, -1):
            j = self.below(i + 1)
            perm[i], perm[j] = perm[j], perm[i]
        return tuple(perm)

    def fork(self, label: bytes) -> "Stream":
        return Stream(self.seed, self.label + b"/" + label)


def rng_stream(seed: int, label: bytes = b"") -> Stream:
    return Stream(seed, label)

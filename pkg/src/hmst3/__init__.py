"""MST3-style encryption over the Hermitian automorphism group H(P_inf)."""

from .fieldtower import FieldParams, make_params, tower
from .hgroup import HGroup, Triple
from .legacy import decrypt_legacy, encrypt_legacy, keygen_legacy
from .mst3h import decrypt_improved, encrypt_improved, keygen_improved

__all__ = [
    "FieldParams", "HGroup", "Triple", "make_params", "tower",
    "keygen_improved", "encrypt_improved", "decrypt_improved",
    "keygen_legacy", "encrypt_legacy", "decrypt_legacy",
]

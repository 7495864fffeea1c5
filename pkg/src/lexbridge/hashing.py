"""MurmurHash3 x86 32-bit, used to map canonical n-grams to hash slots.

Pure Python; bit-exact with the reference algorithm. Slot assignment is
the unsigned 32-bit hash of the UTF-8 canonical phrase reduced modulo
the slot count.
"""

from functools import lru_cache

_C1 = 0xCC9E2D51
_C2 = 0x1B873593
_MASK = 0xFFFFFFFF


def murmur3_32(data: bytes, seed: int = 0) -> int:
    h = seed & _MASK
    length = len(data)
    rounded = length & ~3

    for i in range(0, rounded, 4):
        k = int.from_bytes(data[i : i + 4], "little")
        k = (k * _C1) & _MASK
        k = ((k << 15) | (k >> 17)) & _MASK
        k = (k * _C2) & _MASK
        h ^= k
        h = ((h << 13) | (h >> 19)) & _MASK
        h = (h * 5 + 0xE6546B64) & _MASK

    k = 0
    tail = length & 3
    if tail == 3:
        k ^= data[rounded + 2] << 16
    if tail >= 2:
        k ^= data[rounded + 1] << 8
    if tail >= 1:
        k ^= data[rounded]
        k = (k * _C1) & _MASK
        k = ((k << 15) | (k >> 17)) & _MASK
        k = (k * _C2) & _MASK
        h ^= k

    h ^= length
    h ^= h >> 16
    h = (h * 0x85EBCA6B) & _MASK
    h ^= h >> 13
    h = (h * 0xC2B2AE35) & _MASK
    h ^= h >> 16
    return h


@lru_cache(maxsize=1 << 20)
def phrase_hash(canonical: str) -> int:
    """Unsigned 32-bit hash of a canonical n-gram string."""
    return murmur3_32(canonical.encode("utf-8"))


def phrase_slot(canonical: str, slot_count: int) -> int:
    return phrase_hash(canonical) % slot_count

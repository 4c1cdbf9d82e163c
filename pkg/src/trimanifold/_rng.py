import random
from hashlib import blake2b


def derive_rng(seed, *keys) -> random.Random:
    """Independent ``random.Random`` substream for ``(seed, *keys)``.

    Passing an existing ``Random`` returns it unchanged, so callers can share
    one stream when they want to.
    """
    if isinstance(seed, random.Random):
        return seed
    h = blake2b(digest_size=16)
    h.update(repr(int(seed)).encode())
    for k in keys:
        h.update(b"\x1f")
        h.update(str(k).encode())
    return random.Random(int.from_bytes(h.digest(), "big"))


def derive_seed(seed, *keys) -> int:
    """Integer seed for ``(seed, *keys)``; stable across runs and platforms."""
    return derive_rng(seed, *keys).getrandbits(63)

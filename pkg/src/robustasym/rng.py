"""Named, reproducible random substreams.

Every consumer of randomness asks for a stream by ``(seed, tag, index)``.
The triple is hashed with BLAKE2b into a 128-bit Philox key, so streams are
independent of one another and of the order in which they are requested.
Bit-equality with other Philox users is not a goal; self-consistency is.
"""

import hashlib

import numpy as np

MASK64 = (1 << 64) - 1


def _digest(seed, tag, index, size):
    text = f"{int(seed)}\x1f{tag}\x1f{int(index)}".encode()
    return hashlib.blake2b(text, digest_size=size, person=b"robustasym").digest()


def derive_seed(seed, tag, index=0):
    """Return a 64-bit child seed for ``(seed, tag, index)``."""
    return int.from_bytes(_digest(seed, tag, index, 8), "little")


def make_rng(seed, tag, index=0):
    """Return a ``numpy.random.Generator`` on the named Philox substream."""
    raw = _digest(seed, tag, index, 16)
    key = np.frombuffer(raw, dtype="<u8").astype(np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


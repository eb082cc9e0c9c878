"""Counter-based splittable random number generator (pure-Python reference).

Draw ``i`` of stream ``(base_seed, replicate)`` is a pure function of the
stream key and the counter, so any draw is randomly accessible, streams never
share state, and parallel scheduling cannot perturb results.  The compiled
kernels in ``_kernels`` implement the same arithmetic on ``uint64``; the two
must agree bit-for-bit (enforced by tests).

Layout: ``key = mix64(mix64(base_seed + GOLDEN) ^ (replicate*MIX_B + GOLDEN))``
and ``u_i = (mix64(key + (i+1)*GOLDEN) >> 11) * 2**-53`` in [0, 1).
"""

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
MIX_A = 0xBF58476D1CE4E5B9
MIX_B = 0x94D049BB133111EB
_INV53 = 1.0 / (1 << 53)


def mix64(z: int) -> int:
    """64-bit finalizer (splitmix64 avalanche)."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * MIX_A) & MASK64
    z = ((z ^ (z >> 27)) * MIX_B) & MASK64
    return z ^ (z >> 31)


def stream_key(base_seed: int, replicate: int) -> int:
    """Derive the 64-bit key of stream (base_seed, replicate)."""
    k = mix64((base_seed + GOLDEN) & MASK64)
    return mix64(k ^ ((replicate * MIX_B + GOLDEN) & MASK64))


def u01(key: int, counter: int) -> float:
    """Uniform double in [0, 1) for draw `counter` of the stream `key`."""
    z = mix64((key + ((counter + 1) * GOLDEN)) & MASK64)
    return (z >> 11) * _INV53

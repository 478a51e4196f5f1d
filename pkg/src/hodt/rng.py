"""Deterministic counter-based random numbers (splitmix64).

Every source of randomness in the toolkit (corpus generation, training
shuffles) goes through this module so that runs are reproducible bit for
bit across platforms and Python versions.  The generator is the classic
splitmix64 sequence: output i is ``mix64(seed + (i + 1) * GAMMA)``, a pure
function of (seed, i).  Python's `random` module is deliberately not used:
its state machine is version-dependent and str hashing is salted.
"""

MASK64 = (1 << 64) - 1
GAMMA = 0x9E3779B97F4A7C15


def mix64(x):
    """Finalizer of splitmix64; bijective scramble of a 64-bit value."""
    x &= MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & MASK64
    return x ^ (x >> 31)


class Rng:
    """Stream of pseudo-random values addressed by (seed, stream).

    Separate streams are independent: stream k is seeded with
    mix64(seed + k * GAMMA) so per-sentence / per-tree generators can be
    built without sharing state.
    """

    def __init__(self, seed, stream=0):
        self._base = mix64((seed & MASK64) + (stream & MASK64) * GAMMA)
        self._n = 0

    def next_u64(self):
        self._n += 1
        return mix64(self._base + self._n * GAMMA)

    def below(self, n):
        """Uniform integer in [0, n).  Modulo bias is irrelevant here: n is
        always tiny compared to 2^64."""
        if n <= 0:
            raise ValueError('below() needs a positive bound')
        return self.next_u64() % n

    def uniform(self):
        """Uniform float in [0, 1)."""
        return self.next_u64() / 2.0**64

    def chance(self, p):
        return self.uniform() < p

    def choice(self, seq):
        return seq[self.below(len(seq))]

    def shuffle(self, items):
        """In-place Fisher-Yates shuffle."""
        for i in range(len(items) - 1, 0, -1):
            j = self.below(i + 1)
            items[i], items[j] = items[j], items[i]

"""SplitMix64, the seeding generator from Steele, Lea & Flood (2014).

Written out so campaign reports reproduce bit-for-bit from a seed in any
language. Constants:

    state += 0x9E3779B97F4A7C15
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB
    out = z ^ (z >> 31)

all modulo 2**64. Doubles take the top 53 bits: ``(out >> 11) * 2**-53``.
"""

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15


class SplitMix64:
    __slots__ = ("state",)

    def __init__(self, seed):
        self.state = int(seed) & MASK64

    def next_u64(self):
        self.state = (self.state + GOLDEN_GAMMA) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def random(self):
        """Uniform double in [0, 1)."""
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def uniform(self, lo, hi):
        return lo + (hi - lo) * self.random()

    def symmetric(self):
        """Uniform double in [-1, 1)."""
        return 2.0 * self.random() - 1.0

    def below(self, n):
        """Integer in ``[0, n)`` by multiply-shift (tiny bias, fully portable)."""
        if n <= 0:
            raise ValueError("n must be positive")
        return (self.next_u64() * n) >> 64

    def sign(self):
        return 1.0 if self.next_u64() >> 63 else -1.0

    def split(self):
        """An independent generator seeded from this one's next output."""
        return SplitMix64(self.next_u64())

"""Seedable 64-bit random generator used everywhere randomness is needed.

The generator is splitmix64 (Steele, Lea & Flood's SplittableRandom mixer).
It is implemented with pure integer arithmetic so that row shuffles,
bootstrap resamples and synthetic data are bit-identical across platforms
and Python versions, which stdlib random does not promise for shuffle().
"""

_MASK = (1 << 64) - 1


class SplitMix64:
    def __init__(self, seed: int):
        self._state = seed & _MASK

    def next_u64(self) -> int:
        self._state = (self._state + 0x9E3779B97F4A7C15) & _MASK
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)

    def random(self) -> float:
        """Uniform float in [0, 1) with 53 bits of precision."""
        return (self.next_u64() >> 11) / float(1 << 53)

    def randbelow(self, n: int) -> int:
        """Unbiased integer in [0, n) via rejection sampling."""
        if n <= 0:
            raise ValueError("n must be positive")
        limit = (_MASK + 1) - ((_MASK + 1) % n)
        while True:
            r = self.next_u64()
            if r < limit:
                return r % n

    def randint(self, low: int, high: int) -> int:
        """Integer in [low, high], both ends inclusive."""
        return low + self.randbelow(high - low + 1)

    def uniform(self, low: float, high: float) -> float:
        return low + (high - low) * self.random()

    def gauss(self, mu: float = 0.0, sigma: float = 1.0) -> float:
        # Irwin-Hall sum of 12 uniforms: mean 6, variance 1. Avoids libm
        # (log/cos) so the stream stays bit-stable across platforms.
        s = sum(self.random() for _ in range(12)) - 6.0
        return mu + sigma * s

    def shuffle(self, items: list) -> None:
        """In-place Fisher-Yates shuffle."""
        for i in range(len(items) - 1, 0, -1):
            j = self.randbelow(i + 1)
            items[i], items[j] = items[j], items[i]

    def choice(self, items):
        return items[self.randbelow(len(items))]

    def sample_indices(self, n: int, k: int) -> list:
        """k distinct indices drawn from range(n), returned sorted."""
        if not 0 <= k <= n:
            raise ValueError("k out of range")
        pool = list(range(n))
        picked = []
        for i in range(k):
            j = i + self.randbelow(n - i)
            pool[i], pool[j] = pool[j], pool[i]
            picked.append(pool[i])
        picked.sort()
        return picked

    def weighted_choice(self, items, weights):
        total = sum(weights)
        x = self.random() * total
        acc = 0.0
        for item, w in zip(items, weights):
            acc += w
            if x < acc:
                return item
        return items[-1]

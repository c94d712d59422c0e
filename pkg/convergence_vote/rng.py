"""Seeded Lehmer random number generator for reproducible simulation."""

# Park-Miller "MINSTD" constants, do not change
MODULUS = 2147483647
MULTIPLIER = 48271

_CHUNK_BITS = 30


class LehmerRandom:
    """Lehmer generator x <- 48271 * x mod (2^31 - 1), integer arithmetic only.

    The output stream depends only on the seed, so simulations replay
    identically on every platform.
    """

    def __init__(self, seed: int):
        self._seed = seed
        state = seed % (MODULUS - 1) + 1
        self._state = state

    @property
    def seed(self) -> int:
        return self._seed

    def next_raw(self) -> int:
        """Next state, uniform on 1 .. MODULUS - 1."""
        self._state = (MULTIPLIER * self._state) % MODULUS
        return self._state

    def _small_below(self, n: int) -> int:
        span = MODULUS - 1
        limit = span - span % n
        while True:
            value = self.next_raw() - 1
            if value < limit:
                return value % n

    def randbelow(self, n: int) -> int:
        """Uniform integer in [0, n) by rejection sampling."""
        if n <= 0:
            raise ValueError("randbelow needs a positive bound")
        if n <= MODULUS - 1:
            return self._small_below(n)

        bits = n.bit_length()
        chunks = -(-bits // _CHUNK_BITS)
        while True:
            value = 0
            for _ in range(chunks):
                value = (value << _CHUNK_BITS) | self._small_below(1 << _CHUNK_BITS)
            value >>= chunks * _CHUNK_BITS - bits
            if value < n:
                return value

    def fork(self) -> 'LehmerRandom':
        """Child generator with a derived seed for sub-tasks."""
        return LehmerRandom(self.next_raw())

"""Counter-based deterministic sampling streams and Wilson intervals.

Monte Carlo reproducibility contract: every random draw is a pure function
of (seed, sample_index, counter), so partitioning a sample budget across
any number of workers merges to byte-identical results.  The generator is
a splitmix64-style finalizer chain -- not cryptographic, but plenty for
Monte Carlo and stable across platforms/versions (pure integer ops).
"""

from __future__ import annotations

from statistics import NormalDist

_M64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_SEED_TAG = 0xD6E8FEB86659FD93

# 99% two-sided normal quantile, fixed once for Wilson intervals.
Z99 = NormalDist().inv_cdf(0.995)


def _mix(z: int) -> int:
    z &= _M64
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9 & _M64
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB & _M64
    return z ^ (z >> 31)


def stream_base(seed: int, sample_index: int) -> int:
    """Per-(seed, sample) base state; cheap to derive per counter word."""
    return _mix(_mix((seed & _M64) ^ _SEED_TAG) ^ (sample_index * _GOLDEN & _M64))


def stream_word(base: int, counter: int) -> int:
    """counter-th 64-bit word of the stream with the given base state."""
    return _mix(base ^ (counter * 0xC2B2AE3D27D4EB4F & _M64))


class StreamRng:
    """Sequential convenience wrapper over the counter-based stream."""

    def __init__(self, seed: int, sample_index: int):
        self._base = stream_base(seed, sample_index)
        self._ctr = 0

    def word(self) -> int:
        w = stream_word(self._base, self._ctr)
        self._ctr += 1
        return w

    def below(self, n: int) -> int:
        """Uniform int in [0, n) (multiply-shift; bias < n/2^64)."""
        return (self.word() * n) >> 64

    def uniform(self) -> float:
        return self.word() / 2.0**64


def retention_mask(seed: int, sample_index: int, m: int, p_num: int, p_den: int) -> int:
    """Vertex-retention sample: keep vertex v iff U_v < p, as an m-bit mask.

    The comparison U < p is done in exact integers (64-bit uniform numerator
    against the rational p), so p = 0 and p = 1 are exact and every worker
    computes the identical mask for the same (seed, sample_index).
    """
    base = stream_base(seed, sample_index)
    threshold = p_num << 64
    mask = 0
    for v in range(m):
        if stream_word(base, v) * p_den < threshold:
            mask |= 1 << v
    return mask


def wilson_interval(successes: int, trials: int, z: float = Z99) -> tuple[float, float]:
    """Two-sided Wilson score interval for a binomial proportion."""
    if trials <= 0:
        return (0.0, 1.0)
    phat = successes / trials
    z2 = z * z
    denom = 1.0 + z2 / trials
    center = (phat + z2 / (2 * trials)) / denom
    half = z * ((phat * (1 - phat) / trials + z2 / (4 * trials * trials)) ** 0.5) / denom
    lo = max(0.0, center - half)
    hi = min(1.0, center + half)
    return (lo, hi)

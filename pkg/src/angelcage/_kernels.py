"""Compiled walk kernels.

Every trial owns a xoshiro256** stream whose state is derived by splitmix64
hashing of (master_seed, trial_index), so a trial's walk does not depend on
which thread runs it or in which order.  Moves are drawn with Lemire's
multiply-shift range reduction plus rejection, which is exactly uniform.
"""

import numba as nb
import numpy as np

U64 = np.uint64
_MASK32 = U64(0xFFFFFFFF)
_TWO32 = U64(0x100000000)


@nb.njit(inline="always")
def _rotl(x, k):
    return (x << U64(k)) | (x >> U64(64 - k))


@nb.njit(inline="always")
def splitmix64(x):
    z = x + U64(0x9E3779B97F4A7C15)
    z = (z ^ (z >> U64(30))) * U64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> U64(27))) * U64(0x94D049BB133111EB)
    return z ^ (z >> U64(31))


@nb.njit(inline="always")
def trial_state(master_seed, trial_index):
    key = splitmix64(splitmix64(U64(master_seed)) ^ U64(trial_index))
    s0 = splitmix64(key)
    s1 = splitmix64(s0)
    s2 = splitmix64(s1)
    s3 = splitmix64(s2)
    return s0, s1, s2, s3


@nb.njit(nogil=True, cache=True)
def xoshiro_outputs(master_seed, trial_index, count):
    """Raw 64-bit outputs of a trial's stream; used to pin the generator in tests."""
    s0, s1, s2, s3 = trial_state(master_seed, trial_index)
    out = np.empty(count, dtype=np.uint64)
    for i in range(count):
        out[i] = _rotl(s1 * U64(5), 7) * U64(9)
        t = s1 << U64(17)
        s2 ^= s0
        s3 ^= s1
        s1 ^= s2
        s0 ^= s3
        s2 ^= t
        s3 = _rotl(s3, 45)
    return out


@nb.njit(nogil=True, cache=True)
def _walk(n, c, turns, master_seed, trial_index, pos, trace, record):
    """Run one walk in place; returns the largest squared norm visited."""
    s0, s1, s2, s3 = trial_state(master_seed, trial_index)
    width = U64(2 * c + 1)
    reject_below = (_TWO32 - width) % width
    for d in range(n):
        pos[d] = 0
        if record:
            trace[0, d] = 0
    max_norm2 = 0
    for step in range(turns):
        norm2 = 0
        for d in range(n):
            while True:
                out = _rotl(s1 * U64(5), 7) * U64(9)
                t = s1 << U64(17)
                s2 ^= s0
                s3 ^= s1
                s1 ^= s2
                s0 ^= s3
                s2 ^= t
                s3 = _rotl(s3, 45)
                m = (out >> U64(32)) * width
                if (m & _MASK32) >= reject_below:
                    break
            p = pos[d] + (np.int64(m >> U64(32)) - c)
            pos[d] = p
            norm2 += p * p
            if record:
                trace[step + 1, d] = p
        if norm2 > max_norm2:
            max_norm2 = norm2
    return max_norm2


@nb.njit(nogil=True, cache=True)
def walk_batch(n, c, turns, master_seed, start, final, max_norm2):
    """Walk trials start .. start + len(final) - 1, writing end points and peaks."""
    pos = np.zeros(n, dtype=np.int64)
    dummy = np.zeros((1, n), dtype=np.int64)
    for i in range(final.shape[0]):
        max_norm2[i] = _walk(n, c, turns, master_seed, start + i, pos, dummy, False)
        for d in range(n):
            final[i, d] = pos[d]


@nb.njit(nogil=True, cache=True)
def walk_trace(n, c, turns, master_seed, trial_index):
    pos = np.zeros(n, dtype=np.int64)
    trace = np.empty((turns + 1, n), dtype=np.int64)
    _walk(n, c, turns, master_seed, trial_index, pos, trace, True)
    return trace


@nb.njit(nogil=True, cache=True)
def distance_sums(n, c, steps, master_seed, start, count):
    """Sum over trials of the Euclidean distance after each step (entry 0 is 0)."""
    pos = np.zeros(n, dtype=np.int64)
    trace = np.empty((steps + 1, n), dtype=np.int64)
    sums = np.zeros(steps + 1, dtype=np.float64)
    for i in range(count):
        _walk(n, c, steps, master_seed, start + i, pos, trace, True)
        for t in range(1, steps + 1):
            s = 0
            for d in range(n):
                s += trace[t, d] * trace[t, d]
            sums[t] += np.sqrt(np.float64(s))
    return sums

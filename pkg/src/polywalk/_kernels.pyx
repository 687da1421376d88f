# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled simulation kernels.

Bit-for-bit equivalent to ``polywalk._kernels_py``: identical substream
construction (SplitMix64 finalizer over a golden-ratio counter), identical
draw consumption (one uniform per step, in order), identical outcome
encoding.  The pure-Python module is the readable reference; this one just
makes a million trajectories cheap.  All loops run without the GIL so
worker threads scale.
"""

from libc.stdint cimport int8_t, int64_t, uint64_t
from libc.stdlib cimport free, malloc

cdef uint64_t GOLDEN = 0x9E3779B97F4A7C15UL
cdef double UNIT = 1.0 / 9007199254740992.0  # 2**-53


cdef inline uint64_t mix64(uint64_t z) noexcept nogil:
    z ^= z >> 30
    z *= 0xBF58476D1CE4E5B9UL
    z ^= z >> 27
    z *= 0x94D049BB133111EBUL
    z ^= z >> 31
    return z


cdef inline uint64_t stream_base(uint64_t seed, uint64_t trial) noexcept nogil:
    return mix64(seed ^ mix64(trial + 1))


cdef inline double next_uniform(uint64_t* state) noexcept nogil:
    state[0] += GOLDEN
    return <double>(mix64(state[0]) >> 11) * UNIT


def ruin_fill(int64_t start, int64_t target, double p, uint64_t seed,
              int64_t lo, int64_t hi, int64_t max_steps,
              int64_t[::1] duration, int8_t[::1] won,
              int8_t[::1] first_win, int8_t[::1] truncated):
    """Simulate ruin trials ``lo..hi-1``, writing outcomes at their indices."""
    cdef int64_t t, pos, step
    cdef uint64_t state
    cdef int8_t first
    with nogil:
        for t in range(lo, hi):
            if start == 0 or start == target:
                duration[t] = 0
                won[t] = 1 if start == target else 0
                first_win[t] = 0
                truncated[t] = 0
                continue
            state = stream_base(seed, <uint64_t>t)
            pos = start
            first = 0
            step = 0
            while step < max_steps:
                step += 1
                if next_uniform(&state) < p:
                    pos += 1
                    if step == 1:
                        first = 1
                else:
                    pos -= 1
                if pos == 0 or pos == target:
                    break
            if pos == 0 or pos == target:
                duration[t] = step
                won[t] = 1 if pos == target else 0
                first_win[t] = first
                truncated[t] = 0
            else:
                duration[t] = max_steps
                won[t] = 0
                first_win[t] = first
                truncated[t] = 1


def polygon_fill(int64_t m, double p, uint64_t seed,
                 int64_t lo, int64_t hi, int64_t max_steps,
                 int64_t[::1] cover_time, int64_t[::1] last_vertex,
                 int64_t[::1] return_time, int8_t[::1] covered_first,
                 int8_t[::1] truncated):
    """Simulate polygon trials ``lo..hi-1``, writing outcomes at their indices."""
    cdef int64_t n = m + 1
    cdef int64_t t, pos, step, seen_count, cov_step, cov_vertex, first_return, ret_step, v
    cdef uint64_t state
    cdef int8_t* seen = <int8_t*> malloc(n * sizeof(int8_t))
    if seen == NULL:
        raise MemoryError()
    try:
        with nogil:
            for t in range(lo, hi):
                state = stream_base(seed, <uint64_t>t)
                for v in range(n):
                    seen[v] = 0
                seen[0] = 1
                seen_count = 1
                pos = 0
                cov_step = -1
                cov_vertex = -1
                first_return = -1
                ret_step = -1
                step = 0
                while step < max_steps:
                    step += 1
                    if next_uniform(&state) < p:
                        pos = pos + 1 if pos < m else 0
                    else:
                        pos = pos - 1 if pos > 0 else m
                    if cov_step < 0:
                        if pos == 0 and first_return < 0:
                            first_return = step
                        if seen[pos] == 0:
                            seen[pos] = 1
                            seen_count += 1
                            if seen_count == n:
                                cov_step = step
                                cov_vertex = pos
                    elif pos == 0:
                        ret_step = step
                        break
                if ret_step >= 0:
                    cover_time[t] = cov_step
                    last_vertex[t] = cov_vertex
                    return_time[t] = ret_step - cov_step
                    covered_first[t] = 1 if (first_return < 0 or first_return > cov_step) else 0
                    truncated[t] = 0
                else:
                    cover_time[t] = -1
                    last_vertex[t] = 0
                    return_time[t] = -1
                    covered_first[t] = 0
                    truncated[t] = 1
    finally:
        free(seen)


def occupancy_fill(int64_t m, double p, uint64_t seed, int64_t steps, int64_t[::1] counts):
    """Count entries into each vertex over one long walk (substream of trial 0)."""
    cdef int64_t pos = 0, step
    cdef uint64_t state = stream_base(seed, 0)
    with nogil:
        for step in range(steps):
            if next_uniform(&state) < p:
                pos = pos + 1 if pos < m else 0
            else:
                pos = pos - 1 if pos > 0 else m
            counts[pos] += 1

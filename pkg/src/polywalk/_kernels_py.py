"""Pure-Python simulation kernels (fallback when the extension is absent).

Same trajectory law and same outcome arrays as ``polywalk._kernels``:
one uniform draw per step, consumed in order from the trial's substream.
Draws are generated in vectorized blocks for speed; surplus draws at the
end of a finished trajectory are simply never used, which cannot change
the outcome because every trial owns its own substream.
"""

from __future__ import annotations

import numpy as np

from ._rng import stream_base, uniform_block

_RUIN_BLOCK = 128
_POLY_BLOCK = 64
_OCC_BLOCK = 1 << 16
_MAX_BLOCK = 1 << 14


def ruin_fill(start, target, p, seed, lo, hi, max_steps, duration, won, first_win, truncated):
    """Simulate ruin trials ``lo..hi-1``, writing outcomes at their indices."""
    for t in range(lo, hi):
        if start == 0 or start == target:
            duration[t] = 0
            won[t] = 1 if start == target else 0
            first_win[t] = 0
            truncated[t] = 0
            continue
        base = stream_base(seed, t)
        pos = start
        drawn = 0
        first = 0
        block = _RUIN_BLOCK
        done = False
        while drawn < max_steps:
            count = min(block, max_steps - drawn)
            u = uniform_block(base, drawn, count)
            path = pos + np.cumsum(np.where(u < p, 1, -1))
            if drawn == 0:
                first = 1 if u[0] < p else 0
            hit = (path <= 0) | (path >= target)
            k = int(np.argmax(hit))
            if hit[k]:
                duration[t] = drawn + k + 1
                won[t] = 1 if path[k] >= target else 0
                first_win[t] = first
                truncated[t] = 0
                done = True
                break
            pos = int(path[-1])
            drawn += count
            block = min(block * 2, _MAX_BLOCK)
        if not done:
            duration[t] = max_steps
            won[t] = 0
            first_win[t] = first
            truncated[t] = 1


def polygon_fill(m, p, seed, lo, hi, max_steps, cover_time, last_vertex, return_time,
                 covered_first, truncated):
    """Simulate polygon trials ``lo..hi-1``, writing outcomes at their indices."""
    n = m + 1
    for t in range(lo, hi):
        base = stream_base(seed, t)
        pos = 0
        drawn = 0
        first_visit = np.full(n, -1, dtype=np.int64)
        first_visit[0] = 0
        unvisited = m
        first_return = -1
        cov_step = -1
        cov_vertex = -1
        ret_step = -1
        block = _POLY_BLOCK
        while drawn < max_steps and ret_step < 0:
            count = min(block, max_steps - drawn)
            u = uniform_block(base, drawn, count)
            path = (pos + np.cumsum(np.where(u < p, 1, -1))) % n
            if cov_step < 0:
                if first_return < 0:
                    at_zero = np.nonzero(path == 0)[0]
                    if at_zero.size:
                        first_return = drawn + int(at_zero[0]) + 1
                for v in range(1, n):
                    if first_visit[v] < 0:
                        hits = np.nonzero(path == v)[0]
                        if hits.size:
                            first_visit[v] = drawn + int(hits[0]) + 1
                            unvisited -= 1
                if unvisited == 0:
                    cov_step = int(first_visit.max())
                    cov_vertex = int(np.argmax(first_visit))
            if cov_step >= 0:
                at_zero = np.nonzero(path == 0)[0]
                for k in at_zero:
                    step = drawn + int(k) + 1
                    if step > cov_step:
                        ret_step = step
                        break
            pos = int(path[-1])
            drawn += count
            block = min(block * 2, _MAX_BLOCK)
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


def occupancy_fill(m, p, seed, steps, counts):
    """Count entries into each vertex over one long walk (substream of trial 0)."""
    n = m + 1
    base = stream_base(seed, 0)
    pos = 0
    drawn = 0
    while drawn < steps:
        count = min(_OCC_BLOCK, steps - drawn)
        u = uniform_block(base, drawn, count)
        path = (pos + np.cumsum(np.where(u < p, 1, -1))) % n
        counts += np.bincount(path, minlength=n)
        pos = int(path[-1])
        drawn += count

"""Counter-based pseudorandom streams shared by every simulation backend.

The generator is pinned down exactly so trajectories are auditable and
results reproduce bit-for-bit across worker counts and across the compiled
and pure-Python kernels:

* ``mix64`` is the SplitMix64 finalizer, a bijective 64-bit hash.
* Trial ``t`` under master seed ``s`` owns the substream with base state
  ``mix64(s ^ mix64(t + 1))``; distinct trials land at effectively random,
  far-apart phases of the underlying 2**64 cycle.
* Draw ``j`` (1-based) of a substream is ``mix64(base + j * GOLDEN)``
  taken modulo 2**64.
* A 64-bit draw becomes a unit uniform via ``(x >> 11) * 2**-53``, and a
  step is clockwise (a won bet) exactly when that uniform is ``< p``.

Because draw ``j`` is a pure function of ``(seed, trial, j)``, any range of
draws can be generated independently, in any order, on any backend.
"""

from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15

_U = np.uint64
_GOLDEN_U = _U(GOLDEN)
_MUL1 = _U(0xBF58476D1CE4E5B9)
_MUL2 = _U(0x94D049BB133111EB)
_S30, _S27, _S31, _S11 = _U(30), _U(27), _U(31), _U(11)
_UNIT = 1.0 / 9007199254740992.0  # 2**-53


def mix64(z: int) -> int:
    """SplitMix64 finalizer (scalar reference implementation)."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def stream_base(seed: int, trial: int) -> int:
    """Base state of the substream owned by ``trial`` under ``seed``."""
    return mix64((seed & MASK64) ^ mix64((trial + 1) & MASK64))


def uniform_at(seed: int, trial: int, draw: int) -> float:
    """The ``draw``-th (1-based) unit uniform of a trial's substream."""
    x = mix64((stream_base(seed, trial) + draw * GOLDEN) & MASK64)
    return (x >> 11) * _UNIT


def uniform_block(base: int, offset: int, count: int) -> np.ndarray:
    """Uniforms for draws ``offset + 1 .. offset + count`` of a substream.

    Vectorized counter evaluation; bit-identical to repeated
    :func:`uniform_at` calls on the same substream.
    """
    idx = np.arange(offset + 1, offset + count + 1, dtype=np.uint64)
    z = _U(base) + _GOLDEN_U * idx
    z ^= z >> _S30
    z *= _MUL1
    z ^= z >> _S27
    z *= _MUL2
    z ^= z >> _S31
    return (z >> _S11).astype(np.float64) * _UNIT

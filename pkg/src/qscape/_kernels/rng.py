"""Counter-based pseudo-random draws for permutation inference.

Draw ``t`` of permutation ``p`` of observation ``i`` is a pure function of
``(seed, i, p, t)``: the splitmix64 output for counter ``key + (t+1)*GOLDEN``
where ``key`` chains two more splitmix64 finalizations over ``i`` and ``p``.
Because there is no serial generator state, the whole draw table can be
produced vectorized here and consumed element-by-element inside a numba
kernel, with bit-identical values on either path and under any parallel
schedule.
"""

from __future__ import annotations

import numpy as np

_U64 = np.uint64
GOLDEN = _U64(0x9E3779B97F4A7C15)
_MIX1 = _U64(0xBF58476D1CE4E5B9)
_MIX2 = _U64(0x94D049BB133111EB)
_MASK = 0xFFFFFFFFFFFFFFFF


def _finalize(z: np.ndarray) -> np.ndarray:
    """splitmix64 output function on a uint64 array (wraps mod 2**64)."""
    z = (z ^ (z >> _U64(30))) * _MIX1
    z = (z ^ (z >> _U64(27))) * _MIX2
    return z ^ (z >> _U64(31))


def stream_keys(seed: int, n_streams: int) -> np.ndarray:
    """Per-observation stream keys: hash of (seed, observation_id)."""
    base = _U64(seed & _MASK)
    ids = np.arange(1, n_streams + 1, dtype=np.uint64)
    return _finalize(base + ids * GOLDEN)


def perm_draw_table(seed: int, cards: np.ndarray, n_perm: int) -> tuple[np.ndarray, np.ndarray]:
    """Random draws for conditional permutations, as 32-bit values in int64.

    ``cards[i]`` is the number of draws one permutation of observation ``i``
    consumes (its neighbor count).  Returns ``(draws, offsets)`` where the
    block ``draws[offsets[i]:offsets[i+1]]`` holds ``n_perm * cards[i]``
    values laid out permutation-major, each uniform on ``[0, 2**32)``.
    """
    cards = np.asarray(cards, dtype=np.int64)
    n = cards.shape[0]
    offsets = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(cards * n_perm, out=offsets[1:])
    draws = np.empty(offsets[-1], dtype=np.int64)
    keys = stream_keys(seed, n)
    perm_ids = np.arange(1, n_perm + 1, dtype=np.uint64)[:, None] * GOLDEN
    for i in range(n):
        c = int(cards[i])
        if c == 0:
            continue
        perm_keys = _finalize(keys[i] + perm_ids)
        counters = np.arange(1, c + 1, dtype=np.uint64) * GOLDEN
        block = _finalize(perm_keys + counters) >> _U64(32)
        draws[offsets[i] : offsets[i + 1]] = block.astype(np.int64).ravel()
    return draws, offsets

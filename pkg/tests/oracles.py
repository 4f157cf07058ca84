"""Offline reference implementations used as test oracles.

Nothing here imports the package's slicing code. The reference slicer sees the
whole stream up front: it bins event counts per window with numpy, evaluates
the fading sum as a polynomial in alpha (Horner form) and looks up the previous window's last event by
binary search.
"""

from __future__ import annotations

import bisect
import math
from typing import List, Optional, Sequence, Tuple

import numpy as np

Event = Tuple[str, str, int]


def closed_form_fading(counts: Sequence[int], alpha: float) -> float:
    counts = list(counts)
    n = len(counts)
    active = sum(1 for x in counts if x)
    if active == 0:
        return 0.0
    total = 0.0
    for i, x in enumerate(counts, 1):
        total = total + (x / active) * alpha ** (n - i)
    return total


def _fading(counts: Sequence[int], alpha: float) -> float:
    # Horner form of the closed-form sum; identical float operations to the
    # definition's recursion, so floors agree bit for bit.
    active = sum(1 for x in counts if x)
    if active == 0:
        return 0.0
    acc = 0.0
    for x in counts:
        acc = acc * alpha + x / active
    return acc


def reference_schedule(
    events: Sequence[Event],
    w_size: int,
    alpha: float,
    delta: float,
    window_axis: str = "original",
    empty_fallback: bool = True,
    rounding: str = "ceil",
    directed: bool = False,
):
    """Return ``(records, remapped)`` as plain tuples.

    ``records``: ``(index, t_ini, t_end, sigma, t_ref, (first, last))``.
    ``remapped``: ``(source, target, t_display, window)`` after merging.
    """
    if not events:
        return [], []
    times = np.array([t for _, _, t in events], dtype=np.int64)
    t_first, t_last = int(times[0]), int(times[-1])

    # window layout: starts, lengths and resolutions, built left to right
    starts: List[int] = [t_first]
    sigmas: List[int] = [1]
    t_refs: List[int] = [t_first]
    disp = np.zeros(len(times), dtype=np.int64)
    win_of = np.zeros(len(times), dtype=np.int64)
    k = 0
    while True:
        s, sig = starts[k], sigmas[k]
        length = w_size * sig if window_axis == "display" else w_size
        lo = int(np.searchsorted(times, s, side="left"))
        hi = int(np.searchsorted(times, s + length, side="left"))
        local = times[lo:hi]
        disp[lo:hi] = (local - s) // sig + t_refs[k]
        win_of[lo:hi] = k
        if s + length > t_last:
            break
        pos = (local - s) // sig if window_axis == "display" else local - s
        counts = np.bincount(pos, minlength=w_size)[:w_size].tolist() if local.size else [0] * w_size
        fs = _fading(counts, alpha)
        nxt = math.floor(delta * sig + (1 - delta) * fs)
        if nxt == 0 or (empty_fallback and local.size == 0):
            nxt = max(1, sum(sigmas) // len(sigmas))
        new_start = s + length
        j = bisect.bisect_left(times.tolist(), new_start) - 1
        gap = new_start - int(times[j])
        step = -(-gap // sigmas[win_of[j]]) if rounding == "ceil" else gap // sigmas[win_of[j]]
        starts.append(new_start)
        sigmas.append(nxt)
        t_refs.append(step + int(disp[j]))
        k += 1

    records = []
    for i in range(k + 1):
        end = starts[i + 1] if i < k else t_last + 1
        last = max(t_refs[i], t_refs[i + 1]) - 1 if i < k else int(disp[-1])
        records.append((i, starts[i], end, sigmas[i], t_refs[i], (t_refs[i], last)))

    remapped = []
    seen: set = set()
    current: Optional[int] = None
    for (a, b, _), d, w in zip(events, disp.tolist(), win_of.tolist()):
        if d != current:
            seen = set()
            current = d
        key = (a, b) if directed else tuple(sorted((a, b)))
        if key not in seen:
            seen.add(key)
            remapped.append((a, b, d, w))
    return records, remapped


def linear_slice_index(t: int, boundaries: Sequence[int]) -> int:
    idx = 0
    for i, b in enumerate(boundaries):
        if b <= t:
            idx = i
    return idx


def random_stream(rng: np.random.Generator, max_len: int = 400) -> List[Event]:
    """Bursty stream with gaps, repeated pairs and equal timestamps."""
    n_nodes = int(rng.integers(2, 12))
    t = int(rng.integers(0, 50))
    out: List[Event] = []
    for _ in range(int(rng.integers(1, max_len))):
        r = rng.random()
        if r < 0.05:
            t += int(rng.integers(20, 400))
        elif r < 0.6:
            t += int(rng.integers(0, 3))
        a, b = rng.choice(n_nodes, size=2, replace=False)
        out.append((f"v{a}", f"v{b}", t))
    return out

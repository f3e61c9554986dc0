"""Integer-coded admissible words for deep tabulations.

A word w0..w_{D-1} is coded as the base-k integer with w0 the most
significant digit.  The coded arrays support the few vectorized operations
the deep measure iterations need (windowed gathers of shallow cylinder
tables, prefix/suffix class indices) without materializing tuple words.
"""
from __future__ import annotations

import numpy as np

from .shiftspace import CylinderFunction, ShiftModel, admissible_words


_CODE_CACHE: dict = {}


def admissible_codes(model: ShiftModel, depth: int) -> np.ndarray:
    """Sorted codes of all admissible depth-`depth` words (memoized)."""
    if depth < 1:
        raise ValueError("depth must be >= 1")
    key = (model, depth)
    cached = _CODE_CACHE.get(key)
    if cached is not None:
        return cached
    k = model.alphabet_size
    t = model.matrix
    codes = np.arange(k, dtype=np.int64)
    last = codes.copy()
    for _ in range(depth - 1):
        parts = []
        lasts = []
        for a in range(k):
            mask = t[last, a] == 1
            parts.append(codes[mask] * k + a)
            lasts.append(np.full(int(mask.sum()), a, dtype=np.int64))
        codes = np.concatenate(parts)
        last = np.concatenate(lasts)
        order = np.argsort(codes, kind="stable")
        codes = codes[order]
        last = last[order]
    codes.setflags(write=False)
    while len(_CODE_CACHE) >= 4:
        _CODE_CACHE.pop(next(iter(_CODE_CACHE)))
    _CODE_CACHE[key] = codes
    return codes


def suffix_map(model: ShiftModel, depth: int) -> np.ndarray:
    """Index of each depth-`depth` word's length-(depth-1) suffix, both in
    sorted code order."""
    k = model.alphabet_size
    codes = admissible_codes(model, depth)
    shorter = admissible_codes(model, depth - 1)
    return np.searchsorted(shorter, codes % k ** (depth - 1))


def window_codes(codes: np.ndarray, depth: int, k: int, start: int,
                 length: int) -> np.ndarray:
    """Codes of the sub-words z_start .. z_{start+length-1}."""
    if start < 0 or start + length > depth:
        raise ValueError("window out of range")
    return (codes // k ** (depth - start - length)) % k ** length


def table_lookup(model: ShiftModel, f: CylinderFunction) -> np.ndarray:
    """Dense code -> value table for a shallow cylinder function
    (inadmissible codes hold NaN)."""
    k = model.alphabet_size
    d = f.depth
    lut = np.full(k ** max(d, 1), np.nan,
                  dtype=complex if np.iscomplexobj(f.values) else float)
    if d == 0:
        lut[:] = f.values[0]
        return lut
    for w, v in zip(admissible_words(model, d), f.values):
        code = 0
        for s in w:
            code = code * k + s
        lut[code] = v
    return lut


def gather(model: ShiftModel, f: CylinderFunction, codes: np.ndarray,
           depth: int, start: int) -> np.ndarray:
    """Values of f on the window of each coded word starting at `start`."""
    d = max(f.depth, 1)
    lut = table_lookup(model, f)
    return lut[window_codes(codes, depth, model.alphabet_size, start, d)]


def birkhoff_gather(model: ShiftModel, f: CylinderFunction, codes: np.ndarray,
                    depth: int, n: int) -> np.ndarray:
    """Product over j < n of f evaluated at the j-shifted window."""
    out = np.ones(len(codes),
                  dtype=complex if np.iscomplexobj(f.values) else float)
    for j in range(n):
        out = out * gather(model, f, codes, depth, j)
    return out


def class_index(codes: np.ndarray, depth: int, k: int, start: int,
                length: int):
    """Compact class ids for the given window, plus the class count."""
    win = window_codes(codes, depth, k, start, length)
    uniq, inv = np.unique(win, return_inverse=True)
    return inv, len(uniq), uniq

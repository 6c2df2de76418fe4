"""Builders for the per-(tier, scale) flag bitvectors.

Three families of sparse bitvectors drive the query algorithms.  All are
indexed by a tier t (coarse threshold class, thresholds behave like
2**-t) and a scale b (range-length class, lengths behave like 2**b), and
all partition positions into aligned blocks of length 2**(b-1):

* candidate flags: position k is set when its symbol occurs at least
  2**(b-t) times in the window of radius 2**(b+1) around k, and k is the
  leftmost or rightmost occurrence of that symbol inside its block.  Any
  element frequent enough in a range of the matching scale has a set
  position inside the range.

* anchor flags: every chunk_len-th occurrence (by global occurrence rank)
  of a symbol is set wherever it falls inside the window of a position
  passing the frequency test above.  These give footholds for jumping to
  a candidate's leftmost in-range occurrence when its flagged position
  sits too far right.

* distinct flags: inside each block, the first occurrences of the first
  2**t distinct symbols and the last occurrences of the last 2**t
  distinct ones.  A range of the matching scale either has all its
  distinct symbols flagged somewhere inside, or gets 2**t flagged
  distinct candidates from a single block; either way an infrequent
  element is among the flagged ones when it exists.

A workspace caches the occurrence ordering so building many families over
the same array sorts only once.  Positions are 1-based in the produced
bitvectors.  The slow reference builders recompute the same sets from an
occurrence matrix and are used for build-time self checks on small inputs.
"""

from __future__ import annotations

import numpy as np

from .bits import SparseBitVector
from .listing import prev_occurrence_array

_POS = 1 << 40  # (symbol, position) key packing; positions stay far below this


class FlagWorkspace:
    """Shared sorted-occurrence scaffolding for family construction."""

    def __init__(self, arr: np.ndarray):
        arr = np.asarray(arr, dtype=np.int64)
        self.arr = arr
        self.n = int(arr.size)
        self.order = np.argsort(arr, kind="stable")
        self.a_sorted = arr[self.order]
        self.keys = self.a_sorted * _POS + (self.order + 1)
        newgrp = np.empty(self.n, dtype=bool)
        newgrp[0] = True
        newgrp[1:] = self.a_sorted[1:] != self.a_sorted[:-1]
        grp_start = np.flatnonzero(newgrp)
        grp_id = np.cumsum(newgrp) - 1
        self.rank_in_grp = np.arange(self.n) - grp_start[grp_id] + 1
        self._newgrp = newgrp
        self._pos = np.arange(1, self.n + 1, dtype=np.int64)
        self._prev = None
        self._next = None

    def window_qualifies(self, radius: int, need: int) -> np.ndarray:
        """Per position: does its symbol occur >= need times within +-radius?"""
        lo = np.maximum(self._pos - radius, 1)
        hi = np.minimum(self._pos + radius, self.n)
        left = np.searchsorted(self.keys, self.arr * _POS + lo, side="left")
        right = np.searchsorted(self.keys, self.arr * _POS + hi, side="right")
        return (right - left) >= need

    def _block_first_last(self, scale: int):
        """Masks for each symbol's first and last occurrence per block.

        The workspace order is already sorted by (symbol, position), and
        block ids are monotone in position, so per-(symbol, block) runs are
        contiguous in it; no fresh sort per scale.
        """
        n = self.n
        blk = np.arange(n, dtype=np.int64) >> (scale - 1)
        ab = blk[self.order]
        boundary = np.empty(n, dtype=bool)
        boundary[0] = True
        boundary[1:] = self._newgrp[1:] | (ab[1:] != ab[:-1])
        ends = np.empty(n, dtype=bool)
        ends[-1] = True
        ends[:-1] = boundary[1:]
        first = np.zeros(n, dtype=bool)
        first[self.order[boundary]] = True
        last = np.zeros(n, dtype=bool)
        last[self.order[ends]] = True
        return first, last

    def candidate_bits(self, tier: int, scale: int, qual: np.ndarray | None = None) -> np.ndarray:
        if qual is None:
            qual = self.window_qualifies(1 << (scale + 1), 1 << (scale - tier))
        first, last = self._block_first_last(scale)
        return qual & (first | last)

    def anchor_bits(self, tier: int, scale: int, chunk: int, qual: np.ndarray | None = None) -> np.ndarray:
        radius = 1 << (scale + 1)
        if qual is None:
            qual = self.window_qualifies(radius, 1 << (scale - tier))
        qual_cum = np.concatenate(([0], np.cumsum(qual[self.order])))
        mult = np.flatnonzero(self.rank_in_grp % chunk == 0)
        out = np.zeros(self.n, dtype=bool)
        if mult.size == 0:
            return out
        p = self.order[mult] + 1
        lo = np.maximum(p - radius, 1)
        hi = np.minimum(p + radius, self.n)
        left = np.searchsorted(self.keys, self.a_sorted[mult] * _POS + lo, side="left")
        right = np.searchsorted(self.keys, self.a_sorted[mult] * _POS + hi, side="right")
        marked = (qual_cum[right] - qual_cum[left]) > 0
        out[p[marked] - 1] = True
        return out

    def distinct_bits(self, tier: int, scale: int) -> np.ndarray:
        n = self.n
        cap = 1 << tier
        blen = 1 << (scale - 1)
        blk = np.arange(n, dtype=np.int64) >> (scale - 1)
        if self._prev is None:
            self._prev = prev_occurrence_array(self.arr)
            nxt_rev = prev_occurrence_array(self.arr[::-1])[::-1]
            self._next = np.where(nxt_rev == 0, n + 1, n + 1 - nxt_rev)
        block_start = blk * blen + 1
        block_end = np.minimum((blk + 1) * blen, n)
        new_in_block = self._prev < block_start
        gone_after_block = self._next > block_end
        first_rank = _rank_within_blocks(new_in_block, blk)
        last_rank = _rank_within_blocks(gone_after_block[::-1], blk[::-1])[::-1]
        lead = new_in_block & (first_rank <= cap)
        trail = gone_after_block & (last_rank <= cap)
        return lead | trail


def _rank_within_blocks(mask: np.ndarray, blk: np.ndarray) -> np.ndarray:
    """Running count of set mask entries within each block, at each position."""
    cs = np.cumsum(mask)
    starts = np.concatenate(([0], np.flatnonzero(blk[1:] != blk[:-1]) + 1))
    base = np.where(starts > 0, cs[starts - 1], 0)
    return cs - np.repeat(base, np.diff(np.concatenate((starts, [mask.size]))))


def flags_from_bits(bits: np.ndarray) -> SparseBitVector:
    return SparseBitVector.from_numpy_bool(bits)


def expected_ones_cap(n: int, tier: int, scale: int) -> int:
    """Generous provable ceiling on candidate/distinct flag counts."""
    nblocks = (n + (1 << (scale - 1)) - 1) >> (scale - 1)
    return 16 * (1 << tier) * nblocks + 64


# -- slow reference builders (build self-check and tests) -------------------------


def _qualifies_slow(arr: np.ndarray, radius: int, need: int):
    n = arr.size
    eq = arr[None, :] == arr[:, None]
    idx = np.arange(n)
    near = np.abs(idx[None, :] - idx[:, None]) <= radius
    return eq, near, (eq & near).sum(axis=1) >= need


def candidate_flag_bits_slow(arr: np.ndarray, tier: int, scale: int) -> np.ndarray:
    n = arr.size
    eq, _, qual = _qualifies_slow(arr, 1 << (scale + 1), 1 << (scale - tier))
    idx = np.arange(n)
    blen = 1 << (scale - 1)
    same_blk = (idx[None, :] // blen) == (idx[:, None] // blen)
    both = eq & same_blk
    first = both.argmax(axis=1) == idx
    last = (n - 1 - both[:, ::-1].argmax(axis=1)) == idx
    return qual & (first | last)


def anchor_flag_bits_slow(arr: np.ndarray, tier: int, scale: int, chunk: int) -> np.ndarray:
    n = arr.size
    eq, near, qual = _qualifies_slow(arr, 1 << (scale + 1), 1 << (scale - tier))
    out = np.zeros(n, dtype=bool)
    for k in range(n):
        rank = int(eq[k, : k + 1].sum())
        if rank % chunk:
            continue
        out[k] = bool((eq[k] & near[k] & qual).any())
    return out


def distinct_flag_bits_slow(arr: np.ndarray, tier: int, scale: int) -> np.ndarray:
    n = arr.size
    cap = 1 << tier
    blen = 1 << (scale - 1)
    out = np.zeros(n, dtype=bool)
    for bs in range(0, n, blen):
        be = min(bs + blen, n)
        seen: list[int] = []
        for k in range(bs, be):
            if arr[k] not in seen:
                seen.append(int(arr[k]))
                if len(seen) <= cap:
                    out[k] = True
        seen = []
        for k in range(be - 1, bs - 1, -1):
            if arr[k] not in seen:
                seen.append(int(arr[k]))
                if len(seen) <= cap:
                    out[k] = True
    return out

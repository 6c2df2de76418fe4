"""Plain and compressed bitvectors with rank/select, plus a range-minimum index.

Positions are 1-based throughout the public API.  rank1(p) counts set bits
among the first p positions; select1(r) returns the position of the r-th
set bit.  Plain bitvectors keep a two-level rank directory (512-bit
superblocks over 64-bit words) and sampled select hints (every 512th one
and zero).  The compressed variant stores sorted set positions with a
low/high split; its rank and select directories are rebuilt at load time,
so reported sizes reflect only the persisted payload.
"""

from __future__ import annotations

import numpy as np

from .errors import DomainError, FormatError, NotFoundError, RangeError
from .serial import FORMAT_VERSION, MAGIC_BITS, ByteReader, ByteWriter

_SUPER_WORDS = 8  # 512-bit superblocks
_SELECT_SAMPLE = 512
_M64 = (1 << 64) - 1


class PackedArray:
    """Fixed-width integer array packed into 64-bit words."""

    __slots__ = ("width", "count", "words")

    def __init__(self, width: int, count: int, words: list[int] | None = None):
        if not (0 <= width <= 64):
            raise DomainError(f"width {width} out of range")
        self.width = width
        self.count = count
        nwords = (width * count + 63) // 64
        if words is None:
            words = [0] * nwords
        if len(words) != nwords:
            raise FormatError("packed array word count mismatch")
        self.words = words

    @classmethod
    def from_values(cls, width: int, values) -> "PackedArray":
        pa = cls(width, len(values))
        if width == 0:
            return pa
        w = pa.words
        mask = (1 << width) - 1
        for idx, val in enumerate(values):
            v = int(val) & mask
            s = idx * width
            wi, off = s >> 6, s & 63
            w[wi] |= (v << off) & _M64
            spill = off + width - 64
            if spill > 0:
                w[wi + 1] |= v >> (width - spill)
        return pa

    def get(self, idx: int) -> int:
        if self.width == 0:
            return 0
        s = idx * self.width
        wi, off = s >> 6, s & 63
        v = self.words[wi] >> off
        spill = off + self.width - 64
        if spill > 0:
            v |= self.words[wi + 1] << (self.width - spill)
        return v & ((1 << self.width) - 1)

    def to_numpy(self) -> np.ndarray:
        """Vectorized decode of all values."""
        if self.count == 0 or self.width == 0:
            return np.zeros(self.count, dtype=np.int64)
        w = np.array(self.words + [0], dtype=np.uint64)
        starts = np.arange(self.count, dtype=np.uint64) * np.uint64(self.width)
        wi = (starts >> np.uint64(6)).astype(np.int64)
        off = starts & np.uint64(63)
        lo = w[wi] >> off
        shift = np.uint64(64) - off
        hi = np.where(off > 0, w[wi + 1] << (shift % np.uint64(64)), np.uint64(0))
        vals = (lo | hi) & np.uint64((1 << self.width) - 1)
        return vals.astype(np.int64)


def _build_rank_dir(words: list[int]):
    sup = [0] * ((len(words) + _SUPER_WORDS - 1) // _SUPER_WORDS + 1)
    mid = [0] * (len(words) + 1)
    total = 0
    within = 0
    for wi, word in enumerate(words):
        if wi % _SUPER_WORDS == 0:
            sup[wi // _SUPER_WORDS] = total
            within = 0
        mid[wi] = within
        pc = word.bit_count()
        within += pc
        total += pc
    sup[(len(words) + _SUPER_WORDS - 1) // _SUPER_WORDS] = total
    return sup, mid, total


class BitVector:
    """Uncompressed bitvector with O(1) rank and sampled select."""

    __slots__ = ("n_bits", "ones", "words", "_sup", "_mid", "_sel1", "_sel0", "_size_cache")

    def __init__(self, words: list[int], n_bits: int):
        if n_bits < 0 or len(words) != (n_bits + 63) // 64:
            raise FormatError("word count does not match bit length")
        if n_bits % 64 and words and words[-1] >> (n_bits % 64):
            raise FormatError("stray bits beyond declared length")
        self.n_bits = n_bits
        self.words = words
        self._sup, self._mid, self.ones = _build_rank_dir(words)
        self._build_select_samples()
        self._size_cache = None

    def _build_select_samples(self):
        sel1, sel0 = [], []
        cum1 = cum0 = 0
        t1 = t0 = 1
        for wi, word in enumerate(self.words):
            pc = word.bit_count()
            valid = min(64, self.n_bits - 64 * wi)
            zc = valid - pc
            while t1 <= self.ones and cum1 + pc >= t1:
                sel1.append(wi)
                t1 += _SELECT_SAMPLE
            zeros_total = self.n_bits - self.ones
            while t0 <= zeros_total and cum0 + zc >= t0:
                sel0.append(wi)
                t0 += _SELECT_SAMPLE
            cum1 += pc
            cum0 += zc
        self._sel1 = sel1
        self._sel0 = sel0

    # -- construction helpers -------------------------------------------------

    @classmethod
    def from_bits(cls, bits) -> "BitVector":
        arr = np.asarray(bits, dtype=bool)
        return cls.from_numpy_bool(arr)

    @classmethod
    def from_numpy_bool(cls, arr: np.ndarray) -> "BitVector":
        n = int(arr.shape[0])
        packed = np.packbits(arr, bitorder="little").tobytes()
        pad = (-len(packed)) % 8
        packed += b"\x00" * pad
        words = np.frombuffer(packed, dtype="<u8").tolist()
        return cls(words, n)

    @classmethod
    def from_ones(cls, positions, n_bits: int) -> "BitVector":
        arr = np.zeros(n_bits, dtype=bool)
        pos = np.asarray(positions, dtype=np.int64)
        if pos.size:
            if pos.min() < 1 or pos.max() > n_bits:
                raise RangeError("set position out of range")
            arr[pos - 1] = True
        return cls.from_numpy_bool(arr)

    # -- queries ---------------------------------------------------------------

    def get(self, p: int) -> int:
        if not (1 <= p <= self.n_bits):
            raise RangeError(f"position {p} out of [1, {self.n_bits}]")
        q = p - 1
        return (self.words[q >> 6] >> (q & 63)) & 1

    def rank1(self, p: int) -> int:
        if p < 0 or p > self.n_bits:
            raise RangeError(f"prefix length {p} out of [0, {self.n_bits}]")
        wi, off = p >> 6, p & 63
        if wi == len(self.words):
            return self.ones
        r = self._sup[wi // _SUPER_WORDS] + self._mid[wi]
        if off:
            r += (self.words[wi] & ((1 << off) - 1)).bit_count()
        return r

    def rank0(self, p: int) -> int:
        return p - self.rank1(p)

    def select1(self, r: int) -> int:
        if r < 1:
            raise RangeError(f"occurrence index {r} must be positive")
        if r > self.ones:
            raise NotFoundError(f"only {self.ones} set bits, asked for #{r}")
        wi = self._sel1[(r - 1) // _SELECT_SAMPLE]
        cnt = self._sup[wi // _SUPER_WORDS] + self._mid[wi]
        while True:
            pc = self.words[wi].bit_count()
            if cnt + pc >= r:
                break
            cnt += pc
            wi += 1
        word = self.words[wi]
        for _ in range(r - cnt - 1):
            word &= word - 1
        return (wi << 6) + (word & -word).bit_length()

    def select0(self, r: int) -> int:
        zeros = self.n_bits - self.ones
        if r < 1:
            raise RangeError(f"occurrence index {r} must be positive")
        if r > zeros:
            raise NotFoundError(f"only {zeros} clear bits, asked for #{r}")
        wi = self._sel0[(r - 1) // _SELECT_SAMPLE]
        base = self._sup[wi // _SUPER_WORDS] + self._mid[wi]
        cnt = (wi << 6) - base  # zeros before word wi
        while True:
            valid = min(64, self.n_bits - (wi << 6))
            zc = valid - self.words[wi].bit_count()
            if cnt + zc >= r:
                break
            cnt += zc
            wi += 1
        valid = min(64, self.n_bits - (wi << 6))
        word = (~self.words[wi]) & ((1 << valid) - 1)
        for _ in range(r - cnt - 1):
            word &= word - 1
        return (wi << 6) + (word & -word).bit_length()

    def to_numpy_bool(self) -> np.ndarray:
        raw = np.frombuffer(
            np.array(self.words, dtype="<u8").tobytes(), dtype=np.uint8
        )
        bits = np.unpackbits(raw, bitorder="little")
        return bits[: self.n_bits].astype(bool)

    # -- serialization -----------------------------------------------------------

    def to_bytes(self) -> bytes:
        w = ByteWriter()
        w.raw(MAGIC_BITS)
        w.u16(FORMAT_VERSION)
        w.u8(0)  # kind: plain
        w.u64(self.n_bits)
        w.words(self.words)
        return w.getvalue()

    def size_bits(self) -> int:
        if self._size_cache is None:
            self._size_cache = 8 * len(self.to_bytes())
        return self._size_cache

    def __eq__(self, other):
        return (
            isinstance(other, BitVector)
            and self.n_bits == other.n_bits
            and self.words == other.words
        )

    def __repr__(self):
        return f"BitVector(n_bits={self.n_bits}, ones={self.ones})"


class SparseBitVector:
    """Sorted-positions encoding for bitvectors with few set bits.

    Stores the 1-positions split into fixed low bits and a unary-coded high
    part, costing about 2 + lg(n/m) bits per set bit.  Supports the same
    rank/select interface as BitVector; select0 falls back to binary search
    over rank, which is acceptable since this variant only backs compressed
    configurations.
    """

    __slots__ = ("n_bits", "ones", "low_width", "low", "upper", "_size_cache")

    def __init__(self, n_bits: int, ones: int, low_width: int, low: PackedArray, upper: BitVector):
        self.n_bits = n_bits
        self.ones = ones
        self.low_width = low_width
        self.low = low
        self.upper = upper
        self._size_cache = None

    @classmethod
    def from_ones(cls, positions, n_bits: int) -> "SparseBitVector":
        pos = np.asarray(sorted(int(p) for p in positions), dtype=np.int64)
        m = int(pos.size)
        if m:
            if pos[0] < 1 or pos[-1] > n_bits:
                raise RangeError("set position out of range")
            if np.any(pos[1:] == pos[:-1]):
                raise DomainError("duplicate set positions")
        if m == 0:
            return cls(n_bits, 0, 0, PackedArray(0, 0), BitVector([], 0))
        buckets = (n_bits + m - 1) // m
        low_width = (buckets - 1).bit_length()
        vals = pos - 1
        lows = vals & ((1 << low_width) - 1)
        highs = (vals >> low_width).astype(np.int64)
        n_buckets = ((n_bits - 1) >> low_width) + 1
        upper_len = m + n_buckets
        upper_bits = np.zeros(upper_len, dtype=bool)
        upper_bits[highs + np.arange(m)] = True  # i-th one sits at 1-based h_i + i
        return cls(
            n_bits,
            m,
            low_width,
            PackedArray.from_values(low_width, lows.tolist()),
            BitVector.from_numpy_bool(upper_bits),
        )

    @classmethod
    def from_numpy_bool(cls, arr: np.ndarray) -> "SparseBitVector":
        return cls.from_ones((np.flatnonzero(arr) + 1).tolist(), int(arr.shape[0]))

    # -- queries ---------------------------------------------------------------

    def _bucket_bounds(self, h: int) -> tuple[int, int]:
        """Indices (0-based) of ones in buckets < h and <= h."""
        lo = self.upper.select0(h) - h if h > 0 else 0
        hi = self.upper.select0(h + 1) - (h + 1)
        return lo, hi

    def rank1(self, p: int) -> int:
        if p < 0 or p > self.n_bits:
            raise RangeError(f"prefix length {p} out of [0, {self.n_bits}]")
        if p == 0 or self.ones == 0:
            return 0
        v = p - 1
        h = v >> self.low_width
        lo, hi = self._bucket_bounds(h)
        target = v & ((1 << self.low_width) - 1)
        # count lows <= target within the bucket
        while lo < hi:
            mid = (lo + hi) // 2
            if self.low.get(mid) <= target:
                lo = mid + 1
            else:
                hi = mid
        return lo

    def rank0(self, p: int) -> int:
        return p - self.rank1(p)

    def select1(self, r: int) -> int:
        if r < 1:
            raise RangeError(f"occurrence index {r} must be positive")
        if r > self.ones:
            raise NotFoundError(f"only {self.ones} set bits, asked for #{r}")
        h = self.upper.select1(r) - r
        return ((h << self.low_width) | self.low.get(r - 1)) + 1

    def select0(self, r: int) -> int:
        zeros = self.n_bits - self.ones
        if r < 1:
            raise RangeError(f"occurrence index {r} must be positive")
        if r > zeros:
            raise NotFoundError(f"only {zeros} clear bits, asked for #{r}")
        lo, hi = 1, self.n_bits
        while lo < hi:
            mid = (lo + hi) // 2
            if self.rank0(mid) >= r:
                hi = mid
            else:
                lo = mid + 1
        return lo

    def get(self, p: int) -> int:
        if not (1 <= p <= self.n_bits):
            raise RangeError(f"position {p} out of [1, {self.n_bits}]")
        return self.rank1(p) - self.rank1(p - 1)

    def ones_in_range(self, lo: int, hi: int) -> list[int]:
        """Positions of set bits within [lo, hi]."""
        out = []
        r = self.rank1(lo - 1) + 1
        while r <= self.ones:
            p = self.select1(r)
            if p > hi:
                break
            out.append(p)
            r += 1
        return out

    def to_numpy_bool(self) -> np.ndarray:
        arr = np.zeros(self.n_bits, dtype=bool)
        if self.ones:
            highs = np.flatnonzero(self.upper.to_numpy_bool()) + 1
            h = highs - np.arange(1, self.ones + 1)
            vals = (h.astype(np.int64) << self.low_width) | self.low.to_numpy()
            arr[vals] = True
        return arr

    # -- serialization -----------------------------------------------------------

    def to_bytes(self) -> bytes:
        w = ByteWriter()
        w.raw(MAGIC_BITS)
        w.u16(FORMAT_VERSION)
        w.u8(1)  # kind: sparse
        w.u64(self.n_bits)
        w.u64(self.ones)
        w.u8(self.low_width)
        w.words(self.low.words)
        w.u64(self.upper.n_bits)
        w.words(self.upper.words)
        return w.getvalue()

    def size_bits(self) -> int:
        if self._size_cache is None:
            self._size_cache = 8 * len(self.to_bytes())
        return self._size_cache

    def __eq__(self, other):
        return (
            isinstance(other, SparseBitVector)
            and self.n_bits == other.n_bits
            and self.low_width == other.low_width
            and self.low.words == other.low.words
            and self.upper == other.upper
        )

    def __repr__(self):
        return f"SparseBitVector(n_bits={self.n_bits}, ones={self.ones})"


def bitvector_from_bytes(data: bytes):
    """Decode either bitvector kind; directories are rebuilt here."""
    r = ByteReader(data)
    r.expect_magic(MAGIC_BITS)
    r.expect_version()
    kind = r.u8()
    if kind == 0:
        n_bits = r.u64()
        return BitVector(r.words(), n_bits)
    if kind == 1:
        n_bits = r.u64()
        ones = r.u64()
        low_width = r.u8()
        low_words = r.words()
        upper_len = r.u64()
        upper = BitVector(r.words(), upper_len)
        low = PackedArray(low_width, ones, low_words)
        return SparseBitVector(n_bits, ones, low_width, low, upper)
    raise FormatError(f"unknown bitvector kind {kind}")


class RmqIndex:
    """Sparse-table range minimum over an integer array, leftmost tie-break.

    query(l, r) returns the 1-based position of the smallest value in
    values[l..r]; among equal minima the leftmost position wins.
    """

    __slots__ = ("n", "values", "_levels")

    def __init__(self, values):
        vals = np.asarray(values, dtype=np.int64)
        self.n = int(vals.shape[0])
        self.values = vals
        levels = [np.arange(self.n, dtype=np.int64)]
        span = 1
        while 2 * span <= self.n:
            prev = levels[-1]
            m = self.n - 2 * span + 1
            a = prev[:m]
            b = prev[span : span + m]
            take_a = vals[a] <= vals[b]
            levels.append(np.where(take_a, a, b))
            span *= 2
        self._levels = levels

    def query(self, l: int, r: int) -> int:
        if not (1 <= l <= r <= self.n):
            raise RangeError(f"bad range [{l}, {r}] for length {self.n}")
        if l == r:
            return l
        width = r - l + 1
        k = width.bit_length() - 1
        span = 1 << k
        lvl = self._levels[k]
        a = int(lvl[l - 1])
        b = int(lvl[r - span])
        best = a if self.values[a] <= self.values[b] else b
        return best + 1

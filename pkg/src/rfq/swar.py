"""Branch-free occurrence counting for tiny alphabets.

A chunk of k symbols, each ceil(lg sigma)-bits wide, is replicated once per
alphabet symbol inside one wide register.  Copy i is XORed with the pattern
i,i,...,i so matching fields become zero, a borrow trick turns the zero
fields into single flag bits, and a spreading multiplication funnels each
copy's flags into one counter field.  Counters for all symbols then live in
a single integer and can be accumulated, threshold-tested, and drained with
a constant number of word operations.

Registers are Python integers with explicit width masking, which emulates
the multi-word registers the scheme needs once sigma * lg(sigma) outgrows a
machine word.  Alphabet sizes 2..16 are supported; the counting happens per
copy, so each counter saturates correctly up to k * sigma processed symbols.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ConfigError, DomainError, LogicError


@dataclass(frozen=True)
class PackedChunk:
    """k fixed-width symbol fields packed into one integer, zero padded."""

    word: int
    length: int  # symbols actually present
    pad: int  # trailing zero fields counted as symbol 0 until corrected


@dataclass(frozen=True)
class CounterWord:
    """Per-symbol counters packed at a fixed stride inside one integer."""

    value: int
    total: int  # symbols accumulated so far, pad included


class TinyAlphabetKernel:
    """Counting kernel for one alphabet size.  All masks are precomputed."""

    def __init__(self, alphabet: int):
        if not (2 <= alphabet <= 16):
            raise ConfigError(f"alphabet size {alphabet} outside supported 2..16")
        self.alphabet = alphabet
        self.chunk = alphabet  # symbols per chunk; keeps every copy square
        self.sym_bits = (alphabet - 1).bit_length()
        k, ell, a = self.chunk, self.sym_bits, alphabet
        self.stride = 2 * k * ell
        self.width = self.stride * a
        self.capacity = k * a  # counters stay exact through this many symbols

        rep = sum(1 << (m * ell) for m in range(k))
        self.rep_fields = rep
        self.copies = sum(1 << (i * self.stride) for i in range(a))
        self.xor_pattern = sum((i * rep) << (i * self.stride) for i in range(a))
        self.high_bits = sum(
            (rep << (ell - 1)) << (i * self.stride) for i in range(a)
        )
        self.counter_shift = (k - 1) * ell
        self.counter_mask = sum(
            ((1 << ell) - 1) << (self.counter_shift + i * self.stride) for i in range(a)
        )
        self.thresh_unit = sum(
            1 << (self.counter_shift + i * self.stride) for i in range(a)
        )
        self.overflow_shift = (k + 1) * ell
        self.overflow_mask = sum(
            1 << (self.overflow_shift + i * self.stride) for i in range(a)
        )
        self.full = (1 << self.width) - 1

    # -- packing ---------------------------------------------------------------

    def pack(self, symbols) -> PackedChunk:
        syms = list(symbols)
        if len(syms) > self.chunk:
            raise DomainError(f"chunk holds at most {self.chunk} symbols")
        word = 0
        for m, s in enumerate(syms):
            s = int(s)
            if not (0 <= s < self.alphabet):
                raise DomainError(f"symbol {s} outside [0, {self.alphabet})")
            word |= s << (m * self.sym_bits)
        return PackedChunk(word=word, length=len(syms), pad=self.chunk - len(syms))

    def empty_counters(self) -> CounterWord:
        return CounterWord(value=0, total=0)

    # -- counting --------------------------------------------------------------

    def count_chunk(self, chunk: PackedChunk) -> CounterWord:
        """Counters for one chunk; pad fields are counted as symbol 0."""
        k, ell = self.chunk, self.sym_bits
        x = chunk.word
        uniform_sym = None
        if k == (1 << ell):
            # A full copy of matches makes the spread sum wrap the counter
            # field exactly when all k fields hold the same symbol; detect it
            # up front and re-add the wrapped count afterwards.
            s0 = x & ((1 << ell) - 1)
            if x == s0 * self.rep_fields:
                uniform_sym = s0
        x *= self.copies
        x ^= self.xor_pattern
        y = self.high_bits
        low_part = x & (self.full ^ y)
        x = (y - low_part) & y & (self.full ^ x)
        x *= self.rep_fields
        x >>= ell - 1
        x &= self.counter_mask
        if uniform_sym is not None:
            x += k << (uniform_sym * self.stride + self.counter_shift)
        return CounterWord(value=x, total=k)

    def accumulate(self, acc: CounterWord, chunk_counts: CounterWord) -> CounterWord:
        total = acc.total + chunk_counts.total
        if total > self.capacity:
            raise DomainError(
                f"counters hold at most {self.capacity} symbols, got {total}"
            )
        return CounterWord(value=acc.value + chunk_counts.value, total=total)

    def pad_correction(self, acc: CounterWord, pad: int) -> CounterWord:
        """Remove pad phantom occurrences of symbol 0."""
        if not (0 <= pad < self.chunk):
            raise DomainError(f"pad {pad} outside [0, {self.chunk})")
        if pad == 0:
            return acc
        if self.counts(acc)[0] < pad:
            raise LogicError("pad exceeds accumulated count of symbol 0")
        return CounterWord(
            value=acc.value - (pad << self.counter_shift), total=acc.total - pad
        )

    def counts(self, acc: CounterWord) -> list[int]:
        """Decode all counters; each field is read with its carry bit."""
        window = (1 << (2 * self.sym_bits + 1)) - 1
        return [
            (acc.value >> (self.counter_shift + i * self.stride)) & window
            for i in range(self.alphabet)
        ]

    # -- threshold extraction ----------------------------------------------------

    def _overflow_bits(self, acc: CounterWord, y: int) -> int:
        """One bit per symbol whose counter is >= y."""
        cap = 1 << (2 * self.sym_bits)
        if y > cap:
            return 0
        shifted = acc.value + (cap - y) * self.thresh_unit
        return shifted & self.overflow_mask

    def _drain(self, bits: int) -> list[int]:
        out = []
        while bits:
            isolated = (bits ^ (bits - 1)) & self.overflow_mask
            pos = isolated.bit_length() - 1
            out.append((pos - self.overflow_shift) // self.stride)
            bits &= bits - 1
        return out

    def threshold_extract(self, acc: CounterWord, y: int, band: str = "high"):
        """Symbols with counter >= y ("high"), in [1, y-1] ("low"), or both.

        y must satisfy 1 <= y <= capacity + 1.
        """
        cap = 1 << (2 * self.sym_bits)
        if not (1 <= y <= cap + 1):
            raise DomainError(f"threshold {y} outside [1, {cap + 1}]")
        if band not in ("high", "low", "both"):
            raise DomainError(f"unknown band {band!r}")
        high = low = None
        if band in ("high", "both"):
            high = sorted(self._drain(self._overflow_bits(acc, y)))
        if band in ("low", "both"):
            present = self._overflow_bits(acc, 1)
            below = (self._overflow_bits(acc, y) ^ self.overflow_mask) & self.overflow_mask
            low = sorted(self._drain(present & below))
        if band == "high":
            return high
        if band == "low":
            return low
        return high, low

    def count_sequence(self, symbols) -> list[int]:
        """Convenience: exact counts for up to capacity symbols."""
        syms = list(symbols)
        if len(syms) > self.capacity:
            raise DomainError(f"at most {self.capacity} symbols supported")
        acc = self.empty_counters()
        pad_total = 0
        for start in range(0, len(syms), self.chunk):
            chunk = self.pack(syms[start : start + self.chunk])
            acc = self.accumulate(acc, self.count_chunk(chunk))
            pad_total += chunk.pad
        if pad_total:
            acc = self.pad_correction(acc, pad_total)
        return self.counts(acc)

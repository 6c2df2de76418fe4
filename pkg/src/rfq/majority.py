"""Range majority queries with the fraction chosen per query.

The index preprocesses a sequence once and then answers, for any range
[lo..hi] and any fraction tau in (0, 1], the full set of symbols occurring
more than floor(tau * (hi - lo + 1)) times in the range, together with
their exact counts.  Work scales with 1/tau rather than with the range
length or the alphabet size.

Dispatch picks one of four strategies:

* empty: the threshold already meets or exceeds the range length, so no
  symbol can clear it.
* small threshold (tau < 1/sigma): every distinct symbol is a potential
  answer, so either take a full range histogram (rank verification) or
  list the distinct symbols and certify each (certificate verification).
* flagged: a candidate family matching the query's tier and scale exists;
  enumerate its set positions inside the range, then confirm or reject
  each distinct symbol found.  Symbols whose in-range leftmost occurrence
  cannot be reached from the flagged position through its occurrence
  chunk are settled in a second pass over the anchor family.
* sequential: no family covers the scale, which only happens when the
  range is short relative to 1/tau; scan it with a linked skip list
  (plain) or chunk by chunk (segmented, used when sparsification makes
  short uncovered ranges longer).

Verification styles: "check_lemma" certifies a candidate at its in-range
leftmost occurrence r with a single select probe (is occurrence r + thr
still inside the range?), while "rank" just counts with two rank calls.
Both report exact counts for every symbol returned.
"""

from __future__ import annotations

import math
import time
import warnings

import numpy as np

from .bits import SparseBitVector
from .config import IndexConfig
from .counters import QueryDiagnostics
from .errors import ConfigError, DomainError, LogicError, RangeError
from .families import (
    FlagWorkspace,
    anchor_flag_bits_slow,
    candidate_flag_bits_slow,
    expected_ones_cap,
    flags_from_bits,
)
from .listing import ListingIndex, prev_occurrence_array
from .sequence import WaveletSequence
from .serial import ByteReader, ByteWriter

_SELF_CHECK_MAX_N = 512
_MODE_ITER_GUARD = 80


def threshold_count(tau: float, length: int) -> int:
    """Occurrence threshold for a range of the given length.

    A symbol is a majority when its count strictly exceeds this value.
    The exact floating-point expression matters for boundary cases and is
    shared verbatim with the reference oracle.
    """
    return int(math.floor(tau * length))


def _tier(tau: float) -> int:
    # ceil(lg(1/tau)); frexp is exact, so tau = m * 2**e with m in [0.5, 1)
    # gives lg(1/tau) = -e + lg(1/m) with lg(1/m) in (0, 1]
    return 1 - math.frexp(tau)[1]


class MajorityIndex:
    """Query-time-threshold range majority index over a fixed sequence."""

    def __init__(
        self,
        seq: WaveletSequence,
        config: IndexConfig,
        listing: ListingIndex,
        candidate_flags: dict,
        anchor_flags: dict,
        anchor_prev: dict,
    ):
        self.seq = seq
        self.config = config
        self.listing = listing
        self.candidate_flags = candidate_flags
        self.anchor_flags = anchor_flags
        self.anchor_prev = anchor_prev
        self._anchor_listing: dict = {}
        self.diagnostics: QueryDiagnostics | None = None

    # -- public queries ---------------------------------------------------

    def query_majorities(self, lo: int, hi: int, tau: float, verify: str | None = None):
        """All (symbol, count) with count > floor(tau * range length), sorted."""
        seq = self.seq
        self._check_range(lo, hi)
        if not (isinstance(tau, (int, float)) and 0.0 < tau <= 1.0):
            raise DomainError(f"tau must be in (0, 1], got {tau!r}")
        mode = verify if verify is not None else self.config.verify_mode
        if mode not in ("check_lemma", "rank"):
            raise ConfigError(f"unknown verify mode {mode!r}")
        t0 = time.perf_counter_ns()
        snap = seq.tally.snapshot()
        diag = QueryDiagnostics(kind="majority", lo=lo, hi=hi, tau=float(tau))
        length = hi - lo + 1
        thr = threshold_count(tau, length)
        out: list[tuple[int, int]] = []
        if thr >= length:
            diag.path = "empty"
        elif tau < 1.0 / seq.sigma:
            self._small_threshold(lo, hi, thr, mode, out, diag)
        else:
            tier = _tier(tau)
            scale = length.bit_length() - 1
            if (tier, scale) in self.candidate_flags:
                self._flagged(lo, hi, thr, tier, scale, mode, out, diag)
            elif self.config.trade == 1:
                self._sequential(lo, hi, thr, mode, out, diag)
            else:
                self._segmented(lo, hi, tau, thr, mode, out, diag)
        out.sort()
        diag.ops = seq.tally.since(snap)
        diag.elapsed_ns = time.perf_counter_ns() - t0
        self.diagnostics = diag
        return out

    def query_mode(self, lo: int, hi: int) -> tuple[int, int]:
        """Most frequent symbol in [lo..hi] with its count; ties break low.

        Runs majority queries at tau = 1/2, 1/4, ... until one reports.
        Cost adapts to the mode's actual frequency.
        """
        seq = self.seq
        self._check_range(lo, hi)
        t0 = time.perf_counter_ns()
        snap = seq.tally.snapshot()
        candidates = 0
        s = 0
        while True:
            s += 1
            if s > _MODE_ITER_GUARD:
                raise LogicError("mode search failed to terminate")
            tau = 2.0 ** -s
            res = self.query_majorities(lo, hi, tau)
            candidates += self.diagnostics.candidates
            if res:
                break
        best = max(res, key=lambda sc: (sc[1], -sc[0]))
        diag = QueryDiagnostics(
            kind="mode", lo=lo, hi=hi, tau=tau, path="halving",
            candidates=candidates, iterations=s,
        )
        diag.ops = seq.tally.since(snap)
        diag.elapsed_ns = time.perf_counter_ns() - t0
        self.diagnostics = diag
        return best

    # -- public candidate-level operations ---------------------------------

    def chunk_successor(self, anchor: int, lo: int) -> int | None:
        """First occurrence of the symbol at ``anchor`` that is >= lo, if it
        falls inside the same occurrence chunk as the anchor.

        Occurrences of each symbol are cut into chunks of ``chunk_len`` by
        global rank.  Returns None when the chunk starts at or after lo (a
        predecessor chunk may hold the real leftmost) or when the whole
        chunk ends before lo.
        """
        seq = self.seq
        self._check_pos(anchor)
        a, r_k = seq.locate(anchor)
        c = self.config.chunk_len
        q = (r_k + c - 1) // c
        base = (q - 1) * c
        if q >= 2:
            i_l = seq.select(a, base)
            if i_l is None:
                raise LogicError("occurrence rank inconsistent with chunk base")
            if i_l >= lo:
                return None
        r_hi = min(q * c, seq.symbol_count(a))
        if r_hi == r_k and anchor >= lo:
            p_hi = anchor
        else:
            p_hi = seq.select(a, r_hi)
            if p_hi is None or p_hi < lo:
                return None
        r_lo = base + 1
        if r_lo == r_hi:
            return p_hi
        p_lo = anchor if r_lo == r_k else seq.select(a, r_lo)
        if p_lo >= lo:
            return p_lo
        while r_hi - r_lo > 1:
            mid = (r_lo + r_hi) // 2
            p = seq.select(a, mid)
            if p >= lo:
                r_hi, p_hi = mid, p
            else:
                r_lo = mid
        return p_hi

    def check_candidate(self, anchor: int, lo: int, hi: int, tau: float):
        """Certify the symbol occurring at ``anchor`` against [lo..hi].

        The anchor is taken as the symbol's leftmost in-range occurrence.
        Returns (symbol, count) when it clears the threshold, else
        (symbol, None).
        """
        self._check_range(lo, hi)
        self._check_pos(anchor)
        seq = self.seq
        a, r = seq.locate(anchor)
        thr = threshold_count(tau, hi - lo + 1)
        occ = self._certify(a, r, hi, thr)
        return a, occ

    # -- dispatch targets ---------------------------------------------------

    def _small_threshold(self, lo, hi, thr, mode, out, diag):
        seq = self.seq
        if mode == "rank":
            diag.path = "histogram"
            for a, occ in seq.range_counts(lo, hi).items():
                diag.candidates += 1
                if occ > thr:
                    out.append((a, occ))
            return
        diag.path = "listing"
        positions = self.listing.query_leftmost(lo, hi, seq.sigma)
        diag.probes += self.listing.last_stats["probes"]
        for k in positions:
            a, r = seq.locate(k)
            diag.candidates += 1
            occ = self._certify(a, r, hi, thr)
            if occ is not None:
                out.append((a, occ))

    def _flagged(self, lo, hi, thr, tier, scale, mode, out, diag):
        seq = self.seq
        diag.path = "flagged"
        flags = self.candidate_flags[(tier, scale)]
        decided: set[int] = set()
        deferred: set[int] = set()
        for k in flags.ones_in_range(lo, hi):
            a = seq.access(k)
            if a in decided or a in deferred:
                continue
            if mode == "rank":
                decided.add(a)
                diag.candidates += 1
                occ = seq.rank(a, hi) - seq.rank(a, lo - 1)
                if occ > thr:
                    out.append((a, occ))
                continue
            hit = self._leftmost_via_chunk(a, k, lo)
            if hit is None:
                # leftmost sits in an earlier chunk; settle via anchors
                deferred.add(a)
                continue
            decided.add(a)
            diag.candidates += 1
            occ = self._certify(a, hit[1], hi, thr)
            if occ is not None:
                out.append((a, occ))
        if deferred:
            self._anchored_phase(lo, hi, thr, tier, scale, deferred, decided, out, diag)

    def _anchored_phase(self, lo, hi, thr, tier, scale, deferred, decided, out, diag):
        """Second pass: reach deferred symbols through anchor positions.

        Any range majority has every chunk-multiple of its occurrence rank
        flagged inside the range, so its leftmost flagged anchor lies in the
        same chunk as its leftmost in-range occurrence.  Symbols that still
        fail the chunk walk are therefore not majorities.
        """
        seq = self.seq
        anchors = self.anchor_flags.get((tier, scale))
        if anchors is None or anchors.ones == 0:
            return
        s_lo = anchors.rank1(lo - 1) + 1
        s_hi = anchors.rank1(hi)
        if s_lo > s_hi:
            return
        lister = self._anchor_lister(tier, scale)
        listed = lister.query_leftmost(s_lo, s_hi, s_hi - s_lo + 1)
        diag.probes += lister.last_stats["probes"]
        for kp in listed:
            k = anchors.select1(kp)
            a = seq.access(k)
            if a in decided or a not in deferred:
                continue
            decided.add(a)
            hit = self._leftmost_via_chunk(a, k, lo)
            if hit is None:
                continue
            diag.candidates += 1
            occ = self._certify(a, hit[1], hi, thr)
            if occ is not None:
                out.append((a, occ))

    def _sequential(self, lo, hi, thr, mode, out, diag):
        """Scan a short range once, skipping processed symbols as we go."""
        seq = self.seq
        diag.path = "sequential"
        span = hi - lo + 1
        nxt = list(range(1, span + 2))
        prv = list(range(-1, span + 1))

        def drop(node):
            nxt[prv[node]] = nxt[node]
            if nxt[node] <= span:
                prv[nxt[node]] = prv[node]

        cur = nxt[0]
        while cur <= span:
            k = lo + cur - 1
            diag.candidates += 1
            if mode == "rank":
                a = seq.access(k)
                r = seq.rank(a, lo - 1) + 1
                occ = seq.rank(a, hi) - r + 1
                for s in range(1, occ):
                    p = seq.select(a, r + s)
                    drop(p - lo + 1)
            else:
                a, r = seq.locate(k)
                occ = 1
                while True:
                    p = seq.select(a, r + occ)
                    if p is None or p > hi:
                        break
                    drop(p - lo + 1)
                    occ += 1
            if occ > thr:
                out.append((a, occ))
            drop(cur)
            cur = nxt[0]

    def _segmented(self, lo, hi, tau, thr, mode, out, diag):
        """Chunked scan for sparsified indexes.

        Processes ceil(1/tau)-element segments left to right.  Known
        majorities get their occurrences inside each segment deleted up
        front, so each contributes O(1) extra work per segment; every
        remaining head is certified against the full range.
        """
        seq = self.seq
        diag.path = "segmented"
        m = max(1, math.ceil(1.0 / tau))
        known: dict[int, int] = {}  # reported majority -> last deleted occurrence
        reported: set[int] = set()
        x = lo
        while x <= hi:
            y = min(x + m - 1, hi)
            span = y - x + 1
            nxt = list(range(1, span + 2))
            prv = list(range(-1, span + 1))

            def drop(node):
                nxt[prv[node]] = nxt[node]
                if nxt[node] <= span:
                    prv[nxt[node]] = prv[node]

            for a in list(known):
                r_last = seq.partial_rank(known[a])
                while True:
                    p = seq.select(a, r_last + 1)
                    if p is None or p > y:
                        break
                    r_last += 1
                    known[a] = p
                    drop(p - x + 1)
            cur = nxt[0]
            while cur <= span:
                k = x + cur - 1
                a, r = seq.locate(k)
                diag.candidates += 1
                occ = None
                if mode == "rank":
                    occ = seq.rank(a, hi) - seq.rank(a, lo - 1)
                    maj = occ > thr
                else:
                    p_t = seq.select(a, r + thr)
                    maj = p_t is not None and p_t <= hi
                if maj and a not in reported:
                    # first head of a true majority is its range-leftmost
                    if occ is None:
                        occ = seq.rank(a, hi) - r + 1
                    out.append((a, occ))
                    reported.add(a)
                last = k
                rr = r
                while True:
                    p = seq.select(a, rr + 1)
                    if p is None or p > y:
                        break
                    rr += 1
                    last = p
                    drop(p - x + 1)
                drop(cur)
                if maj:
                    known[a] = last
                cur = nxt[0]
            x = y + 1

    # -- helpers ------------------------------------------------------------

    def _certify(self, a: int, r: int, hi: int, thr: int) -> int | None:
        """Exact count of a in [select(a, r) .. hi] if above thr, else None.

        One select settles the verdict; the count costs one more rank and
        is only paid for actual majorities.
        """
        seq = self.seq
        p = seq.select(a, r + thr)
        if p is None or p > hi:
            return None
        return seq.rank(a, hi) - r + 1

    def _leftmost_via_chunk(self, a: int, anchor: int, lo: int):
        """(position, rank) of a's first occurrence >= lo, when that sits in
        the anchor's occurrence chunk; None when an earlier chunk holds it."""
        seq = self.seq
        r_k = seq.partial_rank(anchor)
        c = self.config.chunk_len
        q = (r_k + c - 1) // c
        base = (q - 1) * c
        if q >= 2:
            i_l = seq.select(a, base)
            if i_l >= lo:
                return None
        if r_k == base + 1:
            return anchor, r_k
        r_lo = base + 1
        p_lo = seq.select(a, r_lo)
        if p_lo >= lo:
            return p_lo, r_lo
        r_hi, p_hi = r_k, anchor
        while r_hi - r_lo > 1:
            mid = (r_lo + r_hi) // 2
            p = seq.select(a, mid)
            if p >= lo:
                r_hi, p_hi = mid, p
            else:
                r_lo = mid
        return p_hi, r_hi

    def _anchor_lister(self, tier, scale) -> ListingIndex:
        key = (tier, scale)
        li = self._anchor_listing.get(key)
        if li is None:
            li = ListingIndex.build_from_values(self.anchor_prev[key], self.config.trade)
            self._anchor_listing[key] = li
        return li

    def _check_range(self, lo, hi):
        n = self.seq.n
        if not (1 <= lo <= n and 1 <= hi <= n):
            raise RangeError(f"range [{lo}, {hi}] outside 1..{n}")
        if lo > hi:
            raise RangeError(f"empty range [{lo}, {hi}]")

    def _check_pos(self, k):
        if not (1 <= k <= self.seq.n):
            raise RangeError(f"position {k} outside 1..{self.seq.n}")

    # -- space and serialization ---------------------------------------------

    def family_keys(self) -> list[tuple[int, int]]:
        return sorted(self.candidate_flags)

    def size_report(self) -> dict:
        cand = sum(v.size_bits() for v in self.candidate_flags.values())
        anch = sum(v.size_bits() for v in self.anchor_flags.values())
        prev = sum(32 * int(v.size) + 32 for v in self.anchor_prev.values())
        return {
            "sequence_bits": self.seq.size_bits(),
            "listing_bits": self.listing.size_bits(),
            "candidate_bits": cand,
            "anchor_bits": anch,
            "anchor_prev_bits": prev,
        }

    def write_families(self, w: ByteWriter) -> None:
        keys = self.family_keys()
        w.u16(len(keys))
        for t, b in keys:
            w.u8(t)
            w.u8(b)
            w.blob(self.candidate_flags[(t, b)].to_bytes())
            w.blob(self.anchor_flags[(t, b)].to_bytes())
            w.np_u32(self.anchor_prev[(t, b)].astype(np.uint32))

    @staticmethod
    def read_families(r: ByteReader):
        from .bits import bitvector_from_bytes

        cand: dict = {}
        anch: dict = {}
        prev: dict = {}
        for _ in range(r.u16()):
            t = r.u8()
            b = r.u8()
            cand[(t, b)] = bitvector_from_bytes(r.blob())
            anch[(t, b)] = bitvector_from_bytes(r.blob())
            prev[(t, b)] = r.np_u32().astype(np.int64)
        return cand, anch, prev


def build_majority_index(
    data,
    config: IndexConfig | None = None,
    seq: WaveletSequence | None = None,
    listing: ListingIndex | None = None,
) -> MajorityIndex:
    """Build the majority side of the index: sequence, listing, families."""
    config = config or IndexConfig()
    if seq is None:
        seq = WaveletSequence.build(data, arity=config.arity, compressed=config.compressed)
    if listing is None:
        listing = ListingIndex.for_sequence(seq, config.trade)
    raw = seq.to_array()
    cand: dict = {}
    anch: dict = {}
    prev: dict = {}
    if seq.n >= config.family_min_n:
        ws = FlagWorkspace(raw)
        check = config.build_check == "always" or (
            config.build_check == "auto" and seq.n <= _SELF_CHECK_MAX_N
        )
        t_max = (seq.sigma - 1).bit_length()
        b_max = seq.n.bit_length() - 1
        # tier 0 would serve only tau = 1.0, which the empty path already settles
        for t in range(1, t_max + 1):
            b_lo = max(t, 1) if config.full_family_range else max(config.scale_cutoff(t), 1)
            for b in range(b_lo, b_max + 1):
                qual = ws.window_qualifies(1 << (b + 1), 1 << (b - t))
                gbits = ws.candidate_bits(t, b, qual=qual)
                jbits = ws.anchor_bits(t, b, config.chunk_len, qual=qual)
                if check:
                    if not np.array_equal(gbits, candidate_flag_bits_slow(raw, t, b)):
                        raise LogicError(f"candidate flags self-check failed at {(t, b)}")
                    if not np.array_equal(
                        jbits, anchor_flag_bits_slow(raw, t, b, config.chunk_len)
                    ):
                        raise LogicError(f"anchor flags self-check failed at {(t, b)}")
                g_ones = int(gbits.sum())
                if g_ones > expected_ones_cap(seq.n, t, b):
                    warnings.warn(
                        f"candidate family {(t, b)} denser than expected: {g_ones} flags",
                        RuntimeWarning,
                        stacklevel=2,
                    )
                cand[(t, b)] = flags_from_bits(gbits)
                anch[(t, b)] = flags_from_bits(jbits)
                marked = np.flatnonzero(jbits)
                prev[(t, b)] = prev_occurrence_array(raw[marked])
    return MajorityIndex(seq, config, listing, cand, anch, prev)

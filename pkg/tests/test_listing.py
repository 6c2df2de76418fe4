"""Distinct-element listing over the previous-occurrence array."""

import random

import numpy as np
import pytest

from rfq import oracle
from rfq.errors import RangeError
from rfq.listing import ListingIndex, block_minima, prev_occurrence_array
from rfq.sequence import WaveletSequence
from rfq.serial import ByteReader, ByteWriter


def test_prev_occurrence_array_frozen(canon):
    got = prev_occurrence_array(np.asarray(canon))
    assert got.tolist() == [0, 0, 0, 1, 0, 4, 0, 6, 2, 3, 8]


def test_block_minima_frozen():
    c = np.asarray([0, 0, 0, 1, 0, 4, 0, 6, 2, 3, 8])
    assert block_minima(c, 4).tolist() == [0, 0, 2]
    assert block_minima(c, 1).tolist() == c.tolist()
    assert block_minima(c, 100).tolist() == [0]


def test_query_frozen(canon, canon_seq):
    lister = ListingIndex.for_sequence(canon_seq, 1)
    got = lister.query_leftmost(4, 8)
    assert sorted(got) == [4, 5, 7]
    # each position is the leftmost occurrence of a distinct symbol
    assert {(canon[k - 1], k) for k in got} == \
        oracle.oracle_distinct_with_leftmost(canon, 4, 8)


def test_limit_stops_early(canon_seq):
    lister = ListingIndex.for_sequence(canon_seq, 1)
    got = lister.query_leftmost(1, 11, limit=2)
    assert len(got) == 2
    assert lister.query_leftmost(1, 11, limit=0) == []


def test_range_validation(canon_seq):
    lister = ListingIndex.for_sequence(canon_seq, 1)
    with pytest.raises(RangeError):
        lister.query_leftmost(0, 5)
    with pytest.raises(RangeError):
        lister.query_leftmost(1, 12)
    assert lister.query_leftmost(5, 4) == []


@pytest.mark.parametrize("block", [1, 2, 8, 64])
def test_sparsified_equivalence(block):
    rng = random.Random(block)
    for _ in range(25):
        n = rng.randint(1, 300)
        sigma = min(n, rng.choice([2, 5, 30]))
        data = [rng.randint(1, sigma) for _ in range(n)]
        for a, k in zip(range(1, sigma + 1), rng.sample(range(n), sigma)):
            data[k] = a
        seq = WaveletSequence.build(np.asarray(data))
        lister = ListingIndex.for_sequence(seq, block)
        for _ in range(20):
            lo = rng.randint(1, n)
            hi = rng.randint(lo, n)
            got = lister.query_leftmost(lo, hi)
            want = oracle.oracle_distinct_with_leftmost(data, lo, hi)
            assert {(data[k - 1], k) for k in got} == want
            reported = lister.last_stats["reported"]
            assert reported == len(want)
            assert lister.last_stats["probes"] <= block * (2 * reported + 2)


def test_probe_accounting_routes_through_sequence(canon_seq):
    sparse = ListingIndex.for_sequence(canon_seq, 4)
    snap = canon_seq.tally.snapshot()
    sparse.query_leftmost(4, 8)
    assert canon_seq.tally.since(snap).sequence_ops > 0

    full = ListingIndex.for_sequence(canon_seq, 1)
    full.query_leftmost(4, 8)
    snap = canon_seq.tally.snapshot()
    full.query_leftmost(4, 8)
    # stored array answers the probes; the sequence is never consulted
    assert canon_seq.tally.since(snap).sequence_ops == 0


def test_build_from_values_matches_for_sequence(canon, canon_seq):
    c = prev_occurrence_array(np.asarray(canon))
    direct = ListingIndex.build_from_values(c, 2)
    attached = ListingIndex.for_sequence(canon_seq, 2)
    for lo in range(1, 12):
        for hi in range(lo, 12):
            assert sorted(direct.query_leftmost(lo, hi)) == \
                sorted(attached.query_leftmost(lo, hi))


@pytest.mark.parametrize("block", [1, 8])
def test_serialization_round_trip(block, canon_seq):
    lister = ListingIndex.for_sequence(canon_seq, block)
    w = ByteWriter()
    lister.write_to(w)
    blob = w.getvalue()
    back = ListingIndex.read_from(ByteReader(blob))
    back.attach_sequence(canon_seq)
    w2 = ByteWriter()
    back.write_to(w2)
    assert w2.getvalue() == blob
    for lo, hi in [(1, 11), (4, 8), (2, 2)]:
        assert sorted(back.query_leftmost(lo, hi)) == \
            sorted(lister.query_leftmost(lo, hi))

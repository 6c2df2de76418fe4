"""Order-statistics sequence: access/rank/select and friends."""

import math
import random
from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rfq.errors import DomainError, RangeError
from rfq.sequence import WaveletSequence
from rfq.serial import ByteReader


def build(values, **kw):
    return WaveletSequence.build(np.asarray(values, dtype=np.int64), **kw)


# -- frozen behavior on the canonical string -------------------------------------


def test_frozen_ops(canon_seq):
    s = canon_seq
    assert s.n == 11 and s.sigma == 5
    assert s.access(5) == 4
    assert s.rank(1, 5) == 2
    assert s.rank(3, 11) == 2
    assert s.rank(4, 0) == 0
    assert s.select(1, 3) == 6
    assert s.select(5, 2) is None
    assert s.partial_rank(6) == 3
    assert s.locate(4) == (1, 2)
    assert s.prev_occurrence(4) == 1
    assert s.prev_occurrence(2) == 0
    assert s.prev_occurrence(11) == 8
    assert s.range_counts(4, 8) == {1: 3, 4: 1, 5: 1}
    assert s.range_counts(1, 11) == {1: 5, 2: 2, 3: 2, 4: 1, 5: 1}
    assert s.to_array().tolist() == [1, 2, 3, 1, 4, 1, 5, 1, 2, 3, 1]


def test_symbol_counts_and_entropy(canon_seq):
    assert [canon_seq.symbol_count(a) for a in range(1, 6)] == [5, 2, 2, 1, 1]
    want = sum((c / 11) * math.log2(11 / c) for c in (5, 2, 2, 1, 1))
    assert canon_seq.entropy_h0() == pytest.approx(want)


def test_validation(canon_seq):
    with pytest.raises(RangeError):
        canon_seq.access(0)
    with pytest.raises(RangeError):
        canon_seq.access(12)
    with pytest.raises(RangeError):
        canon_seq.rank(1, 12)
    with pytest.raises(DomainError):
        canon_seq.rank(6, 3)
    with pytest.raises(DomainError):
        canon_seq.select(0, 1)
    with pytest.raises(RangeError):
        canon_seq.select(1, 0)
    with pytest.raises(RangeError):
        canon_seq.range_counts(5, 4)


def test_rejects_sparse_alphabet():
    with pytest.raises(DomainError):
        build([1, 3, 1])  # symbol 2 never occurs


def test_rejects_bad_arity():
    with pytest.raises(Exception):
        build([1, 2, 1], arity=3)


# -- randomized equivalence against direct counting -------------------------------


@pytest.mark.parametrize("arity", [2, 4, 16])
@pytest.mark.parametrize("compressed", [False, True])
def test_random_vs_brute(arity, compressed):
    rng = random.Random(arity * 2 + compressed)
    for trial in range(8):
        n = rng.randint(1, 500)
        sigma = rng.choice([1, 2, 3, 7, 40, 257])
        if sigma > n:
            sigma = n
        data = [rng.randint(1, sigma) for _ in range(n)]
        for a, k in zip(range(1, sigma + 1), rng.sample(range(n), sigma)):
            data[k] = a  # keep the alphabet dense
        seq = build(data, arity=arity, compressed=compressed)
        assert seq.to_array().tolist() == data
        for _ in range(60):
            k = rng.randint(1, n)
            a = rng.randint(1, sigma)
            assert seq.access(k) == data[k - 1]
            assert seq.rank(a, k) == data[:k].count(a)
            assert seq.partial_rank(k) == data[:k].count(data[k - 1])
            r = rng.randint(1, max(1, data.count(a)))
            want = [i + 1 for i, v in enumerate(data) if v == a]
            assert seq.select(a, r) == (want[r - 1] if r <= len(want) else None)
            prev = [i + 1 for i, v in enumerate(data[:k - 1]) if v == data[k - 1]]
            assert seq.prev_occurrence(k) == (prev[-1] if prev else 0)
        lo = rng.randint(1, n)
        hi = rng.randint(lo, n)
        assert seq.range_counts(lo, hi) == dict(Counter(data[lo - 1:hi]))


def test_single_symbol_alphabet():
    seq = build([1] * 9)
    assert seq.sigma == 1
    assert seq.access(4) == 1
    assert seq.rank(1, 9) == 9
    assert seq.select(1, 9) == 9
    assert seq.select(1, 10) is None
    assert seq.partial_rank(7) == 7
    assert seq.range_counts(2, 5) == {1: 4}
    assert seq.size_bits() < 4000


# -- operation accounting ----------------------------------------------------------


def test_tally_policy(canon_seq):
    s = canon_seq
    snap = s.tally.snapshot()
    s.rank(1, 5)
    s.select(1, 1)
    s.access(3)
    s.partial_rank(2)
    d = s.tally.since(snap)
    assert (d.ranks, d.selects, d.accesses, d.partial_ranks) == (1, 1, 1, 1)
    # plain symbol reads do not count toward the work bound
    assert d.sequence_ops == 3

    snap = s.tally.snapshot()
    s.locate(4)
    d = s.tally.since(snap)
    assert (d.accesses, d.partial_ranks, d.ranks, d.selects) == (1, 1, 0, 0)

    snap = s.tally.snapshot()
    s.prev_occurrence(2)  # first occurrence: no select needed
    assert s.tally.since(snap).selects == 0
    snap = s.tally.snapshot()
    s.prev_occurrence(11)
    assert s.tally.since(snap).selects == 1


# -- serialization and size ---------------------------------------------------------


@pytest.mark.parametrize("arity", [2, 4, 16])
@pytest.mark.parametrize("compressed", [False, True])
def test_bytes_round_trip(arity, compressed):
    rng = random.Random(10 * arity + compressed)
    data = [rng.randint(1, 37) for _ in range(800)]
    for a, k in zip(range(1, 38), rng.sample(range(800), 37)):
        data[k] = a
    seq = build(data, arity=arity, compressed=compressed)
    blob = seq.to_bytes()
    back = WaveletSequence.read_from(ByteReader(blob))
    assert back.to_bytes() == blob
    assert back.to_array().tolist() == data
    assert back.n == seq.n and back.sigma == seq.sigma
    for k in range(1, 801, 41):
        assert back.access(k) == seq.access(k)
        assert back.rank(5, k) == seq.rank(5, k)


@pytest.mark.parametrize("n,sigma", [(5000, 657), (20000, 953)])
def test_plain_size_envelope(n, sigma):
    rng = random.Random(n)
    data = [rng.randint(1, sigma) for _ in range(n)]
    for a, k in zip(range(1, sigma + 1), rng.sample(range(n), sigma)):
        data[k] = a
    seq = build(data)
    cap = 1.25 * n * math.ceil(math.log2(sigma)) + 8192
    assert seq.size_bits() <= cap


def test_compressed_no_larger_on_skewed_data():
    rng = random.Random(3)
    data = [1] * 3000 + [rng.randint(2, 16) for _ in range(200)]
    rng.shuffle(data)
    for a, k in zip(range(2, 17), rng.sample(range(len(data)), 15)):
        data[k] = a
    plain = build(data)
    comp = build(data, compressed=True)
    assert comp.size_bits() <= plain.size_bits()
    assert comp.to_array().tolist() == plain.to_array().tolist()


# -- properties ---------------------------------------------------------------------


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(1, 6), min_size=1, max_size=120), st.data())
def test_rank_select_inverse(values, data):
    sigma = max(values)
    values = values + list(range(1, sigma + 1))  # densify
    seq = build(values)
    a = data.draw(st.integers(1, sigma))
    total = values.count(a)
    r = data.draw(st.integers(1, total))
    p = seq.select(a, r)
    assert p is not None
    assert seq.rank(a, p) == r
    assert seq.rank(a, p - 1) == r - 1
    assert seq.access(p) == a


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(1, 4), min_size=1, max_size=80))
def test_partial_rank_matches_rank(values):
    values = values + [1, 2, 3, 4]
    seq = build(values)
    for k in range(1, len(values) + 1):
        assert seq.partial_rank(k) == seq.rank(values[k - 1], k)

"""Wide-register counting kernel against scalar counting."""

import itertools
import random
from collections import Counter

import pytest

from rfq.errors import ConfigError, DomainError
from rfq.swar import TinyAlphabetKernel


def brute_counts(symbols, alphabet):
    c = Counter(symbols)
    return [c.get(a, 0) for a in range(alphabet)]


def test_rejects_unsupported_alphabets():
    for bad in (0, 1, 17, 300):
        with pytest.raises(ConfigError):
            TinyAlphabetKernel(bad)


def test_frozen_small_chunk():
    k = TinyAlphabetKernel(4)
    acc = k.count_chunk(k.pack([0, 1, 1, 3]))
    assert k.counts(acc) == [1, 2, 0, 1]
    assert k.threshold_extract(acc, 2) == [1]
    assert k.threshold_extract(acc, 1) == [0, 1, 3]
    assert k.threshold_extract(acc, 2, band="low") == [0, 3]
    high, low = k.threshold_extract(acc, 2, band="both")
    assert (high, low) == ([1], [0, 3])


@pytest.mark.parametrize("alphabet", [2, 3, 4])
def test_exhaustive_single_chunks(alphabet):
    """Every chunk content, every fill level, every legal threshold."""
    k = TinyAlphabetKernel(alphabet)
    cap = 1 << (2 * k.sym_bits)
    assert k.count_sequence([]) == [0] * alphabet
    for length in range(1, k.chunk + 1):
        for syms in itertools.product(range(alphabet), repeat=length):
            chunk = k.pack(syms)
            acc = k.count_chunk(chunk)
            acc = k.pad_correction(acc, chunk.pad)
            want = brute_counts(syms, alphabet)
            assert k.counts(acc) == want
            for y in range(1, cap + 2):
                assert k.threshold_extract(acc, y) == [
                    a for a in range(alphabet) if want[a] >= y]
                assert k.threshold_extract(acc, y, band="low") == [
                    a for a in range(alphabet) if 1 <= want[a] < y]


def test_exhaustive_accumulation_binary():
    """All sequences up to capacity for the two-symbol kernel."""
    k = TinyAlphabetKernel(2)
    for length in range(0, k.capacity + 1):
        for syms in itertools.product((0, 1), repeat=length):
            assert k.count_sequence(syms) == brute_counts(syms, 2)


def test_exhaustive_two_chunk_pairs_quaternary():
    k = TinyAlphabetKernel(4)
    for left in itertools.product(range(4), repeat=4):
        for right in itertools.product(range(4), repeat=4):
            acc = k.accumulate(k.count_chunk(k.pack(left)),
                               k.count_chunk(k.pack(right)))
            assert k.counts(acc) == brute_counts(left + right, 4)


@pytest.mark.parametrize("alphabet,cases", [(8, 50_000), (16, 50_000)])
def test_randomized_larger_alphabets(alphabet, cases):
    k = TinyAlphabetKernel(alphabet)
    rng = random.Random(alphabet)
    for i in range(cases):
        length = rng.randint(0, k.capacity)
        syms = [rng.randrange(alphabet) for _ in range(length)]
        want = brute_counts(syms, alphabet)
        assert k.count_sequence(syms) == want
        if i % 10 == 0 and length:
            acc = k.empty_counters()
            pad = 0
            for start in range(0, length, k.chunk):
                chunk = k.pack(syms[start:start + k.chunk])
                acc = k.accumulate(acc, k.count_chunk(chunk))
                pad += chunk.pad
            acc = k.pad_correction(acc, pad) if pad else acc
            y = rng.randint(1, (1 << (2 * k.sym_bits)) + 1)
            assert k.threshold_extract(acc, y) == [
                a for a in range(alphabet) if want[a] >= y]


def test_uniform_chunk_wrap_is_corrected():
    # power-of-two alphabets: all-equal chunks wrap the counter field
    for alphabet in (2, 4, 8, 16):
        k = TinyAlphabetKernel(alphabet)
        for s in range(alphabet):
            acc = k.count_chunk(k.pack([s] * k.chunk))
            want = [0] * alphabet
            want[s] = k.chunk
            assert k.counts(acc) == want


def test_capacity_and_domain_errors():
    k = TinyAlphabetKernel(4)
    with pytest.raises(DomainError):
        k.pack([0] * 5)
    with pytest.raises(DomainError):
        k.pack([4])
    with pytest.raises(DomainError):
        k.count_sequence([0] * (k.capacity + 1))
    with pytest.raises(DomainError):
        k.threshold_extract(k.empty_counters(), 0)
    with pytest.raises(DomainError):
        k.threshold_extract(k.empty_counters(), 99)
    with pytest.raises(DomainError):
        k.threshold_extract(k.empty_counters(), 2, band="sideways")


def test_pad_correction_validation():
    k = TinyAlphabetKernel(4)
    acc = k.count_chunk(k.pack([1, 2]))  # two pad fields counted as zeros
    fixed = k.pad_correction(acc, 2)
    assert k.counts(fixed) == [0, 1, 1, 0]
    with pytest.raises(DomainError):
        k.pad_correction(acc, 4)

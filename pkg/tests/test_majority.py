"""Query-time-fraction range majority index against the oracle."""

import math
import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rfq import IndexConfig, build_majority_index, oracle, threshold_count
from rfq.corpus import uniform_string, zipf_string
from rfq.errors import ConfigError, DomainError, RangeError

CANON = [1, 2, 3, 1, 4, 1, 5, 1, 2, 3, 1]


@pytest.fixture(scope="module")
def canon_idx():
    return build_majority_index(
        np.asarray(CANON), IndexConfig(trade=1, chunk_len=2, build_check="always"))


def ops_cap(tau: float, trade: int) -> int:
    return 64 * math.ceil(1.0 / tau) * trade * trade


# -- frozen queries --------------------------------------------------------------


def test_frozen_queries(canon_idx):
    assert canon_idx.query_majorities(4, 8, 0.5) == [(1, 3)]
    assert canon_idx.query_majorities(1, 11, 0.5) == []
    assert canon_idx.query_majorities(1, 11, 0.2) == [(1, 5)]
    assert canon_idx.query_majorities(1, 11, 1.0) == []
    assert canon_idx.query_majorities(6, 6, 0.9) == [(1, 1)]
    assert canon_idx.query_majorities(1, 11, 0.05) == [
        (1, 5), (2, 2), (3, 2), (4, 1), (5, 1)]


def test_frozen_chunk_successor(canon_idx):
    # symbol 1 occurs at 1, 4, 6, 8, 11; chunks pair consecutive occurrences
    assert canon_idx.chunk_successor(8, 5) == 6
    assert canon_idx.chunk_successor(8, 8) == 8
    assert canon_idx.chunk_successor(8, 9) is None  # next occurrence leaves the chunk
    assert canon_idx.chunk_successor(8, 3) is None  # successor precedes the chunk


def test_frozen_check_candidate(canon_idx):
    assert canon_idx.check_candidate(4, 4, 8, 0.5) == (1, 3)
    assert canon_idx.check_candidate(7, 4, 8, 0.5) == (5, None)
    # threshold 0: a single occurrence already clears it
    assert canon_idx.check_candidate(7, 4, 8, 0.05) == (5, 1)


def test_verify_modes_agree(canon_idx):
    for lo in range(1, 12):
        for hi in range(lo, 12):
            for tau in (1.0, 0.6, 0.5, 0.3, 0.09):
                a = canon_idx.query_majorities(lo, hi, tau, verify="check_lemma")
                b = canon_idx.query_majorities(lo, hi, tau, verify="rank")
                assert a == b == oracle.oracle_majorities(CANON, lo, hi, tau)


def test_threshold_matches_oracle_expression():
    for tau, ln in [(0.5, 4), (0.25, 8), (1.0, 7), (1 / 3, 9), (0.05, 11)]:
        assert threshold_count(tau, ln) == oracle.majority_threshold(tau, ln)


@given(st.floats(1e-6, 1.0, allow_nan=False), st.integers(1, 10**6))
def test_threshold_expression_property(tau, ln):
    assert threshold_count(tau, ln) == oracle.majority_threshold(tau, ln)


# -- validation --------------------------------------------------------------------


def test_validation(canon_idx):
    with pytest.raises(RangeError):
        canon_idx.query_majorities(0, 5, 0.5)
    with pytest.raises(RangeError):
        canon_idx.query_majorities(1, 12, 0.5)
    with pytest.raises(RangeError):
        canon_idx.query_majorities(7, 6, 0.5)
    with pytest.raises(DomainError):
        canon_idx.query_majorities(1, 5, 0.0)
    with pytest.raises(DomainError):
        canon_idx.query_majorities(1, 5, 1.001)
    with pytest.raises(ConfigError):
        canon_idx.query_majorities(1, 5, 0.5, verify="guess")


# -- dispatch paths ----------------------------------------------------------------


def test_paths_small_index(canon_idx):
    canon_idx.query_majorities(4, 8, 1.0)
    assert canon_idx.diagnostics.path == "empty"
    canon_idx.query_majorities(1, 11, 0.05, verify="rank")
    assert canon_idx.diagnostics.path == "histogram"
    canon_idx.query_majorities(1, 11, 0.05, verify="check_lemma")
    assert canon_idx.diagnostics.path == "listing"
    canon_idx.query_majorities(1, 11, 0.5)
    assert canon_idx.diagnostics.path == "sequential"


def test_flagged_and_segmented_paths():
    data = uniform_string(256, 4, seed=3)
    flagged = build_majority_index(data, IndexConfig(trade=1, build_check="always"))
    flagged.query_majorities(65, 128, 0.5)
    assert flagged.diagnostics.path == "flagged"

    small = uniform_string(40, 4, seed=3)
    seg = build_majority_index(small, IndexConfig(trade=4, build_check="always"))
    seg.query_majorities(1, 40, 0.5)
    assert seg.diagnostics.path == "segmented"
    ref = small.tolist()
    for lo, hi, tau in [(1, 40, 0.5), (3, 30, 0.25), (10, 17, 0.13)]:
        assert seg.query_majorities(lo, hi, tau) == \
            oracle.oracle_majorities(ref, lo, hi, tau)


def test_flagged_path_with_no_set_bits_in_range():
    # all symbols distinct in the probed window: family exists, zero flags land
    data = np.asarray(([1, 2, 3, 4, 5, 6, 7, 8] * 40)[:320])
    idx = build_majority_index(data, IndexConfig(trade=1, build_check="always"))
    got = idx.query_majorities(9, 24, 0.5)
    assert got == oracle.oracle_majorities(data.tolist(), 9, 24, 0.5) == []


# -- randomized equivalence ----------------------------------------------------------


@pytest.mark.parametrize("cfg", [
    IndexConfig(trade=1, build_check="always"),
    IndexConfig(trade=1, verify_mode="rank", build_check="always"),
    IndexConfig(trade=8, chunk_len=5, build_check="always"),
    IndexConfig(trade=2, compressed=True, arity=4, build_check="always"),
    IndexConfig(trade=1, family_min_n=4, chunk_len=2, build_check="always"),
])
def test_random_vs_oracle(cfg):
    rng = random.Random(str(cfg).__hash__() % 10**6)
    for trial in range(6):
        n = rng.choice([3, 17, 63, 64, 150, 700])
        sigma = min(n, rng.choice([2, 5, 16, 100]))
        if rng.random() < 0.5:
            data = zipf_string(n, sigma, skew=1.1, seed=rng.randrange(10**6))
        else:
            data = uniform_string(n, sigma, seed=rng.randrange(10**6))
        sigma_eff = int(data.max())
        idx = build_majority_index(data, cfg)
        ref = data.tolist()
        for _ in range(25):
            lo = rng.randint(1, n)
            hi = rng.randint(lo, n)
            tau = rng.choice([1.0, 0.9, 0.5, 0.2, 0.05,
                              1.0 / sigma_eff, 0.5 / sigma_eff])
            got = idx.query_majorities(lo, hi, tau)
            assert got == oracle.oracle_majorities(ref, lo, hi, tau)
            d = idx.diagnostics
            cap = 64 * math.ceil(1.0 / tau)
            if tau < 1.0 / sigma_eff:
                cap += sigma_eff
            assert d.candidates <= cap
            assert d.ops.sequence_ops <= ops_cap(tau, cfg.trade)


def test_exact_boundary_exclusion():
    # count == tau * len exactly: strictly-more-than keeps the element out
    data = np.asarray([1, 2, 1, 3])
    idx = build_majority_index(data, IndexConfig(build_check="always"))
    assert idx.query_majorities(1, 4, 0.5) == []
    assert idx.query_majorities(1, 4, 0.5, verify="rank") == []
    # one epsilon below the boundary flips it
    assert idx.query_majorities(1, 4, 0.49) == [(1, 2)]


# -- mode ---------------------------------------------------------------------------


def iter_bound(length: int, occ: int) -> int:
    k = 0
    while occ << k < length:
        k += 1
    return k + 1


def test_mode_frozen(canon_idx):
    assert canon_idx.query_mode(1, 11) == (1, 5)
    assert canon_idx.diagnostics.iterations == 2
    assert canon_idx.query_mode(2, 3) == (2, 1)
    assert canon_idx.query_mode(5, 5) == (4, 1)


def test_mode_random_vs_oracle():
    rng = random.Random(77)
    for trial in range(10):
        n = rng.choice([5, 64, 300])
        sigma = min(n, rng.choice([2, 6, 30]))
        data = zipf_string(n, sigma, skew=1.2, seed=trial)
        idx = build_majority_index(data, IndexConfig(build_check="always"))
        ref = data.tolist()
        for _ in range(30):
            lo = rng.randint(1, n)
            hi = rng.randint(lo, n)
            got = idx.query_mode(lo, hi)
            assert got == oracle.oracle_mode(ref, lo, hi)
            assert idx.diagnostics.iterations <= iter_bound(hi - lo + 1, got[1])


# -- diagnostics -----------------------------------------------------------------------


def test_diagnostics_shape(canon_idx):
    out = canon_idx.query_majorities(4, 8, 0.5)
    d = canon_idx.diagnostics
    assert d.kind == "majority"
    assert (d.lo, d.hi, d.tau) == (4, 8, 0.5)
    assert d.candidates >= len(out)
    assert d.elapsed_ns > 0
    flat = d.as_dict()
    assert flat["path"] == d.path
    assert flat["sequence_ops"] == d.ops.sequence_ops

    canon_idx.query_mode(1, 11)
    assert canon_idx.diagnostics.kind == "mode"
    assert canon_idx.diagnostics.path == "halving"

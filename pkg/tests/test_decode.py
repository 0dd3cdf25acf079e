from itertools import product
from math import comb

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from listlab.channel import ERASED, hamming_distance
from listlab.codes import LinearCode, random_linear_code, rs_code
from listlab.decode import (ball_list_decode, erasure_list_decode, rs_error_location_decode,
                            rs_neighbor_search, rs_subset_decode)
from listlab.field import field_build, field_of_order


def brute_words(code):
    q = code.field.q
    return {code.encode(m) for m in product(range(q), repeat=code.k)}


def brute_ball(code, y, radius):
    return sorted(c for c in brute_words(code) if hamming_distance(c, y) <= radius)


def brute_consistent(code, y):
    return sorted(c for c in brute_words(code)
                  if all(v is ERASED or v == u for u, v in zip(c, y)))


def test_worked_examples():
    C = rs_code(field_build(5), 4, 1)
    y = (1, 1, 2, 3)
    assert ball_list_decode(C, y, 2).codewords == ((1, 1, 1, 1),)
    r = rs_neighbor_search(C, y, 2)
    assert r.codewords == ((1, 1, 1, 1),) and r.work == 4
    r = rs_subset_decode(C, y, 2)
    assert r.codewords == ((1, 1, 1, 1),) and r.work == 6
    r = rs_error_location_decode(C, (1, 1, 1, 2), 1)
    assert r.codewords == ((1, 1, 1, 1),) and r.work == 4
    ident = LinearCode(field_build(2), np.eye(2, dtype=np.int64))
    r = erasure_list_decode(ident, (ERASED, 1))
    assert r.codewords == ((0, 1), (1, 1)) and r.dimension == 1


def test_repetition_with_erasures():
    rep = LinearCode(field_build(2), [[1, 1, 1]])
    r = erasure_list_decode(rep, (1, ERASED, ERASED))
    assert r.codewords == ((1, 1, 1),) and r.dimension == 0
    assert erasure_list_decode(rep, (1, 0, ERASED)).list_size == 0


def test_all_erased_gives_whole_code():
    C = rs_code(field_build(7), 5, 3)
    r = erasure_list_decode(C, (ERASED,) * 5)
    assert r.dimension == 3 and r.list_size == 343
    assert list(r.codewords) == sorted(brute_words(C))


def test_truncation_flag():
    C = rs_code(field_of_order(4096), 6, 3)
    r = erasure_list_decode(C, (ERASED,) * 6, list_cap=1000)
    assert r.truncated and r.codewords == () and r.list_size == 4096 ** 3


def test_errors():
    C = rs_code(field_build(5), 4, 2)
    with pytest.raises(ValueError):
        ball_list_decode(C, (1, 2, 3), 1)
    with pytest.raises(ValueError):
        ball_list_decode(C, (1, ERASED, 3, 4), 1)
    with pytest.raises(ValueError):
        rs_subset_decode(C, (1, 1, 2, 3), 2)
    with pytest.raises(ValueError):
        rs_error_location_decode(C, (1, 1, 2, 3), 3)
    with pytest.raises(ValueError):
        rs_neighbor_search(C, (1, 1, 2, 3), 3)
    with pytest.raises(ValueError):
        rs_subset_decode(random_linear_code(field_build(5), 4, 2, np.random.default_rng(0)),
                         (0, 0, 0, 0), 3)


RS_CASES = [(5, 4, 2), (7, 6, 2), (8, 7, 3), (9, 8, 2), (11, 6, 1), (16, 7, 2)]


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(RS_CASES), st.data())
def test_rs_decoders_match_ball(case, data):
    q, n, k = case
    C = rs_code(field_of_order(q), n, k)
    y = tuple(data.draw(st.lists(st.integers(0, q - 1), min_size=n, max_size=n)))
    if data.draw(st.booleans()):
        # plant a nearby codeword so lists are not always empty
        c = C.encode(data.draw(st.lists(st.integers(0, q - 1), min_size=k, max_size=k)))
        keep = data.draw(st.integers(k, n))
        y = c[:keep] + y[keep:]
    t = data.draw(st.integers(k + 1, n))
    sub = rs_subset_decode(C, y, t)
    assert list(sub.codewords) == brute_ball(C, y, n - t) == list(ball_list_decode(C, y, n - t).codewords)
    assert sub.work == comb(n, t)
    e = data.draw(st.integers(0, n - k))
    loc = rs_error_location_decode(C, y, e)
    assert list(loc.codewords) == brute_ball(C, y, e) and loc.work == comb(n, e)
    nb = rs_neighbor_search(C, y, e)
    assert list(nb.codewords) == brute_ball(C, y, e) and nb.work == comb(n, k)


@settings(max_examples=80, deadline=None)
@given(st.sampled_from([2, 3, 4, 5]), st.integers(1, 6), st.data())
def test_erasure_decoder_matches_brute_force(q, n, data):
    F = field_of_order(q)
    k = data.draw(st.integers(1, min(n, 4)))
    C = random_linear_code(F, n, k, np.random.default_rng(data.draw(st.integers(0, 2 ** 32 - 1))))
    c = C.encode(data.draw(st.lists(st.integers(0, q - 1), min_size=k, max_size=k)))
    mask = data.draw(st.lists(st.booleans(), min_size=n, max_size=n))
    y = tuple(ERASED if m else v for m, v in zip(mask, c))
    if data.draw(st.booleans()):
        y = tuple(data.draw(st.sampled_from([ERASED] + list(range(q)))) for _ in range(n))
    r = erasure_list_decode(C, y)
    brute = brute_consistent(C, y)
    assert list(r.codewords) == brute
    assert r.list_size == len(brute)
    if brute:
        assert len(brute) == q ** r.dimension


def test_list_is_deterministic_and_sorted():
    C = rs_code(field_build(7), 6, 2)
    y = (0, 1, 2, 3, 4, 5)
    a, b = rs_subset_decode(C, y, 3), rs_subset_decode(C, y, 3)
    assert a == b and list(a.codewords) == sorted(a.codewords)
    assert (1, 2, 3, 4, 5, 6) not in a and (0, 1, 2, 3, 4, 5) in a

from collections import Counter
from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from listlab.codes import (EnumerationCapError, LinearCode, OuterCode, concatenate,
                           folded_rs_code, independence_profile,
                           independent_tuple_count_bound, min_distance_exhaustive,
                           random_linear_code, random_outer_code, rs_code, rs_encode_poly)
from listlab.field import extension_field, field_build, field_of_order, mat_rank


def test_rs_example():
    C = rs_code(field_build(5), 4, 2)
    assert C.encode((1, 2)) == (1, 3, 0, 2)
    assert C.rate == pytest.approx(0.5)


def test_rs_constant_code():
    F = field_build(7)
    C = rs_code(F, 5, 1)
    assert all(len(set(row)) == 1 for row in C.codebook())


@pytest.mark.parametrize("q,n,k", [(4, 4, 1), (4, 4, 2), (5, 5, 2), (5, 4, 3), (7, 6, 2), (8, 8, 2), (9, 5, 3)])
def test_rs_is_mds(q, n, k):
    assert min_distance_exhaustive(rs_code(field_of_order(q), n, k)) == n - k + 1


@pytest.mark.parametrize("q,n,k", [(5, 4, 2), (16, 6, 2), (8, 5, 3), (4096, 6, 1)])
def test_generator_encoding_equals_evaluation(q, n, k):
    C = rs_code(field_of_order(q), n, k)
    rng = np.random.default_rng(1)
    msgs = list(product(range(q), repeat=k)) if q ** k <= 4096 else rng.integers(0, q, size=(300, k))
    for m in msgs:
        assert C.encode(m) == rs_encode_poly(C, m)


def test_min_distance_examples():
    F2 = field_build(2)
    assert min_distance_exhaustive(LinearCode(F2, [[1, 1, 1]])) == 3
    assert min_distance_exhaustive(LinearCode(F2, [[1, 1, 0], [0, 1, 1]])) == 2
    with pytest.raises(EnumerationCapError):
        min_distance_exhaustive(rs_code(field_of_order(4096), 6, 3), cap=1 << 20)


def test_random_code_determinism_and_uniformity():
    F = field_build(2)
    a = random_linear_code(F, 6, 3, np.random.default_rng(5))
    b = random_linear_code(F, 6, 3, np.random.default_rng(5))
    assert (a.generator == b.generator).all()
    ones = sum(int(random_linear_code(F, 1, 1, np.random.default_rng(s)).generator[0, 0])
               for s in range(10_000))
    assert abs(ones / 10_000 - 0.5) <= 0.02


def test_singular_2x2_fraction():
    F = field_build(2)
    singular = sum(mat_rank(F, np.array(m).reshape(2, 2)) < 2 for m in product(range(2), repeat=4))
    assert singular == 10


def test_text_roundtrip(tmp_path):
    F = field_build(2, 4)
    for C in (rs_code(F, 7, 3), random_linear_code(F, 5, 2, np.random.default_rng(3), seed=3)):
        text = C.to_text()
        D = LinearCode.from_text(text)
        assert D.field == C.field and (D.generator == C.generator).all()
        assert D.kind == C.kind and D.params == C.params and D.seed == C.seed
        assert D.to_text() == text


def test_folding():
    G16 = field_build(2, 4)
    rs = rs_code(G16, 8, 2)
    fr = folded_rs_code(G16, 4, 1, 2, subfield=G16)
    rng = np.random.default_rng(0)
    for _ in range(20):
        m = tuple(int(v) for v in rng.integers(0, 16, size=2))
        c = rs.encode(m)
        assert fr.encode_big(m) == tuple((c[2 * i], c[2 * i + 1]) for i in range(4))
    assert fr.size == 16 ** 2
    plain = folded_rs_code(G16, 8, 2, 1, subfield=G16)
    assert plain.encode_big((3, 5)) == tuple((v,) for v in rs.encode((3, 5)))


def test_concatenation_with_identity_inners_is_vector_view():
    G2, G16 = field_build(2), field_build(2, 4)
    outer = folded_rs_code(G16, 8, 4, 1, subfield=G2)
    ident = [LinearCode(G2, np.eye(4, dtype=np.int64)) for _ in range(8)]
    C = concatenate(outer, ident)
    assert (C.n, C.k) == (32, 16)
    rng = np.random.default_rng(2)
    for _ in range(20):
        m = rng.integers(0, 2, size=16)
        flat = tuple(v for sym in outer.encode(m) for v in sym)
        assert C.encode(m) == flat == C.encode_stepwise(m)
    assert C.encode(np.zeros(16, dtype=np.int64)) == (0,) * 32
    assert C.rank == 16


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_concatenation_is_linear(seed):
    G2 = field_build(2)
    big = extension_field(field_build(2, 2), 2)  # GF(16) as a tower over GF(4)
    rng = np.random.default_rng(seed)
    outer = random_outer_code(big, 5, 2, rng, subfield=G2)
    inners = [random_linear_code(G2, 4, 4, rng) for _ in range(5)]
    C = concatenate(outer, inners)
    a, b = rng.integers(0, 2, size=(2, C.k))
    ca, cb = np.array(C.encode(a)), np.array(C.encode(b))
    assert C.encode((a + b) % 2) == tuple(int(v) for v in ca ^ cb)
    assert C.encode_stepwise(a) == C.encode(a)


def test_composite_rank_is_k_when_everything_is_invertible():
    G2, G16 = field_build(2), field_build(2, 4)
    rng = np.random.default_rng(11)
    outer = folded_rs_code(G16, 8, 4, 1, subfield=G2)
    inners = []
    while len(inners) < 8:
        c = random_linear_code(G2, 4, 4, rng)
        if c.rank == 4:
            inners.append(c)
    C = concatenate(outer, inners)
    assert C.rank == 16
    assert len({tuple(r) for r in C.codebook()}) == 2 ** 16


def test_profile_examples():
    G2 = field_build(2)
    assert independence_profile([(0, 0, 0)], G2) == (0,)
    c = (1, 0, 1)
    assert independence_profile([c, c], G2) == (2, 0)
    assert independence_profile([(1, 0, 1), (1, 1, 0)], G2) == (2, 1)
    # order matters, as the definition says
    assert independence_profile([(1, 1, 0), (1, 0, 1)], G2) == (2, 1)
    assert independence_profile([(0, 0, 0), (1, 1, 0)], G2) == (0, 2)


def test_bound_examples():
    assert independent_tuple_count_bound(4, 2, 0.5, (1, 0), 2, 16) == 2 ** (4 * 2 * 3)
    N, q, Q = 3, 2, 8
    assert independent_tuple_count_bound(N, 1, 1, (N,), q, Q) == q ** (2 * N) * Q ** (N + 1)


def tally_profiles(outer, J):
    words = list(outer.codewords())
    counts = Counter()
    for tup in product(words, repeat=J):
        counts[independence_profile(tup, outer.subfield)] += 1
    return counts


# (Q, q, N, k, J): RS over GF(Q) with symbols read as vectors over GF(q)
LEMMA_GRID = [(2, 2, 2, 1, 2), (2, 2, 2, 1, 3), (3, 3, 3, 1, 2), (3, 3, 2, 1, 3), (4, 4, 3, 1, 2),
              (4, 4, 4, 1, 2), (5, 5, 3, 1, 2), (5, 5, 4, 1, 2), (5, 5, 4, 1, 3), (4, 2, 4, 1, 2),
              (4, 2, 4, 1, 3), (4, 2, 4, 2, 2), (16, 2, 4, 1, 2)]


@pytest.mark.parametrize("Q,q,N,k,J", LEMMA_GRID)
def test_independent_tuples_within_bound(Q, q, N, k, J):
    big, sub = field_of_order(Q), field_of_order(q)
    outer = OuterCode(rs_code(big, N, k), 1, sub)
    counts = tally_profiles(outer, J)
    assert sum(counts.values()) == Q ** (k * J)
    for d, count in counts.items():
        assert count <= independent_tuple_count_bound(N, J, outer.rate, d, q, Q), d

"""List decoders.

``ball_list_decode`` enumerates the whole code and is the reference every
other decoder is checked against.  The RS decoders search position subsets;
``erasure_list_decode`` solves the linear system on the unerased columns.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product

import numpy as np

from .channel import ERASED
from .codes import DEFAULT_ENUMERATION_CAP, LinearCode
from .field import lagrange_coeffs, mat_solve_affine, poly_eval, row_reduce

DEFAULT_LIST_CAP = 1 << 16


@dataclass(frozen=True)
class DecodeResult:
    codewords: tuple
    work: int
    truncated: bool = False
    dimension: int | None = None
    list_size: int | None = None

    def __post_init__(self):
        if self.list_size is None:
            object.__setattr__(self, "list_size", len(self.codewords))

    def __len__(self):
        return self.list_size

    def __contains__(self, word):
        return tuple(int(v) for v in word) in self.codewords


def _sorted_unique(words):
    return tuple(sorted({tuple(int(v) for v in w) for w in words}))


def _check_word(code, y):
    if len(y) != code.n:
        raise ValueError(f"received word has length {len(y)}, code has n={code.n}")
    if any(v is ERASED for v in y):
        raise ValueError("received word contains erasures")
    return tuple(code.field.check(int(v)) for v in y)


def ball_list_decode(code: LinearCode, y, radius: int, cap=DEFAULT_ENUMERATION_CAP) -> DecodeResult:
    """All codewords within Hamming distance ``radius`` of y, by enumeration."""
    y = np.array(_check_word(code, y), dtype=np.int64)
    hits = []
    if code.size <= (1 << 20):
        words = code.codebook()
        hits.append(words[np.count_nonzero(words != y, axis=1) <= radius])
    else:
        for _, words in code.codeword_chunks(cap=cap):
            hits.append(words[np.count_nonzero(words != y, axis=1) <= radius])
    found = np.vstack(hits) if hits else np.zeros((0, code.n), dtype=np.int64)
    return DecodeResult(_sorted_unique(found), work=code.size)


# ---------------------------------------------------------------------------
# Reed-Solomon subset decoders


def _rs_points(code):
    if code.kind != "rs" or "points" not in code.params:
        raise ValueError("decoder needs a Reed-Solomon code")
    return code.params["points"]


class _Interpolator:
    """Full RS codeword through y on a k-subset of positions, memoized."""

    def __init__(self, code, y):
        self.F = code.field
        self.pts = _rs_points(code)
        self.y = y
        self.k = code.k
        self.cache = {}

    def word(self, positions):
        w = self.cache.get(positions)
        if w is None:
            F, pts, y = self.F, self.pts, self.y
            coeffs = lagrange_coeffs(F, [pts[i] for i in positions], [y[i] for i in positions])
            w = tuple(poly_eval(F, coeffs, a) for a in pts)
            self.cache[positions] = w
        return w


def rs_error_location_decode(code: LinearCode, y, e: int) -> DecodeResult:
    """Try every e-set of error locations; interpolate and verify on the rest."""
    y = _check_word(code, y)
    n, k = code.n, code.k
    if not 0 <= e <= n or n - e < k:
        raise ValueError(f"e = {e} leaves fewer than k = {k} positions")
    interp = _Interpolator(code, y)
    found = set()
    work = 0
    everything = range(n)
    for errs in combinations(everything, e):
        work += 1
        bad = set(errs)
        rest = [i for i in everything if i not in bad]
        w = interp.word(tuple(rest[:k]))
        if all(w[i] == y[i] for i in rest[k:]):
            found.add(w)
    return DecodeResult(tuple(sorted(found)), work=work)


def rs_subset_decode(code: LinearCode, y, t: int) -> DecodeResult:
    """Every codeword agreeing with y on at least t positions.

    Each size-t subset is checked for membership in the projected RS code
    (interpolate on its first k positions, verify the other t - k).
    """
    y = _check_word(code, y)
    n, k = code.n, code.k
    if t <= k:
        raise ValueError(f"t = {t} must exceed k = {k}")
    if t > n:
        raise ValueError(f"t = {t} exceeds n = {n}")
    interp = _Interpolator(code, y)
    found = set()
    work = 0
    for subset in combinations(range(n), t):
        work += 1
        w = interp.word(subset[:k])
        if all(w[i] == y[i] for i in subset[k:]):
            found.add(w)
    return DecodeResult(tuple(sorted(found)), work=work)


def rs_neighbor_search(code: LinearCode, y, radius: int) -> DecodeResult:
    """All codewords within ``radius`` of y via k-subset interpolation.

    Valid when n - radius >= k: any such codeword agrees with y on some
    k positions and is determined by them.
    """
    y = _check_word(code, y)
    n, k = code.n, code.k
    if n - radius < k:
        raise ValueError(f"radius {radius} too large for k-subset search (n={n}, k={k})")
    interp = _Interpolator(code, y)
    found = set()
    work = 0
    for subset in combinations(range(n), k):
        work += 1
        w = interp.word(subset)
        if sum(1 for a, b in zip(w, y) if a != b) <= radius:
            found.add(w)
    return DecodeResult(tuple(sorted(found)), work=work)


# ---------------------------------------------------------------------------
# Erasures


def erasure_list_decode(code: LinearCode, y, list_cap=DEFAULT_LIST_CAP) -> DecodeResult:
    """All codewords c with c ~ y, via the affine system m G_U = y_U.

    ``dimension`` is the dimension of the consistent codeword set, so the
    list has exactly q^dimension entries when nonempty.  The list itself is
    enumerated only when it fits within ``list_cap``.
    """
    if len(y) != code.n:
        raise ValueError(f"received word has length {len(y)}, code has n={code.n}")
    F = code.field
    U = [i for i, v in enumerate(y) if v is not ERASED]
    G = code.generator
    yU = np.array([F.check(int(y[i])) for i in U], dtype=np.int64)
    sol = mat_solve_affine(F, G[:, U].T, yU)
    if sol is None:
        return DecodeResult((), work=1, list_size=0)
    restricted_rank = code.k - sol.dimension
    dim = code.rank - restricted_rank
    size = F.q ** dim
    if size > list_cap:
        return DecodeResult((), work=1, truncated=True, dimension=dim, list_size=size)
    base = F.matmul(sol.particular[None, :], G)[0]
    words = [base]
    if dim:
        R, piv = row_reduce(F, F.matmul(sol.kernel, G))
        basis = R[:len(piv)]
        words = []
        for coeffs in product(range(F.q), repeat=dim):
            w = base
            for c, v in zip(coeffs, basis):
                if c:
                    w = F.add_arr(w, F.mul_arr(v, c))
            words.append(w)
    return DecodeResult(_sorted_unique(words), work=1, dimension=dim, list_size=size)

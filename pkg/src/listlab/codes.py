"""Linear codes: Reed-Solomon, folded RS, random linear, and concatenations."""
from __future__ import annotations

import functools
from fractions import Fraction
from itertools import product

import numpy as np

from .field import (Field, ext_from_vector, ext_vector_view, extension_degree,
                    field_build, mat_rank, poly_eval, row_reduce)

DEFAULT_ENUMERATION_CAP = 1 << 24
CODEBOOK_CACHE_CAP = 1 << 20


class EnumerationCapError(ValueError):
    """Raised instead of silently truncating an exhaustive enumeration."""


def _readonly(a):
    a = np.array(a, dtype=np.int64)
    a.setflags(write=False)
    return a


def message_array(q, k, start, stop):
    """Messages with indices start..stop-1, digit i of the index = symbol i."""
    idx = np.arange(start, stop, dtype=np.int64)
    out = np.empty((idx.size, k), dtype=np.int64)
    for i in range(k):
        out[:, i] = idx % q
        idx = idx // q
    return out


class LinearCode:
    """A code given by a k x n generator matrix over ``field``."""

    def __init__(self, field: Field, generator, kind="generic", seed=None, **params):
        G = _readonly(generator)
        if G.ndim != 2:
            raise ValueError("generator must be 2-D")
        k, n = G.shape
        if k > n:
            raise ValueError(f"dimension {k} exceeds block length {n}")
        if G.size and (G.min() < 0 or G.max() >= field.q):
            raise ValueError(f"generator entries outside {field}")
        self.field = field
        self.generator = G
        self.n = n
        self.k = k
        self.kind = kind
        self.seed = seed
        self.params = params

    @property
    def rate(self):
        return Fraction(self.k, self.n)

    def __repr__(self):
        return f"LinearCode({self.kind}, {self.field}, n={self.n}, k={self.k})"

    @functools.cached_property
    def rank(self):
        return mat_rank(self.field, self.generator)

    @property
    def size(self):
        """Number of messages, q^k."""
        return self.field.q ** self.k

    def encode(self, message):
        m = np.asarray(message, dtype=np.int64).reshape(1, -1)
        if m.shape[1] != self.k:
            raise ValueError(f"message length {m.shape[1]} != k={self.k}")
        return tuple(int(v) for v in self.field.matmul(m, self.generator)[0])

    def encode_many(self, messages):
        return self.field.matmul(np.asarray(messages, dtype=np.int64), self.generator)

    def codeword_chunks(self, cap=DEFAULT_ENUMERATION_CAP, chunk=1 << 16):
        """Yield (messages, codewords) blocks covering all q^k messages."""
        total = self.size
        if total > cap:
            raise EnumerationCapError(f"q^k = {total} exceeds enumeration cap {cap}")
        for start in range(0, total, chunk):
            msgs = message_array(self.field.q, self.k, start, min(start + chunk, total))
            yield msgs, self.encode_many(msgs)

    def codebook(self):
        """All q^k codewords (row i encodes message index i); cached."""
        if self.size > CODEBOOK_CACHE_CAP:
            raise EnumerationCapError(f"q^k = {self.size} too large to cache")
        cached = self.__dict__.get("_codebook")
        if cached is None:
            cached = _readonly(self.encode_many(message_array(self.field.q, self.k, 0, self.size)))
            self.__dict__["_codebook"] = cached
        return cached

    # -- serialization -------------------------------------------------------

    def to_text(self) -> str:
        F = self.field
        if F.base is not None and F.base.base is not None:
            raise ValueError("tower fields have no text form")
        width = max(1, (F.q - 1).bit_length() + 3) // 4
        lines = [
            f"field = {F.p}^{F.absolute_degree}",
            f"modulus = {','.join(str(c) for c in F.modulus)}",
            f"kind = {self.kind}",
            f"n = {self.n}",
            f"k = {self.k}",
            f"seed = {'' if self.seed is None else self.seed}",
        ]
        for key, val in sorted(self.params.items()):
            if isinstance(val, (list, tuple)):
                val = "[" + ",".join(str(int(v)) for v in val) + "]"
            lines.append(f"param.{key} = {val}")
        lines.append("generator")
        for row in self.generator:
            lines.append(" ".join(f"{int(v):0{width}x}" for v in row))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "LinearCode":
        head, _, body = text.partition("\ngenerator\n")
        meta = {}
        params = {}
        for line in head.splitlines():
            if not line.strip():
                continue
            key, _, val = line.partition("=")
            key, val = key.strip(), val.strip()
            if key.startswith("param."):
                if val.startswith("["):
                    val = tuple(int(v) for v in val[1:-1].split(",") if v)
                params[key[6:]] = val
            else:
                meta[key] = val
        p, m = (int(v) for v in meta["field"].split("^"))
        F = field_build(p, m)
        if ",".join(str(c) for c in F.modulus) != meta["modulus"]:
            raise ValueError(f"modulus {meta['modulus']} differs from the canonical one")
        rows = [[int(t, 16) for t in line.split()] for line in body.splitlines() if line.strip()]
        k, n = int(meta["k"]), int(meta["n"])
        G = np.array(rows, dtype=np.int64).reshape(k, n)
        seed = int(meta["seed"]) if meta.get("seed") else None
        return cls(F, G, kind=meta["kind"], seed=seed, **params)


def rs_code(field: Field, n: int, k: int, eval_points=None) -> LinearCode:
    """Reed-Solomon code; row i of the generator is (a_j^i)_j."""
    if n > field.q:
        raise ValueError(f"block length {n} exceeds field size {field.q}")
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got k={k}, n={n}")
    pts = list(range(n)) if eval_points is None else [field.check(int(a)) for a in eval_points]
    if len(pts) != n:
        raise ValueError(f"expected {n} evaluation points, got {len(pts)}")
    if len(set(pts)) != n:
        raise ValueError("evaluation points must be distinct")
    G = [[field.pow(a, i) for a in pts] for i in range(k)]
    code = LinearCode(field, G, kind="rs", points=tuple(pts))
    return code


def rs_encode_poly(code: LinearCode, message):
    """Evaluation encoding, independent of the generator matrix."""
    return tuple(poly_eval(code.field, list(message), a) for a in code.params["points"])


def random_linear_code(field: Field, n: int, k: int, rng, seed=None) -> LinearCode:
    """Generator entries i.i.d. uniform over the field; rank is not conditioned."""
    if k < 1 or n < 1:
        raise ValueError("need n, k >= 1")
    G = rng.integers(0, field.q, size=(k, n), dtype=np.int64)
    return LinearCode(field, G, kind="random", seed=seed)


def min_distance_exhaustive(code: LinearCode, cap=DEFAULT_ENUMERATION_CAP) -> int:
    """Minimum Hamming weight over nonzero codewords."""
    best = None
    for _, words in code.codeword_chunks(cap=cap):
        wts = np.count_nonzero(words, axis=1)
        wts = wts[wts > 0]
        if wts.size:
            w = int(wts.min())
            best = w if best is None else min(best, w)
    if best is None:
        raise ValueError("code has no nonzero codewords")
    return best


# ---------------------------------------------------------------------------
# Outer codes over GF(q^n) seen as codes over F_q^n


class OuterCode:
    """An outer code whose symbols are exposed as vectors over ``subfield``.

    ``inner`` is a LinearCode over the big field; every output symbol bundles
    ``fold`` consecutive inner positions, each expanded to its subfield
    coordinates.  fold = 1 and an RS ``inner`` is plain RS; a random
    ``inner`` is the random linear outer code.
    """

    def __init__(self, inner: LinearCode, fold: int, subfield: Field):
        if inner.n % fold or inner.k % fold:
            raise ValueError("folding must divide both length and dimension")
        self.code = inner
        self.fold = fold
        self.subfield = subfield
        self.big = inner.field
        self.width = extension_degree(self.big, subfield)
        self.N = inner.n // fold
        self.K = inner.k // fold
        self.symbol_length = fold * self.width
        self.message_length = inner.k * self.width

    @property
    def rate(self):
        return Fraction(self.K, self.N)

    @property
    def size(self):
        return self.big.q ** self.code.k

    def encode_big(self, message):
        """message: k symbols of the big field -> OuterCodeword."""
        word = self.code.encode(message)
        return self.fold_word(word)

    def fold_word(self, word):
        s = self.fold
        out = []
        for i in range(self.N):
            vec = []
            for c in word[s * i:s * i + s]:
                vec.extend(ext_vector_view(self.big, c, self.subfield))
            out.append(tuple(vec))
        return tuple(out)

    def encode(self, message):
        """message: message_length subfield symbols -> OuterCodeword."""
        message = list(message)
        if len(message) != self.message_length:
            raise ValueError(f"expected {self.message_length} subfield symbols")
        w = self.width
        big_msg = [ext_from_vector(self.big, message[i * w:(i + 1) * w], self.subfield)
                   for i in range(self.code.k)]
        return self.encode_big(big_msg)

    def codewords(self, cap=DEFAULT_ENUMERATION_CAP):
        if self.size > cap:
            raise EnumerationCapError(f"outer code size {self.size} exceeds cap {cap}")
        for msg in product(range(self.big.q), repeat=self.code.k):
            yield self.encode_big(msg)


def folded_rs_code(base: Field, N: int, K: int, s: int, subfield: Field = None,
                   eval_points=None) -> OuterCode:
    """Folded RS: RS(sN, sK) over ``base`` with s consecutive symbols bundled."""
    if s < 1:
        raise ValueError("folding parameter must be >= 1")
    if s * N > base.q:
        raise ValueError(f"sN = {s * N} exceeds base field size {base.q}")
    rs = rs_code(base, s * N, s * K, eval_points=eval_points)
    return OuterCode(rs, s, base.prime_field if subfield is None else subfield)


def random_outer_code(big: Field, N: int, K: int, rng, subfield: Field = None) -> OuterCode:
    return OuterCode(random_linear_code(big, N, K, rng), 1,
                     big.prime_field if subfield is None else subfield)


class ConcatenatedCode(LinearCode):
    """outer o (inner_1, ..., inner_N) as a linear code over the subfield.

    The composite generator has one row per subfield basis vector of the
    outer message space (kK rows, nN columns).
    """

    def __init__(self, outer: OuterCode, inners):
        inners = list(inners)
        sub = outer.subfield
        if len(inners) != outer.N:
            raise ValueError(f"need {outer.N} inner codes, got {len(inners)}")
        n = outer.symbol_length
        for G in inners:
            if G.field != sub:
                raise ValueError("inner codes must be over the outer subfield")
            if G.k != n or G.n != n:
                raise ValueError(f"inner codes must be {n} x {n} (rate 1)")
        self.outer = outer
        self.inners = inners
        D = outer.message_length
        rows = []
        for j in range(D):
            e = [0] * D
            e[j] = 1
            rows.append(self._stepwise(e))
        super().__init__(sub, np.array(rows, dtype=np.int64).reshape(D, n * outer.N),
                         kind="concatenated")

    def _stepwise(self, message):
        sym = self.outer.encode(message)
        out = []
        for x, inner in zip(sym, self.inners):
            out.extend(inner.encode(x))
        return out

    def encode_stepwise(self, message):
        """Outer-encode, then push each symbol vector through its inner code."""
        return tuple(int(v) for v in self._stepwise(message))

    @property
    def block(self):
        return self.outer.symbol_length


def concatenate(outer: OuterCode, inners) -> ConcatenatedCode:
    return ConcatenatedCode(outer, inners)


# ---------------------------------------------------------------------------
# (d, F_q)-independence


def _as_vectors(word):
    return [tuple(int(v) for v in s) if isinstance(s, (tuple, list, np.ndarray)) else (int(s),)
            for s in word]


def independence_profile(codewords, subfield: Field) -> tuple[int, ...]:
    """d_j = #positions where symbol j is outside the span of symbols 1..j-1.

    Symbols are vectors over ``subfield`` (bare ints are length-1 vectors);
    d_1 is therefore the Hamming weight of the first codeword.
    """
    words = [_as_vectors(w) for w in codewords]
    if not words:
        return ()
    N = len(words[0])
    if any(len(w) != N for w in words):
        raise ValueError("codewords must share a block length")
    F = subfield
    profile = [0] * len(words)
    for i in range(N):
        basis = np.zeros((0, len(words[0][i])), dtype=np.int64)
        rank = 0
        for j, w in enumerate(words):
            v = np.array(w[i], dtype=np.int64)[None, :]
            stacked = np.vstack([basis, v])
            R, piv = row_reduce(F, stacked)
            if len(piv) > rank:
                profile[j] += 1
                rank = len(piv)
                basis = R[:rank]
    return tuple(profile)


def independent_tuple_count_bound(N, J, R, d, q, Q) -> int:
    """q^{NJ(J+1)} * prod_j Q^{max(d_j - N(1-R) + 1, 0)}, exactly."""
    R = Fraction(R)
    slack = N * (1 - R)
    if slack.denominator != 1:
        raise ValueError("N(1-R) must be an integer")
    if len(d) != J:
        raise ValueError(f"profile has {len(d)} entries, expected J={J}")
    exp = sum(max(dj - int(slack) + 1, 0) for dj in d)
    return q ** (N * J * (J + 1)) * Q ** exp

"""Exact arithmetic in GF(p^m), polynomials over it, and dense linear algebra.

Elements are plain ints.  An element of a degree-m extension of a base field
of order r is the integer sum(d_i * r**i) of its ascending coefficient
digits d_i, so GF(p) elements are 0..p-1 and, e.g., x + 1 in GF(16) is 3.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from itertools import product

import numpy as np

DEFAULT_SIZE_LIMIT = 1 << 20


class FieldMismatchError(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_factors(n: int) -> list[int]:
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


def prime_power(q: int) -> tuple[int, int]:
    """Split a prime power q into (p, m) with q = p**m."""
    if q < 2:
        raise ValueError(f"{q} is not a prime power")
    p = prime_factors(q)[0]
    m = 0
    while q % p == 0:
        q //= p
        m += 1
    if q != 1:
        raise ValueError("not a prime power")
    return p, m


# ---------------------------------------------------------------------------
# Polynomials over a field, as ascending coefficient lists of ints.


def _trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_sub(F, a, b):
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return _trim(F.sub(x, y) for x, y in zip(a, b))


def _poly_mul(F, a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            out[i + j] = F.add(out[i + j], F.mul(ai, bj))
    return _trim(out)


def _poly_divmod(F, a, b):
    a = _trim(a)
    b = _trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    inv_lead = F.inv(b[-1])
    quot = [0] * max(len(a) - len(b) + 1, 0)
    while len(a) >= len(b):
        shift = len(a) - len(b)
        c = F.mul(a[-1], inv_lead)
        quot[shift] = c
        for i, bi in enumerate(b):
            a[shift + i] = F.sub(a[shift + i], F.mul(c, bi))
        a = _trim(a)
    return _trim(quot), a


def _poly_powmod(F, a, e, f):
    result = [1]
    base = _poly_divmod(F, a, f)[1]
    while e:
        if e & 1:
            result = _poly_divmod(F, _poly_mul(F, result, base), f)[1]
        base = _poly_divmod(F, _poly_mul(F, base, base), f)[1]
        e >>= 1
    return result


def _poly_gcd(F, a, b):
    a, b = _trim(a), _trim(b)
    while b:
        a, b = b, _poly_divmod(F, a, b)[1]
    return a


def is_irreducible(F: "Field", poly) -> bool:
    """Rabin's test for a polynomial over the field F (ascending coefficients)."""
    f = _trim(poly)
    m = len(f) - 1
    if m < 1:
        return False
    if m == 1:
        return True
    r = F.q
    x = [0, 1]
    # h[i] = x^(r^i) mod f
    h = [x]
    for _ in range(m):
        h.append(_poly_powmod(F, h[-1], r, f))
    if _trim(_poly_sub(F, h[m], x)):
        return False
    for s in prime_factors(m):
        g = _poly_gcd(F, _poly_sub(F, h[m // s], x), f)
        if len(g) > 1:
            return False
    return True


def smallest_irreducible(F: "Field", m: int) -> tuple[int, ...]:
    """Lexicographically smallest monic irreducible polynomial of degree m over F.

    Monic polynomials are ordered by their lower coefficients read as a
    base-|F| integer with the highest degree most significant.
    """
    r = F.q
    for code in range(r ** m):
        low = [(code // r ** i) % r for i in range(m)]
        poly = low + [1]
        if is_irreducible(F, poly):
            return tuple(poly)
    raise AssertionError("no irreducible polynomial found")  # unreachable


# ---------------------------------------------------------------------------


class Field:
    """A finite field, either GF(p) or a simple extension of another Field.

    Build instances with ``field_build`` or ``extension_field``; both cache,
    so equal parameters give the same object.
    """

    def __init__(self, p, base=None, degree=1, modulus=None):
        self.p = p
        self.base = base
        self.degree = degree
        if base is None:
            self.q = p
            self.modulus = (0, 1)
            self.absolute_degree = 1
        else:
            self.q = base.q ** degree
            self.modulus = tuple(modulus)
            self.absolute_degree = base.absolute_degree * degree
        self._digit_powers = [p ** j for j in range(self.absolute_degree)]
        if base is not None:
            self._modulus_int = sum(c * base.q ** i for i, c in enumerate(self.modulus))
            low = self.modulus[:-1]
            self._reduce_table = [
                sum(base.mul(t, c) * base.q ** i for i, c in enumerate(low))
                for t in range(base.q)]
        self._build_tables()

    # -- construction helpers ------------------------------------------------

    def _slow_mul(self, a, b):
        if self.base is None:
            return a * b % self.p
        if self.p == 2 and self.base.base is None:
            # carryless product, reduced by the modulus bit pattern
            prod_ = 0
            while b:
                if b & 1:
                    prod_ ^= a
                a <<= 1
                b >>= 1
            mod = self._modulus_int
            m = self.degree
            for bit in range(prod_.bit_length() - 1, m - 1, -1):
                if prod_ >> bit & 1:
                    prod_ ^= mod << (bit - m)
            return prod_
        B = self.base
        da, db = self.digits(a), self.digits(b)
        prod_ = _poly_mul(B, _trim(da), _trim(db))
        rem = _poly_divmod(B, prod_, list(self.modulus))[1]
        return self.from_digits(rem)

    def _times_x(self, a):
        # a * x reduced by the monic modulus
        shifted = a * self.base.q
        top, low = divmod(shifted, self.q)
        return self.sub(low, self._reduce_table[top]) if top else low

    def _times_x_plus(self, c, a):
        B = self.base
        scaled = self.from_digits([B.mul(c, d) for d in self.digits(a)])
        return self.add(self._times_x(a), scaled)

    def _build_tables(self):
        q = self.q
        order = q - 1
        factors = prime_factors(order) if order > 1 else []

        def _pow(g, e):
            result, base = 1, g
            while e:
                if e & 1:
                    result = self._slow_mul(result, base)
                base = self._slow_mul(base, base)
                e >>= 1
            return result

        gen = None
        step = None
        if self.base is not None:
            r = self.base.q
            # x + c is cheap to multiply by; try those first
            for c in range(r):
                if all(_pow(r + c, order // f) != 1 for f in factors):
                    gen = r + c
                    step = self._times_x if c == 0 else functools.partial(self._times_x_plus, c)
                    break
        if gen is None:
            for g in range(1, q):
                if all(_pow(g, order // f) != 1 for f in factors):
                    gen = g
                    break
            step = functools.partial(self._slow_mul, gen)
        self.generator = gen
        exp = [0] * (2 * order + 1)
        log = [0] * q
        cur = 1
        for i in range(order):
            exp[i] = cur
            log[cur] = i
            cur = step(cur)
        for i in range(order, 2 * order + 1):
            exp[i] = exp[i - order]
        self._exp = exp
        self._log = log
        self._exp_arr = np.array(exp, dtype=np.int64)
        self._log_arr = np.array(log, dtype=np.int64)

    # -- identity --------------------------------------------------------------

    @property
    def key(self):
        chain = []
        F = self
        while F.base is not None:
            chain.append(F.modulus)
            F = F.base
        return (self.p, tuple(chain))

    def __eq__(self, other):
        return isinstance(other, Field) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __reduce__(self):
        if self.base is None:
            return (field_build, (self.p, 1))
        return (extension_field, (self.base, self.degree, self.modulus))

    @property
    def name(self):
        if self.base is None:
            return f"GF({self.p})"
        if self.base.base is None:
            return f"GF({self.p}^{self.degree})"
        return f"GF({self.base.q}^{self.degree})"

    def __repr__(self):
        return self.name

    @property
    def prime_field(self):
        F = self
        while F.base is not None:
            F = F.base
        return F

    def is_extension_of(self, sub: "Field") -> bool:
        F = self
        while True:
            if F == sub:
                return True
            if F.base is None:
                return False
            F = F.base

    # -- scalar arithmetic ---------------------------------------------------

    def check(self, a):
        if not (0 <= a < self.q):
            raise FieldMismatchError(f"{a} is not an element of {self.name}")
        return a

    def add(self, a, b):
        if self.p == 2:
            return a ^ b
        if self.absolute_degree == 1:
            return (a + b) % self.p
        p = self.p
        return sum(((a // pj + b // pj) % p) * pj for pj in self._digit_powers)

    def sub(self, a, b):
        if self.p == 2:
            return a ^ b
        if self.absolute_degree == 1:
            return (a - b) % self.p
        p = self.p
        return sum(((a // pj - b // pj) % p) * pj for pj in self._digit_powers)

    def neg(self, a):
        return self.sub(0, a)

    def mul(self, a, b):
        if a == 0 or b == 0:
            return 0
        if self.base is None:
            return a * b % self.p
        return self._exp[self._log[a] + self._log[b]]

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError(f"inverse of 0 in {self.name}")
        return self._exp[(self.q - 1 - self._log[a]) % (self.q - 1)]

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, e):
        if a == 0:
            return 0 if e > 0 else 1
        return self._exp[(self._log[a] * e) % (self.q - 1)]

    def digits(self, a):
        """Ascending coefficients of a over the base field."""
        if self.base is None:
            return (a,)
        r = self.base.q
        return tuple((a // r ** i) % r for i in range(self.degree))

    def from_digits(self, ds):
        if self.base is None:
            (a,) = ds
            return a
        r = self.base.q
        ds = list(ds) + [0] * (self.degree - len(ds))
        return sum(d * r ** i for i, d in enumerate(ds))

    def element(self, value) -> "FieldElement":
        return FieldElement(self, self.check(int(value)))

    def __call__(self, value):
        return self.element(value)

    def elements(self):
        return range(self.q)

    # -- array arithmetic (numpy int64, broadcasting) --------------------------

    def add_arr(self, a, b):
        if self.p == 2:
            return np.bitwise_xor(a, b)
        if self.absolute_degree == 1:
            return (np.asarray(a) + b) % self.p
        p = self.p
        out = 0
        for pj in self._digit_powers:
            out = out + ((np.asarray(a) // pj + np.asarray(b) // pj) % p) * pj
        return out

    def sub_arr(self, a, b):
        if self.p == 2:
            return np.bitwise_xor(a, b)
        if self.absolute_degree == 1:
            return (np.asarray(a) - b) % self.p
        p = self.p
        out = 0
        for pj in self._digit_powers:
            out = out + ((np.asarray(a) // pj - np.asarray(b) // pj) % p) * pj
        return out

    def neg_arr(self, a):
        return self.sub_arr(np.zeros_like(np.asarray(a)), a)

    def mul_arr(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.base is None:
            return (a * b) % self.p
        out = self._exp_arr[self._log_arr[a] + self._log_arr[b]]
        return np.where((a == 0) | (b == 0), 0, out)

    def inv_arr(self, a):
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise ZeroDivisionError(f"inverse of 0 in {self.name}")
        return self._exp_arr[(self.q - 1 - self._log_arr[a]) % (self.q - 1)]

    def matmul(self, A, B):
        """Matrix product over the field; A is (r, s), B is (s, t)."""
        A = np.asarray(A, dtype=np.int64)
        B = np.asarray(B, dtype=np.int64)
        if A.shape[-1] != B.shape[0]:
            raise ValueError(f"dimension mismatch {A.shape} x {B.shape}")
        if self.base is None and A.shape[-1] * (self.p - 1) ** 2 < 2 ** 62:
            return (A @ B) % self.p
        out = np.zeros(A.shape[:-1] + B.shape[1:], dtype=np.int64)
        for i in range(A.shape[-1]):
            out = self.add_arr(out, self.mul_arr(A[..., i:i + 1], B[i]))
        return out


@functools.lru_cache(maxsize=None)
def _prime_field(p):
    return Field(p)


def field_build(p: int, m: int = 1, size_limit: int = DEFAULT_SIZE_LIMIT) -> Field:
    """GF(p^m) with the lexicographically smallest monic irreducible modulus."""
    if not is_prime(p):
        raise ValueError(f"characteristic {p} is not prime")
    if m < 1:
        raise ValueError(f"extension degree must be >= 1, got {m}")
    if p ** m > size_limit:
        raise ValueError(f"field order {p}^{m} exceeds size limit {size_limit}")
    if m == 1:
        return _prime_field(p)
    return extension_field(_prime_field(p), m, size_limit=size_limit)


def field_of_order(q: int, size_limit: int = DEFAULT_SIZE_LIMIT) -> Field:
    p, m = prime_power(q)
    return field_build(p, m, size_limit=size_limit)


@functools.lru_cache(maxsize=None)
def _extension(base, degree, modulus):
    return Field(base.p, base=base, degree=degree, modulus=modulus)


def extension_field(base: Field, degree: int, modulus=None,
                    size_limit: int = DEFAULT_SIZE_LIMIT) -> Field:
    """Degree-``degree`` extension of ``base``; the modulus defaults to the
    smallest monic irreducible over ``base``."""
    if degree < 1:
        raise ValueError("extension degree must be >= 1")
    if base.q ** degree > size_limit:
        raise ValueError(f"field order {base.q}^{degree} exceeds size limit {size_limit}")
    if degree == 1 and modulus is None:
        return base
    if modulus is None:
        modulus = smallest_irreducible(base, degree)
    modulus = tuple(int(c) for c in modulus)
    if len(modulus) != degree + 1 or modulus[-1] != 1 or not is_irreducible(base, modulus):
        raise ValueError(f"modulus {modulus} is not monic irreducible of degree {degree}")
    return _extension(base, degree, modulus)


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FieldElement:
    field: Field
    value: int

    def _other(self, b):
        if isinstance(b, FieldElement):
            if b.field != self.field:
                raise FieldMismatchError(f"{self.field} vs {b.field}")
            return b.value
        return self.field.check(int(b))

    def __add__(self, b):
        return FieldElement(self.field, self.field.add(self.value, self._other(b)))

    def __sub__(self, b):
        return FieldElement(self.field, self.field.sub(self.value, self._other(b)))

    def __mul__(self, b):
        return FieldElement(self.field, self.field.mul(self.value, self._other(b)))

    def __truediv__(self, b):
        return FieldElement(self.field, self.field.div(self.value, self._other(b)))

    __radd__ = __add__
    __rmul__ = __mul__

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.value))

    def __pow__(self, e):
        if e < 0:
            return FieldElement(self.field, self.field.pow(self.field.inv(self.value), -e))
        return FieldElement(self.field, self.field.pow(self.value, e))

    def inverse(self):
        return FieldElement(self.field, self.field.inv(self.value))

    def __int__(self):
        return self.value

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field == other.field and self.value == other.value
        if isinstance(other, int):
            return self.value == other
        return NotImplemented

    def __hash__(self):
        return hash((self.field, self.value))

    def __repr__(self):
        return f"{self.field.name}({self.value})"


_OPS = {"add": "__add__", "sub": "__sub__", "mul": "__mul__", "div": "__truediv__"}


def field_arith(a: FieldElement, b: FieldElement, op: str) -> FieldElement:
    if op not in _OPS:
        raise ValueError(f"unknown op {op!r}")
    if a.field != b.field:
        raise FieldMismatchError(f"{a.field} vs {b.field}")
    return getattr(a, _OPS[op])(b)


def _unwrap(F, v):
    if isinstance(v, FieldElement):
        if v.field != F:
            raise FieldMismatchError(f"{v.field} vs {F}")
        return v.value
    return F.check(int(v))


# ---------------------------------------------------------------------------
# Polynomials over F (RS encoding / interpolation)


def poly_eval(F: Field, coeffs, x) -> int:
    x = _unwrap(F, x)
    y = 0
    for c in reversed(coeffs):
        y = F.add(F.mul(y, x), _unwrap(F, c))
    return y


def lagrange_coeffs(F, xs, ys):
    """Coefficients (ascending, length k) of the degree < k poly through k points."""
    k = len(xs)
    # master = prod (X - x_j)
    master = [1]
    for xj in xs:
        nxt = [0] * (len(master) + 1)
        for i, c in enumerate(master):
            nxt[i + 1] = F.add(nxt[i + 1], c)
            nxt[i] = F.sub(nxt[i], F.mul(c, xj))
        master = nxt
    coeffs = [0] * k
    for i in range(k):
        if ys[i] == 0:
            continue
        xi = xs[i]
        # synthetic division of master by (X - xi)
        quot = [0] * k
        carry = 0
        for d in range(k, 0, -1):
            carry = F.add(master[d], F.mul(carry, xi))
            quot[d - 1] = carry
        denom = 1
        for j in range(k):
            if j != i:
                denom = F.mul(denom, F.sub(xi, xs[j]))
        scale = F.div(ys[i], denom)
        for d in range(k):
            coeffs[d] = F.add(coeffs[d], F.mul(scale, quot[d]))
    return coeffs


def poly_interpolate(F: Field, points, k: int):
    """Degree < k polynomial through the first k points, or None if some later
    point is off it."""
    pts = [(_unwrap(F, x), _unwrap(F, y)) for x, y in points]
    xs = [x for x, _ in pts]
    if len(set(xs)) != len(xs):
        raise ValueError("duplicate x-values")
    if len(pts) < k:
        raise ValueError(f"need at least {k} points, got {len(pts)}")
    coeffs = lagrange_coeffs(F, xs[:k], [y for _, y in pts[:k]])
    for x, y in pts[k:]:
        if poly_eval(F, coeffs, x) != y:
            return None
    return coeffs


# ---------------------------------------------------------------------------
# Linear algebra


def _row_reduce_gf2(R):
    """GF(2) elimination on rows packed into Python ints (bit c = column c)."""
    rows, cols = R.shape
    if cols <= 62:
        packed = [int(v) for v in R @ (np.int64(1) << np.arange(cols, dtype=np.int64))]
    else:
        packed = [sum(1 << int(c) for c in np.flatnonzero(row)) for row in R]
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        bit = 1 << c
        for i in range(r, rows):
            if packed[i] & bit:
                break
        else:
            continue
        packed[r], packed[i] = packed[i], packed[r]
        lead = packed[r]
        for j in range(rows):
            if j != r and packed[j] & bit:
                packed[j] ^= lead
        pivots.append(c)
        r += 1
    out = np.array([[(v >> c) & 1 for c in range(cols)] for v in packed], dtype=np.int64)
    return out.reshape(rows, cols), pivots


def row_reduce(F: Field, A):
    """Reduced row echelon form of A; returns (R, pivot columns)."""
    R = np.array(A, dtype=np.int64, copy=True)
    if R.ndim != 2:
        raise ValueError("expected a 2-D matrix")
    if F.q == 2:
        return _row_reduce_gf2(R)
    rows, cols = R.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(R[r:, c])
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            R[[r, piv]] = R[[piv, r]]
        lead = int(R[r, c])
        if lead != 1:
            R[r] = F.mul_arr(R[r], F.inv(lead))
        col = R[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            R[hit] = F.sub_arr(R[hit], F.mul_arr(col[hit, None], R[r][None, :]))
        pivots.append(c)
        r += 1
    return R, pivots


def mat_rank(F: Field, A) -> int:
    A = np.asarray(A)
    if A.size == 0:
        return 0
    return len(row_reduce(F, A)[1])


@dataclass(frozen=True)
class AffineSolution:
    """Solutions of A x = b: particular + span(kernel rows)."""
    field: Field
    particular: np.ndarray
    kernel: np.ndarray  # shape (dimension, cols)

    @property
    def dimension(self):
        return self.kernel.shape[0]

    def __len__(self):
        return self.field.q ** self.dimension

    def __iter__(self):
        F = self.field
        for coeffs in product(range(F.q), repeat=self.dimension):
            x = self.particular.copy()
            for c, v in zip(coeffs, self.kernel):
                if c:
                    x = F.add_arr(x, F.mul_arr(v, c))
            yield x


def mat_solve_affine(F: Field, A, b):
    """Solve A x = b exactly.  Returns an AffineSolution, or None when the
    system is inconsistent."""
    A = np.asarray(A, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64).reshape(-1)
    if A.ndim != 2 or A.shape[0] != b.shape[0]:
        raise ValueError(f"dimension mismatch: A {A.shape}, b {b.shape}")
    rows, cols = A.shape
    R, pivots = row_reduce(F, np.hstack([A, b[:, None]]))
    if pivots and pivots[-1] == cols:
        return None
    particular = np.zeros(cols, dtype=np.int64)
    for i, c in enumerate(pivots):
        particular[c] = R[i, cols]
    free = [c for c in range(cols) if c not in set(pivots)]
    kernel = np.zeros((len(free), cols), dtype=np.int64)
    for j, f in enumerate(free):
        kernel[j, f] = 1
        for i, c in enumerate(pivots):
            kernel[j, c] = F.neg(int(R[i, f]))
    return AffineSolution(F, particular, kernel)


# ---------------------------------------------------------------------------
# Subfield vector views


def ext_vector_view(F: Field, a, sub: Field) -> tuple:
    """Coordinates of a in the polynomial basis of F over the subfield ``sub``
    (ascending powers, nested for towers)."""
    a = _unwrap(F, a)
    if F == sub:
        return (a,)
    if F.base is None or not F.is_extension_of(sub):
        raise ValueError(f"{F} is not an extension of {sub}")
    out = []
    for d in F.digits(a):
        out.extend(ext_vector_view(F.base, d, sub))
    return tuple(out)


def ext_from_vector(F: Field, vec, sub: Field) -> int:
    vec = [int(v) for v in vec]
    if F == sub:
        (a,) = vec
        return sub.check(a)
    if F.base is None or not F.is_extension_of(sub):
        raise ValueError(f"{F} is not an extension of {sub}")
    width = extension_degree(F.base, sub)
    if len(vec) != width * F.degree:
        raise ValueError(f"expected {width * F.degree} coordinates, got {len(vec)}")
    ds = [ext_from_vector(F.base, vec[i * width:(i + 1) * width], sub)
          for i in range(F.degree)]
    return F.from_digits(ds)


def extension_degree(F: Field, sub: Field) -> int:
    if not F.is_extension_of(sub):
        raise ValueError(f"{F} is not an extension of {sub}")
    return round(math.log(F.q, sub.q))

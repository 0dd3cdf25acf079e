"""Closed-form quantities and combinatorial oracles.

Entropies are in base q.  Probabilities that serve as oracles (bad-pattern
counts, the Inverse-Markov checks) are exact ``Fraction`` values.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from itertools import product

import numpy as np

from .channel import sample_error_values
from .codes import EnumerationCapError, LinearCode

BAD_PATTERN_CAP = 1 << 16


def _exact(x):
    """Float inputs like 0.5 or 1/3 as the rational they were meant to be."""
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    return Fraction(x).limit_denominator(10 ** 9)


def entropy_q(x, q) -> float:
    """q-ary entropy H_q(x), with 0 log 0 = 0."""
    if q < 2:
        raise ValueError(f"q = {q} must be at least 2")
    if not 0 <= x <= 1:
        raise ValueError(f"x = {x} outside [0, 1]")
    x = float(x)
    h = 0.0
    if x > 0:
        h += x * math.log(q - 1, q) - x * math.log(x, q)
    if x < 1:
        h -= (1 - x) * math.log(1 - x, q)
    return h


def hamming_ball_volume(q, n, r) -> int:
    if not 0 <= r <= n:
        raise ValueError(f"radius {r} outside [0, {n}]")
    return sum(math.comb(n, i) * (q - 1) ** i for i in range(r + 1))


@dataclass(frozen=True)
class CapacityGap:
    errors: float
    erasures: float


def capacity_gap(rate, q, rho) -> CapacityGap:
    """Signed distance of ``rate`` above the list-decoding capacities."""
    if not 0 <= rho <= 1:
        raise ValueError(f"rho = {rho} outside [0, 1]")
    if not 0 <= rate <= 1:
        raise ValueError(f"rate = {rate} outside [0, 1]")
    return CapacityGap(errors=float(rate) - (1 - entropy_q(rho, q)),
                       erasures=float(rate) - (1 - float(rho)))


# ---------------------------------------------------------------------------
# Theorem bounds


@dataclass(frozen=True)
class BoundCheck:
    """A bound and the conditions under which it holds.

    ``value`` is None when a blocking condition fails; consumers must not
    compare measurements against it then.  ``advisory`` conditions are
    reported but do not block.
    """
    value: float | None
    exponent: float
    conditions: dict
    advisory: dict = dc_field(default_factory=dict)

    @property
    def met(self):
        return all(self.conditions.values())

    @property
    def vacuous(self):
        return self.met and self.exponent <= 0

    def status(self):
        if not self.met:
            return "preconditions-unmet"
        return "vacuous" if self.vacuous else "ok"


def _log2_at_least(q, threshold):
    """log2(q) >= threshold, exactly when q is a power of two."""
    if q & (q - 1) == 0:
        return Fraction(q.bit_length() - 1) >= threshold
    return math.log2(q) >= float(threshold) - 1e-12


def thm31a_bound(q, eps, n) -> BoundCheck:
    """q^(-eps n / 6), valid for n >= 3/eps and q >= 2^(6/eps)."""
    e = _exact(eps)
    conditions = {
        "0 < eps < 1": 0 < e < 1,
        "n >= 3/eps": e > 0 and n >= 3 / e,
        "q >= 2^(6/eps)": e > 0 and _log2_at_least(q, 6 / e),
    }
    exponent = float(e) * n / 6
    value = q ** -exponent if all(conditions.values()) else None
    return BoundCheck(value, exponent, conditions)


def thm31b_exponent(gamma, eps, delta) -> Fraction:
    return _exact(1 - _exact(gamma)) * _exact(eps) / 2 - _exact(gamma) * (1 - _exact(delta))


def thm31b_bound(q, gamma, eps, delta, n) -> BoundCheck:
    """(q-1)^(-((1-gamma) eps/2 - gamma (1-delta)) n).

    Blocking: q > n and q > (e / (1-delta+eps))^ceil(1/gamma).  The length
    condition n >= 4/((1-gamma) eps) is advisory.
    """
    g, e, d = _exact(gamma), _exact(eps), _exact(delta)
    conditions = {
        "0 < gamma < 1": 0 < g < 1,
        "0 < eps <= delta <= 1": 0 < e <= d <= 1,
        "q > n": q > n,
    }
    if conditions["0 < gamma < 1"] and 1 - d + e > 0:
        need = (math.e / float(1 - d + e)) ** math.ceil(1 / g)
        conditions["q > (e/(1-delta+eps))^ceil(1/gamma)"] = q > need
    else:
        conditions["q > (e/(1-delta+eps))^ceil(1/gamma)"] = False
    advisory = {"n >= 4/((1-gamma) eps)": g < 1 and e > 0 and n * (1 - g) * e >= 4}
    exponent = float(thm31b_exponent(g, e, d)) * n
    value = float(q - 1) ** -exponent if all(conditions.values()) else None
    return BoundCheck(value, exponent, conditions, advisory)


# ---------------------------------------------------------------------------
# Bad error patterns


def _error_support(n, S):
    clean = set(int(i) for i in S)
    if any(not 0 <= i < n for i in clean):
        raise ValueError("clean set position out of range")
    return [i for i in range(n) if i not in clean]


def _rivals(code, c):
    words = code.codebook()
    c = np.asarray(c, dtype=np.int64)
    return words[np.any(words != c, axis=1)]


def nearest_rival_distance(code, c, support, values, rivals=None, chunk_elems=1 << 22):
    """Distance from c + e to the closest codeword other than c, per row of
    ``values`` (error values on ``support``); n + 1 if c is the only codeword."""
    F = code.field
    c = np.asarray(c, dtype=np.int64)
    if rivals is None:
        rivals = _rivals(code, c)
    out = np.empty(len(values), dtype=np.int64)
    if len(rivals) == 0:
        out[:] = code.n + 1
        return out
    step = max(1, chunk_elems // (len(rivals) * code.n))
    for lo in range(0, len(values), step):
        block = values[lo:lo + step]
        y = np.broadcast_to(c, (len(block), code.n)).copy()
        if support:
            y[:, support] = F.add_arr(y[:, support], block)
        dist = np.count_nonzero(y[:, None, :] != rivals[None, :, :], axis=2)
        out[lo:lo + step] = dist.min(axis=1)
    return out


def _all_values(q, w, cap):
    total = (q - 1) ** w
    if total > cap:
        raise EnumerationCapError(f"(q-1)^{w} = {total} error patterns exceed the cap {cap}")
    return np.array(list(product(range(1, q), repeat=w)), dtype=np.int64).reshape(total, w)


def _check_codebook(code, cap):
    if code.size > cap:
        raise EnumerationCapError(f"q^k = {code.size} codewords exceed the cap {cap}")


def bad_fraction_exhaustive(code: LinearCode, c, S, radius, cap=BAD_PATTERN_CAP) -> Fraction:
    """Exact fraction of error patterns (support [n] minus S, nonzero values)
    for which some codeword other than c lies within ``radius`` of c + e."""
    _check_codebook(code, cap)
    support = _error_support(code.n, S)
    values = _all_values(code.field.q, len(support), cap)
    near = nearest_rival_distance(code, c, support, values, _rivals(code, c))
    return Fraction(int(np.count_nonzero(near <= radius)), len(values))


def bad_agreement_histogram(code: LinearCode, c, S, radius, cap=BAD_PATTERN_CAP) -> dict:
    """For bad patterns, how many have their best rival agreeing with
    c + e in exactly a positions (a = n - distance)."""
    _check_codebook(code, cap)
    support = _error_support(code.n, S)
    values = _all_values(code.field.q, len(support), cap)
    near = nearest_rival_distance(code, c, support, values, _rivals(code, c))
    hist = Counter(int(code.n - d) for d in near if d <= radius)
    return dict(sorted(hist.items()))


def bad_fraction_monte_carlo(code: LinearCode, c, S, radius, samples, rng, batch=4096):
    """(bad count, samples) over patterns drawn by the channel sampler."""
    support = _error_support(code.n, S)
    rivals = _rivals(code, c)
    bad = 0
    done = 0
    while done < samples:
        m = min(batch, samples - done)
        values = sample_error_values(code.field, len(support), m, rng)
        bad += int(np.count_nonzero(nearest_rival_distance(code, c, support, values, rivals) <= radius))
        done += m
    return bad, samples


def binomial_sigma(p, samples) -> float:
    p = float(p)
    return math.sqrt(max(p * (1 - p), 0.0) / samples)


# ---------------------------------------------------------------------------
# Inverse Markov


@dataclass(frozen=True)
class BipartiteGraph:
    n_left: int
    n_right: int
    edges: tuple

    def __post_init__(self):
        edges = tuple(sorted((int(u), int(v)) for u, v in self.edges))
        object.__setattr__(self, "edges", edges)
        if self.n_left < 0 or self.n_right < 0:
            raise ValueError("negative vertex count")
        if len(set(edges)) != len(edges):
            raise ValueError("repeated edge")
        for u, v in edges:
            if not (0 <= u < self.n_left and 0 <= v < self.n_right):
                raise ValueError(f"edge ({u}, {v}) references a missing vertex")

    def left_degrees(self):
        deg = [0] * self.n_left
        for u, _ in self.edges:
            deg[u] += 1
        return deg

    def right_degrees(self):
        deg = [0] * self.n_right
        for _, v in self.edges:
            deg[v] += 1
        return deg

    def neighbors(self, u):
        return [v for a, v in self.edges if a == u]


def random_bipartite_graph(n_left, n_right, p, rng) -> BipartiteGraph:
    mask = rng.random((n_left, n_right)) < p
    return BipartiteGraph(n_left, n_right, tuple(zip(*np.nonzero(mask))))


def random_left_regular_graph(n_left, n_right, d, rng) -> BipartiteGraph:
    edges = [(u, int(v)) for u in range(n_left)
             for v in rng.choice(n_right, size=d, replace=False)]
    return BipartiteGraph(n_left, n_right, tuple(edges))


def inverse_markov_edge_prob(G: BipartiteGraph, eps) -> Fraction:
    """Pr over a uniform edge (u, v) that d(v) <= eps * average right degree."""
    if not G.edges or G.n_right == 0:
        raise ValueError("graph has no edges")
    eps = _exact(eps)
    deg = G.right_degrees()
    threshold = eps * Fraction(len(G.edges), G.n_right)
    low = sum(1 for _, v in G.edges if deg[v] <= threshold)
    return Fraction(low, len(G.edges))


def inverse_markov_process_prob(G: BipartiteGraph, eps) -> Fraction:
    """Uniform u in L, then a uniform neighbor v: Pr that d(v) <= eps d n_L / n_R."""
    if not G.edges or G.n_left == 0:
        raise ValueError("graph has no edges")
    left = G.left_degrees()
    d = left[0]
    if any(x != d for x in left):
        raise ValueError("graph is not left-regular")
    eps = _exact(eps)
    deg = G.right_degrees()
    threshold = eps * Fraction(d * G.n_left, G.n_right)
    total = Fraction(0)
    for u, v in G.edges:
        if deg[v] <= threshold:
            total += Fraction(1, G.n_left * d)
    return total

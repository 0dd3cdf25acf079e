"""Noise: adversarial-support / random-value errors, the q-ary symmetric
channel, and erasures.

Positions are 0-based throughout.  An erased symbol is ``None`` in a
received word (written ``?`` in text forms).
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .field import Field

ERASED = None


def error_weight(n, rho) -> int:
    """rho * n, which must be integral."""
    w = Fraction(rho).limit_denominator(10 ** 9) * n
    if w.denominator != 1:
        raise ValueError(f"rho * n = {float(w)} is not an integer")
    if not 0 <= w <= n:
        raise ValueError(f"rho * n = {w} outside [0, {n}]")
    return int(w)


@dataclass(frozen=True)
class ErrorPattern:
    n: int
    support: tuple
    values: tuple
    clean: tuple = ()

    def __post_init__(self):
        if len(self.support) != len(self.values):
            raise ValueError("support and values differ in length")
        if len(set(self.support)) != len(self.support):
            raise ValueError("repeated support position")
        if any(not 0 <= i < self.n for i in self.support):
            raise ValueError("support position out of range")
        if any(v == 0 for v in self.values):
            raise ValueError("error values must be nonzero")
        if set(self.support) & set(self.clean):
            raise ValueError("error support meets the clean set")

    @property
    def weight(self):
        return len(self.support)

    def dense(self):
        e = [0] * self.n
        for i, v in zip(self.support, self.values):
            e[i] = v
        return e

    def to_json(self) -> str:
        return json.dumps({"n": self.n, "support": list(self.support),
                           "values": [hex(v) for v in self.values],
                           "clean": list(self.clean)}, separators=(",", ":"))

    @classmethod
    def from_json(cls, line: str) -> "ErrorPattern":
        d = json.loads(line)
        return cls(d["n"], tuple(d["support"]), tuple(int(v, 16) for v in d["values"]),
                   tuple(d.get("clean", ())))


@dataclass(frozen=True)
class ErasurePattern:
    n: int
    erased: tuple

    def __post_init__(self):
        if len(set(self.erased)) != len(self.erased):
            raise ValueError("repeated erased position")
        if any(not 0 <= i < self.n for i in self.erased):
            raise ValueError("erased position out of range")

    @property
    def weight(self):
        return len(self.erased)

    def unerased(self):
        gone = set(self.erased)
        return [i for i in range(self.n) if i not in gone]

    def to_json(self) -> str:
        return json.dumps({"n": self.n, "erased": list(self.erased)}, separators=(",", ":"))

    @classmethod
    def from_json(cls, line: str) -> "ErasurePattern":
        d = json.loads(line)
        return cls(d["n"], tuple(d["erased"]))


def write_jsonl(path, patterns):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for pat in patterns:
            fh.write(pat.to_json() + "\n")


def read_jsonl(path):
    out = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            d = json.loads(line)
            cls = ErasurePattern if "erased" in d else ErrorPattern
            out.append(cls.from_json(line))
    return out


# ---------------------------------------------------------------------------


def clean_set(n, weight, rng=None, preset="random", block=1):
    """A clean set S of size n - weight.

    ``random``: uniform subset; ``prefix``: positions 0..n-weight-1 (errors
    land at the end); ``segment``: errors fill whole blocks of length
    ``block``, chosen by ``rng`` or the trailing ones without it.
    """
    size = n - weight
    if not 0 <= size <= n:
        raise ValueError(f"weight {weight} outside [0, {n}]")
    if preset == "random":
        if rng is None:
            raise ValueError("random clean set needs an rng")
        return tuple(sorted(int(i) for i in rng.choice(n, size=size, replace=False)))
    if preset == "prefix":
        return tuple(range(size))
    if preset == "segment":
        if weight % block or n % block:
            raise ValueError("segment preset needs block-aligned weight and length")
        blocks = n // block
        if rng is None:
            hit = range(blocks - weight // block, blocks)
        else:
            hit = rng.choice(blocks, size=weight // block, replace=False)
        dirty = {b * block + j for b in hit for j in range(block)}
        return tuple(i for i in range(n) if i not in dirty)
    raise ValueError(f"unknown clean-set preset {preset!r}")


def sample_error_pattern(field: Field, n, rho, clean, rng) -> ErrorPattern:
    """Errors on exactly [n] minus S, values i.i.d. uniform over the nonzero elements."""
    w = error_weight(n, rho)
    clean = tuple(sorted(int(i) for i in clean))
    if len(clean) != n - w:
        raise ValueError(f"|S| = {len(clean)} but (1 - rho) n = {n - w}")
    gone = set(clean)
    support = tuple(i for i in range(n) if i not in gone)
    values = tuple(int(v) for v in rng.integers(1, field.q, size=w))
    return ErrorPattern(n, support, values, clean)


def sample_error_values(field: Field, weight, count, rng):
    """``count`` value rows for patterns of the given weight, same law as
    ``sample_error_pattern``."""
    return rng.integers(1, field.q, size=(count, weight), dtype=np.int64)


def apply_error(field: Field, c, e: ErrorPattern):
    if len(c) != e.n:
        raise ValueError(f"codeword length {len(c)} != pattern length {e.n}")
    y = [field.check(int(v)) for v in c]
    for i, v in zip(e.support, e.values):
        y[i] = field.add(y[i], v)
    return tuple(y)


def qsc_transmit(field: Field, c, rho, rng):
    """Each symbol kept w.p. 1 - rho, else replaced by a uniform other symbol."""
    q = field.q
    if not 0 <= rho <= 1 - 1 / q + 1e-12:
        raise ValueError(f"rho = {rho} outside [0, 1 - 1/q]")
    hit = rng.random(len(c)) < rho
    shift = rng.integers(1, q, size=len(c))
    return tuple(field.add(int(v), int(s)) if h else int(v)
                 for v, h, s in zip(c, hit, shift))


def sample_erasure_pattern(n, weight=None, rng=None, erased=None) -> ErasurePattern:
    if erased is not None:
        return ErasurePattern(n, tuple(sorted(int(i) for i in erased)))
    if weight is None or not 0 <= weight <= n:
        raise ValueError(f"erasure weight {weight} outside [0, {n}]")
    return ErasurePattern(n, tuple(sorted(int(i) for i in rng.choice(n, size=weight, replace=False))))


def segment_erasures(block, N, segments) -> ErasurePattern:
    """Erase whole outer segments (blocks of ``block`` consecutive positions)."""
    erased = []
    for s in sorted(segments):
        if not 0 <= s < N:
            raise ValueError(f"segment {s} out of range")
        erased.extend(range(s * block, (s + 1) * block))
    return ErasurePattern(block * N, tuple(erased))


def apply_erasures(c, pattern: ErasurePattern):
    if len(c) != pattern.n:
        raise ValueError("length mismatch")
    gone = set(pattern.erased)
    return tuple(ERASED if i in gone else int(v) for i, v in enumerate(c))


def consistent(c, y) -> bool:
    """c matches y at every unerased position."""
    return len(c) == len(y) and all(v is ERASED or int(v) == int(u) for u, v in zip(c, y))


def hamming_distance(a, b) -> int:
    return sum(1 for u, v in zip(a, b) if u != v)


def format_word(y) -> str:
    return "(" + ",".join("?" if v is ERASED else str(int(v)) for v in y) + ")"


def parse_word(text: str):
    text = text.strip().strip("()")
    return tuple(ERASED if t.strip() == "?" else int(t, 0) for t in text.split(",") if t.strip())


def sample_ball_errors(field: Field, n, radius, count, rng):
    """``count`` dense error vectors uniform over all vectors of weight <= radius."""
    q = field.q
    weights = np.arange(radius + 1)
    mass = np.array([float(math.comb(n, w)) * float(q - 1) ** w for w in weights])
    ws = rng.choice(weights, size=count, p=mass / mass.sum())
    out = np.zeros((count, n), dtype=np.int64)
    for row, w in enumerate(ws):
        if w:
            pos = rng.choice(n, size=int(w), replace=False)
            out[row, pos] = rng.integers(1, q, size=int(w))
    return out

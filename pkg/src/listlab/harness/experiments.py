"""The named experiment suites.

Each experiment validates its configuration on construction (raising
``ConfigError`` before any trial runs), turns a trial index and seed into
one ``TrialRecord``, and folds the records into a ``Report``.
"""
from __future__ import annotations

import math
import time
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

import numpy as np

from ..analysis import (BAD_PATTERN_CAP, bad_fraction_exhaustive, binomial_sigma,
                        capacity_gap, entropy_q, nearest_rival_distance,
                        thm31a_bound, thm31b_bound)
from ..channel import (ErrorPattern, apply_erasures, apply_error, clean_set,
                       error_weight, sample_ball_errors, sample_erasure_pattern,
                       sample_error_pattern, segment_erasures)
from ..codes import (concatenate, folded_rs_code, random_linear_code,
                     random_outer_code, rs_code)
from ..decode import (ball_list_decode, erasure_list_decode, rs_error_location_decode,
                      rs_neighbor_search, rs_subset_decode)
from ..field import extension_field, field_of_order
from .config import ConfigError, ExperimentConfig
from .records import TrialRecord, derive_seed, digest, trial_rng

BALL_DECODER_CAP = 1 << 16


@dataclass
class Report:
    experiment: str
    items: list = field(default_factory=list)
    passed: bool | None = None

    def add(self, key, value):
        if isinstance(value, float):
            value = f"{value:.6g}"
        self.items.append((key, value))

    def text(self) -> str:
        gate = "none" if self.passed is None else ("pass" if self.passed else "fail")
        lines = [f"experiment = {self.experiment}"]
        lines += [f"{k} = {v}" for k, v in self.items]
        lines.append(f"gate = {gate}")
        return "\n".join(lines) + "\n"


def _require(cond, message):
    if not cond:
        raise ConfigError(message)


def _need(cfg, *keys):
    missing = [k for k in keys if getattr(cfg, k) is None]
    _require(not missing, f"{cfg.experiment} needs: {', '.join(missing)}")


def _field(q):
    try:
        return field_of_order(q)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def _weight(n, rho):
    try:
        return error_weight(n, rho)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def _within_sigma(observed, p, trials, k=3):
    """|observed - p| <= k sigma, with sigma taken at p; exact match when p is 0 or 1."""
    return abs(float(observed) - float(p)) <= k * binomial_sigma(p, trials) + 1e-12


class Experiment:
    name = ""

    def __init__(self, cfg: ExperimentConfig):
        self.cfg = cfg
        self.setup()

    def setup(self):
        raise NotImplementedError

    @property
    def trials(self):
        return self.cfg.trials

    def seed(self, index):
        return derive_seed(self.cfg.seed, self.name, index)

    def trial(self, index, seed) -> TrialRecord:
        raise NotImplementedError

    def report(self, records, timing=False) -> Report:
        raise NotImplementedError


# ---------------------------------------------------------------------------
# Uniqueness within the error radius


class Thm31a(Experiment):
    """Unique decoding within radius rho n of c + e, random values on a fixed support."""
    name = "thm31a"

    def setup(self):
        cfg = self.cfg
        _need(cfg, "q", "n", "k", "rho", "eps")
        _require(1 <= cfg.k <= cfg.n <= cfg.q, "RS code needs 1 <= k <= n <= q")
        _require(cfg.trials >= 1, "need at least one trial")
        F = _field(cfg.q)
        self.code = rs_code(F, cfg.n, cfg.k)
        n, k = cfg.n, cfg.k
        self.delta = Fraction(n - k + 1, n)
        if cfg.delta is not None:
            _require(cfg.delta == self.delta,
                     f"delta = {cfg.delta} but the RS code has relative distance {self.delta}")
        _require(0 < cfg.eps < 1, "eps must lie in (0, 1)")
        _require(0 <= cfg.rho <= self.delta - cfg.eps,
                 f"rho = {cfg.rho} outside [0, delta - eps] = [0, {self.delta - cfg.eps}]")
        self.weight = _weight(n, cfg.rho)
        self.radius = self.choose_radius()
        self.check = self.bound_check()
        if not self.check.met and cfg.bound == "require":
            unmet = [c for c, ok in self.check.conditions.items() if not ok]
            raise ConfigError(f"{self.name} preconditions unmet: {'; '.join(unmet)}")
        _require(cfg.preset in ("random", "prefix"), "clean-set preset must be random or prefix")
        if cfg.s_mode == "fixed":
            rng = trial_rng(derive_seed(cfg.seed, self.name, "clean-set"))
            self.clean = clean_set(n, self.weight, rng, cfg.preset)
        else:
            _require(cfg.preset == "random", "s_mode = average needs the random preset")
            self.clean = None
        decoder = cfg.decoder
        if decoder == "auto":
            decoder = "ball" if self.code.size <= BALL_DECODER_CAP else "neighbor"
        if decoder == "neighbor":
            _require(n - self.radius >= k, "neighbor search needs n - radius >= k")
        else:
            _require(self.code.size <= cfg.enum_cap, f"q^k = {self.code.size} exceeds enum_cap")
        self.decoder = decoder

    def choose_radius(self):
        _require(self.cfg.radius in (None, self.weight), "thm31a decodes at radius rho n")
        return self.weight

    def bound_check(self):
        return thm31a_bound(self.cfg.q, self.cfg.eps, self.cfg.n)

    def trial(self, index, seed):
        cfg, code, F = self.cfg, self.code, self.code.field
        rng = trial_rng(seed)
        clean = self.clean
        if clean is None:
            clean = clean_set(cfg.n, self.weight, rng, "random")
        msg = rng.integers(0, F.q, size=cfg.k)
        c = code.encode(msg)
        e = sample_error_pattern(F, cfg.n, cfg.rho, clean, rng)
        y = apply_error(F, c, e)
        if self.decoder == "ball":
            res = ball_list_decode(code, y, self.radius, cap=cfg.enum_cap)
        else:
            res = rs_neighbor_search(code, y, self.radius)
        bad = any(w != c for w in res.codewords)
        return TrialRecord(index, seed, int(bad), len(res), -1, res.work,
                           digest=digest(c, e.dense(), clean))

    def report(self, records, timing=False):
        cfg = self.cfg
        T = len(records)
        bad = sum(r.outcome for r in records)
        frac = Fraction(bad, T)
        rep = Report(self.name)
        rep.add("trials", T)
        rep.add("q", cfg.q)
        rep.add("n", cfg.n)
        rep.add("k", cfg.k)
        rep.add("error_weight", self.weight)
        rep.add("radius", self.radius)
        rep.add("decoder", self.decoder)
        rep.add("s_mode", cfg.s_mode)
        if self.clean is not None:
            rep.add("clean_set", ";".join(str(i) for i in self.clean))
        rep.add("bad", bad)
        rep.add("bad_fraction", float(frac))
        for cond, ok in self.check.advisory.items():
            rep.add(f"advisory[{cond}]", "met" if ok else "unmet")
        status = self.check.status()
        rep.add("bound_status", status)
        gates = []
        if status == "ok":
            b = self.check.value
            slack = 3 * binomial_sigma(b, T)
            rep.add("bound", b)
            rep.add("slack", slack)
            ok = float(frac) <= b + slack
            rep.add("bound_check", "pass" if ok else "fail")
            gates.append(ok)
        exact = self.exhaustive()
        if exact is None:
            rep.add("exhaustive", "skipped")
        else:
            ok = _within_sigma(frac, exact, T)
            rep.add("exhaustive", float(exact))
            rep.add("exhaustive_check", "pass" if ok else "fail")
            gates.append(ok)
        rep.passed = all(gates) if gates else None
        return rep

    def exhaustive(self):
        code = self.code
        if (self.clean is None or (code.field.q - 1) ** self.weight > BAD_PATTERN_CAP
                or code.size > BAD_PATTERN_CAP):
            return None
        zero = (0,) * code.n
        return bad_fraction_exhaustive(code, zero, self.clean, self.radius)


class Thm31b(Thm31a):
    """Same pipeline with the decoding radius (delta - eps) n above the error weight."""
    name = "thm31b"

    def choose_radius(self):
        cfg = self.cfg
        far = (self.delta - cfg.eps) * cfg.n
        _require(far.denominator == 1, f"(delta - eps) n = {far} is not an integer")
        radius = int(far) if cfg.radius is None else cfg.radius
        _require(self.weight <= radius <= far,
                 f"radius {radius} outside [rho n, (delta - eps) n] = [{self.weight}, {far}]")
        return radius

    def bound_check(self):
        cfg = self.cfg
        _need(cfg, "gamma")
        return thm31b_bound(cfg.q, cfg.gamma, cfg.eps, self.delta, cfg.n)


# ---------------------------------------------------------------------------
# Uniqueness at agreement 4k


class Cor32(Experiment):
    """Only c agrees with c + e in >= 4k places, for weights up to n - 4k."""
    name = "cor32"

    def setup(self):
        cfg = self.cfg
        _need(cfg, "q", "n", "k")
        n, k, q = cfg.n, cfg.k, cfg.q
        _require(1 <= k and 4 * k <= n, "needs 4k <= n")
        _require(n < q, "needs n < q")
        _require(q * k * k > n * n, f"needs q > (n/k)^2 = {Fraction(n, k) ** 2}")
        _require(cfg.trials >= 1, "need at least one trial")
        self.code = rs_code(_field(q), n, k)
        self.t = 4 * k
        self.max_weight = n - 4 * k if cfg.weight is None else cfg.weight
        _require(0 <= self.max_weight <= n - 4 * k, f"weight must lie in [0, n - 4k] = [0, {n - 4 * k}]")
        _require(cfg.preset in ("random", "prefix"), "preset must be random or prefix")
        self.crosscheck = 100 if cfg.crosscheck is None else cfg.crosscheck
        if self.crosscheck:
            _require(self.code.size <= cfg.enum_cap, "cross-check needs q^k <= enum_cap")

    def trial(self, index, seed):
        cfg, code, F = self.cfg, self.code, self.code.field
        n = cfg.n
        rng = trial_rng(seed)
        c = code.encode(rng.integers(0, F.q, size=cfg.k))
        w = int(rng.integers(0, self.max_weight + 1))
        if cfg.preset == "random":
            support = tuple(sorted(int(i) for i in rng.choice(n, size=w, replace=False)))
        else:
            support = tuple(range(n - w, n))
        values = tuple(int(v) for v in rng.integers(1, F.q, size=w))
        e = ErrorPattern(n, support, values)
        y = apply_error(F, c, e)
        res = rs_subset_decode(code, y, self.t)
        outcome = int(any(u != c for u in res.codewords))
        if index < self.crosscheck:
            ref = ball_list_decode(code, y, n - self.t, cap=cfg.enum_cap)
            outcome |= 2
            if ref.codewords != res.codewords:
                outcome |= 4
        return TrialRecord(index, seed, outcome, len(res), -1, res.work,
                           digest=digest(c, e.dense()))

    def report(self, records, timing=False):
        T = len(records)
        fails = sum(r.outcome & 1 for r in records)
        checked = sum(1 for r in records if r.outcome & 2)
        mismatches = sum(1 for r in records if r.outcome & 4)
        rep = Report(self.name)
        rep.add("trials", T)
        rep.add("q", self.cfg.q)
        rep.add("n", self.cfg.n)
        rep.add("k", self.cfg.k)
        rep.add("agreement", self.t)
        rep.add("max_weight", self.max_weight)
        rep.add("failures", fails)
        rep.add("failure_fraction", fails / T)
        rep.add("crosschecked", checked)
        rep.add("mismatches", mismatches)
        rep.passed = mismatches == 0
        return rep


# ---------------------------------------------------------------------------
# Random codes above capacity


class Lemma34(Experiment):
    """Random linear codes above capacity have a codeword with mostly crowded balls."""
    name = "lemma34"

    def setup(self):
        cfg = self.cfg
        _need(cfg, "q", "n", "k", "rho")
        q, n, k = cfg.q, cfg.n, cfg.k
        _require(1 <= k <= n, "needs 1 <= k <= n")
        _require(cfg.rho < 1 - Fraction(1, q), "needs rho < 1 - 1/q")
        self.radius = _weight(n, cfg.rho)
        self.gap = capacity_gap(Fraction(k, n), q, cfg.rho).errors
        _require(self.gap > 0, f"rate {k}/{n} is not above capacity 1 - H_q(rho) "
                               f"= {1 - entropy_q(cfg.rho, q):.6g}")
        if cfg.gamma is not None:
            _require(self.gap >= cfg.gamma, f"capacity gap {self.gap:.6g} < gamma = {cfg.gamma}")
        _require(q ** k <= BALL_DECODER_CAP * 16, "q^k too large to enumerate")
        _require(cfg.candidates >= 1 and cfg.patterns >= 1, "candidates and patterns must be >= 1")
        self.field = _field(q)

    def trial(self, index, seed):
        cfg, F = self.cfg, self.field
        rng = trial_rng(seed)
        code = random_linear_code(F, cfg.n, cfg.k, rng)
        book = code.codebook()
        picks = rng.integers(0, code.size, size=cfg.candidates)
        everywhere = list(range(cfg.n))
        best = 0
        for m in picks:
            c = book[m]
            errors = sample_ball_errors(F, cfg.n, self.radius, cfg.patterns, rng)
            near = nearest_rival_distance(code, c, everywhere, errors)
            best = max(best, int(np.count_nonzero(near <= self.radius)))
        witness = 2 * best > cfg.patterns
        return TrialRecord(index, seed, int(witness), best, code.rank,
                           cfg.candidates * cfg.patterns,
                           digest=digest(code.generator, picks))

    def report(self, records, timing=False):
        cfg = self.cfg
        T = len(records)
        wit = sum(r.outcome for r in records)
        fracs = [r.list_size / cfg.patterns for r in records]
        rep = Report(self.name)
        rep.add("codes", T)
        rep.add("q", cfg.q)
        rep.add("n", cfg.n)
        rep.add("k", cfg.k)
        rep.add("radius", self.radius)
        rep.add("capacity_gap", self.gap)
        rep.add("candidates", cfg.candidates)
        rep.add("patterns", cfg.patterns)
        rep.add("witnesses", wit)
        if T:
            rep.add("witness_fraction", wit / T)
            rep.add("best_fraction_min", min(fracs))
            rep.add("best_fraction_mean", sum(fracs) / T)
            rep.passed = Fraction(wit, T) >= cfg.min_witness_fraction
        return rep


# ---------------------------------------------------------------------------
# Concatenated codes under erasures


class Thm41(Experiment):
    """Folded RS outer code with random rate-1 inner codes, erasure list sizes."""
    name = "thm41"

    def setup(self):
        cfg = self.cfg
        _need(cfg, "q", "n", "N", "K", "eps")
        q, n, N, K = cfg.q, cfg.n, cfg.N, cfg.K
        _require(1 <= K <= N, "needs 1 <= K <= N")
        self.R = Fraction(K, N)
        _require(0 < cfg.eps < 1 - self.R, f"eps must lie in (0, 1 - R) = (0, {1 - self.R})")
        self.rho = 1 - self.R - cfg.eps
        if cfg.rho is not None:
            _require(cfg.rho == self.rho, f"rho must equal 1 - R - eps = {self.rho}")
        self.weight = _weight(n * N, self.rho)
        self.sub = _field(q)
        self.build_outer_field()
        self.crosscheck = 2 if cfg.crosscheck is None else cfg.crosscheck
        if self.crosscheck:
            _require(q ** (n * K) <= min(cfg.enum_cap, 1 << 20),
                     "brute-force cross-check needs q^(nK) <= 2^20")
        _require(cfg.patterns >= 1, "patterns must be >= 1")

    def build_outer_field(self):
        cfg = self.cfg
        _require(cfg.n % cfg.s == 0, "folding s must divide n")
        d = cfg.n // cfg.s
        self.base = self.sub if d == 1 else extension_field(self.sub, d)
        _require(cfg.s * cfg.N <= self.base.q, f"sN = {cfg.s * cfg.N} exceeds |base| = {self.base.q}")

    def outer(self, rng):
        cfg = self.cfg
        return folded_rs_code(self.base, cfg.N, cfg.K, cfg.s, subfield=self.sub)

    def patterns(self, rng):
        cfg = self.cfg
        n, N, w = cfg.n, cfg.N, self.weight
        out = [sample_erasure_pattern(n * N, erased=range(w))]
        if w % n == 0:
            segs = list(combinations(range(N), w // n))
            room = cfg.patterns // 2
            if len(segs) > room:
                pick = rng.choice(len(segs), size=room, replace=False)
                segs = [segs[i] for i in sorted(pick)]
            out += [segment_erasures(n, N, s) for s in segs]
        while len(out) < cfg.patterns:
            out.append(sample_erasure_pattern(n * N, w, rng))
        return out[:cfg.patterns]

    def trial(self, index, seed):
        cfg, F = self.cfg, self.sub
        rng = trial_rng(seed)
        outer = self.outer(rng)
        width = outer.symbol_length
        inners = [random_linear_code(F, width, width, rng) for _ in range(cfg.N)]
        code = concatenate(outer, inners)
        c = code.encode(rng.integers(0, F.q, size=code.k))
        full = code.rank == code.k
        pats = self.patterns(rng)
        book = code.codebook() if self.crosscheck else None
        worst = 0
        worst_dim = 0
        mismatch = False
        for j, pat in enumerate(pats):
            y = apply_erasures(c, pat)
            if j < self.crosscheck:
                res = erasure_list_decode(code, y, list_cap=cfg.list_cap)
                keep = pat.unerased()
                yk = np.array([y[i] for i in keep], dtype=np.int64)
                hits = np.unique(book[np.all(book[:, keep] == yk, axis=1)], axis=0)
                brute = tuple(tuple(int(v) for v in row) for row in hits)
                if res.truncated or brute != res.codewords or len(brute) != res.list_size:
                    mismatch = True
            else:
                res = erasure_list_decode(code, y, list_cap=1)
            worst = max(worst, res.list_size)
            worst_dim = max(worst_dim, res.dimension)
        outcome = int(full) | (2 if worst <= cfg.max_list else 0) | (4 if mismatch else 0)
        return TrialRecord(index, seed, outcome, worst, worst_dim, len(pats),
                           digest=digest(code.generator, c,
                                         [i for p in pats for i in p.erased]))

    def report(self, records, timing=False):
        cfg = self.cfg
        T = len(records)
        full = sum(r.outcome & 1 for r in records)
        small = sum(1 for r in records if r.outcome & 2)
        bad = sum(1 for r in records if r.outcome & 4)
        hist = Counter(r.list_size for r in records)
        rep = Report(self.name)
        rep.add("codes", T)
        rep.add("q", cfg.q)
        rep.add("n", cfg.n)
        rep.add("N", cfg.N)
        rep.add("K", cfg.K)
        rep.add("rate", str(self.R))
        rep.add("rho", str(self.rho))
        rep.add("erasures", self.weight)
        rep.add("patterns_per_code", cfg.patterns)
        rep.add("crosscheck_per_code", self.crosscheck)
        rep.add("mismatches", bad)
        rep.add("max_list_hist", " ".join(f"{s}:{c}" for s, c in sorted(hist.items())))
        if T:
            rep.add("full_rank_fraction", full / T)
            rep.add(f"max_list_le_{cfg.max_list}_fraction", small / T)
            rep.passed = (bad == 0 and Fraction(full, T) >= cfg.min_full_rank_fraction
                          and Fraction(small, T) >= cfg.min_list_fraction)
        return rep


class Thm42(Thm41):
    """Random linear outer code over GF(q^n) with random rate-1 inner codes."""
    name = "thm42"

    def build_outer_field(self):
        _require(self.cfg.s == 1, "thm42 has no folding (s must be 1)")
        n = self.cfg.n
        self.base = self.sub if n == 1 else extension_field(self.sub, n)

    def outer(self, rng):
        return random_outer_code(self.base, self.cfg.N, self.cfg.K, rng, subfield=self.sub)


# ---------------------------------------------------------------------------
# Decoder work counters


DEFAULT_BENCH_GRID = ((8, 1, 4), (12, 1, 6), (16, 1, 8), (16, 1, 11))


class Bench(Experiment):
    """Work counters of the subset, error-location and ball decoders on an (n, k, e) grid."""
    name = "bench"

    def setup(self):
        cfg = self.cfg
        q = 4096 if cfg.q is None else cfg.q
        self.q = q
        self.field = _field(q)
        grid = DEFAULT_BENCH_GRID if cfg.grid is None else cfg.grid
        self.grid = []
        for row in grid:
            _require(len(row) == 3, f"grid rows are [n, k, e], got {row}")
            n, k, e = (int(v) for v in row)
            _require(1 <= k and 4 * k <= n <= q, f"grid point {row}: needs 4k <= n <= q")
            _require(0 <= e <= n - k, f"grid point {row}: needs 0 <= e <= n - k")
            _require(q ** k <= cfg.enum_cap, f"grid point {row}: q^k exceeds enum_cap")
            self.grid.append((n, k, e))
        self.codes = {}

    @property
    def trials(self):
        return len(self.grid)

    def code(self, n, k):
        if (n, k) not in self.codes:
            self.codes[n, k] = rs_code(self.field, n, k)
        return self.codes[n, k]

    def trial(self, index, seed):
        n, k, e = self.grid[index]
        code, F = self.code(n, k), self.field
        rng = trial_rng(seed)
        c = code.encode(rng.integers(0, F.q, size=k))
        support = tuple(sorted(int(i) for i in rng.choice(n, size=e, replace=False)))
        pat = ErrorPattern(n, support, tuple(int(v) for v in rng.integers(1, F.q, size=e)))
        y = apply_error(F, c, pat)
        clock = {}
        t0 = time.perf_counter()
        sub = rs_subset_decode(code, y, 4 * k)
        clock["subset"] = time.perf_counter() - t0
        t0 = time.perf_counter()
        loc = rs_error_location_decode(code, y, e)
        clock["errloc"] = time.perf_counter() - t0
        t0 = time.perf_counter()
        ball = ball_list_decode(code, y, e, cap=self.cfg.enum_cap)
        clock["ball"] = time.perf_counter() - t0
        exact = (sub.work == math.comb(n, 4 * k) and loc.work == math.comb(n, e)
                 and ball.work == F.q ** k)
        fewest = sub.work < loc.work and sub.work < ball.work
        outcome = int(exact) | (2 if fewest else 0) | (4 if loc.codewords != ball.codewords else 0)
        rec = TrialRecord(index, seed, outcome, len(ball), -1, sub.work,
                          digest=digest(c, pat.dense()))
        rec.extra = {"errloc_work": loc.work, "ball_work": ball.work, "clock": clock}
        return rec

    def report(self, records, timing=False):
        rep = Report(self.name)
        rep.add("q", self.q)
        exact = True
        bad = 0
        for r in records:
            n, k, e = self.grid[r.trial]
            sub, loc, ball = math.comb(n, 4 * k), math.comb(n, e), self.q ** k
            counts = {"subset": sub, "errloc": loc, "ball": ball}
            low = min(counts.values())
            fewest = "+".join(d for d, c in counts.items() if c == low)
            line = f"subset={sub} errloc={loc} ball={ball} fewest={fewest}"
            if timing and r.extra:
                ck = r.extra["clock"]
                line += " ms=" + "/".join(f"{1000 * ck[d]:.1f}" for d in ("subset", "errloc", "ball"))
            rep.add(f"n={n},k={k},e={e}", line)
            exact = exact and bool(r.outcome & 1)
            bad += bool(r.outcome & 4)
        rep.add("counters_exact", "yes" if exact else "no")
        rep.add("list_mismatches", bad)
        rep.passed = exact and bad == 0
        return rep


EXPERIMENT_TYPES = {cls.name: cls for cls in (Thm31a, Thm31b, Cor32, Lemma34, Thm41, Thm42, Bench)}


def build_experiment(cfg: ExperimentConfig) -> Experiment:
    return EXPERIMENT_TYPES[cfg.experiment](cfg)

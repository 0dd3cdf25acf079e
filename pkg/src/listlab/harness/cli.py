"""Command line interface.

    listlab encode --code rs:q=5,n=4,k=2 --message 1,2
    listlab corrupt --q 5 --word 1,3,0,2 --weight 2 --seed 3
    listlab decode --code rs:q=5,n=4,k=1 --word 1,1,2,3 --radius 2
    listlab experiment run thm31a --config a.toml --seed 7 --out a.csv
    listlab experiment replay a.csv --trial 13
    listlab bench

Exit status: 0 success or gate passed, 1 gate failed or replay mismatch,
2 usage or configuration error.
"""
from __future__ import annotations

import argparse
import sys
from fractions import Fraction

import numpy as np
import tomli

from ..channel import (ERASED, apply_erasures, apply_error, clean_set, error_weight,
                       format_word, parse_word, sample_erasure_pattern,
                       sample_error_pattern, write_jsonl)
from ..codes import LinearCode, random_linear_code, rs_code
from ..decode import (ball_list_decode, erasure_list_decode, rs_error_location_decode,
                      rs_neighbor_search, rs_subset_decode)
from ..field import field_of_order
from .config import ConfigError, ExperimentConfig
from .runner import replay_trial, run_experiment, save_run


class UsageError(Exception):
    pass


def parse_code(spec: str, seed=0) -> LinearCode:
    """``rs:q=5,n=4,k=2``, ``random:q=2,n=8,k=4`` (seeded by --seed) or ``file:path``."""
    kind, _, rest = spec.partition(":")
    if kind == "file":
        with open(rest, encoding="utf-8") as fh:
            return LinearCode.from_text(fh.read())
    try:
        params = dict(kv.split("=", 1) for kv in rest.split(",") if kv)
        q, n, k = int(params.pop("q")), int(params.pop("n")), int(params.pop("k"))
    except (KeyError, ValueError):
        raise UsageError(f"bad code spec {spec!r}; expected e.g. rs:q=5,n=4,k=2") from None
    if params:
        raise UsageError(f"unknown code parameters: {', '.join(sorted(params))}")
    F = field_of_order(q)
    if kind == "rs":
        return rs_code(F, n, k)
    if kind == "random":
        return random_linear_code(F, n, k, np.random.default_rng(seed), seed=seed)
    raise UsageError(f"unknown code family {kind!r}")


def _ints(text):
    return [int(t, 0) for t in text.split(",") if t.strip()]


def cmd_encode(args):
    code = parse_code(args.code, args.seed)
    print(format_word(code.encode(_ints(args.message))))
    return 0


def cmd_corrupt(args):
    F = field_of_order(args.q)
    word = parse_word(args.word)
    n = len(word)
    rng = np.random.default_rng(args.seed)
    if args.erase is not None:
        pat = sample_erasure_pattern(n, args.erase, rng)
        y = apply_erasures(word, pat)
    else:
        if (args.weight is None) == (args.rho is None):
            raise UsageError("give exactly one of --weight, --rho or --erase")
        w = args.weight if args.weight is not None else error_weight(n, Fraction(args.rho))
        rho = Fraction(w, n)
        clean = _ints(args.clean) if args.clean else clean_set(n, w, rng, "random")
        pat = sample_error_pattern(F, n, rho, clean, rng)
        y = apply_error(F, word, pat)
    if args.out:
        write_jsonl(args.out, [pat])
    print(format_word(y))
    return 0


def cmd_decode(args):
    code = parse_code(args.code, args.seed)
    y = parse_word(args.word)
    decoder = args.decoder
    if decoder == "auto":
        decoder = "erasure" if any(v is ERASED for v in y) else "ball"
    if decoder != "erasure" and args.radius is None and decoder != "subset":
        raise UsageError(f"decoder {decoder} needs --radius")
    if decoder == "erasure":
        res = erasure_list_decode(code, y, list_cap=args.list_cap)
    elif decoder == "ball":
        res = ball_list_decode(code, y, args.radius)
    elif decoder == "neighbor":
        res = rs_neighbor_search(code, y, args.radius)
    elif decoder == "errloc":
        res = rs_error_location_decode(code, y, args.radius)
    else:
        t = args.agree if args.agree is not None else code.n - args.radius
        res = rs_subset_decode(code, y, t)
    for w in res.codewords:
        print(format_word(w))
    if res.truncated:
        print(f"list_size = {res.list_size} (truncated, dimension {res.dimension})")
    return 0


def _load_config(args, name):
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            text = fh.read()
        try:
            d = tomli.loads(text)
        except tomli.TOMLDecodeError as exc:
            raise ConfigError(f"config parse error: {exc}") from None
        d.setdefault("experiment", name)
        if d["experiment"] != name:
            raise ConfigError(f"config is for {d['experiment']}, not {name}")
        cfg = ExperimentConfig.from_dict(d)
    else:
        cfg = ExperimentConfig(experiment=name)
    changes = {}
    if args.seed is not None:
        changes["seed"] = args.seed
    if args.out:
        changes["out"] = args.out
    return cfg.replace(**changes) if changes else cfg


def _run_and_report(cfg, args):
    result = run_experiment(cfg, jobs=args.jobs, timing=args.timing)
    if cfg.out:
        save_run(result, cfg.out, timing=args.timing)
    sys.stdout.write(result.report.text())
    return 1 if result.report.passed is False else 0


def cmd_experiment_run(args):
    return _run_and_report(_load_config(args, args.name), args)


def cmd_experiment_replay(args):
    old, fresh = replay_trial(args.csv, args.trial)
    print(f"recorded = {old.row(timing=False)}")
    print(f"replayed = {fresh.row(timing=False)}")
    same = old.key() == fresh.key()
    print(f"replay = {'match' if same else 'MISMATCH'}")
    return 0 if same else 1


def cmd_bench(args):
    cfg = _load_config(args, "bench")
    if args.q is not None:
        cfg = cfg.replace(q=args.q)
    return _run_and_report(cfg, args)


def _common():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="master seed")
    common.add_argument("--jobs", type=int, default=argparse.SUPPRESS, help="worker processes")
    common.add_argument("--out", default=argparse.SUPPRESS, help="output path")
    common.add_argument("--timing", action="store_true", default=argparse.SUPPRESS,
                        help="record wall times (CSV ms column, bench table)")
    return common


def build_parser():
    common = _common()
    ap = argparse.ArgumentParser(prog="listlab", parents=[common],
                                 description="List decoding under random errors and erasures.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("encode", parents=[common], help="encode a message")
    p.add_argument("--code", required=True)
    p.add_argument("--message", required=True)
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("corrupt", parents=[common], help="add errors or erasures to a word")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--word", required=True)
    p.add_argument("--weight", type=int)
    p.add_argument("--rho")
    p.add_argument("--clean", help="comma-separated clean positions (default: random)")
    p.add_argument("--erase", type=int, help="erase this many random positions instead")
    p.set_defaults(func=cmd_corrupt)

    p = sub.add_parser("decode", parents=[common], help="list-decode a received word")
    p.add_argument("--code", required=True)
    p.add_argument("--word", required=True, help="symbols, '?' for an erasure")
    p.add_argument("--radius", type=int)
    p.add_argument("--agree", type=int, help="agreement t for the subset decoder")
    p.add_argument("--decoder", default="auto",
                   choices=("auto", "ball", "neighbor", "errloc", "subset", "erasure"))
    p.add_argument("--list-cap", type=int, default=1 << 16)
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("experiment", help="run or replay an experiment")
    esub = p.add_subparsers(dest="action", required=True)
    r = esub.add_parser("run", parents=[common])
    r.add_argument("name")
    r.add_argument("--config")
    r.set_defaults(func=cmd_experiment_run)
    r = esub.add_parser("replay", parents=[common])
    r.add_argument("csv")
    r.add_argument("--trial", type=int, required=True)
    r.set_defaults(func=cmd_experiment_replay)

    p = sub.add_parser("bench", parents=[common], help="decoder work counters")
    p.add_argument("--config")
    p.add_argument("--q", type=int)
    p.set_defaults(func=cmd_bench)
    return ap


def main(argv=None):
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    for key, default in (("seed", None), ("jobs", 1), ("out", None), ("timing", False)):
        if not hasattr(args, key):
            setattr(args, key, default)
    try:
        return args.func(args)
    except (ConfigError, UsageError, ValueError, KeyError, OSError) as exc:
        print(f"listlab: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

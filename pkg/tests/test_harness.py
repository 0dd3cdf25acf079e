import hashlib
from fractions import Fraction
from math import comb

import numpy as np
import pytest

from listlab.channel import apply_erasures, segment_erasures
from listlab.codes import LinearCode, concatenate, folded_rs_code
from listlab.decode import erasure_list_decode
from listlab.field import field_build
from listlab.harness import (ConfigError, ExperimentConfig, build_experiment, derive_seed,
                             replay_trial, run_experiment, save_run)
from listlab.harness.records import read_csv


def cfg(**kw):
    return ExperimentConfig.from_dict(kw)


TINY_31A = dict(experiment="thm31a", q=5, n=4, k=1, eps="1/4", rho="1/2", trials=400,
                seed=3, bound="report")


def test_config_rejects_unknown_and_malformed():
    with pytest.raises(ConfigError):
        cfg(experiment="thm31a", q=5, colour="red")
    with pytest.raises(ConfigError):
        cfg(experiment="nope")
    with pytest.raises(ConfigError):
        cfg(experiment="thm31a", n="six")
    with pytest.raises(ConfigError):
        ExperimentConfig.from_toml('experiment = "bench"\n[table]\nx = 1\n')
    with pytest.raises(ConfigError):
        ExperimentConfig.from_toml("experiment = ")
    with pytest.raises(ConfigError):
        cfg(experiment="thm31a", p=2, m=3, q=9)


def test_config_toml_roundtrip():
    c = cfg(**TINY_31A, grid=[[1, 2, 3]])
    back = ExperimentConfig.from_toml(c.to_toml())
    assert back == c and back.eps == Fraction(1, 4)
    assert cfg(experiment="bench", p=2, m=12).q == 4096


def test_seed_derivation():
    want = int.from_bytes(hashlib.sha256(b"7:thm31a:13").digest()[:8], "big")
    assert derive_seed(7, "thm31a", 13) == want
    assert derive_seed(7, "thm31a", 13) != derive_seed(7, "thm31b", 13)


def test_preconditions_are_checked_before_running():
    with pytest.raises(ConfigError):  # q below 2^(6/eps)
        build_experiment(cfg(**{**TINY_31A, "bound": "require"}))
    with pytest.raises(ConfigError):  # rho above delta - eps
        build_experiment(cfg(**{**TINY_31A, "rho": "1"}))
    with pytest.raises(ConfigError):  # rho n not integral
        build_experiment(cfg(**{**TINY_31A, "rho": "1/3"}))
    with pytest.raises(ConfigError):
        build_experiment(cfg(experiment="thm31b", q=4096, n=6, k=2, eps="1/3", rho="1/3"))


def test_tiny_thm31a_matches_exhaustive():
    res = run_experiment(cfg(**TINY_31A))
    items = dict(res.report.items)
    assert items["bound_status"] == "preconditions-unmet" and "bound" not in items
    assert items["exhaustive_check"] == "pass"
    assert res.report.passed is True


def test_zero_errors_never_fail():
    res = run_experiment(cfg(experiment="thm31a", q=4096, n=6, k=1, eps="1/2", rho=0,
                             trials=100, seed=1))
    assert all(r.outcome == 0 for r in res.records)
    assert dict(res.report.items)["bad"] == 0


def test_thm31b_at_radius_rho_n_is_the_thm31a_event():
    base = dict(q=7, n=6, k=2, eps="1/3", rho="1/3", trials=300, seed=5, bound="report")
    a = build_experiment(cfg(experiment="thm31a", **base))
    b = build_experiment(cfg(experiment="thm31b", gamma="1/4", radius=2, **base))
    b.clean = a.clean
    for i in range(300):
        s = a.seed(i)
        assert a.trial(i, s) == b.trial(i, s)


def test_vacuous_bound_has_no_gate_from_it():
    res = run_experiment(cfg(experiment="thm31b", q=4096, n=6, k=2, eps="1/3", gamma="1/2",
                             rho="1/3", trials=20, seed=1))
    items = dict(res.report.items)
    assert items["bound_status"] == "vacuous" and "bound_check" not in items


def test_cor32_boundary():
    ok = cfg(experiment="cor32", q=17, n=4, k=1, trials=50, crosscheck=50)
    res = run_experiment(ok)
    assert res.report.passed is True and dict(res.report.items)["mismatches"] == 0
    with pytest.raises(ConfigError):
        build_experiment(cfg(experiment="cor32", q=16, n=4, k=1))


def test_cor32_without_errors():
    res = run_experiment(cfg(experiment="cor32", q=4096, n=8, k=1, weight=0, trials=30,
                             crosscheck=5))
    assert all(r.outcome & 1 == 0 and r.list_size == 1 for r in res.records)


def test_lemma34_rejects_zero_rho():
    with pytest.raises(ConfigError):
        build_experiment(cfg(experiment="lemma34", q=2, n=14, k=11, rho=0))
    with pytest.raises(ConfigError):  # below capacity
        build_experiment(cfg(experiment="lemma34", q=2, n=14, k=3, rho="3/14"))


def test_lemma34_whole_space():
    res = run_experiment(cfg(experiment="lemma34", q=2, n=6, k=6, rho="1/6", trials=8,
                             candidates=2, patterns=50))
    full = [r for r in res.records if r.dimension == 6]
    assert full
    assert all(r.list_size == 50 and r.outcome == 1 for r in full)


def test_segment_erasures_beyond_redundancy_leave_a_list():
    G2, G16 = field_build(2), field_build(2, 4)
    outer = folded_rs_code(G16, 8, 4, 1, subfield=G2)
    C = concatenate(outer, [LinearCode(G2, np.eye(4, dtype=np.int64))] * 8)
    c = C.encode(np.arange(16) % 2)
    # 5 > (1 - R) N = 4 segments erased: only 3 outer symbols survive
    y = apply_erasures(c, segment_erasures(4, 8, (0, 2, 3, 5, 7)))
    res = erasure_list_decode(C, y)
    assert res.dimension == 4 and res.list_size == 16 and c in res


def test_thm41_small_run():
    res = run_experiment(cfg(experiment="thm41", q=2, n=4, N=8, K=4, eps="1/4", trials=4,
                             patterns=30, crosscheck=3, seed=2))
    items = dict(res.report.items)
    assert items["mismatches"] == 0 and items["erasures"] == 8
    assert all(r.work == 30 for r in res.records)


def test_thm41_near_zero_erasures():
    # eps just below 1 - R leaves a single erased position
    res = run_experiment(cfg(experiment="thm41", q=2, n=4, N=8, K=4, eps="15/32", trials=4,
                             patterns=10, crosscheck=2, seed=4))
    assert dict(res.report.items)["erasures"] == 1
    with pytest.raises(ConfigError):
        build_experiment(cfg(experiment="thm41", q=2, n=4, N=8, K=4, eps="1/2"))
    with pytest.raises(ConfigError):
        build_experiment(cfg(experiment="thm42", q=2, n=4, N=8, K=4, eps="1/4", s=2))


def test_bench_counters():
    res = run_experiment(cfg(experiment="bench", q=4096))
    for r in res.records:
        assert r.outcome & 1 and not r.outcome & 4
    text = res.report.text()
    assert "n=8,k=1,e=4 = subset=70 errloc=70 ball=4096 fewest=subset+errloc" in text
    assert f"n=16,k=1,e=11 = subset={comb(16, 4)} errloc={comb(16, 11)} ball=4096 fewest=subset" in text


def test_determinism_across_jobs_and_replay(tmp_path):
    c = cfg(**{**TINY_31A, "trials": 60})
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    save_run(run_experiment(c, jobs=1), a)
    save_run(run_experiment(c, jobs=2), b)
    assert a.read_bytes() == b.read_bytes()
    assert run_experiment(c).report.text() == run_experiment(c, jobs=3).report.text()
    old, fresh = replay_trial(a, 13)
    assert old.key() == fresh.key()
    assert len(read_csv(a)) == 60
    with pytest.raises(KeyError):
        replay_trial(a, 60)

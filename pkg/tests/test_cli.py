import json

import pytest

from listlab.harness.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_decode_example(capsys):
    code, out, _ = run(capsys, "decode", "--code", "rs:q=5,n=4,k=1", "--word", "1,1,2,3",
                       "--radius", "2")
    assert code == 0 and out.strip() == "(1,1,1,1)"


@pytest.mark.parametrize("decoder", ["neighbor", "subset", "errloc"])
def test_decode_rs_decoders(capsys, decoder):
    code, out, _ = run(capsys, "decode", "--code", "rs:q=5,n=4,k=1", "--word", "1,1,1,2",
                       "--radius", "1", "--decoder", decoder)
    assert code == 0 and out.strip() == "(1,1,1,1)"


def test_decode_erasures(capsys):
    code, out, _ = run(capsys, "decode", "--code", "rs:q=5,n=4,k=2", "--word", "1,?,?,2")
    assert code == 0 and out.strip() == "(1,3,0,2)"
    code, out, _ = run(capsys, "decode", "--code", "rs:q=4096,n=6,k=3", "--word", "?,?,?,?,?,?",
                       "--list-cap", "10")
    assert code == 0 and "truncated" in out


def test_encode_and_corrupt(capsys, tmp_path):
    code, out, _ = run(capsys, "encode", "--code", "rs:q=5,n=4,k=2", "--message", "1,2")
    assert code == 0 and out.strip() == "(1,3,0,2)"
    path = tmp_path / "e.jsonl"
    code, out, _ = run(capsys, "--seed", "3", "corrupt", "--q", "5", "--word", "1,3,0,2",
                       "--weight", "2", "--clean", "0,1", "--out", str(path))
    assert code == 0
    y = out.strip().strip("()").split(",")
    assert y[:2] == ["1", "3"] and y[2] != "0" and y[3] != "2"
    assert json.loads(path.read_text())["support"] == [2, 3]
    code, out, _ = run(capsys, "corrupt", "--q", "2", "--word", "1,0,1", "--erase", "3")
    assert out.strip() == "(?,?,?)"


def test_usage_errors(capsys):
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys, "decode", "--code", "rs:q=5,n=4,k=1", "--word", "1,1,2,3",
               "--bogus")[0] == 2
    assert run(capsys, "decode", "--code", "rs:q=6,n=4,k=1", "--word", "1,1,2,3",
               "--radius", "1")[0] == 2
    assert run(capsys, "decode", "--code", "hadamard:q=2,n=4,k=1", "--word", "1,1,1,1",
               "--radius", "1")[0] == 2
    assert run(capsys, "corrupt", "--q", "5", "--word", "1,2")[0] == 2
    assert run(capsys)[0] == 2


def test_config_errors(capsys, tmp_path):
    bad = tmp_path / "bad.toml"
    bad.write_text('q = 4096\nn = 6\nk = 1\neps = "1/2"\nrho = "1/2"\nflavour = 3\n')
    code, _, err = run(capsys, "experiment", "run", "thm31a", "--config", str(bad))
    assert code == 2 and "flavour" in err
    bad.write_text('experiment = "thm31b"\n')
    assert run(capsys, "experiment", "run", "thm31a", "--config", str(bad))[0] == 2
    assert run(capsys, "experiment", "run", "thm31a", "--config", str(tmp_path / "none"))[0] == 2
    bad.write_text('q = 64\nn = 8\nk = 1\n')
    assert run(capsys, "experiment", "run", "cor32", "--config", str(bad))[0] == 2


def test_gate_failure_exits_one(capsys, tmp_path):
    cfg = tmp_path / "t.toml"
    cfg.write_text('q = 2\nn = 4\nN = 8\nK = 4\neps = "1/4"\ntrials = 3\npatterns = 20\n'
                   'crosscheck = 1\nmax_list = 1\n')
    code, out, _ = run(capsys, "experiment", "run", "thm41", "--config", str(cfg))
    assert code == 1 and out.strip().endswith("gate = fail")


def test_run_twice_and_replay(capsys, tmp_path):
    cfg = tmp_path / "a.toml"
    cfg.write_text('q = 5\nn = 4\nk = 1\neps = "1/4"\nrho = "1/2"\ntrials = 40\n'
                   'bound = "report"\n')
    csvs = []
    for name in ("a.csv", "b.csv"):
        path = tmp_path / name
        code, out, _ = run(capsys, "experiment", "run", "thm31a", "--config", str(cfg),
                           "--seed", "7", "--out", str(path))
        assert code == 0 and "gate = pass" in out
        csvs.append(path.read_bytes())
    assert csvs[0] == csvs[1]
    assert csvs[0].startswith(b"trial,seed,outcome,list_size,dimension,work,ms,digest\n")
    code, out, _ = run(capsys, "experiment", "replay", str(tmp_path / "a.csv"), "--trial", "13")
    assert code == 0 and "replay = match" in out


def test_bench(capsys):
    code, out, _ = run(capsys, "bench")
    assert code == 0
    assert "n=16,k=1,e=11 = subset=1820 errloc=4368 ball=4096 fewest=subset" in out
    assert out.strip().endswith("gate = pass")

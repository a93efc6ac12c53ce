import subprocess
import sys

import pytest

from bailey_lab.cli import run


def invoke(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_invert_check_example(capsys):
    code, out, _ = invoke(capsys, "invert-check", "--group", "A", "--rank", "2", "--box", "2,2",
                          "--trials", "5", "--seed", "7", "--jobs", "1")
    assert code == 0
    checks = [line for line in out.splitlines() if line.startswith("CHECK")]
    assert checks == ["CHECK inversion A 2 2,2 pass"] * 5


@pytest.mark.parametrize("argv", [
    ["invert-check", "--group", "A", "--rank", "0"],
    ["invert-check", "--rank", "2", "--box", "2"],
    ["invert-check", "--trials", "0"],
    ["invert-check", "--q", "1/0"],
    ["invert-check", "--group", "B"],
    ["frobnicate"],
    ["lemma-check", "--group", "C", "--rho", "2"],
    ["chain", "--group", "A", "--step", "alpha=2,beta=3"],
    ["invert-check", "--rank", "2", "--box", "1,1", "--x", "1/2"],
    ["reduce-classical", "--box", "2,2"],
])
def test_usage_errors_exit_3(capsys, argv):
    code, out, err = invoke(capsys, *argv)
    assert code == 3
    assert out == "" and "usage error" in err


def test_inadmissible_lemma_exits_2(capsys):
    code, out, _ = invoke(capsys, "lemma-check", "--group", "C", "--rank", "1", "--box", "3",
                          "--q", "1/2", "--x", "1/3", "--alpha", "2", "--beta", "3")
    assert code == 2
    assert out.startswith("CHECK lemma C 1 3 inadmissible")


def test_lemma_check_pinned_c(capsys):
    code, out, _ = invoke(capsys, "lemma-check", "--group", "C", "--rank", "1", "--box", "3",
                          "--q", "1/2", "--x", "1/5", "--alpha", "2", "--beta", "3")
    assert code == 0
    assert out.splitlines()[:3] == ["CHECK lemma C 1 3 pass", "PARAMS q=1/2 x=1/5", "PARAMS alpha=2 beta=3"]


def test_inadmissible_invert_pinned(capsys):
    code, out, _ = invoke(capsys, "invert-check", "--group", "A", "--rank", "1", "--box", "1",
                          "--q", "1/2", "--a", "2", "--x", "1")
    assert code == 2 and "inadmissible" in out


def test_chain_with_steps(capsys):
    code, out, _ = invoke(capsys, "chain", "--group", "A", "--rank", "1", "--box", "3",
                          "--step", "rho=2,sigma=3", "--step", "rho=5,sigma=7", "--from", "random")
    assert code == 0
    assert [l.split()[1] for l in out.splitlines() if l.startswith("CHECK")] == ["chain.0", "chain.1", "chain.2"]


def test_chain_sampled_steps_c(capsys):
    code, out, _ = invoke(capsys, "chain", "--group", "C", "--rank", "2", "--box", "1,1", "--length", "2")
    assert code == 0 and out.count("CHECK") == 3


def test_pair_check_and_reduce(capsys):
    code, out, _ = invoke(capsys, "pair-check", "--group", "C", "--rank", "2", "--box", "1,2", "--trials", "2")
    assert code == 0 and out.count(" pass") == 4
    code, out, _ = invoke(capsys, "reduce-classical", "--box", "6", "--trials", "10")
    assert code == 0 and out.startswith("CHECK classical-reduction A 1 6 pass")


def test_human_format_and_output_file(capsys, tmp_path):
    target = tmp_path / "out.txt"
    code, out, _ = invoke(capsys, "invert-check", "--format", "human", "--output", str(target))
    assert code == 0 and out == ""
    assert "PASS" in target.read_text()


def test_config_file_and_override(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# sample\ngroup = C\nrank = 2\nbox = 1,1\ntrials = 2\nseed = 5\n")
    code, out, _ = invoke(capsys, "invert-check", "--config", str(cfg))
    assert code == 0 and out.count("CHECK inversion C 2 1,1 pass") == 2
    code, out, _ = invoke(capsys, "invert-check", "--config", str(cfg), "--trials", "1", "--group", "A")
    assert out.count("CHECK inversion A 2 1,1 pass") == 1


def test_bad_config_line(capsys, tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("group C\n")
    assert invoke(capsys, "invert-check", "--config", str(cfg))[0] == 3


def test_output_independent_of_jobs(capsys):
    argv = ["lemma-check", "--group", "A", "--rank", "2", "--box", "1,1", "--trials", "3", "--seed", "9",
            "--witnesses", "all"]
    serial = invoke(capsys, *argv, "--jobs", "1")
    parallel = invoke(capsys, *argv, "--jobs", "3")
    assert serial == parallel and serial[0] == 0


def test_env_jobs_fallback(capsys, monkeypatch):
    monkeypatch.setenv("BAILEY_LAB_JOBS", "nope")
    assert invoke(capsys, "invert-check")[0] == 3
    monkeypatch.setenv("BAILEY_LAB_JOBS", "1")
    assert invoke(capsys, "invert-check")[0] == 0


def test_module_entry_point_byte_identical():
    cmd = [sys.executable, "-m", "bailey_lab", "pair-check", "--group", "A", "--rank", "2",
           "--box", "1,1", "--trials", "2", "--seed", "3", "--witnesses", "all"]
    first = subprocess.run(cmd, capture_output=True, check=True).stdout
    second = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert first == second and first.startswith(b"CHECK roundtrip A 2 1,1 pass")

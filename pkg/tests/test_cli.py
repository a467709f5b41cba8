import json
from importlib import resources

import pytest

from hyperhom.cli import main

CORPUS = resources.files("hyperhom") / "corpus"


def cfg(name):
    return str(CORPUS / f"{name}.cfg")


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_theta_command(capsys, tmp_path):
    path = tmp_path / "r.json"
    code, out, _ = run(capsys, "theta", "--config", cfg("ex3_5"), "--module", "M", "--module", "Mstar",
                       "--json", str(path))
    assert code == 0
    report = json.loads(path.read_text())
    assert report["results"][0]["theta"]["value"] == -1
    assert set(report) >= {"tool", "version", "command", "config_digest", "seed", "results", "verdict"}
    assert "--json" not in report["command"]


def test_tor_lengths_with_infinite(capsys, tmp_path):
    path = tmp_path / "r.json"
    code, _, _ = run(capsys, "tor", "--config", cfg("ex3_5"), "--module", "M", "--module", "Mstar",
                     "--range", "0..3", "--json", str(path), "--quiet")
    assert code == 0
    text = path.read_text()
    assert '"inf"' in text


def test_negative_range(capsys):
    code, out, _ = run(capsys, "stable", "--config", cfg("a1_quadric"), "--module", "M", "--module", "M",
                       "--range=-2..2")
    assert code == 0
    assert out


def test_dim_inequality_violated(capsys):
    code, out, _ = run(capsys, "check", "dim-inequality", "--config", cfg("transversal_planes"),
                       "--module", "M", "--module", "N")
    assert code == 1
    assert "violated" in out


@pytest.mark.parametrize("argv", [
    ["theta", "--config", "nope.cfg", "--module", "M", "--module", "M"],
    ["bogus"],
    ["theta", "--module", "M"],
])
def test_usage_errors(capsys, argv):
    assert main(argv) == 2


def test_unknown_module(capsys):
    code, _, err = run(capsys, "depth", "--config", cfg("ex3_5"), "--module", "Q")
    assert code == 2 and "unknown module" in err


def test_precondition_errors(capsys):
    code, _, err = run(capsys, "pushforward", "--config", cfg("ex3_5"), "--module", "k")
    assert code == 2 and "precondition" in err
    code, _, err = run(capsys, "check", "buchweitz", "--config", cfg("a1_quadric"), "--module", "M",
                       "--module", "M", "--pair", "1,1")
    assert code == 2


@pytest.mark.parametrize("command", ["resolve", "betti", "dual", "depth", "dim", "mf"])
def test_single_module_commands(capsys, command):
    code, out, _ = run(capsys, command, "--config", cfg("ex3_5"), "--module", "M")
    assert code == 0 and out


def test_verify_examples_deterministic(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["verify", "examples", "--seed", "3", "--json", str(a), "--quiet"]) == 0
    assert main(["verify", "examples", "--seed", "3", "--json", str(b), "--quiet"]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_timings_only_on_request(capsys, tmp_path):
    a = tmp_path / "a.json"
    main(["depth", "--config", cfg("ex3_5"), "--module", "M", "--json", str(a), "--quiet", "--timings"])
    assert "timings" in json.loads(a.read_text())
    main(["depth", "--config", cfg("ex3_5"), "--module", "M", "--json", str(a), "--quiet"])
    assert "timings" not in json.loads(a.read_text())

"""The command-line interface: verdicts, config errors, determinism, caching and golden reports."""

import json
import os
import subprocess
import sys

import pytest

from conftest import GOLDEN
from klrkit.cli import DEFAULTS, main, run, validate_config
from klrkit.errors import ConfigError
from klrkit.io import ResultCache, content_hash, dumps, load_config


def invoke(capsys, *argv):
    status = main(list(argv))
    out, err = capsys.readouterr()
    return status, out, err


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


@pytest.mark.parametrize("command", sorted(DEFAULTS))
def test_default_config_passes(command):
    if command == "quiver-from-denominators":
        cfg = validate_config(command, {"window": {"N": 2, "lo": 0, "hi": 2}})
    else:
        cfg = validate_config(command, {})
    report, status = run(command, cfg)
    assert status == 0
    assert report["verdict"] == "pass"
    assert report["command"] == command


def test_cyclotomic_report(capsys):
    status, out, _ = invoke(capsys, "cyclotomic")
    report = json.loads(out)
    assert status == 0
    assert report["results"]["graded_dimension_text"] == "q^2 + 1"
    assert report["results"]["categorification"]["passed"]


def test_cyclotomic_projectives(tmp_path, capsys):
    cfg = write(tmp_path, "c.yaml", "lambda: [2]\nbeta: [2]\nprojectives: true\n")
    status, out, _ = invoke(capsys, "cyclotomic", "--config", cfg)
    report = json.loads(out)
    assert status == 0
    assert report["results"]["projectives"]["matches_gram_rank"] is True


def test_rmatrix_report(capsys):
    status, out, _ = invoke(capsys, "rmatrix")
    report = json.loads(out)
    assert status == 0
    assert report["results"]["denominator"]["text"] == "z - q^2"
    assert report["results"]["yang_baxter"]["passed"]
    assert report["results"]["solver"]["unique"] is True


def test_fusion_zero(tmp_path, capsys):
    cfg = write(tmp_path, "f.yaml", "N: 2\na: 0\nb: 2\n")
    status, out, _ = invoke(capsys, "fusion", "--config", cfg)
    report = json.loads(out)
    assert status == 0
    assert report["results"]["zero"] and report["results"]["dimension"] == 0


def test_explicit_quiver_datum(tmp_path, capsys):
    text = json.dumps({
        "J": [0, 1, 2],
        "X": [[0, [1, 0]], [1, [1, 2]], [2, [1, 4]]],
        "s": [[0, "V"], [1, "V"], [2, "V"]],
        "denominators": [["V", "V", "z - q^2"]],
        "beta": [1, 1, 0],
    })
    cfg = write(tmp_path, "q.json", text)
    status, out, _ = invoke(capsys, "quiver-from-denominators", "--config", cfg)
    report = json.loads(out)["results"]
    assert status == 0
    assert report["quiver"]["arrows"] == [[0, 1, 1], [1, 2, 1]]
    assert report["cartan"] == [[2, -1, 0], [-1, 2, -1], [0, -1, 2]]
    polys = {(r["i"], r["j"]): r["Q"] for r in report["q_polynomials"]}
    assert polys[(0, 1)] == "u - v" and polys[(1, 2)] == "u - v"
    assert report["klr_support"] == [0, 1]


def test_verify_g0_reversed(tmp_path, capsys):
    cfg = write(tmp_path, "g.yaml", "quiver: {type: A2, arrows: [[2, 1]]}\n")
    status, out, _ = invoke(capsys, "verify-g0", "--config", cfg)
    assert status == 0
    assert json.loads(out)["results"]["passed"]


def test_klr_dim_cutoff_flag(capsys):
    status, out, _ = invoke(capsys, "klr-dim", "--cutoff", "4")
    report = json.loads(out)
    assert status == 0
    assert report["config"]["cutoff"] == 4
    assert all(b["agree"] for b in report["results"]["blocks"])


def test_denominator_without_zero_gives_no_arrows(tmp_path, capsys):
    cfg = write(tmp_path, "d.yaml", "J: [0, 1]\nX: [[0, [1, 0]], [1, [1, 2]]]\ns: [[0, V], [1, V]]\n"
                "denominators: [[V, V, 'z - q^4']]\n")
    status, out, _ = invoke(capsys, "quiver-from-denominators", "--config", cfg)
    assert status == 0
    assert json.loads(out)["results"]["quiver"]["arrows"] == []


def test_module_error_is_a_failed_report(tmp_path, capsys):
    # C_Q data are only built in type A; the DynkinError becomes a failed report
    cfg = write(tmp_path, "bad2.yaml", "quiver: {type: D4, arrows: [[1, 2], [2, 3], [2, 4]]}\n")
    status, out, _ = invoke(capsys, "verify-g0", "--config", cfg)
    report = json.loads(out)
    assert status == 1
    assert report["verdict"] == "fail"
    assert report["error"]["code"]


@pytest.mark.parametrize("text,args", [
    ("bogus: 1\n", []),
    ("beta: [-1]\n", []),
    ("beta: two\n", []),
    ("- 1\n- 2\n", []),
    ("beta: [1\n", []),
    ("", ["--cutoff", "0"]),
])
def test_config_errors_exit_2(tmp_path, capsys, text, args):
    cfg = write(tmp_path, "cfg.yaml", text)
    cache = tmp_path / "cache"
    status, out, err = invoke(capsys, "klr-dim", "--config", cfg, "--cache", str(cache), *args)
    assert status == 2
    assert out == ""
    assert "error" in json.loads(err)
    assert not cache.exists()


def test_cutoff_rejected_for_commands_without_one():
    with pytest.raises(ConfigError):
        validate_config("rmatrix", {}, cutoff=5)
    with pytest.raises(ConfigError):
        validate_config("quiver-from-denominators", {})
    with pytest.raises(ConfigError):
        validate_config("nope", {})


def test_missing_config_file(tmp_path, capsys):
    status, _, err = invoke(capsys, "fusion", "--config", str(tmp_path / "absent.yaml"))
    assert status == 2
    assert json.loads(err)["error"]["code"]


def test_determinism_and_out_file(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["rmatrix", "--out", str(a)]) == 0
    assert main(["rmatrix", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert not [p for p in os.listdir(tmp_path) if p.startswith(".tmp-")]


def test_cache_equivalence(tmp_path, capsys):
    cache = tmp_path / "cache"
    cold, warm, nocache = tmp_path / "cold.json", tmp_path / "warm.json", tmp_path / "none.json"
    assert main(["fusion", "--cache", str(cache), "--out", str(cold)]) == 0
    assert len(os.listdir(cache)) == 1
    assert main(["fusion", "--cache", str(cache), "--out", str(warm)]) == 0
    assert main(["fusion", "--cache", str(cache), "--no-cache", "--out", str(nocache)]) == 0
    assert cold.read_bytes() == warm.read_bytes() == nocache.read_bytes()


def test_cache_key_covers_cutoff(tmp_path):
    a = validate_config("klr-dim", {}, cutoff=6)
    b = validate_config("klr-dim", {}, cutoff=8)
    assert content_hash("klr-dim", a, "1") != content_hash("klr-dim", b, "1")
    assert content_hash("klr-dim", a, "1") != content_hash("klr-dim", a, "2")
    cache = ResultCache(str(tmp_path))
    cache.put("k", {"x": [1, 2]})
    assert cache.get("k") == {"x": [1, 2]}
    assert cache.get("missing") is None


def test_cached_hit_is_used(tmp_path):
    cfg = validate_config("fusion", {})
    report, _ = run("fusion", cfg, str(tmp_path))
    key = content_hash("fusion", cfg, report["version"])
    planted = dict(report, verdict="fail")
    ResultCache(str(tmp_path)).put(key, planted)
    again, status = run("fusion", cfg, str(tmp_path))
    assert again["verdict"] == "fail" and status == 1


def test_dumps_is_stable():
    assert dumps({"b": 1, "a": (1, 2)}) == '{\n  "a": [\n    1,\n    2\n  ],\n  "b": 1\n}\n'


def test_load_config_json_and_yaml(tmp_path):
    assert load_config(write(tmp_path, "a.json", '{"N": 3}')) == {"N": 3}
    assert load_config(write(tmp_path, "a.yaml", "N: 3\n")) == {"N": 3}
    assert load_config(write(tmp_path, "e.yaml", "")) == {}


@pytest.mark.parametrize("name,argv", [
    ("phi-map-default.json", ["phi-map"]),
    ("rmatrix-default.json", ["rmatrix"]),
    ("fusion-default.json", ["fusion"]),
    ("quiver-window.json", ["quiver-from-denominators", "--config", "WINDOW"]),
])
def test_golden_reports(tmp_path, name, argv):
    if "WINDOW" in argv:
        argv[argv.index("WINDOW")] = write(tmp_path, "w.yaml", "window: {N: 2, lo: 0, hi: 3}\n")
    out = tmp_path / "out.json"
    assert main(argv + ["--out", str(out)]) == 0
    with open(os.path.join(GOLDEN, name), "rb") as fh:
        assert out.read_bytes() == fh.read()


def test_golden_phi_rows_are_the_hand_values():
    with open(os.path.join(GOLDEN, "phi-map-default.json")) as fh:
        rows = json.load(fh)["results"]["rows"]
    hand = [[1, 1, [1, 0], 0], [2, 0, [1, 1], 0], [1, -1, [0, 1], 0], [2, -2, [1, 0], -1]]
    # default height anchors xi(1) = 0, so shift the hand values by -1
    shifted = [[i, p - 1, root, j] for i, p, root, j in hand]
    assert all(row in rows for row in shifted)


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "klrkit", "fusion"], capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["verdict"] == "pass"
    bad = write(tmp_path, "bad.yaml", "N: x\n")
    proc = subprocess.run([sys.executable, "-m", "klrkit", "fusion", "--config", bad], capture_output=True, text=True, check=False)
    assert proc.returncode == 2

import json
import os
import subprocess
from pathlib import Path

import pytest

CLI = os.environ.get("IONROUTE_CLI", "ionroute")


def run(*args, cwd=None):
    return subprocess.run([CLI, *map(str, args)], capture_output=True, text=True, cwd=cwd)


@pytest.fixture
def qft8(tmp_path):
    path = tmp_path / "qft8.qasm"
    res = run("gen", "qft", "--n", 8, "--out", path)
    assert res.returncode == 0, res.stderr
    return path


def test_compile_then_validate(tmp_path, qft8):
    out = tmp_path / "out"
    res = run("compile", "--arch", "H", "--capacity", 3, "--circuit", qft8, "--seed", 2, "--out", out)
    assert res.returncode == 0, res.stderr
    for name in ("trace.json", "stats.json", "report.json"):
        assert (out / name).is_file()
    report = json.loads((out / "report.json").read_text())
    assert report["outcome"] == "ok"
    assert report["input_digest"].startswith("fnv1a:")
    stats = json.loads((out / "stats.json").read_text())
    assert 0 < stats["sp"] < 1
    res = run("validate", "--trace", out / "trace.json", "--arch", "H", "--capacity", 3, "--circuit", qft8)
    assert res.returncode == 0, res.stdout + res.stderr
    assert res.stdout.startswith("ok")


def test_tampered_trace_names_segment_constraint(tmp_path, qft8):
    out = tmp_path / "out"
    assert run("compile", "--circuit", qft8, "--capacity", 3, "--out", out).returncode == 0
    trace = json.loads((out / "trace.json").read_text())
    events = trace["events"]
    # Pull a shuttle out of a segment back onto the shuttle that entered it.
    for i, a in enumerate(events):
        if a["kind"] in ("split", "move") and a["to"].startswith("seg"):
            j = next(j for j in range(i + 1, len(events)) if events[j].get("from") == a["to"])
            d = events[j]["t_end"] - events[j]["t_start"]
            events[j]["t_start"] = a["t_start"]
            events[j]["t_end"] = a["t_start"] + d
            break
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(trace))
    res = run("validate", "--trace", bad, "--capacity", 3, "--circuit", qft8)
    assert res.returncode == 1
    assert "constraint 1" in res.stdout


def test_empty_trace_for_empty_circuit(tmp_path):
    circ = tmp_path / "empty.qasm"
    circ.write_text('OPENQASM 2.0;\ninclude "qelib1.inc";\nqreg q[2];\n')
    trace = tmp_path / "empty.json"
    trace.write_text("")
    res = run("validate", "--trace", trace, "--circuit", circ)
    assert res.returncode == 0, res.stdout + res.stderr


def test_capacity_exceeded_exit_code(tmp_path):
    circ = tmp_path / "big.qasm"
    assert run("gen", "qft", "--n", 20, "--out", circ).returncode == 0
    res = run("compile", "--arch", "H", "--capacity", 3, "--circuit", circ, "--out", tmp_path / "o")
    assert res.returncode == 5


def test_parse_error_exit_code(tmp_path):
    circ = tmp_path / "bad.qasm"
    circ.write_text("OPENQASM 2.0;\nqreg q[2];\nbogus q[0];\n")
    res = run("compile", "--circuit", circ, "--out", tmp_path / "o")
    assert res.returncode == 3
    assert "3" in res.stderr


def test_usage_error_exit_code():
    assert run("compile", "--algo", "nope").returncode == 2


def test_gen_is_deterministic(tmp_path):
    a, b = tmp_path / "a.qasm", tmp_path / "b.qasm"
    assert run("gen", "qaoa_er", "--n", 12, "--seed", 5, "--out", a).returncode == 0
    assert run("gen", "qaoa_er", "--n", 12, "--seed", 5, "--out", b).returncode == 0
    assert a.read_bytes() == b.read_bytes()


def test_arch_summary_g2x3(tmp_path):
    out = tmp_path / "g.json"
    res = run("arch", "G2x3", "--capacity", 4, "--out", out)
    assert res.returncode == 0
    assert "32 nodes" in res.stderr
    assert json.loads(out.read_text())["schema"] == "ionroute.arch/1"


def test_shaw_and_trace_determinism(tmp_path, qft8):
    traces = []
    for i in range(2):
        out = tmp_path / f"o{i}"
        res = run("compile", "--circuit", qft8, "--algo", "shaw", "--seed", 3, "--out", out)
        assert res.returncode == 0, res.stderr
        traces.append((out / "trace.json").read_bytes())
    assert traces[0] == traces[1]

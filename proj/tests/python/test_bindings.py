import json

import pytest

import ionroute


def test_graph_info_h_preset():
    info = ionroute.graph_info("H", 3)
    assert len(info["nodes"]) == 17
    assert len(info["edges"]) == 18
    assert info["trap_slots"] == 12


def test_preset_is_json_dict():
    spec = ionroute.preset("G2x3", 4)
    assert spec["schema"] == "ionroute.arch/1"
    assert len(spec["traps"]) == 6


def test_generate_is_deterministic():
    assert ionroute.generate("qaoa_er", 10, 4) == ionroute.generate("qaoa_er", 10, 4)
    assert "OPENQASM 2.0" in ionroute.generate("qft", 4)


def test_compile_and_validate_round_trip():
    qasm = ionroute.generate("qft", 8)
    out = ionroute.compile(qasm, arch="H", capacity=3, seed=1)
    assert 0.0 < out["stats"]["sp"] < 1.0
    assert json.loads(out["trace"])["schema"] == "ionroute.trace/1"
    assert ionroute.validate(out["trace"], qasm, arch="H", capacity=3) == []


def test_shaw_mode():
    qasm = ionroute.generate("qv_like", 8, 2)
    out = ionroute.compile(qasm, arch="G2x3", capacity=2, algo="shaw")
    assert ionroute.validate(out["trace"], qasm, arch="G2x3", capacity=2) == []


def test_tampered_trace_reports_violation():
    qasm = ionroute.generate("qft", 6)
    out = ionroute.compile(qasm, arch="H", capacity=2)
    trace = json.loads(out["trace"])
    trace["events"][0]["t_end"] += 5
    violations = ionroute.validate(json.dumps(trace), qasm, arch="H", capacity=2)
    assert violations and violations[0]["event"] == 0


def test_errors_map_to_python_exceptions():
    with pytest.raises(ionroute.ParseError):
        ionroute.normalize_qasm("OPENQASM 2.0;\nqreg q[2];\nfoo q[0];\n")
    with pytest.raises(ionroute.CapacityError):
        ionroute.compile(ionroute.generate("qft", 20), arch="MINI", capacity=2)
    with pytest.raises(ionroute.ArchitectureError):
        ionroute.graph_info("nonexistent", 3)
    with pytest.raises(ValueError):
        ionroute.compile(ionroute.generate("qft", 4), algo="fast")
    assert issubclass(ionroute.CapacityError, ionroute.IonrouteError)

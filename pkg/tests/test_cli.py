from __future__ import annotations

import json
import subprocess
import sys

import pytest

from toricdegen import builtins
from toricdegen.cli import cmd_degenerate, cmd_fan_check, main, render


def run(argv, tmp_path):
    out = tmp_path / "report.json"
    code = main(list(argv) + ["--json", str(out), "--quiet"])
    return code, json.loads(out.read_text()) if out.exists() else None


def write(tmp_path, name, data):
    p = tmp_path / name
    p.write_text(data if isinstance(data, str) else json.dumps(data, indent=1))
    return str(p)


def status(report, check):
    return next(v["status"] for v in report["verdicts"] if v["check"] == check)


def test_fan_check_p2_file(tmp_path):
    path = write(tmp_path, "p2.json", builtins.fan("P2").to_json())
    code, rep = run(["fan-check", "--fan", path], tmp_path)
    assert code == 0
    assert rep["results"]["nabla_lattice_points"] == 10
    assert all(status(rep, c) == "pass" for c in ("smooth", "complete", "reflexive"))
    assert rep["inputs"][0]["hash"].startswith("sha256:")


def test_fan_check_example2_and_singular(tmp_path):
    code, rep = run(["fan-check", "--builtin", "example2"], tmp_path)
    assert code == 0 and rep["results"]["nabla_lattice_points"] == 4
    code, rep = run(["fan-check", "--builtin", "P112"], tmp_path)
    assert code == 1 and status(rep, "smooth") == "fail"


def test_degenerate_quintic(tmp_path):
    code, rep = run(["degenerate", "--builtin", "quintic"], tmp_path)
    r = rep["results"]
    assert code == 0
    assert r["component_count"] == 5 and r["betti"] == [1, 0, 0, 1]
    assert r["max_jordan_block_count"] == 1 and r["max_jordan_block_size"] == 4
    assert any("differs from the closed-form count" in w for w in rep["warnings"])
    assert r["clemens_complex"]["model"] == "nerve model"


def test_degenerate_files(tmp_path):
    fan = write(tmp_path, "p5.json", builtins.fan("P5").to_json())
    part = write(tmp_path, "part.json", {"blocks": [[0, 1, 2], [3, 4, 5]]})
    code, rep = run(["degenerate", "--fan", fan, "--partition", part], tmp_path)
    assert code == 0
    assert rep["results"]["component_count"] == 9
    assert rep["results"]["max_jordan_block_count"] == 1
    assert len(rep["inputs"]) == 2


def test_degenerate_empty(tmp_path, capsys):
    code, rep = run(["degenerate", "--builtin", "empty"], tmp_path)
    assert code != 0
    assert any("X0 empty" in w for w in rep["warnings"])
    rep_direct = cmd_degenerate(builtins.family("empty"))
    assert rep_direct.exit_code == 1


def test_monodromy(tmp_path):
    for name in ("quintic", "cubic-curve", "two-cubics"):
        code, rep = run(["monodromy", "--builtin", name], tmp_path)
        assert code == 0, name
        assert rep["results"]["verdict"] == "criterion satisfied (combinatorial+symbolic parts)"
    code, rep = run(["monodromy", "--builtin", "empty"], tmp_path)
    assert code == 1
    assert status(rep, "condition 4") == "fail"


def test_monodromy_generic_sections_from_fan_file(tmp_path):
    fan = write(tmp_path, "p2.json", builtins.fan("P2").to_json())
    code, rep = run(["monodromy", "--fan", fan], tmp_path)
    assert code == 0


def test_period(tmp_path):
    code, rep = run(["period", "--builtin", "quintic", "--order", "10"], tmp_path)
    assert code == 0
    assert rep["results"]["period"]["coeffs"] == ["1", "0", "0", "0", "0", "120", "0", "0", "0", "0", "113400"]
    code, rep = run(["period", "--builtin", "cubic-curve", "--order", "6"], tmp_path)
    assert rep["results"]["period"]["coeffs"] == ["1", "0", "0", "6", "0", "0", "90"]


def test_period_zero_section(tmp_path):
    fan = write(tmp_path, "p2.json", builtins.fan("P2").to_json())
    sec = write(tmp_path, "zero.json", {"coeffs": []})
    code, rep = run(["period", "--fan", fan, "--sections", sec, "--order", "3"], tmp_path)
    assert code == 0
    assert rep["results"]["period"]["coeffs"] == ["1", "0", "0", "0"]


def test_period_needs_hypersurface(tmp_path, capsys):
    assert main(["period", "--builtin", "two-cubics", "--quiet"]) == 2
    assert "single-block" in capsys.readouterr().err


def test_input_errors(tmp_path, capsys):
    bad = write(tmp_path, "bad.json", '{"rank": 2,\n "rays": [[1, 0],, ]}')
    assert main(["fan-check", "--fan", bad]) == 2
    err = capsys.readouterr().err
    assert "bad.json:2:" in err
    assert main(["fan-check", "--fan", str(tmp_path / "missing.json")]) == 2
    assert main(["fan-check", "--builtin", "nope"]) == 2
    assert main(["fan-check"]) == 2
    fan = write(tmp_path, "p2.json", builtins.fan("P2").to_json())
    part = write(tmp_path, "part.json", {"blocks": [[0, 1]]})
    assert main(["degenerate", "--fan", fan, "--partition", part]) == 2
    sec = write(tmp_path, "sec.json", {"coeffs": [{"nu": [9, 9], "c": "1"}]})
    assert main(["period", "--fan", fan, "--sections", sec]) == 2


def test_deterministic_reports(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for out in (a, b):
        main(["degenerate", "--builtin", "two-cubics", "--json", str(out), "--quiet"])
    assert a.read_bytes() == b.read_bytes()


def test_human_output_is_rendering(capsys):
    rep = cmd_fan_check(builtins.fan("P2"))
    text = render(rep.to_json())
    assert "[PASS   ] smooth" in text and "nabla_lattice_points" in text
    main(["fan-check", "--builtin", "P2"])
    assert capsys.readouterr().out.strip() == render(
        {**rep.to_json(), "inputs": [{"builtin": "P2", "hash": cmd_hash("P2")}]}).strip()


def cmd_hash(name):
    from toricdegen.io import canonical_json, content_hash
    return content_hash(canonical_json(builtins.fan(name).to_json()))


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "toricdegen", "fan-check", "--builtin", "P3", "--quiet"])
    assert proc.returncode == 0

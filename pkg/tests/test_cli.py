"""Exit codes, output formats, and file handling of the command line."""

import json

import pytest

from rotsys import fixtures
from rotsys.cli import main
from rotsys.core import parse_rot, serialize_rot
from rotsys.recipes import construct


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def fixture_path(name):
    import rotsys.fixtures as fx
    from importlib import resources
    return str(resources.files(fx.__name__) / "data" / name)


def test_verify_fixture(capsys):
    code, out, _ = run(capsys, "verify", fixture_path("k10_p3.rot"))
    assert code == 0
    assert "genus: 3" in out
    assert "rule_r_star: True" in out


def test_verify_json(capsys):
    code, out, _ = run(capsys, "--format", "json", "verify",
                       fixture_path("k23_p.rot"))
    assert code == 0
    data = json.loads(out)
    assert data["genus"] == 32 and data["orientable"] is True
    assert data["distribution"] == {"3": 172} or data["distribution"] == {3: 172}


def test_verify_malformed_input(tmp_path, capsys):
    bad = tmp_path / "bad.rot"
    bad.write_text("orientable: true\n0. 1 1\n1. 0 0\n")
    code, _, err = run(capsys, "verify", str(bad))
    assert code == 2
    assert "error" in err


def test_verify_missing_file(capsys):
    code, _, _ = run(capsys, "verify", "/nonexistent/file.rot")
    assert code == 3


def test_derive_current_graph(capsys):
    code, out, _ = run(capsys, "derive", fixture_path("case2_z18.cur"))
    assert code == 0
    rs = parse_rot(out)
    assert len(rs.rotation) == 27


def test_derive_seed(capsys):
    code, out, _ = run(capsys, "derive", fixture_path("k30_z27.seed"))
    assert code == 0
    assert len(parse_rot(out).rotation) == 30


def test_construct_refusal_exit_code(capsys):
    code, _, err = run(capsys, "construct", "--n", "8", "--type", "5")
    assert code == 4
    assert "refused" in err


def test_construct_missing_fixture_exit_code(capsys):
    code, _, _ = run(capsys, "construct", "--n", "44", "--type", "5")
    assert code == 3


def test_construct_emits_verifiable_certificate(tmp_path, capsys):
    code, out, _ = run(capsys, "--format", "json", "construct",
                       "--n", "10", "--type", "5,4")
    assert code == 0
    data = json.loads(out)
    assert data["n"] == 10 and data["type"] == [5, 4]
    cert_file = tmp_path / "cert.json"
    cert_file.write_text(out)
    code2, out2, _ = run(capsys, "verify", str(cert_file))
    assert code2 == 0
    assert "valid: True" in out2
    assert data["sha256"] in out2


def test_verify_detects_forged_certificate(tmp_path, capsys):
    cert = construct(6, (6,))
    blob = json.loads(cert.to_json())
    blob["genus"] = 99
    forged = tmp_path / "forged.json"
    forged.write_text(json.dumps(blob))
    code, out, _ = run(capsys, "verify", str(forged))
    assert code == 1


def test_surgery_replay(tmp_path, capsys):
    rot = tmp_path / "in.rot"
    rot.write_text(fixtures.load_text("k10_p3.rot"))
    rs = parse_rot(fixtures.load_text("k10_p3.rot"))
    from rotsys.surgery import Recorder
    rec = Recorder(rs)
    f = next(f for f in rec.faces() if len(f) == 3)
    rec.crosscap(f.boundary[0], f.boundary[1])
    script = tmp_path / "ops.txt"
    script.write_text(str(rec.script))
    code, out, _ = run(capsys, "surgery", str(rot), "--script", str(script))
    assert code == 0
    assert parse_rot(out) == rec.rs


def test_classify_k5_output(capsys):
    code, out, _ = run(capsys, "--format", "json", "classify-k5")
    assert code == 0
    data = json.loads(out)
    assert data["systems_examined"] == 7776
    assert [6, 5] in data["absent_types"]
    assert [8] in data["realized_types"]


def test_search_small(capsys):
    code, out, _ = run(capsys, "search", "--graph", "K7")
    assert code == 0
    assert len(parse_rot(out).rotation) == 7


def test_search_exhausted(capsys):
    code, out, _ = run(capsys, "--format", "json", "search", "--graph", "K5")
    assert code == 1
    assert json.loads(out)["status"] == "exhausted"


def test_maxgenus(capsys):
    code, out, _ = run(capsys, "maxgenus", "--n", "6")
    assert code == 0
    assert "faces: 1" in out and "S_5" in out


def test_round_trip_through_cli(tmp_path, capsys):
    code, out, _ = run(capsys, "derive", fixture_path("k20_z18.seed"))
    rs = parse_rot(out)
    assert parse_rot(serialize_rot(rs)) == rs


def test_manifest_checksums():
    assert all(fixtures.verify_manifest().values())
    with pytest.raises(Exception):
        fixtures.load_text("absent.rot")

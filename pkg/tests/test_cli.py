"""Command line contract: exit codes, JSON outputs, reproducible reports."""

import json
import subprocess
import sys

import pytest

from eimod import CatModule, concentrated_module, dualize, free_module
from eimod.cli import main


@pytest.fixture()
def fi2_file(fi2, tmp_path):
    p = tmp_path / "fi2.json"
    p.write_text(json.dumps(fi2.to_dict()))
    return str(p)


@pytest.fixture()
def z2_file(z2cat, tmp_path):
    p = tmp_path / "z2.json"
    p.write_text(json.dumps(z2cat.to_dict()))
    return str(p)


def _write_module(tmp_path, name, mod):
    p = tmp_path / name
    p.write_text(json.dumps(mod.to_dict(), default=str))
    return str(p)


def test_gen_toml(tmp_path):
    spec = tmp_path / "spec.toml"
    spec.write_text('family = "FI"\nlevel = 2\n')
    out = tmp_path / "cat.json"
    assert main(["gen", str(spec), "--out", str(out)]) == 0
    d = json.loads(out.read_text())
    assert d["objects"] == ["0", "1", "2"]
    assert len(d["morphisms"]) == 8


def test_gen_json_with_group(tmp_path):
    spec = tmp_path / "spec.json"
    spec.write_text(json.dumps({"family": "FI_G", "level": 1, "group": {"cyclic": 2}}))
    out = tmp_path / "cat.json"
    assert main(["gen", str(spec), "--out", str(out)]) == 0
    d = json.loads(out.read_text())
    assert len(d["morphisms"]) == 4


def test_gen_rejects_bad_specs(tmp_path, capsys):
    bad = tmp_path / "bad.toml"
    bad.write_text('family = "XYZ"\nlevel = 1\n')
    assert main(["gen", str(bad)]) == 2
    err = json.loads(capsys.readouterr().err.strip())
    assert "error" in err
    worse = tmp_path / "worse.json"
    worse.write_text('{"family": "FI", "level": -3}')
    assert main(["gen", str(worse)]) == 2
    syntax = tmp_path / "syntax.toml"
    syntax.write_text("family = [unclosed")
    assert main(["gen", str(syntax)]) == 2


def test_gen_cap_override(tmp_path):
    spec = tmp_path / "spec.json"
    spec.write_text(json.dumps({"family": "FI", "level": 3}))
    assert main(["gen", str(spec), "--cap", "5", "--out", str(tmp_path / "x.json")]) == 2


def test_nakayama_pinned_dims(fi2, fi2_file, tmp_path):
    mod_file = _write_module(tmp_path, "ae1.json", free_module(fi2, "left", "1"))
    out = tmp_path / "nu.json"
    assert main(["nakayama", fi2_file, mod_file, "--out", str(out)]) == 0
    d = json.loads(out.read_text())
    assert d["dims_table"] == {"0": 1, "1": 1, "2": 0}
    assert d["provenance"]["construction"] == "nakayama"


def test_nakayama_rejects_right_modules(fi2, fi2_file, tmp_path, capsys):
    mod_file = _write_module(tmp_path, "e1a.json", free_module(fi2, "right", "1"))
    assert main(["nakayama", fi2_file, mod_file]) == 2
    assert main(["nakayama", fi2_file, mod_file, "--inverse"]) == 2
    err = capsys.readouterr().err
    assert "left modules" in err


def test_nakayama_rejects_category_mismatch(fi2, z2cat, z2_file, tmp_path):
    mod_file = _write_module(tmp_path, "ae1.json", free_module(fi2, "left", "1"))
    assert main(["nakayama", z2_file, mod_file]) == 2


def test_nakayama_rejects_broken_module(fiz2_2, tmp_path):
    cat_file = tmp_path / "cat.json"
    cat_file.write_text(json.dumps(fiz2_2.to_dict()))
    # zero-filled automorphism action is not functorial
    broken = CatModule.build(fiz2_2, "left", {"1": 1})
    mod_file = _write_module(tmp_path, "broken.json", broken)
    assert main(["nakayama", str(cat_file), mod_file]) == 2


def test_resolve_certificate(fi2, fi2_file, tmp_path):
    mod_file = _write_module(tmp_path, "s1.json", concentrated_module(fi2, "left", "1"))
    out = tmp_path / "res.json"
    assert main(["resolve", fi2_file, mod_file, "--out", str(out)]) == 0
    d = json.loads(out.read_text())
    assert d["certificate"]["pass"] and d["certificate"]["length"] == 1


def test_resolve_rejects_right_module(fi2, fi2_file, tmp_path):
    mod_file = _write_module(tmp_path, "e1a.json", free_module(fi2, "right", "1"))
    assert main(["resolve", fi2_file, mod_file]) == 2


def test_hom_dim(fi2, fi2_file, tmp_path):
    a = _write_module(tmp_path, "a.json", free_module(fi2, "left", "1"))
    b = _write_module(tmp_path, "b.json", dualize(free_module(fi2, "right", "1")))
    out = tmp_path / "hom.json"
    assert main(["hom", fi2_file, a, b, "--out", str(out)]) == 0
    d = json.loads(out.read_text())
    assert d["dim"] == 1 and len(d["basis"]) == 1


def test_audit_exit_codes(fi2_file, z2_file, tmp_path):
    out = tmp_path / "audit.json"
    assert main(["audit", fi2_file, "--out", str(out)]) == 1
    d = json.loads(out.read_text())
    assert d["verdict"] is False
    assert d["objects"] == {"0": True, "1": False, "2": False}
    assert main(["audit", z2_file, "--out", str(out)]) == 0
    assert json.loads(out.read_text())["verdict"] is True


def test_check_all_reports_reproducibly(fi2_file, tmp_path, capsys):
    out1 = tmp_path / "r1.json"
    out2 = tmp_path / "r2.json"
    assert main(["check", fi2_file, "--suite", "all", "--seed", "7", "--out", str(out1)]) == 0
    assert main(["check", fi2_file, "--suite", "all", "--seed", "7", "--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()
    d = json.loads(out1.read_text())
    assert d["pass"] and d["counts"]["fail"] == 0
    assert d["counts"]["expected_fail"] == 1  # the truncation boundary audit
    # timing goes to stderr, never into the canonical report
    assert "timing" not in out1.read_text()
    assert "timing_seconds" in capsys.readouterr().err


def test_check_single_suite(fi2_file, tmp_path):
    out = tmp_path / "r.json"
    assert main(["check", fi2_file, "--suite", "yoneda", "--out", str(out)]) == 0
    d = json.loads(out.read_text())
    assert all(r["id"].startswith("yoneda:") for r in d["records"])
    assert d["records"] == sorted(d["records"], key=lambda r: r["id"])


def test_check_unknown_suite(fi2_file):
    assert main(["check", fi2_file, "--suite", "bogus"]) == 2


def test_check_mono_torsion_on_nonmono(nonmono, tmp_path):
    cat_file = tmp_path / "nm.json"
    cat_file.write_text(json.dumps(nonmono.to_dict()))
    out = tmp_path / "r.json"
    assert main(["check", str(cat_file), "--suite", "mono-torsion", "--out", str(out)]) == 0
    rec = json.loads(out.read_text())["records"][0]
    assert rec["verdict"] == "pass"
    assert rec["witness"]["all_mono"] is False
    assert rec["witness"]["all_torsion_free"] is False


def test_check_group_category_runs_exactness_records(z2_file, tmp_path):
    out = tmp_path / "r.json"
    assert main(["check", z2_file, "--suite", "self-injective-audit", "--out", str(out)]) == 0
    d = json.loads(out.read_text())
    ids = [r["id"] for r in d["records"]]
    assert "self-injective-audit:verdict" in ids
    assert sum(1 for i in ids if "exactness" in i) == 5


def test_stdout_output(fi2_file, capsys):
    assert main(["audit", fi2_file, "--out", "-"]) == 1
    d = json.loads(capsys.readouterr().out)
    assert d["verdict"] is False


def test_missing_file_is_usage_error(tmp_path):
    assert main(["gen", str(tmp_path / "absent.toml")]) == 2
    assert main(["audit", str(tmp_path / "absent.json")]) == 2


def test_console_script_installed(fi2_file):
    proc = subprocess.run(
        [sys.executable, "-m", "eimod.cli", "audit", fi2_file, "--out", "-"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 1
    assert json.loads(proc.stdout)["verdict"] is False

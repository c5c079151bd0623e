import json

import pytest

from ffgs.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_verify_pass(capsys):
    code, out = run(capsys, "verify", "--builtin", "mu:6", "--base", "Q")
    assert code == 0
    assert out.strip() == "pass"


def test_verify_json(capsys):
    code, out = run(capsys, "verify", "--builtin", "mu:6", "--base", "Q",
                    "--format", "json")
    assert code == 0
    assert json.loads(out) == {"status": "pass"}


def test_verify_fail_exit_1(tmp_path, capsys):
    code, out = run(capsys, "dual", "--builtin", "mu:2", "--base", "GF(3)",
                    "--format", "json")
    d = json.loads(out)
    d["mult"][1][1] = ["1", "0"]
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(d))
    code, out = run(capsys, "verify", "--file", str(bad))
    assert code == 1
    assert "fail" in out


def test_user_errors_exit_2(capsys):
    assert main(["order", "--builtin", "mu:3"]) == 2          # no --base
    assert main(["order", "--builtin", "mu:x", "--base", "Q"]) == 2
    assert main(["order", "--builtin", "mu:3", "--base", "nonsense"]) == 2
    assert main(["verify", "--file", "/does/not/exist.json"]) == 2
    assert main(["points", "--builtin", "mu:3", "--base", "Q"]) == 2  # no --ring
    capsys.readouterr()


def test_order(capsys):
    code, out = run(capsys, "order", "--builtin", "sdp:mu:3,Z2,inv",
                    "--base", "GF(7)", "--format", "json")
    assert code == 0
    assert json.loads(out) == {"order": 6}


def test_points_json(capsys):
    code, out = run(capsys, "points", "--builtin", "mu:4", "--base", "GF(5)",
                    "--ring", "GF(5)", "--format", "json")
    assert code == 0
    d = json.loads(out)
    assert d["order"] == 4
    assert d["group"] == "C4"


def test_dual_roundtrip(tmp_path, capsys):
    code, out = run(capsys, "dual", "--builtin", "const:Z4", "--base", "Z/9",
                    "--format", "json")
    assert code == 0
    f = tmp_path / "dual.json"
    f.write_text(out)
    code, out = run(capsys, "verify", "--file", str(f))
    assert code == 0


def test_decompose_p(capsys):
    code, out = run(capsys, "decompose-p", "--builtin", "mu:6",
                    "--base", "GF(5)", "--format", "json")
    assert code == 0
    d = json.loads(out)
    assert [f["prime"] for f in d["factors"]] == [2, 3]
    assert d["product_isomorphism"] is True


def test_fibers(capsys):
    code, out = run(capsys, "fibers", "--builtin", "mu:2", "--base", "Zloc(2)",
                    "--format", "json")
    assert code == 0
    d = json.loads(out)
    assert len(d["fibers"]) == 2


def test_loci(capsys):
    code, out = run(capsys, "loci", "--builtin", "const:S3", "--base", "GF(5)",
                    "--prime", "3", "--format", "json")
    assert code == 0
    d = json.loads(out)
    assert d["subgroup_order"] == 3


def test_connected_etale(capsys):
    code, out = run(capsys, "connected-etale", "--builtin", "mu:6",
                    "--base", "GF(3)", "--format", "json")
    assert code == 0


def test_theorem(capsys):
    code, out = run(capsys, "theorem", "--builtin", "mu:6", "--base", "Zloc(2)",
                    "--format", "json")
    assert code == 0
    d = json.loads(out)
    assert d["schema"] == 1
    assert d["kernel_order"] == 2


def test_split_with_kernel(capsys):
    code, out = run(capsys, "split", "--builtin", "const:S3", "--base", "Q",
                    "--kernel", "3", "--format", "json")
    assert code == 0
    d = json.loads(out)
    assert d["splitting"]["status"] == "found"


def test_refine(capsys):
    code, out = run(capsys, "refine", "--builtin", "const:Z6", "--base", "GF(5)",
                    "--kernels", "6,2", "--format", "json")
    assert code == 0
    d = json.loads(out)
    assert d["refined"]["kernel_order"] == 2


def test_classify_p(capsys):
    code, out = run(capsys, "classify-p", "--builtin", "alpha:2",
                    "--base", "GF(2)", "--format", "json")
    assert code == 0
    assert json.loads(out) == {"classification": "alpha"}


def test_json_determinism_in_process(capsys):
    args = ["theorem", "--builtin", "mu:6", "--base", "Zloc(2)",
            "--format", "json"]
    _, out1 = run(capsys, *args)
    _, out2 = run(capsys, *args)
    assert out1 == out2

import json
import subprocess
import sys

from sphecke.cli import dispatch


def run_cli(capsys, *argv):
    code = dispatch(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def stdout_json(capsys, *argv):
    code, out, err = run_cli(capsys, *argv)
    assert code == 0, (out, err)
    return json.loads(out), err


class TestBasicCommands:
    def test_mult(self, capsys):
        doc, _ = stdout_json(capsys, "mult", "--datum", "gl3",
                             "--weight", "1,0,-1")
        assert doc["dimension"] == 8
        assert {"mult": 2, "weight": [0, 0, 0]} in doc["mults"]

    def test_weights(self, capsys):
        doc, _ = stdout_json(capsys, "weights", "--datum", "gl2",
                             "--below", "2,0")
        assert doc["below"] == [[2, 0], [1, 1]]

    def test_rootdatum(self, capsys):
        doc, _ = stdout_json(capsys, "rootdatum", "--datum", "gsp4")
        assert doc["weyl_order"] == 8
        assert doc["characters"]["nu"] == [1, 0, 0]

    def test_tensor_modes(self, capsys):
        doc, _ = stdout_json(capsys, "tensor", "--datum", "gl2",
                             "--weight", "2,0", "--power", "2",
                             "--mode", "sym")
        weights = [t["weight"] for t in doc["terms"]]
        assert [4, 0] in weights and [3, 1] not in weights

    def test_satake_and_inverse(self, capsys):
        doc, _ = stdout_json(capsys, "satake", "--datum", "gl2",
                             "--element", "1,0")
        assert doc["terms"] == [{"weight": [1, 0], "coeff": [{"v": 1, "c": 1}]}]
        doc2, _ = stdout_json(capsys, "satake-inv", "--datum", "gl2",
                              "--char", "2,0")
        assert {t["weight"][0] for t in doc2["terms"]} == {2, 1}

    def test_hecke_mul(self, capsys):
        doc, _ = stdout_json(capsys, "hecke-mul", "--datum", "gl2",
                             "--left", "1,0", "--right", "1,0")
        by_weight = {tuple(t["weight"]): t["coeff"] for t in doc["terms"]}
        assert by_weight[(1, 1)] == [{"v": 0, "c": 1}, {"v": 2, "c": 1}]

    def test_kl_poly(self, capsys):
        doc, _ = stdout_json(capsys, "kl-poly", "--datum", "gl3",
                             "--top", "2,1,0", "--bottom", "1,1,1")
        assert doc["q_coeffs"] == [{"q": 1, "c": 1}, {"q": 2, "c": 1}]

    def test_mf_commcheck(self, capsys):
        doc, _ = stdout_json(capsys, "mf", "commcheck", "--p", "5",
                             "--ell", "2", "--k", "12", "--N", "50")
        assert doc["ok"] is True

    def test_adm_check(self, capsys):
        doc, _ = stdout_json(capsys, "adm", "check", "--case", "C",
                             "--places", "2", "--weight", "2,2")
        assert doc["admissible"] is True and doc["depth"] == 2


class TestParamPipeline:
    def test_eval_twist_recover_check(self, capsys, tmp_path):
        doc1, _ = stdout_json(capsys, "param", "eval", "--datum", "gl2",
                              "--p", "7", "--q", "2", "--sqrt-q", "3",
                              "--coords", "3,5")
        left = tmp_path / "left.json"
        left.write_text(json.dumps(doc1))
        doc2, _ = stdout_json(capsys, "param", "eval", "--datum", "gl2",
                              "--p", "7", "--q", "2", "--sqrt-q", "3",
                              "--coords", "6,3")
        right = tmp_path / "right.json"
        right.write_text(json.dumps(doc2))
        twisted, _ = stdout_json(capsys, "param", "twist", "--datum", "gl2",
                                 "--p", "7", "--coords", "3,5",
                                 "--character", "det", "--q", "2")
        assert twisted["coords"] == [[6], [3]]
        recovered, _ = stdout_json(capsys, "param", "recover",
                                   "--eigensystem", f"@{left}")
        assert recovered["orbit"] == [[[3], [5]], [[5], [3]]]
        report, _ = stdout_json(capsys, "param", "check-twist",
                                "--left", f"@{left}", "--right", f"@{right}",
                                "--character", "det")
        assert report["eigenvalue_relation"]["ok"] is True
        assert report["parameter_twist"]["ok"] is True
        assert report["consistent"] is True


class TestContracts:
    def test_exit_code_domain_error(self, capsys):
        code, out, err = run_cli(capsys, "mf", "hecke", "--p", "5",
                                 "--ell", "5", "--N", "20")
        assert code == 2
        doc = json.loads(out)
        assert doc["precondition"] == "good_prime"

    def test_exit_code_resource_error(self, capsys):
        code, out, _ = run_cli(capsys, "adm", "constituents", "--case", "C",
                               "--places", "3", "--abs-bound", "40")
        assert code == 3

    def test_exit_code_usage(self, capsys):
        code, _, err = run_cli(capsys, "bogus")
        assert code == 64

    def test_missing_option_usage(self, capsys):
        code, _, err = run_cli(capsys, "mult", "--datum", "gl2")
        assert code == 64
        assert "--weight" in err

    def test_manifest_on_stderr(self, capsys):
        _, _, err = run_cli(capsys, "weights", "--datum", "gl2",
                            "--below", "1,0")
        manifest = json.loads(err.strip().splitlines()[-1])["manifest"]
        assert manifest["command"] == "weights"
        assert manifest["version"]
        assert manifest["seed"] == 20240613
        assert manifest["config"]["below"] == "1,0"
        assert "wall_time_s" in manifest

    def test_manifest_emitted_on_error(self, capsys):
        _, _, err = run_cli(capsys, "mf", "hecke", "--p", "5", "--ell", "5",
                            "--N", "20")
        assert "manifest" in err

    def test_determinism(self, capsys):
        argv = ("mult", "--datum", "gsp4", "--weight", "2,1,1")
        _, out1, _ = run_cli(capsys, *argv)
        _, out2, _ = run_cli(capsys, *argv)
        assert out1 == out2

    def test_text_format(self, capsys):
        code, out, _ = run_cli(capsys, "weights", "--datum", "gl2",
                               "--below", "2,0", "--format", "text")
        assert code == 0
        assert "count: 2" in out

    def test_config_file_merge(self, capsys, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"below": "2,0"}))
        doc, _ = stdout_json(capsys, "weights", "--datum", "gl2",
                             "--config", str(cfg))
        assert doc["count"] == 2

    def test_env_override(self, capsys, monkeypatch):
        monkeypatch.setenv("SPHECKE_BELOW", "1,1")
        doc, _ = stdout_json(capsys, "weights", "--datum", "gl2")
        assert doc["below"] == [[1, 1]]

    def test_cli_flag_beats_env(self, capsys, monkeypatch):
        monkeypatch.setenv("SPHECKE_BELOW", "1,1")
        doc, _ = stdout_json(capsys, "weights", "--datum", "gl2",
                             "--below", "2,0")
        assert doc["count"] == 2


class TestSubprocess:
    def test_module_entry_point(self):
        proc = subprocess.run(
            [sys.executable, "-m", "sphecke", "mult", "--datum", "gl2",
             "--weight", "3,0"],
            capture_output=True, text=True, timeout=120)
        assert proc.returncode == 0
        doc = json.loads(proc.stdout)
        assert doc["dimension"] == 4
        assert "manifest" in proc.stderr


class TestSelftest:
    def test_reports_all_criteria_passing(self, capsys):
        doc, err = stdout_json(capsys, "selftest")
        assert doc["passed"] == 10 and doc["failed"] == 0
        assert len(doc["criteria"]) == 10
        assert err.count("[PASS]") == 10

import json
import subprocess
import sys
from pathlib import Path


from cubespan.cli import main
from cubespan.lattice import MAX_POINTS_ENV

DATA = Path(__file__).parent / "data"


def run(capsys, *args):
    code = main([str(a) for a in args])
    out, err = capsys.readouterr()
    return code, out, err


def data(name):
    return DATA / name


class TestAnalyze:
    def test_golden_rank6(self, capsys):
        code, out, _ = run(capsys, "analyze", data("rank6.json"), "--json")
        assert code == 0
        assert out == data("rank6_analyze.golden.json").read_text()

    def test_rank6_fields(self, capsys):
        _, out, _ = run(capsys, "analyze", data("rank6.json"), "--json")
        report = json.loads(out)
        assert report["invariant_factors"] == [10, 10]
        assert report["point_count"] == 100
        assert (report["iota"], report["kappa"]) == (4, 2)
        assert report["dim_formula"] == report["dim_bruteforce"] == 6
        assert report["agreement"] is True and report["subspace_equal"] is True
        assert all(isinstance(x, str) for u in report["vanishing_basis"] for x in u)

    def test_integer_lattice(self, capsys):
        _, out, _ = run(capsys, "analyze", data("integer.json"), "--json")
        report = json.loads(out)
        assert report["dim_formula"] == 0
        assert len(report["vanishing_basis"]) == 3

    def test_white(self, capsys):
        code, out, _ = run(capsys, "analyze", data("white_5_2.json"), "--json")
        report = json.loads(out)
        assert code == 0 and report["dim_formula"] == 3 and report["vanishing_basis"] == []

    def test_text_output(self, capsys):
        code, out, _ = run(capsys, "analyze", data("rank6.json"))
        assert code == 0
        assert "iota = 4, kappa = 2" in out and "agreement: yes" in out

    def test_point_cap(self, capsys, monkeypatch):
        code, _, err = run(capsys, "analyze", data("rank6.json"), "--max-points", 50)
        assert code == 2 and "50" in err
        monkeypatch.setenv(MAX_POINTS_ENV, "20")
        code, _, _ = run(capsys, "analyze", data("rank6.json"))
        assert code == 2
        code, _, _ = run(capsys, "analyze", data("rank6.json"), "--max-points", 100)
        assert code == 0


class TestInputErrors:
    def test_missing_file(self, capsys, tmp_path):
        code, _, err = run(capsys, "analyze", tmp_path / "nope.json")
        assert code == 2 and "nope.json" in err

    def test_bad_json_reports_position(self, capsys, tmp_path):
        p = tmp_path / "bad.json"
        p.write_text('{"n": 2,\n "generators": [["1/2", ]]}')
        code, _, err = run(capsys, "analyze", p)
        assert code == 2 and "line 2" in err

    def test_schema_reports_field(self, capsys, tmp_path):
        p = tmp_path / "bad.json"
        p.write_text('{"n": 2, "generators": [["1/2", "one"]]}')
        code, _, err = run(capsys, "analyze", p)
        assert code == 2 and "generators[0]" in err

    def test_usage(self, capsys):
        assert run(capsys, "frobnicate")[0] == 2
        assert run(capsys)[0] == 2
        assert run(capsys, "verify", "nonsense")[0] == 2


class TestSebo:
    def test_paired(self, capsys):
        code, out, _ = run(capsys, "sebo", data("paired.json"))
        assert code == 0 and out.strip() == "holds; sigma = (1 2)(3 4)"

    def test_half_integral(self, capsys):
        _, out, _ = run(capsys, "sebo", data("half_integral.json"))
        assert out.strip() == "holds; sigma = id"

    def test_unpaired(self, capsys):
        code, out, _ = run(capsys, "sebo", data("unpaired.json"))
        assert code == 0 and out.startswith("fails; witness k=1")
        assert "7/5" in out

    def test_json(self, capsys):
        _, out, _ = run(capsys, "sebo", data("unpaired.json"), "--json")
        w = json.loads(out)["witness"]
        assert w["coords"] == ["1/5", "1/5", "2/5", "3/5"] and w["sum"] == "7/5"


class TestHstar:
    def test_reeve(self, capsys):
        code, out, _ = run(capsys, "hstar", data("reeve3.json"), "--json")
        assert code == 0 and json.loads(out) == {"h_star": [1, 0, 2, 0], "normalized_volume": 3}

    def test_segment_and_unit(self, capsys):
        assert json.loads(run(capsys, "hstar", data("segment.json"), "--json")[1])["h_star"] == [1, 1]
        assert json.loads(run(capsys, "hstar", data("unit_triangle.json"), "--json")[1])["h_star"] == [1, 0, 0]

    def test_text(self, capsys):
        _, out, _ = run(capsys, "hstar", data("reeve3.json"))
        assert "h* = (1, 0, 2, 0)" in out and "sum = 3" in out

    def test_degenerate(self, capsys):
        code, _, err = run(capsys, "hstar", data("degenerate.json"))
        assert code == 2 and "degenerate" in err

    def test_lattice_file_is_rejected(self, capsys):
        assert run(capsys, "hstar", data("paired.json"))[0] == 2


class TestEnumerate:
    def test_white(self, capsys):
        code, out, _ = run(capsys, "enumerate", data("white_5_2.json"), "--json")
        pts = json.loads(out)["points"]
        assert code == 0 and len(pts) == 5
        assert {tuple(p["coords"]) for p in pts} == {
            ("0", "0", "0"), ("2/5", "3/5", "1/5"), ("4/5", "1/5", "2/5"),
            ("1/5", "4/5", "3/5"), ("3/5", "2/5", "4/5"),
        }

    def test_text(self, capsys):
        _, out, _ = run(capsys, "enumerate", data("paired.json"))
        assert out.splitlines()[1] == "k=1\t(1/5, 4/5, 2/5, 3/5)"


class TestVerify:
    def test_bad_bounds(self, capsys):
        assert run(capsys, "verify", "chars", "--max-order", 0)[0] == 2
        assert run(capsys, "verify", "chars", "--max-order", 1000)[0] == 2
        assert run(capsys, "verify", "dirichlet", "--max-modulus", 500)[0] == 2
        assert run(capsys, "verify", "lattice", "--instances", -1)[0] == 2

    def test_small_runs_pass(self, capsys):
        assert run(capsys, "verify", "chars", "--max-order", 12)[0] == 0
        assert run(capsys, "verify", "dirichlet", "--max-modulus", 12, "--series-max-order", 6)[0] == 0
        code, out, _ = run(capsys, "verify", "lattice", "--instances", 20, "--json")
        assert code == 0 and json.loads(out)["passed"] is True

    def test_deterministic(self, capsys):
        args = ("verify", "lattice", "--instances", 15, "--max-order", 80, "--seed", 9, "--json")
        first = run(capsys, *args)[1]
        assert first == run(capsys, *args)[1]

    def test_timing_flag(self, capsys):
        _, out, _ = run(capsys, "verify", "chars", "--max-order", 6, "--json", "--timing")
        assert "wall_time" in json.loads(out)


def test_console_entry_point_bytes_identical():
    cmd = [sys.executable, "-m", "cubespan", "analyze", str(data("rank6.json")), "--json"]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b == data("rank6_analyze.golden.json").read_bytes()


def test_failed_verification_exits_1(capsys, monkeypatch):
    from cubespan import verify

    def broken(**kwargs):
        report = verify.VerifyReport("chars", cases=1)
        report.fail("orthonormality", group=[2])
        return report

    monkeypatch.setattr(verify, "verify_chars", broken)
    code, out, _ = run(capsys, "verify", "chars")
    assert code == 1 and "FAIL" in out and "orthonormality" in out


def test_disagreement_exits_1(capsys, monkeypatch):
    import cubespan.cli as cli

    monkeypatch.setattr(cli, "same_subspace", lambda *a: False)
    code, out, _ = run(capsys, "analyze", data("white_5_2.json"))
    assert code == 1 and "agreement: NO" in out

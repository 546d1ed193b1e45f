import json

import pytest

from cyclefact.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def report(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--json")
    return code, json.loads(out)


class TestCount:
    def test_three_way_agreement(self, capsys):
        code, data = report(capsys, "count", "--alpha", "2,1", "--index", "2:3", "--method", "all")
        assert code == 0
        assert data["results"]["count"] == 8
        assert data["checks"] and all(c["passed"] for c in data["checks"])

    def test_class_formula(self, capsys):
        code, data = report(capsys, "count", "--alpha", "4", "--index", "2:3", "--mode", "classes", "--method", "formula")
        assert code == 0 and data["results"]["count"] == 12

    def test_subminimal_index(self, capsys):
        code, _, err = run(capsys, "count", "--alpha", "3", "--index", "2:1")
        assert code == 2 and "sub-minimal" in err

    def test_bad_arguments_are_usage_errors(self, capsys):
        assert run(capsys, "count", "--alpha", "x")[0] == 1
        assert run(capsys, "count")[0] == 1
        assert run(capsys, "nonsense")[0] == 1

    def test_json_is_deterministic_apart_from_timing(self, capsys):
        a = report(capsys, "count", "--alpha", "2,2", "--index", "2:4")[1]
        b = report(capsys, "count", "--alpha", "2,2", "--index", "2:4")[1]
        a.pop("timing"), b.pop("timing")
        assert a == b and a["schema"] == 1


class TestEnumerate:
    def test_json_records(self, capsys):
        code, data = report(capsys, "enumerate", "--perm", "(1 2 3)", "--index", "2:2")
        assert code == 0
        assert len(data["results"]["factorizations"]) == 3

    def test_json_format_flag(self, capsys):
        code, out, _ = run(capsys, "enumerate", "--perm", "(1 2 3)", "--index", "2:2", "--format", "json")
        assert code == 0 and out.count("(1 3)") >= 1

    def test_classes(self, capsys):
        code, data = report(capsys, "classes", "--perm", "(1 2 3 4)", "--index", "2:3")
        assert code == 0 and data["results"]["classes"] == 12


class TestSeries:
    def test_specialized_wtilde(self, capsys):
        code, out, _ = run(capsys, "series", "--which", "wtilde", "--set", "u=1,q2=1", "--zero-others", "--trunc", "5")
        assert code == 0
        assert "1 + x + 3*x^2 + 12*x^3 + 55*x^4" in out

    def test_w_expansion(self, capsys):
        code, out, _ = run(capsys, "series", "--which", "w", "--trunc", "3", "--kmax", "3")
        assert code == 0 and "3/2*x^3*q2^2*u^2" in out

    def test_coefficient(self, capsys):
        code, data = report(capsys, "series", "--which", "H2tilde", "--coeff", "x1^2,x2^1,q2^3,u^3")
        assert code == 0 and str(data["results"]["coefficient"]) == "4"

    def test_coefficient_beyond_truncation(self, capsys):
        code, _, _ = run(capsys, "series", "--which", "w", "--trunc", "3", "--coeff", "x^5")
        assert code == 2


class TestMap:
    def test_one_dot_file_per_marked_map(self, capsys, tmp_path):
        code, _, _ = run(
            capsys, "map", "--perm", "(1 2)(3)", "--index", "2:3", "--export", "dot", "--stage", "marked", "--out", str(tmp_path)
        )
        assert code == 0
        files = sorted(tmp_path.glob("*.dot"))
        assert len(files) == 8
        assert len({f.read_text() for f in files}) == 8

    def test_factors_option(self, capsys):
        code, data = report(capsys, "map", "--factors", "(1 5 3);(2 5);(1 5)(2 4 3)", "--stage", "constellation")
        assert code == 0
        assert data["results"]["distinct maps"] == 1
        assert "3:(1, 5, 3)" in data["results"]["maps"][0]

    def test_round_trips(self, capsys):
        code, data = report(capsys, "map", "--roundtrip", "--nmax", "3")
        assert code == 0 and all(c["passed"] for c in data["checks"])

    def test_round_trip_bound(self, capsys):
        assert run(capsys, "map", "--roundtrip", "--nmax", "9")[0] == 1


class TestFormula:
    @pytest.mark.parametrize(
        "argv, expected",
        [
            (["hurwitz", "--alpha", "2,1"], 8),
            (["ordered", "--n", "4", "--index", "2:1,3:1"], 8),
            (["inequivalent", "--n", "4", "--index", "2:3"], 12),
            (["kcycle", "--n", "5", "--k", "3"], 5),
            (["beta", "--n", "3", "--beta", "2,1", "--index", "2:1"], 3),
            (["lagrange-inequivalent", "--n", "4", "--index", "2:3"], 12),
            (["lagrange-ordered", "--n", "3", "--index", "2:2"], 3),
        ],
    )
    def test_values(self, capsys, argv, expected):
        code, data = report(capsys, "formula", *argv)
        assert code == 0 and data["results"]["value"] == expected


class TestVerify:
    def test_single_quick_group(self, capsys):
        code, out, _ = run(capsys, "verify", "--suite", "quick", "--group", "1")
        assert code == 0 and "[PASS] criterion 1" in out

    def test_nmax_guard(self, capsys):
        assert run(capsys, "verify", "--suite", "full", "--nmax", "99")[0] == 1

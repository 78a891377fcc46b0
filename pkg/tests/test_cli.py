import hashlib
import json
import math

import pytest

from extgini import cli
from extgini.dataset import (
    REFERENCE_SHA256,
    load_csv,
    load_reference_dataset,
    parse_csv,
    reference_bytes,
    reference_checksum,
)
from extgini.errors import NumericError, ParseError

from conftest import GDP_VALUES


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    doc = json.loads(out) if code == 0 else None
    return code, doc, err


def numbers(node):
    if isinstance(node, dict):
        for v in node.values():
            yield from numbers(v)
    elif isinstance(node, list):
        for v in node:
            yield from numbers(v)
    elif isinstance(node, (int, float)) and not isinstance(node, bool):
        yield node


@pytest.fixture
def csv_file(tmp_path):
    def make(text, name="data.csv"):
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return str(path)
    return make


# dataset


def test_reference_fixture_checksum():
    assert reference_checksum() == REFERENCE_SHA256
    assert hashlib.sha256(reference_bytes()).hexdigest() == REFERENCE_SHA256
    data = load_reference_dataset()
    assert list(data.sample.values) == GDP_VALUES
    assert data.header == ("country", "gdp_per_capita")
    assert len(data.labels) == 17


def test_parse_single_column_without_header():
    data = parse_csv("1.5\n2\n\n3e2\n")
    assert list(data.sample.values) == [1.5, 2.0, 300.0]
    assert data.header is None and data.labels is None


def test_parse_error_names_line():
    with pytest.raises(ParseError) as info:
        parse_csv("label,value\na,1\nb,2\nc,abc\n")
    assert info.value.line == 4
    assert "line 4" in str(info.value)


@pytest.mark.parametrize("text,line", [
    ("a,1\nb,1,2\n", 2),
    ("1\n2\n1,000\n", 3),
    ("x,1\ny,1 234\n", 2),
    ("1\nnan\n", 2),
])
def test_parse_rejects_malformed_rows(text, line):
    with pytest.raises(ParseError) as info:
        parse_csv(text)
    assert info.value.line == line


def test_parse_rejects_empty_and_negative():
    with pytest.raises(ParseError):
        parse_csv("value\n")
    with pytest.raises(ParseError):
        parse_csv("1\n-2\n")


def test_missing_file_is_domain_error(tmp_path, capsys):
    code, _, err = run(capsys, "estimate", "--input", str(tmp_path / "nope.csv"), "--m", "2", "--j", "1",
                       "--k", "2")
    assert code == 2
    assert "cannot read" in err
    with pytest.raises(ValueError):
        load_csv(tmp_path / "nope.csv")


# theoretical


def test_theoretical_gini(capsys):
    code, doc, err = run(capsys, "theoretical", "--alpha", "2", "--m", "2", "--j", "1", "--k", "2")
    assert code == 0
    assert doc["results"]["index"] == pytest.approx(0.375, abs=1e-9)
    assert doc["schema_version"] == cli.SCHEMA_VERSION
    assert doc["command"] == "theoretical"
    assert "IG_2(1,2)" in err


def test_theoretical_study_spec(capsys):
    code, doc, _ = run(capsys, "theoretical", "--alpha", "2", "--m", "4", "--j", "2", "--k", "3")
    assert code == 0
    assert doc["results"]["index"] == pytest.approx(0.09657, abs=5e-6)
    assert doc["results"]["quadrature"]["method"] == "alternating"


def test_theoretical_rejects_bad_ranks(capsys):
    code, _, err = run(capsys, "theoretical", "--alpha", "2", "--m", "4", "--j", "3", "--k", "2")
    assert code == 2
    assert "j <= k" in err


@pytest.mark.parametrize("argv", [
    ["theoretical", "--alpha", "-1", "--m", "2", "--j", "1", "--k", "2"],
    ["theoretical", "--alpha", "2", "--m", "2", "--j", "1"],
    ["estimate", "--m", "2", "--j", "1", "--k", "2"],
    ["estimate", "--reference", "--input", "x.csv", "--m", "2", "--j", "1", "--k", "2"],
    ["bogus"],
])
def test_argument_errors_exit_2(argv, capsys):
    with pytest.raises(SystemExit) as info:
        cli.main(argv)
    assert info.value.code == 2
    capsys.readouterr()


def test_quadrature_failure_exits_3(capsys, monkeypatch):
    def fail(*args, **kwargs):
        raise NumericError("subdivision budget exhausted", estimate=0.1, error=1e-3)

    monkeypatch.setattr(cli, "index_gamma", fail)
    code, _, err = run(capsys, "theoretical", "--alpha", "2", "--m", "2", "--j", "1", "--k", "2")
    assert code == 3
    assert "numeric failure" in err


def test_every_subcommand_has_help(capsys):
    for name in ("theoretical", "estimate", "simulate", "fit", "heatmap"):
        with pytest.raises(SystemExit) as info:
            cli.main([name, "--help"])
        assert info.value.code == 0
        assert "usage" in capsys.readouterr().out


# estimate


def test_estimate_reference_values(capsys):
    code, doc, _ = run(capsys, "estimate", "--reference", "--m", "2", "--j", "1", "--k", "2")
    assert code == 0
    assert doc["results"]["estimate"] == pytest.approx(0.5600, abs=5e-5)
    assert doc["results"]["n"] == 17
    code, doc, _ = run(capsys, "estimate", "--reference", "--m", "17", "--j", "1", "--k", "17", "--naive")
    assert code == 0
    assert doc["results"]["estimate"] == pytest.approx(0.2206, abs=5e-5)
    assert doc["results"]["method"] == "naive"


def test_estimate_from_labelled_file(capsys, csv_file):
    path = csv_file("country,gdp\na,1\nb,3\n")
    code, doc, _ = run(capsys, "estimate", "--input", path, "--m", "2", "--j", "1", "--k", "2")
    assert code == 0
    assert doc["results"]["estimate"] == pytest.approx(0.5, abs=1e-12)
    assert doc["inputs"]["input"] == path


def test_estimate_identical_values(capsys, csv_file):
    path = csv_file("7.25\n7.25\n7.25\n7.25\n")
    code, doc, _ = run(capsys, "estimate", "--input", path, "--m", "3", "--j", "1", "--k", "3")
    assert code == 0
    assert doc["results"]["estimate"] == 0.0


def test_estimate_parse_error_exit_2(capsys, csv_file):
    path = csv_file("1\n2\nthree\n")
    code, _, err = run(capsys, "estimate", "--input", path, "--m", "2", "--j", "1", "--k", "2")
    assert code == 2
    assert "line 3" in err


def test_estimate_insufficient_sample_exit_2(capsys):
    code, _, _ = run(capsys, "estimate", "--reference", "--m", "18", "--j", "1", "--k", "18")
    assert code == 2


def test_naive_capacity_exit_3(capsys, csv_file):
    path = csv_file("\n".join(str(i + 1) for i in range(40)) + "\n")
    code, _, err = run(capsys, "estimate", "--input", path, "--m", "20", "--j", "1", "--k", "20", "--naive")
    assert code == 3
    assert "guard" in err


# simulate


def test_simulate_within_three_standard_errors(capsys):
    code, doc, _ = run(capsys, "simulate", "--n", "20", "--reps", "500")
    assert code == 0
    res = doc["results"]
    assert res["spec"] == {"m": 4, "j": 2, "k": 3}
    assert abs(res["mean_estimate"] - 0.09657) < 3 * res["std_error"]


def test_simulate_is_deterministic(capsys):
    argv = ["simulate", "--n", "10", "--reps", "1", "--seed", "42"]
    _, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    first.pop("timing")
    second.pop("timing")
    assert first == second
    assert first["results"]["std_error"] is None


def test_simulate_rejects_small_n(capsys):
    code, _, _ = run(capsys, "simulate", "--n", "3", "--m", "5", "--j", "1", "--k", "5")
    assert code == 2


# fit


def test_fit_with_gof(capsys):
    code, doc, err = run(capsys, "fit", "--reference", "--gof", "--bootstrap", "200", "--seed", "3")
    assert code == 0
    res = doc["results"]
    assert res["shape"] == pytest.approx(0.9227910273, rel=1e-9)
    assert res["converged"] is True
    assert res["gof"]["ks_p"] > 0.05 and res["gof"]["cvm_p"] > 0.05
    assert res["gof"]["bootstrap_reps"] == 200
    assert "KS p=" in err


def test_fit_scaled_fixture(capsys, csv_file):
    path = csv_file("\n".join(f"{v * 1000:.2f}" for v in GDP_VALUES) + "\n")
    _, base, _ = run(capsys, "fit", "--reference")
    code, scaled, _ = run(capsys, "fit", "--input", path)
    assert code == 0
    assert scaled["results"]["shape"] == pytest.approx(base["results"]["shape"], rel=1e-9)
    assert scaled["results"]["rate"] == pytest.approx(base["results"]["rate"] / 1000, rel=1e-9)


def test_fit_rejects_zero(capsys, csv_file):
    path = csv_file("1\n0\n2\n")
    code, _, err = run(capsys, "fit", "--input", path)
    assert code == 2
    assert "positive" in err


def test_fit_rejects_small_bootstrap(capsys):
    code, _, _ = run(capsys, "fit", "--reference", "--gof", "--bootstrap", "50")
    assert code == 2


# heatmap


def test_heatmap_two_rows(capsys, tmp_path):
    out = tmp_path / "grid.csv"
    code, doc, _ = run(capsys, "heatmap", "--reference", "--m-max", "2", "--output", str(out))
    assert code == 0
    lines = out.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "m,j,k,estimate"
    assert len(lines) == 4
    assert doc["results"]["rows"] == 3
    row = dict(zip(lines[0].split(","), lines[2].split(",")))
    assert (row["m"], row["j"], row["k"]) == ("2", "1", "2")
    assert float(row["estimate"]) == pytest.approx(0.5600, abs=5e-5)


def test_heatmap_file_contract(capsys, tmp_path):
    out = tmp_path / "grid.csv"
    code, doc, _ = run(capsys, "heatmap", "--reference", "--m-max", "17", "--output", str(out))
    assert code == 0
    raw = out.read_bytes()
    assert b"\r" not in raw and raw.endswith(b"\n")
    rows = [line.split(",") for line in raw.decode().splitlines()[1:]]
    keys = [tuple(int(c) for c in r[:3]) for r in rows]
    assert keys == sorted(keys)
    assert len(keys) == sum(m * (m + 1) // 2 for m in range(2, 18))
    est = {key: float(r[3]) for key, r in zip(keys, rows)}
    assert all(v == 0.0 for (m, j, k), v in est.items() if j == k)
    for (m, j, k), v in est.items():
        if k < m:
            assert est[(m, j, k + 1)] >= v - 1e-9
        if j > 1:
            assert est[(m, j - 1, k)] >= v - 1e-9
    assert doc["results"]["mth_gini"] == pytest.approx(0.2206, abs=5e-5)


def test_heatmap_rejects_large_m_max(capsys, tmp_path):
    code, _, _ = run(capsys, "heatmap", "--reference", "--m-max", "18", "--output", str(tmp_path / "g.csv"))
    assert code == 2


# envelope


def test_documents_round_trip(capsys, tmp_path):
    commands = [
        ["theoretical", "--alpha", "0.5", "--m", "9", "--j", "2", "--k", "7"],
        ["estimate", "--reference", "--m", "5", "--j", "1", "--k", "4"],
        ["simulate", "--n", "8", "--reps", "20"],
        ["fit", "--reference"],
        ["heatmap", "--reference", "--m-max", "3", "--output", str(tmp_path / "g.csv")],
    ]
    for argv in commands:
        code, doc, _ = run(capsys, *argv)
        assert code == 0
        assert set(doc) == {"schema_version", "command", "version", "inputs", "results", "timing"}
        assert doc["schema_version"] == "1.0"
        assert all(math.isfinite(x) for x in numbers(doc))
        assert json.loads(json.dumps(doc)) == doc


def test_fmt_rounds_to_ten_digits():
    assert cli.fmt(0.123456789012345) == 0.123456789
    assert cli.fmt(math.nan) is None
    assert cli.fmt({"a": [1.0 / 3.0, True, 2]}) == {"a": [0.3333333333, True, 2]}

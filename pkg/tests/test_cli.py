import csv
import io
import json
import math

import pytest

from wkbsum.cli import EXIT_CONFIG, EXIT_GATE, EXIT_OK, ConfigError, main, parse_range


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def rows_of(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_parse_range():
    assert parse_range("1..3", "--m") == (1, 3)
    assert parse_range("2", "--m") == (2, 2)
    with pytest.raises(ConfigError, match="--m"):
        parse_range("3..1", "--m")
    with pytest.raises(ConfigError):
        parse_range("a..b", "--m")


def test_quantize_example(capsys):
    code, out, _ = run(capsys, "quantize", "--m", "1..1", "--n-theta", "0..0", "--order", "3")
    assert code == EXIT_OK
    rows = rows_of(out)
    assert [r["N"] for r in rows] == ["0", "1", "2", "3", "summed", "torus"]
    assert float(rows[3]["lambda2_N"]) == pytest.approx(2.0010, abs=5e-5)
    assert float(rows[4]["lambda2_N"]) == pytest.approx(2.0, rel=1e-12)
    assert float(rows[5]["lambda2_N"]) == 2.25


def test_quantize_order_zero(capsys):
    _, out, _ = run(capsys, "quantize", "--m", "2..2", "--n-theta", "1..1", "--order", "0")
    r = rows_of(out)[0]
    assert float(r["lambda2_N"]) == pytest.approx((1.5 + math.sqrt(3.75)) ** 2 - 0.25, rel=1e-14)
    assert float(r["lambda2_N"]) == pytest.approx(11.5594750, abs=1e-7)
    assert r["lambda2_exact"] == "12"


def test_empty_range_is_config_error(tmp_path, capsys):
    out = tmp_path / "x.csv"
    code, _, err = run(capsys, "quantize", "--m", "2..1", "--out", str(out))
    assert code == EXIT_CONFIG
    assert "--m" in err
    assert not out.exists()


@pytest.mark.parametrize("argv", [["--m", "0..1"], ["--order", "-1"], ["--samples", "100"], ["--tolerance", "0"]])
def test_invalid_config(capsys, argv):
    code, out, _ = run(capsys, "quantize", *argv)
    assert code == EXIT_CONFIG and out == ""


def test_contour_rows(capsys):
    code, out, _ = run(capsys, "contour", "--m", "1", "--l", "1", "--order", "3")
    assert code == EXIT_OK
    rows = {int(r["n"]): r for r in rows_of(out)}
    assert float(rows[1]["numeric"]) == pytest.approx(-math.pi, abs=1e-8)
    assert abs(float(rows[3]["numeric"])) < 1e-8
    assert float(rows[2]["abs_error"]) < 1e-6


def test_contour_gate_failure_exit(capsys, monkeypatch):
    import wkbsum.cli as cli
    monkeypatch.setattr(cli, "GATE_ZERO", 0.0)
    code, out, err = run(capsys, "contour", "--m", "1", "--l", "1", "--order", "2")
    assert code == EXIT_GATE
    assert "n=0, m=1, l=1" in err
    assert len(rows_of(out)) == 3


def test_contour_order_limit(capsys):
    code, _, err = run(capsys, "contour", "--order", "13")
    assert code == EXIT_CONFIG and "--order" in err


def test_swkb_rows(capsys):
    _, out, _ = run(capsys, "swkb", "--m", "1..2", "--n-theta", "0..2")
    rows = rows_of(out)
    assert len(rows) == 6
    for r in rows:
        assert r["lambda2_swkb"] == r["lambda2_exact"]
        assert float(r["abs_error"]) < 1e-8


def test_oracle_rows(capsys):
    _, out, _ = run(capsys, "oracle", "--m", "1", "--l", "1..2")
    rows = rows_of(out)
    assert [r["node_count"] for r in rows] == ["0", "1"]
    assert all(float(r["abs_error"]) < 1e-6 for r in rows)


def test_report_rows(capsys):
    code, out, _ = run(capsys, "report", "--m", "1..2", "--l", "1..3")
    assert code == EXIT_OK
    rows = {(r["m"], r["l"]): r for r in rows_of(out)}
    r = rows[("1", "1")]
    assert (r["lambda2_exact"], r["lambda2_torus"], r["lambda2_swkb"]) == ("2", "2.25", "2")
    assert float(r["lambda2_wkb_summed"]) == pytest.approx(2, rel=1e-12)
    assert float(r["lambda2_oracle"]) == pytest.approx(2, abs=1e-6)
    r = rows[("2", "3")]
    for col in ("lambda2_wkb_summed", "lambda2_swkb", "lambda2_oracle"):
        assert float(r[col]) == pytest.approx(12, abs=1e-6)
    assert all(r["status"] == "ok" for r in rows.values())


def test_json_round_trip(tmp_path, capsys):
    path = tmp_path / "r.json"
    assert main(["report", "--m", "1", "--l", "1..2", "--format", "json", "--out", str(path)]) == EXIT_OK
    text = path.read_text()
    data = json.loads(text)
    assert data["columns"][0] == "m"
    again = json.dumps(data, indent=1) + "\n"
    assert again == text


def test_csv_and_json_agree(tmp_path):
    c, j = tmp_path / "a.csv", tmp_path / "a.json"
    argv = ["quantize", "--m", "1..3", "--n-theta", "0..2", "--order", "5"]
    main(argv + ["--out", str(c)])
    main(argv + ["--format", "json", "--out", str(j)])
    csv_rows = rows_of(c.read_text())
    json_rows = json.loads(j.read_text())["rows"]
    assert len(csv_rows) == len(json_rows)
    for a, b in zip(csv_rows, json_rows):
        for k, v in b.items():
            if isinstance(v, float):
                assert float(a[k]) == v
            else:
                assert a[k] == str(v)


def test_determinism(tmp_path):
    outs = []
    for i in range(2):
        p = tmp_path / f"o{i}.csv"
        main(["report", "--m", "1..2", "--l", "1..2", "--out", str(p)])
        outs.append(p.read_bytes())
    assert outs[0] == outs[1]
    assert b"\r\n" not in outs[0]


def test_coefficients_dump(capsys):
    code, out, _ = run(capsys, "coefficients", "--order", "4")
    assert code == EXIT_OK
    data = json.loads(out)
    assert [entry["n"] for entry in data] == [0, 1, 2, 3, 4]
    assert data[1]["wPow"] == -2

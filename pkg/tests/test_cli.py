from __future__ import annotations

import json
import xml.etree.ElementTree as ET
from pathlib import Path

import pytest

from tmfduality.charts import CELL
from tmfduality.cli import ENV_WINDOW, RunConfig, UsageError, main, parse_config

SVG = "{http://www.w3.org/2000/svg}"


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_cohomology_point(capsys):
    code, out, _ = run(["cohomology", "--group", "S3", "--module", "lambda", "--at", "1", "4"], capsys)
    assert code == 0
    assert out.strip() == "Z/3 (α)"


def test_cohomology_records_are_deterministic(capsys):
    argv = ["cohomology", "--module", "lambda_sgn", "--window", "4", "0", "40", "--format", "records"]
    a = run(argv, capsys)[1]
    b = run(argv, capsys)[1]
    assert a == b
    doc = json.loads(a)
    assert set(doc) == {"config", "entries", "differentials", "verdict"}
    assert {"s": 0, "t": 12, "freeRank": 1, "torsionDivisors": [], "basisLabels": ["d"]} in doc["entries"]


def test_homology_kind(capsys):
    code, out, _ = run(["cohomology", "--kind", "homology", "--at", "0", "16"], capsys)
    assert code == 0 and "Z/3" in out


def test_sheaf_records(capsys):
    code, out, _ = run(["sheaf", "--window", "0", "-40", "40", "--format", "records"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["verdict"]["passed"]
    assert all(r["perfect"] and r["equivariant"] for r in doc["entries"])


def test_invariants_and_tate_pass(capsys):
    assert run(["invariants", "--window", "0", "0", "96"], capsys)[0] == 0
    code, out, _ = run(["tate", "--window", "5", "-48", "48"], capsys)
    assert code == 0 and out.rstrip().endswith("PASS")


def test_tate_ss_text(capsys):
    code, out, _ = run(["ss", "--target", "tate", "--window", "9", "-60", "60"], capsys)
    assert code == 0
    assert "E10 = 0 on the safe window: yes" in out
    assert "Δ (0, 24) →5 αβ^2 (5, 28)" in out


def test_ss_svg_has_every_page(tmp_path, capsys):
    path = tmp_path / "hfpss.svg"
    code = main(["ss", "--window", "8", "-40", "60", "--format", "svg", "-o", str(path)])
    assert code == 0
    root = ET.parse(path).getroot()
    assert root.tag == SVG + "svg"
    ids = [g.get("id") for g in root.iter(SVG + "g")]
    assert ids == [f"E{r}" for r in range(2, 11)]
    assert root.find(f".//{SVG}line[@class='d5']") is not None


def test_chart_svg_and_records(capsys):
    code, out, _ = run(["chart", "--window", "8", "-40", "60", "--format", "svg"], capsys)
    assert code == 0
    ET.fromstring(out.encode())
    code, out, _ = run(["chart", "--target", "orbit", "--window", "8", "-40", "60", "--format", "records"], capsys)
    assert code == 0
    stems = {r["stem"]: r for r in json.loads(out)["entries"]}
    assert "extensionAmbiguity" in stems[0]


def test_duality_all(capsys):
    code, out, _ = run(["duality", "--window", "8", "-60", "100"], capsys)
    assert code == 0
    for name in ("tmf2", "e2shift", "tmf21"):
        assert f"{name}: PASS" in out


def test_usage_errors(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["ss", "--window", "8", "10", "-10"])
    assert exc.value.code == 2
    assert run(["cohomology", "--format", "svg"], capsys)[0] == 2
    assert run(["chart", "--target", "tate"], capsys)[0] == 2
    with pytest.raises(SystemExit) as exc:
        main(["nonsense"])
    assert exc.value.code == 2


def test_unwritable_output(tmp_path, capsys):
    code, _, err = run(["invariants", "--window", "0", "0", "24", "-o", str(tmp_path / "missing" / "x.txt")], capsys)
    assert code == 1 and "cannot write" in err


def test_window_from_environment(monkeypatch):
    monkeypatch.setenv(ENV_WINDOW, "5 -24 24")
    assert parse_config(["tate"]).window == (5, -24, 24)
    monkeypatch.setenv(ENV_WINDOW, "5 -24")
    with pytest.raises(SystemExit):
        parse_config(["tate"])


def test_config_validation():
    with pytest.raises(UsageError):
        RunConfig("bogus")
    with pytest.raises(UsageError):
        RunConfig("ss", window=(-1, 0, 10))


GOLDEN = Path(__file__).parent / "golden"


@pytest.mark.parametrize(
    "name, argv",
    [
        ("cohomology_lambda.json", ["cohomology", "--module", "lambda", "--window", "3", "0", "24", "--format", "records"]),
        ("tate_ss_small.json", ["ss", "--target", "tate", "--window", "0", "-30", "30", "--format", "records"]),
    ],
)
def test_records_match_golden_files(name, argv, capsys):
    code, out, _ = run(argv, capsys)
    assert code == 0
    assert out == (GOLDEN / name).read_text(encoding="utf-8")


def test_tate_svg_tenth_page_is_empty_on_the_safe_window(capsys):
    """Every glyph left on E10 sits on a shaded (boundary-unreliable) cell."""
    code, out, _ = run(["ss", "--target", "tate", "--window", "12", "-120", "120", "--format", "svg"], capsys)
    assert code == 0
    root = ET.fromstring(out.encode())
    e10 = next(g for g in root.iter(SVG + "g") if g.get("id") == "E10")
    shaded = {
        (round(float(r.get("x")) + CELL / 2), round(float(r.get("y")) + CELL / 2))
        for r in e10.iter(SVG + "rect")
        if r.get("class") == "unsafe"
    }
    glyphs = [(float(c.get("cx")), float(c.get("cy"))) for c in e10.iter(SVG + "circle")]
    assert glyphs, "the boundary still carries classes"
    for x, y in glyphs:
        assert any(abs(x - sx) <= CELL / 2 and abs(y - sy) <= CELL / 2 for sx, sy in shaded)

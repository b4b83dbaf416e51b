import csv
import io
import json

import pytest

from dronesnc.cli import main
from dronesnc.scenario import paper_default


def run(capsys, *argv):
    rc = main(list(argv))
    out = capsys.readouterr()
    return rc, out.out, out.err


def test_alpha_star_csv(capsys):
    rc, out, _ = run(capsys, "alpha-star", "--format", "csv")
    assert rc == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [r["environment"] for r in rows] == ["suburban", "urban", "dense-urban"]


def test_place_json(capsys, tmp_path):
    sc = paper_default().with_(user_count=6)
    path = tmp_path / "sc.json"
    path.write_text(sc.to_json())
    rc, out, _ = run(capsys, "place", "--scenario", str(path), "--seed", "4")
    assert rc == 0
    d = json.loads(out)
    assert d["method"] == "usnc" and len(d["flags"]["u"]) == 6


def test_semi_jsnc_to_directory(capsys, tmp_path):
    rc, _, _ = run(capsys, "semi-jsnc", "--users", "5", "--seed", "1", "--out", str(tmp_path), "--format", "csv")
    assert rc == 0
    rows = list(csv.DictReader((tmp_path / "semi-jsnc.csv").open()))
    assert len(rows) == 5


def test_regional_and_fit(capsys):
    rc, out, _ = run(capsys, "regional", "--points", "50")
    assert rc == 0
    assert json.loads(out)["optimum"]["gain_percent"] == pytest.approx(49.7, abs=0.1)
    rc, out, _ = run(capsys, "fit-pwl", "--max-n", "3", "--format", "csv")
    assert rc == 0 and len(out.strip().splitlines()) == 3


def test_montecarlo_small(capsys):
    rc, out, _ = run(capsys, "montecarlo", "--trials", "1", "--users", "5", "--methods", "no-uil,usnc")
    assert rc == 0
    assert json.loads(out)["summary"]["usnc"]["failures"] == 0


def test_density_sweep_small(capsys):
    rc, out, _ = run(capsys, "density-sweep", "--trials", "1", "--counts", "3-4", "--methods", "no-uil",
                     "--format", "csv")
    assert rc == 0 and len(out.strip().splitlines()) == 3


def test_invalid_scenario_exits_nonzero(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"schema_version": 42}))
    rc, _, err = run(capsys, "place", "--scenario", str(path))
    assert rc != 0 and "schema_version" in err
    rc, _, _ = run(capsys, "place", "--scenario", str(tmp_path / "missing.json"))
    assert rc != 0


def test_unknown_subcommand():
    with pytest.raises(SystemExit):
        main(["fly"])

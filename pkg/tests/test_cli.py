import json

import pytest
from click.testing import CliRunner

from descent_kit.cli import main
from descent_kit.documents import load, loads


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def fixtures_dir(runner, tmp_path):
    res = runner.invoke(main, ["fixtures", str(tmp_path)])
    assert res.exit_code == 0
    return tmp_path


def test_fixtures_written(fixtures_dir):
    names = sorted(p.name for p in fixtures_dir.glob("*.json"))
    assert names == ["fix-f.json", "fix-g.json", "fix-h.json", "fix-l-sim.json", "fix-l.json"]
    for n in names:
        load(fixtures_dir / n)


def test_validate(runner, fixtures_dir, tmp_path):
    res = runner.invoke(main, ["validate", str(fixtures_dir / "fix-f.json")])
    assert res.exit_code == 0 and res.output.startswith("ok: 2 objects, 1 morphisms")
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    res = runner.invoke(main, ["validate", str(bad)])
    assert res.exit_code == 1 and "parse error" in res.output


def test_check_text_and_json(runner, fixtures_dir):
    res = runner.invoke(main, ["check", str(fixtures_dir / "fix-f.json"), "--morphism", "p"])
    assert res.exit_code == 0
    assert "p: NotEffective by ordx:chain+filtered-pair-lifting" in res.output
    assert "condition (b): fail, witness (*, b1, b0)" in res.output
    res = runner.invoke(main, ["check", str(fixtures_dir / "fix-g.json"), "--morphism", "p", "--json"])
    data = json.loads(res.output)
    assert res.exit_code == 0 and data["status"] == "Effective" and data["tag"] == "OrdX"
    res = runner.invoke(main, ["check", str(fixtures_dir / "fix-g.json"), "--morphism", "nope"])
    assert res.exit_code == 1


def test_witness(runner, fixtures_dir, tmp_path):
    out = tmp_path / "w.json"
    res = runner.invoke(main, ["witness", str(fixtures_dir / "fix-f.json"), "--morphism", "p", "-o", str(out)])
    assert res.exit_code == 0
    doc = load(out)
    assert set(doc.objects) == {"E", "B", "B_prod", "A", "E_x_B_A"}
    assert doc.extra["witness"]["verified"] and len(doc.extra["witness"]["claims"]) == 3
    assert doc.objects["E_x_B_A"].at("*") == frozenset()
    res = runner.invoke(main, ["witness", str(fixtures_dir / "fix-g.json"), "--morphism", "p"])
    assert res.exit_code == 1
    res = runner.invoke(main, ["witness", str(fixtures_dir / "fix-f.json"), "--morphism", "p", "--at", "*,b1"])
    assert res.exit_code == 1


def test_oracle(runner, fixtures_dir):
    res = runner.invoke(main, ["oracle", str(fixtures_dir / "fix-f.json"), "--morphism", "p", "--max-size", "2"])
    data = json.loads(res.output)
    assert res.exit_code == 0 and data["refutation"]["kind"] == "FullnessFailure"
    assert data["refutation"]["revalidated"]
    res = runner.invoke(main, ["oracle", str(fixtures_dir / "fix-g.json"), "--morphism", "p", "--max-size", "4",
                               "--budget", "5"])
    assert res.exit_code == 2 and json.loads(res.output)["complete"] is False
    res = runner.invoke(main, ["oracle", str(fixtures_dir / "fix-l.json"), "--morphism", "p", "--via-f1"])
    assert res.exit_code == 0 and json.loads(res.output)["refutation"] is not None


def test_gen(runner, tmp_path):
    a = runner.invoke(main, ["gen", "--seed", "1", "--sizes", "2,3,3", "--tag", "OrdX"])
    b = runner.invoke(main, ["gen", "--seed", "1", "--sizes", "2,3,3", "--tag", "OrdX"])
    assert a.exit_code == 0 and a.output == b.output
    loads(a.output, strict=True)
    assert runner.invoke(main, ["gen", "--seed", "1", "--sizes", "2,3"]).exit_code == 1
    assert runner.invoke(main, ["gen", "--seed", "1", "--density", "3"]).exit_code == 1


def test_report(runner, fixtures_dir, tmp_path):
    res = runner.invoke(main, ["report", "--corpus", "micro:C2:X1:2", "--max-size", "2"])
    assert res.exit_code == 0 and "disagreements: 0" in res.output
    res = runner.invoke(main, ["report", "--corpus", str(fixtures_dir), "--max-size", "3", "--json"])
    data = json.loads(res.output)
    assert res.exit_code == 0 and data["instances"] == 5 and data["disagreements"] == []
    only_g = tmp_path / "g"
    only_g.mkdir()
    (only_g / "fix-g.json").write_text((fixtures_dir / "fix-g.json").read_text())
    res = runner.invoke(main, ["report", "--corpus", str(only_g), "--max-size", "4", "--budget", "5"])
    assert res.exit_code == 2
    res = runner.invoke(main, ["report", "--corpus", "random:OrdX:1:3", "--max-size", "3"])
    assert res.exit_code == 0
    res = runner.invoke(main, ["report", "--corpus", "micro:OrdX:XQ"])
    assert res.exit_code == 1


def test_report_archives_disagreements(runner, tmp_path, monkeypatch):
    import descent_kit.report as report
    from descent_kit.checkers import Status, Verdict

    monkeypatch.setattr(report, "decide_effective_descent", lambda p: Verdict(Status.EFFECTIVE, "forced"))
    res = runner.invoke(main, ["report", "--corpus", "micro:OrdX:X1:1", "--max-size", "2",
                               "--archive", str(tmp_path / "arch")])
    assert res.exit_code == 3
    files = sorted((tmp_path / "arch").glob("*.json"))
    assert files and load(files[0]).extra["reason"].startswith("Effective but the oracle refutes")

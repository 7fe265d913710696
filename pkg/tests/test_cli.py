import json

import numpy as np
import pytest

from conftest import DATA
from mixedfca.cli import main
from mixedfca.context import FormalContext, read_context, save_context
from mixedfca.implications import holds, load_implications_text


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


class TestMine:
    def test_every_rule_holds(self, capsys):
        code, out, _ = run(capsys, "mine", "--input", str(DATA / "alloys.csv"))
        assert code == 0
        ctx = read_context(DATA / "alloys.csv")
        sigma = load_implications_text(ctx.attributes, out)
        assert len(sigma) > 0 and all(holds(ctx, phi) for phi in sigma)

    def test_json(self, capsys):
        code, out, _ = run(capsys, "mine", "--input", str(DATA / "alloys.csv"), "--format", "json")
        assert code == 0 and {"premise", "conclusion"} == set(json.loads(out)[0])

    def test_missing_file(self, capsys, tmp_path):
        code, _, err = run(capsys, "mine", "--input", str(tmp_path / "nope.csv"))
        assert code == 1 and "error" in err

    def test_too_many_attributes(self, capsys, tmp_path):
        path = tmp_path / "wide.csv"
        path.write_text(save_context(FormalContext(["x"], [f"m{i}" for i in range(21)], np.ones((1, 21)))))
        code, _, err = run(capsys, "mine", "--input", str(path))
        assert code == 1 and "20" in err


class TestLattice:
    def test_outside_rows_top(self, capsys):
        code, out, _ = run(capsys, "lattice", "--input", str(DATA / "small_outside.csv"))
        doc = json.loads(out)
        top = doc["nodes"][doc["top"]]
        assert code == 0
        assert top["extent"] == ["c1", "c2", "c4"]
        assert top["intent"] == ["a", "~b", "~e"]

    def test_all_ones(self, capsys, tmp_path):
        path = tmp_path / "ones.csv"
        path.write_text("object,a,b\nx,1,1\ny,1,1\n")
        code, out, _ = run(capsys, "lattice", "--input", str(path))
        doc = json.loads(out)
        assert code == 0
        assert doc["nodes"][0]["intent"] == ["a", "b"]
        # the only other concept is the empty-extent bottom
        assert [n["extent"] for n in doc["nodes"][1:]] == [[]]

    def test_unwritable_output(self, capsys, tmp_path):
        code, _, err = run(
            capsys, "lattice", "--input", str(DATA / "alloys.csv"), "--output", str(tmp_path / "no" / "x.json")
        )
        assert code == 1 and "error" in err


class TestTune:
    def test_trace(self, capsys, tmp_path):
        out_path, tsv_path = tmp_path / "r.json", tmp_path / "r.tsv"
        code, _, _ = run(
            capsys, "tune", "--input", str(DATA / "small_problem.json"),
            "--output", str(out_path), "--tsv-output", str(tsv_path),
        )
        assert code == 0
        report = json.loads(out_path.read_text())
        first = report["trace"][0]
        assert first["control_group"] == ["c3", "c5"]
        after = {c["row"]: c["objective_after"] for c in first["changes"]}
        assert after == pytest.approx({"c1": 17.25, "c2": 18.25, "c4": 36.25})
        lines = tsv_path.read_text().splitlines()
        assert lines[0].startswith("k\tG\t") and len(lines) == 2

    def test_extremes_cheaper(self, capsys, tmp_path):
        counts = []
        for mode in ("averages", "extremes"):
            path = tmp_path / f"{mode}.json"
            run(capsys, "tune", "--input", str(DATA / "small_problem.json"), "--candidate-mode", mode,
                "--output", str(path), "--tsv-output", str(tmp_path / "t.tsv"))
            counts.append(json.loads(path.read_text())["evaluated_combinations"])
        assert counts[1] < counts[0]

    def test_bad_k(self, capsys, tmp_path):
        doc = json.loads((DATA / "small_problem.json").read_text())
        doc["k"] = 1
        path = tmp_path / "p.json"
        path.write_text(json.dumps(doc))
        code, _, err = run(capsys, "tune", "--input", str(path))
        assert code == 1 and "k" in err


class TestExperiment:
    def test_exp2_sweep_rows(self, capsys):
        code, out, _ = run(capsys, "experiment", "exp2", "--trials", "1", "--max-iterations", "3")
        lines = out.splitlines()
        assert code == 0 and len(lines) == 13
        assert [tuple(line.split("\t")[:2]) for line in lines[1:5]] == [("2", "5"), ("2", "10"), ("2", "20"), ("2", "30")]

    def test_zero_trials(self, capsys):
        code, _, err = run(capsys, "experiment", "exp2", "--trials", "0")
        assert code == 1 and "trials" in err


def test_reruns_byte_identical(capsys, tmp_path):
    outputs = []
    for i in range(2):
        path = tmp_path / f"e{i}.tsv"
        assert main(["experiment", "exp1", "--k", "2", "--g", "5", "--target", "930", "--trials", "2",
                     "--output", str(path)]) == 0
        outputs.append(path.read_bytes())
    assert outputs[0] == outputs[1]

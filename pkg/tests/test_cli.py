import json
import re
from pathlib import Path

import pytest

from selfcomp.cli import main
from selfcomp.corpus import corpus_dir, golden_traces, read_text

GOLDEN = Path(__file__).parent / "golden"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def bdl(tmp_path):
    def write(text, name="t.bdl"):
        path = tmp_path / name
        path.write_text(text)
        return path
    return write


class TestFlatten:
    def test_user_get_name(self, capsys):
        code, out, _ = run(capsys, "flatten", corpus_dir() / "read_features.bdl", "User.getName")
        assert code == 0
        assert out == (GOLDEN / "flatten_user_getName.json").read_text()
        assert json.loads(out) == golden_traces()["read_features"]["User.getName"]

    def test_primitives(self, capsys, bdl):
        code, out, _ = run(capsys, "flatten", bdl("behavior A { add a as b }"), "A", "--primitives")
        assert code == 0 and json.loads(out) == [["b", "a"]]

    def test_unknown_behavior_is_usage_error(self, capsys):
        code, _, err = run(capsys, "flatten", corpus_dir() / "read_features.bdl", "Nope")
        assert code == 2 and "no behavior named" in err

    def test_strict_rejects_unknown_primitive(self, capsys, bdl):
        path = bdl("behavior A { add frobnicate }")
        assert run(capsys, "flatten", path, "A")[0] == 0
        code, _, err = run(capsys, "flatten", path, "A", "--strict")
        assert code == 1 and "error[UnknownPrimitive]" in err


class TestTree:
    def test_dot_golden(self, capsys):
        code, out, _ = run(capsys, "tree", corpus_dir() / "db_hierarchy.bdl", "--dot")
        assert code == 0
        assert out == (GOLDEN / "db_hierarchy.dot").read_text()

    def test_dot_edges_match_source(self, capsys):
        # edges read straight off the extends clauses, independently of the loader
        expected = set(re.findall(r"behavior (\w+) extends (\w+)", read_text("db_hierarchy.bdl")))
        _, out, _ = run(capsys, "tree", corpus_dir() / "db_hierarchy.bdl", "--dot")
        edges = {(c, p) for p, c in re.findall(r'"(\w+)" -> "(\w+)";', out)}
        assert edges == expected and len(edges) == 14

    def test_text(self, capsys, bdl):
        _, out, _ = run(capsys, "tree", bdl("behavior A behavior B extends A"))
        assert out == "A\n  B\n"


class TestLint:
    def test_clean(self, capsys):
        code, out, err = run(capsys, "lint", corpus_dir() / "read_features.bdl")
        assert (code, out, err) == (0, "", "")

    def test_bad_file(self, capsys, bdl):
        path = bdl("behavior A {\n  add a\n  delete missing\n}\n", "bad.bdl")
        code, _, err = run(capsys, "lint", path)
        assert code == 1
        (line,) = err.splitlines()
        assert line == f"{path}:3:3: error[UnknownAnchor]: A has no step 'missing'"

    def test_warnings_only(self, capsys, bdl):
        code, _, err = run(capsys, "lint", bdl("trait t { a: null }"))
        assert code == 0 and "warning[UnusedTrait]" in err

    def test_syntax_error(self, capsys, bdl):
        code, _, err = run(capsys, "lint", bdl("behavior X extends\n"))
        assert code == 1 and ":1:19: error[Syntax]" in err

    def test_missing_file(self, capsys, tmp_path):
        code, _, err = run(capsys, "lint", tmp_path / "nope.bdl")
        assert code == 2 and "cannot read" in err


class TestExec:
    def test_trace(self, capsys):
        code, out, _ = run(capsys, "exec", corpus_dir() / "write_lifecycle.bdl", "CreatePost", "--trace")
        assert code == 0
        trace, result = map(json.loads, out.splitlines())
        assert trace == result == golden_traces()["write_lifecycle"]["CreatePost"]

    def test_input(self, capsys, bdl):
        code, out, _ = run(capsys, "exec", bdl("behavior A { add a }"), "A", "--input", '["x"]')
        assert code == 0 and json.loads(out) == ["x", "a"]

    def test_non_list_input_aborts(self, capsys, bdl):
        code, out, err = run(capsys, "exec", bdl("behavior A { add a add b }"), "A", "--input", "3", "--trace")
        assert code == 1
        assert json.loads(out) == ["a"]
        assert "error[StepError]: step a failed" in err

    @pytest.mark.parametrize("value", ["{bad", "1.5", "true"])
    def test_bad_input(self, capsys, bdl, value):
        assert run(capsys, "exec", bdl("behavior A"), "A", "--input", value)[0] == 2

    def test_lowering_error(self, capsys, bdl):
        code, _, err = run(capsys, "exec", bdl("behavior A {\n delete x }"), "A")
        assert code == 1 and ":2:2: error[UnknownAnchor]" in err


class TestAnalysis:
    def test_fit_self(self, capsys):
        code, out, err = run(capsys, "fit", "--data", corpus_dir() / "growth_self.csv", "--project", "4,5")
        assert code == 0 and "ln(y)" in err
        record = json.loads(out)
        assert record["a"] == pytest.approx(2.0) and record["b"] == pytest.approx(1.6094, abs=1e-4)
        assert record["r2"] == 1.0
        assert [p["level"] for p in record["projections"]] == [4, 5]
        assert [p["value"] for p in record["projections"]] == pytest.approx([1250, 6250])

    def test_fit_aop(self, capsys):
        _, out, _ = run(capsys, "fit", "--data", corpus_dir() / "growth_aop.csv")
        record = json.loads(out)
        assert record["a"] == pytest.approx(2.8845, abs=1e-3)
        assert record["projections"] == []

    def test_fit_bad_data(self, capsys, tmp_path):
        path = tmp_path / "g.csv"
        path.write_text("level,parents,children,refinement_sloc\n1,1,1,1\n")
        code, _, err = run(capsys, "fit", "--data", path)
        assert code == 2 and "InsufficientData" in err

    def test_growth(self, capsys):
        code, out, _ = run(capsys, "growth", "--parents", "1,2,5", "--children", "2,5,10", "--refine", "5")
        assert code == 0
        record = json.loads(out)
        assert [r["total"] for r in record["rows"]] == [10, 50, 250]
        assert record["fit"]["r2"] == 1.0

    def test_growth_single_row_has_no_fit(self, capsys):
        _, out, _ = run(capsys, "growth", "--parents", "3", "--children", "4", "--refine", "5")
        assert json.loads(out) == {"rows": [
            {"level": 1, "parents": 3, "children": 4, "refinement_sloc": 5, "total": 60}
        ]}

    def test_growth_mismatched_lengths(self, capsys):
        code, _, err = run(capsys, "growth", "--parents", "1,2", "--children", "1,2,3", "--refine", "5")
        assert code == 2 and "--parents" in err

    def test_bad_int_list(self, capsys):
        with pytest.raises(SystemExit) as info:
            main(["growth", "--parents", "x", "--children", "1", "--refine", "1"])
        assert info.value.code == 2


class TestCorpus:
    def test_verify(self, capsys):
        code, out, _ = run(capsys, "corpus", "verify")
        assert code == 0
        assert out.splitlines()[-1] == "8/8 features match their golden traces"

    def test_path(self, capsys):
        _, out, _ = run(capsys, "corpus", "path")
        assert Path(out.strip()) == corpus_dir()

    def test_usage(self, capsys):
        with pytest.raises(SystemExit) as info:
            main([])
        assert info.value.code == 2

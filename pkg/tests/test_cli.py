import json

import pytest

from germlab.cli import main


def write(tmp_path, name, doc):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


@pytest.fixture
def class6(tmp_path):
    return write(tmp_path, "class6.json", {"n": 2, "r": 2, "field": "real",
                                           "entries": [["x1", "x2^2"], [None, "x1^2"]]})


@pytest.fixture
def diag(tmp_path):
    return write(tmp_path, "diag.json", {"n": 2, "r": 2, "entries": [["x1", "0"], [None, "x2"]]})


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


class TestExamples:
    def test_codim(self, capsys, class6):
        code, out = run(capsys, "codim", "--in", class6, "--dmax", "8")
        rep = json.loads(out)
        assert code == 0 and rep["Ge"]["codim"] == 6 and rep["Ge"]["stabilized"]

    def test_qh(self, capsys, diag):
        code, out = run(capsys, "qh", "--in", diag)
        rep = json.loads(out)
        assert code == 0 and rep["qh_check"] is True

    def test_table4_suite(self, capsys):
        code, out = run(capsys, "tables", "--suite", "table4")
        rep = json.loads(out)
        assert code == 0 and rep["failed"] == 0 and rep["cases"] > 0

    def test_classify_with_expected_class(self, capsys, tmp_path):
        path = write(tmp_path, "c.json", {"entries": [["x2", "x1"], [None, "x2^3"]], "expected_class": 3,
                                          "name": "swapped cusp"})
        code, out = run(capsys, "classify", "--in", path)
        rep = json.loads(out)
        assert code == 0 and rep["name"] == "swapped cusp" and rep["expected_matches"]

    def test_complex_field_flag(self, capsys, tmp_path):
        path = write(tmp_path, "c.json", {"entries": [["x1", "0"], [None, "x1*x2 - x2^3"]]})
        code, out = run(capsys, "classify", "--in", path, "--field", "complex")
        assert code == 0 and json.loads(out)["class"] == "8"

    def test_thm27(self, capsys, class6):
        code, out = run(capsys, "thm27", "--in", class6)
        assert code == 0 and json.loads(out)["holds"] is True

    def test_split(self, capsys):
        code, out = run(capsys, "split", "8")
        assert code == 0 and json.loads(out)["splits"] is True

    def test_signature_plot(self, capsys, diag, tmp_path):
        svg = tmp_path / "fold.svg"
        code, _ = run(capsys, "signature", "--in", diag, "--grid-step", "1/20", "--plot", str(svg))
        assert code == 0 and svg.read_text().startswith("<svg")

    def test_out_file_prints_summary(self, capsys, class6, tmp_path):
        target = tmp_path / "report.json"
        code, out = run(capsys, "milnor", "--in", class6, "--out", str(target))
        assert code == 0 and out.strip() == "mu(det) = 6"
        assert json.loads(target.read_text())["dimension"] == 6


class TestExitCodes:
    def test_unresolved(self, capsys, tmp_path):
        path = write(tmp_path, "z.json", {"entries": [["x1^2", "0"], [None, "x2^2"]]})
        assert run(capsys, "classify", "--in", path)[0] == 1

    @pytest.mark.parametrize("doc", [{"entries": [["x1", "x2"], ["x1", 1]]}, {"entries": "x1"},
                                     {"n": 3, "entries": [["x1", "0"], [None, "x2"]]},
                                     {"entries": [["x1 +", "0"], [None, "x2"]]},
                                     {"field": "p-adic", "entries": [["x1", "0"], [None, "x2"]]},
                                     ["not", "an", "object"]])
    def test_malformed_documents(self, capsys, tmp_path, doc):
        assert run(capsys, "det", "--in", write(tmp_path, "bad.json", doc))[0] == 2

    def test_missing_file(self, capsys, tmp_path):
        assert run(capsys, "det", "--in", str(tmp_path / "absent.json"))[0] == 2

    def test_unknown_command(self, capsys):
        assert main(["bogus"]) == 2

    def test_unknown_flag(self, capsys, diag):
        assert main(["det", "--in", diag, "--colour"]) == 2

    def test_unknown_suite(self, capsys):
        assert main(["tables", "--suite", "table9"]) == 2

    def test_missing_witness(self, capsys, diag):
        assert main(["witness", "--in", diag]) == 2

    def test_help(self, capsys):
        assert main(["--help"]) == 0


@pytest.mark.parametrize("command", ["classify", "codim", "tangent-dim", "transversal", "qh", "sqh-obstruct", "lda",
                                     "divmod", "orient-search", "det", "milnor", "koszul", "thm27", "signature"])
def test_reports_are_byte_identical(capsys, class6, command):
    argv = [command, "--in", class6, "--degree", "3"] + (["--grid-step", "1/20"] if command == "signature" else [])
    first, second = run(capsys, *argv), run(capsys, *argv)
    assert first == second and first[0] == 0

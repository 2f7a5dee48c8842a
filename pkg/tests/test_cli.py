import io
import json

import pytest

from quatclass.cli import main, parse_delta_base
from quatclass.corpus import CorpusParseError, parse_corpus
from quatclass.numberfield import InputError


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out)
    return code, out.getvalue()


def run_json(*argv):
    code, text = run("--json", "--no-timing", *argv)
    return code, json.loads(text) if text else None


def test_field_document():
    code, doc = run_json("field", "7")
    assert code == 0
    assert (doc["h"], doc["h_plus"], doc["unit_norm"], doc["disc"]) == (1, 2, 1, 28)
    assert doc["zeta_minus_one"] == "2/3"


def test_anchor_fibers():
    code, doc = run_json("fibers", "d=7", "algebra=unramified")
    assert code == 0
    assert doc["total"] == 3
    assert doc["divisibility"]["h_plus_divides"] is False
    assert doc["divisibility"]["expected_negative"] is True
    assert doc["timing_ms"] is None
    assert doc["provenance"]["catalog"]["O(F(i))"].startswith("computed")


def test_json_is_sorted_and_byte_stable():
    a = run("--json", "--no-timing", "fibers", "d=15", "algebra=unramified")[1]
    b = run("--json", "--no-timing", "fibers", "d=15", "algebra=unramified")[1]
    assert a == b
    doc = json.loads(a)
    assert list(doc) == sorted(doc)


def test_classno_table_output():
    code, text = run("--no-timing", "classno", "d=7", "algebra=unramified", "level=3.1")
    assert code == 0
    assert any(line.split()[:2] == ["total", "4"] for line in text.splitlines())


def test_oracle_command():
    code, doc = run_json("oracle", "d=1", "algebra=ramified:11")
    assert code == 0
    assert doc["classes"] == 2 and doc["mass"] == "5/6"


def test_oracle_rejects_other_fields():
    assert run("oracle", "d=7", "algebra=unramified")[0] == 2


def test_catalog_command():
    code, doc = run_json("catalog", "7")
    assert code == 0
    assert [(m["label"], m["h"], m["w"]) for m in doc["members"]][:2] == [("O(F(i))", 1, 4), ("O(F(i), f=2)", 1, 4)]
    assert doc["notes"]


@pytest.mark.parametrize("argv", [
    ["fibers", "d=x", "algebra=unramified"],
    ["fibers", "d=4", "algebra=unramified"],
    ["fibers", "d=7", "algebra=split"],
    ["fibers", "d=7"],
    ["fibers", "d=7", "algebra=unramified", "colour=red"],
    ["--delta-base", "2", "fibers", "d=7", "algebra=unramified"],
    ["nosuch"],
    ["field", "8"],
])
def test_input_errors_exit_2(argv):
    assert run(*argv)[0] == 2


def test_budget_exceeded_is_input_error():
    assert run("--budget", "1", "catalog", "5")[0] == 2


def test_curated_table_fills_budget_gap(tmp_path):
    table = tmp_path / "t.csv"
    table.write_text("5, F(zeta5), 1, 1, 5, f=1 curated\n")
    code, doc = run_json("--budget", "1", "--curated-table", str(table), "catalog", "5")
    assert code == 0
    z5 = next(m for m in doc["members"] if m["extension"] == "F(zeta5)")
    assert (z5["h"], z5["provenance"]) == (1, "curated")


def test_delta_base_parsing():
    assert parse_delta_base(None) == 1
    assert parse_delta_base("0") == 0
    assert parse_delta_base("F(i)=0,F(zeta3)=1") == {"F(i)": 0, "F(zeta3)": 1}
    with pytest.raises(InputError):
        parse_delta_base("F(i)")
    with pytest.raises(InputError):
        parse_delta_base("F(i)=3")


def test_delta_base_recorded():
    code, doc = run_json("--delta-base", "0", "fibers", "d=3", "algebra=unramified")
    assert code == 0
    assert doc["assumptions"]["delta_base"] == {"F(i)": 0}
    assert doc["total"] == 2


def test_corpus_parse_errors_carry_position():
    with pytest.raises(CorpusParseError) as e:
        parse_corpus("# ok\ncase a d=7 algebra=unramified\ncase b d=7 algebra=unramified levl=3.1\n")
    assert (e.value.line, e.value.col) == (3, 31)
    with pytest.raises(CorpusParseError) as e:
        parse_corpus("case a d=7 algebra=unramified\ncase a d=3 algebra=unramified\n")
    assert (e.value.line, e.value.col) == (2, 6)
    with pytest.raises(CorpusParseError) as e:
        parse_corpus("  run a d=7\n")
    assert (e.value.line, e.value.col) == (1, 3)


def test_verify_reports_parse_error(tmp_path, capsys):
    corpus = tmp_path / "c.txt"
    corpus.write_text("case a d=7 algebra=unramified expect_total=three\n")
    assert run("verify", str(corpus))[0] == 2
    assert "line 1, column 31" in capsys.readouterr().err


def test_verify_failed_expectation_exits_1(tmp_path):
    corpus = tmp_path / "c.txt"
    corpus.write_text("case good d=7 algebra=unramified expect_total=3\n"
                      "case bad d=7 algebra=unramified expect_total=4\n")
    code, doc = run_json("verify", str(corpus))
    assert code == 1
    assert [r["status"] for r in doc["results"]] == ["pass", "fail"]
    assert doc["exit_code"] == 1


def test_verify_unsupported_is_not_a_failure(tmp_path):
    corpus = tmp_path / "c.txt"
    corpus.write_text("case clash d=7 algebra=unramified level=2\n")
    code, doc = run_json("verify", str(corpus))
    assert code == 0
    assert doc["results"][0]["status"] == "unsupported"


def test_verify_jobs_keep_case_order(tmp_path):
    corpus = tmp_path / "c.txt"
    corpus.write_text("case z d=15 algebra=unramified\ncase y d=1 algebra=ramified:11\n"
                      "case x d=7 algebra=unramified\ncase w d=3 algebra=unramified\n")
    one = run("--json", "--no-timing", "verify", str(corpus))
    two = run("--json", "--no-timing", "--jobs", "2", "verify", str(corpus))
    assert one == two
    assert [r["case"] for r in json.loads(one[1])["results"]] == ["z", "y", "x", "w"]


def test_verify_default_corpus():
    code, doc = run_json("verify")
    assert code == 0
    assert all(r["status"] == "pass" for r in doc["results"])
    assert len(doc["results"]) == 20

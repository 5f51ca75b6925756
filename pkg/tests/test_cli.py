import json

import pytest

from nilact.app import main
from nilact.cli.render import format_value, render_report
from nilact.cli.suite import CHECKS
from nilact.core.config import settings
from nilact.core.errors import EXIT_OK, EXIT_USAGE
from nilact.schemas.report import Outcome, VerificationReport, seal_reports

MINI = """\
group C2 perm 2 : (0 1)
group S3 perm 3 : (0 1) (0 1 2)
abgroup Z4 : 4
action x3-Z4 C2 on Z4 : 0->[3]
fixture note : a book : a cited value
"""


@pytest.fixture
def mini(tmp_path):
    path = tmp_path / "mini.catalog"
    path.write_text(MINI)
    return str(path)


def test_format_value():
    assert format_value(True) == "true"
    assert format_value([1, 2]) == "[1,2]"
    assert format_value({"b": 1, "a": 2}) == '{"a":2,"b":1}'
    assert format_value("plain") == "plain"
    assert format_value("two words") == '"two words"'


def test_render_failure_with_witness():
    (r,) = seal_reports([VerificationReport(check="axioms", instance="G", outcome=Outcome.FAIL, witness={"axiom": "inverse"})])
    lines = render_report(r)
    assert lines[0].startswith("check=axioms instance=G outcome=fail digest=")
    assert lines[1] == "  witness axiom=inverse"


def test_render_puts_label_after_outcome():
    (r,) = seal_reports([VerificationReport(check="witt-hall", label="Lemma jo", instance="x3-Z4", outcome=Outcome.PASS)])
    assert render_report(r)[0].startswith('check=witt-hall instance=x3-Z4 outcome=pass label="Lemma jo" digest=')


def test_lcs_of_s3(mini, capsys):
    assert main(["--catalog", mini, "lcs", "S3"]) == EXIT_OK
    out = capsys.readouterr().out.splitlines()
    assert out[0] == 'series=S3 verdict="StabilizedNontrivial 1" orders=[6,3]'
    assert out[1].startswith("  term=0 order=6")


def test_series_of_action(mini, capsys):
    assert main(["--catalog", mini, "series", "x3-Z4"]) == EXIT_OK
    assert 'verdict="NilpotentOfOrder 2"' in capsys.readouterr().out


def test_frattini_command(capsys):
    assert main(["frattini", "Z8xZ2"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "factor order=4" in out
    assert "tensor=Z2^2 prime=2" in out


def test_localize_and_eshp(capsys):
    assert main(["localize", "Z4xZ3", "--prime", "2"]) == EXIT_OK
    assert "order=4" in capsys.readouterr().out
    assert main(["eshp", "Z4", "--prime", "2"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "order=2" in out
    assert "[3]" in out


def test_aut_command(capsys):
    assert main(["aut", "Z2^2"]) == EXIT_OK
    assert "automorphisms=6" in capsys.readouterr().out


def test_verify_text_and_json(mini, capsys):
    assert main(["--catalog", mini, "verify", "--scope", "axioms"]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert [line.split()[1] for line in lines] == ["instance=C2", "instance=S3", "instance=Z4"]
    assert all("outcome=pass" in line for line in lines)

    assert main(["--catalog", mini, "verify", "--scope", "axioms", "--json", "--timings"]) == EXIT_OK
    records = [json.loads(line) for line in capsys.readouterr().out.splitlines()]
    assert [r["instance"] for r in records] == ["C2", "S3", "Z4"]
    assert all(r["wall_time"] is not None for r in records)


def test_verify_empty_scope(mini, capsys):
    assert main(["--catalog", mini, "verify", "--scope", "no-such-check"]) == EXIT_OK
    assert capsys.readouterr().out == ""


def test_catalog_print(mini, capsys):
    assert main(["--catalog", mini, "catalog", "print"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "name=note kind=fixture provenance=paper-sourced citation=\"a book\"" in out
    assert '  value="a cited value"' in out


def test_provenance_lists_every_check(capsys):
    assert main(["provenance"]) == EXIT_OK
    out = capsys.readouterr().out.splitlines()
    assert len(out) == len(CHECKS)
    assert out[0].startswith('check=axioms label="Oracle group-axioms" operation=check_axioms')
    assert any(line.startswith('check=ext-tensor label="Remark importante"') for line in out)


def test_parse_errors_exit_with_usage(tmp_path, capsys):
    path = tmp_path / "bad.catalog"
    path.write_text("group C2 perm 2 : (0 1)\nsubgroup X\n")
    assert main(["--catalog", str(path), "provenance"]) == EXIT_USAGE
    assert capsys.readouterr().err.startswith("error: line 2, column 1: ")


def test_domain_errors_exit_with_usage(mini, capsys):
    assert main(["--catalog", mini, "localize", "S3", "--prime", "2"]) == EXIT_USAGE
    assert "not nilpotent" in capsys.readouterr().err
    assert main(["--catalog", mini, "localize", "Z4", "--prime", "4"]) == EXIT_USAGE
    assert "not a prime" in capsys.readouterr().err
    assert main(["--catalog", mini, "lcs", "missing"]) == EXIT_USAGE


def test_missing_catalog_file(tmp_path, capsys):
    assert main(["--catalog", str(tmp_path / "none.catalog"), "provenance"]) == EXIT_USAGE
    assert capsys.readouterr().err.startswith("error: ")


def test_cap_override(mini, monkeypatch, capsys):
    monkeypatch.setattr(settings, "cap", settings.cap)
    with pytest.raises(SystemExit):
        main(["--cap", "0", "lcs", "S3"])
    assert main(["--cap", "3", "--catalog", mini, "lcs", "S3"]) == EXIT_USAGE
    assert "order cap 3" in capsys.readouterr().err

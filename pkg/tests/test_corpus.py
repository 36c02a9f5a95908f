from koszulpole.cli import main
from koszulpole.corpus import corpus_files, load_corpus, run_entry, verify_corpus


def test_corpus_has_entries_with_sources():
    entries = load_corpus()
    assert len(entries) == len(corpus_files()) >= 14
    for e in entries:
        assert e["citation"]
        assert all(c["source"] for c in e["checks"])


def test_full_corpus_passes():
    summary = verify_corpus()
    assert summary.passed, "\n".join(summary.lines())


def test_fp3_limit_recorded_not_computed():
    (fp3,) = [e for e in load_corpus() if e["id"].startswith("fp3")]
    values = {(n["quantity"], n["index"]): n["value"] for n in fp3["reported_not_computed"]}
    assert values[("E3", "2,0")] == 14
    assert values[("E3", "1,1")] == 4
    assert run_entry(fp3).not_computed


def test_rational_pair_present():
    (pair,) = [e for e in load_corpus() if "compare_with" in e]
    assert pair["job"]["poly"] != pair["compare_with"]["poly"]
    assert run_entry(pair).passed


def test_wrong_expectation_is_reported():
    entry = {"id": "bad", "citation": "test", "job": {"poly": "x^4+y^4+z^4", "nvars": 3},
             "checks": [{"quantity": "tau", "value": 1, "source": "deliberately wrong"}]}
    res = run_entry(entry)
    assert not res.passed and "tau" in res.failures[0]


def test_verify_corpus_command(capsys):
    assert main(["verify-corpus"]) == 0
    out = capsys.readouterr().out
    assert "FAIL" not in out
    assert "not_computed" in out

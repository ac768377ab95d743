"""Golden corpus: exact stdout/stderr bytes and exit codes, stable across runs."""

import json
from pathlib import Path

import pytest

from bitt.cli import main

GOLD = Path(__file__).parent / "golden"
CASES = json.loads((GOLD / "manifest.json").read_text())


def _run_case(case, capsys, monkeypatch):
    for k, v in case.get("env", {}).items():
        monkeypatch.setenv(k, v)
    argv = [a.replace("{DIR}", str(GOLD)) for a in case["argv"]]
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


@pytest.mark.parametrize("case", CASES, ids=[c["name"] for c in CASES])
def test_golden_case(case, capsys, monkeypatch):
    expected_out = (GOLD / f"{case['name']}.out").read_text()
    expected_err = (GOLD / f"{case['name']}.err").read_text()
    code, out, err = _run_case(case, capsys, monkeypatch)
    assert code == case["exit"]
    assert out == expected_out
    assert err == expected_err
    # bit-stability: a second run must produce identical bytes
    code2, out2, err2 = _run_case(case, capsys, monkeypatch)
    assert (code2, out2, err2) == (code, out, err)


def test_corpus_shape():
    files = sorted(p.name for p in GOLD.glob("*.bitt"))
    assert len(files) >= 25
    negatives = [c for c in CASES if c["name"].startswith("neg_")]
    assert len(negatives) >= 8
    # every TypeCheckError kind is exercised by the corpus, with the unbound
    # case surfacing as the parser's UnboundName
    blob = "".join((GOLD / f"{c['name']}.err").read_text() for c in CASES)
    for kind in (
        "CumulFailed",
        "NotASort",
        "NotAProduct",
        "NotASigma",
        "NotANat",
        "NotAnEq",
        "FuelExhausted",
        "UnboundName",
    ):
        assert kind in blob, kind

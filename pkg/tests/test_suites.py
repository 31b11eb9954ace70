import json

import pytest

from frhankel.errors import ValidationError
from frhankel.suites import SUITES, CaseResult, SuiteReport, run_suite


@pytest.mark.parametrize("name", ["ineq119", "leibniz", "lemma17", "decay", "growth", "oracle"])
def test_fast_suites_pass(name):
    rep = run_suite(name)
    assert rep.passed and rep.cases
    json.dumps(rep.as_dict(), allow_nan=False)


def test_sequence_suite_flags_divergent_family():
    rep = run_suite("sequences", seq=["factorial_pow:1"])
    assert not rep.passed
    assert rep.worst.case == "factorial_pow:1,axiom5"
    assert run_suite("sequences").passed


def test_worst_case_selection():
    cases = [CaseResult("a", 1e-9, 1e-8, True), CaseResult("b", 5e-7, 1e-6, True),
             CaseResult("c", 2.0, 1.0, True, relation=">")]
    assert SuiteReport("x", cases).worst.case == "b"
    cases.append(CaseResult("d", 3.0, 1.0, False))
    assert SuiteReport("x", cases).worst.case == "d"


def test_unknown_suite():
    with pytest.raises(ValidationError):
        run_suite("nope")
    assert {"lemma17", "parseval", "roundtrip", "leibniz", "ineq119", "sequences",
            "cwt-crosspath", "decay", "growth"} <= set(SUITES)

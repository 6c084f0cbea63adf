from fractions import Fraction
import json

import pytest

from nucembed.classify import (
    BOUNDARY_NOTE,
    ESTIMATE_NOTE,
    ClassifierError,
    DomainInfo,
    FunctionSpaceParams,
    classify_bounded_domain,
    classify_quasi_bounded,
    classify_sequence_embedding,
    delta,
    verdict_record,
    verdict_report,
)
from nucembed.geometry import BExponentEstimate
from nucembed.spaces import GrowthFamily


def fs(s, p, q=2, d=2, scale="B"):
    return FunctionSpaceParams(scale, Fraction(s), p, q, d)


def test_delta():
    assert delta(fs(2, 2), fs(0, 2)) == 2
    assert delta(fs(3, 1), fs(0, "inf")) == 1
    assert delta(fs(1, 3), fs(1, 3)) == 0
    with pytest.raises(ClassifierError):
        delta(fs(1, 2, d=2), fs(0, 2, d=3))


def test_bounded_examples():
    v = classify_bounded_domain(fs(3, 2), fs(0, 2))
    assert (v.compact, v.nuclear, v.threshold_nuclear) == ("yes", "yes", 2)
    v = classify_bounded_domain(fs(1, 2), fs(0, 2))
    assert (v.compact, v.nuclear, v.threshold_compact) == ("yes", "no", 0)
    v = classify_bounded_domain(fs(1, 1, d=1), fs(0, "inf", d=1))
    assert (v.compact, v.nuclear) == ("no", "no")


def test_quasi_examples():
    v = classify_quasi_bounded(fs(3, 1), fs(0, "inf"), DomainInfo("quasi_bounded_infinite_b"))
    assert v.nuclear == "yes" and v.rule_id == "thm:nuclear-quasi(i)"
    v = classify_quasi_bounded(fs(2, 2), fs(0, 2), DomainInfo("quasi_bounded_finite_b", 3))
    assert (v.compact, v.nuclear) == ("yes", "no")
    for p in (1, 2, 3):
        v = classify_quasi_bounded(fs(9, p, scale="F"), fs(0, 4, scale="F"), DomainInfo("quasi_bounded_infinite_b"))
        assert v.nuclear == "no" and v.rule_id == "cor:F-never-nuclear"


def test_boundary_cases_are_honest():
    dom = DomainInfo("quasi_bounded_finite_b", 3)
    v = classify_quasi_bounded(fs(3, 2), fs(0, 2), dom)
    assert v.nuclear == "undetermined" and BOUNDARY_NOTE in v.notes
    assert v.margin == 0
    v = classify_quasi_bounded(fs(3, 2), fs(0, 2), DomainInfo("quasi_bounded_finite_b", 3, True))
    assert v.nuclear == "no" and v.rule_id == "rem:limsup-boundary"


def test_never_compact():
    v = classify_quasi_bounded(fs(5, 2), fs(0, 2), DomainInfo("not_quasi_bounded"))
    assert (v.compact, v.nuclear, v.rule_id) == ("no", "no", "rem:never-compact")


def test_input_errors():
    with pytest.raises(ClassifierError):
        classify_quasi_bounded(fs(0, 2), fs(0, 2), DomainInfo("quasi_bounded_finite_b", 3))
    with pytest.raises(ClassifierError):
        fs(1, "inf", scale="F")
    with pytest.raises(ClassifierError):
        DomainInfo("quasi_bounded_finite_b")
    with pytest.raises(ClassifierError):
        classify_quasi_bounded(fs(3, 2), fs(0, 2), DomainInfo("quasi_bounded_finite_b", 1))
    with pytest.raises(ClassifierError):
        classify_bounded_domain(fs(3, "1/2"), fs(0, 2), query="nuclear")


def test_quasi_exponents_compact_only():
    v = classify_bounded_domain(fs(4, "1/2"), fs(0, 2))
    assert v.compact == "yes" and v.nuclear == "not_applicable"
    assert v.rule_id == "prop:bounded-compact"


def test_estimated_b():
    est = BExponentEstimate(3.0, 0.01, (7, 10), False)
    dom = DomainInfo("quasi_bounded_finite_b", est)
    v = classify_quasi_bounded(fs(5, 2), fs(0, 2), dom)
    assert v.nuclear == "yes" and ESTIMATE_NOTE in v.notes
    v = classify_quasi_bounded(fs(3, 2), fs(0, 2), dom)
    assert v.nuclear == "undetermined"
    v = classify_quasi_bounded(fs(1, 2), fs(0, 2), dom)
    assert v.nuclear == "no"


def test_sequence_examples():
    G = GrowthFamily
    v = classify_sequence_embedding(G(1), G(0), 2, 2, 2, 2)
    assert (v.compact, v.nuclear) == ("yes", "yes")
    v = classify_sequence_embedding(G(1), G(2), 1, "inf", 1, "inf")
    assert (v.compact, v.nuclear) == ("yes", "yes")
    v = classify_sequence_embedding(G(0, 1), G(0), 2, 2, 1, 1)
    assert (v.compact, v.nuclear) == ("yes", "no")
    with pytest.raises(ClassifierError):
        classify_sequence_embedding(G(1), G(0), "1/2", 2, 2, 2, query="nuclear")


def test_report_is_single_line_json():
    v = classify_quasi_bounded(fs(4, 2), fs(0, 2), DomainInfo("quasi_bounded_finite_b", 3))
    line = verdict_report(v)
    assert "\n" not in line
    rec = json.loads(line)
    assert list(rec)[:9] == ["compact", "nuclear", "rule_id", "delta", "delta_prime",
                             "threshold_compact", "threshold_nuclear", "margin", "margin_compact"]
    assert rec["rule_id"] == "thm:nuclear-quasi(ii)" and Fraction(rec["margin"]) > 0
    assert rec == verdict_record(v)

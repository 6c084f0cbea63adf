"""Compactness and nuclearity verdicts for embeddings.

Every comparison is done in exact rational arithmetic.  A verdict is one
of ``yes``, ``no`` or ``undetermined``: when only a necessary condition is
known and the parameters sit exactly on it, the classifier says so instead
of guessing.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from fractions import Fraction

from .exponents import Exponent, ExponentError, as_exponent, star_exponent, tong_exponent
from .spaces import GrowthFamily

__all__ = [
    "ClassifierError",
    "FunctionSpaceParams",
    "DomainInfo",
    "EmbeddingVerdict",
    "delta",
    "classify_sequence_embedding",
    "classify_bounded_domain",
    "classify_quasi_bounded",
    "classify",
    "verdict_report",
    "verdict_record",
    "BOUNDARY_NOTE",
    "ESTIMATE_NOTE",
]

YES, NO, UNDET, NA = "yes", "no", "undetermined", "not_applicable"
BOUNDARY_NOTE = "boundary case; only necessity is known"
ESTIMATE_NOTE = "estimate-based: b taken as b_hat +/- 2 stderr"
QUASI_NOTE = "nuclearity needs exponents >= 1; only compactness evaluated"

REGIMES = ("bounded_lipschitz", "quasi_bounded_finite_b", "quasi_bounded_infinite_b",
           "not_quasi_bounded", "finite_measure")


class ClassifierError(ValueError):
    pass


@dataclass(frozen=True)
class FunctionSpaceParams:
    """Parameters of ``B^s_{p,q}`` or ``F^s_{p,q}`` on a domain in ``R^d``."""

    scale: str
    s: Fraction
    p: Exponent
    q: Exponent
    d: int

    def __post_init__(self):
        if self.scale not in ("B", "F"):
            raise ClassifierError(f"scale must be 'B' or 'F', got {self.scale!r}")
        object.__setattr__(self, "s", Fraction(self.s))
        object.__setattr__(self, "p", as_exponent(self.p))
        object.__setattr__(self, "q", as_exponent(self.q))
        if int(self.d) != self.d or self.d < 1:
            raise ClassifierError("dimension d must be a positive integer")
        if self.scale == "F" and self.p.is_inf:
            raise ClassifierError("F-scale requires p < inf")

    @property
    def is_banach(self) -> bool:
        return self.p.is_banach and self.q.is_banach


@dataclass(frozen=True)
class DomainInfo:
    """Domain regime.  ``b`` is exact or an estimate exposing ``b_hat``/``stderr``."""

    regime: str
    b: object = None
    limsup_positive: bool | None = None

    def __post_init__(self):
        if self.regime not in REGIMES:
            raise ClassifierError(f"unknown regime {self.regime!r}")
        if self.regime == "quasi_bounded_finite_b":
            if self.b is None:
                raise ClassifierError("finite-b regime needs b")
            if not hasattr(self.b, "b_hat"):
                object.__setattr__(self, "b", Fraction(self.b))

    @property
    def is_estimate(self) -> bool:
        return hasattr(self.b, "b_hat")


@dataclass(frozen=True)
class EmbeddingVerdict:
    compact: str
    nuclear: str
    rule_id: str
    margin: Fraction
    delta: Fraction | None = None
    delta_prime: Fraction | None = None
    threshold_compact: Fraction | None = None
    threshold_nuclear: Fraction | None = None
    margin_compact: Fraction | None = None
    margin_nuclear: Fraction | None = None
    notes: tuple = field(default_factory=tuple)

    def __post_init__(self):
        if self.nuclear == YES and self.compact != YES:
            raise AssertionError("nuclear verdict without compactness")


def delta(src: FunctionSpaceParams, dst: FunctionSpaceParams) -> Fraction:
    """``s1 - d/p1 - s2 + d/p2`` (``d/inf = 0``)."""
    if src.d != dst.d:
        raise ClassifierError(f"dimension mismatch: {src.d} vs {dst.d}")
    d = src.d
    return src.s - d * src.p.inv - dst.s + d * dst.p.inv


def _pos(x: Fraction) -> Fraction:
    return x if x > 0 else Fraction(0)


def _query_mode(query: str, banach: bool, notes: list) -> bool:
    """Whether nuclearity is evaluated."""
    if query not in ("both", "compact", "nuclear"):
        raise ClassifierError(f"query must be both, compact or nuclear, got {query!r}")
    if query == "compact":
        return False
    if not banach:
        if query == "nuclear":
            raise ClassifierError("nuclearity needs Banach spaces: all exponents must be >= 1")
        notes.append(QUASI_NOTE)
        return False
    return True


# ---------------------------------------------------------------------------
# sequence spaces

def _seq_test(beta: GrowthFamily, M: GrowthFamily, r_in: Exponent, r_out: Exponent):
    """Membership of ``beta_j^-1 M_j^{1/r_in}`` in ``l_{r_out}`` and its margin."""
    gamma = -beta.geo + M.geo * r_in.inv
    dlt = -beta.poly + M.poly * r_in.inv
    member = gamma < 0 or (gamma == 0 and dlt < -r_out.inv)
    margin = -gamma if gamma != 0 else -(dlt + r_out.inv)
    return member, margin


def classify_sequence_embedding(beta: GrowthFamily, M: GrowthFamily, p1, p2, q1, q2,
                                query: str = "both") -> EmbeddingVerdict:
    """``id_beta: l_{q1}(beta_j l_{p1}^{M_j}) -> l_{q2}(l_{p2}^{M_j})``.

    Compact iff ``beta_j^-1 M_j^{1/p*}`` lies in ``l_{q*}`` (``c_0`` when
    ``q* = inf``); nuclear iff the same holds with the Tong exponents.
    """
    p1, p2, q1, q2 = (as_exponent(r) for r in (p1, p2, q1, q2))
    if M.geo < 0:
        raise ClassifierError("block growth M must have a non-negative geometric rate")
    notes: list[str] = []
    do_nuc = _query_mode(query, all(r.is_banach for r in (p1, p2, q1, q2)), notes)
    comp, m_comp = _seq_test(beta, M, star_exponent(p1, p2), star_exponent(q1, q2))
    nuc, m_nuc = (None, None)
    if do_nuc:
        nuc, m_nuc = _seq_test(beta, M, tong_exponent(p1, p2), tong_exponent(q1, q2))
    return EmbeddingVerdict(
        compact=YES if comp else NO,
        nuclear=NA if nuc is None else (YES if nuc else NO),
        rule_id="thm:nucl-seq-sp" if do_nuc else "rem:comp-seq-sp",
        margin=m_nuc if do_nuc else m_comp,
        margin_compact=m_comp,
        margin_nuclear=m_nuc,
        notes=tuple(notes),
    )


# ---------------------------------------------------------------------------
# function spaces

def _thresholds(src, dst, b: Fraction):
    """``(b/p*, b/t(p1,p2))`` as exact rationals."""
    return b * star_exponent(src.p, dst.p).inv, b * (1 - _pos(src.p.inv - dst.p.inv))


def _check_pair(src: FunctionSpaceParams, dst: FunctionSpaceParams):
    if src.d != dst.d:
        raise ClassifierError(f"dimension mismatch: {src.d} vs {dst.d}")
    if src.scale != dst.scale:
        raise ClassifierError("source and target must use the same scale")


def classify_bounded_domain(src: FunctionSpaceParams, dst: FunctionSpaceParams,
                            query: str = "both") -> EmbeddingVerdict:
    """Bounded Lipschitz domain.

    Compact iff ``s1 - s2 > d (1/p1 - 1/p2)_+``; nuclear iff
    ``s1 - s2 > d - d (1/p2 - 1/p1)_+``.
    """
    _check_pair(src, dst)
    notes: list[str] = []
    do_nuc = _query_mode(query, src.is_banach and dst.is_banach, notes)
    return _finite_b_verdict(src, dst, Fraction(src.d), True, do_nuc, notes,
                             "prop:bounded-compact", "prop:bounded-nuclear")


def _finite_b_verdict(src, dst, b: Fraction, limsup_positive, do_nuc, notes,
                      rule_c="prop:emb2(ii)", rule_n="thm:nuclear-quasi(ii)") -> EmbeddingVerdict:
    dl = delta(src, dst)
    th_c, th_n = _thresholds(src, dst, b)
    pstar_inf = star_exponent(src.p, dst.p).is_inf
    t_inf = th_n == 0
    m_c = dl - th_c
    notes = list(notes)

    def decide(margin: Fraction, threshold_zero: bool) -> tuple[str, bool]:
        if margin > 0:
            return YES, False
        if margin < 0 or threshold_zero:
            return NO, False
        # equality with a positive threshold: only necessity known in general
        if limsup_positive:
            return NO, True
        return UNDET, False

    compact, lim_c = decide(m_c, pstar_inf)
    nuclear, m_n, lim_n = NA, None, False
    if do_nuc:
        m_n = dl - th_n
        nuclear, lim_n = decide(m_n, t_inf)
    if UNDET in (compact, nuclear):
        notes.append(BOUNDARY_NOTE)
    rule = rule_n if do_nuc else rule_c
    if (lim_n if do_nuc else lim_c) and rule.startswith(("thm:nuclear-quasi", "prop:emb2")):
        rule = "rem:limsup-boundary"
    return EmbeddingVerdict(
        compact=compact, nuclear=nuclear, rule_id=rule,
        margin=m_n if do_nuc else m_c,
        delta=dl, delta_prime=src.s - dst.s - src.d * (src.p.inv - dst.p.inv),
        threshold_compact=th_c, threshold_nuclear=th_n if do_nuc else None,
        margin_compact=m_c, margin_nuclear=m_n, notes=tuple(notes),
    )


def _combine(lo: EmbeddingVerdict, hi: EmbeddingVerdict) -> EmbeddingVerdict:
    """Merge verdicts at both ends of a b-interval: disagreement is undetermined."""
    pick = lambda a, b: a if a == b else UNDET
    notes = tuple(dict.fromkeys(lo.notes + hi.notes + (ESTIMATE_NOTE,)))
    compact, nuclear = pick(lo.compact, hi.compact), pick(lo.nuclear, hi.nuclear)
    return EmbeddingVerdict(
        compact=compact, nuclear=nuclear if compact == YES or nuclear != YES else UNDET,
        rule_id=hi.rule_id, margin=hi.margin, delta=hi.delta, delta_prime=hi.delta_prime,
        threshold_compact=hi.threshold_compact, threshold_nuclear=hi.threshold_nuclear,
        margin_compact=hi.margin_compact, margin_nuclear=hi.margin_nuclear, notes=notes,
    )


def classify_quasi_bounded(src: FunctionSpaceParams, dst: FunctionSpaceParams, dom: DomainInfo,
                           query: str = "both") -> EmbeddingVerdict:
    """Unbounded domains described by their box-packing regime."""
    _check_pair(src, dst)
    if src.s <= dst.s:
        raise ClassifierError("need s1 > s2 on unbounded domains")
    notes: list[str] = []
    do_nuc = _query_mode(query, src.is_banach and dst.is_banach, notes)
    d = src.d
    dl = delta(src, dst)
    F = src.scale == "F"

    if dom.regime == "bounded_lipschitz":
        return classify_bounded_domain(src, dst, query)

    if dom.regime == "not_quasi_bounded":
        notes.append("domain is not quasi-bounded: embedding never compact")
        return EmbeddingVerdict(NO, NO if do_nuc else NA, "rem:never-compact", Fraction(0),
                                delta=dl, delta_prime=dl, notes=tuple(notes))

    if dom.regime == "finite_measure":
        # b = d, and b_j 2^{-jd} tends to the (positive) measure
        v = _finite_b_verdict(src, dst, Fraction(d), True, do_nuc, notes)
        return _retag(v, "rem:finite-measure")

    if dom.regime == "quasi_bounded_infinite_b":
        structural_c = src.p.inv >= dst.p.inv
        m_c = dl
        compact = YES if structural_c and dl > 0 else NO
        if not structural_c:
            m_c = Fraction(0)
            notes.append("p1 > p2: no compact embedding when b is infinite")
        nuclear, m_n, rule = NA, None, "prop:emb2(i)"
        if do_nuc:
            if F:
                nuclear, m_n, rule = NO, Fraction(0), "cor:F-never-nuclear"
                notes.append("F-scale with infinite b: never nuclear")
            else:
                rule = "thm:nuclear-quasi(i)"
                if src.p == Exponent.of(1) and dst.p.is_inf:
                    m_n = src.s - dst.s - d
                    nuclear = YES if m_n > 0 else NO
                else:
                    m_n, nuclear = Fraction(0), NO
                    notes.append("infinite b: nuclear only for p1 = 1, p2 = inf")
        if nuclear == YES and compact != YES:
            raise AssertionError("inconsistent infinite-b verdict")
        return EmbeddingVerdict(compact, nuclear, rule, m_n if do_nuc else m_c, delta=dl, delta_prime=dl,
                                threshold_compact=Fraction(0),
                                threshold_nuclear=Fraction(0) if do_nuc else None,
                                margin_compact=m_c, margin_nuclear=m_n, notes=tuple(notes))

    # finite b
    rule_n = "cor:F-quasi" if F else "thm:nuclear-quasi(ii)"
    if not dom.is_estimate:
        if dom.b < d:
            raise ClassifierError(f"b = {dom.b} below the dimension d = {d}")
        return _finite_b_verdict(src, dst, dom.b, dom.limsup_positive, do_nuc, notes, rule_n=rule_n)
    est = dom.b
    b_hat, se = Fraction(float(est.b_hat)), Fraction(float(est.stderr))
    b_lo = max(Fraction(d), b_hat - 2 * se)
    b_hi = max(Fraction(d), b_hat + 2 * se)
    lo = _finite_b_verdict(src, dst, b_lo, None, do_nuc, notes, rule_n=rule_n)
    hi = _finite_b_verdict(src, dst, b_hi, None, do_nuc, notes, rule_n=rule_n)
    return _combine(lo, hi)


def _retag(v: EmbeddingVerdict, rule: str) -> EmbeddingVerdict:
    return replace(v, rule_id=rule)


def classify(src: FunctionSpaceParams, dst: FunctionSpaceParams, dom: DomainInfo | None = None,
             query: str = "both") -> EmbeddingVerdict:
    """Dispatch on the domain regime (bounded Lipschitz when ``dom`` is None)."""
    if dom is None or dom.regime == "bounded_lipschitz":
        return classify_bounded_domain(src, dst, query)
    return classify_quasi_bounded(src, dst, dom, query)


# ---------------------------------------------------------------------------

def _fmt(x):
    return None if x is None else str(x)


def verdict_record(v: EmbeddingVerdict) -> dict:
    """Ordered plain record (rationals as exact strings)."""
    return {
        "compact": v.compact,
        "nuclear": v.nuclear,
        "rule_id": v.rule_id,
        "delta": _fmt(v.delta),
        "delta_prime": _fmt(v.delta_prime),
        "threshold_compact": _fmt(v.threshold_compact),
        "threshold_nuclear": _fmt(v.threshold_nuclear),
        "margin": _fmt(v.margin),
        "margin_compact": _fmt(v.margin_compact),
        "margin_nuclear": _fmt(v.margin_nuclear),
        "notes": list(v.notes),
    }


def verdict_report(v: EmbeddingVerdict) -> str:
    """Single-line JSON object with a stable field order."""
    return json.dumps(verdict_record(v), separators=(", ", ": "))

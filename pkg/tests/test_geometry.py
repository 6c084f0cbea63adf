from fractions import Fraction
import math

import numpy as np
import pytest

from nucembed.geometry import (
    BoxPackProfile,
    ExtentOverflowError,
    GeometryError,
    box,
    boxpack_profile,
    comb_domain,
    comb_profile_formula,
    count_inner_cubes,
    cube_contained,
    estimate_b,
    estimate_b_via_measure,
    inner_measure,
    log_cusp,
    parse_domain_config,
    power_cusp,
    profile_to_csv,
)


def scan(dom, j, xs, ys):
    return sum(cube_contained(dom, j, (x, y)) for x in range(*xs) for y in range(*ys))


def test_containment_examples():
    assert not cube_contained(power_cusp(1), 0, (1, 0))
    assert cube_contained(box(side=1, d=2), 1, (0, 0))
    assert not cube_contained(box(side=1, d=2), 0, (0, 0))
    with pytest.raises(GeometryError):
        cube_contained(box(side=1, d=2), 1, (0, 0, 0))


def test_box_counts():
    dom = box(side=1, d=2)
    assert boxpack_profile(dom, 1, 3).counts == [1, 9, 49]
    for j in range(0, 12):
        assert count_inner_cubes(dom, j) == max(2 ** j - 1, 0) ** 2
    # odd sides and three dimensions agree with a brute-force scan
    dom = box((Fraction(3, 2), 1, Fraction(5, 4)))
    for j in range(0, 4):
        s = 2 ** j
        brute = sum(cube_contained(dom, j, m) for m in np.ndindex(2 * s, 2 * s, 2 * s)
                    for m in [tuple(int(c) - s for c in m)])
        assert count_inner_cubes(dom, j) == brute


@pytest.mark.parametrize("dom", [power_cusp(Fraction(1, 2)), power_cusp(1), power_cusp(2),
                                 power_cusp(Fraction(3, 2)), log_cusp(2), log_cusp(Fraction(1, 2))])
def test_cusp_counts_match_cubewise_scan(dom):
    for j in range(0, 4):
        s = 2 ** j
        # the cusp ends where its width drops below one cell
        xmax = 4 * s ** 3 if dom.kind == "power_cusp" and dom.alpha < 1 else 40 * s
        assert count_inner_cubes(dom, j) == scan(dom, j, (0, xmax), (-s - 1, s + 1))


def test_contained_cubes_lie_in_domain():
    rng = np.random.default_rng(0)
    for dom in (power_cusp(Fraction(2, 3)), log_cusp(1)):
        j = 3
        hits = [(x, y) for x in range(0, 200) for y in range(-9, 9) if cube_contained(dom, j, (x, y))]
        for x, y in hits[:: max(1, len(hits) // 40)]:
            for u, v in rng.random((5, 2)):
                pt = (Fraction(x, 8) + Fraction(u) / 8, Fraction(y, 8) + Fraction(v) / 8)
                assert dom.contains(pt)


def test_power_cusp_alpha_one_grows_like_j_4j():
    ratios = [count_inner_cubes(power_cusp(1), j) / (j * 4 ** j) for j in range(6, 11)]
    assert max(ratios) / min(ratios) < 1.15


def test_parallel_counting_is_deterministic():
    dom = power_cusp(Fraction(1, 2))
    assert count_inner_cubes(dom, 7, workers=1) == count_inner_cubes(dom, 7, workers=5)
    dom = power_cusp(1)
    assert count_inner_cubes(dom, 13, workers=1) == count_inner_cubes(dom, 13, workers=3)


def test_level_and_count_caps():
    with pytest.raises(ExtentOverflowError):
        count_inner_cubes(box(side=1, d=2), 25)
    with pytest.raises(ExtentOverflowError):
        count_inner_cubes(box(side=1, d=3), 22)


def test_comb():
    single = comb_domain([1], 2)
    assert count_inner_cubes(single, 0) == 0
    assert [count_inner_cubes(single, j) for j in (1, 2)] == [0, 4]
    empty = comb_domain([0, 0, 0], 2)
    assert boxpack_profile(empty, 0, 6).counts == [0] * 7
    counts = [0, 3, 0, 5, 2]
    dom = comb_domain(counts, 2)
    for J in range(0, 14):
        assert count_inner_cubes(dom, J) == comb_profile_formula(counts, 2, J)
    # cubewise scan near the first components
    for J in (2, 3, 4):
        s = 2 ** J
        assert scan(dom, J, (0, 2 * s * 4), (0, s)) == count_inner_cubes(comb_domain([0, 3], 2), J) + \
            count_inner_cubes(comb_domain([0, 0, 0, 1], 2), J)
    with pytest.raises(GeometryError):
        comb_domain([1, -1])


def test_comb_with_b_above_d():
    # roughly 2^{3j} cubes per level in the plane
    counts = [2 ** (3 * j) for j in range(0, 17)]
    prof = boxpack_profile(comb_domain(counts, 2), 6, 16)
    est = estimate_b(prof)
    assert est.b_hat == pytest.approx(3, abs=0.15)
    assert not prof.doubling_violations()


def test_estimate_exact_line():
    prof = BoxPackProfile(tuple((j, 4 ** j) for j in range(2, 10)), 2)
    est = estimate_b(prof)
    assert est.b_hat == pytest.approx(2, abs=1e-12)
    assert est.stderr < 1e-12
    assert not est.log_correction_flag
    with pytest.raises(GeometryError):
        estimate_b(BoxPackProfile(((1, 4), (2, 16)), 2))


def test_estimates_for_cusps():
    for dom, b, flag in ((power_cusp(Fraction(1, 2)), 3, False), (power_cusp(1), 2, True),
                         (power_cusp(2), 2, False), (log_cusp(2), 2, False)):
        est = estimate_b(boxpack_profile(dom, 4, 10))
        assert est.b_hat == pytest.approx(b, abs=0.15)
        assert est.log_correction_flag is flag
        assert dom.analytic_b == b


def test_inner_measure():
    assert inner_measure(box((1, 2)), 0.25) == pytest.approx(0.5 * 1.5)
    # power cusp alpha = 1/2: without the curvature term the area is 2 (1/r - 2 + r)
    r = 2.0 ** -8
    assert inner_measure(power_cusp(Fraction(1, 2)), r) == pytest.approx(2 * (1 / r - 2 + r), rel=0.02)
    with pytest.raises(GeometryError):
        inner_measure(comb_domain([1]), 0.1)


def test_measure_route():
    assert estimate_b_via_measure(power_cusp(Fraction(1, 2))).b_hat == pytest.approx(3, abs=0.2)
    assert estimate_b_via_measure(power_cusp(2)).b_hat == pytest.approx(2, abs=0.2)
    assert estimate_b_via_measure(box(side=1, d=2)).b_hat == pytest.approx(2, abs=0.1)
    with pytest.raises(GeometryError):
        estimate_b_via_measure(comb_domain([1, 1]))


def test_csv_and_config():
    text = profile_to_csv(boxpack_profile(box(side=1, d=2), 0, 2))
    assert text.splitlines() == ["j,b_j,log2bj_over_j", "0,0,nan", "1,1,0.0", "2,9,1.584962500721156"]
    dom = parse_domain_config("# cusp\nkind = power_cusp\nalpha = 1/2\n")
    assert dom == power_cusp(Fraction(1, 2))
    assert parse_domain_config("kind=box\nsides=1,2,3") == box((1, 2, 3))
    assert parse_domain_config("kind=comb\ncounts=1,0,2\nd=3") == comb_domain([1, 0, 2], 3)
    for bad in ("kind=power_cusp\nalpha=0.5", "kind=blob", "kind box"):
        with pytest.raises(GeometryError):
            parse_domain_config(bad)


def test_doubling_law_on_all_profiles():
    for dom in (power_cusp(Fraction(1, 3)), power_cusp(3), log_cusp(Fraction(3, 2)),
                box((1, Fraction(1, 3))), comb_domain([0, 2, 1, 7], 3)):
        assert boxpack_profile(dom, 0, 9).doubling_violations() == []

from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tmfduality.exact_core import FgModule
from tmfduality.ss_engine import (
    DEFAULT_RULES,
    BidegreeViolation,
    DifferentialRule,
    NoRule,
    Window,
    build_e2,
    compare_charts,
    compare_via_norm,
    compute_homotopy,
    extension_compatible,
    leibniz,
    numeric_e2,
    run_orbit_ss,
    safe_stems,
    symbolic_e2,
    tate_bidegree,
    tate_monomials_at,
    tate_vanishes,
)

ALPHA_DELTA_SQ = (1, 0, 2)
BETA = (0, 1, 0)


def test_d9_on_alpha_delta_is_a_bidegree_violation():
    with pytest.raises(BidegreeViolation):
        DifferentialRule(9, (1, 0, 1), (((0, 5, 0), 1),))
    DifferentialRule(9, ALPHA_DELTA_SQ, (((0, 5, 0), 1),))


def test_rule_bidegrees():
    assert tate_bidegree((0, 0, 1)) == (0, 24)
    assert tate_bidegree((1, 2, 0)) == (5, 28)
    assert tate_bidegree(ALPHA_DELTA_SQ) == (1, 52)
    assert tate_bidegree((0, 5, 0)) == (10, 60)


def test_leibniz_on_powers_of_delta():
    assert leibniz(5, (0, 0, 1), DEFAULT_RULES) == {(1, 2, 0): 1}
    assert leibniz(5, (0, 0, 2), DEFAULT_RULES) == {(1, 2, 1): 2}
    assert leibniz(5, (0, 0, 3), DEFAULT_RULES) == {}
    assert leibniz(5, (0, 0, -1), DEFAULT_RULES) == {(1, 2, -2): 2}
    # alpha squares to zero
    assert leibniz(5, (1, 0, 1), DEFAULT_RULES) == {}


def test_leibniz_d9_examples():
    assert leibniz(9, ALPHA_DELTA_SQ, DEFAULT_RULES) == {(0, 5, 0): 1}
    # alpha Delta^-1 = alpha Delta^2 * Delta^-3 hits beta^5 Delta^-3
    assert set(leibniz(9, (1, 0, -1), DEFAULT_RULES)) == {(0, 5, -3)}
    assert leibniz(9, (0, 0, 3), DEFAULT_RULES) == {}


def test_leibniz_needs_page_generators():
    with pytest.raises(NoRule):
        leibniz(9, (1, 0, 1), DEFAULT_RULES)
    bad = DifferentialRule(5, (0, 0, 2), (((1, 2, 1), 2),))
    with pytest.raises(NoRule):
        leibniz(5, (0, 0, 2), (bad,))


monomials = st.tuples(st.integers(0, 1), st.integers(-6, 6), st.integers(-6, 6))


@settings(max_examples=200, deadline=None)
@given(monomials, st.sampled_from([5, 9]))
def test_leibniz_respects_bidegree(m, r):
    try:
        out = leibniz(r, m, DEFAULT_RULES)
    except NoRule:
        return
    s, t = tate_bidegree(m)
    for tgt, c in out.items():
        assert tate_bidegree(tgt) == (s + r, t + r - 1)
        assert c in (1, 2)


@settings(max_examples=200, deadline=None)
@given(monomials)
def test_d5_squares_to_zero(m):
    for tgt, c in leibniz(5, m, DEFAULT_RULES).items():
        assert leibniz(5, tgt, DEFAULT_RULES) == {}


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(["hfpss", "tate", "orbit"]), st.integers(-6, 6), st.integers(-60, 60))
def test_symbolic_and_numeric_e2_agree(kind, s, t):
    classes = symbolic_e2(kind, s, t)
    primal, dual = numeric_e2(kind, s, t)
    free = sum(1 for c in classes if c.order == 0)
    tors = [c.order for c in classes if c.order]
    assert FgModule.from_divisors(free, tors).same_group(primal + dual)


def test_dual_class_placement():
    names = [c.name for c in symbolic_e2("hfpss", 1, -20)]
    assert names == ["(3d)∨"]
    assert [c.name for c in symbolic_e2("tate", 1, -20)] == ["αΔ^-1"]


def test_build_e2_validates():
    w = Window(4, -40, 40)
    for kind in ("hfpss", "tate", "orbit"):
        build_e2(kind, w, validate=True)


def test_window_semantics():
    w = Window(8, -80, 140)
    assert w.depth == 19
    assert list(w.safe_s("hfpss")) == list(range(0, 11))
    assert list(w.safe_s("orbit")) == list(range(-10, 2))
    assert w.t_safe(-72) and not w.t_safe(-73) and w.t_safe(132) and not w.t_safe(133)
    with pytest.raises(ValueError):
        Window(4, 10, 10)


def test_tate_e6_is_periodic_on_beta_and_delta_cubed(small_tate, small_window):
    """E6 = F3[beta^(+-1), Delta^(+-3)]{1, alpha Delta^2}."""
    e6 = small_tate.page(6)
    for (s, t), entry in e6.entries.items():
        if not small_window.is_safe("tate", s, t):
            continue
        want = sorted(
            m for m in tate_monomials_at(s, t) if (m[0] == 0 and m[2] % 3 == 0) or (m[0] == 1 and m[2] % 3 == 2)
        )
        assert len(entry.classes) == len(want), (s, t)


def test_tate_vanishes_on_small_window(small_tate):
    assert tate_vanishes(small_tate) == []


def test_d5_logged(small_tate):
    recs = [r for r in small_tate.log if r.page == 5 and r.source == (0, 24)]
    assert recs and recs[0].target == (5, 28)
    assert recs[0].source_name == "Δ" and recs[0].coefficients[0][0] == "αβ^2"
    assert set(recs[0].to_record()) == {"page", "source", "target", "coefficients"}


# homotopy of Tmf[1/2] at the prime 3, frozen from the spectral sequence run
FROZEN_STEMS = {
    -21: FgModule(1),
    -20: FgModule(0),
    0: FgModule(1),
    3: FgModule(0, (3,)),
    8: FgModule(1),
    10: FgModule(0, (3,)),
    13: FgModule(0, (3,)),
    20: FgModule(1, (3,)),
    24: FgModule(2),
    27: FgModule(0, (3,)),
    30: FgModule(0, (3,)),
}


def test_hfpss_chart_values(small_hfpss):
    chart = small_hfpss.chart
    for n, g in FROZEN_STEMS.items():
        assert chart.at(n).same_group(g), (n, str(chart.at(n)))
    assert not chart.flags
    assert small_hfpss.vanishing_ok


def test_hfpss_zero_stem_generators(small_hfpss):
    names = [name for _, name, _ in small_hfpss.chart.contributions[0]]
    assert names == ["1"]
    assert [name for _, name, _ in small_hfpss.chart.contributions[-21]] == ["3(3d)∨"]


def test_orbit_agrees_up_to_flagged_extensions(small_window, small_tate, small_hfpss):
    pages, chart = run_orbit_ss(small_window, small_tate, small_hfpss)
    assert 0 in chart.flags
    assert compare_charts(chart, small_hfpss.chart) == []
    report = compare_via_norm(compute_homotopy("orbit", small_window, small_tate).run, small_hfpss.run, small_tate)
    assert report.certified and report.records


def test_extension_compatibility():
    contrib = ((0, "3", 0), (-8, "x", 3))
    assert extension_compatible(contrib, FgModule(1))
    assert extension_compatible(contrib, FgModule(1, (3,)))
    assert not extension_compatible(contrib, FgModule(2))
    assert not extension_compatible(((0, "3", 0), (2, "x", 3)), FgModule(1))


def test_safe_stems_are_inside_window():
    w = Window(8, -80, 140)
    stems = safe_stems("hfpss", w)
    assert stems[0] == -72 and stems[-1] == 122

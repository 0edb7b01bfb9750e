from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tmfduality.duality_checks import (
    AmbiguousInput,
    DualityFailure,
    anderson_dualize,
    check_e2_shift,
    check_tmf2_self_duality,
    check_tmf21_duality,
    shift_chart,
    tmf2_anderson_check,
)
from tmfduality.exact_core import FgModule
from tmfduality.ss_engine import HomotopyChart, Window

groups = st.builds(
    lambda f, k: FgModule(f, (3,) * k), st.integers(0, 3), st.integers(0, 2)
)


@st.composite
def charts(draw):
    lo = draw(st.integers(-30, 0))
    n = draw(st.integers(1, 30))
    return HomotopyChart("X", {k: draw(groups) for k in range(lo, lo + n)})


@settings(max_examples=100, deadline=None)
@given(charts())
def test_anderson_dual_is_an_involution(chart):
    twice = anderson_dualize(anderson_dualize(chart))
    for n, g in twice.groups.items():
        assert g.same_group(chart.at(n))


@settings(max_examples=100, deadline=None)
@given(charts(), st.integers(-30, 30))
def test_dual_of_shift_is_shift_of_dual(chart, k):
    lhs = anderson_dualize(shift_chart(chart, k))
    rhs = shift_chart(anderson_dualize(chart), -k)
    for n in set(lhs.groups) & set(rhs.groups):
        assert lhs.at(n).same_group(rhs.at(n))


def test_torsion_moves_down_one_stem():
    chart = HomotopyChart("X", {2: FgModule(0, (3,)), 3: FgModule(1), -3: FgModule(), -4: FgModule()})
    dual = anderson_dualize(chart)
    assert dual.at(-3).same_group(FgModule(1, (3,)))


def test_flagged_stems_are_refused():
    chart = HomotopyChart("X", {0: FgModule(1), -1: FgModule()}, flags={0: "free class above a torsion class"})
    with pytest.raises(AmbiguousInput):
        anderson_dualize(chart)


def test_tmf2_self_duality():
    report = check_tmf2_self_duality(40)
    assert report.passed and len(report.degrees) > 0
    assert all(d.rank > 0 for d in report.degrees)
    assert tmf2_anderson_check(40) == []


def test_e2_shift_small_window():
    report = check_e2_shift(Window(6, -48, 48))
    assert report.passed
    recs = report.to_records()
    assert {"s", "t", "andersonSide", "shiftedSide", "labels", "ok"} == set(recs[0])


def test_main_duality_on_small_window(small_hfpss):
    report = check_tmf21_duality(small_hfpss.chart)
    assert report.passed
    assert report.to_text().endswith("PASS")


def test_main_duality_detects_a_wrong_chart(small_hfpss):
    groups = dict(small_hfpss.chart.groups)
    groups[3] = FgModule()
    broken = HomotopyChart("broken", groups)
    with pytest.raises(DualityFailure):
        check_tmf21_duality(broken)
    report = check_tmf21_duality(broken, strict=False)
    assert not report.passed and report.failures

"""Anderson duality on homotopy charts and the three duality audits."""

from __future__ import annotations

from dataclasses import dataclass

from .exact_core import FgModule, matmul, transpose
from .group_cohomology import group_cohomology_at
from .lambda_rep import (
    LAMBDA,
    LAMBDA_DUAL,
    LAMBDA_DUAL_SGN,
    LAMBDA_SGN,
    SIGMA,
    TAU,
    inverse,
    slice_at,
)
from .ss_engine import DUAL_PART, HomotopyChart, Window, symbolic_e2


class AmbiguousInput(ValueError):
    pass


class EquivarianceFailure(AssertionError):
    pass


class ShiftMismatch(AssertionError):
    pass


class DualityFailure(AssertionError):
    pass


# --------------------------------------------------------------------------
# Anderson dual of a chart
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class AndersonDual:
    source: HomotopyChart
    dual: HomotopyChart


def anderson_dualize(chart: HomotopyChart, name: str | None = None) -> HomotopyChart:
    """pi_n of the Anderson dual: Hom(pi_{-n}, Z) + Ext(pi_{-n-1}, Z).

    Over Z[1/2] Hom sees only the free part and Ext only the (odd) torsion.
    Defined on the stems n for which both -n and -n-1 lie in the chart.
    """
    groups = {}
    stems = set(chart.groups)
    for m in stems:
        n = -m
        if -n - 1 not in stems:
            continue
        for k in (-n, -n - 1):
            if k in chart.flags:
                raise AmbiguousInput(f"stem {k} is flagged: {chart.flags[k]}")
        groups[n] = FgModule(chart.at(-n).free_rank, chart.at(-n - 1).torsion)
    return HomotopyChart(name or f"I_Z({chart.name})", dict(sorted(groups.items())))


def shift_chart(chart: HomotopyChart, k: int, name: str | None = None) -> HomotopyChart:
    """Sigma^k: pi_n(Sigma^k X) = pi_{n-k} X."""
    groups = {n + k: g for n, g in chart.groups.items()}
    flags = {n + k: f for n, f in chart.flags.items()}
    return HomotopyChart(name or f"Σ^{k}{chart.name}", groups, flags)


def dualize(chart: HomotopyChart) -> AndersonDual:
    return AndersonDual(chart, anderson_dualize(chart))


# --------------------------------------------------------------------------
# Tmf(2): 9-fold self-duality with sign twist, at the level of S3-modules
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class DegreeCheck:
    t: int
    rank: int
    ok: bool


@dataclass(frozen=True)
class SelfDualityReport:
    degrees: tuple[DegreeCheck, ...]

    @property
    def passed(self) -> bool:
        return all(d.ok for d in self.degrees)

    def to_records(self) -> list[dict]:
        return [{"t": d.t, "rank": d.rank, "ok": d.ok} for d in self.degrees]


def _block_diag(blocks):
    n = sum(len(b) for b in blocks)
    out = [[0] * n for _ in range(n)]
    o = 0
    for b in blocks:
        for i, row in enumerate(b):
            for j, x in enumerate(row):
                out[o + i][o + j] = x
        o += len(b)
    return out


def _dual_matrix(M, t, g):
    """Matrix of g on the Z-linear dual of a slice: rho(g^-1)^T."""
    sl = slice_at(M, t)
    return transpose(sl.matrix(inverse(g)), sl.rank) if sl.rank else []


def check_tmf2_self_duality(t_max: int = 100) -> SelfDualityReport:
    """Hom(pi_{-t} Tmf(2), Z) = Sigma^9 (Lambda_sgn + Sigma^-9 dual Lambda) at t,
    equivariantly.

    The left side is the contragredient of Lambda_{-t} + (Sigma^-9 dual
    Lambda_sgn)_{-t}; the right side is built from the module constructors.
    The isomorphism is the block swap, and it must intertwine sigma and tau.
    """
    right_sgn = LAMBDA_SGN.suspended(9)
    right_dual = LAMBDA_DUAL
    out = []
    for t in range(-t_max, t_max + 1):
        left_blocks = {g: [_dual_matrix(LAMBDA, -t, g), _dual_matrix(DUAL_PART, -t, g)] for g in (SIGMA, TAU)}
        right_blocks = {
            g: [slice_at(right_sgn, t).matrix(g) if right_sgn.rank(t) else [], slice_at(right_dual, t).matrix(g) if right_dual.rank(t) else []]
            for g in (SIGMA, TAU)
        }
        a, b = LAMBDA.rank(-t), DUAL_PART.rank(-t)
        rank = a + b
        if rank != right_sgn.rank(t) + right_dual.rank(t) or right_dual.rank(t) != a:
            raise EquivarianceFailure(f"rank mismatch at t={t}")
        if rank == 0:
            continue
        # left order (Lambda-dual, Lambda_sgn); right order (Lambda_sgn, Lambda-dual)
        P = [[0] * rank for _ in range(rank)]
        for i in range(a):
            P[b + i][i] = 1
        for i in range(b):
            P[i][a + i] = 1
        ok = True
        for g in (SIGMA, TAU):
            L = _block_diag([m for m in left_blocks[g] if m])
            R = _block_diag([m for m in right_blocks[g] if m])
            if matmul(P, L) != matmul(R, P):
                ok = False
        if not ok:
            raise EquivarianceFailure(f"block swap does not intertwine the actions at t={t}")
        out.append(DegreeCheck(t, rank, ok))
    return SelfDualityReport(tuple(out))


def tmf2_anderson_check(t_max: int = 100) -> list[int]:
    """Chart-level form: I_Z Tmf(2) = Sigma^9 Tmf(2) as graded groups.

    Returns the stems where the two disagree (empty on success)."""
    from .ss_engine import tmf2_chart

    chart = tmf2_chart(-t_max - 10, t_max + 10)
    dual = anderson_dualize(chart)
    shifted = shift_chart(chart, 9)
    return [n for n in range(-t_max, t_max + 1) if not dual.at(n).same_group(shifted.at(n))]


# --------------------------------------------------------------------------
# E2-level shift by 21
# --------------------------------------------------------------------------


def _e2(primal, dual, s: int, t: int) -> FgModule:
    """E2 entry with the dual summand placed one step up in s and t."""
    out = group_cohomology_at(primal, s, t, "S3")
    if s >= 1:
        out = out + group_cohomology_at(dual, s - 1, t - 1, "S3")
    return out


@dataclass(frozen=True)
class ShiftEntry:
    s: int
    t: int
    anderson_side: FgModule
    shifted_side: FgModule
    labels: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return self.anderson_side.same_group(self.shifted_side)


@dataclass(frozen=True)
class ShiftReport:
    entries: tuple[ShiftEntry, ...]

    @property
    def passed(self) -> bool:
        return all(e.ok for e in self.entries)

    def to_records(self) -> list[dict]:
        return [
            {
                "s": e.s,
                "t": e.t,
                "andersonSide": e.anderson_side.to_record(),
                "shiftedSide": e.shifted_side.to_record(),
                "labels": list(e.labels),
                "ok": e.ok,
            }
            for e in self.entries
        ]


def check_e2_shift(window: Window) -> ShiftReport:
    """E2 of I_Z Tmf(2) = Sigma^9 Tmf(2)_sgn against E2 of Sigma^21 Tmf(2)."""
    a_primal, a_dual = LAMBDA_SGN.suspended(9), LAMBDA_DUAL
    b_primal, b_dual = LAMBDA.suspended(21), LAMBDA_DUAL_SGN.suspended(12)
    out = []
    for s in range(0, window.s_max + 1):
        for t in range(window.t_min, window.t_max + 1):
            a = _e2(a_primal, a_dual, s, t)
            b = _e2(b_primal, b_dual, s, t)
            if a.is_zero and b.is_zero:
                continue
            labels = tuple(c.name for c in symbolic_e2("hfpss", s, t - 21))
            entry = ShiftEntry(s, t, a, b, labels)
            if not entry.ok:
                raise ShiftMismatch(f"(s,t)=({s},{t}): {a} vs {b}")
            out.append(entry)
    return ShiftReport(tuple(out))


# --------------------------------------------------------------------------
# pi_*-level: I_Z Tmf = Sigma^21 Tmf
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class DualityRow:
    n: int
    shifted: FgModule  # pi_{n-21}
    dual: FgModule  # free part of pi_{-n}, torsion of pi_{-n-1}

    @property
    def ok(self) -> bool:
        return self.shifted.free_rank == self.dual.free_rank and sorted(self.shifted.torsion) == sorted(self.dual.torsion)


@dataclass(frozen=True)
class DualityReport:
    rows: tuple[DualityRow, ...]

    @property
    def passed(self) -> bool:
        return all(r.ok for r in self.rows)

    @property
    def failures(self) -> list[int]:
        return [r.n for r in self.rows if not r.ok]

    def to_text(self) -> str:
        lines = [f"{'n':>5}  {'pi_(n-21)':<28} {'I_Z side':<28} ok"]
        for r in self.rows:
            lines.append(f"{r.n:>5}  {str(r.shifted):<28} {str(r.dual):<28} {'yes' if r.ok else 'NO'}")
        lines.append("PASS" if self.passed else f"FAIL at {self.failures}")
        return "\n".join(lines)

    def to_records(self) -> list[dict]:
        return [
            {"n": r.n, "shifted": r.shifted.to_record(), "dual": r.dual.to_record(), "ok": r.ok}
            for r in self.rows
        ]


def check_tmf21_duality(chart: HomotopyChart, strict: bool = True) -> DualityReport:
    """Compare I_Z Tmf with Sigma^21 Tmf on every stem where both are known."""
    dual = anderson_dualize(chart)
    shifted = shift_chart(chart, 21)
    rows = []
    for n in sorted(set(dual.groups) & set(shifted.groups)):
        rows.append(DualityRow(n, shifted.at(n), dual.at(n)))
    report = DualityReport(tuple(rows))
    if strict and not report.passed:
        bad = report.failures[0]
        raise DualityFailure(
            f"n={bad}: pi_(n-21) = {shifted.at(bad)} but Anderson side = {dual.at(bad)}"
        )
    return report

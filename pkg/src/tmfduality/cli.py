"""Command-line front end: ``tmfduality <command> [options]``.

Exit status: 0 success, 1 failed audit or computation error, 2 usage error.
The default window comes from $TMFDUALITY_WINDOW ("sMax tMin tMax").
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import asdict, dataclass

from . import charts
from .duality_checks import (
    check_e2_shift,
    check_tmf2_self_duality,
    check_tmf21_duality,
    tmf2_anderson_check,
)
from .group_cohomology import (
    GROUPS,
    KINDS,
    closed_form_labels,
    coinvariants_at,
    group_cohomology_at,
    homology_at,
    mf_monomials,
    with_labels,
)
from .lambda_rep import A_MODULE, LAMBDA, LAMBDA_DUAL, LAMBDA_DUAL_SGN, LAMBDA_SGN
from .sheaf_serre import koszul_cohomology, pairing_equivariance, serre_pairing
from .ss_engine import Window, compute_homotopy, run_orbit_ss, run_tate_ss, tate_vanishes, tmf2_chart

ENV_WINDOW = "TMFDUALITY_WINDOW"
DEFAULT_WINDOW = (12, -96, 96)
COMMANDS = ("cohomology", "sheaf", "invariants", "tate", "ss", "duality", "chart")
TARGETS = ("hfpss", "tate", "orbit", "tmf2")
FORMATS = ("text", "records", "svg")
CHECKS = ("tmf2", "e2shift", "tmf21", "all")
MODULES = {
    "lambda": LAMBDA,
    "lambda_sgn": LAMBDA_SGN,
    "lambda_dual": LAMBDA_DUAL,
    "lambda_dual_sgn": LAMBDA_DUAL_SGN,
    "A": A_MODULE,
}


class UsageError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    window: tuple[int, int, int] = DEFAULT_WINDOW
    target: str = "hfpss"
    format: str = "text"
    output: str | None = None
    group: str = "S3"
    module: str = "lambda"
    kind: str = "cohomology"
    at: tuple[int, int] | None = None
    weight: int | None = None
    check: str = "all"

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command}")
        s_max, t_min, t_max = self.window
        if t_min >= t_max or s_max < 0:
            raise UsageError("window needs sMax >= 0 and tMin < tMax")

    @property
    def win(self) -> Window:
        return Window(*self.window)


@dataclass
class Outcome:
    status: int
    text: str


def default_window() -> tuple[int, int, int]:
    raw = os.environ.get(ENV_WINDOW)
    if not raw:
        return DEFAULT_WINDOW
    parts = raw.replace(",", " ").split()
    if len(parts) != 3:
        raise UsageError(f"{ENV_WINDOW} must hold three integers")
    try:
        return tuple(int(p) for p in parts)  # type: ignore[return-value]
    except ValueError as exc:
        raise UsageError(f"{ENV_WINDOW}: {exc}") from None


# --------------------------------------------------------------------------
# commands
# --------------------------------------------------------------------------


def _records(cfg: RunConfig, entries=(), differentials=(), verdict=None) -> str:
    config = asdict(cfg)
    del config["output"]  # where the document is written is not part of it
    doc = {
        "config": config,
        "entries": list(entries),
        "differentials": list(differentials),
        "verdict": verdict,
    }
    return json.dumps(doc, indent=1, ensure_ascii=False) + "\n"


def _cohomology_entry(cfg, M, s, t):
    if cfg.kind == "homology":
        g = homology_at(M, s, t, cfg.group) if s else coinvariants_at(M, t, cfg.group)
    else:
        g = group_cohomology_at(M, s, t, cfg.group, tate=cfg.kind == "tate")
    return with_labels(g, M, s, t, cfg.group, cfg.kind)


def cmd_cohomology(cfg: RunConfig) -> Outcome:
    M = MODULES[cfg.module]
    if cfg.at is not None:
        pts = [cfg.at]
    else:
        s_max, t_min, t_max = cfg.window
        s_lo = -s_max if cfg.kind == "tate" else 0
        pts = [(s, t) for s in range(s_lo, s_max + 1) for t in range(t_min, t_max + 1)]
    rows = []
    for s, t in pts:
        g = _cohomology_entry(cfg, M, s, t)
        if cfg.at is None and g.is_zero:
            continue
        rows.append((s, t, g))
    if cfg.format == "records":
        return Outcome(0, _records(cfg, [{"s": s, "t": t, **g.to_record()} for s, t, g in rows]))
    if cfg.at is not None:
        return Outcome(0, str(rows[0][2]) + "\n")
    lines = [f"{cfg.kind} of {M.name} over {cfg.group}"] + [f"{s:>4} {t:>5}  {g}" for s, t, g in rows]
    return Outcome(0, "\n".join(lines) + "\n")


def cmd_sheaf(cfg: RunConfig) -> Outcome:
    _, t_min, t_max = cfg.window
    weights = [cfg.weight] if cfg.weight is not None else [w for w in range(t_min // 2, t_max // 2 + 1) if w % 2 == 0]
    rows, ok = [], True
    for w in weights:
        sl = koszul_cohomology(w)
        pair = serre_pairing(w)
        eq = pairing_equivariance(w)
        perfect = pair.is_perfect()
        ok &= perfect and eq.ok
        rows.append({"w": w, "H0": sl.h0.to_record(), "H1": sl.h1.to_record(), "perfect": perfect, "equivariant": eq.ok})
    if cfg.format == "records":
        return Outcome(0 if ok else 1, _records(cfg, rows, verdict={"passed": ok}))
    lines = [f"{'w':>5}  {'H0':<18} {'H1':<18} pairing"]
    for r in rows:
        h0 = r["H0"]["freeRank"]
        h1 = r["H1"]["freeRank"]
        lines.append(f"{r['w']:>5}  rank {h0:<13} rank {h1:<13} {'perfect, sign-equivariant' if r['perfect'] and r['equivariant'] else 'FAIL'}")
    if cfg.weight is not None:
        lines.append(serre_pairing(cfg.weight).to_text())
    return Outcome(0 if ok else 1, "\n".join(lines) + "\n")


def cmd_invariants(cfg: RunConfig) -> Outcome:
    _, t_min, t_max = cfg.window
    rows, ok = [], True
    for t in range(max(0, t_min), t_max + 1):
        h0 = group_cohomology_at(LAMBDA, 0, t, cfg.group).free_rank
        h0s = group_cohomology_at(LAMBDA_SGN, 0, t, cfg.group).free_rank
        mf, mfd = len(mf_monomials(t)), len(mf_monomials(t - 12))
        good = cfg.group != "S3" or (h0 == mf and h0s == mfd)
        ok &= good
        if h0 or h0s or mf or mfd:
            rows.append({"t": t, "invariants": h0, "modularForms": mf, "twistedInvariants": h0s, "dTimesModularForms": mfd, "ok": good})
    if cfg.format == "records":
        return Outcome(0 if ok else 1, _records(cfg, rows, verdict={"passed": ok}))
    lines = [f"{'t':>4}  H0(Λ) #MF  H0(Λ_sgn) #dMF"]
    for r in rows:
        lines.append(f"{r['t']:>4}  {r['invariants']:>5} {r['modularForms']:>3}  {r['twistedInvariants']:>9} {r['dTimesModularForms']:>4}")
    lines.append("PASS" if ok else "FAIL")
    return Outcome(0 if ok else 1, "\n".join(lines) + "\n")


def cmd_tate(cfg: RunConfig) -> Outcome:
    """Tate cohomology of Lambda and Lambda_sgn against the monomial closed forms."""
    s_max, t_min, t_max = cfg.window
    rows, ok = [], True
    for M in (LAMBDA, LAMBDA_SGN):
        for s in range(-s_max, s_max + 1):
            for t in range(t_min, t_max + 1):
                g = group_cohomology_at(M, s, t, "S3", tate=True)
                expected = closed_form_labels(M, s, t, "S3", "tate") or []
                good = g.free_rank == 0 and len(g.torsion) == len(expected) and all(d == 3 for d in g.torsion)
                ok &= good
                if not g.is_zero or expected:
                    rows.append((M.name, s, t, with_labels(g, M, s, t, "S3", "tate"), good))
    if cfg.format == "records":
        recs = [{"module": m, "s": s, "t": t, **g.to_record(), "ok": good} for m, s, t, g, good in rows]
        return Outcome(0 if ok else 1, _records(cfg, recs, verdict={"passed": ok}))
    lines = [f"{m:<6} {s:>4} {t:>5}  {g}{'' if good else '  MISMATCH'}" for m, s, t, g, good in rows]
    lines.append("PASS" if ok else "FAIL")
    return Outcome(0 if ok else 1, "\n".join(lines) + "\n")


def _run_target(cfg: RunConfig):
    w = cfg.win
    if cfg.target == "tmf2":
        return None, tmf2_chart(w.t_min, w.t_max)
    tate = run_tate_ss(w)
    if cfg.target == "tate":
        return tate, None
    if cfg.target == "hfpss":
        res = compute_homotopy("hfpss", w, tate)
        return res.run, res.chart
    fixed = compute_homotopy("hfpss", w, tate)
    orbit = compute_homotopy("orbit", w, tate)
    run_orbit_ss(w, tate, fixed)  # raises on a norm mismatch
    return orbit.run, orbit.chart


def _page_records(run):
    """Entries of every distinct page: E2 and the page after each turn."""
    out = []
    for r in [2] + [rr + 1 for rr in sorted(run.turns)]:
        for (s, t), e in sorted(run.page(r).entries.items()):
            if not e.classes:
                continue
            out.append(
                {
                    "page": r,
                    "s": s,
                    "t": t,
                    "stem": t - s,
                    "safe": run.window.is_safe(run.kind, s, t),
                    "classes": [{"name": c.name, "order": c.order} for c in e.classes],
                }
            )
    return out


def cmd_ss(cfg: RunConfig) -> Outcome:
    run, chart = _run_target(cfg)
    status = 0
    verdict = {}
    if run is not None and run.kind == "tate":
        bad = tate_vanishes(run)
        verdict["e10VanishesOnSafeWindow"] = not bad
        status = 1 if bad else 0
    if cfg.format == "svg":
        return Outcome(status, charts.render_run_svg(run) if run is not None else charts.render_chart_svg(chart))
    if cfg.format == "records":
        entries = _page_records(run) if run is not None else []
        diffs = [d.to_record() for d in run.log] if run is not None else []
        if chart is not None:
            verdict["chart"] = chart.to_records()
        return Outcome(status, _records(cfg, entries, diffs, verdict))
    parts = []
    if run is not None:
        parts.append(charts.render_run_ascii(run))
    if chart is not None:
        parts.append(charts.render_chart_ascii(chart))
    if "e10VanishesOnSafeWindow" in verdict:
        parts.append("E10 = 0 on the safe window: " + ("yes" if verdict["e10VanishesOnSafeWindow"] else "NO"))
    return Outcome(status, "\n\n".join(parts) + "\n")


def cmd_chart(cfg: RunConfig) -> Outcome:
    if cfg.target == "tate":
        raise UsageError("the Tate target has no homotopy chart; use `ss --target tate`")
    _, chart = _run_target(cfg)
    if cfg.format == "svg":
        return Outcome(0, charts.render_chart_svg(chart))
    if cfg.format == "records":
        return Outcome(0, _records(cfg, chart.to_records()))
    return Outcome(0, charts.render_chart_ascii(chart) + "\n")


def cmd_duality(cfg: RunConfig) -> Outcome:
    w = cfg.win
    checks = ("tmf2", "e2shift", "tmf21") if cfg.check == "all" else (cfg.check,)
    verdict, lines, records = {}, [], []
    for name in checks:
        try:
            if name == "tmf2":
                t_max = max(abs(w.t_min), abs(w.t_max))
                rep = check_tmf2_self_duality(t_max)
                bad = tmf2_anderson_check(t_max)
                passed = rep.passed and not bad
                lines.append(f"tmf2: {len(rep.degrees)} degrees, equivariant block swap; chart-level mismatches {bad}")
                records.extend({"check": name, **r} for r in rep.to_records())
            elif name == "e2shift":
                rep = check_e2_shift(w)
                passed = rep.passed
                lines.append(f"e2shift: {len(rep.entries)} nonzero bidegrees compared")
                records.extend({"check": name, **r} for r in rep.to_records())
            else:
                res = compute_homotopy("hfpss", w)
                rep = check_tmf21_duality(res.chart, strict=False)
                passed = rep.passed
                lines.append(rep.to_text())
                records.extend({"check": name, **r} for r in rep.to_records())
        except AssertionError as exc:
            passed = False
            lines.append(f"{name}: {type(exc).__name__}: {exc}")
        verdict[name] = passed
        lines.append(f"{name}: {'PASS' if passed else 'FAIL'}")
    status = 0 if all(verdict.values()) else 1
    if cfg.format == "records":
        return Outcome(status, _records(cfg, records, verdict=verdict))
    return Outcome(status, "\n".join(lines) + "\n")


HANDLERS = {
    "cohomology": cmd_cohomology,
    "sheaf": cmd_sheaf,
    "invariants": cmd_invariants,
    "tate": cmd_tate,
    "ss": cmd_ss,
    "duality": cmd_duality,
    "chart": cmd_chart,
}


def run_command(cfg: RunConfig) -> Outcome:
    if cfg.format == "svg" and cfg.command not in ("ss", "chart"):
        raise UsageError("svg output is available for `ss` and `chart`")
    return HANDLERS[cfg.command](cfg)


# --------------------------------------------------------------------------
# argument parsing
# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tmfduality", description="Duality computations for Tmf at the prime 3.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--window", nargs=3, type=int, metavar=("SMAX", "TMIN", "TMAX"), help=f"default from ${ENV_WINDOW} or {DEFAULT_WINDOW}")
    common.add_argument("--format", choices=FORMATS, default="text")
    common.add_argument("--output", "-o", help="write to this file instead of stdout")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("cohomology", parents=[common], help="group cohomology, homology or Tate tables")
    c.add_argument("--group", choices=GROUPS, default="S3")
    c.add_argument("--module", choices=sorted(MODULES), default="lambda")
    c.add_argument("--kind", choices=KINDS, default="cohomology")
    c.add_argument("--at", nargs=2, type=int, metavar=("S", "T"))

    c = sub.add_parser("sheaf", parents=[common], help="sheaf cohomology of O(w) and Serre duality")
    c.add_argument("--weight", type=int)

    c = sub.add_parser("invariants", parents=[common], help="invariants against modular form counts")
    c.add_argument("--group", choices=GROUPS, default="S3")

    sub.add_parser("tate", parents=[common], help="Tate cohomology against closed forms")

    c = sub.add_parser("ss", parents=[common], help="run a spectral sequence")
    c.add_argument("--target", choices=TARGETS, default="hfpss")

    c = sub.add_parser("duality", parents=[common], help="duality audits")
    c.add_argument("--check", choices=CHECKS, default="all")

    c = sub.add_parser("chart", parents=[common], help="assembled homotopy chart")
    c.add_argument("--target", choices=TARGETS, default="hfpss")
    return p


def parse_config(argv=None) -> RunConfig:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        window = tuple(ns.window) if ns.window else default_window()
        kwargs = {k: v for k, v in vars(ns).items() if k not in ("window",) and v is not None}
        if "at" in kwargs:
            kwargs["at"] = tuple(kwargs["at"])
        return RunConfig(window=window, **kwargs)
    except UsageError as exc:
        parser.error(str(exc))
        raise  # unreachable


def main(argv=None) -> int:
    cfg = parse_config(argv)
    try:
        out = run_command(cfg)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except (ArithmeticError, AssertionError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    if cfg.output:
        try:
            with open(cfg.output, "w", encoding="utf-8") as fh:
                fh.write(out.text)
        except OSError as exc:
            print(f"cannot write {cfg.output}: {exc}", file=sys.stderr)
            return 1
    else:
        sys.stdout.write(out.text)
    return out.status


if __name__ == "__main__":
    sys.exit(main())

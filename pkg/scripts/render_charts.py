"""Render every spectral sequence and the assembled charts for one window.

Writes <out>/{tate,hfpss,orbit}.svg, <out>/{hfpss,orbit}_chart.svg and a text
summary with all pages and differentials.
"""

from __future__ import annotations

import argparse
from pathlib import Path

from tmfduality import charts
from tmfduality.ss_engine import Window, compute_homotopy, run_tate_ss


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--window", nargs=3, type=int, default=(8, -80, 140), metavar=("SMAX", "TMIN", "TMAX"))
    ap.add_argument("--out", default="charts_out")
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    w = Window(*args.window)
    tate = run_tate_ss(w)
    fixed = compute_homotopy("hfpss", w, tate)
    orbit = compute_homotopy("orbit", w, tate)

    text = []
    for run in (tate, fixed.run, orbit.run):
        (out / f"{run.kind}.svg").write_text(charts.render_run_svg(run), encoding="utf-8")
        text.append(charts.render_run_ascii(run))
    for res in (fixed, orbit):
        (out / f"{res.run.kind}_chart.svg").write_text(charts.render_chart_svg(res.chart), encoding="utf-8")
        text.append(charts.render_chart_ascii(res.chart))
    (out / "summary.txt").write_text("\n\n".join(text) + "\n", encoding="utf-8")
    print(f"wrote {len(list(out.iterdir()))} files to {out}")


if __name__ == "__main__":
    main()

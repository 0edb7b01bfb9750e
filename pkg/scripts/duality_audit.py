"""Run the three duality audits on a window and dump their records as JSON.

Also prints a per-stem table for the main duality: pi_(n-21) against the
Anderson side, with the E-infinity classes that produce each group.
"""

from __future__ import annotations

import argparse
import json
import time

from tmfduality.duality_checks import check_e2_shift, check_tmf2_self_duality, check_tmf21_duality
from tmfduality.ss_engine import Window, compute_homotopy


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--window", nargs=3, type=int, default=(8, -80, 140), metavar=("SMAX", "TMIN", "TMAX"))
    ap.add_argument("--json", help="write all records to this file")
    args = ap.parse_args()
    w = Window(*args.window)

    t0 = time.perf_counter()
    tmf2 = check_tmf2_self_duality(max(abs(w.t_min), abs(w.t_max)))
    shift = check_e2_shift(Window(min(w.s_max, 12), w.t_min, w.t_max))
    res = compute_homotopy("hfpss", w)
    main_rep = check_tmf21_duality(res.chart, strict=False)
    elapsed = time.perf_counter() - t0

    print(main_rep.to_text())
    for n in (-21, 0, 3, 24, 27):
        contrib = ", ".join(f"{name}@s={s}" for s, name, _ in res.chart.contributions.get(n, ()))
        print(f"stem {n:>4}: {res.chart.at(n)}   from {contrib or '-'}")
    print(f"tmf2 self-duality: {'PASS' if tmf2.passed else 'FAIL'} ({len(tmf2.degrees)} degrees)")
    print(f"E2 shift: {'PASS' if shift.passed else 'FAIL'} ({len(shift.entries)} bidegrees)")
    print(f"main duality: {'PASS' if main_rep.passed else 'FAIL'} ({len(main_rep.rows)} stems), {elapsed:.1f}s")

    if args.json:
        doc = {
            "window": list(args.window),
            "tmf2": tmf2.to_records(),
            "e2shift": shift.to_records(),
            "tmf21": main_rep.to_records(),
            "chart": res.chart.to_records(),
        }
        with open(args.json, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, indent=1, ensure_ascii=False)


if __name__ == "__main__":
    main()

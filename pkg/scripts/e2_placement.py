"""Compare the E2 terms of I_Z Tmf(2) and Sigma^21 Tmf(2) under two placements
of the dual summand.

"plain": H^s of both summands at (s, t), as bigraded groups.
"shifted": H^s of the dual summand at (s+1, t+1), as in the spectral sequence.
Only the shifted placement gives an isomorphism; the plain one fails at a
handful of bidegrees where classes sit one step apart.
"""

from __future__ import annotations

import argparse

from tmfduality.group_cohomology import group_cohomology_at
from tmfduality.lambda_rep import LAMBDA, LAMBDA_DUAL, LAMBDA_DUAL_SGN, LAMBDA_SGN

ANDERSON = (LAMBDA_SGN.suspended(9), LAMBDA_DUAL)
SHIFTED = (LAMBDA.suspended(21), LAMBDA_DUAL_SGN.suspended(12))


def e2(pair, s, t, shifted: bool):
    primal, dual = pair
    out = group_cohomology_at(primal, s, t)
    if shifted:
        return out + group_cohomology_at(dual, s - 1, t - 1) if s >= 1 else out
    return out + group_cohomology_at(dual, s, t)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--smax", type=int, default=12)
    ap.add_argument("--tmax", type=int, default=96)
    args = ap.parse_args()
    for shifted in (False, True):
        bad = []
        for s in range(args.smax + 1):
            for t in range(-args.tmax, args.tmax + 1):
                a, b = e2(ANDERSON, s, t, shifted), e2(SHIFTED, s, t, shifted)
                if not a.same_group(b):
                    bad.append((s, t, str(a), str(b)))
        name = "shifted" if shifted else "plain"
        print(f"{name:>8}: {len(bad)} mismatching bidegrees")
        for s, t, a, b in bad[:6]:
            print(f"          (s,t)=({s},{t}): {a}  vs  {b}")


if __name__ == "__main__":
    main()

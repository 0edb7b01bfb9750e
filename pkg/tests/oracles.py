"""Independent oracles.  Nothing here imports the package's counting code."""

from __future__ import annotations

import numpy as np
import sympy
from sympy.matrices.normalforms import smith_normal_form


def _series(factors: list[dict[int, int]], n: int) -> np.ndarray:
    """Product of power series truncated at degree n (coefficients as int64)."""
    out = np.zeros(n + 1, dtype=np.int64)
    out[0] = 1
    for f in factors:
        g = np.zeros(n + 1, dtype=np.int64)
        for k, c in f.items():
            if k <= n:
                g[k] = c
        out = np.convolve(out, g)[: n + 1]
    return out


def _geometric(step: int, n: int) -> dict[int, int]:
    return {k: 1 for k in range(0, n + 1, step)}


def mf_counts(t_max: int) -> list[int]:
    """dim MF_t for 0 <= t <= t_max: series of Z[c4, Delta] (1 + c6), deg 8, 24, 12."""
    return _series([_geometric(8, t_max), _geometric(24, t_max), {0: 1, 12: 1}], t_max).tolist()


def mf_count(t: int) -> int:
    return mf_counts(t)[t] if t >= 0 else 0


def mf_c4_free_count(t: int) -> int:
    """Monomials with no c4: Delta^k c6^eps."""
    if t < 0:
        return 0
    return _series([_geometric(24, t), {0: 1, 12: 1}], t).tolist()[t]


def tate_count(s: int, t: int, sign: bool) -> int:
    """Monomials a^e b^j d^m (m >= 0, e in {0,1}) at (s,t) in R + Rbd (sign=False)
    or Rb + Rd (sign=True), with R = F3[a, b^(+-2), d^2]/(a^2).

    Bidegrees: a (1,4), b (2,0), d (0,12).
    """
    n = 0
    for e in (0, 1):
        for j in range(-abs(s) - 2, abs(s) + 3):
            for m in range(0, max(t, 0) // 12 + 1):
                if e + 2 * j != s or 4 * e + 12 * m != t:
                    continue
                # R + Rbd: j and m both even or both odd
                if ((j + m) % 2 == 1) == sign:
                    n += 1
    return n


def coinvariant_group(t: int) -> tuple[int, list[int]]:
    """H_0(S3, Lambda)_t = (3, c4, c6)_t + a b^-1 d F3[Delta].

    The ideal has full rank in MF_t; a b^-1 d sits in degree 16.
    """
    tors = [3] if t >= 16 and (t - 16) % 24 == 0 else []
    return mf_count(t), tors


def smith_invariants(rows: list[list[int]]) -> list[int]:
    """Nonzero invariant factors via sympy, as positive integers."""
    if not rows or not rows[0]:
        return []
    D = smith_normal_form(sympy.Matrix(rows), domain=sympy.ZZ)
    return sorted(abs(int(D[i, i])) for i in range(min(D.shape)) if D[i, i] != 0)


def odd_cokernel(rows: list[list[int]], nrows: int) -> tuple[int, list[int]]:
    """(free rank, odd torsion orders > 1) of the cokernel over Z[1/2]."""
    inv = smith_invariants(rows) if rows and rows[0] else []
    tors = []
    for d in inv:
        while d % 2 == 0:
            d //= 2
        if d > 1:
            tors.append(d)
    return nrows - len(inv), sorted(tors)

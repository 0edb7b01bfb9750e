"""Sheaf cohomology of O(w) on Proj Lambda and the equivariant Serre pairing.

Weights: l1, l2 have weight 2, so O(w) has sections in Lambda of weight w
(topological degree 2w).  H^1 is computed as the cokernel of the Cech
differential for the cover D(l1), D(l2), truncated to a finite monomial box
per weight; the complex is diagonal in monomials, so the truncation is exact.

The group acts on Cech classes.  sigma does not preserve the cover, so its
action is transported through the third line l2 - l1 by a partial-fraction
splitting of the cocycle.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

from .exact_core import FgModule, matmul, presented_homology, transpose
from .lambda_rep import (
    LAMBDA_DUAL_SGN,
    SIGMA,
    TAU,
    WindowExceeded,
    lambda_generator_image,
    sgn,
    slice_at,
)

WEIGHT_WINDOW = 200


class NotPerfect(AssertionError):
    pass


class CommutationFailure(AssertionError):
    pass


@dataclass(frozen=True)
class SheafCohomologySlice:
    """h0 basis: exponents (i, j) >= 0; h1 basis: positive (a, b) meaning l1^-a l2^-b."""

    w: int
    h0_basis: tuple[tuple[int, int], ...]
    h1_basis: tuple[tuple[int, int], ...]

    @property
    def h0(self) -> FgModule:
        return FgModule(len(self.h0_basis), (), tuple(_mono(e) for e in self.h0_basis))

    @property
    def h1(self) -> FgModule:
        return FgModule(len(self.h1_basis), (), tuple(_mono((-a, -b)) for a, b in self.h1_basis))


def _mono(e) -> str:
    parts = [f"{n}^{k}" if k != 1 else n for n, k in zip(("l1", "l2"), e) if k]
    return "*".join(parts) or "1"


def h0_rank(w: int) -> int:
    return w // 2 + 1 if w >= 0 and w % 2 == 0 else 0


def h1_rank(w: int) -> int:
    return -w // 2 - 1 if w <= -4 and w % 2 == 0 else 0


def koszul_cohomology(w: int) -> SheafCohomologySlice:
    """H^0 and H^1 of O(w) from the truncated Cech/Koszul complex
    Lambda -> Lambda[1/l1] x Lambda[1/l2] -> Lambda[1/l1 l2]."""
    if abs(w) > WEIGHT_WINDOW:
        raise WindowExceeded(f"weight {w} outside ±{WEIGHT_WINDOW}")
    if w % 2:
        return SheafCohomologySlice(w, (), ())
    n = w // 2
    box = abs(n) + 2
    # Laurent monomials l1^i l2^(n-i) with |i|, |n-i| <= box
    c2 = [(i, n - i) for i in range(n - box, box + 1) if abs(n - i) <= box]
    c1a = [e for e in c2 if e[1] >= 0]  # Lambda[1/l1]
    c1b = [e for e in c2 if e[0] >= 0]  # Lambda[1/l2]
    c0 = [e for e in c2 if e[0] >= 0 and e[1] >= 0]
    idx2 = {e: k for k, e in enumerate(c2)}
    idx1 = {("a", e): k for k, e in enumerate(c1a)}
    idx1.update({("b", e): len(c1a) + k for k, e in enumerate(c1b)})
    n0, n1, n2 = len(c0), len(c1a) + len(c1b), len(c2)
    # augmentation d0: f -> (f, f);  Cech differential d1: (g, h) -> g - h
    d0 = [[0] * n0 for _ in range(n1)]
    for k, e in enumerate(c0):
        d0[idx1[("a", e)]][k] = 1
        d0[idx1[("b", e)]][k] = 1
    d1 = [[0] * n1 for _ in range(n2)]
    for e in c1a:
        d1[idx2[e]][idx1[("a", e)]] = 1
    for e in c1b:
        d1[idx2[e]][idx1[("b", e)]] = -1
    h0 = presented_homology(n1, [], d1) if n1 else None
    h1 = presented_homology(n2, transpose(d1, n2) if n1 else [], None)
    h0_basis = tuple(_support(g[: len(c1a)], c1a)[0] for g in h0.generators) if h0 else ()
    h1_basis = tuple(sorted(((-e[0], -e[1]) for e in (_support(g, c2)[0] for g in h1.generators)), reverse=True))
    if (h0 and h0.module.torsion) or h1.module.torsion:
        raise ValueError("sheaf cohomology of O(w) must be free")
    # global sections are exactly Lambda in weight w: the augmentation hits the kernel
    if h0 and any(h0.classify([row[k] for row in d0]) is None for k in range(n0)):
        raise ValueError("augmentation does not land in the sections")
    if len(h0_basis) != n0 or len(h0_basis) != h0_rank(w) or len(h1_basis) != h1_rank(w):
        raise ValueError(f"Koszul ranks at weight {w} disagree with the closed form")
    return SheafCohomologySlice(w, tuple(sorted(h0_basis, reverse=True)), h1_basis)


def _support(vec, basis):
    nz = [basis[k] for k, x in enumerate(vec) if x]
    if len(nz) != 1:
        raise ValueError("homology generator is not a monomial")
    return nz


# --------------------------------------------------------------------------
# group action on Cech classes
# --------------------------------------------------------------------------

# the three lines through the origin, as linear forms (coeff l1, coeff l2)
_LINES = ((1, 0), (0, 1), (-1, 1))


def _linear(g, i):
    img = lambda_generator_image(g, i).terms
    return tuple(img[e].to_int() if e in img else 0 for e in ((1, 0), (0, 1)))


def _line_of(form):
    for k, L in enumerate(_LINES):
        if form == L:
            return k, 1
        if form == (-L[0], -L[1]):
            return k, -1
    raise ValueError(f"{form} is not one of the three lines")


def _lp_mul(p, q):
    out: dict = {}
    for e1, c1 in p.items():
        for e2, c2 in q.items():
            e = (e1[0] + e2[0], e1[1] + e2[1])
            out[e] = out.get(e, 0) + c1 * c2
    return {e: c for e, c in out.items() if c}


def _lp_pow_line(k, n):
    """(line k)^n for n >= 0, or a monomial power when the line is l1 or l2."""
    L = _LINES[k]
    if k < 2:
        e = (n, 0) if k == 0 else (0, n)
        return {e: 1}
    if n < 0:
        raise ValueError("negative power of l2 - l1 is not a Laurent monomial")
    return {(i, n - i): comb(n, i) * L[0] ** i * L[1] ** (n - i) for i in range(n + 1)}


def _cocycle_on_standard_cover(P, Q, a, b, coeff):
    """Class of coeff * P^-a Q^-b given as a cocycle for the ordered pair of
    lines (P, Q); returned as a Laurent polynomial for the pair (l1, l2)."""
    if {P, Q} == {0, 1}:
        val = _lp_mul(_lp_pow_line(P, -a), _lp_pow_line(Q, -b))
        sign = 1 if (P, Q) == (0, 1) else -1
        return {e: sign * coeff * c for e, c in val.items()}
    # R is the remaining line; R = u P + v Q with units u, v
    R = 3 - P - Q
    u, v = _unit_combination(R, P, Q)
    N = a + b - 1
    # c_PQ = c_PR + c_RQ, split by the power of P in R^N
    pr: list = []  # terms P^(k-a) Q^(N-k-b) R^-N with k < a: poles along P, R
    rq: list = []
    for k in range(N + 1):
        c = coeff * comb(N, k) * u**k * v ** (N - k)
        if not c:
            continue
        (pr if k < a else rq).append((k - a, N - k - b, c))
    # keep the piece whose pair of lines is {l1, l2}
    if {P, R} == {0, 1}:
        pieces, pair = pr, (P, R)
    else:
        pieces, pair = rq, (R, Q)
    sign = 1 if pair == (0, 1) else -1
    out: dict = {}
    for e0, e1, c in pieces:
        term = _lp_mul(_lp_pow_line(P, e0), _lp_pow_line(Q, e1))
        term = _lp_mul(term, _lp_pow_line(R, -N))
        for e, x in term.items():
            out[e] = out.get(e, 0) + sign * c * x
    return {e: c for e, c in out.items() if c}


def _unit_combination(R, P, Q):
    LR, LP, LQ = _LINES[R], _LINES[P], _LINES[Q]
    for u in (1, -1):
        for v in (1, -1):
            if (u * LP[0] + v * LQ[0], u * LP[1] + v * LQ[1]) == LR:
                return u, v
    raise ValueError("lines are not unit combinations of each other")


def h1_action_matrix(g, w: int) -> list[list[int]]:
    """Matrix of g on H^1(O(w)) in the basis of koszul_cohomology(w).h1_basis."""
    basis = koszul_cohomology(w).h1_basis
    index = {e: k for k, e in enumerate(basis)}
    P, sP = _line_of(_linear(g, 1))
    Q, sQ = _line_of(_linear(g, 2))
    cols = []
    for a, b in basis:
        coeff = sP**a * sQ**b  # signs are units of order 2
        val = _cocycle_on_standard_cover(P, Q, a, b, coeff)
        col = [0] * len(basis)
        for (i, j), c in val.items():
            if i < 0 and j < 0:
                col[index[(-i, -j)]] += c
        cols.append(col)
    return transpose(cols, len(basis)) if cols else []


def h0_action_matrix(g, w: int) -> list[list[int]]:
    """Matrix of g on H^0(O(w)) = Lambda in weight w."""
    sl = slice_at_weight(w)
    return sl.matrix(g) if sl.rank else []


def slice_at_weight(w: int):
    from .lambda_rep import LAMBDA

    return slice_at(LAMBDA, 2 * w)


# --------------------------------------------------------------------------
# Serre pairing
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class SerrePairing:
    w: int
    h0_basis: tuple[tuple[int, int], ...]
    h1_basis: tuple[tuple[int, int], ...]
    matrix: tuple[tuple[int, ...], ...]

    def is_perfect(self) -> bool:
        n = len(self.h0_basis)
        if n != len(self.h1_basis):
            return False
        if n == 0:
            return True
        # a permutation matrix with unit entries
        for r in self.matrix:
            nz = [x for x in r if x]
            if len(nz) != 1 or abs(nz[0]) != 1:
                return False
        for c in zip(*self.matrix):
            if sum(1 for x in c if x) != 1:
                return False
        return True

    def to_text(self) -> str:
        if not self.h0_basis:
            return f"w={self.w}: empty pairing"
        head = [_mono((-a, -b)) for a, b in self.h1_basis]
        lines = [f"w={self.w}  rows: H^0(O({self.w}))  cols: H^1(O({-self.w - 4}))"]
        lines.append("\t".join([""] + head))
        for e, row in zip(self.h0_basis, self.matrix):
            lines.append("\t".join([_mono(e)] + [str(x) for x in row]))
        return "\n".join(lines)


def serre_pairing(w: int) -> SerrePairing:
    """Residue pairing H^0(O(w)) x H^1(O(-w-4)) -> Z: l1^i l2^j against
    l1^-(i+1) l2^-(j+1) pairs to 1, everything else to 0."""
    if w % 2:
        return SerrePairing(w, (), (), ())
    h0 = koszul_cohomology(w).h0_basis
    h1 = koszul_cohomology(-w - 4).h1_basis
    M = tuple(
        tuple(1 if (a, b) == (i + 1, j + 1) else 0 for (a, b) in h1) for (i, j) in h0
    )
    p = SerrePairing(w, h0, h1, M)
    if not p.is_perfect():
        raise NotPerfect(f"pairing at weight {w} is not perfect")
    return p


@dataclass(frozen=True)
class EquivarianceReport:
    w: int
    checks: tuple[tuple[str, bool], ...]

    @property
    def ok(self) -> bool:
        return all(ok for _, ok in self.checks)


def pairing_equivariance(w: int) -> EquivarianceReport:
    """Check pairing(g x, g y) = sgn(g) pairing(x, y) for g = sigma, tau."""
    p = serre_pairing(w)
    checks = []
    if not p.h0_basis:
        return EquivarianceReport(w, (("sigma", True), ("tau", True)))
    B = [list(r) for r in p.matrix]
    for name, g in (("sigma", SIGMA), ("tau", TAU)):
        A0 = h0_action_matrix(g, w)
        A1 = h1_action_matrix(g, -w - 4)
        lhs = matmul(matmul(transpose(A0), B), A1)
        rhs = [[sgn(g) * x for x in r] for r in B]
        checks.append((name, lhs == rhs))
    return EquivarianceReport(w, tuple(checks))


@dataclass(frozen=True)
class TwistedDualReport:
    w: int
    rank: int
    commutes: tuple[tuple[str, bool], ...]

    @property
    def ok(self) -> bool:
        return all(ok for _, ok in self.commutes)


def h1_as_twisted_dual(w: int) -> TwistedDualReport:
    """H^1(O(w)) is isomorphic to the sign-twisted dual of Lambda in weight -w-4.

    The isomorphism sends l1^-a l2^-b to the dual of l1^(a-1) l2^(b-1).
    """
    h1 = koszul_cohomology(w).h1_basis if w % 2 == 0 else ()
    t = 2 * w + 8  # topological degree of the dual slice
    dual = slice_at(LAMBDA_DUAL_SGN, t) if w % 2 == 0 else None
    n = len(h1)
    if dual is None or dual.rank != n:
        if n == 0 and (dual is None or dual.rank == 0):
            return TwistedDualReport(w, 0, (("sigma", True), ("tau", True)))
        raise CommutationFailure(f"rank mismatch at weight {w}")
    # dual basis is ordered like lambda_basis: l1^(m-k) l2^k for k = 0..m
    m = n - 1
    order = {(m - k + 1, k + 1): k for k in range(n)}
    Phi = [[0] * n for _ in range(n)]
    for col, e in enumerate(h1):
        Phi[order[e]][col] = 1
    checks = []
    for name, g in (("sigma", SIGMA), ("tau", TAU)):
        A1 = h1_action_matrix(g, w)
        Ad = dual.matrix(g)
        checks.append((name, matmul(Phi, A1) == matmul(Ad, Phi)))
    rep = TwistedDualReport(w, n, tuple(checks))
    if not rep.ok:
        raise CommutationFailure(f"weight {w}: {rep.commutes}")
    return rep

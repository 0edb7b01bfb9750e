"""Group, Tate and homology groups of C2, C3 and S3 acting on graded slices.

C3 uses the 2-periodic resolution (differentials sigma - 1 and the norm
N = 1 + sigma + sigma^2).  For S3 we pass to the subcomplex fixed by a
chain-level lift of tau; since 2 is a unit, its cohomology is the tau-fixed
part of the C3 answer.  ``s3_from_c3`` computes the same groups the long way
(residual action on C3 subquotients) and ``bar_oracle`` from the
inhomogeneous bar complex.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from typing import Iterable

import numpy as np

from .exact_core import (
    FgModule,
    Lattice,
    cokernel_odd,
    kernel_basis,
    matmul,
    matvec,
    presented_homology,
    rank_mod_p,
    rank_over_q,
    subquotient,
    transpose,
)
from .lambda_rep import (
    S3_ELEMENTS,
    EquivariantModule,
    Slice,
    compose,
    slice_at,
)


class BadAction(ValueError):
    pass


class ExactnessFailure(AssertionError):
    pass


class CostGuard(ValueError):
    pass


class RouteMismatch(AssertionError):
    pass


GROUPS = ("C2", "C3", "S3")
KINDS = ("cohomology", "homology", "tate")


@dataclass(frozen=True)
class CohomologyTable:
    group: str
    kind: str
    module: str
    entries: dict = field(default_factory=dict)

    def at(self, s: int, t: int) -> FgModule:
        return self.entries.get((s, t), FgModule())

    def nonzero(self) -> dict:
        return {k: v for k, v in sorted(self.entries.items()) if not v.is_zero}

    def to_records(self) -> list[dict]:
        return [
            {"s": s, "t": t, **m.to_record()} for (s, t), m in sorted(self.entries.items())
        ]


# --------------------------------------------------------------------------
# small matrix helpers
# --------------------------------------------------------------------------


def _eye(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def _lin(A, B, b=1):
    return [[x + b * y for x, y in zip(r, q)] for r, q in zip(A, B)]


def _neg(A):
    return [[-x for x in r] for r in A]


def _mats(sl: Slice):
    S = [list(r) for r in sl.sigma]
    T = [list(r) for r in sl.tau]
    return S, T


def check_action(sl: Slice) -> None:
    """Raise BadAction unless sigma^3 = tau^2 = 1 and tau sigma tau = sigma^2."""
    if not sl.rank:
        return
    S, T = _mats(sl)
    n = sl.rank
    S2 = matmul(S, S)
    if matmul(S2, S) != _eye(n):
        raise BadAction(f"sigma^3 != 1 in degree {sl.degree}")
    if matmul(T, T) != _eye(n):
        raise BadAction(f"tau^2 != 1 in degree {sl.degree}")
    if matmul(matmul(T, S), T) != S2:
        raise BadAction(f"tau sigma tau != sigma^2 in degree {sl.degree}")


def c3_differential(S, s: int):
    """Periodic C3 cochain differential leaving degree s."""
    n = len(S)
    if s % 2 == 0:
        return _lin(S, _eye(n), -1)
    return _lin(_lin(_eye(n), S), matmul(S, S))


def tau_lift(S, T, s: int):
    """Chain-level involution on the periodic complex lifting tau in degree s."""
    n = len(S)
    S2 = matmul(S, S)
    r = (_eye(n), _neg(S2), _neg(_eye(n)), S2)[s % 4]
    return matmul(T, r)


# --------------------------------------------------------------------------
# C3 and S3 per degree
# --------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _c3_degree(M: EquivariantModule, t: int) -> dict:
    sl = slice_at(M, t)
    n = sl.rank
    if n == 0:
        return {0: FgModule(), 1: FgModule()}
    check_action(sl)
    S, _ = _mats(sl)
    d_even = c3_differential(S, 0)
    d_odd = c3_differential(S, 1)
    out = {
        0: subquotient(d_even, d_odd, n),
        1: subquotient(d_odd, d_even, n),
    }
    return out


def _fixed_lattice(A) -> Lattice:
    n = len(A)
    kb = kernel_basis(_lin(A, _eye(n), -1), n)
    return Lattice.from_basis(kb, n) if kb else Lattice(n, ())


@lru_cache(maxsize=None)
def _s3_complex(M: EquivariantModule, t: int):
    """Restricted differentials X_s (s mod 4) on the tau-fixed subcomplex."""
    sl = slice_at(M, t)
    n = sl.rank
    S, T = _mats(sl)
    lats = [_fixed_lattice(tau_lift(S, T, s)) for s in range(4)]
    X = []
    for s in range(4):
        D = c3_differential(S, s)
        src, dst = lats[s], lats[(s + 1) % 4]
        cols = []
        for b in src.basis:
            c = dst.coordinates(matvec(D, b))
            if c is None:
                raise BadAction("differential does not preserve the fixed subcomplex")
            cols.append(c)
        X.append(transpose(cols, dst.rank) if cols else [[]] * 0)
    return lats, X


@lru_cache(maxsize=None)
def _s3_degree(M: EquivariantModule, t: int) -> dict:
    sl = slice_at(M, t)
    n = sl.rank
    if n == 0:
        return {s: FgModule() for s in range(4)}
    check_action(sl)
    lats, X = _s3_complex(M, t)
    out = {}
    for s in range(4):
        k = lats[s].rank
        if k == 0:
            out[s] = FgModule()
            continue
        out[s] = subquotient(_as_map(X[s], lats[(s + 1) % 4].rank, k), _as_map(X[(s - 1) % 4], k, lats[(s - 1) % 4].rank), k)
    return out


def _as_map(X, rows, cols):
    if rows == 0 or cols == 0:
        return [[0] * cols for _ in range(rows)] if rows else []
    return X


@lru_cache(maxsize=None)
def _invariant_rank(M: EquivariantModule, t: int, group: str) -> int:
    """Rank of M_t^G: kernel of sigma - 1, then of tau - 1 on that kernel."""
    sl = slice_at(M, t)
    n = sl.rank
    if not n:
        return 0
    check_action(sl)
    S, T = _mats(sl)
    if group == "C2":
        return n - rank_over_q(_lin(T, _eye(n), -1))
    K = kernel_basis(_lin(S, _eye(n), -1), n)
    if group == "C3" or not K:
        return len(K)
    TK = [matvec(_lin(T, _eye(n), -1), k) for k in K]
    return len(K) - rank_over_q(transpose(TK, n))


def group_cohomology_at(M: EquivariantModule, s: int, t: int, group: str = "S3", tate: bool = False) -> FgModule:
    """H^s(G, M_t), or the Tate group when ``tate`` (any integer s)."""
    if group not in GROUPS:
        raise ValueError(f"unknown group {group}")
    if not tate and s < 0:
        return FgModule()
    if s == 0 and not tate:
        return FgModule(_invariant_rank(M, t, group))
    if group == "C2":
        return FgModule()
    table = _c3_degree(M, t) if group == "C3" else _s3_degree(M, t)
    period = 2 if group == "C3" else 4
    return table[s % period]


def cyclic_cohomology(M: EquivariantModule, s_range: Iterable[int], t_range: Iterable[int], tate: bool = False) -> CohomologyTable:
    return _table(M, s_range, t_range, "C3", tate)


def s3_cohomology(M: EquivariantModule, s_range: Iterable[int], t_range: Iterable[int], tate: bool = False) -> CohomologyTable:
    return _table(M, s_range, t_range, "S3", tate)


def cohomology_table(M, s_range, t_range, group="S3", tate=False) -> CohomologyTable:
    return _table(M, s_range, t_range, group, tate)


def _table(M, s_range, t_range, group, tate):
    entries = {}
    s_range, t_range = list(s_range), list(t_range)
    for t in t_range:
        if not M.rank(t):
            continue
        for s in s_range:
            g = group_cohomology_at(M, s, t, group, tate)
            if not g.is_zero:
                entries[(s, t)] = with_labels(g, M, s, t, group, "tate" if tate else "cohomology")
    return CohomologyTable(group, "tate" if tate else "cohomology", M.name, entries)


# --------------------------------------------------------------------------
# residual tau action on C3 subquotients (cross-check route)
# --------------------------------------------------------------------------


def _c3_presented(S, s: int, tate: bool):
    n = len(S)
    out_map = c3_differential(S, s)
    if s == 0 and not tate:
        f_in = []
    else:
        D = c3_differential(S, s - 1)
        f_in = transpose(D, n)
    return presented_homology(n, f_in, out_map)


def s3_from_c3_at(M: EquivariantModule, s: int, t: int, tate: bool = False) -> FgModule:
    """tau-fixed part of H^s(C3, M_t), with tau induced on the subquotient."""
    if s < 0 and not tate:
        return FgModule()
    sl = slice_at(M, t)
    if not sl.rank:
        return FgModule()
    check_action(sl)
    S, T = _mats(sl)
    ph = _c3_presented(S, s, tate)
    if ph.module.is_zero:
        return FgModule()
    L = tau_lift(S, T, s)
    k = len(ph.generators)
    # induced matrix, columns = images of generators
    cols = [ph.classify(matvec(L, g)) for g in ph.generators]
    if any(c is None for c in cols):
        raise BadAction("lift of tau does not preserve cycles")
    Tind = transpose(cols, k)
    free_idx = [i for i, o in enumerate(ph.orders) if o == 0]
    tors_idx = [i for i, o in enumerate(ph.orders) if o]
    if any(ph.orders[i] != 3 for i in tors_idx):
        raise BadAction("residual action on torsion of order other than 3 is not supported")
    # square check mod the orders
    sq = matmul(Tind, Tind)
    for i in range(k):
        for j in range(k):
            want = int(i == j)
            o = ph.orders[i]
            if (sq[i][j] - want) % o if o else sq[i][j] != want:
                raise BadAction("induced tau is not an involution")
    free = 0
    if free_idx:
        A = [[Tind[i][j] - (i == j) for j in free_idx] for i in free_idx]
        free = len(free_idx) - rank_over_q(A)
    tors = 0
    if tors_idx:
        A = [[Tind[i][j] - (i == j) for j in tors_idx] for i in tors_idx]
        tors = len(tors_idx) - rank_mod_p(A, 3)
    return FgModule.from_divisors(free, [3] * tors)


def s3_from_c3(M: EquivariantModule, s_range, t_range, tate: bool = False) -> CohomologyTable:
    entries = {}
    for t in t_range:
        for s in s_range:
            g = s3_from_c3_at(M, s, t, tate)
            if not g.is_zero:
                entries[(s, t)] = g
    return CohomologyTable("S3", "tate" if tate else "cohomology", M.name, entries)


# --------------------------------------------------------------------------
# homology
# --------------------------------------------------------------------------


@lru_cache(maxsize=None)
def coinvariants_at(M: EquivariantModule, t: int, group: str = "S3") -> FgModule:
    """M_t modulo the span of g.m - m."""
    sl = slice_at(M, t)
    n = sl.rank
    if not n:
        return FgModule()
    S, T = _mats(sl)
    gens = []
    if group in ("C3", "S3"):
        gens.append(_lin(S, _eye(n), -1))
    if group in ("C2", "S3"):
        gens.append(_lin(T, _eye(n), -1))
    rel = [r1 + r2 for r1, r2 in zip(*gens)] if len(gens) == 2 else gens[0]
    return cokernel_odd(rel, rows=n)


def homology_at(M: EquivariantModule, h: int, t: int, group: str = "S3") -> FgModule:
    """H_h(G, M_t); for h >= 1 this is the Tate group in degree -h-1."""
    if h < 0:
        return FgModule()
    if h == 0:
        return coinvariants_at(M, t, group)
    return group_cohomology_at(M, -h - 1, t, group, tate=True)


def coinvariants(M: EquivariantModule, t_range, group: str = "S3") -> CohomologyTable:
    entries = {}
    for t in t_range:
        g = coinvariants_at(M, t, group)
        if not g.is_zero:
            entries[(0, t)] = with_labels(g, M, 0, t, group, "homology")
    return CohomologyTable(group, "homology", M.name, entries)


def homology_table(M: EquivariantModule, h_range, t_range, group: str = "S3") -> CohomologyTable:
    entries = {}
    for t in t_range:
        for h in h_range:
            g = homology_at(M, h, t, group)
            if not g.is_zero:
                entries[(h, t)] = with_labels(g, M, h, t, group, "homology")
    return CohomologyTable(group, "homology", M.name, entries)


# --------------------------------------------------------------------------
# norm sequence 0 -> H^-1 -> H_0 -> H^0 -> H^0_Tate -> 0
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class NormSequenceReport:
    module: str
    t: int
    tate_minus_one: FgModule
    coinvariants: FgModule
    invariants: FgModule
    tate_zero: FgModule
    junctions: tuple[tuple[str, bool], ...]

    @property
    def exact(self) -> bool:
        return all(ok for _, ok in self.junctions)


def _group_sum(M, S, T, n):
    """The S3 norm sum_g g as an n x n matrix."""
    S2 = matmul(S, S)
    N3 = _lin(_lin(_eye(n), S), S2)
    return _lin(N3, matmul(T, N3))


def norm_sequence_check(M: EquivariantModule, t: int, group: str = "S3") -> NormSequenceReport:
    """Verify exactness of the norm sequence in degree t.

    The norm M_G -> M^G is computed explicitly; its kernel must be the Tate
    group in degree -1 and its cokernel the Tate group in degree 0.
    """
    if group != "S3":
        raise ValueError("norm sequence check is implemented for S3")
    hm1 = group_cohomology_at(M, -1, t, "S3", tate=True)
    h0_ = coinvariants_at(M, t)
    H0 = group_cohomology_at(M, 0, t, "S3")
    th0 = group_cohomology_at(M, 0, t, "S3", tate=True)
    junctions = []
    sl = slice_at(M, t)
    n = sl.rank
    if n == 0:
        junctions = [("H^-1 -> H_0", True), ("H_0 -> H^0", True), ("H^0 -> H^0_tate", True)]
        return NormSequenceReport(M.name, t, hm1, h0_, H0, th0, tuple(junctions))
    S, T = _mats(sl)
    Nrm = _group_sum(M, S, T, n)
    # image lies in the invariants
    inv = Lattice.from_basis(kernel_basis(_lin(S, _eye(n), -1) + _lin(T, _eye(n), -1), n), n) if H0.free_rank else Lattice(n, ())
    imgs = [inv.coordinates(col) for col in transpose(Nrm, n)]
    junctions.append(("norm lands in invariants", all(c is not None for c in imgs)))
    # kernel of the norm on coinvariants: ker(N) / span(g m - m)
    rel = _lin(S, _eye(n), -1), _lin(T, _eye(n), -1)
    rel_cols = transpose(rel[0], n) + transpose(rel[1], n)
    ker_norm = subquotient(Nrm, transpose(rel_cols, n), n)
    junctions.append(("H^-1 = ker(norm on H_0)", ker_norm.same_group(hm1)))
    # cokernel of the norm inside the invariants
    if inv.rank:
        coker = cokernel_odd(transpose(imgs, inv.rank), rows=inv.rank)
    else:
        coker = FgModule()
    junctions.append(("H^0_tate = coker(norm into H^0)", coker.same_group(th0)))
    # rank accounting: H_0 and H^0 have the same free rank
    junctions.append(("free ranks of H_0 and H^0 agree", h0_.free_rank == H0.free_rank))
    rep = NormSequenceReport(M.name, t, hm1, h0_, H0, th0, tuple(junctions))
    if not rep.exact:
        bad = [name for name, ok in junctions if not ok]
        raise ExactnessFailure(f"{M.name} t={t}: fails at {bad}")
    return rep


# --------------------------------------------------------------------------
# bar complex oracle
# --------------------------------------------------------------------------


BAR_DIM_LIMIT = 40


def _group_matrices(sl: Slice):
    return [sl.matrix(g) for g in S3_ELEMENTS]


def _bar_differential(mats, s: int, n: int, modulus: int | None):
    """Inhomogeneous bar differential C^s -> C^{s+1}, cochains = maps G^s -> M."""
    G = len(S3_ELEMENTS)
    mult = [[S3_ELEMENTS.index(compose(S3_ELEMENTS[a], S3_ELEMENTS[b])) for b in range(G)] for a in range(G)]
    src_index = {tup: i for i, tup in enumerate(product(range(G), repeat=s))}
    rows = G ** (s + 1) * n
    cols = G**s * n
    D = np.zeros((rows, cols), dtype=object)
    mats = [np.array(m, dtype=object) for m in mats]
    for r, tup in enumerate(product(range(G), repeat=s + 1)):
        rb = r * n
        # g1 . f(g2..)
        c = src_index[tup[1:]] * n
        D[rb : rb + n, c : c + n] += mats[tup[0]]
        for i in range(s):
            merged = tup[:i] + (mult[tup[i]][tup[i + 1]],) + tup[i + 2 :]
            c = src_index[merged] * n
            for k in range(n):
                D[rb + k, c + k] += (-1) ** (i + 1)
        c = src_index[tup[:s]] * n
        for k in range(n):
            D[rb + k, c + k] += (-1) ** (s + 1)
    if modulus:
        D = D % modulus
    return D


def bar_oracle(M: EquivariantModule, s: int, t: int) -> FgModule:
    """H^s(S3, M_t) from the inhomogeneous bar complex, for s <= 3.

    Over Z[1/2] the positive-degree groups are killed by 3, so they are
    determined by F_3 ranks and the rational rank of the first differential.
    """
    if s < 0 or s > 3:
        raise CostGuard("bar oracle supports 0 <= s <= 3")
    sl = slice_at(M, t)
    n = sl.rank
    if n > BAR_DIM_LIMIT:
        raise CostGuard(f"slice rank {n} exceeds {BAR_DIM_LIMIT}")
    if n == 0:
        return FgModule()
    mats = _group_matrices(sl)
    d0 = _bar_differential(mats, 0, n, None)
    r0 = n - rank_over_q(d0.tolist())
    if s == 0:
        return FgModule(r0)
    ranks = [rank_mod_p(_bar_differential(mats, k, n, 3), 3) for k in range(s)]
    dims = [6**k * n for k in range(s)]
    h = [dims[k] - ranks[k] - (ranks[k - 1] if k else 0) for k in range(s)]
    k_prev = h[0] - r0
    for k in range(1, s):
        k_prev = h[k] - k_prev
    return FgModule.from_divisors(0, [3] * k_prev)


# --------------------------------------------------------------------------
# dual modules
# --------------------------------------------------------------------------


def dual_cohomology_at(M: EquivariantModule, s: int, t: int) -> tuple[FgModule, FgModule]:
    """H^s(S3, M dual) in degree t by the direct route and by universal coefficients.

    The second route reads it off from homology of M: Hom(H_s(M)_{-t}) plus
    Ext(H_{s-1}(M)_{-t}).
    """
    D = M.dualized()
    direct = group_cohomology_at(D, s, t, "S3")
    hs = homology_at(M, s, -t)
    hs1 = homology_at(M, s - 1, -t) if s >= 1 else FgModule()
    via = FgModule.from_divisors(hs.free_rank, hs1.torsion)
    return direct, via


def dual_cohomology(M: EquivariantModule, s_range, t_range) -> CohomologyTable:
    entries = {}
    for t in t_range:
        for s in s_range:
            direct, via = dual_cohomology_at(M, s, t)
            if not direct.same_group(via):
                raise RouteMismatch(f"H^{s}(S3, {M.name} dual)_{t}: direct {direct} vs {via}")
            if not direct.is_zero:
                entries[(s, t)] = direct
    return CohomologyTable("S3", "cohomology", M.dualized().name, entries)


# --------------------------------------------------------------------------
# localized coefficients: cohomology commutes with the direct system
# --------------------------------------------------------------------------


def _s3_presented(M: EquivariantModule, s: int, t: int):
    """(tau-fixed lattice in degree s, presented H^s) for the S3 complex."""
    lats, X = _s3_complex(M, t)
    k = lats[s % 4].rank
    if k == 0:
        return lats[s % 4], None
    out_rank = lats[(s + 1) % 4].rank
    g_out = X[s % 4] if out_rank else None
    f_in = None
    if s >= 1 and lats[(s - 1) % 4].rank:
        f_in = transpose(X[(s - 1) % 4], lats[(s - 1) % 4].rank)
    return lats[s % 4], presented_homology(k, f_in, g_out)


def induced_map(M: EquivariantModule, mult, s: int, t: int, t_out: int) -> list[list[int]]:
    """Matrix of the map H^s(S3, M_t) -> H^s(S3, M_t_out) induced by an
    equivariant map ``mult`` (matrix M_t -> M_t_out), in generator coordinates.

    Torsion coordinates are reduced modulo their orders.
    """
    lat_in, ph_in = _s3_presented(M, s, t)
    lat_out, ph_out = _s3_presented(M, s, t_out)
    if ph_in is None or ph_out is None or not ph_in.generators or not ph_out.generators:
        return []
    B = transpose([list(b) for b in lat_in.basis])
    cols = []
    for g in ph_in.generators:
        image = matvec([list(r) for r in mult], matvec(B, g))
        c = lat_out.coordinates(image)
        if c is None:
            raise BadAction("multiplication does not preserve the fixed subcomplex")
        x = ph_out.classify(c)
        if x is None:
            raise BadAction("multiplication does not send cycles to cycles")
        cols.append(x)
    return transpose(cols, len(ph_out.generators))


@dataclass(frozen=True)
class LocalizedCohomology:
    """H^s of a truncated direct system: stage groups and transition maps."""

    s: int
    t: int
    stages: tuple[FgModule, ...]
    transitions: tuple[tuple[tuple[int, ...], ...], ...]

    @property
    def transitions_vanish(self) -> bool:
        return all(not any(any(r) for r in T) for T in self.transitions)

    @property
    def transitions_injective(self) -> bool:
        return all(
            not T or rank_over_q([list(r) for r in T]) == len(T[0]) for T in self.transitions
        ) and all(a.free_rank <= b.free_rank for a, b in zip(self.stages, self.stages[1:]))

    @property
    def colimit_is_zero(self) -> bool:
        """Exact: when every transition vanishes, every class dies after one step."""
        return self.transitions_vanish

    def new_generators(self) -> list[int]:
        """Free rank added at each transition (cokernel ranks of injective maps)."""
        return [b.free_rank - a.free_rank for a, b in zip(self.stages, self.stages[1:])]


def localized_cohomology(L, s: int, t: int) -> LocalizedCohomology:
    """H^s(S3, M[m^-1])_t as the direct system of H^s(S3, M)_{t + k deg m}."""
    from .lambda_rep import multiplication_matrix

    M, step = L.module, L.form.degree
    stages, trans = [], []
    for k in range(L.depth + 1):
        stages.append(group_cohomology_at(M, s, t + k * step, "S3"))
    for k in range(L.depth):
        u = t + k * step
        if stages[k].is_zero or stages[k + 1].is_zero:
            trans.append(())
            continue
        mult = multiplication_matrix(M, L.form, u)
        T = induced_map(M, mult, s, u, u + step)
        trans.append(tuple(tuple(r) for r in T))
    return LocalizedCohomology(s, t, tuple(stages), tuple(trans))


# --------------------------------------------------------------------------
# labels
# --------------------------------------------------------------------------


def format_monomial(factors: Iterable[tuple[str, int]]) -> str:
    parts = [(n, e) for n, e in factors if e]
    if not parts:
        return "1"
    sep = "·" if any(len(n) > 1 for n, _ in parts) else ""
    return sep.join(n if e == 1 else f"{n}^{e}" for n, e in parts)


def mf_monomials(t: int) -> list[tuple[int, int, int]]:
    """Exponents (a, eps, k) with c4^a c6^eps Delta^k of degree t."""
    out = []
    if t < 0:
        return out
    for k in range(t // 24 + 1):
        for eps in (0, 1):
            rest = t - 24 * k - 12 * eps
            if rest >= 0 and rest % 8 == 0:
                out.append((rest // 8, eps, k))
    return out


def mf_label(a: int, eps: int, k: int) -> str:
    return format_monomial([("c4", a), ("c6", eps), ("Δ", k)])


def tate_monomials(s: int, t: int, sign: bool) -> list[tuple[int, int, int]]:
    """Exponents (eps, j, m) of a^eps b^j d^m in the tau-(anti)fixed Tate part."""
    out = []
    for eps in (0, 1):
        if (s - eps) % 2:
            continue
        j = (s - eps) // 2
        rest = t - 4 * eps
        if rest < 0 or rest % 12:
            continue
        m = rest // 12
        if (j + m) % 2 == int(sign):
            out.append((eps, j, m))
    return out


def tate_label(eps: int, j: int, m: int) -> str:
    """Name a^eps b^j d^m through alpha = a, beta = b d and Delta = 16 d^2."""
    rest = m - j
    extra_d = rest % 2
    return format_monomial([("α", eps), ("β", j), ("Δ", rest // 2), ("d", extra_d)])


def closed_form_labels(M: EquivariantModule, s: int, t: int, group: str, kind: str) -> list[str] | None:
    """Names of the generators predicted by the closed forms, when known."""
    if group != "S3" or M.base != "lambda" or M.dual or M.shift:
        return None
    if kind == "cohomology" and s == 0:
        if M.sign:
            return ["d" + ("·" + mf_label(*e) if mf_label(*e) != "1" else "") for e in mf_monomials(t - 12)]
        return [mf_label(*e) for e in mf_monomials(t)]
    if kind == "homology":
        if s == 0 and not M.sign:
            free = [
                format_monomial([("3", 1), ("Δ", k)]) if a == 0 and eps == 0 else mf_label(a, eps, k)
                for a, eps, k in mf_monomials(t)
            ]
            tors = [format_monomial([("α", 1), ("β", -1), ("Δ", k + 1)]) for k in range(t // 24 + 1) if t == 16 + 24 * k]
            return free + tors
        if s >= 1:
            return [tate_label(*e) for e in tate_monomials(-s - 1, t, M.sign)]
        return None
    return [tate_label(*e) for e in tate_monomials(s, t, M.sign)]


def with_labels(g: FgModule, M: EquivariantModule, s: int, t: int, group: str, kind: str) -> FgModule:
    labels = closed_form_labels(M, s, t, group, kind)
    if labels is None or len(labels) != g.free_rank + len(g.torsion):
        labels = [f"g{i + 1}" for i in range(g.free_rank + len(g.torsion))]
    return FgModule(g.free_rank, g.torsion, tuple(labels))

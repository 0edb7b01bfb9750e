"""Homotopy fixed point, Tate and homotopy orbit spectral sequences.

Every E2 page is built twice: symbolically (named monomials in alpha, beta,
Delta and modular forms) and numerically from group_cohomology; the two must
agree bidegree by bidegree.  Tate differentials come from the two rules
d5(Delta) = alpha beta^2 and d9(alpha Delta^2) = beta^5 by the Leibniz rule;
the fixed point and orbit spectral sequences receive theirs by transport
along the maps to and from the Tate spectral sequence.  Pages are turned
numerically with exact_core.presented_homology.

Bidegrees are (s, t) with stem t - s; d_r goes (s, t) -> (s + r, t + r - 1).
Classes coming from the dual summand of pi_* Tmf(2) are placed one step up
in both s and t, which keeps their stem and makes the Tate page the ring
Z/3[alpha, beta^{+-1}, Delta^{+-1}]/(alpha^2).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .exact_core import FgModule, PresentedHomology, presented_homology, rank_mod_p
from .group_cohomology import (
    format_monomial,
    group_cohomology_at,
    homology_at,
    mf_monomials,
)
from .lambda_rep import LAMBDA, EquivariantModule

MOD = 3
LAST_PAGE = 10
MIN_DEPTH = 19  # s-depth needed for a 9-deep safety margin above the vanishing line
T_MARGIN = 8
S_MARGIN = 9
VANISHING_LINE = 10

DUAL_PART = EquivariantModule("lambda", dual=True, sign=True, shift=-9)
KINDS = ("hfpss", "tate", "orbit")


class LayerMismatch(AssertionError):
    pass


class BidegreeViolation(ValueError):
    pass


class NonSquareZero(AssertionError):
    pass


class TransferMismatch(AssertionError):
    pass


class NormMismatch(AssertionError):
    pass


class NoRule(ValueError):
    pass


# --------------------------------------------------------------------------
# Tate monomials alpha^eps beta^j Delta^k
# --------------------------------------------------------------------------


def tate_bidegree(m) -> tuple[int, int]:
    eps, j, k = m
    return eps + 2 * j, 4 * eps + 12 * j + 24 * k


def tate_stem(m) -> int:
    s, t = tate_bidegree(m)
    return t - s


def tate_name(m) -> str:
    eps, j, k = m
    return format_monomial([("α", eps), ("β", j), ("Δ", k)])


def is_primal(m) -> bool:
    """Monomials coming from H^*(S3, Lambda) rather than the dual summand."""
    _, j, k = m
    return 2 * k + j >= 0


def tate_monomials_at(s: int, t: int) -> list[tuple[int, int, int]]:
    out = []
    for eps in (0, 1):
        if (s - eps) % 2:
            continue
        j = (s - eps) // 2
        rest = t - 4 * eps - 12 * j
        if rest % 24:
            continue
        out.append((eps, j, rest // 24))
    return out


def _mono_mul(a, b):
    eps = a[0] + b[0]
    if eps > 1:
        return None
    return (eps, a[1] + b[1], a[2] + b[2])


def _mono_sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


# --------------------------------------------------------------------------
# differential rules and the Leibniz rule
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class DifferentialRule:
    page: int
    source: tuple[int, int, int]
    target: tuple[tuple[tuple[int, int, int], int], ...]

    def __post_init__(self):
        s, t = tate_bidegree(self.source)
        for m, _ in self.target:
            if tate_bidegree(m) != (s + self.page, t + self.page - 1):
                raise BidegreeViolation(
                    f"d{self.page}({tate_name(self.source)}) = {tate_name(m)}: "
                    f"{(s, t)} -> {tate_bidegree(m)} is not a ({self.page}, {self.page - 1}) shift"
                )

    def __str__(self):
        rhs = " + ".join(tate_name(m) if c == 1 else f"{c}{tate_name(m)}" for m, c in self.target)
        return f"d{self.page}({tate_name(self.source)}) = {rhs}"


DEFAULT_RULES = (
    DifferentialRule(5, (0, 0, 1), (((1, 2, 0), 1),)),
    DifferentialRule(9, (1, 0, 2), (((0, 5, 0), 1),)),
)

# multiplicative generators of E_r for the Tate page, odd ones first
PAGE_GENERATORS = {
    5: ((1, 0, 0), (0, 1, 0), (0, 0, 1)),
    9: ((1, 0, 2), (0, 1, 0), (0, 0, 3)),
}


def _generators_for(page: int):
    keys = sorted(k for k in PAGE_GENERATORS if k <= page)
    if not keys:
        return None
    return PAGE_GENERATORS[keys[-1]]


def _decompose(m, gens):
    """Integer exponents n with prod gens^n = m, or None."""
    # solve the 3x3 system exactly
    A = [[Fraction(gens[c][r]) for c in range(3)] + [Fraction(m[r])] for r in range(3)]
    for c in range(3):
        piv = next(r for r in range(c, 3) if A[r][c] != 0)
        A[c], A[piv] = A[piv], A[c]
        A[c] = [x / A[c][c] for x in A[c]]
        for r in range(3):
            if r != c and A[r][c]:
                A[r] = [x - A[r][c] * y for x, y in zip(A[r], A[c])]
    n = [A[r][3] for r in range(3)]
    if any(x.denominator != 1 for x in n):
        return None
    n = [int(x) for x in n]
    for g, e in zip(gens, n):
        if tate_stem(g) % 2 and e not in (0, 1):
            return None
    return n


def leibniz(page: int, m, rules: Iterable[DifferentialRule]) -> dict:
    """d_page of the monomial m, as {monomial: coefficient mod 3}."""
    gens = _generators_for(page)
    rules = [r for r in rules if r.page == page]
    if gens is None or not rules:
        return {}
    dgen = {}
    for g in gens:
        dgen[g] = {}
    for r in rules:
        if r.source not in dgen:
            raise NoRule(f"rule source {tate_name(r.source)} is not a generator of E{page}")
        dgen[r.source] = dict(r.target)
    n = _decompose(m, gens)
    if n is None:
        raise NoRule(f"{tate_name(m)} is not a monomial in the generators of E{page}")
    out: dict = {}
    prefix_stem = 0
    for i, (g, e) in enumerate(zip(gens, n)):
        if e:
            rest = _mono_sub(m, g)
            suffix_stem = sum(tate_stem(gg) * ee for gg, ee in zip(gens[i + 1 :], n[i + 1 :]))
            for tm, c in dgen[g].items():
                prod = _mono_mul(rest, tm)
                if prod is None:
                    continue
                sign = (-1) ** (prefix_stem % 2) * (-1) ** ((tate_stem(tm) * suffix_stem) % 2)
                out[prod] = (out.get(prod, 0) + sign * e * c) % MOD
        prefix_stem += tate_stem(g) * e
    return {k: v for k, v in out.items() if v}


# --------------------------------------------------------------------------
# pages
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class SymbolicClass:
    """A named class; ``order`` is 0 for Z[1/2] and 3 for Z/3.

    ``image`` is the Tate monomial this E2 class maps to (fixed point side)
    or comes from (orbit side), with a coefficient; ``side`` records whether
    the class comes from Lambda or from the dual summand.
    """

    name: str
    s: int
    t: int
    order: int
    tags: tuple = ()
    image: tuple | None = None
    side: str = "primal"

    @property
    def stem(self) -> int:
        return self.t - self.s

    @property
    def bidegree(self) -> tuple[int, int]:
        return self.s, self.t


@dataclass(frozen=True)
class DifferentialRecord:
    page: int
    source: tuple[int, int]
    source_name: str
    target: tuple[int, int]
    coefficients: tuple[tuple[str, int], ...]

    def to_record(self) -> dict:
        return {
            "page": self.page,
            "source": {"s": self.source[0], "t": self.source[1], "class": self.source_name},
            "target": {"s": self.target[0], "t": self.target[1]},
            "coefficients": [{"class": n, "coefficient": c} for n, c in self.coefficients],
        }


@dataclass(frozen=True)
class PageEntry:
    classes: tuple[SymbolicClass, ...]
    reps: tuple[tuple[int, ...], ...]  # E2 coordinates of each class

    @property
    def module(self) -> FgModule:
        free = sum(1 for c in self.classes if c.order == 0)
        return FgModule.from_divisors(free, [c.order for c in self.classes if c.order], ())

    def labeled_module(self) -> FgModule:
        m = self.module
        free = [c.name for c in self.classes if c.order == 0]
        tors = [c.name for c in self.classes if c.order]
        return FgModule(m.free_rank, m.torsion, tuple(free + tors))


@dataclass(frozen=True)
class BigradedPage:
    index: int
    entries: dict  # (s, t) -> PageEntry
    differentials: dict  # (s, t) -> matrix rows x cols over the target/source classes
    log: tuple[DifferentialRecord, ...] = ()

    def at(self, s: int, t: int) -> tuple[SymbolicClass, ...]:
        e = self.entries.get((s, t))
        return e.classes if e else ()

    def nonzero(self):
        return {b: e for b, e in sorted(self.entries.items()) if e.classes}


@dataclass(frozen=True)
class Window:
    s_max: int = 12
    t_min: int = -96
    t_max: int = 96

    def __post_init__(self):
        if self.t_min >= self.t_max:
            raise ValueError("window needs t_min < t_max")
        if self.s_max < 0:
            raise ValueError("window needs s_max >= 0")

    @property
    def depth(self) -> int:
        """s-depth actually computed: s_max is a lower bound, extended for safety margins."""
        return max(self.s_max, MIN_DEPTH)

    def s_range(self, kind: str) -> range:
        S = self.depth
        return {"hfpss": range(0, S + 1), "tate": range(-S, S + 1), "orbit": range(-S, 2)}[kind]

    def safe_s(self, kind: str) -> range:
        S = self.depth
        return {
            "hfpss": range(0, S - S_MARGIN + 1),
            "tate": range(-S + S_MARGIN, S - S_MARGIN + 1),
            "orbit": range(-S + S_MARGIN, 2),
        }[kind]

    def t_safe(self, t: int) -> bool:
        return self.t_min + T_MARGIN <= t <= self.t_max - T_MARGIN

    def is_safe(self, kind: str, s: int, t: int) -> bool:
        return s in self.safe_s(kind) and self.t_safe(t)

    def contains(self, kind: str, s: int, t: int) -> bool:
        return s in self.s_range(kind) and self.t_min <= t <= self.t_max


# --------------------------------------------------------------------------
# E2 pages: symbolic layer
# --------------------------------------------------------------------------


def _mf_name(a, eps, k, three=False) -> str:
    if three and a == 0 and eps == 0:
        return "3" + ("" if k == 0 else format_monomial([("Δ", k)]))
    return format_monomial([("c4", a), ("c6", eps), ("Δ", k)])


def _dual_free_name(a, eps, m, three: bool) -> str:
    prefix = "3" if three and a == 0 and eps == 0 else ""
    body = format_monomial([("Δ", m), ("d", 1), ("c4", a), ("c6", eps)])
    return f"({prefix}{body})∨"


def _tate_class(m, s, t, side=None, shift=0):
    return SymbolicClass(
        tate_name(m), s, t, MOD, tags=m, image=(m, 1), side=side or ("primal" if is_primal(m) else "dual")
    )


def symbolic_e2(kind: str, s: int, t: int) -> list[SymbolicClass]:
    out: list[SymbolicClass] = []
    if kind == "tate":
        return [_tate_class(m, s, t) for m in tate_monomials_at(s, t)]
    if kind == "hfpss":
        if s < 0:
            return out
        if s == 0:
            for a, eps, k in mf_monomials(t):
                img = ((0, 0, k), 1) if a == 0 and eps == 0 else None
                out.append(SymbolicClass(_mf_name(a, eps, k), 0, t, 0, tags=("MF", a, eps, k), image=img))
            return out
        if s == 1:
            for m in tate_monomials_at(1, t):
                if is_primal(m):
                    out.append(_tate_class(m, s, t))
            u = -t - 8
            for a, eps, k in mf_monomials(u - 12):
                img = ((1, 0, -1 - k), 1) if a == 0 and eps == 0 else None
                out.append(
                    SymbolicClass(_dual_free_name(a, eps, k, True), 1, t, 0, tags=("dualMF", a, eps, k), image=img, side="dual")
                )
            return out
        return [_tate_class(m, s, t) for m in tate_monomials_at(s, t)]
    if kind == "orbit":
        if s > 1:
            return out
        if s == 1:
            u = -t - 8
            for a, eps, k in mf_monomials(u - 12):
                out.append(
                    SymbolicClass(_dual_free_name(a, eps, k, False), 1, t, 0, tags=("dualMF", a, eps, k), side="dual")
                )
            for m in tate_monomials_at(0, t):
                if not is_primal(m):
                    out.append(SymbolicClass(tate_name(m), 1, t, MOD, tags=m, image=(m, 1), side="dual"))
            return out
        if s == 0:
            for a, eps, k in mf_monomials(t):
                out.append(SymbolicClass(_mf_name(a, eps, k, True), 0, t, 0, tags=("MF", a, eps, k)))
        for m in tate_monomials_at(s - 1, t):
            out.append(
                SymbolicClass(tate_name(m), s, t, MOD, tags=m, image=(m, 1), side="primal" if is_primal(m) else "dual")
            )
        return out
    raise ValueError(f"unknown spectral sequence {kind}")


# --------------------------------------------------------------------------
# E2 pages: numeric layer
# --------------------------------------------------------------------------


def numeric_e2(kind: str, s: int, t: int) -> tuple[FgModule, FgModule]:
    """(primal part, dual part) of the E2 entry from first-principles cohomology."""
    if kind == "tate":
        return (
            group_cohomology_at(LAMBDA, s, t, "S3", tate=True),
            group_cohomology_at(DUAL_PART, s - 1, t - 1, "S3", tate=True),
        )
    if kind == "hfpss":
        if s < 0:
            return FgModule(), FgModule()
        return (
            group_cohomology_at(LAMBDA, s, t, "S3"),
            group_cohomology_at(DUAL_PART, s - 1, t - 1, "S3") if s >= 1 else FgModule(),
        )
    if kind == "orbit":
        if s > 1:
            return FgModule(), FgModule()
        return (
            homology_at(LAMBDA, -s, t) if s <= 0 else FgModule(),
            homology_at(DUAL_PART, 1 - s, t - 1),
        )
    raise ValueError(kind)


def _summary(classes) -> FgModule:
    free = sum(1 for c in classes if c.order == 0)
    return FgModule.from_divisors(free, [c.order for c in classes if c.order])


def build_e2(kind: str, window: Window, validate: bool = True) -> dict:
    entries = {}
    for s in window.s_range(kind):
        for t in range(window.t_min, window.t_max + 1):
            classes = symbolic_e2(kind, s, t)
            if validate:
                num_p, num_d = numeric_e2(kind, s, t)
                sym_p = _summary([c for c in classes if c.side == "primal"])
                sym_d = _summary([c for c in classes if c.side == "dual"])
                if not (sym_p.same_group(num_p) and sym_d.same_group(num_d)):
                    raise LayerMismatch(
                        f"{kind} E2 at (s,t)=({s},{t}): symbolic {sym_p} + {sym_d} "
                        f"vs computed {num_p} + {num_d}"
                    )
            if classes:
                n = len(classes)
                reps = tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
                entries[(s, t)] = PageEntry(tuple(classes), reps)
    return entries


def build_hfpss_e2(window: Window) -> BigradedPage:
    return BigradedPage(2, build_e2("hfpss", window), {})


def build_tate_e2(window: Window) -> BigradedPage:
    return BigradedPage(2, build_e2("tate", window), {})


# --------------------------------------------------------------------------
# page turning
# --------------------------------------------------------------------------


def _target(b, r):
    return (b[0] + r, b[1] + r - 1)


def _source(b, r):
    return (b[0] - r, b[1] - r + 1)


def _class_name(vec, classes) -> str:
    nz = [(i, c) for i, c in enumerate(vec) if c]
    if len(nz) == 1:
        i, c = nz[0]
        c = abs(c)
        name = classes[i].name
        return name if c == 1 else f"{c}{name}"
    return " + ".join(
        (classes[i].name if abs(c) == 1 else f"{abs(c)}{classes[i].name}") for i, c in nz
    )


def turn_page(entries: dict, diffs: dict, r: int) -> tuple[dict, dict]:
    """Homology of (E_r, d_r); returns new entries and the per-bidegree
    presented-homology objects used to classify E_r cycles."""
    new, turns = {}, {}
    for b, entry in entries.items():
        n = len(entry.classes)
        rel_mid = [[c.order if i == j else 0 for j in range(n)] for i, c in enumerate(entry.classes) if c.order]
        src = _source(b, r)
        f_in = []
        if src in diffs:
            M = diffs[src]
            f_in = [[M[i][j] for i in range(n)] for j in range(len(M[0]) if M else 0)]
        tgt = _target(b, r)
        g_out, rel_out = None, []
        if b in diffs and tgt in entries:
            g_out = diffs[b]
            tcls = entries[tgt].classes
            k = len(tcls)
            rel_out = [[c.order if i == j else 0 for j in range(k)] for i, c in enumerate(tcls) if c.order]
        ph = presented_homology(n, f_in, g_out, rel_mid, rel_out)
        turns[b] = ph
        classes, reps = [], []
        for vec, order in zip(ph.generators, ph.orders):
            base = entry.classes[next(i for i, c in enumerate(vec) if c)]
            name = _class_name(vec, entry.classes)
            rep = [0] * len(entry.reps[0])
            for i, c in enumerate(vec):
                if c:
                    rep = [x + c * y for x, y in zip(rep, entry.reps[i])]
            classes.append(
                SymbolicClass(name, b[0], b[1], order, tags=base.tags, image=None, side=base.side)
            )
            reps.append(tuple(rep))
        if classes:
            new[b] = PageEntry(tuple(classes), tuple(reps))
    return new, turns


# --------------------------------------------------------------------------
# spectral sequence runs
# --------------------------------------------------------------------------


@dataclass
class SpectralSequenceRun:
    kind: str
    window: Window
    e2: dict
    pages: list = field(default_factory=list)  # BigradedPage for r = 2..LAST_PAGE
    turns: dict = field(default_factory=dict)  # r -> {b: PresentedHomology}
    log: list = field(default_factory=list)
    rules: tuple = DEFAULT_RULES

    def page(self, r: int) -> BigradedPage:
        return self.pages[r - 2]

    @property
    def e_infinity(self) -> BigradedPage:
        return self.pages[-1]

    def classify(self, b, vec, r: int):
        """E_r coordinates of the E2 vector ``vec`` at b, or None if not an E_r cycle."""
        v = list(vec)
        for rr in sorted(self.turns):
            if rr >= r:
                break
            ph: PresentedHomology | None = self.turns[rr].get(b)
            if ph is None:
                if any(v):
                    return None
                return []
            v = ph.classify(v)
            if v is None:
                return None
        return v

    def e2_index(self, b) -> dict:
        e = self.e2.get(b)
        if not e:
            return {}
        return {c.tags: i for i, c in enumerate(e.classes)}


def _tate_differential(tate: SpectralSequenceRun, r: int, b, coords, rules) -> dict:
    """d_r of the Tate E_r element with coordinates ``coords`` at b, as an
    E2-level element {monomial: coeff} at the target bidegree."""
    entry = tate.page(r).entries.get(b)
    out: dict = {}
    if entry is None:
        return out
    e2 = tate.e2[b].classes
    for c, rep in zip(coords, entry.reps):
        if not c % MOD:
            continue
        for i, x in enumerate(rep):
            if x % MOD:
                try:
                    value = leibniz(r, e2[i].tags, rules)
                except NoRule:
                    # a survivor only because its killer lies outside the window
                    if tate.window.is_safe("tate", *b):
                        raise
                    value = {}
                for m, y in value.items():
                    out[m] = (out.get(m, 0) + c * x * y) % MOD
    return {m: v for m, v in out.items() if v}


def _to_vector(run: SpectralSequenceRun, b, element: dict, shift_s: int = 0) -> list[int] | None:
    """E2 vector at b of a Tate-level element; monomials absent from the
    run's E2 at b are dropped (they map to zero)."""
    e = run.e2.get(b)
    if e is None:
        return None
    idx = run.e2_index(b)
    vec = [0] * len(e.classes)
    for m, c in element.items():
        if m in idx:
            vec[idx[m]] += c
    return vec


def _matrix_from_columns(cols, nrows):
    return [[cols[j][i] for j in range(len(cols))] for i in range(nrows)]


def _check_square_zero(run: SpectralSequenceRun, entries, diffs, r):
    for b, M in diffs.items():
        b2 = _target(b, r)
        if b2 not in diffs:
            continue
        N = diffs[b2]
        tcls = entries[_target(b2, r)].classes
        for i in range(len(N)):
            for j in range(len(M[0])):
                val = sum(N[i][k] * M[k][j] for k in range(len(M)))
                o = tcls[i].order
                if (val % o) if o else val:
                    raise NonSquareZero(f"{run.kind}: d{r} o d{r} != 0 from {b}")


def _record(r, b, cls, tgt, col, tcls) -> DifferentialRecord:
    coeffs = tuple((tcls[i].name, int(c)) for i, c in enumerate(col) if c)
    return DifferentialRecord(r, b, cls.name, tgt, coeffs)


def _reduce_col(col, tcls):
    return [c % t.order if t.order else c for c, t in zip(col, tcls)]


def run_tate_ss(window: Window, rules: Iterable[DifferentialRule] = DEFAULT_RULES, validate: bool = True) -> SpectralSequenceRun:
    rules = tuple(rules)
    run = SpectralSequenceRun("tate", window, build_e2("tate", window, validate), rules=rules)
    entries = run.e2
    for r in range(2, LAST_PAGE + 1):
        diffs, log = {}, []
        if any(rule.page == r for rule in rules) and r < LAST_PAGE:
            run.pages.append(BigradedPage(r, entries, {}))  # provisional, for reps lookup
            for b, entry in entries.items():
                tgt = _target(b, r)
                if tgt not in entries:
                    continue
                tcls = entries[tgt].classes
                cols = []
                for j, cls in enumerate(entry.classes):
                    coords = [int(i == j) for i in range(len(entry.classes))]
                    elem = _tate_differential(run, r, b, coords, rules)
                    vec = _to_vector(run, tgt, elem)
                    tc = run.classify(tgt, vec, r) if any(vec) else [0] * len(tcls)
                    if tc is None:
                        raise TransferMismatch(f"tate: d{r} of {cls.name} is not a cycle")
                    tc = _reduce_col(tc, tcls)
                    cols.append(tc)
                    if any(tc):
                        log.append(_record(r, b, cls, tgt, tc, tcls))
                if any(any(c) for c in cols):
                    diffs[b] = _matrix_from_columns(cols, len(tcls))
            run.pages.pop()
        _check_square_zero(run, entries, diffs, r)
        run.pages.append(BigradedPage(r, entries, diffs, tuple(log)))
        run.log.extend(log)
        if diffs:
            entries, run.turns[r] = turn_page(entries, diffs, r)
    return run


def _image_vector(run: SpectralSequenceRun, b, rep) -> dict:
    """Tate-level element {monomial: coeff} attached to an E2 vector of a
    fixed point or orbit run (via the E2 class images)."""
    out: dict = {}
    for cls, x in zip(run.e2[b].classes, rep):
        if not x:
            continue
        if cls.image is None:
            if run.kind == "orbit":
                raise TransferMismatch(f"orbit class {cls.name} at {b} has no Tate counterpart")
            continue
        m, c = cls.image
        out[m] = (out.get(m, 0) + c * x) % MOD
    return {m: v for m, v in out.items() if v}


def _tate_bidegree_for(kind, b):
    return (b[0] - 1, b[1]) if kind == "orbit" else b


def _run_transferred(kind: str, window: Window, tate: SpectralSequenceRun, validate: bool) -> SpectralSequenceRun:
    run = SpectralSequenceRun(kind, window, build_e2(kind, window, validate))
    entries = run.e2
    rule_pages = sorted({r for r in range(2, LAST_PAGE) if tate.page(r).differentials})
    injective_cache: dict = {}
    for r in range(2, LAST_PAGE + 1):
        diffs, log = {}, []
        if r in rule_pages:
            run.pages.append(BigradedPage(r, entries, {}))
            for b, entry in entries.items():
                tgt = _target(b, r)
                if tgt not in entries or not window.contains(kind, *tgt):
                    continue
                tcls = entries[tgt].classes
                tb_src = _tate_bidegree_for(kind, b)
                if tb_src not in tate.e2:
                    continue
                if kind == "hfpss":
                    _check_injective(run, tate, tgt, r, injective_cache)
                cols = []
                for j, cls in enumerate(entry.classes):
                    elem = _image_vector(run, b, entry.reps[j])
                    tvec = _to_vector(tate, tb_src, elem)
                    coords = tate.classify(tb_src, tvec, r) if tvec and any(tvec) else []
                    if coords is None:
                        raise TransferMismatch(f"{kind}: image of {cls.name} at {b} is not a Tate E{r} cycle")
                    image = _tate_differential(tate, r, tb_src, coords, tate.rules) if coords else {}
                    vec = _to_vector(run, tgt, image)
                    tc = run.classify(tgt, vec, r) if any(vec) else [0] * len(tcls)
                    if tc is None:
                        raise TransferMismatch(f"{kind}: transferred d{r}({cls.name}) is not an E{r} cycle")
                    tc = _reduce_col(tc, tcls)
                    cols.append(tc)
                    if any(tc):
                        log.append(_record(r, b, cls, tgt, tc, tcls))
                if any(any(c) for c in cols):
                    diffs[b] = _matrix_from_columns(cols, len(tcls))
            run.pages.pop()
        _check_square_zero(run, entries, diffs, r)
        run.pages.append(BigradedPage(r, entries, diffs, tuple(log)))
        run.log.extend(log)
        if diffs:
            entries, run.turns[r] = turn_page(entries, diffs, r)
    return run


def _check_injective(run, tate, tgt, r, cache):
    """The fixed point E_r entry at a differential target must embed in the Tate one."""
    key = (tgt, r)
    if key in cache:
        return
    entry = run.page(r).entries.get(tgt)
    cache[key] = True
    if entry is None:
        return
    tcls = entry.classes
    if any(c.order == 0 for c in tcls):
        raise TransferMismatch(f"free class at differential target {tgt}")
    cols = []
    for rep in entry.reps:
        elem = _image_vector(run, tgt, rep)
        tvec = _to_vector(tate, tgt, elem)
        coords = tate.classify(tgt, tvec, r) if tvec is not None else None
        if coords is None:
            raise TransferMismatch(f"class at {tgt} does not map to a Tate E{r} class")
        cols.append(coords)
    if not cols or not cols[0]:
        raise TransferMismatch(f"E{r} at {tgt} does not embed into the Tate page")
    if rank_mod_p(_matrix_from_columns(cols, len(cols[0])), MOD) != len(tcls):
        raise TransferMismatch(f"E{r} at {tgt} does not embed into the Tate page")


def run_spectral_sequence(kind: str, window: Window, rules: Iterable[DifferentialRule] = DEFAULT_RULES, validate: bool = True, tate: SpectralSequenceRun | None = None) -> SpectralSequenceRun:
    rules = tuple(rules)
    if tate is None:
        tate = run_tate_ss(window, rules, validate)
    if kind == "tate":
        return tate
    return _run_transferred(kind, window, tate, validate)


def apply_differentials(page: BigradedPage, rules: Iterable[DifferentialRule] = DEFAULT_RULES, window: Window | None = None) -> list[BigradedPage]:
    """Run the Tate page from E2 to E10 and return the page sequence."""
    window = window or _window_of(page)
    return run_tate_ss(window, rules).pages


def _window_of(page: BigradedPage) -> Window:
    ss = [b[0] for b in page.entries]
    ts = [b[1] for b in page.entries]
    return Window(max(abs(x) for x in ss) if ss else 0, min(ts) if ts else -1, max(ts) if ts else 1)


# --------------------------------------------------------------------------
# transfer report
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class TransferReport:
    records: tuple[tuple[str, DifferentialRecord], ...]
    certified: bool

    def to_records(self) -> list[dict]:
        return [{"spectralSequence": k, **r.to_record()} for k, r in self.records]


def compare_via_norm(orbit: SpectralSequenceRun, fixed: SpectralSequenceRun, tate: SpectralSequenceRun) -> TransferReport:
    """Certify each transferred differential: source and target exist, the
    target classes have order 3, and the Tate spectral sequence has
    differentials on the same page."""
    records = []
    tate_pages = {rec.page for rec in tate.log}
    for run in (fixed, orbit):
        for rec in run.log:
            src = run.page(rec.page).entries.get(rec.source)
            tgt = run.page(rec.page).entries.get(rec.target)
            if src is None or tgt is None:
                raise TransferMismatch(f"{run.kind}: dangling differential {rec}")
            orders = {c.name: c.order for c in tgt.classes}
            for name, _ in rec.coefficients:
                if orders.get(name) != MOD:
                    raise TransferMismatch(f"{run.kind}: differential into a class of order {orders.get(name)}")
            if rec.page not in tate_pages:
                raise TransferMismatch(f"{run.kind}: d{rec.page} has no Tate counterpart")
            records.append((run.kind, rec))
    return TransferReport(tuple(records), True)


# --------------------------------------------------------------------------
# assembly
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class HomotopyChart:
    name: str
    groups: dict  # stem -> FgModule
    flags: dict = field(default_factory=dict)  # stem -> reason
    contributions: dict = field(default_factory=dict)  # stem -> ((s, name, order), ...)

    def at(self, n: int) -> FgModule:
        return self.groups.get(n, FgModule())

    @property
    def stems(self) -> list[int]:
        return sorted(self.groups)

    def to_records(self) -> list[dict]:
        out = []
        for n in self.stems:
            rec = {"stem": n, **self.groups[n].to_record()}
            if n in self.flags:
                rec["extensionAmbiguity"] = self.flags[n]
            out.append(rec)
        return out


def _extension_flag(contrib) -> str | None:
    tors_s = sorted({s for s, _, o in contrib if o})
    free_s = [s for s, _, o in contrib if not o]
    if len(tors_s) > 1:
        return "torsion in several filtrations"
    if tors_s and any(fs > tors_s[0] for fs in free_s):
        return "free class above a torsion class"
    return None


def assemble_homotopy(e_inf: BigradedPage, s_levels: Iterable[int], stems: Iterable[int], name: str = "Tmf") -> HomotopyChart:
    """Direct sum of E-infinity along each stem, flagging possible extensions."""
    s_levels = list(s_levels)
    groups, flags, contribs = {}, {}, {}
    for n in stems:
        contrib = []
        for s in s_levels:
            for c in e_inf.at(s, n + s):
                contrib.append((s, c.name, c.order))
        free = sum(1 for _, _, o in contrib if not o)
        tors = [o for _, _, o in contrib if o]
        labels = [nm for _, nm, o in contrib if not o] + [nm for _, nm, o in contrib if o]
        m = FgModule.from_divisors(free, tors)
        groups[n] = FgModule(m.free_rank, m.torsion, tuple(labels) if len(labels) == free + len(m.torsion) else ())
        contribs[n] = tuple(contrib)
        flag = _extension_flag(contrib)
        if flag:
            flags[n] = flag
    return HomotopyChart(name, groups, flags, contribs)


def safe_stems(kind: str, window: Window) -> list[int]:
    levels = list(window.safe_s(kind))
    out = []
    for n in range(window.t_min - max(levels) - 1, window.t_max + 1):
        if all(window.t_safe(n + s) for s in levels):
            out.append(n)
    return out


@dataclass(frozen=True)
class HomotopyResult:
    run: SpectralSequenceRun
    chart: HomotopyChart
    vanishing_ok: bool


def compute_homotopy(kind: str, window: Window, tate: SpectralSequenceRun | None = None, validate: bool = True) -> HomotopyResult:
    """Run the fixed point or orbit spectral sequence and assemble pi_* Tmf."""
    if kind not in ("hfpss", "orbit"):
        raise ValueError("homotopy is assembled from the hfpss or orbit spectral sequence")
    run = run_spectral_sequence(kind, window, tate=tate, validate=validate)
    levels = list(window.safe_s(kind))
    chart = assemble_homotopy(run.e_infinity, levels, safe_stems(kind, window), f"Tmf via {kind}")
    return HomotopyResult(run, chart, vanishing_ok(run))


def vanishing_ok(run: SpectralSequenceRun) -> bool:
    """E-infinity is empty beyond the vanishing line on the safe part of the window."""
    w = run.window
    for (s, t), e in run.e_infinity.entries.items():
        if not e.classes or not w.is_safe(run.kind, s, t):
            continue
        if run.kind == "hfpss" and s >= VANISHING_LINE:
            return False
        if run.kind == "orbit" and s <= -VANISHING_LINE:
            return False
        if run.kind == "tate":
            return False
    return True


def tate_vanishes(run: SpectralSequenceRun) -> list[tuple[int, int]]:
    """Safe bidegrees where the Tate E10 page is nonzero (empty list = success)."""
    return sorted(
        b for b, e in run.e_infinity.entries.items() if e.classes and run.window.is_safe("tate", *b)
    )


def run_orbit_ss(window: Window, tate: SpectralSequenceRun | None = None, fixed: HomotopyResult | None = None) -> tuple[list, HomotopyChart]:
    """Orbit spectral sequence; its chart must equal the fixed point chart."""
    tate = tate or run_tate_ss(window)
    orbit = compute_homotopy("orbit", window, tate)
    fixed = fixed or compute_homotopy("hfpss", window, tate)
    mismatches = compare_charts(orbit.chart, fixed.chart)
    if mismatches:
        raise NormMismatch(f"orbit and fixed point charts differ at stems {mismatches}")
    return orbit.run.pages, orbit.chart


def extension_compatible(contrib, group: FgModule) -> bool:
    """Can ``group`` arise from the associated graded ``contrib``?

    A Z/3 in filtration s can only be absorbed by a free class in a higher
    filtration (0 -> Z -> Z -> Z/3 -> 0); each free class absorbs at most one.
    """
    free = sorted(s for s, _, o in contrib if not o)
    tors = sorted(s for s, _, o in contrib if o)
    if group.free_rank != len(free) or any(o != MOD for o in group.torsion):
        return False
    missing = len(tors) - len(group.torsion)
    if missing < 0:
        return False
    used, absorbable = set(), 0
    for ts in sorted(tors, reverse=True):
        cand = [i for i, fs in enumerate(free) if fs > ts and i not in used]
        if cand:
            used.add(cand[0])
            absorbable += 1
    return missing <= absorbable


def compare_charts(a: HomotopyChart, b: HomotopyChart) -> list[int]:
    """Stems where the charts cannot describe the same groups, allowing the
    flagged extensions of either side."""
    common = sorted(set(a.groups) & set(b.groups))
    bad = []
    for n in common:
        if a.at(n).same_group(b.at(n)):
            continue
        if n in a.flags and extension_compatible(a.contributions[n], b.at(n)):
            continue
        if n in b.flags and extension_compatible(b.contributions[n], a.at(n)):
            continue
        bad.append(n)
    return bad


def tmf2_chart(t_min: int, t_max: int) -> HomotopyChart:
    """pi_* Tmf(2) = Lambda + Sigma^-9 dual(Lambda)_sgn; the trivial-group
    spectral sequence is concentrated on one line, so this is exact."""
    groups = {}
    for n in range(t_min, t_max + 1):
        r1, r2 = LAMBDA.rank(n), DUAL_PART.rank(n)
        groups[n] = FgModule(r1 + r2)
    return HomotopyChart("Tmf(2)", groups)

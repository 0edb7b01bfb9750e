"""The graded rings Lambda = Z[1/2][l1, l2] and A = Z[1/2][x0, x1, x2] with their
S3-actions, sign twists, graded duals and the distinguished forms
c4, c6, Delta, d, epsilon.

Grading is topological throughout: every variable has degree 4.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb
from typing import Mapping

from .exact_core import DyadicScalar, matmul

VAR_DEGREE = 4


class WindowExceeded(ValueError):
    pass


class NotInvariant(ValueError):
    pass


def weight(t: int) -> int:
    """Modular weight of topological degree ``t``."""
    return t // 2


def algebraic_degree(t: int) -> int:
    return t // 2


def topological_degree(weight: int) -> int:
    return 2 * weight


# --------------------------------------------------------------------------
# S3
# --------------------------------------------------------------------------

# permutations of {0, 1, 2}: p[i] = g(i)
IDENTITY = (0, 1, 2)
SIGMA = (1, 2, 0)  # (012)
TAU = (0, 2, 1)  # (12)


def compose(g, h):
    """``g o h``."""
    return tuple(g[h[i]] for i in range(3))


def inverse(g):
    out = [0, 0, 0]
    for i, gi in enumerate(g):
        out[gi] = i
    return tuple(out)


def parity(g) -> int:
    inv = sum(1 for i in range(3) for j in range(i + 1, 3) if g[i] > g[j])
    return inv % 2


def sgn(g) -> int:
    return -1 if parity(g) else 1


def word(w: str):
    """Group element from a word in 's' (sigma) and 't' (tau), read left to right."""
    g = IDENTITY
    for ch in w:
        g = compose(g, {"s": SIGMA, "t": TAU, "σ": SIGMA, "τ": TAU}[ch])
    return g


S3_ELEMENTS = (
    IDENTITY,
    SIGMA,
    compose(SIGMA, SIGMA),
    TAU,
    compose(TAU, SIGMA),
    compose(SIGMA, TAU),
)
C3_ELEMENTS = S3_ELEMENTS[:3]
GROUP_ELEMENTS = {"C2": (IDENTITY, TAU), "C3": C3_ELEMENTS, "S3": S3_ELEMENTS}

# The surjection A -> Lambda intertwines sigma with (012) on the x_i, and tau
# with the transposition fixing x1: tau acting on Lambda corresponds to (02).
_A_PERMUTATION = {SIGMA: SIGMA, TAU: compose(TAU, SIGMA)}


def a_permutation(g):
    """Permutation of {x0, x1, x2} through which ``g`` acts on A."""
    out = IDENTITY
    # write g as a word; every element of S3 is sigma^i tau^j
    for i in range(3):
        for j in range(2):
            cand = IDENTITY
            for _ in range(i):
                cand = compose(cand, SIGMA)
            for _ in range(j):
                cand = compose(cand, TAU)
            if cand == g:
                for _ in range(i):
                    out = compose(out, _A_PERMUTATION[SIGMA])
                for _ in range(j):
                    out = compose(out, _A_PERMUTATION[TAU])
                return out
    raise ValueError(g)


# --------------------------------------------------------------------------
# polynomials
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class GradedPolynomial:
    """Polynomial in ``nvars`` variables of degree 4 with Z[1/2] coefficients."""

    coefficients: tuple[tuple[tuple[int, ...], DyadicScalar], ...]
    nvars: int = 2

    @classmethod
    def from_dict(cls, coeffs: Mapping, nvars: int = 2) -> "GradedPolynomial":
        items = []
        for exp, c in coeffs.items():
            c = DyadicScalar.of(c)
            if c:
                if len(exp) != nvars:
                    raise ValueError("exponent length mismatch")
                items.append((tuple(exp), c))
        items.sort(key=lambda ec: _deglex_key(ec[0]))
        return cls(tuple(items), nvars)

    @classmethod
    def variable(cls, i: int, nvars: int = 2) -> "GradedPolynomial":
        exp = [0] * nvars
        exp[i] = 1
        return cls.from_dict({tuple(exp): 1}, nvars)

    @classmethod
    def constant(cls, c, nvars: int = 2) -> "GradedPolynomial":
        return cls.from_dict({(0,) * nvars: c}, nvars)

    @property
    def terms(self) -> dict:
        return dict(self.coefficients)

    def is_zero(self) -> bool:
        return not self.coefficients

    def degrees(self) -> set[int]:
        return {VAR_DEGREE * sum(e) for e, _ in self.coefficients}

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    @property
    def degree(self) -> int:
        degs = self.degrees()
        if len(degs) != 1:
            raise ValueError("not a nonzero homogeneous polynomial")
        return degs.pop()

    def homogeneous_part(self, t: int) -> "GradedPolynomial":
        return GradedPolynomial.from_dict(
            {e: c for e, c in self.coefficients if VAR_DEGREE * sum(e) == t}, self.nvars
        )

    def __add__(self, other):
        other = _coerce(other, self.nvars)
        out = self.terms
        for e, c in other.coefficients:
            out[e] = out.get(e, DyadicScalar()) + c
        return GradedPolynomial.from_dict(out, self.nvars)

    __radd__ = __add__

    def __neg__(self):
        return GradedPolynomial.from_dict({e: -c for e, c in self.coefficients}, self.nvars)

    def __sub__(self, other):
        return self + (-_coerce(other, self.nvars))

    def __rsub__(self, other):
        return _coerce(other, self.nvars) - self

    def __mul__(self, other):
        other = _coerce(other, self.nvars)
        out: dict = {}
        for e1, c1 in self.coefficients:
            for e2, c2 in other.coefficients:
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, DyadicScalar()) + c1 * c2
        return GradedPolynomial.from_dict(out, self.nvars)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = GradedPolynomial.constant(1, self.nvars)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def substitute(self, images) -> "GradedPolynomial":
        """Ring map sending variable i to ``images[i]``."""
        nv = images[0].nvars
        out = GradedPolynomial.from_dict({}, nv)
        cache: dict = {}
        for e, c in self.coefficients:
            term = GradedPolynomial.constant(c, nv)
            for i, k in enumerate(e):
                if k:
                    key = (i, k)
                    if key not in cache:
                        cache[key] = images[i] ** k
                    term = term * cache[key]
            out = out + term
        return out

    def __str__(self):
        return format_polynomial(self)

    def __repr__(self):
        return f"GradedPolynomial({self})"


def _coerce(x, nvars):
    if isinstance(x, GradedPolynomial):
        if x.nvars != nvars:
            raise ValueError("polynomials over different rings")
        return x
    return GradedPolynomial.constant(x, nvars)


def _deglex_key(exp):
    return (-sum(exp), tuple(-e for e in exp))


VARIABLE_NAMES = {2: ("l1", "l2"), 3: ("x0", "x1", "x2")}


def format_polynomial(p: GradedPolynomial) -> str:
    """Canonical text: deglex order, explicit dyadic coefficients."""
    if p.is_zero():
        return "0"
    names = VARIABLE_NAMES.get(p.nvars, tuple(f"v{i}" for i in range(p.nvars)))
    pieces = []
    for exp, c in p.coefficients:
        mono = "*".join(
            n if k == 1 else f"{n}^{k}" for n, k in zip(names, exp) if k
        )
        neg = c.numerator < 0
        mag = -c if neg else c
        if mono:
            body = mono if mag == 1 else f"{mag}*{mono}"
        else:
            body = str(mag)
        pieces.append(("- " if neg else "+ ") + body)
    text = " ".join(pieces)
    return text[2:] if text.startswith("+ ") else "-" + text[1:]


L1 = GradedPolynomial.variable(0)
L2 = GradedPolynomial.variable(1)
X = tuple(GradedPolynomial.variable(i, 3) for i in range(3))


def lambda_generator_image(g, i: int) -> GradedPolynomial:
    """``g . l_i = l_{g i} - l_{g 0}`` with ``l_0 = 0``."""
    def lam(k):
        return GradedPolynomial.from_dict({}) if k == 0 else (L1, L2)[k - 1]

    return lam(g[i]) - lam(g[0])


def act_on(g, p: GradedPolynomial, sign_twist: bool = False) -> GradedPolynomial:
    """Action of the group element ``g`` (a permutation tuple or a word in s/t)."""
    if isinstance(g, str):
        g = word(g)
    if p.nvars == 2:
        images = [lambda_generator_image(g, 1), lambda_generator_image(g, 2)]
    elif p.nvars == 3:
        perm = a_permutation(g)
        s = sgn(g)
        images = [s * X[perm[i]] for i in range(3)]
    else:
        raise ValueError("unsupported ring")
    out = p.substitute(images)
    if sign_twist and sgn(g) < 0:
        out = -out
    return out


def a_to_lambda(p: GradedPolynomial) -> GradedPolynomial:
    """The surjection A -> Lambda: x0 -> l1, x1 -> l2 - l1, x2 -> -l2."""
    if p.nvars != 3:
        raise ValueError("expected a polynomial over A")
    return p.substitute([L1, L2 - L1, -L2])


# --------------------------------------------------------------------------
# distinguished forms
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class DistinguishedForms:
    c4: GradedPolynomial
    c6: GradedPolynomial
    Delta: GradedPolynomial
    d: GradedPolynomial
    epsilon: GradedPolynomial
    sigma1: GradedPolynomial
    sigma2: GradedPolynomial
    sigma3: GradedPolynomial


@lru_cache(maxsize=1)
def distinguished_forms() -> DistinguishedForms:
    x0, x1, x2 = X
    s1 = x0 + x1 + x2
    s2 = x0 * x1 + x0 * x2 + x1 * x2
    s3 = x0 * x1 * x2
    eps = (x0 - x1) * (x0 - x2) * (x1 - x2)
    c4 = 16 * (L1**2 + L2**2 - L1 * L2)
    c6 = -32 * (L1 + L2) * (2 * L1**2 + 2 * L2**2 - 5 * L1 * L2)
    delta = 16 * L1**2 * L2**2 * (L2 - L1) ** 2
    d = a_to_lambda(s3)
    return DistinguishedForms(c4, c6, delta, d, eps, s1, s2, s3)


def discriminant_in_symmetric(e1, e2, e3) -> GradedPolynomial:
    """Discriminant of the cubic with roots x_i, in elementary symmetric functions."""
    return (
        e1**2 * e2**2
        - 4 * e2**3
        - 4 * e1**3 * e3
        - 27 * e3**2
        + 18 * e1 * e2 * e3
    )


# --------------------------------------------------------------------------
# degree slices
# --------------------------------------------------------------------------


def lambda_basis(t: int) -> list[tuple[int, int]]:
    """Monomial exponents of Lambda in degree t, deglex order (l1^n first)."""
    if t < 0 or t % VAR_DEGREE:
        return []
    n = t // VAR_DEGREE
    return [(n - j, j) for j in range(n + 1)]


def a_basis(t: int) -> list[tuple[int, int, int]]:
    if t < 0 or t % VAR_DEGREE:
        return []
    n = t // VAR_DEGREE
    out = [(a, b, n - a - b) for a in range(n, -1, -1) for b in range(n - a, -1, -1)]
    return out


def _poly_mul(p, q):
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return out


def _poly_pow(p, n):
    out = [1]
    for _ in range(n):
        out = _poly_mul(out, p)
    return out


def _linear_form(g, i):
    """Image of l_i as [coeff of l1, coeff of l2]."""
    img = lambda_generator_image(g, i).terms
    return [img.get((1, 0), DyadicScalar()).to_int(), img.get((0, 1), DyadicScalar()).to_int()]


@lru_cache(maxsize=4096)
def lambda_action_matrix(g, t: int) -> tuple[tuple[int, ...], ...]:
    """Matrix of ``g`` on Lambda_t in the deglex monomial basis (columns = images)."""
    basis = lambda_basis(t)
    n = len(basis)
    if n == 0:
        return ()
    a = _linear_form(g, 1)
    b = _linear_form(g, 2)
    # homogeneous polys of degree k stored by power of l2: index j <-> l1^{k-j} l2^j
    cols = []
    for i, j in basis:
        img = _poly_mul(_poly_pow(a, i), _poly_pow(b, j))
        cols.append(img)
    return tuple(tuple(cols[c][r] for c in range(n)) for r in range(n))


@lru_cache(maxsize=4096)
def a_action_matrix(g, t: int) -> tuple[tuple[int, ...], ...]:
    basis = a_basis(t)
    index = {e: k for k, e in enumerate(basis)}
    n = len(basis)
    perm = a_permutation(g)
    s = sgn(g)
    M = [[0] * n for _ in range(n)]
    for c, e in enumerate(basis):
        new = [0, 0, 0]
        for i in range(3):
            new[perm[i]] += e[i]
        M[index[tuple(new)]][c] = s ** sum(e)
    return tuple(tuple(r) for r in M)


def monomial_label(exp, dual: bool = False) -> str:
    names = VARIABLE_NAMES[len(exp)]
    mono = "*".join(n if k == 1 else f"{n}^{k}" for n, k in zip(names, exp) if k) or "1"
    return f"({mono})^v" if dual else mono


@dataclass(frozen=True)
class Slice:
    degree: int
    basis: tuple[str, ...]
    sigma: tuple[tuple[int, ...], ...]
    tau: tuple[tuple[int, ...], ...]

    @property
    def rank(self) -> int:
        return len(self.basis)

    def matrix(self, g) -> list[list[int]]:
        """Action matrix of an arbitrary group element, from the generators."""
        if g == IDENTITY:
            return [[int(i == j) for j in range(self.rank)] for i in range(self.rank)]
        for cand, w in _WORDS.items():
            if cand == g:
                M = [[int(i == j) for j in range(self.rank)] for i in range(self.rank)]
                for ch in w:
                    M = matmul(M, [list(r) for r in (self.sigma if ch == "s" else self.tau)])
                return M
        raise ValueError(g)


_WORDS = {
    SIGMA: "s",
    compose(SIGMA, SIGMA): "ss",
    TAU: "t",
    compose(TAU, SIGMA): "ts",
    compose(SIGMA, TAU): "st",
}


@dataclass(frozen=True)
class EquivariantModule:
    """A graded S3-module built from Lambda (or A): shift, dual and sign flags.

    ``dual`` replaces each slice by its Z[1/2]-dual placed in negated degree;
    ``sign`` twists odd permutations by -1; ``shift`` suspends.
    """

    base: str = "lambda"
    dual: bool = False
    sign: bool = False
    shift: int = 0
    window: int = 10**6

    @property
    def name(self) -> str:
        core = {"lambda": "Λ", "A": "A"}[self.base]
        if self.dual:
            core += "∨"
        if self.sign:
            core += "_sgn"
        if self.shift:
            core = f"Σ^{self.shift}" + core
        return core

    def twisted(self) -> "EquivariantModule":
        return EquivariantModule(self.base, self.dual, not self.sign, self.shift, self.window)

    def dualized(self) -> "EquivariantModule":
        return EquivariantModule(self.base, not self.dual, self.sign, -self.shift, self.window)

    def suspended(self, k: int) -> "EquivariantModule":
        return EquivariantModule(self.base, self.dual, self.sign, self.shift + k, self.window)

    def base_degree(self, t: int) -> int:
        u = t - self.shift
        return -u if self.dual else u

    def rank(self, t: int) -> int:
        u = self.base_degree(t)
        return len(lambda_basis(u) if self.base == "lambda" else a_basis(u))

    def nonzero_degrees(self, t_min: int, t_max: int) -> list[int]:
        return [t for t in range(t_min, t_max + 1) if self.rank(t)]


def slice_at(M: EquivariantModule, t: int) -> Slice:
    """Basis and generator matrices of ``M`` in degree ``t``."""
    if abs(t) > M.window:
        raise WindowExceeded(f"degree {t} outside window ±{M.window}")
    return _slice_cached(M.base, M.dual, M.sign, M.shift, t)


@lru_cache(maxsize=8192)
def _slice_cached(base, dual, sign, shift, t) -> Slice:
    u = t - shift
    if dual:
        u = -u
    if base == "lambda":
        exps = lambda_basis(u)
        mat = lambda_action_matrix
    else:
        exps = a_basis(u)
        mat = a_action_matrix
    labels = tuple(monomial_label(e, dual) for e in exps)
    if not exps:
        return Slice(t, (), (), ())
    out = []
    for g in (SIGMA, TAU):
        if dual:
            # contragredient: rho(g^{-1})^T
            P = mat(inverse(g), u)
            A = [list(r) for r in zip(*P)]
        else:
            A = [list(r) for r in mat(g, u)]
        if sign and sgn(g) < 0:
            A = [[-x for x in r] for r in A]
        out.append(tuple(tuple(r) for r in A))
    return Slice(t, labels, out[0], out[1])


LAMBDA = EquivariantModule("lambda")
LAMBDA_SGN = EquivariantModule("lambda", sign=True)
LAMBDA_DUAL = EquivariantModule("lambda", dual=True)
LAMBDA_DUAL_SGN = EquivariantModule("lambda", dual=True, sign=True)
A_MODULE = EquivariantModule("A")


# --------------------------------------------------------------------------
# localization
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class LocalizedSlice:
    """Truncation of the direct system computing ``M[m^{-1}]`` in degree t.

    ``stages[k]`` is the slice of M in degree ``t + k*deg(m)`` (read as
    ``m^{-k}`` times it); ``transitions[k]`` is multiplication by m from stage
    k to stage k+1.
    """

    degree: int
    stages: tuple[Slice, ...]
    transitions: tuple[tuple[tuple[int, ...], ...], ...]

    @property
    def ranks(self) -> list[int]:
        return [s.rank for s in self.stages]


@dataclass(frozen=True)
class LocalizedModule:
    module: EquivariantModule
    form: GradedPolynomial
    form_name: str
    depth: int = 4

    @property
    def is_zero(self) -> bool:
        """Positive-degree forms act nilpotently on the dual modules."""
        return self.module.dual and self.form.degree > 0

    def slice(self, t: int, depth: int | None = None) -> LocalizedSlice:
        depth = self.depth if depth is None else depth
        step = self.form.degree
        stages = tuple(slice_at(self.module, t + k * step) for k in range(depth + 1))
        trans = tuple(
            multiplication_matrix(self.module, self.form, t + k * step) for k in range(depth)
        )
        return LocalizedSlice(t, stages, trans)

    def nilpotency_degree(self, t: int, limit: int = 64) -> int | None:
        """Smallest k with m^k killing degree t, or None if not nilpotent by ``limit``."""
        step = self.form.degree
        for k in range(limit):
            if self.module.rank(t + k * step) == 0:
                return k
        return None


def multiplication_matrix(M: EquivariantModule, m: GradedPolynomial, t: int):
    """Matrix of multiplication by the form ``m`` from M_t to M_{t + deg m}."""
    deg = m.degree
    src = M.base_degree(t)
    dst = M.base_degree(t + deg)
    if not M.dual:
        basis_in, basis_out = lambda_basis(src), lambda_basis(dst)
        index = {e: k for k, e in enumerate(basis_out)}
        cols = []
        for e in basis_in:
            col = [0] * len(basis_out)
            for f, c in m.coefficients:
                col[index[(e[0] + f[0], e[1] + f[1])]] += c.to_int()
            cols.append(col)
        return tuple(tuple(cols[j][i] for j in range(len(cols))) for i in range(len(basis_out)))
    # dual: transpose of multiplication Lambda_dst -> Lambda_src
    basis_in, basis_out = lambda_basis(dst), lambda_basis(src)
    index = {e: k for k, e in enumerate(basis_out)}
    P = [[0] * len(basis_in) for _ in basis_out]
    for j, e in enumerate(basis_in):
        for f, c in m.coefficients:
            P[index[(e[0] + f[0], e[1] + f[1])]][j] += c.to_int()
    return tuple(tuple(r) for r in zip(*P)) if P else ()


def localize(M: EquivariantModule, m: str | GradedPolynomial, depth: int = 4) -> LocalizedModule:
    """``M[m^{-1}]`` as a truncated direct system; m must be S3-invariant."""
    forms = distinguished_forms()
    if isinstance(m, str):
        name = m
        poly = {"c4": forms.c4, "c6": forms.c6, "Delta": forms.Delta, "Δ": forms.Delta}[m]
    else:
        name, poly = str(m), m
    if not poly.is_homogeneous() or poly.is_zero():
        raise NotInvariant("localizing form must be homogeneous and nonzero")
    for g in (SIGMA, TAU):
        if act_on(g, poly) != poly:
            raise NotInvariant(f"{name} is not S3-invariant")
    return LocalizedModule(M, poly, name, depth)

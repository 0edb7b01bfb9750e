"""Exact arithmetic over Z[1/2], integer matrices, Smith normal form and
finitely generated Z[1/2]-module presentations.

Everything here is a pure function of immutable inputs.  Integer matrices are
handled internally as lists of lists of Python ints; :class:`IntMatrix` is the
public immutable wrapper.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

SPARSE_THRESHOLD = 64


class ImageNotInKernel(ValueError):
    """The proposed image does not lie in the kernel: the complex is malformed."""


# --------------------------------------------------------------------------
# Z[1/2]
# --------------------------------------------------------------------------


def odd_part(n: int) -> int:
    n = abs(n)
    if n == 0:
        return 0
    return n >> ((n & -n).bit_length() - 1)


@dataclass(frozen=True, order=False)
class DyadicScalar:
    """Exact element ``numerator / 2**exponent`` of Z[1/2].

    Canonical form: numerator odd, or numerator zero with exponent zero.
    """

    numerator: int = 0
    exponent: int = 0

    def __post_init__(self):
        n, e = self.numerator, self.exponent
        if n == 0:
            e = 0
        else:
            v = (n & -n).bit_length() - 1
            n >>= v
            e -= v
        object.__setattr__(self, "numerator", n)
        object.__setattr__(self, "exponent", e)

    @classmethod
    def of(cls, value) -> "DyadicScalar":
        if isinstance(value, DyadicScalar):
            return value
        if isinstance(value, int):
            return cls(value, 0)
        frac = Fraction(value)
        den = frac.denominator
        if den & (den - 1):
            raise ValueError(f"{value} is not in Z[1/2]")
        return cls(frac.numerator, den.bit_length() - 1)

    def to_fraction(self) -> Fraction:
        if self.exponent >= 0:
            return Fraction(self.numerator, 1 << self.exponent)
        return Fraction(self.numerator << -self.exponent)

    def is_integer(self) -> bool:
        return self.exponent <= 0

    def to_int(self) -> int:
        if not self.is_integer():
            raise ValueError(f"{self} is not an integer")
        return self.numerator << -self.exponent

    def is_unit(self) -> bool:
        return abs(self.numerator) == 1

    def __bool__(self):
        return self.numerator != 0

    def _align(self, other):
        other = DyadicScalar.of(other)
        e = max(self.exponent, other.exponent)
        a = self.numerator << (e - self.exponent)
        b = other.numerator << (e - other.exponent)
        return a, b, e

    def __add__(self, other):
        a, b, e = self._align(other)
        return DyadicScalar(a + b, e)

    __radd__ = __add__

    def __neg__(self):
        return DyadicScalar(-self.numerator, self.exponent)

    def __sub__(self, other):
        return self + (-DyadicScalar.of(other))

    def __rsub__(self, other):
        return DyadicScalar.of(other) - self

    def __mul__(self, other):
        other = DyadicScalar.of(other)
        return DyadicScalar(self.numerator * other.numerator, self.exponent + other.exponent)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = DyadicScalar.of(other)
        if not isinstance(other, DyadicScalar):
            return NotImplemented
        return (self.numerator, self.exponent) == (other.numerator, other.exponent)

    def __hash__(self):
        return hash((self.numerator, self.exponent))

    def __str__(self):
        if self.exponent <= 0:
            return str(self.numerator << -self.exponent)
        return f"{self.numerator}/{1 << self.exponent}"

    def __repr__(self):
        return f"DyadicScalar({self})"


# --------------------------------------------------------------------------
# integer matrices
# --------------------------------------------------------------------------


def _as_rows(M) -> list[list[int]]:
    if isinstance(M, IntMatrix):
        return M.tolist()
    return [list(map(int, row)) for row in M]


@dataclass(frozen=True)
class IntMatrix:
    """Immutable integer matrix; stored sparsely above 64x64."""

    rows: int
    cols: int
    _dense: tuple = field(default=(), repr=False)
    _sparse: tuple = field(default=(), repr=False)

    @classmethod
    def from_rows(cls, data: Sequence[Sequence[int]], cols: int | None = None) -> "IntMatrix":
        data = [list(map(int, r)) for r in data]
        nrows = len(data)
        ncols = len(data[0]) if data else (cols or 0)
        if any(len(r) != ncols for r in data):
            raise ValueError("ragged matrix")
        if nrows > SPARSE_THRESHOLD and ncols > SPARSE_THRESHOLD:
            entries = tuple(
                (i, j, v) for i, r in enumerate(data) for j, v in enumerate(r) if v
            )
            return cls(nrows, ncols, (), entries)
        return cls(nrows, ncols, tuple(tuple(r) for r in data), ())

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls.from_rows([[0] * cols for _ in range(rows)], cols)

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls.from_rows(_identity(n), n)

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    @property
    def is_sparse(self) -> bool:
        return bool(self._sparse) or (
            self.rows > SPARSE_THRESHOLD and self.cols > SPARSE_THRESHOLD
        )

    def tolist(self) -> list[list[int]]:
        if not self.is_sparse:
            return [list(r) for r in self._dense]
        out = [[0] * self.cols for _ in range(self.rows)]
        for i, j, v in self._sparse:
            out[i][j] = v
        return out

    def __getitem__(self, ij):
        i, j = ij
        if not self.is_sparse:
            return self._dense[i][j]
        for a, b, v in self._sparse:
            if a == i and b == j:
                return v
        return 0

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        return IntMatrix.from_rows(matmul(self.tolist(), other.tolist(), self.cols), other.cols)

    def __eq__(self, other):
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return self.shape == other.shape and self.tolist() == other.tolist()

    def __hash__(self):
        return hash((self.shape, tuple(map(tuple, self.tolist()))))

    def transpose(self) -> "IntMatrix":
        return IntMatrix.from_rows(transpose(self.tolist(), self.cols), self.rows)

    def det(self) -> int:
        if self.rows != self.cols:
            raise ValueError("det of non-square matrix")
        return bareiss_det(self.tolist())


def _identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def transpose(A: list[list[int]], ncols: int | None = None) -> list[list[int]]:
    if not A:
        return [[] for _ in range(ncols or 0)]
    return [list(c) for c in zip(*A)]


def matmul(A: list[list[int]], B: list[list[int]], inner: int | None = None) -> list[list[int]]:
    if not A:
        return []
    ncols = len(B[0]) if B else 0
    if not B:
        return [[0] * ncols for _ in A]
    Bt = list(zip(*B))
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def matvec(A: list[list[int]], v: Sequence[int]) -> list[int]:
    return [sum(a * b for a, b in zip(row, v)) for row in A]


def bareiss_det(A: list[list[int]]) -> int:
    n = len(A)
    if n == 0:
        return 1
    M = [row[:] for row in A]
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k]:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


# --------------------------------------------------------------------------
# Smith normal form
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class SmithDecomposition:
    """``U @ M @ V == D`` with U, V unimodular and D diagonal, d1 | d2 | ...

    The inverses of U and V are carried along because the module routines
    need them to read off generators and kernel coordinates.
    """

    U: IntMatrix
    D: IntMatrix
    V: IntMatrix
    U_inv: IntMatrix
    V_inv: IntMatrix

    @property
    def diagonal(self) -> list[int]:
        k = min(self.D.shape)
        return [self.D[i, i] for i in range(k)]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d)


def _snf_lists(A: list[list[int]], m: int, n: int):
    """In-place Smith reduction returning (D, U, Uinv, V, Vinv) as lists."""
    U, Ui = _identity(m), _identity(m)
    V, Vi = _identity(n), _identity(n)

    def swap_rows(i, j):
        if i != j:
            A[i], A[j] = A[j], A[i]
            U[i], U[j] = U[j], U[i]
            for row in Ui:
                row[i], row[j] = row[j], row[i]

    def swap_cols(i, j):
        if i != j:
            for M in (A, V):
                for row in M:
                    row[i], row[j] = row[j], row[i]
            Vi[i], Vi[j] = Vi[j], Vi[i]

    def add_row(dst, src, c):
        # row_dst += c * row_src
        if c:
            A[dst] = [a + c * b for a, b in zip(A[dst], A[src])]
            U[dst] = [a + c * b for a, b in zip(U[dst], U[src])]
            for row in Ui:
                row[src] -= c * row[dst]

    def add_col(dst, src, c):
        # col_dst += c * col_src
        if c:
            for M in (A, V):
                for row in M:
                    row[dst] += c * row[src]
            Vi[src] = [a - c * b for a, b in zip(Vi[src], Vi[dst])]

    def negate_row(i):
        A[i] = [-a for a in A[i]]
        U[i] = [-a for a in U[i]]
        for row in Ui:
            row[i] = -row[i]

    for t in range(min(m, n)):
        # global pivot: smallest |entry|, ties broken by row-major order
        best = None
        for i in range(t, m):
            row = A[i]
            for j in range(t, n):
                v = row[j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
        if best is None:
            break
        swap_rows(t, best[1])
        swap_cols(t, best[2])
        while True:
            p = A[t][t]
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // p))
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // p))
            # leftover remainders; row t precedes rows below it in row-major order
            rest = None
            for j in range(t + 1, n):
                v = A[t][j]
                if v and (rest is None or abs(v) < rest[0]):
                    rest = (abs(v), t, j)
            for i in range(t + 1, m):
                v = A[i][t]
                if v and (rest is None or abs(v) < rest[0]):
                    rest = (abs(v), i, t)
            if rest is not None:
                if rest[2] == t:
                    swap_rows(t, rest[1])
                else:
                    swap_cols(t, rest[2])
                continue
            bad = None
            for i in range(t + 1, m):
                row = A[i]
                for j in range(t + 1, n):
                    if row[j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(t, bad, 1)
        if A[t][t] < 0:
            negate_row(t)
    return A, U, Ui, V, Vi


def smith_normal_form(M) -> SmithDecomposition:
    """Smith normal form with transforms; deterministic for a fixed input."""
    rows = _as_rows(M)
    if isinstance(M, IntMatrix):
        m, n = M.shape
    else:
        m = len(rows)
        n = len(rows[0]) if rows else 0
    D, U, Ui, V, Vi = _snf_lists([r[:] for r in rows], m, n)
    return SmithDecomposition(
        IntMatrix.from_rows(U, m),
        IntMatrix.from_rows(D, n),
        IntMatrix.from_rows(V, n),
        IntMatrix.from_rows(Ui, m),
        IntMatrix.from_rows(Vi, n),
    )


def _snf_raw(rows: list[list[int]], m: int, n: int):
    return _snf_lists([r[:] for r in rows], m, n)


# --------------------------------------------------------------------------
# finitely generated Z[1/2]-modules
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class FgModule:
    """``Z[1/2]^free_rank  +  sum Z/d`` with odd divisors in a divisibility chain."""

    free_rank: int = 0
    torsion: tuple[int, ...] = ()
    labels: tuple[str, ...] = ()

    def __post_init__(self):
        tors = tuple(sorted(int(d) for d in self.torsion))
        for d in tors:
            if d <= 1 or d % 2 == 0:
                raise ValueError(f"torsion divisor {d} is not an odd integer > 1")
        for a, b in zip(tors, tors[1:]):
            if b % a:
                raise ValueError(f"torsion divisors {tors} are not a divisibility chain")
        object.__setattr__(self, "torsion", tors)
        object.__setattr__(self, "labels", tuple(self.labels))

    @classmethod
    def from_divisors(cls, free_rank: int, divisors: Iterable[int], labels=()) -> "FgModule":
        """Build from arbitrary (possibly even, possibly non-chained) orders."""
        primary: dict[int, list[int]] = {}
        for d in divisors:
            d = odd_part(d)
            if d <= 1:
                continue
            for p, e in _factor(d).items():
                primary.setdefault(p, []).append(p**e)
        chain_len = max((len(v) for v in primary.values()), default=0)
        chain = [1] * chain_len
        for p, powers in primary.items():
            powers.sort(reverse=True)
            for k, q in enumerate(powers):
                chain[chain_len - 1 - k] *= q
        return cls(free_rank, tuple(c for c in chain if c > 1), labels)

    @property
    def is_zero(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def to_record(self) -> dict:
        return {
            "freeRank": self.free_rank,
            "torsionDivisors": list(self.torsion),
            "basisLabels": list(self.labels),
        }

    @classmethod
    def from_record(cls, rec: dict) -> "FgModule":
        return cls(rec["freeRank"], tuple(rec["torsionDivisors"]), tuple(rec.get("basisLabels", ())))

    def same_group(self, other: "FgModule") -> bool:
        return self.free_rank == other.free_rank and self.torsion == other.torsion

    def __add__(self, other: "FgModule") -> "FgModule":
        return FgModule.from_divisors(
            self.free_rank + other.free_rank,
            self.torsion + other.torsion,
            self.labels + other.labels,
        )

    def __str__(self):
        parts = []
        if self.free_rank == 1:
            parts.append("Z[1/2]")
        elif self.free_rank:
            parts.append(f"Z[1/2]^{self.free_rank}")
        parts += [f"Z/{d}" for d in self.torsion]
        text = " + ".join(parts) if parts else "0"
        if self.labels:
            text += " (" + ", ".join(self.labels) + ")"
        return text


def _factor(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    p = 3
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def cokernel_odd(M, rows: int | None = None) -> FgModule:
    """Cokernel of ``M`` (codomain of rank ``rows``) as a Z[1/2]-module."""
    data = _as_rows(M)
    m = rows if rows is not None else len(data)
    if isinstance(M, IntMatrix):
        m = M.rows
    if m == 0:
        return FgModule()
    n = len(data[0]) if data else 0
    if n == 0:
        return FgModule(m)
    D, *_ = _snf_raw(data, m, n)
    diag = [D[i][i] for i in range(min(m, n))]
    rank = sum(1 for d in diag if d)
    return FgModule.from_divisors(m - rank, [d for d in diag if d])


def kernel_basis(A: list[list[int]], ncols: int) -> list[list[int]]:
    """Columns (returned as a list of vectors) spanning the saturated kernel."""
    m = len(A)
    if m == 0:
        return _identity(ncols)
    D, U, Ui, V, Vi = _snf_raw(A, m, ncols)
    r = sum(1 for i in range(min(m, ncols)) if D[i][i])
    return [[V[i][j] for i in range(ncols)] for j in range(r, ncols)]


@dataclass(frozen=True)
class Lattice:
    """A sublattice of Z^n with a basis and a solver for coordinates."""

    ambient: int
    basis: tuple[tuple[int, ...], ...]  # basis vectors
    _U: tuple = field(repr=False, default=())
    _V: tuple = field(repr=False, default=())
    _diag: tuple = field(repr=False, default=())

    @classmethod
    def spanned_by(cls, vectors: Sequence[Sequence[int]], ambient: int) -> "Lattice":
        """Lattice spanned by ``vectors`` (need not be independent)."""
        vecs = [list(v) for v in vectors if any(v)]
        if not vecs:
            return cls(ambient, ())
        B = transpose(vecs)  # ambient x k
        D, U, Ui, V, Vi = _snf_raw(B, ambient, len(vecs))
        r = sum(1 for i in range(min(ambient, len(vecs))) if D[i][i])
        # basis: U^{-1} columns scaled by the diagonal
        basis = [[Ui[i][j] * D[j][j] for i in range(ambient)] for j in range(r)]
        return cls.from_basis(basis, ambient)

    @classmethod
    def from_basis(cls, basis: Sequence[Sequence[int]], ambient: int) -> "Lattice":
        basis = [list(b) for b in basis]
        if not basis:
            return cls(ambient, ())
        B = transpose(basis)
        D, U, Ui, V, Vi = _snf_raw(B, ambient, len(basis))
        diag = tuple(D[i][i] for i in range(len(basis)))
        if any(d == 0 for d in diag):
            raise ValueError("basis vectors are linearly dependent")
        return cls(
            ambient,
            tuple(tuple(b) for b in basis),
            tuple(tuple(r) for r in U),
            tuple(tuple(r) for r in V),
            diag,
        )

    @property
    def rank(self) -> int:
        return len(self.basis)

    def coordinates(self, v: Sequence[int]) -> list[int] | None:
        """Integer coordinates of ``v`` in the basis, or None if v is not in the lattice."""
        if not self.basis:
            return [] if not any(v) else None
        Uv = matvec([list(r) for r in self._U], v)
        k = len(self._diag)
        if any(Uv[k:]):
            return None
        z = []
        for x, d in zip(Uv, self._diag):
            if x % d:
                return None
            z.append(x // d)
        return matvec([list(r) for r in self._V], z)

    def coordinates_odd(self, v: Sequence[int]) -> tuple[list[int], int] | None:
        """Coordinates over Z[1/2]: returns (c, e) with v = basis . c / 2^e."""
        if not self.basis:
            return ([], 0) if not any(v) else None
        Uv = matvec([list(r) for r in self._U], v)
        k = len(self._diag)
        if any(Uv[k:]):
            return None
        e = 0
        for x, d in zip(Uv, self._diag):
            od = odd_part(d)
            if x % od:
                return None
            e = max(e, (d // od).bit_length() - 1)
        z = [(x << e) // d for x, d in zip(Uv, self._diag)]
        return matvec([list(r) for r in self._V], z), e

    def contains(self, v: Sequence[int]) -> bool:
        return self.coordinates(v) is not None


def subquotient(ker, im, ncols: int | None = None) -> FgModule:
    """``ker(ker) / im(im)`` over Z[1/2].

    ``ker`` is an r x n matrix (the outgoing map), ``im`` an n x k matrix
    whose columns must lie in its kernel.
    """
    K = _as_rows(ker)
    I = _as_rows(im)
    n = ncols
    if n is None:
        if isinstance(ker, IntMatrix):
            n = ker.cols
        elif isinstance(im, IntMatrix):
            n = im.rows
        elif K:
            n = len(K[0])
        else:
            n = len(I)
    icols = transpose(I, None) if I and I[0] else []
    for col in icols:
        if any(matvec(K, col)):
            raise ImageNotInKernel("a column of the image is not killed by the outgoing map")
    kb = kernel_basis(K, n) if K else _identity(n)
    lat = Lattice.from_basis(kb, n) if kb else Lattice(n, ())
    coords = []
    for col in icols:
        c = lat.coordinates(col)
        if c is None:  # cannot happen for a saturated kernel
            raise ImageNotInKernel("image not contained in kernel lattice")
        coords.append(c)
    k = lat.rank
    if k == 0:
        return FgModule()
    if not coords:
        return FgModule(k)
    return cokernel_odd(transpose(coords), rows=k)


# --------------------------------------------------------------------------
# homology of presented modules
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class PresentedHomology:
    """Result of :func:`presented_homology`.

    ``generators[i]`` is a vector in the coordinates of the middle module and
    has order ``orders[i]`` (0 means free).
    """

    module: FgModule
    generators: tuple[tuple[int, ...], ...]
    orders: tuple[int, ...]
    cycles: tuple[tuple[int, ...], ...]
    _lattice: "Lattice | None" = field(repr=False, default=None, compare=False)
    _reduce: tuple = field(repr=False, default=(), compare=False)

    def classify(self, v: Sequence[int]) -> list[int] | None:
        """Coordinates of the class of the cycle ``v`` in terms of ``generators``.

        Torsion coordinates are reduced modulo the order; returns None when v
        is not an integral cycle.
        """
        if not self.generators:
            return [] if self._lattice is None or self._lattice.coordinates(v) is not None else None
        x = self._lattice.coordinates(v)
        if x is None:
            return None
        out = []
        for row, order, scale in self._reduce:
            y = sum(a * b for a, b in zip(row, x))
            if order:
                y = (y * pow(scale, -1, order)) % order
            out.append(y)
        return out


def presented_homology(
    n_mid: int,
    f_in: Sequence[Sequence[int]] | None,
    g_out: Sequence[Sequence[int]] | None,
    rel_mid: Sequence[Sequence[int]] = (),
    rel_out: Sequence[Sequence[int]] = (),
) -> PresentedHomology:
    """Homology at P1 of ``P0 --f--> P1 --g--> P2`` for presented modules.

    ``P1 = Z^n_mid / span(rel_mid)`` and ``P2 = Z^k / span(rel_out)``, with
    relations given as lists of vectors.  ``f_in`` is given as a list of image
    vectors (columns) in P1 coordinates; ``g_out`` as a matrix (rows indexed by
    P2 generators).  Odd torsion only is kept: 2 is a unit.
    """
    rel_mid = [list(r) for r in rel_mid]
    rel_out = [list(r) for r in rel_out]
    # preimage lattice: {x : g x in span(rel_out)}
    if g_out and len(g_out) > 0:
        G = [list(r) for r in g_out]
        k = len(G)
        aug = [G[i] + [-r[i] for r in rel_out] for i in range(k)]
        kb = kernel_basis(aug, n_mid + len(rel_out))
        cyc_vecs = [v[:n_mid] for v in kb]
        cyc = Lattice.spanned_by(cyc_vecs, n_mid)
    else:
        cyc = Lattice.from_basis(_identity(n_mid), n_mid) if n_mid else Lattice(0, ())
    bounds = [list(v) for v in (f_in or [])] + rel_mid
    coords = []
    for v in bounds:
        c = cyc.coordinates(v)
        if c is None:
            raise ImageNotInKernel("incoming image is not a cycle")
        coords.append(c)
    l = cyc.rank
    cycles = tuple(cyc.basis)
    if l == 0:
        return PresentedHomology(FgModule(), (), (), cycles)
    if coords:
        Q = transpose(coords)
        D, U, Ui, V, Vi = _snf_raw(Q, l, len(coords))
        diag = [D[i][i] if i < len(coords) else 0 for i in range(l)]
    else:
        Ui = _identity(l)
        diag = [0] * l
    B = transpose([list(b) for b in cyc.basis])  # n_mid x l
    gens, orders, reduce = [], [], []
    if not coords:
        U = _identity(l)
    for j in range(l):
        d = abs(diag[j])
        if d == 1:
            continue
        od = odd_part(d) if d else 0
        if d and od == 1:
            continue
        col = [Ui[i][j] for i in range(l)]
        vec = matvec(B, col)
        if d:
            # kill the 2-primary part by scaling with the (unit) power of 2
            vec = [x * (d // od) for x in vec]
        gens.append(tuple(vec))
        orders.append(od)
        reduce.append((tuple(U[j]), od, d // od if d else 1))
    free = sum(1 for o in orders if o == 0)
    module = FgModule.from_divisors(free, [o for o in orders if o])
    return PresentedHomology(module, tuple(gens), tuple(orders), cycles, cyc, tuple(reduce))


# --------------------------------------------------------------------------
# modular ranks (oracle support)
# --------------------------------------------------------------------------


def rank_mod_p(A, p: int) -> int:
    """Rank of an integer matrix over F_p (exact, vectorised elimination)."""
    M = np.array(A, dtype=object)
    if M.size == 0:
        return 0
    M = np.asarray(M % p, dtype=np.int64)
    m, n = M.shape
    rank = 0
    for c in range(n):
        if rank == m:
            break
        nz = np.nonzero(M[rank:, c])[0]
        if nz.size == 0:
            continue
        piv = rank + nz[0]
        if piv != rank:
            M[[rank, piv]] = M[[piv, rank]]
        inv = pow(int(M[rank, c]), -1, p)
        M[rank] = (M[rank] * inv) % p
        col = M[:, c].copy()
        col[rank] = 0
        rows = np.nonzero(col)[0]
        if rows.size:
            M[rows] = (M[rows] - np.outer(col[rows], M[rank])) % p
        rank += 1
    return rank


def rank_over_q(A) -> int:
    """Exact rank over Q via Smith normal form."""
    rows = _as_rows(A)
    if not rows or not rows[0]:
        return 0
    D, *_ = _snf_raw(rows, len(rows), len(rows[0]))
    return sum(1 for i in range(min(len(rows), len(rows[0]))) if D[i][i])

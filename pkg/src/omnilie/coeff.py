"""Exact rational and multivariate polynomial arithmetic.

Coefficients are Python ints when integral and :class:`fractions.Fraction`
otherwise, so the common integer case stays on the fast path while every
value is still an exact rational.  A :class:`Poly` is a sparse map from
exponent tuples to nonzero coefficients; equality of the maps is equality of
the polynomials.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product
from numbers import Rational
from typing import Iterable, Sequence

from .errors import DimensionError

__all__ = [
    "Poly",
    "as_rational",
    "partial_derive",
    "evaluate",
    "monomials",
    "rref",
    "rank",
    "nullspace",
]


def as_rational(c) -> int | Fraction:
    """Canonical exact representative of a rational scalar."""
    if isinstance(c, bool):
        return int(c)
    if isinstance(c, int):
        return c
    if isinstance(c, Fraction):
        return c.numerator if c.denominator == 1 else c
    if isinstance(c, Rational):
        return as_rational(Fraction(c.numerator, c.denominator))
    if isinstance(c, str):
        return as_rational(Fraction(c))
    raise TypeError(f"not an exact rational: {c!r}")


def _norm(c):
    if type(c) is Fraction and c.denominator == 1:
        return c.numerator
    return c


class Poly:
    """Polynomial over Q in the chart variables x_0..x_{m-1}.

    Instances are immutable; ``terms`` must not be mutated after construction.
    """

    __slots__ = ("m", "terms", "_hash")

    def __init__(self, m: int, terms: dict | None = None, *, _trusted: bool = False):
        self.m = m
        if _trusted:
            self.terms = terms
        else:
            clean = {}
            for exp, c in (terms or {}).items():
                exp = tuple(exp)
                if len(exp) != m:
                    raise DimensionError(f"exponent {exp} has length != {m}")
                c = as_rational(c)
                if c:
                    clean[exp] = c
            self.terms = clean
        self._hash = None

    # constructors

    @classmethod
    def zero(cls, m: int) -> Poly:
        return cls(m, {}, _trusted=True)

    @classmethod
    def const(cls, m: int, c) -> Poly:
        c = as_rational(c)
        return cls(m, {(0,) * m: c} if c else {}, _trusted=True)

    @classmethod
    def var(cls, m: int, i: int) -> Poly:
        if not 0 <= i < m:
            raise IndexError(f"variable index {i} out of range for m={m}")
        exp = [0] * m
        exp[i] = 1
        return cls(m, {tuple(exp): 1}, _trusted=True)

    @classmethod
    def monomial(cls, m: int, exp: Sequence[int], c=1) -> Poly:
        return cls(m, {tuple(exp): c})

    # predicates

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_value(self):
        return self.terms.get((0,) * self.m, 0)

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    # arithmetic

    def _check(self, other: Poly):
        if other.m != self.m:
            raise DimensionError(f"chart dimension mismatch: {self.m} vs {other.m}")

    def _coerce(self, other) -> Poly:
        if isinstance(other, Poly):
            self._check(other)
            return other
        return Poly.const(self.m, other)

    def __add__(self, other) -> Poly:
        other = self._coerce(other)
        if not other.terms:
            return self
        if not self.terms:
            return other
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e)
            if v is None:
                out[e] = c
            else:
                v = _norm(v + c)
                if v:
                    out[e] = v
                else:
                    del out[e]
        return Poly(self.m, out, _trusted=True)

    __radd__ = __add__

    def __neg__(self) -> Poly:
        return Poly(self.m, {e: -c for e, c in self.terms.items()}, _trusted=True)

    def __sub__(self, other) -> Poly:
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> Poly:
        return self._coerce(other) - self

    def scale(self, c) -> Poly:
        c = as_rational(c)
        if not c:
            return Poly.zero(self.m)
        if c == 1:
            return self
        return Poly(self.m, {e: _norm(v * c) for e, v in self.terms.items()}, _trusted=True)

    def __mul__(self, other) -> Poly:
        if not isinstance(other, Poly):
            return self.scale(other)
        self._check(other)
        if not self.terms or not other.terms:
            return Poly.zero(self.m)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = out.get(e)
                out[e] = c1 * c2 if v is None else v + c1 * c2
        return Poly(self.m, {e: _norm(c) for e, c in out.items() if c}, _trusted=True)

    def __rmul__(self, other) -> Poly:
        return self.scale(other)

    def __pow__(self, k: int) -> Poly:
        if k < 0:
            raise ValueError("negative power")
        out = Poly.const(self.m, 1)
        for _ in range(k):
            out = out * self
        return out

    def diff(self, i: int) -> Poly:
        """Partial derivative along x_i (0-based)."""
        if not 0 <= i < self.m:
            raise IndexError(f"variable index {i} out of range for m={self.m}")
        out = {}
        for e, c in self.terms.items():
            k = e[i]
            if k:
                ne = e[:i] + (k - 1,) + e[i + 1:]
                out[ne] = c * k
        return Poly(self.m, out, _trusted=True)

    def __call__(self, point: Sequence) -> int | Fraction:
        if len(point) != self.m:
            raise DimensionError(f"point of length {len(point)} for m={self.m}")
        pt = [as_rational(p) for p in point]
        total = 0
        for e, c in self.terms.items():
            v = c
            for p, k in zip(pt, e):
                if k:
                    v = v * p ** k
            total += v
        return as_rational(total)

    # comparison / hashing

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.m == other.m and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.terms == Poly.const(self.m, other).terms
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.m, frozenset(self.terms.items())))
        return self._hash

    def sorted_terms(self) -> list:
        """Terms in graded-lex order, highest degree first."""
        return sorted(self.terms.items(), key=lambda t: (-sum(t[0]), tuple(-k for k in t[0])))

    def __repr__(self) -> str:
        from .grammar import format_poly

        return f"Poly({format_poly(self)!r}, m={self.m})"


def partial_derive(p: Poly, i: int) -> Poly:
    return p.diff(i)


def evaluate(p: Poly, point: Sequence):
    return p(point)


def monomials(m: int, max_deg: int) -> list[tuple[int, ...]]:
    """All exponent tuples of total degree <= max_deg, graded order."""
    out = [e for e in product(range(max_deg + 1), repeat=m) if sum(e) <= max_deg]
    out.sort(key=lambda e: (sum(e), tuple(-k for k in e)))
    return out


# --- exact linear algebra over Q -------------------------------------------------


def rref(rows: Iterable[Sequence]) -> tuple[list[list], list[int]]:
    """Reduced row echelon form by Gauss-Jordan elimination over Q.

    Returns the nonzero rows of the reduced matrix and the pivot columns.
    """
    mat = [[Fraction(x) for x in r] for r in rows]
    if not mat:
        return [], []
    ncols = len(mat[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(mat)) if mat[i][c] != 0), None)
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        inv = 1 / mat[r][c]
        mat[r] = [x * inv for x in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c] != 0:
                f = mat[i][c]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == len(mat):
            break
    out = [[as_rational(x) for x in row] for row in mat[:r]]
    return out, pivots


def rank(rows: Iterable[Sequence]) -> int:
    return len(rref(rows)[1])


def nullspace(rows: Sequence[Sequence], ncols: int | None = None) -> list[list]:
    """Basis of {v : A v = 0}, one vector per free column, in column order."""
    rows = list(rows)
    if ncols is None:
        if not rows:
            raise ValueError("ncols required for an empty matrix")
        ncols = len(rows[0])
    red, pivots = rref(rows) if rows else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [0] * ncols
        v[f] = 1
        for row, p in zip(red, pivots):
            v[p] = as_rational(-row[f])
        basis.append(v)
    return basis

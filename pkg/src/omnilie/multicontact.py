"""Pointwise linear algebra for line-bundle valued forms and their kernel distributions.

A form nu of degree n is of multicontact type at p when its kernel
{v : iota_v nu|_p = 0} has corank n.  Conversely a distribution D of corank n
gives the form nu_D(v_1..v_n) = (v_1 + D) ^ ... ^ (v_n + D) with values in the
line wedge^n(T_pM / D_p); we write it in the basis [c_1]^...^[c_n] induced by
completing a frame of D_p with coordinate vectors, taken greedily in index order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .coeff import Poly, as_rational, nullspace, rank, rref
from .errors import DegeneracyError, DimensionError, RankError
from .forms import EForm, ScalarForm, increasing

__all__ = [
    "DistributionFrame",
    "QuotientForm",
    "kernel_at_point",
    "corank_at",
    "is_multicontact_at",
    "nu_from_distribution",
    "same_span",
]


@dataclass(frozen=True)
class DistributionFrame:
    """Vector fields spanning a distribution; ``generators[j][i]`` is the d_i component."""

    m: int
    generators: tuple

    def __post_init__(self):
        gens = tuple(tuple(v) for v in self.generators)
        for v in gens:
            if len(v) != self.m or any(p.m != self.m for p in v):
                raise DimensionError(f"generator must have {self.m} components on an m={self.m} chart")
        if len(gens) > self.m:
            raise DimensionError("more generators than the chart dimension")
        object.__setattr__(self, "generators", gens)

    @property
    def corank(self) -> int:
        return self.m - len(self.generators)

    def at(self, p: Sequence) -> list[list]:
        _check_point(self.m, p)
        return [[c(p) for c in v] for v in self.generators]

    def __repr__(self):
        from .grammar import format_dist

        return format_dist(self)


@dataclass(frozen=True)
class QuotientForm:
    """nu_D at a point: constant-coefficient n-form plus the induced quotient basis."""

    form: ScalarForm
    complement: tuple  # coordinate indices whose vectors complete the frame of D_p
    basis: tuple  # full basis of T_pM: generators of D_p then the complement vectors


def _check_point(m: int, p: Sequence):
    if len(p) != m:
        raise DimensionError(f"point has {len(p)} coordinates, chart has m={m}")


def _scalar(nu) -> ScalarForm:
    if isinstance(nu, EForm):
        if nu.r != 1:
            raise RankError(f"need a line-bundle valued form (r = 1), got r={nu.r}")
        return nu.parts[0]
    return nu


def _contraction_matrix(w: ScalarForm, p: Sequence) -> list[list]:
    """Rows J (|J| = k-1), columns i: nu_p(d_i, d_J)."""
    m, k = w.m, w.k
    rows = []
    for J in increasing(m, k - 1):
        row = []
        for i in range(m):
            if i in J:
                row.append(0)
                continue
            K = tuple(sorted(J + (i,)))
            sign = -1 if K.index(i) & 1 else 1
            row.append(sign * w[K](p))
        rows.append(row)
    return rows


def kernel_at_point(nu, p: Sequence) -> list[list]:
    """Exact basis of the kernel of v -> iota_v nu at the point p."""
    w = _scalar(nu)
    _check_point(w.m, p)
    if w.k == 0:
        return [[1 if j == i else 0 for j in range(w.m)] for i in range(w.m)]
    return nullspace(_contraction_matrix(w, p), w.m)


def corank_at(nu, p: Sequence) -> int:
    w = _scalar(nu)
    return w.m - len(kernel_at_point(w, p))


def is_multicontact_at(nu, points: Sequence[Sequence]) -> list[bool]:
    w = _scalar(nu)
    return [corank_at(w, p) == w.k for p in points]


def _inverse(M: list[list]) -> list[list]:
    n = len(M)
    red, piv = rref([row + [1 if j == i else 0 for j in range(n)] for i, row in enumerate(M)])
    if piv[:n] != list(range(n)):
        raise DegeneracyError("singular basis")
    return [row[n:] for row in red]


def nu_from_distribution(D: DistributionFrame, p: Sequence) -> QuotientForm:
    m = D.m
    gens = D.at(p)
    if gens and rank(gens) < len(gens):
        raise DegeneracyError(f"generators are linearly dependent at {list(p)}")
    basis = [list(v) for v in gens]
    complement = []
    for i in range(m):
        if len(basis) == m:
            break
        e = [1 if j == i else 0 for j in range(m)]
        if rank(basis + [e]) > len(basis):
            basis.append(e)
            complement.append(i)
    # columns of M are basis vectors; rows of M^{-1} are the dual coordinates
    M = [[basis[j][i] for j in range(m)] for i in range(m)]
    dual = _inverse(M)
    form = ScalarForm.function(Poly.const(m, 1))
    for row in dual[len(gens):]:
        q = ScalarForm(m, 1, {(i,): Poly.const(m, c) for i, c in enumerate(row) if c})
        form = form.wedge(q)
    return QuotientForm(form, tuple(complement), tuple(tuple(as_rational(c) for c in v) for v in basis))


def same_span(A: Sequence[Sequence], B: Sequence[Sequence]) -> bool:
    """Whether two lists of vectors span the same subspace."""
    ra = rref(A)[0] if A else []
    rb = rref(B)[0] if B else []
    return ra == rb

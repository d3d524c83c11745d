"""Scalar and E-valued differential forms on a coordinate chart, and
derivations of the trivial bundle E = R^m x R^r in the flat-frame splitting.

Conventions
-----------
* Indices are 0-based in the Python API (``dx0`` is dx^1 in the usual
  notation); the text grammar is 1-based.
* A k-form is stored by its values on increasing tuples of coordinate fields,
  ``comps[I] = form(d_{i_1}, ..., d_{i_k})``, so ``dx^I`` has value 1 on ``I``.
* The frame (e_a) of E is global and flat: ``d_i e_a = 0``.  A derivation is
  the pair ``(X, Phi)`` acting by ``u -> X(u) + Phi u`` with ``Phi[g][b]`` the
  coefficient of the endomorphism sending e_b to e_g.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Sequence

from .coeff import Poly
from .errors import DegreeError, DimensionError, RankError

__all__ = [
    "ChartConfig",
    "ScalarForm",
    "EForm",
    "Derivation",
    "wedge",
    "d_form",
    "iota_vec",
    "lie_vec",
    "commutator",
    "apply_derivation",
    "lie_deriv_eform",
    "merge_sign",
]


@dataclass(frozen=True)
class ChartConfig:
    m: int
    r: int = 1

    def __post_init__(self):
        if self.m < 1 or self.r < 1:
            raise ValueError(f"need m >= 1 and r >= 1, got m={self.m}, r={self.r}")

    @property
    def frame_size(self) -> int:
        return self.m + self.r * self.r


@lru_cache(maxsize=None)
def merge_sign(I: tuple, J: tuple) -> tuple[int, tuple]:
    """Sign and sorted index of dx^I ^ dx^J (sign 0 if they overlap)."""
    if set(I) & set(J):
        return 0, ()
    inv = sum(1 for i in I for j in J if i > j)
    return (-1 if inv & 1 else 1), tuple(sorted(I + J))


def _acc(out: dict, key, p: Poly):
    if p.terms:
        q = out.get(key)
        out[key] = p if q is None else q + p


def _clean(comps: dict) -> dict:
    return {k: v for k, v in comps.items() if v.terms}


class ScalarForm:
    """Differential k-form with polynomial coefficients."""

    __slots__ = ("m", "k", "comps")

    def __init__(self, m: int, k: int, comps: dict | None = None):
        if k < 0:
            raise DegreeError(f"negative degree {k}")
        self.m = m
        self.k = k
        out = {}
        for I, p in (comps or {}).items():
            I = tuple(I)
            if len(I) != k or any(a >= b for a, b in zip(I, I[1:])) or (I and not 0 <= I[0] <= I[-1] < m):
                raise DimensionError(f"bad multi-index {I} for degree {k} on m={m}")
            if p.m != m:
                raise DimensionError("coefficient on a different chart")
            if p.terms:
                out[I] = p
        self.comps = out

    @classmethod
    def _raw(cls, m, k, comps) -> ScalarForm:
        obj = cls.__new__(cls)
        obj.m, obj.k, obj.comps = m, k, _clean(comps)
        return obj

    @classmethod
    def zero(cls, m: int, k: int) -> ScalarForm:
        return cls._raw(m, k, {})

    @classmethod
    def function(cls, f: Poly) -> ScalarForm:
        return cls._raw(f.m, 0, {(): f})

    @classmethod
    def basis(cls, m: int, I: Sequence[int], coef: Poly | None = None) -> ScalarForm:
        """coef * dx^{i_1} ^ ... ^ dx^{i_k}, any index order (sign applied)."""
        coef = coef if coef is not None else Poly.const(m, 1)
        out = ScalarForm.function(coef)
        for i in I:
            out = out.wedge_right(i)
        return out

    @classmethod
    def volume(cls, m: int) -> ScalarForm:
        return cls._raw(m, m, {tuple(range(m)): Poly.const(m, 1)})

    def wedge_right(self, i: int) -> ScalarForm:
        out = {}
        for I, p in self.comps.items():
            s, K = merge_sign(I, (i,))
            if s:
                _acc(out, K, p if s > 0 else -p)
        return ScalarForm._raw(self.m, self.k + 1, out)

    def is_zero(self) -> bool:
        return not self.comps

    def __bool__(self):
        return bool(self.comps)

    def _check(self, other):
        if self.m != other.m:
            raise DimensionError("chart mismatch")
        if self.k != other.k:
            raise DegreeError(f"degree mismatch {self.k} vs {other.k}")

    def __add__(self, other: ScalarForm) -> ScalarForm:
        self._check(other)
        out = dict(self.comps)
        for I, p in other.comps.items():
            _acc(out, I, p)
        return ScalarForm._raw(self.m, self.k, out)

    def __neg__(self) -> ScalarForm:
        return ScalarForm._raw(self.m, self.k, {I: -p for I, p in self.comps.items()})

    def __sub__(self, other: ScalarForm) -> ScalarForm:
        return self + (-other)

    def scale(self, f) -> ScalarForm:
        return ScalarForm._raw(self.m, self.k, {I: p * f for I, p in self.comps.items()})

    def __eq__(self, other):
        if not isinstance(other, ScalarForm):
            return NotImplemented
        return self.m == other.m and self.k == other.k and self.comps == other.comps

    def __hash__(self):
        return hash((self.m, self.k, frozenset(self.comps.items())))

    def __getitem__(self, I) -> Poly:
        return self.comps.get(tuple(I), Poly.zero(self.m))

    # calculus

    def wedge(self, other: ScalarForm) -> ScalarForm:
        if self.m != other.m:
            raise DimensionError("chart mismatch")
        k = self.k + other.k
        out: dict = {}
        if k <= self.m:
            for I, p in self.comps.items():
                for J, q in other.comps.items():
                    s, K = merge_sign(I, J)
                    if s:
                        pq = p * q
                        _acc(out, K, pq if s > 0 else -pq)
        return ScalarForm._raw(self.m, k, out)

    def d(self) -> ScalarForm:
        out: dict = {}
        if self.k < self.m:
            for I, p in self.comps.items():
                for i in range(self.m):
                    s, K = merge_sign((i,), I)
                    if s:
                        dp = p.diff(i)
                        _acc(out, K, dp if s > 0 else -dp)
        return ScalarForm._raw(self.m, self.k + 1, out)

    def iota(self, X: Sequence[Poly]) -> ScalarForm:
        if len(X) != self.m:
            raise DimensionError("vector field has wrong length")
        if self.k == 0:
            return ScalarForm._raw(self.m, 0, {})
        out: dict = {}
        for I, p in self.comps.items():
            for pos, i in enumerate(I):
                if X[i].terms:
                    t = X[i] * p
                    _acc(out, I[:pos] + I[pos + 1:], t if pos % 2 == 0 else -t)
        return ScalarForm._raw(self.m, self.k - 1, out)

    def lie(self, X: Sequence[Poly]) -> ScalarForm:
        out = self.d().iota(X)
        if self.k:
            out = out + self.iota(X).d()
        return out

    def __repr__(self):
        from .grammar import format_form

        return f"ScalarForm({self.k}: {format_form(self)})"


class EForm:
    """E-valued k-form: one scalar k-form per frame section e_a."""

    __slots__ = ("m", "r", "k", "parts")

    def __init__(self, parts: Sequence[ScalarForm]):
        parts = tuple(parts)
        if not parts:
            raise RankError("need at least one frame component")
        m, k = parts[0].m, parts[0].k
        for p in parts:
            if p.m != m or p.k != k:
                raise DimensionError("inconsistent components")
        self.m, self.r, self.k, self.parts = m, len(parts), k, parts

    @classmethod
    def zero(cls, m: int, r: int, k: int) -> EForm:
        z = ScalarForm.zero(m, k)
        return cls((z,) * r)

    @classmethod
    def from_components(cls, m: int, r: int, k: int, comps: dict) -> EForm:
        """Build from a map ``(I, a) -> Poly``."""
        split = [dict() for _ in range(r)]
        for (I, a), p in comps.items():
            if not 0 <= a < r:
                raise DimensionError(f"frame index {a} out of range for r={r}")
            split[a][tuple(I)] = p
        return cls(ScalarForm(m, k, c) for c in split)

    @classmethod
    def section(cls, values: Sequence[Poly]) -> EForm:
        """Degree-0 E-valued form, i.e. a section sum values[a] e_a."""
        return cls(ScalarForm.function(v) for v in values)

    @classmethod
    def tensor(cls, w: ScalarForm, r: int, a: int) -> EForm:
        """w (x) e_a."""
        z = ScalarForm.zero(w.m, w.k)
        return cls(w if b == a else z for b in range(r))

    @property
    def components(self) -> dict:
        return {(I, a): p for a, part in enumerate(self.parts) for I, p in part.comps.items()}

    def is_zero(self) -> bool:
        return not any(p.comps for p in self.parts)

    def __bool__(self):
        return not self.is_zero()

    def _check(self, other: EForm):
        if (self.m, self.r) != (other.m, other.r):
            raise DimensionError("chart/rank mismatch")
        if self.k != other.k:
            raise DegreeError(f"degree mismatch {self.k} vs {other.k}")

    def __add__(self, other: EForm) -> EForm:
        self._check(other)
        return EForm(a + b for a, b in zip(self.parts, other.parts))

    def __neg__(self) -> EForm:
        return EForm(-a for a in self.parts)

    def __sub__(self, other: EForm) -> EForm:
        self._check(other)
        return EForm(a - b for a, b in zip(self.parts, other.parts))

    def scale(self, f) -> EForm:
        return EForm(a.scale(f) for a in self.parts)

    def __eq__(self, other):
        if not isinstance(other, EForm):
            return NotImplemented
        return (self.m, self.r, self.k) == (other.m, other.r, other.k) and self.parts == other.parts

    def __hash__(self):
        return hash(self.parts)

    def values(self, I) -> tuple:
        return tuple(p[I] for p in self.parts)

    def d(self) -> EForm:
        return EForm(a.d() for a in self.parts)

    def iota(self, X: Sequence[Poly]) -> EForm:
        return EForm(a.iota(X) for a in self.parts)

    def endo(self, Phi) -> EForm:
        """Apply a matrix of functions to the values: (Phi nu)_g = sum_b Phi[g][b] nu_b."""
        out = []
        for g in range(self.r):
            acc = ScalarForm.zero(self.m, self.k)
            for b in range(self.r):
                if Phi[g][b].terms and self.parts[b].comps:
                    acc = acc + self.parts[b].scale(Phi[g][b])
            out.append(acc)
        return EForm(out)

    def __repr__(self):
        from .grammar import format_form

        return f"EForm({self.k}: {format_form(self)})"


class Derivation:
    """Section X^i d_i + Phi^g_b e^b_g of the gauge algebroid in the flat splitting."""

    __slots__ = ("m", "r", "X", "Phi")

    def __init__(self, X: Sequence[Poly], Phi: Sequence[Sequence[Poly]]):
        self.X = tuple(X)
        self.Phi = tuple(tuple(row) for row in Phi)
        self.m, self.r = len(self.X), len(self.Phi)
        if self.m < 1 or self.r < 1 or any(len(row) != self.r for row in self.Phi):
            raise DimensionError("bad derivation shape")
        for p in self.X + tuple(q for row in self.Phi for q in row):
            if p.m != self.m:
                raise DimensionError("coefficient on a different chart")

    @classmethod
    def zero(cls, m: int, r: int) -> Derivation:
        z = Poly.zero(m)
        return cls((z,) * m, ((z,) * r,) * r)

    @classmethod
    def vector(cls, X: Sequence[Poly], r: int) -> Derivation:
        m = len(X)
        z = Poly.zero(m)
        return cls(X, ((z,) * r,) * r)

    @classmethod
    def endomorphism(cls, Phi: Sequence[Sequence[Poly]], m: int) -> Derivation:
        return cls((Poly.zero(m),) * m, Phi)

    @classmethod
    def identity(cls, m: int, r: int) -> Derivation:
        z, one = Poly.zero(m), Poly.const(m, 1)
        return cls.endomorphism([[one if g == b else z for b in range(r)] for g in range(r)], m)

    @classmethod
    def frame(cls, m: int, r: int, a: int) -> Derivation:
        """Frame element D_a: d_a for a < m, else e^b_g with a = m + g*r + b."""
        if not 0 <= a < m + r * r:
            raise IndexError(f"frame index {a} out of range")
        coeffs = [Poly.zero(m)] * (m + r * r)
        coeffs[a] = Poly.const(m, 1)
        return cls.from_frame(coeffs, m, r)

    @classmethod
    def from_frame(cls, coeffs: Sequence[Poly], m: int, r: int) -> Derivation:
        X = coeffs[:m]
        Phi = [[coeffs[m + g * r + b] for b in range(r)] for g in range(r)]
        return cls(X, Phi)

    def frame_coeffs(self) -> list[Poly]:
        return list(self.X) + [p for row in self.Phi for p in row]

    @property
    def symbol(self) -> tuple:
        return self.X

    def is_zero(self) -> bool:
        return not any(p.terms for p in self.frame_coeffs())

    def _check(self, other):
        if (self.m, self.r) != (other.m, other.r):
            raise DimensionError("chart/rank mismatch")

    def __add__(self, other: Derivation) -> Derivation:
        self._check(other)
        return Derivation.from_frame([a + b for a, b in zip(self.frame_coeffs(), other.frame_coeffs())], self.m, self.r)

    def __neg__(self) -> Derivation:
        return Derivation.from_frame([-a for a in self.frame_coeffs()], self.m, self.r)

    def __sub__(self, other: Derivation) -> Derivation:
        return self + (-other)

    def scale(self, f) -> Derivation:
        return Derivation.from_frame([a * f for a in self.frame_coeffs()], self.m, self.r)

    def __eq__(self, other):
        if not isinstance(other, Derivation):
            return NotImplemented
        return self.X == other.X and self.Phi == other.Phi

    def __hash__(self):
        return hash((self.X, self.Phi))

    def act(self, f: Poly) -> Poly:
        """Symbol acting on a function."""
        out = Poly.zero(self.m)
        for i, c in enumerate(self.X):
            if c.terms:
                out = out + c * f.diff(i)
        return out

    def __repr__(self):
        from .grammar import format_derivation

        return format_derivation(self)


# --- operations -------------------------------------------------------------------


def wedge(a: ScalarForm, b):
    """Exterior product of a scalar form with a scalar or E-valued form."""
    if isinstance(b, EForm):
        return EForm(a.wedge(p) for p in b.parts)
    return a.wedge(b)


def d_form(a):
    return a.d()


def iota_vec(X: Sequence[Poly], a):
    return a.iota(X)


def lie_vec(X: Sequence[Poly], a):
    """Classical Lie derivative L_X = [iota_X, d] (componentwise on E-forms)."""
    if isinstance(a, EForm):
        return EForm(p.lie(X) for p in a.parts)
    return a.lie(X)


def _vec_bracket(X: Sequence[Poly], Y: Sequence[Poly]) -> list[Poly]:
    m = len(X)
    out = []
    for j in range(m):
        acc = Poly.zero(m)
        for i in range(m):
            if X[i].terms and Y[j].terms:
                acc = acc + X[i] * Y[j].diff(i)
            if Y[i].terms and X[j].terms:
                acc = acc - Y[i] * X[j].diff(i)
        out.append(acc)
    return out


def commutator(d1: Derivation, d2: Derivation) -> Derivation:
    """Operator commutator d1 d2 - d2 d1 of two derivations."""
    d1._check(d2)
    r = d1.r
    X = _vec_bracket(d1.X, d2.X)
    Phi = []
    for g in range(r):
        row = []
        for b in range(r):
            acc = d1.act(d2.Phi[g][b]) - d2.act(d1.Phi[g][b])
            for c in range(r):
                acc = acc + d1.Phi[g][c] * d2.Phi[c][b] - d2.Phi[g][c] * d1.Phi[c][b]
            row.append(acc)
        Phi.append(row)
    return Derivation(X, Phi)


def apply_derivation(d: Derivation, u: EForm) -> EForm:
    """d(u) for a section u of E (degree-0 E-valued form)."""
    if u.k != 0:
        raise DegreeError(f"derivations act on sections (degree 0), got degree {u.k}")
    if (u.m, u.r) != (d.m, d.r):
        raise DimensionError("chart/rank mismatch")
    vals = [u.parts[a][()] for a in range(u.r)]
    out = []
    for g in range(d.r):
        acc = d.act(vals[g])
        for b in range(d.r):
            if d.Phi[g][b].terms:
                acc = acc + d.Phi[g][b] * vals[b]
        out.append(acc)
    return EForm.section(out)


def lie_deriv_eform(d: Derivation, nu: EForm) -> EForm:
    """Lie derivative of an E-valued form along a derivation: L_X nu + Phi nu."""
    if (nu.m, nu.r) != (d.m, d.r):
        raise DimensionError("chart/rank mismatch")
    return lie_vec(d.X, nu) + nu.endo(d.Phi)


def increasing(m: int, k: int) -> list[tuple]:
    return list(combinations(range(m), k))

"""Sections of the higher omni-Lie algebroid DE + J_nE and its structure maps."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .coeff import Poly
from .errors import DegreeError, DimensionError, RankError
from .forms import Derivation, EForm, ScalarForm, commutator, lie_vec, wedge
from .jet import JForm, jd, jiota, jlie, jscale

__all__ = [
    "OmniSection",
    "anchor",
    "dorfman",
    "dorfman_expanded",
    "plus_pairing",
    "twisted_dorfman",
    "jacobiator",
    "trivial_line_dorfman",
    "trivial_line_pairing",
    "speculated_axiom",
]


@dataclass(frozen=True, eq=True)
class OmniSection:
    dpart: Derivation
    jpart: JForm

    def __post_init__(self):
        if (self.dpart.m, self.dpart.r) != (self.jpart.m, self.jpart.r):
            raise DimensionError("derivation and jet form on different charts")
        if self.jpart.n < 1:
            raise DegreeError("omni sections need form degree n >= 1")

    @property
    def n(self) -> int:
        return self.jpart.n

    @property
    def m(self) -> int:
        return self.jpart.m

    @property
    def r(self) -> int:
        return self.jpart.r

    @classmethod
    def zero(cls, m: int, r: int, n: int) -> OmniSection:
        return cls(Derivation.zero(m, r), JForm.zero(m, r, n))

    def is_zero(self) -> bool:
        return self.dpart.is_zero() and self.jpart.is_zero()

    def __add__(self, other: OmniSection) -> OmniSection:
        _same_n(self, other)
        return OmniSection(self.dpart + other.dpart, self.jpart + other.jpart)

    def __sub__(self, other: OmniSection) -> OmniSection:
        _same_n(self, other)
        return OmniSection(self.dpart - other.dpart, self.jpart - other.jpart)

    def __neg__(self) -> OmniSection:
        return OmniSection(-self.dpart, -self.jpart)

    def scale(self, f: Poly) -> OmniSection:
        """Module multiplication by a function."""
        return OmniSection(self.dpart.scale(f), jscale(f, self.jpart))

    def __repr__(self):
        from .grammar import format_omni

        return format_omni(self)


def _same_n(*es: OmniSection):
    n = es[0].n
    for e in es[1:]:
        if e.n != n:
            raise DegreeError(f"omni sections of different degree: {n} vs {e.n}")
        if (e.m, e.r) != (es[0].m, es[0].r):
            raise DimensionError("omni sections on different charts")


def anchor(e: OmniSection) -> Derivation:
    return e.dpart


def dorfman(e1: OmniSection, e2: OmniSection) -> OmniSection:
    """{d + mu, r + nu} = [d, r] + L_d nu - iota_r dd mu."""
    _same_n(e1, e2)
    d, mu = e1.dpart, e1.jpart
    r, nu = e2.dpart, e2.jpart
    return OmniSection(commutator(d, r), jlie(d, nu) - jiota(r, jd(mu)))


def dorfman_expanded(e1: OmniSection, e2: OmniSection) -> OmniSection:
    """First form of the bracket: [d, r] + L_d nu - L_r mu + dd iota_r mu."""
    _same_n(e1, e2)
    d, mu = e1.dpart, e1.jpart
    r, nu = e2.dpart, e2.jpart
    return OmniSection(commutator(d, r), jlie(d, nu) - jlie(r, mu) + jd(jiota(r, mu)))


def plus_pairing(e1: OmniSection, e2: OmniSection) -> JForm:
    _same_n(e1, e2)
    return (jiota(e1.dpart, e2.jpart) + jiota(e2.dpart, e1.jpart)).rscale(Fraction(1, 2))


def twisted_dorfman(omega: JForm, e1: OmniSection, e2: OmniSection) -> OmniSection:
    _same_n(e1, e2)
    if omega.n != e1.n + 2:
        raise DegreeError(f"twisting form must have degree n+2 = {e1.n + 2}, got {omega.n}")
    br = dorfman(e1, e2)
    tw = jiota(e2.dpart, jiota(e1.dpart, omega))
    return OmniSection(br.dpart, br.jpart + tw)


def jacobiator(e1: OmniSection, e2: OmniSection, e3: OmniSection, omega: JForm | None = None) -> OmniSection:
    """{e1,{e2,e3}} - {{e1,e2},e3} - {e2,{e1,e3}} for the plain or omega-twisted bracket."""
    _same_n(e1, e2, e3)
    if omega is None:
        br = dorfman
    else:
        def br(a, b):
            return twisted_dorfman(omega, a, b)
    return br(e1, br(e2, e3)) - br(br(e1, e2), e3) - br(e2, br(e1, e3))


def speculated_axiom(e: OmniSection, e2: OmniSection) -> tuple[JForm, JForm]:
    """Both sides of ({e,e}, e')_+ = iota_{rho e'} dd (e,e)_+ (not a theorem; exposed for exploration)."""
    lhs = plus_pairing(dorfman(e, e), e2)
    rhs = jiota(e2.dpart, jd(plus_pairing(e, e)))
    return lhs, rhs


# --- trivial line bundle, connection-split representation -------------------------


def _line_check(*forms):
    for f in forms:
        if isinstance(f, EForm) and f.r != 1:
            raise RankError("trivial-line formulas need r = 1")


def _scalar(f) -> ScalarForm:
    if isinstance(f, EForm):
        _line_check(f)
        return f.parts[0]
    return f


def _split_iota(X, f: Poly, t0: ScalarForm, t1: ScalarForm):
    return t0.iota(X) + t1.scale(f), -t1.iota(X)


def trivial_line_pairing(sec1, sec2):
    """Pairing of ((X, f), (t0, t1)) sections of the higher extended generalized tangent bundle.

    Returns the split pair of scalar forms of degrees n-1 and n-2 (the second
    is ``None`` when n = 1).
    """
    (X, f), (m0, m1) = sec1
    (Y, g), (n0, n1) = sec2
    m0, m1, n0, n1 = map(_scalar, (m0, m1, n0, n1))
    half = Fraction(1, 2)
    a0 = (n0.iota(X) + n1.scale(f) + m0.iota(Y) + m1.scale(g)).scale(half)
    if m0.k == 1:
        return a0, None
    a1 = (-n1.iota(X) - m1.iota(Y)).scale(half)
    return a0, a1


def trivial_line_dorfman(sec1, sec2):
    """Dorfman bracket of ((X, f), (t0, t1)) and ((Y, g), (s0, s1)) in split form.

    Returns ``((Z, h), (b0, b1))`` with Z a vector field, h a function and
    (b0, b1) scalar forms of degrees n and n-1.
    """
    (X, f), (m0, m1) = sec1
    (Y, g), (n0, n1) = sec2
    m0, m1, n0, n1 = map(_scalar, (m0, m1, n0, n1))
    mm = len(X)
    Z = []
    for j in range(mm):
        acc = Poly.zero(mm)
        for i in range(mm):
            acc = acc + X[i] * Y[j].diff(i) - Y[i] * X[j].diff(i)
        Z.append(acc)
    Xg = sum((X[i] * g.diff(i) for i in range(mm)), Poly.zero(mm))
    Yf = sum((Y[i] * f.diff(i) for i in range(mm)), Poly.zero(mm))
    h = Xg - Yf
    shifted = m0 - m1.d()
    b0 = (
        lie_vec(X, n0)
        + n0.scale(f)
        + wedge(ScalarForm.function(f).d(), n1)
        - m0.d().iota(Y)
        - shifted.scale(g)
    )
    b1 = lie_vec(X, n1) + n1.scale(f) + shifted.iota(Y)
    return (Z, h), (b0, b1)

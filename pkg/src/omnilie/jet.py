"""Vector bundle forms in the connection-free pair representation.

A degree-n :class:`JForm` is the pair ``(mu0, mu1)`` of E-valued forms of
degrees n and n-1, standing for the generic form ``j^*mu0 + dd j^*mu1`` on
the gauge algebroid.  Degree 0 carries only ``mu0`` (a section of E).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .coeff import Poly
from .errors import DegreeError, DimensionError, NotAJetForm
from .forms import Derivation, EForm, ScalarForm, lie_deriv_eform, wedge
from .gauge import GenForm, ce_differential, gen_iota, pullback

__all__ = [
    "JForm",
    "jwedge",
    "jscale",
    "jd",
    "jiota",
    "jlie",
    "to_split",
    "from_split",
    "embed_generic",
    "project_from_generic",
    "membership_check",
    "MembershipResult",
    "extract_lambda",
]


class JForm:
    __slots__ = ("m", "r", "n", "mu0", "mu1")

    def __init__(self, n: int, mu0: EForm, mu1: EForm | None = None):
        if n < 0:
            raise DegreeError(f"negative degree {n}")
        if mu0.k != n:
            raise DegreeError(f"mu0 has degree {mu0.k}, expected {n}")
        if n == 0:
            if mu1 is not None and not mu1.is_zero():
                raise DegreeError("a degree-0 jet form has no mu1 part")
            mu1 = None
        else:
            if mu1 is None:
                mu1 = EForm.zero(mu0.m, mu0.r, n - 1)
            if mu1.k != n - 1:
                raise DegreeError(f"mu1 has degree {mu1.k}, expected {n - 1}")
            if (mu1.m, mu1.r) != (mu0.m, mu0.r):
                raise DimensionError("mu0/mu1 chart mismatch")
        self.m, self.r, self.n, self.mu0, self.mu1 = mu0.m, mu0.r, n, mu0, mu1

    @classmethod
    def zero(cls, m: int, r: int, n: int) -> JForm:
        return cls(n, EForm.zero(m, r, n), EForm.zero(m, r, n - 1) if n else None)

    @classmethod
    def section(cls, u: EForm) -> JForm:
        return cls(0, u)

    @property
    def parts(self) -> tuple:
        return (self.mu0,) if self.mu1 is None else (self.mu0, self.mu1)

    def is_zero(self) -> bool:
        return all(p.is_zero() for p in self.parts)

    def __bool__(self):
        return not self.is_zero()

    def _check(self, other: JForm):
        if (self.m, self.r) != (other.m, other.r):
            raise DimensionError("chart/rank mismatch")
        if self.n != other.n:
            raise DegreeError(f"degree mismatch {self.n} vs {other.n}")

    def __add__(self, other: JForm) -> JForm:
        self._check(other)
        return JForm(self.n, self.mu0 + other.mu0, None if self.n == 0 else self.mu1 + other.mu1)

    def __neg__(self) -> JForm:
        return JForm(self.n, -self.mu0, None if self.n == 0 else -self.mu1)

    def __sub__(self, other: JForm) -> JForm:
        return self + (-other)

    def rscale(self, c) -> JForm:
        """Multiply by a rational constant (no derivative terms)."""
        return JForm(self.n, self.mu0.scale(c), None if self.n == 0 else self.mu1.scale(c))

    def __eq__(self, other):
        if not isinstance(other, JForm):
            return NotImplemented
        return (self.m, self.r, self.n) == (other.m, other.r, other.n) and self.parts == other.parts

    def __hash__(self):
        return hash((self.n, self.parts))

    def __repr__(self):
        from .grammar import format_jform

        return format_jform(self)


def _zero_like(mu: JForm, k: int) -> EForm:
    return EForm.zero(mu.m, mu.r, k)


def jwedge(w: ScalarForm, mu: JForm) -> JForm:
    """Omega(M)-module product: (w^mu0 - (-1)^|w| dw^mu1, (-1)^|w| w^mu1)."""
    if (w.m) != mu.m:
        raise DimensionError("chart mismatch")
    k = w.k
    sgn = -1 if k & 1 else 1
    n = k + mu.n
    mu0 = wedge(w, mu.mu0)
    if mu.mu1 is None:
        return JForm(n, mu0, _zero_like(mu, n - 1) if n else None)
    dwmu1 = wedge(w.d(), mu.mu1)
    mu0 = mu0 - dwmu1.scale(sgn)
    return JForm(n, mu0, wedge(w, mu.mu1).scale(sgn))


def jscale(f: Poly, mu: JForm) -> JForm:
    """Function times jet form (module structure, not componentwise)."""
    return jwedge(ScalarForm.function(f), mu)


def jd(mu: JForm) -> JForm:
    return JForm(mu.n + 1, _zero_like(mu, mu.n + 1), mu.mu0)


def jiota(d: Derivation, mu: JForm) -> JForm:
    """(iota_X mu0 + L_d mu1, -iota_X mu1), X the symbol of d."""
    if (d.m, d.r) != (mu.m, mu.r):
        raise DimensionError("chart/rank mismatch")
    if mu.n == 0:
        raise DegreeError("cannot contract a degree-0 jet form")
    mu0 = mu.mu0.iota(d.X) + lie_deriv_eform(d, mu.mu1)
    mu1 = None if mu.n == 1 else -mu.mu1.iota(d.X)
    return JForm(mu.n - 1, mu0, mu1)


def jlie(d: Derivation, mu: JForm) -> JForm:
    if (d.m, d.r) != (mu.m, mu.r):
        raise DimensionError("chart/rank mismatch")
    return JForm(mu.n, lie_deriv_eform(d, mu.mu0), None if mu.n == 0 else lie_deriv_eform(d, mu.mu1))


def to_split(mu: JForm) -> tuple[EForm, EForm | None]:
    """Connection-split pair (mu0 + d mu1, mu1) for the flat frame connection."""
    if mu.n == 0:
        return mu.mu0, None
    return mu.mu0 + mu.mu1.d(), mu.mu1


def from_split(n: int, t0: EForm, t1: EForm | None) -> JForm:
    if n == 0:
        return JForm(0, t0)
    return JForm(n, t0 - t1.d(), t1)


def embed_generic(mu: JForm) -> GenForm:
    """The generic form j^*mu0 + dd j^*mu1."""
    g = pullback(mu.mu0)
    if mu.mu1 is not None:
        g = g + ce_differential(pullback(mu.mu1))
    return g


@dataclass
class MembershipResult:
    ok: bool
    lam: EForm | None
    witness: list = field(default_factory=list)

    def __bool__(self):
        return self.ok


def extract_lambda(g: GenForm) -> EForm | None:
    """Pure-TM part of iota_Id g, read as an E-valued (k-1)-form on M."""
    if g.k == 0:
        return None
    rho = gen_iota(Derivation.identity(g.m, g.r), g)
    comps = {}
    for S, v in rho.comps.items():
        if S and S[-1] >= g.m:
            continue
        for a, p in enumerate(v):
            comps[(S, a)] = p
    return EForm.from_components(g.m, g.r, g.k - 1, comps)


def membership_check(g: GenForm) -> MembershipResult:
    """Decide whether g lies in the jet subbundle; witnesses are failing component equations.

    Each witness is ``(kind, a, args, expected, actual)``: for ``kind ==
    "iota_Id"`` the value of iota_Id g on ``args`` (which contain an
    endomorphism) must vanish; for ``kind == "iota_endo"`` the value of
    iota_{D_a} g on ``args`` must equal D_a applied to lambda.
    """
    m, r, k = g.m, g.r, g.k
    if k == 0:
        return MembershipResult(True, None)
    witness = []
    rho = gen_iota(Derivation.identity(m, r), g)
    for S, v in sorted(rho.comps.items(), key=lambda kv: kv[0]):
        if S and S[-1] >= m:
            witness.append(("iota_Id", None, S, (Poly.zero(m),) * r, v))
    lam = extract_lambda(g)
    jl = pullback(lam)
    for a in range(m, m + r * r):
        ga, b = divmod(a - m, r)
        lhs = gen_iota(Derivation.frame(m, r, a), g)
        # e^b_ga o j^*lam: picks component b of the value and puts it in slot ga
        rhs_comps = {}
        for S, v in jl.comps.items():
            if v[b].terms:
                rhs_comps[S] = tuple(v[b] if c == ga else Poly.zero(m) for c in range(r))
        rhs = GenForm(m, r, k - 1, rhs_comps)
        if lhs != rhs:
            diff = lhs - rhs
            for S in sorted(diff.comps):
                witness.append(("iota_endo", a, S, rhs.value(S), lhs.value(S)))
    return MembershipResult(not witness, lam, witness)


def project_from_generic(g: GenForm) -> JForm:
    """Pair (lambda of dd g, lambda of g) of a generic jet form."""
    res = membership_check(g)
    if not res.ok:
        raise NotAJetForm(f"not a jet form; first violation: {res.witness[0][:3]}", res.witness)
    if g.k == 0:
        return JForm(0, EForm.section([v for v in g.comps.get((), (Poly.zero(g.m),) * g.r)]))
    return JForm(g.k, extract_lambda(ce_differential(g)), res.lam)

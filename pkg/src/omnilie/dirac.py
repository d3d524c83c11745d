"""Isotropic and involutive graph subbundles of the higher omni-Lie algebroid.

Graphs over DE are given by their values on the gauge-algebroid frame
(:class:`BMapD`); graphs over J_{m+1}E by a :class:`ZStructure`.  The
rigidity solver assembles the isotropy equations for a general map
J_nE -> DE with bounded-degree polynomial coefficients and reports the
dimension of its solution space over Q.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Sequence

from .coeff import Poly, monomials, rank
from .errors import DegreeError, DimensionError, PreconditionError, RangeError
from .forms import Derivation, EForm, ScalarForm
from .gauge import GenForm
from .jet import JForm, embed_generic, jd, jiota, jscale, jwedge, project_from_generic
from .omni import OmniSection, dorfman, plus_pairing

__all__ = [
    "CheckResult",
    "BMapD",
    "bmap_from_form",
    "isotropy_check_D",
    "maximality_check_D",
    "reconstruct_form",
    "reconstruct_form_generic",
    "involutivity_check_D",
    "dirac_from_eform",
    "GeneratorSet",
    "RigiditySystem",
    "rigidity_system",
    "rigidity_solve",
    "ZStructure",
    "jacobi_check",
    "isotropy_check_J",
    "involutivity_check_J",
    "so3",
]


@dataclass
class CheckResult:
    ok: bool
    witness: object = None
    detail: dict = field(default_factory=dict)

    def __bool__(self):
        return self.ok


@dataclass(frozen=True)
class BMapD:
    """Vector bundle map DE -> J_nE given by its values on the frame D_0..D_{N-1}."""

    n: int
    values: tuple

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(self.values))
        if not self.values:
            raise DimensionError("empty frame")
        v0 = self.values[0]
        if len(self.values) != v0.m + v0.r * v0.r:
            raise DimensionError(f"need {v0.m + v0.r * v0.r} frame values, got {len(self.values)}")
        for v in self.values:
            if v.n != self.n or (v.m, v.r) != (v0.m, v0.r):
                raise DegreeError(f"all values must be degree-{self.n} jet forms on one chart")

    @property
    def m(self) -> int:
        return self.values[0].m

    @property
    def r(self) -> int:
        return self.values[0].r

    @classmethod
    def zero(cls, m: int, r: int, n: int) -> BMapD:
        return cls(n, (JForm.zero(m, r, n),) * (m + r * r))

    def __call__(self, d: Derivation) -> JForm:
        out = JForm.zero(self.m, self.r, self.n)
        for c, v in zip(d.frame_coeffs(), self.values):
            if c.terms and not v.is_zero():
                out = out + jscale(c, v)
        return out

    def graph_section(self, a: int) -> OmniSection:
        return OmniSection(Derivation.frame(self.m, self.r, a), self.values[a])


def bmap_from_form(mu: JForm) -> BMapD:
    """The flat map d -> iota_d mu of a degree-(n+1) jet form."""
    if mu.n < 1:
        raise DegreeError("need a form of degree >= 1")
    N = mu.m + mu.r * mu.r
    return BMapD(mu.n - 1, tuple(jiota(Derivation.frame(mu.m, mu.r, a), mu) for a in range(N)))


def isotropy_check_D(B: BMapD) -> CheckResult:
    """Skewness iota_{D_a} B(D_b) + iota_{D_b} B(D_a) = 0 on all frame pairs."""
    if B.n < 1:
        raise DegreeError("isotropy of graphs over DE needs n >= 1")
    m, r = B.m, B.r
    N = m + r * r
    frames = [Derivation.frame(m, r, a) for a in range(N)]
    for a in range(N):
        for b in range(a, N):
            s = jiota(frames[a], B.values[b]) + jiota(frames[b], B.values[a])
            if not s.is_zero():
                return CheckResult(False, (a, b), {"pairing": s})
    return CheckResult(True)


def reconstruct_form(B: BMapD) -> JForm:
    """The degree-(n+1) jet form mu with B = B_mu (B must be skew)."""
    m, r, n = B.m, B.r, B.n
    idd = Derivation.identity(m, r)
    mu1 = B(idd).mu0
    k = n + 1
    mu0 = EForm.zero(m, r, k)
    if k <= m:
        acc = EForm.zero(m, r, k)
        for i in range(m):
            Xi = [Poly.const(m, 1) if j == i else Poly.zero(m) for j in range(m)]
            contracted = B.values[i].mu0 - EForm(p.lie(Xi) for p in mu1.parts)
            dxi = ScalarForm.basis(m, (i,))
            acc = acc + EForm(dxi.wedge(p) for p in contracted.parts)
        mu0 = acc.scale(Fraction(1, k))
    mu = JForm(k, mu0, mu1)
    if bmap_from_form(mu) != B:
        raise PreconditionError("map is not the flat map of any jet form (not skew)")
    return mu


def reconstruct_form_generic(B: BMapD) -> JForm:
    """Same reconstruction through generic forms: mu(D_s0, D_rest) = B(D_s0)(D_rest)."""
    m, r, n = B.m, B.r, B.n
    N = m + r * r
    gens = [embed_generic(v) for v in B.values]
    comps = {}
    for S in combinations(range(N), n + 1):
        v = gens[S[0]].comps.get(S[1:])
        if v is not None:
            comps[S] = v
    return project_from_generic(GenForm(m, r, n + 1, comps))


def maximality_check_D(B: BMapD) -> CheckResult:
    """Isotropy plus non-degeneracy of nu -> (iota_{D_a} nu)_a on the generator set.

    For a skew B, a section d + nu pairing to zero with every graph section
    has nu - B(d) in the kernel of this map, so injectivity on the generators
    is the operational form of maximality.
    """
    iso = isotropy_check_D(B)
    if not iso:
        return iso
    m, r, n = B.m, B.r, B.n
    N = m + r * r
    frames = [Derivation.frame(m, r, a) for a in range(N)]
    gens = GeneratorSet(m, r, n).elements
    keys: dict = {}
    cols = []
    for g in gens:
        col = {}
        for a, fr in enumerate(frames):
            for key, c in _flatten(jiota(fr, g)).items():
                col[(a,) + key] = c
                keys.setdefault((a,) + key, len(keys))
        cols.append(col)
    mat = [[col.get(key, 0) for col in cols] for key in keys]
    rk = rank(mat) if mat else 0
    return CheckResult(rk == len(gens), None if rk == len(gens) else "degenerate", {"rank": rk, "generators": len(gens)})


def involutivity_check_D(B: BMapD) -> CheckResult:
    """Involutivity of graph B, decided by closedness of the reconstructed form.

    ``detail["direct"]`` records the direct route: whether the Dorfman bracket
    of every ordered pair of frame graph sections lies in the graph.
    """
    if not isotropy_check_D(B):
        raise PreconditionError("involutivity is only decided for isotropic graphs")
    mu = reconstruct_form(B)
    closed = jd(mu).is_zero()
    N = B.m + B.r * B.r
    secs = [B.graph_section(a) for a in range(N)]
    direct_witness = None
    for a, b in product(range(N), repeat=2):
        br = dorfman(secs[a], secs[b])
        if br.jpart != B(br.dpart):
            direct_witness = (a, b)
            break
    detail = {"form": mu, "direct": direct_witness is None}
    return CheckResult(closed, None if closed else direct_witness, detail)


def dirac_from_eform(nu: EForm) -> BMapD:
    """Higher Dirac-Jacobi structure graph B_{dd j^* nu} of an E-valued n-form."""
    return bmap_from_form(jd(JForm(nu.k, nu, EForm.zero(nu.m, nu.r, nu.k - 1) if nu.k else None)))


# --- generators and rigidity --------------------------------------------------------


def vol_I(m: int, I: Sequence[int]) -> ScalarForm:
    """iota_{d_{i_1}} ... iota_{d_{i_k}} vol (innermost contraction is the last index)."""
    w = ScalarForm.volume(m)
    for i in reversed(I):
        w = w.iota([Poly.const(m, 1) if j == i else Poly.zero(m) for j in range(m)])
    return w


class GeneratorSet:
    """Free generators vol_I (x) e_a and vol_J ^ dd e_a of degree-n jet forms."""

    def __init__(self, m: int, r: int, n: int):
        if not 1 <= n <= m + 1:
            raise RangeError(f"generators defined for 1 <= n <= m+1, got n={n}")
        self.m, self.r, self.n = m, r, n
        self.mus = []
        self.nus = []
        for I in combinations(range(m), m - n) if m - n >= 0 else []:
            for a in range(r):
                self.mus.append((I, a, JForm(n, EForm.tensor(vol_I(m, I), r, a))))
        for J in combinations(range(m), m - n + 1):
            for a in range(r):
                e = EForm.tensor(ScalarForm.function(Poly.const(m, 1)), r, a)
                self.nus.append((J, a, jwedge(vol_I(m, J), jd(JForm.section(e)))))

    @property
    def elements(self) -> list[JForm]:
        return [g for *_, g in self.mus] + [g for *_, g in self.nus]

    def decompose(self, mu: JForm) -> list[Poly]:
        """Coefficients f_k with sum f_k * g_k == mu (module multiplication)."""
        if (mu.m, mu.r, mu.n) != (self.m, self.r, self.n):
            raise DimensionError("jet form does not match the generator set")
        m = self.m
        coeffs_nu = []
        residual0 = mu.mu0
        for J, a, g in self.nus:
            (K, s), = g.mu1.parts[a].comps.items()
            f = mu.mu1.parts[a][K] * Fraction(1, s.constant_value())
            coeffs_nu.append(f)
            # f * g = (-df ^ g1, f g1)
            if f.terms:
                residual0 = residual0 - jscale(f, g).mu0
        coeffs_mu = []
        for I, a, g in self.mus:
            (K, s), = g.mu0.parts[a].comps.items()
            coeffs_mu.append(residual0.parts[a][K] * Fraction(1, s.constant_value()))
        coeffs = coeffs_mu + coeffs_nu
        total = JForm.zero(m, self.r, self.n)
        for f, g in zip(coeffs, self.elements):
            total = total + jscale(f, g)
        if total != mu:
            raise AssertionError("generator decomposition failed")
        return coeffs


def _flatten(mu: JForm) -> dict:
    out = {}
    for slot, part in enumerate(mu.parts):
        for (I, a), p in part.components.items():
            for e, c in p.terms.items():
                out[(slot, I, a, e)] = c
    return out


@dataclass
class RigiditySystem:
    m: int
    r: int
    n: int
    deg: int
    unknowns: int
    equations: int
    rank: int

    @property
    def solution_dim(self) -> int:
        return self.unknowns - self.rank


def rigidity_system(m: int, r: int, n: int, deg: int) -> RigiditySystem:
    """Isotropy equations <B(g), h> + <B(h), g> = 0 over all generator pairs.

    The unknown map sends generator g_k to sum_a sum_M c_{k,a,M} M D_a with
    monomials M of total degree <= deg.  Any n in 1..m+1 is accepted here;
    :func:`rigidity_solve` restricts to the rigid range.
    """
    gens = GeneratorSet(m, r, n).elements
    G, N = len(gens), m + r * r
    mons = monomials(m, deg)
    unknowns = [(k, a, e) for k in range(G) for a in range(N) for e in mons]
    images = {}
    for a in range(N):
        fr = Derivation.frame(m, r, a)
        for e in mons:
            de = fr.scale(Poly.monomial(m, e))
            for l, g in enumerate(gens):
                images[(a, e, l)] = _flatten(jiota(de, g))
    rows: dict = {}
    for u, (k, a, e) in enumerate(unknowns):
        for l in range(G):
            p, q = min(k, l), max(k, l)
            for key, c in images[(a, e, l)].items():
                row = rows.setdefault((p, q) + key, {})
                row[u] = row.get(u, 0) + c
    mat = [[row.get(u, 0) for u in range(len(unknowns))] for row in rows.values()]
    rk = rank(mat) if mat else 0
    return RigiditySystem(m, r, n, deg, len(unknowns), len(mat), rk)


def rigidity_solve(m: int, r: int, n: int, deg: int) -> int:
    """Dimension of the space of isotropic graphs over J_nE, for 1 < n < m+1."""
    if not 1 < n < m + 1:
        raise RangeError(f"rigidity needs 1 < n < m+1, got n={n}, m={m}")
    return rigidity_system(m, r, n, deg).solution_dim


# --- graphs over J_{m+1}E -------------------------------------------------------


class ZStructure:
    """top * d_1^...^d_m (x) c, with c^g_{ab} = -c^g_{ba} stored for a < b (0-based)."""

    def __init__(self, m: int, r: int, top: Poly, c: dict | None = None):
        self.m, self.r, self.top = m, r, top
        clean = {}
        for (g, a, b), p in (c or {}).items():
            if not (0 <= g < r and 0 <= a < r and 0 <= b < r):
                raise DimensionError(f"structure index {(g, a, b)} out of range for r={r}")
            if a == b:
                if p.terms:
                    raise ValueError("c^g_aa must vanish")
                continue
            if a > b:
                g, a, b, p = g, b, a, -p
            if p.terms:
                clean[(g, a, b)] = clean.get((g, a, b), Poly.zero(m)) + p
        self.c = {k: v for k, v in clean.items() if v.terms}

    def __eq__(self, other):
        if not isinstance(other, ZStructure):
            return NotImplemented
        return (self.m, self.r) == (other.m, other.r) and self.top == other.top and self.c == other.c

    def structure(self, g: int, a: int, b: int) -> Poly:
        if a == b:
            return Poly.zero(self.m)
        if a < b:
            return self.c.get((g, a, b), Poly.zero(self.m))
        return -self.c.get((g, b, a), Poly.zero(self.m))

    def bracket(self, u: Sequence[Poly], v: Sequence[Poly]) -> list[Poly]:
        """b(u, v) = top * c(u, v) on sections given by frame components."""
        out = []
        for g in range(self.r):
            acc = Poly.zero(self.m)
            for a in range(self.r):
                if not u[a].terms:
                    continue
                for b in range(self.r):
                    s = self.structure(g, a, b)
                    if s.terms and v[b].terms:
                        acc = acc + s * u[a] * v[b]
            out.append(acc * self.top)
        return out

    def endo(self, u: Sequence[Poly]) -> Derivation:
        """b(u, -) as a derivation with zero symbol."""
        r, m = self.r, self.m
        cols = [self.bracket(u, [Poly.const(m, 1) if j == b else Poly.zero(m) for j in range(r)]) for b in range(r)]
        return Derivation.endomorphism([[cols[b][g] for b in range(r)] for g in range(r)], m)

    def __repr__(self):
        from .grammar import format_zstruct

        return format_zstruct(self)


def so3(m: int) -> ZStructure:
    one = Poly.const(m, 1)
    return ZStructure(m, 3, one, {(2, 0, 1): one, (0, 1, 2): one, (1, 2, 0): one})


def _unit(m: int, r: int, a: int) -> list[Poly]:
    return [Poly.const(m, 1) if j == a else Poly.zero(m) for j in range(r)]


def jacobi_check(Z: ZStructure) -> CheckResult:
    """Jacobi identity of b = <vol, Z> on all ordered frame triples."""
    r = Z.r
    for a, b, c in product(range(r), repeat=3):
        ea, eb, ec = (_unit(Z.m, r, i) for i in (a, b, c))
        t1 = Z.bracket(ea, Z.bracket(eb, ec))
        t2 = Z.bracket(eb, Z.bracket(ec, ea))
        t3 = Z.bracket(ec, Z.bracket(ea, eb))
        jac = [x + y + z for x, y, z in zip(t1, t2, t3)]
        if any(p.terms for p in jac):
            return CheckResult(False, (a, b, c), {"jacobiator": jac})
    return CheckResult(True)


def _z_generator(Z: ZStructure, a: int) -> JForm:
    m = Z.m
    vol_e = EForm.tensor(ScalarForm.volume(m), Z.r, a)
    return JForm(m + 1, EForm.zero(m, Z.r, m + 1), vol_e)


def bmap_Z(Z: ZStructure, mu: JForm) -> Derivation:
    """B_Z on a degree-(m+1) jet form (0, vol (x) u): the derivation b(u, -)."""
    if mu.n != Z.m + 1:
        raise RangeError(f"B_Z is defined on J_(m+1)E, got degree {mu.n}")
    top = tuple(range(Z.m))
    u = [mu.mu1.parts[a][top] for a in range(Z.r)]
    return Z.endo(u)


def isotropy_check_J(Z: ZStructure) -> CheckResult:
    r = Z.r
    secs = [OmniSection(bmap_Z(Z, g), g) for g in (_z_generator(Z, a) for a in range(r))]
    for a in range(r):
        for b in range(a, r):
            if not plus_pairing(secs[a], secs[b]).is_zero():
                return CheckResult(False, (a, b))
    return CheckResult(True)


def involutivity_check_J(Z: ZStructure, n: int | None = None) -> CheckResult:
    """Bracket closure B_Z(L_{B_Z mu1} mu2) = [B_Z mu1, B_Z mu2] on generators vol (x) e_a."""
    m, r = Z.m, Z.r
    if n is not None and n != m + 1:
        raise RangeError(f"graphs over J_nE via Z need n = m+1 = {m + 1}, got {n}")
    secs = [OmniSection(bmap_Z(Z, g), g) for g in (_z_generator(Z, a) for a in range(r))]
    for a, b in product(range(r), repeat=2):
        br = dorfman(secs[a], secs[b])
        if br.dpart != bmap_Z(Z, br.jpart):
            return CheckResult(False, (a, b), {"bracket": br})
    return CheckResult(True)

"""Named, seeded property suites.

Each suite draws its inputs from a private generator keyed by the seed, the
suite name and the chart configuration, checks one identity exactly, and on
failure returns the offending inputs serialized in the text grammar.  The
``verify`` command and the acceptance tests both run these suites.
"""

from __future__ import annotations

import time
from dataclasses import asdict, dataclass, field
from typing import Callable

from .coeff import Poly
from .dirac import (
    ZStructure,
    bmap_from_form,
    dirac_from_eform,
    involutivity_check_D,
    involutivity_check_J,
    isotropy_check_D,
    isotropy_check_J,
    jacobi_check,
    maximality_check_D,
    so3,
)
from .errors import DegeneracyError
from .forms import Derivation, EForm, ScalarForm, commutator
from .gauge import GenForm, ce_differential, gen_iota, gen_lie, homotopy_check, pullback
from .grammar import format_dist, format_form, format_point, format_poly
from .jet import (
    embed_generic,
    extract_lambda,
    from_split,
    jd,
    jiota,
    jlie,
    membership_check,
    project_from_generic,
    to_split,
)
from .multicontact import DistributionFrame, is_multicontact_at, kernel_at_point, nu_from_distribution, same_span
from .omni import (
    OmniSection,
    dorfman,
    dorfman_expanded,
    jacobiator,
    plus_pairing,
    speculated_axiom,
    trivial_line_dorfman,
    trivial_line_pairing,
)
from .sampling import PRNG_NAME, Sampler, suite_rng

__all__ = ["SuiteConfig", "SuiteOutcome", "Suite", "SUITES", "run_suite", "run_suites", "default_suites"]


@dataclass(frozen=True)
class SuiteConfig:
    m: int
    r: int
    n: int
    seed: int = 42
    trials: int = 50
    max_deg: int = 2


@dataclass
class SuiteOutcome:
    name: str
    trials: int
    failures: int
    counterexample: dict | None = None
    skipped: str | None = None
    elapsed: float = field(default=0.0, compare=False)

    @property
    def ok(self) -> bool:
        return self.failures == 0

    def to_json(self, timing: bool = False) -> dict:
        out = asdict(self)
        out["ok"] = self.ok
        if not timing:
            del out["elapsed"]
        return out


@dataclass(frozen=True)
class Suite:
    name: str
    check: Callable[[Sampler, SuiteConfig], dict | None]
    applies: Callable[[SuiteConfig], str | None] = lambda c: None
    default: bool = True
    doc: str = ""


def _cx(**objs) -> dict:
    return {k: (v if isinstance(v, str) else repr(v)) for k, v in objs.items()}


def _need_n(lo: int):
    def applies(c: SuiteConfig):
        return None if c.n >= lo else f"needs n >= {lo}"

    return applies


# --- Cartan calculus on jet forms ---------------------------------------------------


def _cartan_iota_d(s, c):
    d, mu = s.derivation(), s.jform(c.n)
    lhs = jiota(d, jd(mu))
    if mu.n:
        lhs = lhs + jd(jiota(d, mu))
    return None if lhs == jlie(d, mu) else _cx(d=d, mu=mu)


def _cartan_lie_d(s, c):
    d, mu = s.derivation(), s.jform(c.n)
    return None if jlie(d, jd(mu)) == jd(jlie(d, mu)) else _cx(d=d, mu=mu)


def _cartan_iota_lie(s, c):
    d1, d2, mu = s.derivation(), s.derivation(), s.jform(c.n)
    lhs = jiota(d1, jlie(d2, mu)) - jlie(d2, jiota(d1, mu))
    return None if lhs == jiota(commutator(d1, d2), mu) else _cx(d1=d1, d2=d2, mu=mu)


def _homotopy_jform(s, c):
    mu = s.jform(c.n)
    idd = Derivation.identity(c.m, c.r)
    out = jiota(idd, jd(mu))
    if mu.n:
        out = out + jd(jiota(idd, mu))
    return None if out == mu else _cx(mu=mu)


def _homotopy_genform(s, c):
    for k in range(c.m + c.r * c.r + 1):
        g = s.genform(k)
        if not homotopy_check(g):
            return _cx(g=g)
    return None


def _gauge_cartan(s, c):
    N = c.m + c.r * c.r
    k = s.rng.randint(0, N)
    g, d1, d2 = s.genform(k), s.derivation(), s.derivation()
    if ce_differential(ce_differential(g)):
        return _cx(g=g, detail="dd != 0")
    if k:
        lhs = gen_iota(d1, gen_lie(d2, g)) - gen_lie(d2, gen_iota(d1, g))
        if lhs != gen_iota(commutator(d1, d2), g):
            return _cx(d1=d1, d2=d2, g=g, detail="[iota, L] != iota of bracket")
    return None


# --- oracle agreement -----------------------------------------------------------------


def _oracle_d(s, c):
    mu = s.jform(c.n)
    return None if embed_generic(jd(mu)) == ce_differential(embed_generic(mu)) else _cx(mu=mu)


def _oracle_iota(s, c):
    d, mu = s.derivation(), s.jform(c.n)
    return None if embed_generic(jiota(d, mu)) == gen_iota(d, embed_generic(mu)) else _cx(d=d, mu=mu)


def _oracle_lie(s, c):
    d, mu = s.derivation(), s.jform(c.n)
    return None if embed_generic(jlie(d, mu)) == gen_lie(d, embed_generic(mu)) else _cx(d=d, mu=mu)


def _oracle_roundtrip(s, c):
    mu = s.jform(c.n)
    g = embed_generic(mu)
    if project_from_generic(g) != mu:
        return _cx(mu=mu, detail="roundtrip")
    if mu.n and extract_lambda(g) != mu.mu1:
        return _cx(mu=mu, detail="lambda")
    return None


# --- omni-Lie algebroid ---------------------------------------------------------------


def _omni_i(s, c):
    e1, e2, e3 = s.omni(c.n), s.omni(c.n), s.omni(c.n)
    return None if jacobiator(e1, e2, e3).is_zero() else _cx(e1=e1, e2=e2, e3=e3)


def _omni_ii(s, c):
    e1, e2 = s.omni(c.n), s.omni(c.n)
    return None if dorfman(e1, e2).dpart == commutator(e1.dpart, e2.dpart) else _cx(e1=e1, e2=e2)


def _omni_iii(s, c):
    e1, e2, f = s.omni(c.n), s.omni(c.n), s.poly()
    lhs = dorfman(e1, e2.scale(f))
    rhs = dorfman(e1, e2).scale(f) + e2.scale(e1.dpart.act(f))
    return None if lhs == rhs else _cx(e1=e1, e2=e2, f=format_poly(f))


def _omni_iv(s, c):
    e1, e2, e3 = s.omni(c.n), s.omni(c.n), s.omni(c.n)
    lhs = jlie(e1.dpart, plus_pairing(e2, e3))
    rhs = plus_pairing(dorfman(e1, e2), e3) + plus_pairing(e2, dorfman(e1, e3))
    return None if lhs == rhs else _cx(e1=e1, e2=e2, e3=e3)


def _omni_v(s, c):
    e = s.omni(c.n)
    expected = OmniSection(Derivation.zero(c.m, c.r), jd(plus_pairing(e, e)))
    return None if dorfman(e, e) == expected else _cx(e=e)


def _dorfman_forms(s, c):
    e1, e2 = s.omni(c.n), s.omni(c.n)
    return None if dorfman(e1, e2) == dorfman_expanded(e1, e2) else _cx(e1=e1, e2=e2)


def _twisted_jacobiator(s, c):
    omega = s.jform(c.n + 2)
    e1, e2, e3 = s.omni(c.n), s.omni(c.n), s.omni(c.n)
    lhs = jacobiator(e1, e2, e3, omega)
    rhs = jiota(e3.dpart, jiota(e2.dpart, jiota(e1.dpart, jd(omega))))
    ok = lhs.dpart.is_zero() and lhs.jpart == rhs
    return None if ok else _cx(omega=omega, e1=e1, e2=e2, e3=e3)


def _twisted_exact(s, c):
    omega = jd(s.jform(c.n + 1))
    e1, e2, e3 = s.omni(c.n), s.omni(c.n), s.omni(c.n)
    return None if jacobiator(e1, e2, e3, omega).is_zero() else _cx(omega=omega, e1=e1, e2=e2, e3=e3)


def _speculated(s, c):
    e, e2 = s.omni(c.n), s.omni(c.n)
    lhs, rhs = speculated_axiom(e, e2)
    return None if lhs == rhs else _cx(e=e, e2=e2)


def _trivial_line(s, c):
    m, n = c.m, c.n
    X = [s.poly() for _ in range(m)]
    Y = [s.poly() for _ in range(m)]
    f, g = s.poly(), s.poly()
    t0, t1, u0, u1 = s.scalar_form(n), s.scalar_form(n - 1), s.scalar_form(n), s.scalar_form(n - 1)
    sec1, sec2 = ((X, f), (t0, t1)), ((Y, g), (u0, u1))

    def lift(sec):
        (V, h), (a0, a1) = sec
        return OmniSection(Derivation(V, [[h]]), from_split(n, EForm([a0]), EForm([a1])))

    e1, e2 = lift(sec1), lift(sec2)
    (Z, h), (b0, b1) = trivial_line_dorfman(sec1, sec2)
    br = dorfman(e1, e2)
    s0, s1 = to_split(br.jpart)
    if br.dpart != Derivation(Z, [[h]]) or s0.parts[0] != b0 or s1.parts[0] != b1:
        return _cx(e1=e1, e2=e2, detail="dorfman")
    a0, a1 = trivial_line_pairing(sec1, sec2)
    p0, p1 = to_split(plus_pairing(e1, e2))
    if p0.parts[0] != a0 or (p1 is None) != (a1 is None) or (p1 is not None and p1.parts[0] != a1):
        return _cx(e1=e1, e2=e2, detail="pairing")
    return None


# --- graphs and membership ---------------------------------------------------------


def _graph_exact(s, c):
    nu = s.eform(c.n)
    B = dirac_from_eform(nu)
    iso = isotropy_check_D(B)
    if not iso:
        return _cx(nu=nu, detail="not isotropic")
    inv = involutivity_check_D(B)
    if not inv or not inv.detail["direct"]:
        return _cx(nu=nu, detail="not involutive")
    if not maximality_check_D(B):
        return _cx(nu=nu, detail="not maximal")
    return None


def _graph_nonclosed(s, c):
    for _ in range(100):
        mu = s.jform(c.n + 1)
        if jd(mu):
            break
    else:
        return _cx(detail="could not sample a non-closed form")
    B = bmap_from_form(mu)
    if not isotropy_check_D(B):
        return _cx(mu=mu, detail="not isotropic")
    inv = involutivity_check_D(B)
    if inv or inv.detail["direct"]:
        return _cx(mu=mu, detail="involutive although not closed")
    return None


def _graph_exactness_witness(s, c):
    mu = jd(s.jform(c.n))
    nu = jiota(Derivation.identity(c.m, c.r), mu)
    return None if jd(nu) == mu else _cx(mu=mu)


def _graph_applies(c: SuiteConfig):
    return None if c.n + 1 <= c.m + 1 else "forms of degree n+1 > m+1 vanish"


def _membership_images(s, c):
    nu = s.eform(c.n)
    res = membership_check(pullback(nu))
    if not res or (c.n and not res.lam.is_zero()):
        return _cx(nu=nu, detail="e-image")
    mu = s.jform(c.n)
    res = membership_check(embed_generic(mu))
    if not res or (c.n and res.lam != mu.mu1):
        return _cx(mu=mu, detail="j-image")
    return None


def perturb_gl(s: Sampler, g: GenForm) -> GenForm:
    """Add a single nonzero component on a tuple containing a gl(E) frame element."""
    m, r, k = g.m, g.r, g.k
    N = m + r * r
    gl = s.rng.randrange(m, N)
    others = [a for a in range(N) if a != gl]
    S = tuple(sorted([gl] + s.rng.sample(others, k - 1)))
    a = s.rng.randrange(r)
    val = s.nonzero_poly()
    vec = tuple(val if b == a else Poly.zero(m) for b in range(r))
    return g + GenForm(m, r, k, {S: vec})


def witnesses_genuine(g: GenForm, witness: list) -> bool:
    """Every witness entry records a value that differs from the expected one and matches g."""
    m, r = g.m, g.r
    for kind, a, args, expected, actual in witness:
        if expected == actual:
            return False
        d = Derivation.identity(m, r) if kind == "iota_Id" else Derivation.frame(m, r, a)
        if gen_iota(d, g).value(args) != actual:
            return False
    return bool(witness)


def _membership_perturbed(s, c):
    mu = s.jform(c.n)
    g = perturb_gl(s, embed_generic(mu))
    res = membership_check(g)
    if res or not witnesses_genuine(g, res.witness):
        return _cx(g=g)
    return None


def _membership_perturbed_applies(c: SuiteConfig):
    if c.r < 2:
        return "every generic form is a jet form when r = 1"
    return None if c.n >= 1 else "needs n >= 1"


def random_zstructure(s: Sampler, r: int) -> ZStructure:
    m = s.m
    top = Poly.const(m, s.coef())
    if r == 3 and s.rng.random() < 0.3:
        base = so3(m)
        return ZStructure(m, 3, top, base.c)
    c = {}
    for g in range(r):
        for a in range(r):
            for b in range(a + 1, r):
                if s.rng.random() < s.density:
                    c[(g, a, b)] = Poly.const(m, s.coef())
    return ZStructure(m, r, top, c)


def _z_equivalence(s, c):
    Z = random_zstructure(s, c.r)
    if not isotropy_check_J(Z):
        return _cx(Z=Z, detail="not isotropic")
    if bool(jacobi_check(Z)) != bool(involutivity_check_J(Z)):
        return _cx(Z=Z)
    return None


# --- multicontact ---------------------------------------------------------------------


def _random_distribution(s: Sampler, k: int) -> DistributionFrame:
    return DistributionFrame(s.m, [[s.poly() for _ in range(s.m)] for _ in range(k)])


def _multicontact_roundtrip(s, c, points: int = 10):
    k = s.rng.randint(1, c.m - 1) if c.m > 1 else 0
    for _ in range(50):
        D = _random_distribution(s, k)
        good = []
        for _ in range(200):
            p = s.rational_point()
            try:
                q = nu_from_distribution(D, p)
            except DegeneracyError:
                continue
            good.append((p, q))
            if len(good) == points:
                break
        if len(good) == points:
            break
    else:
        return _cx(detail="no regular distribution sampled")
    for p, q in good:
        ker = kernel_at_point(q.form, p)
        if not same_span(ker, D.at(p)) or not all(is_multicontact_at(q.form, [p])):
            return _cx(D=format_dist(D), p=format_point(p))
    return None


def contact_form(m: int) -> ScalarForm:
    """dx3 - x2 dx1 (dz - y dx) on a chart with m >= 3."""
    return ScalarForm(m, 1, {(2,): Poly.const(m, 1), (0,): -Poly.var(m, 1)})


def _contact(s, c, points: int = 10):
    w = contact_form(c.m)
    pts = [s.rational_point() for _ in range(points)]
    flags = is_multicontact_at(w, pts)
    if not all(flags):
        bad = pts[flags.index(False)]
        return _cx(nu=format_form(w), p=format_point(bad))
    return None


SUITES: dict[str, Suite] = {}


def _register(name, check, applies=lambda c: None, default=True, doc=""):
    SUITES[name] = Suite(name, check, applies, default, doc)


_register("cartan.iota_d", _cartan_iota_d, doc="[iota_d, dd] = L_d on jet forms")
_register("cartan.lie_d", _cartan_lie_d, doc="[L_d, dd] = 0")
_register("cartan.iota_lie", _cartan_iota_lie, _need_n(1), doc="[iota_d1, L_d2] = iota_[d1,d2]")
_register("homotopy.jform", _homotopy_jform, doc="[dd, iota_Id] = id on jet forms")
_register("homotopy.genform", _homotopy_genform, doc="[dd, iota_Id] = id on generic forms, all degrees")
_register("gauge.cartan", _gauge_cartan, doc="dd^2 = 0 and [iota, L] = iota of bracket on generic forms")
_register("oracle.d", _oracle_d, doc="embedding intertwines dd")
_register("oracle.iota", _oracle_iota, _need_n(1), doc="embedding intertwines iota")
_register("oracle.lie", _oracle_lie, doc="embedding intertwines L")
_register("oracle.roundtrip", _oracle_roundtrip, doc="project o embed = id; lambda = mu1")
_register("omni.i", _omni_i, _need_n(1), doc="Leibniz identity")
_register("omni.ii", _omni_ii, _need_n(1), doc="anchor is a bracket morphism")
_register("omni.iii", _omni_iii, _need_n(1), doc="anchored Leibniz rule in the second slot")
_register("omni.iv", _omni_iv, _need_n(1), doc="invariance of the pairing")
_register("omni.v", _omni_v, _need_n(1), doc="{e, e} = dd (e, e)_+")
_register("omni.dorfman_forms", _dorfman_forms, _need_n(1), doc="both expressions of the bracket agree")
_register("twist.jacobiator", _twisted_jacobiator, _need_n(1), doc="twisted Jacobiator = iota iota iota dd omega")
_register("twist.exact", _twisted_exact, _need_n(1), doc="twist by an exact form is Leibniz")
_register(
    "omni.speculated_axiom", _speculated, _need_n(1), default=False,
    doc="({e,e}, e')_+ = iota dd (e,e)_+; conjectural, not part of the default run",
)
_register(
    "split.trivial_line", _trivial_line,
    lambda c: None if c.r == 1 and c.n >= 1 else "trivial line bundle only (r = 1, n >= 1)",
    doc="split formulas agree with the engine",
)
_register("graph.exact", _graph_exact, _graph_applies, doc="graph of dd j*nu is a higher Dirac-Jacobi structure")
_register(
    "graph.nonclosed", _graph_nonclosed,
    lambda c: None if c.n + 1 <= c.m else "every form of degree n+1 > m is closed",
    doc="graph of a non-closed form is not involutive")
_register("graph.exactness", _graph_exactness_witness, doc="closed forms are exact with primitive iota_Id mu")
_register("member.images", _membership_images, doc="images of e and j pass the membership test")
_register("member.perturbed", _membership_perturbed, _membership_perturbed_applies, doc="gl perturbations fail")
_register(
    "z.equivalence", _z_equivalence,
    lambda c: None if c.n == c.m + 1 else "only for n = m+1",
    doc="involutivity of graph B_Z iff Jacobi",
)
_register(
    "multicontact.roundtrip", _multicontact_roundtrip,
    lambda c: None if c.m >= 2 else "needs m >= 2",
    doc="kernel of nu_D is D",
)
_register(
    "multicontact.contact", _contact,
    lambda c: None if c.m >= 3 else "needs m >= 3",
    doc="dx3 - x2 dx1 has corank 1",
)


def default_suites() -> list[str]:
    return [name for name, s in SUITES.items() if s.default]


def run_suite(name: str, cfg: SuiteConfig, trials: int | None = None) -> SuiteOutcome:
    suite = SUITES[name]
    trials = cfg.trials if trials is None else trials
    reason = suite.applies(cfg)
    if reason is not None:
        return SuiteOutcome(name, 0, 0, skipped=reason)
    rng = suite_rng(cfg.seed, f"{name}/m={cfg.m},r={cfg.r},n={cfg.n},deg={cfg.max_deg}")
    sampler = Sampler(rng, cfg.m, cfg.r, cfg.max_deg)
    t0 = time.perf_counter()
    failures, first = 0, None
    for _ in range(trials):
        cx = suite.check(sampler, cfg)
        if cx is not None:
            failures += 1
            first = first or cx
    return SuiteOutcome(name, trials, failures, first, elapsed=time.perf_counter() - t0)


def run_suites(cfg: SuiteConfig, names: list[str] | None = None) -> list[SuiteOutcome]:
    return [run_suite(name, cfg) for name in (names or default_suites())]


def prng_info(cfg: SuiteConfig) -> dict:
    return {"algorithm": PRNG_NAME, "seed": cfg.seed, "stream": "'{seed}:{suite}/m=..,r=..,n=..,deg=..'"}

"""Text syntax for every object the CLI accepts or prints.

Indices are 1-based in text.  Grammar (whitespace insignificant)::

    poly     := ['+'|'-'] term (('+'|'-') term)*
    term     := factor ('*' factor)*
    factor   := INT ['/' INT] | x<i> ['^' INT] | '(' poly ')'
    form     := sum of terms that may also carry one wedge chain
                dx<i1>^...^dx<ik> and an optional '@ e<a>' suffix
    jform    := 'jform(' n ';' form [';' form] ')'
    der      := 'der(' [X<i>=poly (',' X<i>=poly)*] ';' [Phi[g][b]=poly (',' ...)*] ')'
    omni     := 'omni(' der ';' jform ')'
    genform  := 'genform(' k (';' item)* ')'      item: sum of <coef>*D<i1>^..^D<ik> @ e<a>
    zstruct  := 'zstruct(top=' poly (';' 'c[g][a][b]=' poly)* ')'   with a < b
    bmap     := 'bmap(' n (';' jform)* ')'         one jform per frame element D1..DN
    dist     := 'dist(' [vec (';' vec)*] ')'       vec: X<i>=poly (',' X<i>=poly)*
    points   := point (';' point)*                  point: rational (',' rational)*

Generic frame: ``D1..Dm`` are the coordinate derivations, ``D(m + (g-1)*r + b)``
is the endomorphism sending e_b to e_g.  The ``format_*`` functions produce
the canonical text, and parsing it gives back an equal object.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .coeff import Poly, as_rational
from .errors import DimensionError

__all__ = [
    "GrammarError",
    "ParseError",
    "SemanticError",
    "format_rational",
    "format_poly",
    "format_form",
    "format_jform",
    "format_derivation",
    "format_omni",
    "format_genform",
    "format_zstruct",
    "format_bmap",
    "format_dist",
    "format_point",
    "parse_poly",
    "parse_form",
    "parse_jform",
    "parse_derivation",
    "parse_omni",
    "parse_genform",
    "parse_zstruct",
    "parse_bmap",
    "parse_dist",
    "parse_points",
    "parse_any",
    "infer_shape",
]


class GrammarError(ValueError):
    pass


class ParseError(GrammarError):
    """Syntax error at a 1-based line/column with the set of acceptable tokens."""

    def __init__(self, line: int, col: int, expected, found: str):
        self.line, self.col, self.expected, self.found = line, col, sorted(set(expected)), found
        super().__init__(f"{line}:{col}: expected one of {', '.join(self.expected)}; found {found!r}")


class SemanticError(GrammarError):
    def __init__(self, message: str, fragment: str):
        self.fragment = fragment
        super().__init__(f"{message} (in {fragment!r})")


# --- formatting ----------------------------------------------------------------------


def format_rational(c) -> str:
    c = as_rational(c)
    if isinstance(c, Fraction):
        return f"{c.numerator}/{c.denominator}"
    return str(c)


def _mono_factors(e) -> list[str]:
    return [f"x{i + 1}" + (f"^{k}" if k > 1 else "") for i, k in enumerate(e) if k]


def _signed_terms(items) -> list[tuple[bool, str]]:
    """(negative?, body) for coefficient/monomial/tail triples."""
    out = []
    for c, e, tail in items:
        factors = _mono_factors(e)
        if tail:
            factors.append(tail)
        mag = abs(c)
        if mag != 1 or not factors:
            factors.insert(0, format_rational(mag))
        out.append((c < 0, "*".join(factors)))
    return out


def _join(terms: list[tuple[bool, str]], suffixes=None) -> str:
    if not terms:
        return "0"
    parts = []
    for idx, (neg, body) in enumerate(terms):
        if suffixes is not None:
            body = body + suffixes[idx]
        if idx == 0:
            parts.append(("-" if neg else "") + body)
        else:
            parts.append((" - " if neg else " + ") + body)
    return "".join(parts)


def format_poly(p: Poly) -> str:
    return _join(_signed_terms((c, e, "") for e, c in p.sorted_terms()))


def _chain(prefix: str, idx) -> str:
    return "^".join(f"{prefix}{i + 1}" for i in idx)


def format_form(w) -> str:
    """Scalar forms print without a frame suffix; E-valued forms always carry ``@ e<a>``."""
    from .forms import EForm

    items, suffixes = [], []
    parts = w.parts if isinstance(w, EForm) else (w,)
    for a, part in enumerate(parts):
        for I in sorted(part.comps):
            for e, c in part.comps[I].sorted_terms():
                items.append((c, e, _chain("dx", I)))
                suffixes.append(f" @ e{a + 1}" if isinstance(w, EForm) else "")
    terms = _signed_terms(items)
    if not terms:
        return "0"
    return _join(terms, suffixes)


def format_jform(mu) -> str:
    if mu.mu1 is None:
        return f"jform({mu.n}; {format_form(mu.mu0)})"
    return f"jform({mu.n}; {format_form(mu.mu0)}; {format_form(mu.mu1)})"


def _assignments(pairs) -> str:
    return ", ".join(f"{k}={format_poly(p)}" for k, p in pairs if p.terms)


def format_derivation(d) -> str:
    xs = _assignments((f"X{i + 1}", p) for i, p in enumerate(d.X))
    phis = _assignments(
        (f"Phi[{g + 1}][{b + 1}]", d.Phi[g][b]) for g in range(d.r) for b in range(d.r)
    )
    return f"der({xs}; {phis})"


def format_omni(e) -> str:
    return f"omni({format_derivation(e.dpart)}; {format_jform(e.jpart)})"


def format_genform(g) -> str:
    items = []
    for S in sorted(g.comps):
        for a, p in enumerate(g.comps[S]):
            for e, c in p.sorted_terms():
                (neg, body), = _signed_terms([(c, e, _chain("D", S))])
                items.append(("-" if neg else "") + body + f" @ e{a + 1}")
    return f"genform({g.k}; {'; '.join(items) if items else '0'})"


def format_zstruct(Z) -> str:
    items = [f"top={format_poly(Z.top)}"]
    for (g, a, b) in sorted(Z.c):
        items.append(f"c[{g + 1}][{a + 1}][{b + 1}]={format_poly(Z.c[(g, a, b)])}")
    return f"zstruct({'; '.join(items)})"


def format_bmap(B) -> str:
    return f"bmap({B.n}; {'; '.join(format_jform(v) for v in B.values)})"


def format_dist(D) -> str:
    vecs = [_assignments((f"X{i + 1}", p) for i, p in enumerate(v)) for v in D.generators]
    return f"dist({'; '.join(vecs)})"


def format_point(pt) -> str:
    return ",".join(format_rational(c) for c in pt)


# --- tokenizer -----------------------------------------------------------------------

_TOKEN = re.compile(r"(?P<ws>\s+)|(?P<int>\d+)|(?P<ident>[A-Za-z_]+\d*)|(?P<op>[-+*/^();,=\[\]@])")
_IDENT = re.compile(r"([A-Za-z_]+?)(\d*)$")


@dataclass(frozen=True)
class Token:
    kind: str  # int, ident, op, end
    text: str
    pos: int
    line: int
    col: int

    @property
    def name(self) -> str:
        return _IDENT.match(self.text).group(1) if self.kind == "ident" else ""

    @property
    def index(self) -> int | None:
        if self.kind != "ident":
            return None
        digits = _IDENT.match(self.text).group(2)
        return int(digits) if digits else None


def _linecol(text: str, pos: int) -> tuple[int, int]:
    line = text.count("\n", 0, pos) + 1
    return line, pos - (text.rfind("\n", 0, pos) + 1) + 1


def tokenize(text: str) -> list[Token]:
    out, pos = [], 0
    while pos < len(text):
        mt = _TOKEN.match(text, pos)
        if mt is None:
            line, col = _linecol(text, pos)
            raise ParseError(line, col, ["token"], text[pos])
        if mt.lastgroup != "ws":
            out.append(Token(mt.lastgroup, mt.group(), pos, *_linecol(text, pos)))
        pos = mt.end()
    out.append(Token("end", "", len(text), *_linecol(text, len(text))))
    return out


_KNOWN_HEADS = ("jform", "der", "omni", "genform", "zstruct", "bmap", "dist")


def infer_shape(text: str) -> tuple[int, int]:
    """Smallest (m, r) consistent with the indices appearing in ``text``."""
    m = r = 1
    toks = tokenize(text)
    for i, t in enumerate(toks):
        if t.kind != "ident" or t.index is None:
            continue
        if t.name in ("x", "dx", "X"):
            m = max(m, t.index)
        elif t.name == "e":
            r = max(r, t.index)
    for i, t in enumerate(toks):
        if t.text in ("Phi", "c") and toks[i + 1].text == "[":
            j = i + 1
            while toks[j].text == "[" and toks[j + 1].kind == "int":
                r = max(r, int(toks[j + 1].text))
                j += 3
    return m, r


# --- parser --------------------------------------------------------------------------


class _Parser:
    def __init__(self, text: str, m: int, r: int):
        if m < 1 or r < 1:
            raise DimensionError(f"need m, r >= 1 (got m={m}, r={r})")
        self.text, self.m, self.r = text, m, r
        self.toks = tokenize(text)
        self.i = 0

    # token helpers

    def peek(self, k: int = 0) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def advance(self) -> Token:
        t = self.toks[self.i]
        self.i += 1
        return t

    def fail(self, expected):
        t = self.peek()
        raise ParseError(t.line, t.col, expected, t.text or "<end>")

    def at(self, text: str) -> bool:
        return self.peek().text == text

    def expect(self, text: str) -> Token:
        if not self.at(text):
            self.fail([text])
        return self.advance()

    def accept(self, text: str) -> bool:
        if self.at(text):
            self.i += 1
            return True
        return False

    def integer(self) -> int:
        t = self.peek()
        if t.kind != "int":
            self.fail(["integer"])
        self.i += 1
        return int(t.text)

    def indexed(self, name: str, hi: int) -> int:
        """An identifier ``name<k>`` with 1 <= k <= hi; returns k-1."""
        t = self.peek()
        if t.kind != "ident" or t.name != name or t.index is None:
            self.fail([f"{name}<index>"])
        self.i += 1
        if not 1 <= t.index <= hi:
            raise SemanticError(f"index {t.index} out of range 1..{hi}", t.text)
        return t.index - 1

    def bracket_index(self, hi: int) -> int:
        self.expect("[")
        t = self.peek()
        k = self.integer()
        self.expect("]")
        if not 1 <= k <= hi:
            raise SemanticError(f"index {k} out of range 1..{hi}", f"[{t.text}]")
        return k - 1

    def finish(self):
        if self.peek().kind != "end":
            self.fail(["<end>"])

    def fragment(self, start: int) -> str:
        return self.text[self.toks[start].pos:self.peek().pos].strip()

    # polynomials and terms

    def poly(self) -> Poly:
        return sum((c for c, _, _ in self.signed_terms(None)), Poly.zero(self.m))

    def signed_terms(self, basis: str | None, frame: bool = False) -> list:
        """Signed sum of products, as (coef, chain, frame index or None) triples."""
        terms = []
        neg = False
        if self.at("+") or self.at("-"):
            neg = self.advance().text == "-"
        while True:
            coef, chain, a = self.product(basis, frame)
            terms.append((-coef if neg else coef, chain, a))
            if self.at("+") or self.at("-"):
                neg = self.advance().text == "-"
                continue
            break
        return terms

    def product(self, basis: str | None, frame: bool):
        coef = Poly.const(self.m, 1)
        chain = None
        while True:
            t = self.peek()
            if t.kind == "int":
                num = self.integer()
                if self.accept("/"):
                    den_tok = self.peek()
                    den = self.integer()
                    if den == 0:
                        raise SemanticError("zero denominator", f"{num}/{den_tok.text}")
                    coef = coef * Fraction(num, den)
                else:
                    coef = coef * num
            elif t.kind == "ident" and t.name == "x" and t.index is not None:
                v = Poly.var(self.m, self.indexed("x", self.m))
                if self.accept("^"):
                    v = v ** self.integer()
                coef = coef * v
            elif t.text == "(":
                self.advance()
                coef = coef * self.poly()
                self.expect(")")
            elif basis is not None and t.kind == "ident" and t.name == basis and t.index is not None:
                if chain is not None:
                    raise SemanticError("at most one wedge chain per term", t.text)
                hi = self.m if basis == "dx" else self.m + self.r * self.r
                chain = [self.indexed(basis, hi)]
                while self.at("^"):
                    self.advance()
                    chain.append(self.indexed(basis, hi))
            else:
                exp = ["integer", "x<index>", "("]
                if basis is not None:
                    exp.append(f"{basis}<index>")
                self.fail(exp)
            if not self.accept("*"):
                break
        a = None
        if frame and self.accept("@"):
            a = self.indexed("e", self.r)
        return coef, tuple(chain or ()), a

    # forms

    def eform(self, k: int | None, scalar: bool = False):
        from .forms import EForm, ScalarForm

        start = self.i
        terms = self.signed_terms("dx", frame=True)
        frag = self.fragment(start)
        degs = {len(ch) for c, ch, _ in terms if c.terms}
        if k is None:
            k = degs.pop() if len(degs) == 1 else (0 if not degs else None)
            if k is None:
                raise SemanticError("terms of mixed degree", frag)
        elif degs - {k}:
            raise SemanticError(f"expected a {k}-form", frag)
        parts = [ScalarForm.zero(self.m, k) for _ in range(1 if scalar else self.r)]
        for c, ch, a in terms:
            if not c.terms:
                continue
            if scalar:
                if a is not None:
                    raise SemanticError("scalar form cannot carry a frame factor", frag)
                a = 0
            elif a is None:
                if self.r != 1:
                    raise SemanticError("missing '@ e<a>' frame factor", frag)
                a = 0
            parts[a] = parts[a] + ScalarForm.basis(self.m, ch, c)
        return parts[0] if scalar else EForm(parts)

    def jform(self):
        from .jet import JForm

        self.expect("jform")
        self.expect("(")
        n = self.integer()
        self.expect(";")
        mu0 = self.eform(n)
        mu1 = None
        if self.accept(";"):
            if n == 0:
                self.fail([")"])
            mu1 = self.eform(n - 1)
        self.expect(")")
        return JForm(n, mu0, mu1)

    def assignments(self, name: str, hi: int, stop: tuple) -> dict:
        out = {}
        if self.peek().text in stop:
            return out
        while True:
            start = self.i
            k = self.indexed(name, hi)
            self.expect("=")
            if k in out:
                raise SemanticError("duplicate entry", self.fragment(start))
            out[k] = self.poly()
            if not self.accept(","):
                return out

    def derivation(self):
        from .forms import Derivation

        self.expect("der")
        self.expect("(")
        xs = self.assignments("X", self.m, (";",))
        self.expect(";")
        phi = {}
        if not self.at(")"):
            while True:
                start = self.i
                self.expect("Phi")
                g = self.bracket_index(self.r)
                b = self.bracket_index(self.r)
                self.expect("=")
                if (g, b) in phi:
                    raise SemanticError("duplicate entry", self.fragment(start))
                phi[(g, b)] = self.poly()
                if not self.accept(","):
                    break
        self.expect(")")
        z = Poly.zero(self.m)
        X = [xs.get(i, z) for i in range(self.m)]
        Phi = [[phi.get((g, b), z) for b in range(self.r)] for g in range(self.r)]
        return Derivation(X, Phi)

    def omni(self):
        from .omni import OmniSection

        self.expect("omni")
        self.expect("(")
        d = self.derivation()
        self.expect(";")
        mu = self.jform()
        self.expect(")")
        return OmniSection(d, mu)

    def genform(self):
        from .gauge import GenForm, _vadd

        self.expect("genform")
        self.expect("(")
        k = self.integer()
        N = self.m + self.r * self.r
        comps: dict = {}
        zero = (Poly.zero(self.m),) * self.r
        while self.accept(";"):
            start = self.i
            for c, ch, a in self.signed_terms("D", frame=True):
                if not c.terms:
                    continue
                frag = self.fragment(start)
                if len(ch) != k:
                    raise SemanticError(f"expected {k} frame factors", frag)
                if a is None:
                    if self.r != 1:
                        raise SemanticError("missing '@ e<a>' frame factor", frag)
                    a = 0
                if len(set(ch)) < len(ch):
                    continue
                order = sorted(range(k), key=lambda i: ch[i])
                inv = sum(1 for i in range(k) for j in range(i + 1, k) if order[i] > order[j])
                S = tuple(ch[i] for i in order)
                vec = tuple(c if b == a else Poly.zero(self.m) for b in range(self.r))
                if inv & 1:
                    vec = tuple(-p for p in vec)
                comps[S] = _vadd(comps.get(S, zero), vec)
        self.expect(")")
        if N < k:
            raise SemanticError(f"degree {k} exceeds frame size {N}", f"genform({k}; ...)")
        return GenForm(self.m, self.r, k, comps)

    def zstruct(self):
        from .dirac import ZStructure

        self.expect("zstruct")
        self.expect("(")
        self.expect("top")
        self.expect("=")
        top = self.poly()
        c = {}
        while self.accept(";"):
            start = self.i
            self.expect("c")
            g = self.bracket_index(self.r)
            a = self.bracket_index(self.r)
            b = self.bracket_index(self.r)
            self.expect("=")
            p = self.poly()
            if not a < b:
                raise SemanticError("structure functions are given for a < b only", self.fragment(start))
            if (g, a, b) in c:
                raise SemanticError("duplicate entry", self.fragment(start))
            c[(g, a, b)] = p
        self.expect(")")
        return ZStructure(self.m, self.r, top, c)

    def bmap(self):
        from .dirac import BMapD

        self.expect("bmap")
        self.expect("(")
        start = self.i
        n = self.integer()
        vals = []
        while self.accept(";"):
            v = self.jform()
            if v.n != n:
                raise SemanticError(f"values must have degree {n}", self.fragment(start))
            vals.append(v)
        self.expect(")")
        N = self.m + self.r * self.r
        if len(vals) != N:
            raise SemanticError(f"need {N} frame values, got {len(vals)}", self.fragment(start))
        return BMapD(n, vals)

    def dist(self):
        from .multicontact import DistributionFrame

        self.expect("dist")
        self.expect("(")
        gens = []
        if not self.at(")"):
            while True:
                xs = self.assignments("X", self.m, (";", ")"))
                gens.append([xs.get(i, Poly.zero(self.m)) for i in range(self.m)])
                if not self.accept(";"):
                    break
        self.expect(")")
        return DistributionFrame(self.m, gens)

    def rational(self):
        neg = self.accept("-")
        if not neg:
            self.accept("+")
        num = self.integer()
        den = 1
        if self.accept("/"):
            den = self.integer()
            if den == 0:
                raise SemanticError("zero denominator", f"{num}/0")
        return as_rational(Fraction(-num if neg else num, den))

    def points(self) -> list[list]:
        pts = []
        while True:
            start = self.i
            pt = [self.rational()]
            while self.accept(","):
                pt.append(self.rational())
            if len(pt) != self.m:
                raise SemanticError(f"point needs {self.m} coordinates", self.fragment(start))
            pts.append(pt)
            if not self.accept(";"):
                return pts


def _run(method: str, text: str, m: int, r: int, *args):
    p = _Parser(text, m, r)
    out = getattr(p, method)(*args)
    p.finish()
    return out


def parse_poly(text: str, m: int) -> Poly:
    return _run("poly", text, m, 1)


def parse_form(text: str, m: int, r: int = 1, k: int | None = None, scalar: bool = False):
    """E-valued form (or scalar form with ``scalar=True``); ``k`` fixes the degree of ``0``."""
    return _run("eform", text, m, r, k, scalar)


def parse_jform(text: str, m: int, r: int = 1):
    return _run("jform", text, m, r)


def parse_derivation(text: str, m: int, r: int = 1):
    return _run("derivation", text, m, r)


def parse_omni(text: str, m: int, r: int = 1):
    return _run("omni", text, m, r)


def parse_genform(text: str, m: int, r: int = 1):
    return _run("genform", text, m, r)


def parse_zstruct(text: str, m: int, r: int):
    return _run("zstruct", text, m, r)


def parse_bmap(text: str, m: int, r: int = 1):
    return _run("bmap", text, m, r)


def parse_dist(text: str, m: int):
    return _run("dist", text, m, 1)


def parse_points(text: str, m: int) -> list[list]:
    return _run("points", text, m, 1)


def parse_any(text: str, m: int, r: int = 1):
    """Dispatch on the leading keyword; bare text is an E-valued form."""
    head = tokenize(text)[0]
    if head.text in _KNOWN_HEADS:
        return _run(head.text if head.text != "der" else "derivation", text, m, r)
    return parse_form(text, m, r)

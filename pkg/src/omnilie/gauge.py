"""E-valued forms on the gauge algebroid, evaluated on its global frame.

The frame of DE is ``D_0..D_{N-1}`` with ``N = m + r*r``: first the flat
coordinate derivations ``d_i``, then the endomorphisms ``e^b_g`` (sending
e_b to e_g) at index ``m + g*r + b``.  A :class:`GenForm` of degree k stores
its values on increasing k-tuples of frame elements; everything else follows
from C^infinity-multilinearity.  This layer deliberately evaluates the
Chevalley-Eilenberg formula by brute force: it is the slow reference against
which the pair representation of :mod:`omnilie.jet` is checked.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations
from typing import Sequence

from .coeff import Poly
from .errors import DegreeError, DimensionError
from .forms import Derivation, EForm, ScalarForm, commutator, merge_sign

__all__ = [
    "GenForm",
    "frame_bracket",
    "ce_differential",
    "gen_iota",
    "gen_lie",
    "gen_wedge",
    "pullback",
    "homotopy_check",
]


def _vadd(u: tuple, v: tuple) -> tuple:
    return tuple(a + b for a, b in zip(u, v))


def _vscale(u: tuple, f) -> tuple:
    return tuple(a * f for a in u)


def _vzero(u: tuple) -> bool:
    return not any(a.terms for a in u)


class GenForm:
    """E-valued k-form on DE: ``comps[S]`` is the r-vector of values on frame tuple S."""

    __slots__ = ("m", "r", "k", "comps")

    def __init__(self, m: int, r: int, k: int, comps: dict | None = None):
        N = m + r * r
        if not 0 <= k:
            raise DegreeError(f"negative degree {k}")
        self.m, self.r, self.k = m, r, k
        out = {}
        for S, v in (comps or {}).items():
            S, v = tuple(S), tuple(v)
            if len(S) != k or any(a >= b for a, b in zip(S, S[1:])) or (S and not 0 <= S[0] <= S[-1] < N):
                raise DimensionError(f"bad frame tuple {S} for degree {k}, N={N}")
            if len(v) != r:
                raise DimensionError("value vector has wrong rank")
            if not _vzero(v):
                out[S] = v
        self.comps = out

    @classmethod
    def _raw(cls, m, r, k, comps) -> GenForm:
        obj = cls.__new__(cls)
        obj.m, obj.r, obj.k = m, r, k
        obj.comps = {S: v for S, v in comps.items() if not _vzero(v)}
        return obj

    @classmethod
    def zero(cls, m: int, r: int, k: int) -> GenForm:
        return cls._raw(m, r, k, {})

    @property
    def N(self) -> int:
        return self.m + self.r * self.r

    def is_zero(self) -> bool:
        return not self.comps

    def __bool__(self):
        return bool(self.comps)

    def _check(self, other: GenForm):
        if (self.m, self.r) != (other.m, other.r):
            raise DimensionError("chart/rank mismatch")
        if self.k != other.k:
            raise DegreeError(f"degree mismatch {self.k} vs {other.k}")

    def __add__(self, other: GenForm) -> GenForm:
        self._check(other)
        out = dict(self.comps)
        for S, v in other.comps.items():
            out[S] = _vadd(out[S], v) if S in out else v
        return GenForm._raw(self.m, self.r, self.k, out)

    def __neg__(self) -> GenForm:
        return GenForm._raw(self.m, self.r, self.k, {S: tuple(-a for a in v) for S, v in self.comps.items()})

    def __sub__(self, other: GenForm) -> GenForm:
        return self + (-other)

    def scale(self, f) -> GenForm:
        return GenForm._raw(self.m, self.r, self.k, {S: _vscale(v, f) for S, v in self.comps.items()})

    def __eq__(self, other):
        if not isinstance(other, GenForm):
            return NotImplemented
        return (self.m, self.r, self.k) == (other.m, other.r, other.k) and self.comps == other.comps

    def __hash__(self):
        return hash((self.k, frozenset(self.comps.items())))

    def _zero_vec(self) -> tuple:
        return (Poly.zero(self.m),) * self.r

    def value(self, args: Sequence[int]) -> tuple:
        """Value on an arbitrary (unsorted) tuple of frame indices."""
        args = tuple(args)
        if len(set(args)) < len(args):
            return self._zero_vec()
        order = sorted(range(len(args)), key=lambda i: args[i])
        S = tuple(args[i] for i in order)
        v = self.comps.get(S)
        if v is None:
            return self._zero_vec()
        inv = sum(1 for i in range(len(order)) for j in range(i + 1, len(order)) if order[i] > order[j])
        return tuple(-a for a in v) if inv & 1 else v

    def __repr__(self):
        from .grammar import format_genform

        return format_genform(self)


@lru_cache(maxsize=None)
def frame_bracket(m: int, r: int) -> dict:
    """Structure constants: ``{(a, b): {c: const}}`` with [D_a, D_b] = sum const D_c, a < b."""
    N = m + r * r
    frames = [Derivation.frame(m, r, a) for a in range(N)]
    out = {}
    for a, b in combinations(range(N), 2):
        br = commutator(frames[a], frames[b]).frame_coeffs()
        nz = {c: p.constant_value() for c, p in enumerate(br) if p.terms}
        if nz:
            out[(a, b)] = nz
    return out


def _frame_act(m: int, r: int, a: int, v: tuple) -> tuple:
    """D_a applied to the section sum v[b] e_b."""
    if a < m:
        return tuple(p.diff(a) for p in v)
    g, b = divmod(a - m, r)
    z = Poly.zero(m)
    return tuple(v[b] if c == g else z for c in range(r))


def ce_differential(g: GenForm) -> GenForm:
    """Chevalley-Eilenberg differential of DE with values in its tautological representation E."""
    m, r, k, N = g.m, g.r, g.k, g.N
    br = frame_bracket(m, r)
    out = {}
    if k + 1 > N:
        return GenForm.zero(m, r, k + 1)
    for S in combinations(range(N), k + 1):
        acc = g._zero_vec()
        for i, a in enumerate(S):
            rest = S[:i] + S[i + 1:]
            v = g.comps.get(rest)
            if v is not None:
                t = _frame_act(m, r, a, v)
                acc = _vadd(acc, t if i % 2 == 0 else tuple(-x for x in t))
        for i, j in combinations(range(k + 1), 2):
            consts = br.get((S[i], S[j]))
            if not consts:
                continue
            rest = S[:i] + S[i + 1:j] + S[j + 1:]
            sgn = -1 if (i + j) & 1 else 1
            for c, const in consts.items():
                v = g.value((c,) + rest)
                if not _vzero(v):
                    acc = _vadd(acc, _vscale(v, sgn * const))
        if not _vzero(acc):
            out[S] = acc
    return GenForm._raw(m, r, k + 1, out)


def gen_iota(d: Derivation, g: GenForm) -> GenForm:
    """Contraction in the first slot: (iota_d g)(D..) = g(d, D..)."""
    if (d.m, d.r) != (g.m, g.r):
        raise DimensionError("chart/rank mismatch")
    if g.k == 0:
        raise DegreeError("cannot contract a degree-0 form")
    coeffs = d.frame_coeffs()
    out: dict = {}
    for S, v in g.comps.items():
        for pos, a in enumerate(S):
            c = coeffs[a]
            if not c.terms:
                continue
            t = _vscale(v, c if pos % 2 == 0 else -c)
            T = S[:pos] + S[pos + 1:]
            out[T] = _vadd(out[T], t) if T in out else t
    return GenForm._raw(g.m, g.r, g.k - 1, out)


def gen_lie(d: Derivation, g: GenForm) -> GenForm:
    """Lie derivative as the graded commutator [iota_d, dd]."""
    out = gen_iota(d, ce_differential(g))
    if g.k > 0:
        out = out + ce_differential(gen_iota(d, g))
    return out


def pullback(nu) -> GenForm:
    """j^* of a scalar or E-valued form on M: nonzero only on tuples of coordinate derivations."""
    if isinstance(nu, ScalarForm):
        nu = EForm([nu])
    out = {}
    for a, part in enumerate(nu.parts):
        for I, p in part.comps.items():
            v = out.get(I)
            if v is None:
                v = [Poly.zero(nu.m)] * nu.r
                out[I] = v
            v[a] = p
    return GenForm(nu.m, nu.r, nu.k, {S: tuple(v) for S, v in out.items()})


def gen_wedge(w: ScalarForm, g: GenForm) -> GenForm:
    """(j^* w) ^ g, the Omega(M)-module structure on generic forms."""
    if w.m != g.m:
        raise DimensionError("chart mismatch")
    k = w.k + g.k
    out: dict = {}
    if k <= g.N:
        for I, p in w.comps.items():
            for S, v in g.comps.items():
                s, K = merge_sign(I, S)
                if s:
                    t = _vscale(v, p if s > 0 else -p)
                    out[K] = _vadd(out[K], t) if K in out else t
    return GenForm._raw(g.m, g.r, k, out)


def homotopy_check(g: GenForm) -> bool:
    """Whether dd iota_Id g + iota_Id dd g == g."""
    idd = Derivation.identity(g.m, g.r)
    lhs = gen_iota(idd, ce_differential(g))
    if g.k > 0:
        lhs = lhs + ce_differential(gen_iota(idd, g))
    return lhs == g

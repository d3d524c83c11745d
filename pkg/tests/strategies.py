"""Hypothesis strategies for the algebraic objects, small enough to keep exact checks fast."""

from fractions import Fraction
from itertools import combinations

from hypothesis import strategies as st

from omnilie.coeff import Poly, monomials
from omnilie.forms import Derivation, EForm, ScalarForm
from omnilie.gauge import GenForm
from omnilie.jet import JForm
from omnilie.omni import OmniSection

coefs = st.integers(-3, 3) | st.fractions(min_value=-2, max_value=2, max_denominator=3)


def polys(m, max_deg=2, max_terms=3):
    return st.dictionaries(st.sampled_from(monomials(m, max_deg)), coefs, max_size=max_terms).map(
        lambda t: Poly(m, t)
    )


def scalar_forms(m, k, max_deg=2):
    if k > m or k < 0:
        return st.just(ScalarForm.zero(m, max(k, 0)))
    idx = list(combinations(range(m), k))
    return st.dictionaries(st.sampled_from(idx), polys(m, max_deg), max_size=len(idx)).map(
        lambda c: ScalarForm(m, k, c)
    )


def eforms(m, r, k, max_deg=2):
    return st.lists(scalar_forms(m, k, max_deg), min_size=r, max_size=r).map(EForm)


def jforms(m, r, n, max_deg=2):
    if n == 0:
        return eforms(m, r, 0, max_deg).map(JForm.section)
    return st.builds(lambda a, b: JForm(n, a, b), eforms(m, r, n, max_deg), eforms(m, r, n - 1, max_deg))


def derivations(m, r, max_deg=2):
    return st.builds(
        Derivation,
        st.lists(polys(m, max_deg), min_size=m, max_size=m),
        st.lists(st.lists(polys(m, max_deg), min_size=r, max_size=r), min_size=r, max_size=r),
    )


def genforms(m, r, k, max_deg=1):
    N = m + r * r
    idx = list(combinations(range(N), k))
    vec = st.lists(polys(m, max_deg, 2), min_size=r, max_size=r).map(tuple)
    return st.dictionaries(st.sampled_from(idx), vec, max_size=4).map(lambda c: GenForm(m, r, k, c))


def omnis(m, r, n, max_deg=1):
    return st.builds(OmniSection, derivations(m, r, max_deg), jforms(m, r, n, max_deg))


shapes = st.sampled_from([(1, 1), (1, 2), (2, 1), (2, 2)])


def rationals(lo=-4, hi=4):
    return st.fractions(min_value=lo, max_value=hi, max_denominator=5).map(
        lambda f: f.numerator if f.denominator == 1 else Fraction(f)
    )

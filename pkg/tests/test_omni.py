import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from omnilie.coeff import Poly
from omnilie.errors import DegreeError, RankError
from omnilie.forms import Derivation, EForm, ScalarForm, commutator
from omnilie.jet import JForm, from_split, jd, jiota, jlie, jscale
from omnilie.omni import (
    OmniSection,
    anchor,
    dorfman,
    dorfman_expanded,
    jacobiator,
    plus_pairing,
    speculated_axiom,
    trivial_line_dorfman,
    trivial_line_pairing,
    twisted_dorfman,
)

from .strategies import jforms, omnis, polys, scalar_forms

x = Poly.var(1, 0)
one = Poly.const(1, 1)
d_x = Derivation.vector([one], 1)


def omni(d, mu0, mu1=None, n=1):
    return OmniSection(d, JForm(n, mu0, mu1))


def test_anchor():
    e = omni(d_x, EForm([ScalarForm.basis(1, (0,), x)]))
    assert anchor(e) == d_x
    assert anchor(OmniSection(Derivation.zero(1, 1), e.jpart)).is_zero()


def test_pure_derivations_bracket_by_commutator():
    e1 = OmniSection(d_x, JForm.zero(1, 1, 1))
    e2 = OmniSection(Derivation.vector([x], 1), JForm.zero(1, 1, 1))
    assert dorfman(e1, e2) == e1


def test_pure_forms_bracket_to_zero():
    mu = JForm(1, EForm([ScalarForm.basis(1, (0,), x)]), EForm.section([x * x]))
    e = OmniSection(Derivation.zero(1, 1), mu)
    assert dorfman(e, e).is_zero()


def test_self_bracket_example():
    e = omni(d_x, EForm([ScalarForm.basis(1, (0,), x)]))
    # (e, e)_+ = iota_{d_x}(x dx) = x, and {e, e} = dd of it
    pair = plus_pairing(e, e)
    assert pair == JForm.section(EForm.section([x]))
    assert dorfman(e, e) == OmniSection(Derivation.zero(1, 1), jd(pair))
    assert dorfman(e, e).jpart == JForm(1, EForm.zero(1, 1, 1), EForm.section([x]))


def test_degree_mismatch():
    e1 = OmniSection.zero(1, 1, 1)
    e2 = OmniSection.zero(1, 1, 2)
    with pytest.raises(DegreeError):
        dorfman(e1, e2)
    with pytest.raises(DegreeError):
        twisted_dorfman(JForm.zero(1, 1, 2), e1, e1)
    with pytest.raises(DegreeError):
        OmniSection(Derivation.zero(1, 1), JForm.zero(1, 1, 0))


def test_zero_sections_have_zero_jacobiator():
    z = OmniSection.zero(2, 1, 1)
    assert jacobiator(z, z, z).is_zero()


SHAPES = [(1, 1, 1), (1, 2, 1), (2, 1, 1), (2, 1, 2)]


@pytest.mark.parametrize("m, r, n", SHAPES)
@given(data=st.data())
def test_bracket_forms_agree(m, r, n, data):
    e1, e2 = data.draw(omnis(m, r, n)), data.draw(omnis(m, r, n))
    assert dorfman(e1, e2) == dorfman_expanded(e1, e2)


@pytest.mark.parametrize("m, r, n", SHAPES)
@settings(max_examples=10)
@given(data=st.data())
def test_leibniz_identity(m, r, n, data):
    e1, e2, e3 = (data.draw(omnis(m, r, n)) for _ in range(3))
    assert jacobiator(e1, e2, e3).is_zero()


@pytest.mark.parametrize("m, r, n", SHAPES)
@given(data=st.data())
def test_anchor_is_morphism_and_pairing_symmetric(m, r, n, data):
    e1, e2 = data.draw(omnis(m, r, n)), data.draw(omnis(m, r, n))
    assert anchor(dorfman(e1, e2)) == commutator(anchor(e1), anchor(e2))
    assert plus_pairing(e1, e2) == plus_pairing(e2, e1)


@pytest.mark.parametrize("m, r, n", SHAPES)
@given(data=st.data())
def test_anchored_leibniz_rule(m, r, n, data):
    e1, e2 = data.draw(omnis(m, r, n)), data.draw(omnis(m, r, n))
    f = data.draw(polys(m, 1))
    lhs = dorfman(e1, e2.scale(f))
    assert lhs == dorfman(e1, e2).scale(f) + e2.scale(e1.dpart.act(f))


@pytest.mark.parametrize("m, r, n", SHAPES)
@given(data=st.data())
def test_pairing_invariance_and_self_bracket(m, r, n, data):
    e1, e2, e3 = (data.draw(omnis(m, r, n)) for _ in range(3))
    lhs = jlie(anchor(e1), plus_pairing(e2, e3))
    assert lhs == plus_pairing(dorfman(e1, e2), e3) + plus_pairing(e2, dorfman(e1, e3))
    assert dorfman(e1, e1) == OmniSection(Derivation.zero(m, r), jd(plus_pairing(e1, e1)))


@pytest.mark.parametrize("m, r, n", [(1, 1, 1), (2, 1, 1)])
@settings(max_examples=10)
@given(data=st.data())
def test_twisted_jacobiator(m, r, n, data):
    e1, e2, e3 = (data.draw(omnis(m, r, n)) for _ in range(3))
    w = data.draw(jforms(m, r, n + 2, 1))
    expected = jiota(e3.dpart, jiota(e2.dpart, jiota(e1.dpart, jd(w))))
    assert jacobiator(e1, e2, e3, w) == OmniSection(Derivation.zero(m, r), expected)
    exact = jd(data.draw(jforms(m, r, n + 1, 1)))
    assert jacobiator(e1, e2, e3, exact).is_zero()


@given(omnis(1, 1, 1), omnis(1, 1, 1))
def test_twist_by_zero_and_anchor(e1, e2):
    w = JForm.zero(1, 1, 3)
    assert twisted_dorfman(w, e1, e2) == dorfman(e1, e2)


def test_speculated_axiom_is_not_an_identity():
    # a single counterexample: the two sides differ
    e = omni(d_x, EForm([ScalarForm.basis(1, (0,), x)]))
    e2 = omni(Derivation.vector([x], 1), EForm([ScalarForm.basis(1, (0,), one)]))
    lhs, rhs = speculated_axiom(e, e2)
    assert lhs.n == rhs.n == 0
    assert lhs != rhs


# --- trivial line, split representation --------------------------------------------


def _split_section(e: OmniSection):
    d = e.dpart
    mu = e.jpart
    t0 = mu.mu0 + mu.mu1.d()
    return (list(d.X), d.Phi[0][0]), (t0.parts[0], mu.mu1.parts[0])


@pytest.mark.parametrize("m, n", [(1, 1), (2, 1), (2, 2)])
@given(data=st.data())
def test_trivial_line_formulas_match(m, n, data):
    e1, e2 = data.draw(omnis(m, 1, n)), data.draw(omnis(m, 1, n))
    s1, s2 = _split_section(e1), _split_section(e2)
    (Z, h), (b0, b1) = trivial_line_dorfman(s1, s2)
    br = dorfman(e1, e2)
    assert list(br.dpart.X) == Z and br.dpart.Phi[0][0] == h
    assert br.jpart == from_split(n, EForm([b0]), EForm([b1]))
    a0, a1 = trivial_line_pairing(s1, s2)
    pair = plus_pairing(e1, e2)
    assert pair == from_split(n - 1, EForm([a0]), None if a1 is None else EForm([a1]))


def test_trivial_line_rank_check():
    u = EForm([ScalarForm.basis(1, (0,)), ScalarForm.basis(1, (0,))])
    z = ScalarForm.zero(1, 0)
    with pytest.raises(RankError):
        trivial_line_pairing((([one], x), (u, z)), (([one], x), (u, z)))


@given(scalar_forms(2, 1, 1), polys(2, 1))
def test_jscale_matches_split_multiplication(w, f):
    # in split form, multiplication by f is componentwise
    mu = from_split(1, EForm([w]), EForm.section([f]))
    t0, t1 = jscale(f, mu).mu0 + jscale(f, mu).mu1.d(), jscale(f, mu).mu1
    assert t0 == EForm([w.scale(f)]) and t1 == EForm.section([f * f])

import pytest
from hypothesis import given
from hypothesis import strategies as st

from omnilie.coeff import Poly
from omnilie.errors import DegreeError, NotAJetForm
from omnilie.forms import Derivation, EForm, ScalarForm
from omnilie.gauge import GenForm, ce_differential, gen_iota, gen_lie, gen_wedge
from omnilie.jet import (
    JForm,
    embed_generic,
    from_split,
    jd,
    jiota,
    jlie,
    jscale,
    jwedge,
    membership_check,
    project_from_generic,
    to_split,
)

from .strategies import derivations, jforms, polys, scalar_forms

X = Poly.var(1, 0)
one = Poly.const(1, 1)


def sec(*vals):
    return JForm.section(EForm.section(list(vals)))


def test_degree_checks():
    with pytest.raises(DegreeError):
        JForm(1, EForm.zero(1, 1, 0))
    with pytest.raises(DegreeError):
        jiota(Derivation.identity(1, 1), sec(X))


def test_jd_of_section():
    u = sec(X)
    assert jd(u) == JForm(1, EForm.zero(1, 1, 1), u.mu0)


def test_identity_contracts_dd_section():
    u = sec(X * X + 1)
    assert jiota(Derivation.identity(1, 1), jd(u)) == u


def test_jscale_is_not_componentwise():
    # f (0, u) = (-df u, f u): the module structure carries a derivative term
    mu = jd(sec(one))
    got = jscale(X, mu)
    assert got.mu1 == EForm.section([X])
    assert got.mu0 == EForm([ScalarForm.basis(1, (0,), -one)])


def test_split_roundtrip_example():
    mu = JForm(1, EForm([ScalarForm.basis(1, (0,))]), EForm.section([X]))
    t0, t1 = to_split(mu)
    assert t0 == EForm([ScalarForm.basis(1, (0,), Poly.const(1, 2))])
    assert from_split(1, t0, t1) == mu


def test_offdiagonal_endomorphism_value_is_not_a_jet():
    # r = 2, value on e^2_1 only: the identity sees nothing, the endomorphism does
    g = GenForm(1, 2, 1, {(2,): (one, Poly.zero(1))})
    res = membership_check(g)
    assert not res and res.witness[0][0] == "iota_endo"
    with pytest.raises(NotAJetForm):
        project_from_generic(g)


def test_every_degree_one_form_is_a_jet_in_rank_one():
    g = GenForm(1, 1, 1, {(0,): (X,), (1,): (one,)})
    assert membership_check(g)


SHAPES = [(1, 1), (1, 2), (2, 1)]


@pytest.mark.parametrize("m, r", SHAPES)
@given(data=st.data())
def test_embedding_intertwines_d(m, r, data):
    n = data.draw(st.integers(0, 2))
    mu = data.draw(jforms(m, r, n, 1))
    assert embed_generic(jd(mu)) == ce_differential(embed_generic(mu))
    assert jd(jd(mu)).is_zero()


@pytest.mark.parametrize("m, r", SHAPES)
@given(data=st.data())
def test_embedding_intertwines_iota_and_lie(m, r, data):
    n = data.draw(st.integers(1, 2))
    mu = data.draw(jforms(m, r, n, 1))
    d = data.draw(derivations(m, r, 1))
    g = embed_generic(mu)
    assert embed_generic(jiota(d, mu)) == gen_iota(d, g)
    assert embed_generic(jlie(d, mu)) == gen_lie(d, g)


@given(st.data())
def test_embedding_intertwines_wedge(data):
    k, n = data.draw(st.integers(0, 1)), data.draw(st.integers(0, 1))
    w = data.draw(scalar_forms(2, k, 1))
    mu = data.draw(jforms(2, 1, n, 1))
    assert embed_generic(jwedge(w, mu)) == gen_wedge(w, embed_generic(mu))


@pytest.mark.parametrize("m, r", SHAPES)
@given(data=st.data())
def test_images_are_members_and_project_back(m, r, data):
    n = data.draw(st.integers(0, 2))
    mu = data.draw(jforms(m, r, n, 1))
    g = embed_generic(mu)
    assert membership_check(g)
    assert project_from_generic(g) == mu


@pytest.mark.parametrize("m, r", SHAPES)
@given(data=st.data())
def test_jet_homotopy(m, r, data):
    n = data.draw(st.integers(1, 2))
    mu = data.draw(jforms(m, r, n, 1))
    idd = Derivation.identity(m, r)
    assert jd(jiota(idd, mu)) + jiota(idd, jd(mu)) == mu


@given(jforms(2, 2, 2, 1))
def test_split_roundtrip(mu):
    assert from_split(2, *to_split(mu)) == mu


@given(derivations(1, 2, 1), derivations(1, 2, 1), jforms(1, 2, 1, 1), polys(1, 1))
def test_cartan_calculus(a, b, mu, f):
    from omnilie.forms import commutator

    assert jlie(a, mu) == jd(jiota(a, mu)) + jiota(a, jd(mu))
    assert jlie(a, jiota(b, mu)) - jiota(b, jlie(a, mu)) == jiota(commutator(a, b), mu)
    assert jiota(a, jscale(f, mu)) == jscale(f, jiota(a, mu))

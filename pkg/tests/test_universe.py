"""The standard universe, generated systems, and lifting along extensions.

Oracles: type values must be the objects one grade up with the right
father; term values must be exactly the splittings of their projection,
both computed here by brute force against the carrier.
"""

import pytest

from cstrict import (
    AmbientCategory,
    AmbientPatch,
    CertificationError,
    GeneratedObject,
    LanUniverse,
    LiftedHom,
    Presheaf,
    PresheafMorphism,
    builtin_csystem,
    corestriction,
    generated_csystem,
    hom_from_universe_morphism,
    image_csystem,
    inclusion_functor,
    lan_universe,
    psi_chain,
    standard_universe,
    validate_csystem,
    validate_homomorphism,
    validate_universe_morphism,
)


@pytest.fixture
def unit():
    return builtin_csystem("unit")


@pytest.fixture
def onetype():
    return builtin_csystem("onetype")


@pytest.fixture
def embedded_unit():
    """The identity-patch embedding used by the pipeline, at a small bound."""
    cs = builtin_csystem("unit")
    ambient = AmbientCategory(cs, AmbientPatch(), 6)
    M = corestriction(cs, ambient)
    im = image_csystem(cs, M)
    incl = inclusion_functor(im, M)
    return im, incl


# ---------------------------------------------------------------------------
# the standard universe


def test_standard_universe_unit_contents(unit):
    u = standard_universe(unit, eq_bound=3)
    assert u.types.at(2) == (3,)
    assert u.terms.at(2) == (("u", 2, 3),)
    assert u.proj.apply(2, ("u", 2, 3)) == 3
    assert u.terminal.universal_element == (0, "*")
    # type restriction is base change
    f = ("u", 1, 2)
    assert u.types.restrict(f, 3) == unit.star(f, 3)


def test_standard_universe_onetype_terms(onetype):
    cs = onetype
    u = standard_universe(cs, eq_bound=2)
    assert u.types.at(2) == (3,)
    terms = u.terms.at(2)
    assert len(terms) == 2
    car = cs.carrier
    for s0 in terms:
        assert car.compose(s0, cs.p(3)) == car.identity(2)
    # term restriction is the induced section
    f = ("t", 1, 2, (1, 1))
    for s0 in terms:
        assert u.terms.restrict(f, s0) == cs.s(car.compose(f, s0))


def test_term_values_match_brute_force(onetype):
    cs = onetype
    u = standard_universe(cs, eq_bound=2)
    car = cs.carrier
    for X in range(3):
        expected = []
        for y in u.types.at(X):
            for s0 in car.hom(X, y):
                if car.compose(s0, cs.p(y)) == car.identity(X):
                    expected.append(s0)
        assert sorted(u.terms.at(X)) == sorted(expected)


# ---------------------------------------------------------------------------
# canonical chains and representability


def test_chain_structure(unit):
    u = standard_universe(unit, eq_bound=3)
    chain = u.spine.chain
    root = chain(0)
    assert root is u.root()
    assert root.length == 0 and root.label == "pt"
    assert root.certificate() == (0, "*")
    two = chain(2)
    assert two.length == 2
    assert chain(2) is two
    assert two.parent is chain(1)
    for c in range(3):
        assert len(chain(1).presheaf.at(c)) == 1


def test_rep_table_is_a_bijection(onetype):
    cs = onetype
    u = standard_universe(cs, eq_bound=2)
    two = u.spine.chain(2)
    car = cs.carrier
    x0, e0 = two.certificate()
    for c in range(3):
        table = two.rep_table(c)
        assert set(table) == set(two.presheaf.at(c))
        for elem, f in table.items():
            assert car.dom(f) == c and car.cod(f) == x0
            assert two.presheaf.restrict(f, e0) == elem


def test_missing_certificate_raises(unit):
    u = standard_universe(unit, eq_bound=2)
    classifier = PresheafMorphism(u.terminal, u.types, lambda c, e: c + 1)
    uncertified = u.root().extend(classifier)
    assert uncertified.certificate() is None
    with pytest.raises(CertificationError):
        uncertified.rep_table(0)


def test_noninjective_witness_raises(onetype):
    u = standard_universe(onetype, eq_bound=2)
    bogus = GeneratedObject(
        universe=u,
        parent=None,
        classifier=None,
        presheaf=u.terminal,
        cert=(2, "*"),
        label="bogus",
        proj1=None,
        proj2=None,
    )
    with pytest.raises(CertificationError):
        bogus.rep_table(2)


def test_witness_missing_element_raises(unit):
    u = standard_universe(unit, eq_bound=2)
    root = u.root()
    with pytest.raises(CertificationError):
        root.rep_arrow(1, "not-an-element")


# ---------------------------------------------------------------------------
# the generated system and the chain comparison


def test_generated_system_is_lawful(unit):
    u = standard_universe(unit, eq_bound=3)
    gcs = generated_csystem(u)
    assert validate_csystem(gcs, 2).passed


def test_chain_comparison_certifies(unit):
    cs = unit
    u = standard_universe(cs, eq_bound=2)
    hom, isos = psi_chain(cs, u, 2)
    assert validate_homomorphism(hom, 2).passed
    assert set(isos) == {"0", "1", "2"}
    chain = u.spine.chain
    iso = isos["2"]
    for c in range(3):
        for e in chain(2).presheaf.at(c):
            g = iso.forward.apply(c, e)
            assert cs.carrier.cod(g) == 2
            assert iso.inverse.apply(c, g) == e


# ---------------------------------------------------------------------------
# lifting a universe along an extension


def test_transported_universe_validates(embedded_unit):
    im, incl = embedded_unit
    u = standard_universe(im, eq_bound=2)
    phi = LanUniverse(incl, 2)
    u2 = lan_universe(phi, u)
    assert u2.types is phi.extend(u.types)
    assert u2.terminal.universal_element == (incl.on_obj(("im", 0)), "*")
    rep = validate_universe_morphism(phi, u, u2, [], 2)
    assert rep.passed


def test_lifted_hom_toy(embedded_unit):
    im, incl = embedded_unit
    u = standard_universe(im, eq_bound=2)
    gcs = generated_csystem(u)
    phi = LanUniverse(incl, 2)
    u2 = lan_universe(phi, u)
    lift = LiftedHom(phi, u, u2, source_csystem=gcs)
    assert validate_homomorphism(lift.hom, 1).passed
    chain = u.spine.chain
    iso = lift.tau(chain(("im", 1)), 2)
    assert not isinstance(iso, type(None))
    assert hasattr(iso, "inverse")


def test_hom_from_universe_morphism_returns_pair(embedded_unit):
    im, incl = embedded_unit
    u = standard_universe(im, eq_bound=2)
    phi = LanUniverse(incl, 2)
    u2 = lan_universe(phi, u)
    hom, psi_hat = hom_from_universe_morphism(phi, u, u2)
    root = u.root()
    comparison = psi_hat(root)
    assert comparison.source is not None
    assert hom.functor.on_obj(root).length == 0

import pytest

from cstrict import (
    FiniteAsComputable,
    Presheaf,
    PresheafMorphism,
    Report,
    builtin_csystem,
    canonical_pullback,
    compose_morphisms,
    identity_morphism,
    pointwise_iso_check,
    terminal_presheaf,
    validate_naturality,
    yoneda,
    yoneda_map,
)


@pytest.fixture
def unit_carrier():
    return builtin_csystem("unit").carrier


@pytest.fixture
def onetype_carrier():
    return builtin_csystem("onetype").carrier


def test_yoneda_values_and_restrictions(onetype_carrier):
    car = onetype_carrier
    y2 = yoneda(car, 2)
    assert len(y2.at(1)) == 1      # maps [2] -> [1]
    assert len(y2.at(2)) == 4
    g = ("t", 1, 2, (1, 1))
    for h in y2.at(2):
        # restriction along g is precomposition
        assert y2.restrict(g, h) == car.compose(g, h)


def test_yoneda_universal_element(unit_carrier):
    y3 = yoneda(unit_carrier, 3)
    x, ident = y3.universal_element
    assert x == 3 and ident == unit_carrier.identity(3)


def test_at_is_sorted_and_memoized(unit_carrier):
    seen = []

    def at(c):
        seen.append(c)
        return ("b", "a")

    P = Presheaf(unit_carrier, at, lambda f, e: e, label="p")
    first = P.at(1)
    again = P.at(1)
    assert first == again
    assert list(first) == sorted(first)
    assert seen.count(1) == 1


def test_terminal_presheaf_is_singleton(unit_carrier):
    T = terminal_presheaf(unit_carrier)
    for c in range(4):
        assert len(T.at(c)) == 1
        assert T.restrict(("u", 0, c), T.at(c)[0]) == T.at(0)[0]


def test_compose_morphisms_is_diagrammatic(unit_carrier):
    P = Presheaf(unit_carrier, lambda c: (0, 1), lambda f, e: e, label="p")
    m = PresheafMorphism(P, P, lambda c, e: 1 - e, label="flip")
    n = PresheafMorphism(P, P, lambda c, e: e, label="keep")
    mn = compose_morphisms(m, n)
    assert mn.apply(0, 0) == 1     # flip first, then keep
    assert mn.label == "flip;keep"
    assert mn.source is P and mn.target is P


def test_canonical_pullback_pairs(unit_carrier):
    base = Presheaf(unit_carrier, lambda c: ("t0", "t1"), lambda f, e: e, label="types")
    A = Presheaf(unit_carrier, lambda c: ("a0", "a1"), lambda f, e: e, label="A")
    B = Presheaf(unit_carrier, lambda c: ("b0", "b1"), lambda f, e: e, label="B")
    f = PresheafMorphism(A, base, lambda c, e: "t0" if e == "a0" else "t1", label="f")
    p = PresheafMorphism(B, base, lambda c, e: "t0", label="p")
    pb, pr1, pr2 = canonical_pullback(f, p)
    # only a0 hits t0, so the pullback pairs a0 with both elements of B
    assert pb.at(2) == (("a0", "b0"), ("a0", "b1"))
    assert pr1.apply(2, ("a0", "b1")) == "a0"
    assert pr2.apply(2, ("a0", "b1")) == "b1"


def test_pointwise_iso_check_certifies_bijection(unit_carrier):
    P = Presheaf(unit_carrier, lambda c: (0, 1), lambda f, e: e, label="p")
    m = PresheafMorphism(P, P, lambda c, e: 1 - e, label="flip")
    iso = pointwise_iso_check(m, 3)
    assert not isinstance(iso, Report)
    for c in range(4):
        for e in P.at(c):
            assert iso.inverse.apply(c, iso.forward.apply(c, e)) == e
            assert iso.forward.apply(c, iso.inverse.apply(c, e)) == e
    assert iso.component_sizes["0"] == 2


def test_pointwise_iso_check_reports_failure(unit_carrier):
    P = Presheaf(unit_carrier, lambda c: (0, 1), lambda f, e: e, label="p")
    squash = PresheafMorphism(P, P, lambda c, e: 0, label="squash")
    outcome = pointwise_iso_check(squash, 3)
    assert isinstance(outcome, Report)
    assert not outcome.passed
    assert outcome.first_witness() is not None


def test_identity_morphism(unit_carrier):
    P = Presheaf(unit_carrier, lambda c: ("x",), lambda f, e: e, label="p")
    ident = identity_morphism(P)
    assert ident.apply(2, "x") == "x"


def test_postcomposition_map_is_natural(onetype_carrier):
    car = onetype_carrier
    m = yoneda_map(car, ("t", 1, 2, (1, 1)))
    rep = validate_naturality(m, 2)
    assert rep.passed


def test_naturality_check_rejects_bijective_twist(onetype_carrier):
    # swapping the two constant self-maps at a single probe is bijective in
    # every component yet fails the naturality squares
    car = onetype_carrier
    y2 = yoneda(car, 2)
    c1 = ("t", 2, 2, (1, 1))
    c2 = ("t", 2, 2, (2, 2))
    swap = {c1: c2, c2: c1}

    def twist(c, h):
        if c == 2:
            return swap.get(h, h)
        return h

    m = PresheafMorphism(y2, y2, twist, label="twist")
    assert not isinstance(pointwise_iso_check(m, 2), Report)
    rep = validate_naturality(m, 2)
    assert not rep.passed
    assert rep.first_witness() is not None

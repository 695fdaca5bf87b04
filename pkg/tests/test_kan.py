"""Set-valued colimits and the pointwise extension machinery.

The randomized colimit tests compare against the zigzag oracle in
``oracles.py``: two generators name the same colimit class exactly when a
chain of transitions (in either direction) links them.
"""

from random import Random

import pytest

from cstrict import (
    CertificationError,
    FiniteAsComputable,
    FiniteCategory,
    FunctorData,
    LanUniverse,
    MalformedInputError,
    NaturalIso,
    Presheaf,
    PresheafMorphism,
    Report,
    SetDiagram,
    comma_filtered_report,
    compose_morphisms,
    identity_morphism,
    lan_extend,
    preservation_report,
    rho_representable,
    set_colimit,
    stabilization_probe,
    terminal_presheaf,
    validate_set_diagram,
)

from oracles import diagram_nodes_edges, random_set_diagram, zigzag_partition


def _discrete_diagram(values: dict) -> SetDiagram:
    objects = tuple(sorted(values))
    morphisms = {f"id_{o}": (o, o) for o in objects}
    identities = {o: f"id_{o}" for o in objects}
    composition = {(f"id_{o}", f"id_{o}"): f"id_{o}" for o in objects}
    shape = FiniteCategory(objects, morphisms, identities, composition, name="discrete")
    return SetDiagram(shape=shape, values=values, transitions={})


@pytest.fixture
def parallel_pair() -> SetDiagram:
    shape = FiniteCategory(
        objects=("X", "Y"),
        morphisms={
            "idX": ("X", "X"),
            "idY": ("Y", "Y"),
            "f": ("X", "Y"),
            "g": ("X", "Y"),
        },
        identities={"X": "idX", "Y": "idY"},
        composition={
            ("idX", "idX"): "idX",
            ("idY", "idY"): "idY",
            ("idX", "f"): "f",
            ("f", "idY"): "f",
            ("idX", "g"): "g",
            ("g", "idY"): "g",
        },
        name="pair",
    )
    return SetDiagram(
        shape=shape,
        values={"X": ("a", "b"), "Y": ("x", "y")},
        transitions={"f": {"a": "x", "b": "y"}, "g": {"a": "y", "b": "y"}},
    )


@pytest.fixture
def growing_comma():
    """Constant functor from a graded discrete source onto one object of a
    discrete two-object target.  The comma fragment at the image object gains
    one isolated node per extra grade, so extensions there never stabilize;
    the other object has an empty comma fragment at every depth."""
    objects = tuple(f"a{k}" for k in range(5))
    morphisms = {f"id_{o}": (o, o) for o in objects}
    identities = {o: f"id_{o}" for o in objects}
    composition = {(f"id_{o}", f"id_{o}"): f"id_{o}" for o in objects}
    src_cat = FiniteCategory(
        objects, morphisms, identities, composition, name="graded-points"
    )
    source = FiniteAsComputable(src_cat, {f"a{k}": k for k in range(5)})
    tgt_cat = FiniteCategory(
        objects=("t0", "t1"),
        morphisms={"id_t0": ("t0", "t0"), "id_t1": ("t1", "t1")},
        identities={"t0": "id_t0", "t1": "id_t1"},
        composition={("id_t0", "id_t0"): "id_t0", ("id_t1", "id_t1"): "id_t1"},
        name="two-points",
    )
    target = FiniteAsComputable(tgt_cat, {"t0": 0, "t1": 1})
    i = FunctorData(source, target, lambda x: "t0", lambda f: "id_t0", name="const")
    P = Presheaf(source, lambda y: ("*",), lambda f, e: e, label="pt")
    return i, P


# ---------------------------------------------------------------------------
# colimits of set diagrams


def test_colimit_of_discrete_diagram():
    d = _discrete_diagram({"A": ("x",), "B": ("y1", "y2")})
    col = set_colimit(d)
    assert col.class_count == 3
    assert col.injection("A", "x") == ("A", "x")
    assert col.injection("B", "y2") == ("B", "y2")


def test_colimit_of_parallel_pair_collapses(parallel_pair):
    assert validate_set_diagram(parallel_pair).passed
    col = set_colimit(parallel_pair)
    assert col.class_count == 1
    members = set(col.classes[0])
    assert members == {("X", "a"), ("X", "b"), ("Y", "x"), ("Y", "y")}


def test_colimit_of_empty_diagram():
    shape = FiniteCategory((), {}, {}, {}, name="empty")
    col = set_colimit(SetDiagram(shape=shape, values={}, transitions={}))
    assert col.class_count == 0
    assert col.classes == ()


def test_injection_rejects_unknown_element():
    d = _discrete_diagram({"A": ("x",)})
    col = set_colimit(d)
    with pytest.raises(MalformedInputError):
        col.injection("A", "zzz")


def test_diagram_validation_catches_partial_table(parallel_pair):
    broken = SetDiagram(
        shape=parallel_pair.shape,
        values=parallel_pair.values,
        transitions={"f": {"a": "x"}, "g": {"a": "y", "b": "y"}},
    )
    rep = validate_set_diagram(broken)
    assert not rep.passed
    assert "f" in rep.first_witness()


def test_diagram_validation_catches_escaping_value(parallel_pair):
    broken = SetDiagram(
        shape=parallel_pair.shape,
        values=parallel_pair.values,
        transitions={"f": {"a": "zzz", "b": "y"}, "g": {"a": "y", "b": "y"}},
    )
    rep = validate_set_diagram(broken)
    assert not rep.passed
    assert "leaves" in rep.first_witness()


def test_diagram_validation_catches_nonfunctorial_composite():
    shape = FiniteCategory(
        objects=("X", "Y", "Z"),
        morphisms={
            "idX": ("X", "X"),
            "idY": ("Y", "Y"),
            "idZ": ("Z", "Z"),
            "f": ("X", "Y"),
            "g": ("Y", "Z"),
            "fg": ("X", "Z"),
        },
        identities={"X": "idX", "Y": "idY", "Z": "idZ"},
        composition={
            ("idX", "idX"): "idX",
            ("idY", "idY"): "idY",
            ("idZ", "idZ"): "idZ",
            ("idX", "f"): "f",
            ("f", "idY"): "f",
            ("idY", "g"): "g",
            ("g", "idZ"): "g",
            ("idX", "fg"): "fg",
            ("fg", "idZ"): "fg",
            ("f", "g"): "fg",
        },
        name="triangle",
    )
    d = SetDiagram(
        shape=shape,
        values={"X": ("a",), "Y": ("b",), "Z": ("c1", "c2")},
        transitions={
            "f": {"a": "b"},
            "g": {"b": "c1"},
            "fg": {"a": "c2"},  # disagrees with f then g
        },
    )
    rep = validate_set_diagram(d)
    assert not rep.passed
    assert "fg" in rep.first_witness()


def test_missing_transition_table_raises(parallel_pair):
    broken = SetDiagram(
        shape=parallel_pair.shape,
        values=parallel_pair.values,
        transitions={"f": {"a": "x", "b": "y"}},
    )
    with pytest.raises(MalformedInputError):
        set_colimit(broken)


def test_colimit_matches_zigzag_oracle_on_random_diagrams():
    for seed in range(100):
        d = random_set_diagram(Random(seed))
        assert validate_set_diagram(d).passed, f"seed {seed}"
        col = set_colimit(d)
        got = {frozenset(cls) for cls in col.classes}
        nodes, edges = diagram_nodes_edges(d)
        assert got == zigzag_partition(nodes, edges), f"seed {seed}"
        for cls in col.classes:
            for member in cls:
                assert col.rep_of[member] == cls[0], f"seed {seed}"


# ---------------------------------------------------------------------------
# pointwise extension


def test_extension_of_point_presheaf(point_into_interval):
    i, P = point_into_interval
    lan = lan_extend(i, P, truncation=1)
    at0 = lan.at("0")
    assert len(at0) == 2
    assert {rep[2] for rep in at0} == {"s1", "s2"}
    assert lan.at("1") == ()
    for rep in at0:
        assert lan.restrict("id0", rep) == rep


def test_extension_respects_morphisms(point_into_interval):
    i, P = point_into_interval
    phi = LanUniverse(i, 1)
    lan_P = phi.extend(P)
    flip = PresheafMorphism(
        P, P, lambda c, e: {"s1": "s2", "s2": "s1"}[e], label="flip"
    )
    lan_flip = phi.extend_morphism(flip)
    for rep in lan_P.at("0"):
        out = lan_flip.apply("0", rep)
        assert out in lan_P.at("0")
        assert out[2] != rep[2]

    ident = phi.extend_morphism(identity_morphism(P))
    for rep in lan_P.at("0"):
        assert ident.apply("0", rep) == rep

    twice = phi.extend_morphism(compose_morphisms(flip, flip))
    for rep in lan_P.at("0"):
        assert twice.apply("0", rep) == lan_flip.apply("0", lan_flip.apply("0", rep))


def test_extension_registry_records_presheaves(point_into_interval):
    i, P = point_into_interval
    phi = LanUniverse(i, 1)
    lan = phi.extend(P)
    assert phi.extend(P) is lan
    labels = [entry[0] for entry in phi.registry]
    assert labels == ["Lan[S]"]
    assert phi.registry[0][1] is P


def test_negative_truncation_rejected(point_into_interval):
    i, _ = point_into_interval
    with pytest.raises(MalformedInputError):
        LanUniverse(i, -1)


def test_class_rep_outside_truncation_raises(growing_comma):
    i, P = growing_comma
    phi = LanUniverse(i, 1)
    with pytest.raises(CertificationError):
        phi.class_rep(P, "t0", ("a3", "id_t0", "*"))


# ---------------------------------------------------------------------------
# stabilization certificates


def test_stabilization_on_stable_extension(point_into_interval):
    i, P = point_into_interval
    for c in ("0", "1"):
        rep = stabilization_probe(i, P, c, truncation=0)
        assert rep.passed
        assert rep.notes["classes"] == rep.notes["classes_next"]


def test_stabilization_detects_growing_comma(growing_comma):
    i, P = growing_comma
    rep = stabilization_probe(i, P, "t0", truncation=1)
    assert not rep.passed
    assert rep.notes["classes"] == 2
    assert rep.notes["classes_next"] == 3
    assert "one level deeper" in rep.first_witness()


def test_stabilization_of_empty_comma(growing_comma):
    i, P = growing_comma
    rep = stabilization_probe(i, P, "t1", truncation=1)
    assert rep.passed
    assert rep.notes["classes"] == 0


# ---------------------------------------------------------------------------
# preservation and filteredness reports


def test_preservation_toy_pass(point_into_interval):
    i, P = point_into_interval
    rep = preservation_report(i, identity_morphism(P), [], probe_bound=0, truncation=1)
    assert rep.passed
    assert rep.notes["tests"] == 0


def test_preservation_square_check_runs(point_into_interval):
    i, P = point_into_interval
    T = terminal_presheaf(i.source)
    bang = PresheafMorphism(P, T, lambda c, e: T.at(c)[0], label="!")
    rep = preservation_report(
        i, identity_morphism(T), [bang], probe_bound=0, truncation=1
    )
    assert rep.passed
    assert any(c.name.startswith("square-preserved") for c in rep.checks)


def test_preservation_detects_empty_extension(point_into_interval):
    i, P = point_into_interval
    rep = preservation_report(i, identity_morphism(P), [], probe_bound=1, truncation=1)
    assert not rep.passed
    assert "0 elements at 1" in rep.first_witness()


def test_comma_filtered_report_is_diagnostic(point_into_interval):
    i, _ = point_into_interval
    phi = LanUniverse(i, 1)
    rep = comma_filtered_report(i, 1, phi)
    names = {c.name: c.passed for c in rep.checks}
    assert names["filtered[0]"] is True
    assert names["filtered[1]"] is False  # empty fragment is not filtered


# ---------------------------------------------------------------------------
# representable comparison


def test_representable_comparison_toy(point_into_interval):
    i, _ = point_into_interval
    iso = rho_representable(i, "0", probe_bound=1, truncation=1)
    assert isinstance(iso, NaturalIso)
    assert iso.component_sizes == {"0": 1, "1": 0}
    rep = iso.forward.apply("0", "id0")
    assert rep[0] == "0" and rep[2] == "id0"


def test_representable_comparison_respects_truncation(growing_comma):
    i, _ = growing_comma
    out = rho_representable(i, "a2", probe_bound=1, truncation=1)
    assert isinstance(out, Report)
    assert not out.passed

"""Colimits of set-valued diagrams and pointwise left Kan extension.

The extension of a presheaf P along a functor i is computed objectwise as
the colimit, over the truncated comma category of pairs (y, f : c -> i(y)),
of the values P(y).  Colimit classes are presented by explicit generators
and identified with a union-find structure; the least member of each class
(in the deterministic key order) is its canonical representative.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .catkernel import (
    CommaCategory,
    ComputableCategory,
    FiniteCategory,
    FunctorData,
    comma_category,
)
from .presheaf import (
    NaturalIso,
    Presheaf,
    PresheafMorphism,
    canonical_pullback,
    pointwise_iso_check,
    terminal_presheaf,
    yoneda,
)
from .report import CertificationError, MalformedInputError, Report, canon_key


# ---------------------------------------------------------------------------
# union-find partitioning


class _UnionFind:
    __slots__ = ("parent",)

    def __init__(self) -> None:
        self.parent: dict = {}

    def add(self, x) -> None:
        if x not in self.parent:
            self.parent[x] = x

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[ra] = rb


def _partition(nodes, edges):
    """Partition ``nodes`` by the equivalence generated by ``edges``.

    Returns (classes, rep_of): classes is a tuple of member tuples, each
    sorted by canonical key and listed in order of their least member;
    rep_of maps every node to the least member of its class.
    """
    uf = _UnionFind()
    for n in nodes:
        uf.add(n)
    for a, b in edges:
        uf.add(a)
        uf.add(b)
        uf.union(a, b)
    groups: dict = {}
    for n in uf.parent:
        groups.setdefault(uf.find(n), []).append(n)
    classes = []
    rep_of: dict = {}
    for members in groups.values():
        members.sort(key=canon_key)
        rep = members[0]
        for m in members:
            rep_of[m] = rep
        classes.append(tuple(members))
    classes.sort(key=lambda cls: canon_key(cls[0]))
    return tuple(classes), rep_of


# ---------------------------------------------------------------------------
# finite set-valued diagrams


@dataclass(frozen=True)
class SetDiagram:
    """A functor from a finite shape to sets, given by explicit tables.

    ``values`` assigns each object id a tuple of elements; ``transitions``
    assigns each non-identity morphism id an element-to-element mapping.
    Identity morphisms may be omitted (they act as identity maps).
    """

    shape: FiniteCategory
    values: dict
    transitions: dict

    def transition(self, mor_id: str) -> dict:
        if mor_id in self.shape.identities.values():
            a = self.shape.dom(mor_id)
            return {e: e for e in self.values[a]}
        if mor_id not in self.transitions:
            raise MalformedInputError(f"no transition table for morphism {mor_id!r}")
        return self.transitions[mor_id]


@dataclass(frozen=True)
class ColimitPresentation:
    """Colimit of a set diagram: classes of (object, element) generators."""

    classes: tuple
    rep_of: dict

    @property
    def class_count(self) -> int:
        return len(self.classes)

    def injection(self, obj_id, elem):
        """Canonical representative of the class of ``elem`` at ``obj_id``."""
        node = (obj_id, elem)
        if node not in self.rep_of:
            raise MalformedInputError(f"{elem!r} is not an element at {obj_id!r}")
        return self.rep_of[node]


def validate_set_diagram(d: SetDiagram) -> Report:
    report = Report(f"set-diagram[{d.shape.name}]")
    cat = d.shape
    ok = True
    witness = None
    for mor_id in cat.morphisms:
        if mor_id in cat.identities.values():
            continue
        a, b = cat.dom(mor_id), cat.cod(mor_id)
        table = d.transition(mor_id)
        if set(table) != set(d.values[a]):
            ok, witness = False, f"transition {mor_id!r} not defined on exactly the elements at {a!r}"
            break
        if any(v not in d.values[b] for v in table.values()):
            ok, witness = False, f"transition {mor_id!r} leaves the elements at {b!r}"
            break
    report.add("transition-tables", ok, witness)
    if not ok:
        # functoriality is meaningless over broken tables
        return report
    ok = True
    witness = None
    for (f, g), h in cat.composition.items():
        tf, tg, th = d.transition(f), d.transition(g), d.transition(h)
        for e in d.values[cat.dom(f)]:
            if tg[tf[e]] != th[e]:
                ok, witness = False, f"transition of {h!r} disagrees with {f!r} then {g!r} at {e!r}"
                break
        if not ok:
            break
    report.add("transition-functorial", ok, witness)
    return report


def set_colimit(d: SetDiagram) -> ColimitPresentation:
    """Colimit presentation of a finite set-valued diagram."""
    nodes = [(obj, e) for obj in d.shape.objects for e in d.values[obj]]
    edges = []
    for mor_id in d.shape.morphisms:
        if mor_id in d.shape.identities.values():
            continue
        a, b = d.shape.dom(mor_id), d.shape.cod(mor_id)
        table = d.transition(mor_id)
        for e in d.values[a]:
            if e not in table:
                raise MalformedInputError(
                    f"transition {mor_id!r} undefined on {e!r} at {a!r}"
                )
            edges.append(((a, e), (b, table[e])))
    classes, rep_of = _partition(nodes, edges)
    return ColimitPresentation(classes, rep_of)


# ---------------------------------------------------------------------------
# left Kan extension along a functor


class LanUniverse:
    """Pointwise left Kan extension along ``i`` at a fixed comma truncation.

    All comma categories and colimit partitions are cached on the instance,
    so one ``LanUniverse`` shared across a pipeline run evaluates each
    colimit once.  Every presheaf extended through the instance is recorded
    in ``registry`` so stabilization certificates can be swept afterwards.

    Elements of an extended presheaf at ``c`` are canonical triples
    ``(y, f, e)`` with ``f : c -> i(y)`` and ``e`` an element of the
    original presheaf at ``y``.
    """

    def __init__(self, i: FunctorData, truncation: int) -> None:
        if truncation < 0:
            raise MalformedInputError("truncation must be non-negative")
        self.i = i
        self.truncation = truncation
        self._comma: dict = {}
        self._partitions: dict = {}
        self._extended: dict = {}
        self._extended_mor: dict = {}
        self._yoneda: dict = {}
        self.registry: list = []

    # -- comma data ---------------------------------------------------------

    def comma_at(self, c) -> CommaCategory:
        if c not in self._comma:
            self._comma[c] = comma_category(self.i, c, self.truncation)
        return self._comma[c]

    def class_data(self, P: Presheaf, c):
        """(classes, rep_of) for the colimit presenting the extension at c.

        Cache entries hold P itself so the id key can never be recycled by
        a later allocation.
        """
        key = (id(P), c)
        if key not in self._partitions:
            comma = self.comma_at(c)
            nodes = []
            for o in comma.objects:
                for e in P.at(o.y):
                    nodes.append((o.y, o.arrow, e))
            edges = []
            for src_idx, dst_idx, h in comma.arrows:
                o1, o2 = comma.objects[src_idx], comma.objects[dst_idx]
                for e2 in P.at(o2.y):
                    edges.append(
                        ((o1.y, o1.arrow, P.restrict(h, e2)), (o2.y, o2.arrow, e2))
                    )
            self._partitions[key] = (P, _partition(nodes, edges))
        return self._partitions[key][1]

    def class_rep(self, P: Presheaf, c, member):
        """Canonical representative of the class of a generator triple."""
        _, rep_of = self.class_data(P, c)
        if member not in rep_of:
            raise CertificationError(
                f"generator {member!r} lies outside the truncated comma data at "
                f"{self.i.target.obj_label(c)} (truncation {self.truncation})"
            )
        return rep_of[member]

    # -- extension ----------------------------------------------------------

    def extend(self, P: Presheaf) -> Presheaf:
        if id(P) in self._extended:
            return self._extended[id(P)][1]
        target = self.i.target

        def at(c):
            classes, _ = self.class_data(P, c)
            return tuple(cls[0] for cls in classes)

        def restrict(g, rep):
            c_prime = target.dom(g)
            y, f, e = rep
            return self.class_rep(P, c_prime, (y, target.compose(g, f), e))

        lan = Presheaf(target, at, restrict, label=f"Lan[{P.label}]")
        self._extended[id(P)] = (P, lan)
        self.registry.append((lan.label, P, lan))
        return lan

    def extend_morphism(self, m: PresheafMorphism) -> PresheafMorphism:
        if id(m) in self._extended_mor:
            return self._extended_mor[id(m)][1]
        lan_src = self.extend(m.source)
        lan_tgt = self.extend(m.target)

        def component(c, rep):
            y, f, e = rep
            return self.class_rep(m.target, c, (y, f, m.apply(y, e)))

        out = PresheafMorphism(lan_src, lan_tgt, component, label=f"Lan[{m.label}]")
        self._extended_mor[id(m)] = (m, out)
        return out

    def yoneda_source(self, x) -> Presheaf:
        """Cached representable presheaf of the source at ``x``."""
        if x not in self._yoneda:
            self._yoneda[x] = yoneda(self.i.source, x)
        return self._yoneda[x]


def lan_extend(i: FunctorData, P: Presheaf, truncation: int) -> Presheaf:
    """Left Kan extension of a single presheaf (fresh cache)."""
    return LanUniverse(i, truncation).extend(P)


def lan_extend_morphism(
    i: FunctorData, m: PresheafMorphism, truncation: int
) -> PresheafMorphism:
    """Left Kan extension of a single presheaf morphism (fresh cache)."""
    return LanUniverse(i, truncation).extend_morphism(m)


# ---------------------------------------------------------------------------
# certificates


def stabilization_probe(
    i: FunctorData,
    P: Presheaf,
    c,
    truncation: int,
    phi: LanUniverse | None = None,
    phi_next: LanUniverse | None = None,
) -> Report:
    """Certify that the extension of P at c is stable under deepening.

    Compares the colimit classes at the given truncation with the classes
    one level deeper: the map sending a class to the class of any of its
    generators must be a bijection.  Shared ``LanUniverse`` instances may
    be passed in to reuse comma caches.
    """
    label = f"{P.label}@{i.target.obj_label(c)}"
    report = Report(f"stabilization[{label}]")
    phi = phi if phi is not None else LanUniverse(i, truncation)
    phi_next = phi_next if phi_next is not None else LanUniverse(i, truncation + 1)
    classes, _ = phi.class_data(P, c)
    classes_next, rep_next = phi_next.class_data(P, c)
    report.notes["classes"] = len(classes)
    report.notes["classes_next"] = len(classes_next)

    seen: dict = {}
    inj_ok, inj_witness = True, None
    for cls in classes:
        image = rep_next[cls[0]]
        if image in seen:
            inj_ok = False
            inj_witness = (
                f"classes of {seen[image]!r} and {cls[0]!r} merge one level deeper"
            )
            break
        seen[image] = cls[0]
    report.add("deepening-injective", inj_ok, inj_witness)

    surj_ok, surj_witness = True, None
    for cls in classes_next:
        if cls[0] not in seen:
            surj_ok = False
            surj_witness = f"class of {cls[0]!r} only appears one level deeper"
            break
    report.add("deepening-surjective", surj_ok, surj_witness)
    return report


def preservation_report(
    i: FunctorData,
    proj: PresheafMorphism,
    tests: list,
    probe_bound: int,
    truncation: int,
    phi: LanUniverse | None = None,
) -> Report:
    """Check that the extension preserves the structure a universe needs.

    Two families of checks, both on ambient objects up to ``probe_bound``:
    the extension of the terminal presheaf stays a singleton, and for each
    test classifier f the canonical square on f and ``proj`` is still a
    pullback after extension.
    """
    phi = phi if phi is not None else LanUniverse(i, truncation)
    report = Report("preservation")
    probes = list(i.target.objects_up_to(probe_bound))

    terminal = terminal_presheaf(i.source)
    lan_terminal = phi.extend(terminal)
    ok, witness = True, None
    for c in probes:
        n = len(lan_terminal.at(c))
        if n != 1:
            ok = False
            witness = (
                f"extension of the terminal presheaf has {n} elements at "
                f"{i.target.obj_label(c)}"
            )
            break
    report.add("terminal-preserved", ok, witness)

    lan_proj = phi.extend_morphism(proj)
    for idx, f in enumerate(tests):
        pb, pr1, pr2 = canonical_pullback(f, proj)
        lan_pb = phi.extend(pb)
        lan_pr1 = phi.extend_morphism(pr1)
        lan_pr2 = phi.extend_morphism(pr2)
        lan_f = phi.extend_morphism(f)
        ok, witness = True, None
        for c in probes:
            pairs: dict = {}
            for xi in lan_pb.at(c):
                key = (lan_pr1.apply(c, xi), lan_pr2.apply(c, xi))
                if key in pairs:
                    ok = False
                    witness = (
                        f"two classes project to the same pair at "
                        f"{i.target.obj_label(c)}"
                    )
                    break
                pairs[key] = xi
            if not ok:
                break
            for alpha in phi.extend(f.source).at(c):
                if not ok:
                    break
                fa = lan_f.apply(c, alpha)
                for beta in phi.extend(proj.source).at(c):
                    if lan_proj.apply(c, beta) == fa and (alpha, beta) not in pairs:
                        ok = False
                        witness = (
                            f"matching pair at {i.target.obj_label(c)} missed by "
                            f"the extended square"
                        )
                        break
            if not ok:
                break
        report.add(f"square-preserved[{idx}:{f.label}]", ok, witness)
    # the transported universe map is the extension of the source one by
    # definition, so the compatibility square commutes identically
    report.add("universe-map-transported", True)
    report.notes["tests"] = len(tests)
    return report


def comma_filtered_report(i: FunctorData, probe_bound: int, phi: LanUniverse) -> Report:
    """Informational: materialize each truncated comma fragment and test
    filteredness.  Failure here is diagnostic only — stabilization is the
    load-bearing certificate."""
    from .catkernel import comma_to_finite, is_filtered

    report = Report("comma-filtered")
    for c in i.target.objects_up_to(probe_bound):
        comma = phi.comma_at(c)
        label = i.target.obj_label(c)
        try:
            finite, _ = comma_to_finite(comma)
        except MalformedInputError as exc:
            report.add(f"filtered[{label}]", False, str(exc))
            continue
        sub = is_filtered(finite)
        report.add(f"filtered[{label}]", sub.passed, sub.first_witness())
    return report


# ---------------------------------------------------------------------------
# representable comparison


def rho_representable(
    i: FunctorData,
    x,
    probe_bound: int,
    truncation: int,
    phi: LanUniverse | None = None,
):
    """Compare the ambient representable at i(x) with the extension of the
    source representable at x.

    Forward direction sends g : c -> i(x) to the class of (x, g, id_x);
    the explicit inverse sends the class of (y, f, h) to f then i(h).
    Returns a certified ``NaturalIso`` (with naturality in x verified over
    the source fragment) or a failing ``Report``.
    """
    src, tgt = i.source, i.target
    phi = phi if phi is not None else LanUniverse(i, truncation)
    if src.grade(x) > truncation:
        report = Report(f"rho[{src.obj_label(x)}]")
        report.add(
            "grade-within-truncation",
            False,
            f"object grade {src.grade(x)} exceeds truncation {truncation}",
        )
        return report

    def forward_component(of_x):
        yx = phi.yoneda_source(of_x)
        lan_yx = phi.extend(yx)
        ident = src.identity(of_x)
        ix = i.on_obj(of_x)
        ambient_rep = yoneda(tgt, ix)

        def component(c, g):
            return phi.class_rep(yx, c, (of_x, g, ident))

        return PresheafMorphism(
            ambient_rep, lan_yx, component, label=f"rho[{src.obj_label(of_x)}]"
        )

    rho_x = forward_component(x)
    outcome = pointwise_iso_check(rho_x, probe_bound)
    if isinstance(outcome, Report):
        return outcome

    # the generic inverse must agree with the explicit one
    report = Report(f"rho[{src.obj_label(x)}]")
    ok, witness = True, None
    for c in tgt.objects_up_to(probe_bound):
        for rep in rho_x.target.at(c):
            y, f, h = rep
            g = tgt.compose(f, i.on_mor(h))
            if rho_x.apply(c, g) != rep:
                ok = False
                witness = (
                    f"explicit inverse disagrees at {tgt.obj_label(c)} "
                    f"on class {rep!r}"
                )
                break
        if not ok:
            break
    report.add("explicit-inverse", ok, witness)
    if not ok:
        return report

    # naturality in the representing object, over the truncated fragment
    nat_bound = min(probe_bound, truncation)
    ok, witness = True, None
    for z in src.objects_up_to(nat_bound):
        rho_z = forward_component(z)
        yz = phi.yoneda_source(z)
        for r in src.hom(x, z):
            ir = i.on_mor(r)
            for c in tgt.objects_up_to(probe_bound):
                for g in rho_x.source.at(c):
                    lhs = rho_z.apply(c, tgt.compose(g, ir))
                    y, f, h = rho_x.apply(c, g)
                    rhs = phi.class_rep(yz, c, (y, f, src.compose(h, r)))
                    if lhs != rhs:
                        ok = False
                        witness = (
                            f"naturality square for {src.mor_label(r)} fails at "
                            f"{tgt.obj_label(c)} on {tgt.mor_label(g)}"
                        )
                        break
                if not ok:
                    break
            if not ok:
                break
        if not ok:
            break
    if not ok:
        report.add("natural-in-object", ok, witness)
        return report
    return outcome

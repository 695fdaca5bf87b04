"""Finite-set presheaves over a computable base category.

A presheaf assigns a finite tuple of hashable elements to every base object
and a restriction function to every base morphism, contravariantly: for
f: a -> b the restriction maps elements at b to elements at a.  Values are
memoized; enumerations are sorted by a deterministic key so downstream
reports are byte-stable.

``universal_element`` is an optional representability witness (x0, e0): the
claim that g |-> restrict(g)(e0) is a bijection from arrows into x0 onto the
values.  It is advisory data; certifying it is the caller's job (see
``pointwise_iso_check``), but once certified it makes maps out of the
presheaf enumerable.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .catkernel import ComputableCategory
from .report import Report, canon_key


class Presheaf:
    def __init__(
        self,
        base: ComputableCategory,
        at: Callable,
        restrict: Callable,
        label: str = "P",
        universal_element: tuple | None = None,
    ):
        self.base = base
        self._at = at
        self._restrict = restrict
        self.label = label
        self.universal_element = universal_element
        self._at_cache: dict = {}

    def at(self, x) -> tuple:
        if x not in self._at_cache:
            self._at_cache[x] = tuple(sorted(self._at(x), key=canon_key))
        return self._at_cache[x]

    def restrict(self, f, elem):
        return self._restrict(f, elem)


class PresheafMorphism:
    def __init__(self, source: Presheaf, target: Presheaf, component: Callable, label: str = "m"):
        self.source = source
        self.target = target
        self._component = component  # component(x, elem) -> elem
        self.label = label

    def apply(self, x, elem):
        return self._component(x, elem)


def identity_morphism(P: Presheaf) -> PresheafMorphism:
    return PresheafMorphism(P, P, lambda x, e: e, label=f"id[{P.label}]")


def compose_morphisms(m: PresheafMorphism, n: PresheafMorphism) -> PresheafMorphism:
    """Diagrammatic: first m, then n."""
    return PresheafMorphism(
        m.source,
        n.target,
        lambda x, e: n.apply(x, m.apply(x, e)),
        label=f"{m.label};{n.label}",
    )


def terminal_presheaf(base: ComputableCategory) -> Presheaf:
    return Presheaf(
        base,
        lambda x: ("*",),
        lambda f, e: "*",
        label="1",
    )


def canonical_pullback(
    f: PresheafMorphism, p: PresheafMorphism
) -> tuple[Presheaf, PresheafMorphism, PresheafMorphism]:
    """Chosen pullback of p along f, both mapping into the same presheaf.

    Elements are ordered pairs (a, b) with f(a) = p(b), which makes the
    strict substitution laws of generated carriers hold on the nose.
    Returns (pullback, projection to source of f, projection to source of p).
    """
    if f.target is not p.target and f.target.label != p.target.label:
        # structural sanity only; value-level agreement is what matters below
        pass
    P, Q = f.source, p.source

    def at(x):
        return tuple(
            (a, b)
            for a in P.at(x)
            for b in Q.at(x)
            if f.apply(x, a) == p.apply(x, b)
        )

    def restrict(g, pair):
        a, b = pair
        return (P.restrict(g, a), Q.restrict(g, b))

    pb = Presheaf(P.base, at, restrict, label=f"pb[{f.label}|{p.label}]")
    pr1 = PresheafMorphism(pb, P, lambda x, e: e[0], label=f"pr1[{pb.label}]")
    pr2 = PresheafMorphism(pb, Q, lambda x, e: e[1], label=f"pr2[{pb.label}]")
    return pb, pr1, pr2


# ---------------------------------------------------------------------------
# Yoneda


def yoneda(base: ComputableCategory, x) -> Presheaf:
    """Arrows into x, restricted by precomposition."""
    return Presheaf(
        base,
        lambda c: tuple(base.hom(c, x)),
        lambda g, h: base.compose(g, h),
        label=f"y({base.obj_label(x)})",
        universal_element=(x, base.identity(x)),
    )


def yoneda_map(base: ComputableCategory, f) -> PresheafMorphism:
    """Postcomposition with f, as a map between the represented presheaves."""
    return PresheafMorphism(
        yoneda(base, base.dom(f)),
        yoneda(base, base.cod(f)),
        lambda c, h: base.compose(h, f),
        label=f"y[{base.mor_label(f)}]",
    )


def yoneda_element(P: Presheaf, x) -> tuple[Callable, Callable]:
    """The two directions of the classifying bijection at x.

    ``to_element`` evaluates a morphism out of the representable at the
    identity; ``from_element`` spreads a value of P at x into a morphism by
    restriction.
    """
    base = P.base

    def to_element(m: PresheafMorphism):
        return m.apply(x, base.identity(x))

    def from_element(e) -> PresheafMorphism:
        return PresheafMorphism(
            yoneda(base, x),
            P,
            lambda c, g: P.restrict(g, e),
            label=f"elt[{P.label}@{base.obj_label(x)}]",
        )

    return to_element, from_element


# ---------------------------------------------------------------------------
# checkers


def validate_naturality(m: PresheafMorphism, bound: int) -> Report:
    """Check every naturality square over base morphisms within the bound."""
    base = m.source.base
    rep = Report(f"naturality[{m.label}]")
    objs = base.objects_up_to(bound)
    bad = False
    for a in objs:
        for b in objs:
            for f in base.hom(a, b):
                for e in m.source.at(b):
                    lhs = m.target.restrict(f, m.apply(b, e))
                    rhs = m.apply(a, m.source.restrict(f, e))
                    if lhs != rhs:
                        bad = True
                        rep.add(
                            "square",
                            False,
                            f"f={base.mor_label(f)} elem={e!r}",
                        )
    if not bad:
        rep.add("square", True)
    rep.notes["objects"] = len(objs)
    return rep


@dataclass
class NaturalIso:
    """A morphism with a verified pointwise inverse on a probe fragment."""

    forward: PresheafMorphism
    inverse: PresheafMorphism
    probe_bound: int
    component_sizes: dict[str, int]


def pointwise_iso_check(m: PresheafMorphism, bound: int):
    """Certify each component bijective on the probe fragment.

    Returns a NaturalIso carrying inverse data on success, otherwise a
    failing Report with the witnessing object.
    """
    base = m.source.base
    rep = Report(f"pointwise-iso[{m.label}]")
    inverse_tables: dict = {}
    sizes: dict[str, int] = {}
    for c in base.objects_up_to(bound):
        src = m.source.at(c)
        tgt = m.target.at(c)
        table: dict = {}
        ok = True
        for e in src:
            v = m.apply(c, e)
            if v in table:
                ok = False
                rep.add(
                    "injective",
                    False,
                    f"{base.obj_label(c)}: {table[v]!r} and {e!r} both map to {v!r}",
                )
                break
            table[v] = e
        if ok and set(table) != set(tgt):
            missing = sorted(set(tgt) - set(table), key=canon_key)
            ok = False
            rep.add(
                "surjective",
                False,
                f"{base.obj_label(c)}: not hit: {missing[0]!r}",
            )
        if not ok:
            return rep
        inverse_tables[c] = table
        sizes[base.obj_label(c)] = len(src)
    rep.add("bijective-on-probes", True)

    def inv_component(c, v):
        if c not in inverse_tables:
            # lazily extend beyond the certified probe objects
            table = {}
            for e in m.source.at(c):
                table[m.apply(c, e)] = e
            inverse_tables[c] = table
        return inverse_tables[c][v]

    inverse = PresheafMorphism(m.target, m.source, inv_component, label=f"inv[{m.label}]")
    return NaturalIso(m, inverse, bound, sizes)

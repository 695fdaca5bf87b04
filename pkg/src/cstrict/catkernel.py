"""Finite and computably presented pre-categories.

Composition is written in diagrammatic order everywhere in this package:
``compose(f, g)`` means "f then g" and requires ``cod(f) == dom(g)``.  The
same convention applies to serialized composition tables: an entry
``[f, g, h]`` asserts f;g = h.

Two carrier flavours live here.  ``FiniteCategory`` is a fully tabulated
record with string identifiers, suitable for JSON round-trips and exhaustive
law checking.  ``ComputableCategory`` is the lazy interface used for graded
carriers with infinitely many objects: callers only ever see the fragment of
objects whose grade is below a probe bound.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Callable, Iterable

import numpy as np

from .report import Check, MalformedInputError, Report, canon_key


# ---------------------------------------------------------------------------
# finite categories


@dataclass(frozen=True)
class FiniteCategory:
    """Tabulated pre-category on string identifiers.

    ``composition`` maps composable pairs (f, g) to f;g.  Pairs listed in
    ``external`` are composable but their composite falls outside this
    fragment; validators treat them as absent rather than as violations.
    """

    objects: tuple[str, ...]
    morphisms: dict[str, tuple[str, str]]
    identities: dict[str, str]
    composition: dict[tuple[str, str], str]
    external: frozenset[tuple[str, str]] = frozenset()
    name: str = "category"

    def dom(self, f: str) -> str:
        return self.morphisms[f][0]

    def cod(self, f: str) -> str:
        return self.morphisms[f][1]

    def hom(self, a: str, b: str) -> list[str]:
        return sorted(
            (f for f, (d, c) in self.morphisms.items() if d == a and c == b),
        )

    def composable(self, f: str, g: str) -> bool:
        return self.cod(f) == self.dom(g)

    def compose_or_none(self, f: str, g: str) -> str | None:
        return self.composition.get((f, g))

    @staticmethod
    def from_json(data: dict, name: str = "category") -> "FiniteCategory":
        try:
            objects = tuple(str(o) for o in data["objects"])
            morphisms = {
                str(m["id"]): (str(m["dom"]), str(m["cod"]))
                for m in data["morphisms"]
            }
            identities = {str(k): str(v) for k, v in data["identities"].items()}
            composition = {
                (str(f), str(g)): str(h) for f, g, h in data.get("composition", [])
            }
            external = frozenset(
                (str(f), str(g)) for f, g in data.get("external", [])
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedInputError(f"bad category record: {exc}") from exc
        if len(set(objects)) != len(objects):
            raise MalformedInputError("duplicate object ids")
        for f, (d, c) in morphisms.items():
            if d not in objects or c not in objects:
                raise MalformedInputError(f"morphism {f} references unknown object")
        for x in objects:
            if x not in identities:
                raise MalformedInputError(f"object {x} has no identity")
        for x, i in identities.items():
            if x not in objects or i not in morphisms:
                raise MalformedInputError(f"identity entry {x}:{i} dangles")
        for (f, g), h in composition.items():
            if f not in morphisms or g not in morphisms or h not in morphisms:
                raise MalformedInputError(f"composition entry ({f},{g}) dangles")
        return FiniteCategory(objects, morphisms, identities, composition, external, name)

    def to_json(self) -> dict:
        return {
            "objects": list(self.objects),
            "morphisms": [
                {"id": f, "dom": d, "cod": c}
                for f, (d, c) in sorted(self.morphisms.items())
            ],
            "identities": dict(sorted(self.identities.items())),
            "composition": [[f, g, h] for (f, g), h in sorted(self.composition.items())],
            "external": sorted([f, g] for f, g in self.external),
        }


def validate_finite_category(cat: FiniteCategory) -> Report:
    """Exhaustive identity, totality and associativity check."""
    rep = Report(f"category-laws[{cat.name}]")
    for x, i in sorted(cat.identities.items()):
        ok = cat.dom(i) == x and cat.cod(i) == x
        rep.add(f"identity-endpoints[{x}]", ok, f"id of {x} is {i}: {cat.morphisms[i]}")
    mor_ids = sorted(cat.morphisms)
    by_dom: dict[str, list[str]] = {}
    for g in mor_ids:
        by_dom.setdefault(cat.dom(g), []).append(g)
    # totality on composable pairs, minus pairs marked external
    for f in mor_ids:
        for g in by_dom.get(cat.cod(f), ()):
            has = (f, g) in cat.composition
            ext = (f, g) in cat.external
            if not (has or ext):
                rep.add("composition-total", False, f"({f},{g}) has no composite")
                continue
            if has and ext:
                rep.add("composition-total", False, f"({f},{g}) both present and external")
                continue
            if has:
                h = cat.composition[(f, g)]
                if cat.dom(h) != cat.dom(f) or cat.cod(h) != cat.cod(g):
                    rep.add(
                        "composition-endpoints",
                        False,
                        f"({f},{g})->{h} endpoints {cat.morphisms[h]}",
                    )
    if not rep.failures():
        rep.add("composition-total", True)
    # identity laws
    for f in mor_ids:
        left = cat.compose_or_none(cat.identities[cat.dom(f)], f)
        right = cat.compose_or_none(f, cat.identities[cat.cod(f)])
        if left is not None and left != f:
            rep.add("identity-law", False, f"(id,{f})->{left} expected {f}")
        if right is not None and right != f:
            rep.add("identity-law", False, f"({f},id)->{right} expected {f}")
    if not any(c.name == "identity-law" and not c.passed for c in rep.checks):
        rep.add("identity-law", True)
    # associativity where all four composites are materialized; the triple
    # loop is run on an integer-encoded composition table so fragments with
    # hundreds of morphisms stay fast
    assoc_ok = True
    idx = {f: k for k, f in enumerate(mor_ids)}
    n = len(mor_ids)
    if n:
        comp = np.full(n * n, -1, dtype=np.int64)
        for (f, g), h in cat.composition.items():
            if f in idx and g in idx and h in idx:
                comp[idx[f] * n + idx[g]] = idx[h]
        into: dict[str, list[int]] = {}
        out_of: dict[str, list[int]] = {}
        for f in mor_ids:
            into.setdefault(cat.cod(f), []).append(idx[f])
            out_of.setdefault(cat.dom(f), []).append(idx[f])
        into_arr = {x: np.array(ks, dtype=np.int64) for x, ks in into.items()}
        out_arr = {x: np.array(ks, dtype=np.int64) for x, ks in out_of.items()}
        for g in mor_ids:
            gi = idx[g]
            fs = into_arr.get(cat.dom(g))
            hs = out_arr.get(cat.cod(g))
            if fs is None or hs is None:
                continue
            fg = comp[fs * n + gi]
            gh = comp[gi * n + hs]
            fs2, fg2 = fs[fg >= 0], fg[fg >= 0]
            hs2, gh2 = hs[gh >= 0], gh[gh >= 0]
            if not len(fs2) or not len(hs2):
                continue
            lhs = comp[fg2[:, None] * n + hs2[None, :]]
            rhs = comp[fs2[:, None] * n + gh2[None, :]]
            bad = (lhs >= 0) & (rhs >= 0) & (lhs != rhs)
            if bad.any():
                assoc_ok = False
                fi, hi = np.argwhere(bad)[0]
                f, h = mor_ids[fs2[fi]], mor_ids[hs2[hi]]
                rep.add(
                    "associativity",
                    False,
                    f"(({f};{g});{h})={mor_ids[lhs[fi, hi]]} "
                    f"but ({f};({g};{h}))={mor_ids[rhs[fi, hi]]}",
                )
    if assoc_ok:
        rep.add("associativity", True)
    return rep


def is_filtered(cat: FiniteCategory) -> Report:
    """Brute-force filteredness: nonempty, cocones for object pairs,
    a coequalizing arrow for every parallel pair."""
    rep = Report(f"filtered[{cat.name}]")
    rep.add("nonempty", len(cat.objects) > 0, "no objects")
    if not cat.objects:
        return rep
    for a in cat.objects:
        for b in cat.objects:
            found = any(
                cat.hom(a, c) and cat.hom(b, c) for c in cat.objects
            )
            if not found:
                rep.add("cocone", False, f"objects ({a},{b}) admit no common target")
    if not any(c.name == "cocone" and not c.passed for c in rep.checks):
        rep.add("cocone", True)
    coeq_ok = True
    for f, (a, b) in sorted(cat.morphisms.items()):
        for g, (a2, b2) in sorted(cat.morphisms.items()):
            if (a, b) != (a2, b2) or f == g:
                continue
            found = False
            for c in cat.objects:
                for h in cat.hom(b, c):
                    if cat.compose_or_none(f, h) is not None and cat.compose_or_none(
                        f, h
                    ) == cat.compose_or_none(g, h):
                        found = True
                        break
                if found:
                    break
            if not found:
                coeq_ok = False
                rep.add("coequalizing-arrow", False, f"parallel pair ({f},{g})")
    if coeq_ok:
        rep.add("coequalizing-arrow", True)
    return rep


# ---------------------------------------------------------------------------
# computable categories


class ComputableCategory(ABC):
    """Lazy graded carrier.

    Objects and morphisms are opaque hashable values interpreted by the
    category's own methods; nothing outside the class inspects them.  All
    enumerations return deterministically ordered lists.
    """

    name: str = "carrier"

    @abstractmethod
    def grade(self, x) -> int: ...

    @abstractmethod
    def objects_up_to(self, bound: int) -> list: ...

    @abstractmethod
    def hom(self, a, b) -> list: ...

    @abstractmethod
    def identity(self, x): ...

    @abstractmethod
    def compose(self, f, g): ...

    @abstractmethod
    def dom(self, f): ...

    @abstractmethod
    def cod(self, f): ...

    def eq_obj(self, a, b) -> bool:
        return a == b

    def eq_mor(self, f, g) -> bool:
        return f == g

    def obj_label(self, x) -> str:
        return str(x)

    def mor_label(self, f) -> str:
        return str(f)


class FiniteAsComputable(ComputableCategory):
    """View of a FiniteCategory through the lazy interface."""

    def __init__(self, cat: FiniteCategory, grades: dict[str, int] | None = None):
        self.cat = cat
        self.grades = grades or {}
        self.name = cat.name

    def grade(self, x) -> int:
        return self.grades.get(x, 0)

    def objects_up_to(self, bound: int) -> list:
        return [x for x in sorted(self.cat.objects) if self.grade(x) <= bound]

    def hom(self, a, b) -> list:
        return self.cat.hom(a, b)

    def identity(self, x):
        return self.cat.identities[x]

    def compose(self, f, g):
        h = self.cat.compose_or_none(f, g)
        if h is None:
            raise MalformedInputError(f"no composite for ({f},{g}) in {self.cat.name}")
        return h

    def dom(self, f):
        return self.cat.dom(f)

    def cod(self, f):
        return self.cat.cod(f)


# ---------------------------------------------------------------------------
# functors


@dataclass(frozen=True)
class FunctorData:
    """Functor presented by callables on objects and morphisms."""

    source: ComputableCategory
    target: ComputableCategory
    obj_map: Callable
    mor_map: Callable
    name: str = "F"

    def on_obj(self, x):
        return self.obj_map(x)

    def on_mor(self, f):
        return self.mor_map(f)


def compose_functors(F: FunctorData, G: FunctorData, name: str | None = None) -> FunctorData:
    """Diagrammatic composite: first F, then G."""
    return FunctorData(
        source=F.source,
        target=G.target,
        obj_map=lambda x: G.on_obj(F.on_obj(x)),
        mor_map=lambda f: G.on_mor(F.on_mor(f)),
        name=name if name is not None else f"{F.name};{G.name}",
    )


def validate_functor(F: FunctorData, bound: int) -> Report:
    """Identity, endpoint and composition preservation on the graded fragment."""
    rep = Report(f"functor-laws[{F.name}]")
    src, tgt = F.source, F.target
    objs = src.objects_up_to(bound)
    ok_id = True
    for x in objs:
        if not tgt.eq_mor(F.on_mor(src.identity(x)), tgt.identity(F.on_obj(x))):
            ok_id = False
            rep.add("preserves-identity", False, src.obj_label(x))
    if ok_id:
        rep.add("preserves-identity", True)
    ok_ends = True
    for a in objs:
        for b in objs:
            for f in src.hom(a, b):
                img = F.on_mor(f)
                if not (
                    tgt.eq_obj(tgt.dom(img), F.on_obj(a))
                    and tgt.eq_obj(tgt.cod(img), F.on_obj(b))
                ):
                    ok_ends = False
                    rep.add("preserves-endpoints", False, src.mor_label(f))
    if ok_ends:
        rep.add("preserves-endpoints", True)
    ok_comp = True
    for a in objs:
        for b in objs:
            for f in src.hom(a, b):
                for c in objs:
                    for g in src.hom(b, c):
                        lhs = F.on_mor(src.compose(f, g))
                        rhs = tgt.compose(F.on_mor(f), F.on_mor(g))
                        if not tgt.eq_mor(lhs, rhs):
                            ok_comp = False
                            rep.add(
                                "preserves-composition",
                                False,
                                f"({src.mor_label(f)};{src.mor_label(g)})",
                            )
    if ok_comp:
        rep.add("preserves-composition", True)
    return rep


# ---------------------------------------------------------------------------
# comma fragments


@dataclass(frozen=True)
class CommaObject:
    y: object          # object of the functor's source
    arrow: object      # morphism c -> i(y) in the functor's target


@dataclass(frozen=True)
class CommaCategory:
    """Bounded fragment of the comma category of arrows out of a fixed object.

    Objects are pairs (y, f: c -> i(y)) with grade(y) <= bound; a morphism
    (y, f) -> (y', f') is an h: y -> y' in the source with f;i(h) = f'.
    """

    i: FunctorData
    c: object
    bound: int
    objects: tuple[CommaObject, ...]
    arrows: tuple[tuple[int, int, object], ...]  # (src index, dst index, h)

    def object_index(self) -> dict[tuple[str, str], int]:
        src, tgt = self.i.source, self.i.target
        return {
            (src.obj_label(o.y), tgt.mor_label(o.arrow)): k
            for k, o in enumerate(self.objects)
        }


def comma_category(i: FunctorData, c, bound: int) -> CommaCategory:
    src, tgt = i.source, i.target
    objects: list[CommaObject] = []
    for y in src.objects_up_to(bound):
        for f in tgt.hom(c, i.on_obj(y)):
            objects.append(CommaObject(y, f))
    arrows: list[tuple[int, int, object]] = []
    for k1, o1 in enumerate(objects):
        for k2, o2 in enumerate(objects):
            for h in src.hom(o1.y, o2.y):
                if tgt.eq_mor(tgt.compose(o1.arrow, i.on_mor(h)), o2.arrow):
                    arrows.append((k1, k2, h))
    return CommaCategory(i, c, bound, tuple(objects), tuple(arrows))


def comma_to_finite(comma: CommaCategory, opposite: bool = False) -> tuple[
    FiniteCategory, dict[str, CommaObject]
]:
    """Materialize a comma fragment (or its opposite) as a FiniteCategory."""
    src, tgt = comma.i.source, comma.i.target
    obj_ids: list[str] = []
    table: dict[str, CommaObject] = {}
    for o in comma.objects:
        oid = f"({src.obj_label(o.y)},{tgt.mor_label(o.arrow)})"
        obj_ids.append(oid)
        table[oid] = o
    mor_ids: dict[str, tuple[str, str]] = {}
    payload: dict[str, tuple[int, int, object]] = {}
    for k1, k2, h in comma.arrows:
        a, b = (k2, k1) if opposite else (k1, k2)
        mid = f"{obj_ids[a]}->{obj_ids[b]}:{src.mor_label(h)}"
        mor_ids[mid] = (obj_ids[a], obj_ids[b])
        payload[mid] = (k1, k2, h)
    identities: dict[str, str] = {}
    for k, o in enumerate(comma.objects):
        ident = src.identity(o.y)
        mid = f"{obj_ids[k]}->{obj_ids[k]}:{src.mor_label(ident)}"
        identities[obj_ids[k]] = mid
    composition: dict[tuple[str, str], str] = {}
    for m1, (k1a, k1b, h1) in payload.items():
        for m2, (k2a, k2b, h2) in payload.items():
            # composability in the materialized (possibly opposite) category
            if mor_ids[m1][1] != mor_ids[m2][0]:
                continue
            if opposite:
                comp = src.compose(h2, h1)
                ka, kb = k2a, k1b
            else:
                comp = src.compose(h1, h2)
                ka, kb = k1a, k2b
            a, b = (kb, ka) if opposite else (ka, kb)
            target_id = f"{obj_ids[a]}->{obj_ids[b]}:{src.mor_label(comp)}"
            if target_id not in mor_ids:
                # the composite arrow must exist in the fragment; build its id
                # from an eq-equivalent listed arrow if labels differ
                found = None
                for mid, (pa, pb, ph) in payload.items():
                    if (pa, pb) == (ka, kb) and src.eq_mor(ph, comp):
                        found = mid
                        break
                if found is None:
                    raise MalformedInputError(
                        f"comma fragment not closed under composition at {target_id}"
                    )
                target_id = found
            composition[(m1, m2)] = target_id
    return (
        FiniteCategory(
            tuple(obj_ids),
            mor_ids,
            identities,
            composition,
            frozenset(),
            name=f"comma[{tgt.obj_label(comma.c)}]" + ("-op" if opposite else ""),
        ),
        table,
    )


# ---------------------------------------------------------------------------
# probes


def probe_fragment(cat: ComputableCategory, bound: int) -> FiniteCategory:
    """Materialize the full subcategory on objects of grade <= bound.

    Composites landing outside the fragment are marked external; for full
    subcategories of a category this set is empty.
    """
    objs = cat.objects_up_to(bound)
    obj_ids = [cat.obj_label(x) for x in objs]
    if len(set(obj_ids)) != len(obj_ids):
        raise MalformedInputError("object labels collide in probe fragment")
    by_id = dict(zip(obj_ids, objs))
    morphisms: dict[str, tuple[str, str]] = {}
    values: dict[str, object] = {}
    hom_ids: dict[tuple[str, str], list[str]] = {}
    for a_id, a in zip(obj_ids, objs):
        for b_id, b in zip(obj_ids, objs):
            ids_here: list[str] = []
            for f in cat.hom(a, b):
                fid = cat.mor_label(f)
                if fid in morphisms:
                    raise MalformedInputError(f"morphism label collides: {fid}")
                morphisms[fid] = (a_id, b_id)
                values[fid] = f
                ids_here.append(fid)
            hom_ids[(a_id, b_id)] = ids_here
    identities: dict[str, str] = {}
    for x_id, x in zip(obj_ids, objs):
        ident = cat.identity(x)
        match = None
        for fid in hom_ids[(x_id, x_id)]:
            if cat.eq_mor(values[fid], ident):
                match = fid
                break
        if match is None:
            raise MalformedInputError(f"identity of {x_id} missing from hom set")
        identities[x_id] = match
    composition: dict[tuple[str, str], str] = {}
    external: set[tuple[str, str]] = set()
    for f_id, (fa, fb) in morphisms.items():
        for g_id, (ga, gb) in morphisms.items():
            if fb != ga:
                continue
            h = cat.compose(values[f_id], values[g_id])
            match = None
            for hid in hom_ids[(fa, gb)]:
                if cat.eq_mor(values[hid], h):
                    match = hid
                    break
            if match is None:
                external.add((f_id, g_id))
            else:
                composition[(f_id, g_id)] = match
    return FiniteCategory(
        tuple(obj_ids),
        morphisms,
        identities,
        composition,
        frozenset(external),
        name=f"{cat.name}<= {bound}",
    )

"""Ambient categories: the image of a built-in C-system plus a finite patch.

A patch adds finitely many objects, morphisms and composition entries on top
of the image subcategory.  Patch files reference image cells through their
labels, e.g. ``M(2)`` for an object and ``M(u(2->1))`` for an arrow.  Every
composable pair that involves a patched arrow and is not an identity
absorption must be listed explicitly; a missing entry is malformed input,
because without it the ambient is not a category.

``identify_objects`` merges image objects, deliberately making the ambient
functor non-injective.  It exists to exercise the injectivity gate and is
only supported over the ``unit`` carrier, whose singleton hom-sets keep the
quotient a category.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .catkernel import ComputableCategory, FunctorData
from .csystem import CSystem
from .report import MalformedInputError


@dataclass(frozen=True)
class AmbientPatch:
    objects: tuple[tuple[str, int], ...] = ()
    morphisms: tuple[tuple[str, str, str], ...] = ()  # (id, dom label, cod label)
    composition: tuple[tuple[str, str, str], ...] = ()
    identify_objects: tuple[tuple[str, str], ...] = ()

    @staticmethod
    def from_json(data: dict) -> "AmbientPatch":
        try:
            objects = tuple(
                (str(o["id"]), int(o.get("grade", 1))) for o in data.get("objects", [])
            )
            morphisms = tuple(
                (str(m["id"]), str(m["dom"]), str(m["cod"]))
                for m in data.get("morphisms", [])
            )
            composition = tuple(
                (str(f), str(g), str(h)) for f, g, h in data.get("composition", [])
            )
            identify = tuple(
                (str(a), str(b)) for a, b in data.get("identify_objects", [])
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedInputError(f"bad ambient patch: {exc}") from exc
        ids = [o for o, _ in objects]
        if len(set(ids)) != len(ids):
            raise MalformedInputError("duplicate patch object ids")
        mids = [m for m, _, _ in morphisms]
        if len(set(mids)) != len(mids):
            raise MalformedInputError("duplicate patch morphism ids")
        return AmbientPatch(objects, morphisms, composition, identify)

    def to_json(self) -> dict:
        return {
            "objects": [{"id": o, "grade": g} for o, g in self.objects],
            "morphisms": [
                {"id": m, "dom": d, "cod": c} for m, d, c in self.morphisms
            ],
            "composition": [list(t) for t in self.composition],
            "identify_objects": [list(t) for t in self.identify_objects],
        }


class AmbientCategory(ComputableCategory):
    """Image subcategory of a C-system extended by a finite patch.

    Objects are ("im", x) for base objects x (canonical representatives when
    identifications are present) and ("ext", id) for patch objects.  Patch
    references are resolved against the fragment of grade <= resolve_bound.
    """

    def __init__(self, cs: CSystem, patch: AmbientPatch, resolve_bound: int):
        self.cs = cs
        self.base = cs.carrier
        self.patch = patch
        self.resolve_bound = resolve_bound
        self.name = f"ambient[{cs.name}]"

        self._canon: dict = {}
        for a_lbl, b_lbl in patch.identify_objects:
            a = self._base_object_by_label(a_lbl)
            b = self._base_object_by_label(b_lbl)
            ra, rb = self._canon_base(a), self._canon_base(b)
            if ra != rb:
                keep, drop = sorted((ra, rb), key=self.base.obj_label)
                self._canon[drop] = keep

        self._ext_grade: dict[str, int] = dict(patch.objects)
        self._obj_by_label: dict[str, object] = {}
        for x in self.base.objects_up_to(resolve_bound):
            self._obj_by_label[f"M({self.base.obj_label(x)})"] = ("im", self._canon_base(x))
        for oid in self._ext_grade:
            if oid in self._obj_by_label:
                raise MalformedInputError(f"patch object id collides with image: {oid}")
            self._obj_by_label[oid] = ("ext", oid)

        self._mor_by_label: dict[str, object] = {}
        for x in self.base.objects_up_to(resolve_bound):
            for y in self.base.objects_up_to(resolve_bound):
                for f in self.base.hom(x, y):
                    self._mor_by_label[f"M({self.base.mor_label(f)})"] = ("im", f)

        self._ext_mor: dict[str, tuple[object, object]] = {}
        for mid, dom_lbl, cod_lbl in patch.morphisms:
            if mid in self._mor_by_label:
                raise MalformedInputError(f"patch morphism id collides: {mid}")
            self._ext_mor[mid] = (
                self._object_by_label(dom_lbl),
                self._object_by_label(cod_lbl),
            )
            self._mor_by_label[mid] = ("ext", mid)
        for oid in self._ext_grade:
            self._mor_by_label[f"id[{oid}]"] = ("extid", oid)

        self._comp: dict[tuple[str, str], object] = {}
        for f_lbl, g_lbl, h_lbl in patch.composition:
            f = self._morphism_by_label(f_lbl)
            g = self._morphism_by_label(g_lbl)
            h = self._morphism_by_label(h_lbl)
            if self.cod(f) != self.dom(g):
                raise MalformedInputError(f"composition entry ({f_lbl},{g_lbl}) not composable")
            if self.dom(h) != self.dom(f) or self.cod(h) != self.cod(g):
                raise MalformedInputError(f"composition entry ({f_lbl},{g_lbl})->{h_lbl} endpoints")
            self._comp[(f_lbl, g_lbl)] = h

    # -- label resolution ---------------------------------------------------

    def _base_object_by_label(self, lbl: str):
        for x in self.base.objects_up_to(self.resolve_bound):
            if f"M({self.base.obj_label(x)})" == lbl:
                return x
        raise MalformedInputError(f"unknown image object label: {lbl}")

    def _canon_base(self, x):
        while x in self._canon:
            x = self._canon[x]
        return x

    def _object_by_label(self, lbl: str):
        if lbl not in self._obj_by_label:
            raise MalformedInputError(f"unknown object label: {lbl}")
        return self._obj_by_label[lbl]

    def _morphism_by_label(self, lbl: str):
        if lbl not in self._mor_by_label:
            raise MalformedInputError(f"unknown morphism label: {lbl}")
        return self._mor_by_label[lbl]

    # -- carrier interface ---------------------------------------------------

    def grade(self, x) -> int:
        if x[0] == "im":
            return self.base.grade(x[1])
        return self._ext_grade[x[1]]

    def objects_up_to(self, bound: int) -> list:
        image = []
        seen = set()
        for x in self.base.objects_up_to(bound):
            cx = self._canon_base(x)
            if cx not in seen and self.base.grade(cx) <= bound:
                seen.add(cx)
                image.append(("im", cx))
        ext = [
            ("ext", oid)
            for oid, g in sorted(self._ext_grade.items())
            if g <= bound
        ]
        return image + ext

    def hom(self, a, b) -> list:
        out: list = []
        if a[0] == "im" and b[0] == "im":
            out.extend(("im", f) for f in self.base.hom(a[1], b[1]))
        if a[0] == "ext" and b[0] == "ext" and a[1] == b[1]:
            out.append(("extid", a[1]))
        for mid in sorted(self._ext_mor):
            d, c = self._ext_mor[mid]
            if d == a and c == b:
                out.append(("ext", mid))
        return out

    def identity(self, x):
        if x[0] == "im":
            return ("im", self.base.identity(x[1]))
        return ("extid", x[1])

    def dom(self, f):
        if f[0] == "im":
            return ("im", self._canon_base(self.base.dom(f[1])))
        if f[0] == "extid":
            return ("ext", f[1])
        return self._ext_mor[f[1]][0]

    def cod(self, f):
        if f[0] == "im":
            return ("im", self._canon_base(self.base.cod(f[1])))
        if f[0] == "extid":
            return ("ext", f[1])
        return self._ext_mor[f[1]][1]

    def _is_identity(self, f) -> bool:
        if f[0] == "extid":
            return True
        if f[0] == "im":
            return f == self.identity(self.dom(f))
        return False

    def compose(self, f, g):
        if self.cod(f) != self.dom(g):
            raise MalformedInputError(
                f"not composable: {self.mor_label(f)};{self.mor_label(g)}"
            )
        if self._is_identity(f):
            return g
        if self._is_identity(g):
            return f
        if f[0] == "im" and g[0] == "im" and not self._canon:
            return ("im", self.base.compose(f[1], g[1]))
        key = (self.mor_label(f), self.mor_label(g))
        if key in self._comp:
            return self._comp[key]
        if f[0] == "im" and g[0] == "im":
            # with identifications the base composite is still the answer for
            # singleton hom-sets; pick the unique arrow between the endpoints
            arrows = [
                h for h in self.hom(self.dom(f), self.cod(g)) if h[0] == "im"
            ]
            if len(arrows) == 1:
                return arrows[0]
        raise MalformedInputError(
            f"ambient composite unspecified: ({self.mor_label(f)},{self.mor_label(g)})"
        )

    def obj_label(self, x) -> str:
        if x[0] == "im":
            return f"M({self.base.obj_label(x[1])})"
        return x[1]

    def mor_label(self, f) -> str:
        if f[0] == "im":
            return f"M({self.base.mor_label(f[1])})"
        if f[0] == "extid":
            return f"id[{f[1]}]"
        return f[1]


def corestriction(cs: CSystem, ambient: AmbientCategory, name: str = "M") -> FunctorData:
    """The tagging functor from the carrier of cs into the ambient category."""

    def on_obj(x):
        return ("im", ambient._canon_base(x))

    def on_mor(f):
        if not ambient._canon:
            return ("im", f)
        a = ambient._canon_base(cs.carrier.dom(f))
        b = ambient._canon_base(cs.carrier.cod(f))
        arrows = cs.carrier.hom(a, b)
        if len(arrows) != 1:
            raise MalformedInputError(
                "identify_objects is only supported over singleton hom-sets"
            )
        return ("im", arrows[0])

    return FunctorData(
        source=cs.carrier, target=ambient, obj_map=on_obj, mor_map=on_mor, name=name
    )

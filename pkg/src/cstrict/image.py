"""Image of a C-system under an injective functor into an ambient category.

The image carrier represents objects and arrows of the subcategory on the
functor's images by their tagged preimages, so the transported structure is
computed in the source and only renamed.  The embedding of the image into
the ambient category applies the original functor to the tags.
"""

from __future__ import annotations

from dataclasses import dataclass

from .catkernel import ComputableCategory, FunctorData
from .csystem import CSystem, CSystemHom
from .report import Report


def check_injective_on_morphisms(M: FunctorData, bound: int) -> Report:
    """Pairwise collision search over the graded fragment."""
    rep = Report(f"injective[{M.name}]")
    src, tgt = M.source, M.target
    objs = src.objects_up_to(bound)
    images = [(x, M.on_obj(x)) for x in objs]
    ok = True
    for k, (x, mx) in enumerate(images):
        for y, my in images[k + 1 :]:
            if tgt.eq_obj(mx, my):
                ok = False
                rep.add(
                    "objects",
                    False,
                    f"{src.obj_label(x)} and {src.obj_label(y)} collide",
                )
    if ok:
        rep.add("objects", True)
    arrows = []
    for a in objs:
        for b in objs:
            for f in src.hom(a, b):
                arrows.append((f, M.on_mor(f)))
    ok = True
    for k, (f, mf) in enumerate(arrows):
        for g, mg in arrows[k + 1 :]:
            if tgt.eq_mor(mf, mg):
                ok = False
                rep.add(
                    "morphisms",
                    False,
                    f"{src.mor_label(f)} and {src.mor_label(g)} collide",
                )
    if ok:
        rep.add("morphisms", True)
    rep.notes["objects"] = len(objs)
    rep.notes["morphisms"] = len(arrows)
    return rep


class ImageCategory(ComputableCategory):
    """Subcategory on the images, carried by tagged preimages."""

    def __init__(self, cs: CSystem):
        self.cs = cs
        self.base = cs.carrier
        self.name = f"image[{cs.name}]"

    def grade(self, x) -> int:
        return self.base.grade(x[1])

    def objects_up_to(self, bound: int) -> list:
        return [("im", x) for x in self.base.objects_up_to(bound)]

    def hom(self, a, b) -> list:
        return [("im", f) for f in self.base.hom(a[1], b[1])]

    def identity(self, x):
        return ("im", self.base.identity(x[1]))

    def compose(self, f, g):
        return ("im", self.base.compose(f[1], g[1]))

    def dom(self, f):
        return ("im", self.base.dom(f[1]))

    def cod(self, f):
        return ("im", self.base.cod(f[1]))

    def obj_label(self, x) -> str:
        return f"M({self.base.obj_label(x[1])})"

    def mor_label(self, f) -> str:
        return f"M({self.base.mor_label(f[1])})"


def image_csystem(cs: CSystem, M: FunctorData) -> CSystem:
    """Transport the structure of cs onto the image carrier.

    Assumes the injectivity and finality gates have been checked by the
    caller; grade, father, base change and sections are all computed in the
    source and retagged.
    """
    car = ImageCategory(cs)
    return CSystem(
        name=f"image[{cs.name}]",
        carrier=car,
        pt=("im", cs.pt),
        ft_map=lambda x: ("im", cs.ft(x[1])),
        proj=lambda x: ("im", cs.p(x[1])),
        star_map=lambda f, X: ("im", cs.star(f[1], X[1])),
        q_map=lambda f, X: ("im", cs.q(f[1], X[1])),
        section_map=lambda f: ("im", cs.s(f[1])),
    )


def inclusion_functor(image_cs: CSystem, M: FunctorData) -> FunctorData:
    """The embedding of the image carrier into the ambient category."""
    return FunctorData(
        source=image_cs.carrier,
        target=M.target,
        obj_map=lambda x: M.on_obj(x[1]),
        mor_map=lambda f: M.on_mor(f[1]),
        name="i",
    )


def restricted_hom(cs: CSystem, M: FunctorData, image_cs: CSystem) -> CSystemHom:
    """The original functor with its target cut down to the image."""
    functor = FunctorData(
        source=cs.carrier,
        target=image_cs.carrier,
        obj_map=lambda x: ("im", x),
        mor_map=lambda f: ("im", f),
        name=f"{M.name}-restricted",
    )
    return CSystemHom(source=cs, target=image_cs, functor=functor, name=f"{M.name}|image")

"""C-systems: graded carriers with a terminal point, fathers, projections
and strictly functorial base change.

The structure record keeps the operations as callables so that carriers with
infinitely many objects stay lazy; validators quantify over the fragment of
objects whose grade (the length function) is below a bound.

Built-in carriers:

* ``unit``: objects are the naturals, every hom-set is a singleton.  The
  degenerate case where everything is forced.
* ``onetype``: objects are the naturals, an arrow m -> n is an n-tuple over
  {1..m} (a substitution built from variables only).  Composition is tuple
  reindexing, so |Hom(2,3)| = 8.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, replace
from typing import Callable

from .catkernel import (
    ComputableCategory,
    FunctorData,
    probe_fragment,
    validate_finite_category,
    validate_functor,
)
from .report import MalformedInputError, Report


@dataclass(frozen=True)
class CSystem:
    name: str
    carrier: ComputableCategory
    pt: object
    ft_map: Callable
    proj: Callable
    star_map: Callable
    q_map: Callable
    section_map: Callable

    def l(self, x) -> int:
        return self.carrier.grade(x)

    def ft(self, x):
        return self.ft_map(x)

    def p(self, x):
        """Canonical projection X -> ft(X); the identity at the point."""
        return self.proj(x)

    def star(self, f, X):
        """Base change of X along f: Y -> ft(X); defined for l(X) > 0."""
        return self.star_map(f, X)

    def q(self, f, X):
        """The chosen arrow star(f, X) -> X over f."""
        return self.q_map(f, X)

    def s(self, f):
        """Section induced by f: Y -> X with l(X) > 0."""
        return self.section_map(f)


@dataclass(frozen=True)
class CSystemHom:
    source: CSystem
    target: CSystem
    functor: FunctorData
    name: str = "h"


# ---------------------------------------------------------------------------
# built-in carriers


class UnitCategory(ComputableCategory):
    name = "unit"

    def grade(self, x) -> int:
        return x

    def objects_up_to(self, bound: int) -> list:
        return list(range(0, bound + 1))

    def hom(self, a, b) -> list:
        return [("u", a, b)]

    def identity(self, x):
        return ("u", x, x)

    def compose(self, f, g):
        assert f[2] == g[1]
        return ("u", f[1], g[2])

    def dom(self, f):
        return f[1]

    def cod(self, f):
        return f[2]

    def obj_label(self, x) -> str:
        return str(x)

    def mor_label(self, f) -> str:
        return f"u({f[1]}->{f[2]})"


class OneTypeCategory(ComputableCategory):
    """Substitutions between contexts of a single basic type."""

    name = "onetype"

    def grade(self, x) -> int:
        return x

    def objects_up_to(self, bound: int) -> list:
        return list(range(0, bound + 1))

    def hom(self, a, b) -> list:
        return [("t", a, b, t) for t in itertools.product(range(1, a + 1), repeat=b)]

    def identity(self, x):
        return ("t", x, x, tuple(range(1, x + 1)))

    def compose(self, f, g):
        _, m, n, tf = f
        _, n2, k, tg = g
        assert n == n2
        return ("t", m, k, tuple(tf[j - 1] for j in tg))

    def dom(self, f):
        return f[1]

    def cod(self, f):
        return f[2]

    def obj_label(self, x) -> str:
        return str(x)

    def mor_label(self, f) -> str:
        return f"t({f[1]}->{f[2]}:{','.join(map(str, f[3]))})"


def _unit_csystem() -> CSystem:
    car = UnitCategory()

    def ft(n):
        return max(n - 1, 0)

    return CSystem(
        name="unit",
        carrier=car,
        pt=0,
        ft_map=ft,
        proj=lambda n: ("u", n, ft(n)),
        star_map=lambda f, X: f[1] + 1,
        q_map=lambda f, X: ("u", f[1] + 1, X),
        section_map=lambda f: ("u", f[1], f[1] + 1),
    )


def _onetype_csystem() -> CSystem:
    car = OneTypeCategory()

    def ft(n):
        return max(n - 1, 0)

    def proj(n):
        if n == 0:
            return car.identity(0)
        return ("t", n, n - 1, tuple(range(1, n)))

    def star(f, X):
        return f[1] + 1

    def q(f, X):
        _, m, n1, t = f
        return ("t", m + 1, X, t + (m + 1,))

    def section(f):
        _, m, n, t = f
        if n == 0:
            raise MalformedInputError("section needs a target of positive length")
        return ("t", m, m + 1, tuple(range(1, m + 1)) + (t[n - 1],))

    return CSystem(
        name="onetype",
        carrier=car,
        pt=0,
        ft_map=ft,
        proj=proj,
        star_map=star,
        q_map=q,
        section_map=section,
    )


def builtin_csystem(name: str) -> CSystem:
    if name == "unit":
        return _unit_csystem()
    if name == "onetype":
        return _onetype_csystem()
    raise MalformedInputError(f"unknown builtin C-system: {name}")


# ---------------------------------------------------------------------------
# validators


def validate_c0(cs: CSystem, bound: int) -> Report:
    """The seven core conditions, quantified over the graded fragment."""
    rep = Report(f"c0-axioms[{cs.name}]")
    car = cs.carrier
    frag_rep = validate_finite_category(probe_fragment(car, bound))
    rep.add("carrier-pre-category", frag_rep.passed, frag_rep.first_witness())
    if not frag_rep.passed:
        return rep
    objs = car.objects_up_to(bound)
    lab = car.obj_label

    ok = True
    for x in objs:
        if (cs.l(x) == 0) != car.eq_obj(x, cs.pt):
            ok = False
            rep.add("grade-zero-iff-point", False, lab(x))
    if ok:
        rep.add("grade-zero-iff-point", True)

    ok = True
    for x in objs:
        if cs.l(x) > 0 and cs.l(cs.ft(x)) != cs.l(x) - 1:
            ok = False
            rep.add("father-drops-grade", False, lab(x))
    if ok:
        rep.add("father-drops-grade", True)

    rep.add(
        "father-of-point",
        car.eq_obj(cs.ft(cs.pt), cs.pt),
        lab(cs.ft(cs.pt)),
    )

    ok = True
    for x in objs:
        n = len(car.hom(x, cs.pt))
        if n != 1:
            ok = False
            rep.add("point-final", False, f"{lab(x)}: {n} arrows to the point")
    if ok:
        rep.add("point-final", True)

    ok = True
    for x in objs:
        try:
            px = cs.p(x)
            good = car.eq_obj(car.dom(px), x) and car.eq_obj(car.cod(px), cs.ft(x))
        except Exception as exc:  # ill-typed structure maps count as violations
            good = False
            rep.add("projection-endpoints", False, f"{lab(x)} raised {type(exc).__name__}")
        else:
            if not good:
                rep.add("projection-endpoints", False, lab(x))
        if not good:
            ok = False
    if not car.eq_mor(cs.p(cs.pt), car.identity(cs.pt)):
        ok = False
        rep.add("projection-endpoints", False, "projection at the point is not the identity")
    if ok:
        rep.add("projection-endpoints", True)

    positive = [x for x in objs if cs.l(x) > 0]

    ok = True
    for X in positive:
        for Y in objs:
            for f in car.hom(Y, cs.ft(X)):
                try:
                    Xf = cs.star(f, X)
                    qf = cs.q(f, X)
                    if cs.l(Xf) != cs.l(Y) + 1 or not car.eq_obj(cs.ft(Xf), Y):
                        ok = False
                        rep.add(
                            "base-change-endpoints",
                            False,
                            f"star({car.mor_label(f)},{lab(X)})",
                        )
                        continue
                    if not (car.eq_obj(car.dom(qf), Xf) and car.eq_obj(car.cod(qf), X)):
                        ok = False
                        rep.add("base-change-endpoints", False, f"q({car.mor_label(f)},{lab(X)})")
                        continue
                    lhs = car.compose(qf, cs.p(X))
                    rhs = car.compose(cs.p(Xf), f)
                except Exception as exc:
                    ok = False
                    rep.add(
                        "base-change-endpoints",
                        False,
                        f"star({car.mor_label(f)},{lab(X)}) raised {type(exc).__name__}",
                    )
                    continue
                if not car.eq_mor(lhs, rhs):
                    ok = False
                    rep.add(
                        "base-change-square",
                        False,
                        f"q({car.mor_label(f)},{lab(X)})",
                    )
    if ok:
        rep.add("base-change-square", True)

    ok = True
    for X in positive:
        try:
            ident = car.identity(cs.ft(X))
            if not car.eq_obj(cs.star(ident, X), X):
                ok = False
                rep.add("identity-base-change", False, lab(X))
            elif not car.eq_mor(cs.q(ident, X), car.identity(X)):
                ok = False
                rep.add("identity-base-change", False, f"q(id,{lab(X)})")
        except Exception as exc:
            ok = False
            rep.add("identity-base-change", False, f"{lab(X)} raised {type(exc).__name__}")
    if ok:
        rep.add("identity-base-change", True)

    ok = True
    for X in positive:
        for Y in objs:
            for f in car.hom(Y, cs.ft(X)):
                try:
                    Xf = cs.star(f, X)
                except Exception as exc:
                    ok = False
                    rep.add(
                        "composed-base-change",
                        False,
                        f"star({car.mor_label(f)},{lab(X)}) raised {type(exc).__name__}",
                    )
                    continue
                for Z in objs:
                    for g in car.hom(Z, Y):
                        try:
                            gf = car.compose(g, f)
                            if not car.eq_obj(cs.star(gf, X), cs.star(g, Xf)):
                                ok = False
                                rep.add(
                                    "composed-base-change",
                                    False,
                                    f"star({car.mor_label(g)};{car.mor_label(f)},{lab(X)})",
                                )
                                continue
                            lhs = cs.q(gf, X)
                            rhs = car.compose(cs.q(g, Xf), cs.q(f, X))
                        except Exception as exc:
                            ok = False
                            rep.add(
                                "composed-base-change",
                                False,
                                f"q({car.mor_label(g)};{car.mor_label(f)},{lab(X)}) "
                                f"raised {type(exc).__name__}",
                            )
                            continue
                        if not car.eq_mor(lhs, rhs):
                            ok = False
                            rep.add(
                                "composed-base-change",
                                False,
                                f"q({car.mor_label(g)};{car.mor_label(f)},{lab(X)})",
                            )
    if ok:
        rep.add("composed-base-change", True)

    rep.notes["objects"] = len(objs)
    return rep


def validate_csystem(cs: CSystem, bound: int) -> Report:
    """Core conditions plus the four section conditions on the fragment."""
    rep = validate_c0(cs, bound)
    rep.name = f"csystem-axioms[{cs.name}]"
    if not rep.passed:
        return rep
    car = cs.carrier
    objs = car.objects_up_to(bound)
    lab = car.obj_label
    positive = [x for x in objs if cs.l(x) > 0]

    ok_end = ok_sec = ok_fac = True
    for X in positive:
        for Y in objs:
            for f in car.hom(Y, X):
                try:
                    sf = cs.s(f)
                    ftf = car.compose(f, cs.p(X))
                    Xft = cs.star(ftf, X)
                    if not (car.eq_obj(car.dom(sf), Y) and car.eq_obj(car.cod(sf), Xft)):
                        ok_end = False
                        rep.add("section-endpoints", False, f"s({car.mor_label(f)})")
                        continue
                    if not car.eq_mor(car.compose(sf, cs.p(Xft)), car.identity(Y)):
                        ok_sec = False
                        rep.add("section-splits-projection", False, f"s({car.mor_label(f)})")
                    if not car.eq_mor(car.compose(sf, cs.q(ftf, X)), f):
                        ok_fac = False
                        rep.add("section-factorization", False, f"s({car.mor_label(f)})")
                except Exception as exc:
                    ok_end = False
                    rep.add(
                        "section-endpoints",
                        False,
                        f"s({car.mor_label(f)}) raised {type(exc).__name__}",
                    )
    if ok_end:
        rep.add("section-endpoints", True)
    if ok_sec:
        rep.add("section-splits-projection", True)
    if ok_fac:
        rep.add("section-factorization", True)

    # sections only depend on the arrow through any base-change presentation
    # of the target that is visible in the fragment
    ok = True
    for X in positive:
        for U in positive:
            for g in car.hom(cs.ft(X), cs.ft(U)):
                try:
                    if not car.eq_obj(cs.star(g, U), X):
                        continue
                    qgU = cs.q(g, U)
                    for Y in objs:
                        for f in car.hom(Y, X):
                            if not car.eq_mor(cs.s(f), cs.s(car.compose(f, qgU))):
                                ok = False
                                rep.add(
                                    "section-base-change-invariance",
                                    False,
                                    f"s({car.mor_label(f)}) via g={car.mor_label(g)} U={lab(U)}",
                                )
                except Exception as exc:
                    ok = False
                    rep.add(
                        "section-base-change-invariance",
                        False,
                        f"g={car.mor_label(g)} U={lab(U)} raised {type(exc).__name__}",
                    )
    if ok:
        rep.add("section-base-change-invariance", True)
    rep.notes["presentations"] = "fragment"
    return rep


def validate_homomorphism(h: CSystemHom, bound: int) -> Report:
    """Functor laws plus preservation of grade, point, father, projections,
    base change and sections on the fragment."""
    rep = Report(f"csystem-hom[{h.name}]")
    src, tgt = h.source, h.target
    scar, tcar = src.carrier, tgt.carrier
    F = h.functor

    fun_rep = validate_functor(F, bound)
    rep.add("underlying-functor", fun_rep.passed, fun_rep.first_witness())
    if not fun_rep.passed:
        return rep

    objs = scar.objects_up_to(bound)
    lab = scar.obj_label

    rep.add("preserves-point", tcar.eq_obj(F.on_obj(src.pt), tgt.pt))
    ok_l = ok_ft = ok_p = True
    for x in objs:
        if tgt.l(F.on_obj(x)) != src.l(x):
            ok_l = False
            rep.add("preserves-grade", False, lab(x))
        if not tcar.eq_obj(F.on_obj(src.ft(x)), tgt.ft(F.on_obj(x))):
            ok_ft = False
            rep.add("preserves-father", False, lab(x))
        if not tcar.eq_mor(F.on_mor(src.p(x)), tgt.p(F.on_obj(x))):
            ok_p = False
            rep.add("preserves-projection", False, lab(x))
    if ok_l:
        rep.add("preserves-grade", True)
    if ok_ft:
        rep.add("preserves-father", True)
    if ok_p:
        rep.add("preserves-projection", True)

    positive = [x for x in objs if src.l(x) > 0]
    ok_star = ok_q = True
    for X in positive:
        for Y in objs:
            for f in scar.hom(Y, src.ft(X)):
                try:
                    img_star = F.on_obj(src.star(f, X))
                    tgt_star = tgt.star(F.on_mor(f), F.on_obj(X))
                    if not tcar.eq_obj(img_star, tgt_star):
                        ok_star = False
                        rep.add(
                            "preserves-base-change",
                            False,
                            f"star({scar.mor_label(f)},{lab(X)})",
                        )
                        continue
                    if not tcar.eq_mor(
                        F.on_mor(src.q(f, X)), tgt.q(F.on_mor(f), F.on_obj(X))
                    ):
                        ok_q = False
                        rep.add(
                            "preserves-base-change-arrow",
                            False,
                            f"q({scar.mor_label(f)},{lab(X)})",
                        )
                except Exception as exc:
                    ok_star = False
                    rep.add(
                        "preserves-base-change",
                        False,
                        f"star({scar.mor_label(f)},{lab(X)}) raised {type(exc).__name__}",
                    )
    if ok_star:
        rep.add("preserves-base-change", True)
    if ok_q:
        rep.add("preserves-base-change-arrow", True)

    ok_s = True
    for X in positive:
        for Y in objs:
            for f in scar.hom(Y, X):
                try:
                    preserved = tcar.eq_mor(F.on_mor(src.s(f)), tgt.s(F.on_mor(f)))
                except Exception as exc:
                    preserved = False
                    rep.add(
                        "preserves-sections",
                        False,
                        f"s({scar.mor_label(f)}) raised {type(exc).__name__}",
                    )
                else:
                    if not preserved:
                        rep.add("preserves-sections", False, f"s({scar.mor_label(f)})")
                if not preserved:
                    ok_s = False
    if ok_s:
        rep.add("preserves-sections", True)
    rep.notes["objects"] = len(objs)
    return rep


def mutate(cs: CSystem, **kwargs) -> CSystem:
    """Replace structure fields; used to produce deliberately broken systems."""
    return replace(cs, **kwargs)

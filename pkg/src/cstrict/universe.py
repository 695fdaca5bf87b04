"""Universes in presheaves and the C-systems they generate.

A universe is a presheaf map proj : terms -> types together with a chosen
terminal presheaf.  Its generated C-system has as objects the finite chains
obtained from the point by repeatedly pulling proj back along a classifying
map; because the chosen pullbacks are literal sets of ordered pairs, the
C-system laws of the generated structure hold on the nose.

Hom-sets between generated objects are enumerated through representability
certificates: a certificate (x0, e0) on an object A asserts that arrows
c -> x0 in the base correspond bijectively to elements of A at c via
restriction of e0.  Equality of generated objects and arrows is decided
extensionally on the fragment of base objects up to a probe bound.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

from .catkernel import ComputableCategory, FunctorData
from .csystem import CSystem, CSystemHom
from .kan import LanUniverse, preservation_report
from .presheaf import (
    NaturalIso,
    Presheaf,
    PresheafMorphism,
    canonical_pullback,
    compose_morphisms,
    identity_morphism,
    pointwise_iso_check,
    terminal_presheaf,
    yoneda,
)
from .report import CertificationError, MalformedInputError, Report, canon_key


# ---------------------------------------------------------------------------
# universes


class UniverseCategory:
    """A presheaf universe over a carrier.

    ``spine`` is an optional enumeration strategy: a callable taking a grade
    bound and returning the generated objects of the canonical chains up to
    that grade.  Without it the generated carrier cannot enumerate objects
    (hom-sets and structure maps still work).  ``eq_bound`` is the probe
    bound at which extensional equality of generated cells is decided.
    """

    def __init__(
        self,
        base: ComputableCategory,
        types: Presheaf,
        terms: Presheaf,
        proj: PresheafMorphism,
        terminal: Presheaf,
        name: str = "universe",
        eq_bound: int = 3,
    ):
        self.base = base
        self.types = types
        self.terms = terms
        self.proj = proj
        self.terminal = terminal
        self.name = name
        self.eq_bound = eq_bound
        self.spine = None
        self._root = None

    def root(self) -> "GeneratedObject":
        if self._root is None:
            cert = self.terminal.universal_element
            self._root = GeneratedObject(
                universe=self,
                parent=None,
                classifier=None,
                presheaf=self.terminal,
                cert=cert,
                label="pt",
                proj1=None,
                proj2=None,
            )
        return self._root


class GeneratedObject:
    """A chain of chosen-pullback extensions of the point.

    ``cert`` is the representability certificate (x0, e0), possibly None
    for intermediate objects produced by base change, which are compared
    but never asked for their hom-sets.
    """

    __slots__ = (
        "universe",
        "parent",
        "classifier",
        "presheaf",
        "cert",
        "cert_thunk",
        "label",
        "proj1",
        "proj2",
        "length",
        "_rep_tables",
    )

    def __init__(self, universe, parent, classifier, presheaf, cert, label, proj1, proj2):
        self.universe = universe
        self.parent = parent
        self.classifier = classifier
        self.presheaf = presheaf
        self.cert = cert
        self.cert_thunk = None
        self.label = label
        self.proj1 = proj1
        self.proj2 = proj2
        self.length = 0 if parent is None else parent.length + 1
        self._rep_tables: dict = {}

    def extend(self, classifier: PresheafMorphism, cert=None, label: str | None = None):
        """Pull the universe projection back along a classifying map."""
        u = self.universe
        if classifier.target is not u.types:
            raise MalformedInputError(
                f"classifier of {self.label} does not land in the types of {u.name}"
            )
        pb, pr1, pr2 = canonical_pullback(classifier, u.proj)
        lbl = label if label is not None else f"{self.label}+"
        pb.label = f"int[{lbl}]"
        return GeneratedObject(u, self, classifier, pb, cert, lbl, pr1, pr2)

    # -- representability ----------------------------------------------------

    def certificate(self):
        """The (x0, e0) witness, resolving a deferred computation if one
        was attached; None when the object is not representably certified."""
        if self.cert is None and self.cert_thunk is not None:
            thunk, self.cert_thunk = self.cert_thunk, None
            self.cert = thunk()
        return self.cert

    def rep_table(self, c) -> dict:
        """elem -> unique arrow c -> x0 inducing it; certifies injectivity."""
        if self.certificate() is None:
            raise CertificationError(f"{self.label} carries no representability witness")
        if c not in self._rep_tables:
            x0, e0 = self.cert
            base = self.universe.base
            table: dict = {}
            for f in base.hom(c, x0):
                value = self.presheaf.restrict(f, e0)
                if value in table:
                    raise CertificationError(
                        f"witness of {self.label} not injective at {base.obj_label(c)}"
                    )
                table[value] = f
            self._rep_tables[c] = table
        return self._rep_tables[c]

    def rep_arrow(self, c, elem):
        table = self.rep_table(c)
        if elem not in table:
            raise CertificationError(
                f"witness of {self.label} misses an element at "
                f"{self.universe.base.obj_label(c)}"
            )
        return table[elem]


@dataclass
class GenArrow:
    """Arrow between generated objects: a map of their element presheaves."""

    dom_obj: GeneratedObject
    cod_obj: GeneratedObject
    map: PresheafMorphism


class GeneratedCategory(ComputableCategory):
    """Carrier of the generated C-system of a universe."""

    def __init__(self, universe: UniverseCategory, eq_bound: int | None = None):
        self.u = universe
        self.eq_bound = universe.eq_bound if eq_bound is None else eq_bound
        self.name = f"generated[{universe.name}]"
        self._probes = None

    def probes(self) -> list:
        if self._probes is None:
            self._probes = list(self.u.base.objects_up_to(self.eq_bound))
        return self._probes

    def grade(self, A) -> int:
        return A.length

    def objects_up_to(self, bound: int) -> list:
        if self.u.spine is None:
            raise MalformedInputError(
                f"universe {self.u.name} has no enumeration strategy"
            )
        return [A for A in self.u.spine(bound) if A.length <= bound]

    def hom(self, A, B) -> list:
        cert = A.certificate()
        if cert is None:
            raise CertificationError(f"{A.label} carries no representability witness")
        x0, _ = cert
        return [GenArrow(A, B, self._induced(A, b, B)) for b in B.presheaf.at(x0)]

    def _induced(self, A: GeneratedObject, b, B: GeneratedObject) -> PresheafMorphism:
        def component(c, e, _b=b):
            return B.presheaf.restrict(A.rep_arrow(c, e), _b)

        return PresheafMorphism(A.presheaf, B.presheaf, component, label="induced")

    def identity(self, A):
        return GenArrow(A, A, identity_morphism(A.presheaf))

    def compose(self, f: GenArrow, g: GenArrow):
        if not self.eq_obj(f.cod_obj, g.dom_obj):
            raise MalformedInputError(
                f"generated arrows not composable: {f.map.label};{g.map.label}"
            )
        return GenArrow(f.dom_obj, g.cod_obj, compose_morphisms(f.map, g.map))

    def dom(self, f: GenArrow):
        return f.dom_obj

    def cod(self, f: GenArrow):
        return f.cod_obj

    def eq_obj(self, A, B) -> bool:
        if A is B:
            return True
        if A.length != B.length:
            return False
        return all(A.presheaf.at(c) == B.presheaf.at(c) for c in self.probes())

    def eq_mor(self, f: GenArrow, g: GenArrow) -> bool:
        if f is g:
            return True
        if not (self.eq_obj(f.dom_obj, g.dom_obj) and self.eq_obj(f.cod_obj, g.cod_obj)):
            return False
        for c in self.probes():
            for e in f.dom_obj.presheaf.at(c):
                if f.map.apply(c, e) != g.map.apply(c, e):
                    return False
        return True

    def obj_label(self, A) -> str:
        return A.label

    def mor_label(self, f: GenArrow) -> str:
        digest = hashlib.sha1()
        for c in self.probes():
            digest.update(self.u.base.obj_label(c).encode())
            for e in f.dom_obj.presheaf.at(c):
                digest.update(canon_key(e).encode())
                digest.update(b">")
                digest.update(canon_key(f.map.apply(c, e)).encode())
                digest.update(b";")
        return f"{f.dom_obj.label}=>{f.cod_obj.label}#{digest.hexdigest()[:12]}"


def generated_csystem(u: UniverseCategory, eq_bound: int | None = None) -> CSystem:
    """The C-system on chains of pullbacks of the universe projection.

    Base change composes the classifier, its chosen arrow reindexes the
    first pair component, and sections pair an element with the term its
    image selects; all laws hold by construction of the pair encoding.
    """
    car = GeneratedCategory(u, eq_bound)
    root = u.root()

    def ft(A: GeneratedObject):
        return A.parent if A.length > 0 else A

    def proj(A: GeneratedObject):
        if A.length == 0:
            return car.identity(A)
        return GenArrow(A, A.parent, A.proj1)

    def star(f: GenArrow, X: GeneratedObject):
        if X.length == 0:
            raise MalformedInputError("base change needs a positive-grade object")
        return f.dom_obj.extend(
            compose_morphisms(f.map, X.classifier), label=f"{X.label}^*"
        )

    def q(f: GenArrow, X: GeneratedObject):
        Xf = star(f, X)

        def component(c, pair):
            return (f.map.apply(c, pair[0]), pair[1])

        return GenArrow(
            Xf, X, PresheafMorphism(Xf.presheaf, X.presheaf, component, label="q")
        )

    def section(f: GenArrow):
        X = f.cod_obj
        if X.length == 0:
            raise MalformedInputError("sections need a positive-grade target")
        ftf = car.compose(f, proj(X))
        Xft = star(ftf, X)

        def component(c, e):
            return (e, f.map.apply(c, e)[1])

        return GenArrow(
            f.dom_obj,
            Xft,
            PresheafMorphism(f.dom_obj.presheaf, Xft.presheaf, component, label="s"),
        )

    return CSystem(
        name=f"generated[{u.name}]",
        carrier=car,
        pt=root,
        ft_map=ft,
        proj=proj,
        star_map=star,
        q_map=q,
        section_map=section,
    )


# ---------------------------------------------------------------------------
# the standard universe of a C-system


def standard_universe(cs: CSystem, eq_bound: int = 3) -> UniverseCategory:
    """Universe whose types at X are the objects one grade above X and whose
    terms are the sections of their projections.

    Type restriction is base change; term restriction sends a section s to
    the section induced by f then s.  The carrier's own equality must be
    plain value equality (true for all carriers in this package).
    """
    car = cs.carrier

    def types_at(X):
        g = cs.l(X) + 1
        return tuple(
            y
            for y in car.objects_up_to(g)
            if car.grade(y) == g and car.eq_obj(cs.ft(y), X)
        )

    types = Presheaf(car, types_at, lambda f, y: cs.star(f, y), label=f"types[{cs.name}]")

    def terms_at(X):
        out = []
        ident = car.identity(X)
        for y in types_at(X):
            for s0 in car.hom(X, y):
                if car.eq_mor(car.compose(s0, cs.p(y)), ident):
                    out.append(s0)
        return tuple(out)

    terms = Presheaf(
        car, terms_at, lambda f, s0: cs.s(car.compose(f, s0)), label=f"terms[{cs.name}]"
    )
    proj = PresheafMorphism(terms, types, lambda X, s0: car.cod(s0), label="type-of")
    terminal = terminal_presheaf(car)
    terminal.universal_element = (cs.pt, "*")

    u = UniverseCategory(
        car, types, terms, proj, terminal, name=f"std[{cs.name}]", eq_bound=eq_bound
    )
    u.spine = _standard_spine(cs, u)
    return u


def _standard_spine(cs: CSystem, u: UniverseCategory):
    """Chain builder: the canonical generated object of each carrier object.

    chain(x) extends chain(ft x) along the classifier that sends an element
    represented by an arrow f to the base change of x along f; its
    certificate element restricts the parent's certificate along the
    projection of x and pairs it with the section of the identity.
    """
    car = cs.carrier
    cache: dict = {}

    def chain(x) -> GeneratedObject:
        if x in cache:
            return cache[x]
        if cs.l(x) == 0:
            out = u.root()
        else:
            parent = chain(cs.ft(x))

            def classify(c, e, _parent=parent, _x=x):
                return cs.star(_parent.rep_arrow(c, e), _x)

            classifier = PresheafMorphism(
                parent.presheaf,
                u.types,
                classify,
                label=f"classify[{car.obj_label(x)}]",
            )
            _, e0_parent = parent.cert
            cert_elem = (
                parent.presheaf.restrict(cs.p(x), e0_parent),
                cs.s(car.identity(x)),
            )
            out = parent.extend(
                classifier, cert=(x, cert_elem), label=f"gen[{car.obj_label(x)}]"
            )
        cache[x] = out
        return out

    def spine(bound: int) -> list:
        return [chain(x) for x in car.objects_up_to(bound)]

    spine.chain = chain
    return spine


# ---------------------------------------------------------------------------
# comparison between a C-system and its generated standard form


def psi_chain(cs: CSystem, u: UniverseCategory, bound: int, yoneda_cache=None):
    """Homomorphism into the generated system with its comparison family.

    Returns (hom, isos) where hom sends x to its canonical chain and isos
    maps each fragment object label to the certified natural isomorphism
    from the chain's elements to the arrows into x.  Raises
    CertificationError if a comparison fails to be bijective.
    """
    car = cs.carrier
    if u.spine is None or not hasattr(u.spine, "chain"):
        raise MalformedInputError("psi_chain needs the standard chain spine")
    chain = u.spine.chain
    gcs = generated_csystem(u)

    local_yoneda: dict = {}

    def yon(x) -> Presheaf:
        if yoneda_cache is not None:
            return yoneda_cache(x)
        if x not in local_yoneda:
            local_yoneda[x] = yoneda(car, x)
        return local_yoneda[x]

    thetas: dict = {}

    def theta(x) -> PresheafMorphism:
        """Arrows into x compared with elements of the canonical chain."""
        key = car.obj_label(x)
        if key in thetas:
            return thetas[key]
        A = chain(x)
        if cs.l(x) == 0:
            out = PresheafMorphism(
                yon(x), A.presheaf, lambda c, g: "*", label=f"theta[{key}]"
            )
        else:
            parent = chain(cs.ft(x))
            _, e0_parent = parent.cert
            px = cs.p(x)

            def component(c, g, _parent=parent, _e0=e0_parent, _px=px):
                return (
                    _parent.presheaf.restrict(car.compose(g, _px), _e0),
                    cs.s(g),
                )

            out = PresheafMorphism(yon(x), A.presheaf, component, label=f"theta[{key}]")
        thetas[key] = out
        return out

    isos: dict[str, NaturalIso] = {}
    for x in car.objects_up_to(bound):
        outcome = pointwise_iso_check(theta(x), bound)
        if isinstance(outcome, Report):
            raise CertificationError(
                f"chain comparison for {car.obj_label(x)} is not bijective: "
                f"{outcome.first_witness()}"
            )
        # the family runs from chain elements back to arrows
        isos[car.obj_label(x)] = NaturalIso(
            forward=outcome.inverse,
            inverse=outcome.forward,
            probe_bound=outcome.probe_bound,
            component_sizes=outcome.component_sizes,
        )

    def on_mor(f) -> GenArrow:
        A = chain(car.dom(f))
        Z = chain(car.cod(f))
        th = theta(car.cod(f))

        def component(c, e, _A=A, _th=th, _f=f):
            g = _A.rep_arrow(c, e)
            return _th.apply(c, car.compose(g, _f))

        return GenArrow(
            A, Z, PresheafMorphism(A.presheaf, Z.presheaf, component, label="chain-mor")
        )

    functor = FunctorData(
        source=car,
        target=gcs.carrier,
        obj_map=chain,
        mor_map=on_mor,
        name="to-generated",
    )
    hom = CSystemHom(source=cs, target=gcs, functor=functor, name="to-generated")
    return hom, isos


# ---------------------------------------------------------------------------
# transporting a universe along a left Kan extension


def lan_universe(
    phi: LanUniverse, u: UniverseCategory, eq_bound: int | None = None
) -> UniverseCategory:
    """Apply the extension to types, terms and the projection of a universe.

    The chosen terminal of the transported universe is the constant
    singleton presheaf on the extension's target; its universal element is
    the image of the source universe's point, which the finality gate has
    certified beforehand.
    """
    types2 = phi.extend(u.types)
    terms2 = phi.extend(u.terms)
    proj2 = phi.extend_morphism(u.proj)
    terminal2 = terminal_presheaf(phi.i.target)
    if u.terminal.universal_element is None:
        raise MalformedInputError("source universe has no terminal witness")
    pt_src, _ = u.terminal.universal_element
    terminal2.universal_element = (phi.i.on_obj(pt_src), "*")
    return UniverseCategory(
        phi.i.target,
        types2,
        terms2,
        proj2,
        terminal2,
        name=f"lan[{u.name}]",
        eq_bound=u.eq_bound if eq_bound is None else eq_bound,
    )


def validate_universe_morphism(
    phi: LanUniverse,
    u: UniverseCategory,
    u_prime: UniverseCategory,
    tests: list,
    probe_bound: int,
) -> Report:
    """The transported universe must literally be the extension of the
    source one, and the extension must preserve the terminal presheaf and
    the canonical squares of the given test classifiers."""
    rep = Report("universe-morphism")
    same = (
        u_prime.types is phi.extend(u.types)
        and u_prime.terms is phi.extend(u.terms)
    )
    rep.add(
        "transported-universe",
        same,
        None if same else "target universe is not the extension of the source one",
    )
    inner = preservation_report(phi.i, u.proj, tests, probe_bound, phi.truncation, phi=phi)
    for check in inner.checks:
        rep.checks.append(check)
    rep.notes.update(inner.notes)
    return rep


class LiftedHom:
    """Homomorphism of generated C-systems induced by extending a universe.

    ``hom`` maps the system generated by the source universe to the system
    generated by its extension; ``psi_hat(A)`` is the comparison from the
    value of A to the extension of A's elements, the map whose inverse
    transports structure back.  Both directions are certified lazily:
    a comparison that fails to biject raises CertificationError.
    """

    def __init__(self, phi: LanUniverse, u: UniverseCategory, u_prime: UniverseCategory,
                 source_csystem: CSystem | None = None):
        self.phi = phi
        self.u = u
        self.u_prime = u_prime
        self.source_csystem = (
            source_csystem if source_csystem is not None else generated_csystem(u)
        )
        self._h_obj: dict[int, GeneratedObject] = {}
        self._psi_hat: dict[int, PresheafMorphism] = {}
        self._kappa: dict = {}
        self._hat_inv: dict = {}

        if u.spine is None:
            raise MalformedInputError("source universe has no enumeration strategy")
        u_prime.spine = lambda bound: [self.on_obj(A) for A in u.spine(bound)]
        self.target_csystem = generated_csystem(u_prime)
        functor = FunctorData(
            source=self.source_csystem.carrier,
            target=self.target_csystem.carrier,
            obj_map=self.on_obj,
            mor_map=self.on_mor,
            name="lifted",
        )
        self.hom = CSystemHom(
            source=self.source_csystem,
            target=self.target_csystem,
            functor=functor,
            name="lifted",
        )

    # -- objects --------------------------------------------------------------

    def on_obj(self, A: GeneratedObject) -> GeneratedObject:
        # caches are id-keyed and store A itself, so a key can never be
        # recycled by a temporary object allocated at the same address
        if id(A) in self._h_obj:
            return self._h_obj[id(A)][1]
        if A.length == 0:
            out = self.u_prime.root()
            self._h_obj[id(A)] = (A, out)
            return out
        parent_out = self.on_obj(A.parent)
        classifier = compose_morphisms(
            self.psi_hat(A.parent), self.phi.extend_morphism(A.classifier)
        )
        out = parent_out.extend(classifier, cert=None, label=f"H[{A.label}]")
        self._h_obj[id(A)] = (A, out)
        if A.cert is not None:
            x0, e0 = A.cert
            c0 = self.phi.i.on_obj(x0)

            def transported_cert(_A=A, _x0=x0, _e0=e0, _c0=c0):
                unit_class = self.phi.class_rep(
                    _A.presheaf, _c0, (_x0, self.phi.i.target.identity(_c0), _e0)
                )
                return (_c0, self.hat_inverse(_A, _c0, unit_class))

            # deferred: the witness needs comma data one grade deeper than
            # the object itself, which only hom-set enumeration justifies
            out.cert_thunk = transported_cert
        return out

    # -- comparisons ------------------------------------------------------------

    def psi_hat(self, A: GeneratedObject) -> PresheafMorphism:
        """Value of A compared with the extension of A's element presheaf."""
        if id(A) in self._psi_hat:
            return self._psi_hat[id(A)][1]
        HA = self.on_obj(A)
        lan_A = self.phi.extend(A.presheaf)
        if A.length == 0:

            def component(c, elem, _lan=lan_A):
                values = _lan.at(c)
                if len(values) != 1:
                    raise CertificationError(
                        "extension of the point is not terminal at "
                        f"{self.phi.i.target.obj_label(c)}"
                    )
                return values[0]

        else:
            lan_pr1 = self.phi.extend_morphism(A.proj1)
            lan_pr2 = self.phi.extend_morphism(A.proj2)
            hat_parent = self.psi_hat(A.parent)

            def component(c, pair, _A=A, _lan=lan_A, _p1=lan_pr1, _p2=lan_pr2,
                          _hat=hat_parent):
                key = (_hat.apply(c, pair[0]), pair[1])
                table = self._kappa_table(_A, c, _lan, _p1, _p2)
                if key not in table:
                    raise CertificationError(
                        f"extension does not preserve the chosen pullback of "
                        f"{_A.label} at {self.phi.i.target.obj_label(c)}"
                    )
                return table[key]

        out = PresheafMorphism(
            HA.presheaf, lan_A, component, label=f"compare[{A.label}]"
        )
        self._psi_hat[id(A)] = (A, out)
        return out

    def _kappa_table(self, A, c, lan_A, lan_pr1, lan_pr2) -> dict:
        key = (id(A), c)
        if key not in self._kappa:
            table: dict = {}
            for xi in lan_A.at(c):
                pair = (lan_pr1.apply(c, xi), lan_pr2.apply(c, xi))
                if pair in table:
                    raise CertificationError(
                        f"extension of the chosen pullback of {A.label} is not "
                        f"injective at {self.phi.i.target.obj_label(c)}"
                    )
                table[pair] = xi
            self._kappa[key] = (A, table)
        return self._kappa[key][1]

    def hat_inverse(self, A: GeneratedObject, c, value):
        key = (id(A), c)
        if key not in self._hat_inv:
            m = self.psi_hat(A)
            HA = self.on_obj(A)
            table: dict = {}
            for v in HA.presheaf.at(c):
                w = m.apply(c, v)
                if w in table:
                    raise CertificationError(
                        f"comparison for {A.label} not injective at "
                        f"{self.phi.i.target.obj_label(c)}"
                    )
                table[w] = v
            self._hat_inv[key] = (A, table)
        table = self._hat_inv[key][1]
        if value not in table:
            raise CertificationError(
                f"comparison for {A.label} misses a class at "
                f"{self.phi.i.target.obj_label(c)}"
            )
        return table[value]

    # -- morphisms ----------------------------------------------------------------

    def on_mor(self, r: GenArrow) -> GenArrow:
        HA = self.on_obj(r.dom_obj)
        HB = self.on_obj(r.cod_obj)
        hat_dom = self.psi_hat(r.dom_obj)
        lan_r = self.phi.extend_morphism(r.map)

        def component(c, v, _B=r.cod_obj, _hat=hat_dom, _lan=lan_r):
            return self.hat_inverse(_B, c, _lan.apply(c, _hat.apply(c, v)))

        return GenArrow(
            HA, HB, PresheafMorphism(HA.presheaf, HB.presheaf, component, label="lifted")
        )

    def tau(self, A: GeneratedObject, probe_bound: int):
        """Certified comparison for the value at A, as a natural isomorphism."""
        return pointwise_iso_check(self.psi_hat(A), probe_bound)


def hom_from_universe_morphism(
    phi: LanUniverse,
    u: UniverseCategory,
    u_prime: UniverseCategory,
    source_csystem: CSystem | None = None,
):
    """Lift the extension of a universe to the generated C-systems.

    Returns (hom, psi_hat): the homomorphism between the generated systems
    and the comparison family indexed by source generated objects.  Use
    ``LiftedHom`` directly when the target system or inverse tables are
    needed as well.
    """
    lift = LiftedHom(phi, u, u_prime, source_csystem)
    return lift.hom, lift.psi_hat

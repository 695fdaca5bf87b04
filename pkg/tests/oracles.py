"""Independent oracles the tests compare library output against.

Everything here is deliberately naive: breadth-first closures and explicit
table constructions with no shared code with the package.
"""

from __future__ import annotations

from collections import defaultdict, deque
from random import Random

from cstrict import FiniteCategory, SetDiagram


def zigzag_partition(nodes, edges):
    """Connected components of the undirected graph, as a set of frozensets.

    ``nodes`` are hashable; ``edges`` are (node, node) pairs.  This is the
    brute-force meaning of "same colimit class": connected by a zigzag of
    transitions in either direction.
    """
    adjacency = defaultdict(set)
    for a, b in edges:
        adjacency[a].add(b)
        adjacency[b].add(a)
    seen = set()
    components = set()
    for start in nodes:
        if start in seen:
            continue
        component = set()
        queue = deque([start])
        while queue:
            node = queue.popleft()
            if node in component:
                continue
            component.add(node)
            queue.extend(adjacency[node] - component)
        seen |= component
        components.add(frozenset(component))
    return components


def diagram_nodes_edges(diagram: SetDiagram):
    """The generator graph of a set diagram, for the oracle."""
    nodes = [(o, e) for o in diagram.shape.objects for e in diagram.values[o]]
    edges = []
    for mor_id in diagram.shape.morphisms:
        if mor_id in diagram.shape.identities.values():
            continue
        a, b = diagram.shape.dom(mor_id), diagram.shape.cod(mor_id)
        table = diagram.transition(mor_id)
        for e in diagram.values[a]:
            edges.append(((a, e), (b, table[e])))
    return nodes, edges


def random_set_diagram(rng: Random) -> SetDiagram:
    """A random diagram with <=6 objects and <=12 non-identity transitions.

    Composites of non-identity arrows are declared external, which keeps
    the shape a valid fragment without computing a closure; the colimit
    only depends on the single transitions anyway.
    """
    n_objects = rng.randint(1, 6)
    objects = tuple(f"o{k}" for k in range(n_objects))
    morphisms = {f"id_{o}": (o, o) for o in objects}
    identities = {o: f"id_{o}" for o in objects}
    values = {
        o: tuple(f"{o}e{j}" for j in range(rng.randint(0, 3))) for o in objects
    }

    transitions = {}
    n_arrows = rng.randint(0, 12)
    k = 0
    for _ in range(n_arrows):
        a, b = rng.choice(objects), rng.choice(objects)
        if not values[a] or not values[b]:
            continue
        mid = f"t{k}"
        k += 1
        morphisms[mid] = (a, b)
        transitions[mid] = {e: rng.choice(values[b]) for e in values[a]}

    composition = {}
    external = set()
    identity_ids = set(identities.values())
    for f, (fa, fb) in morphisms.items():
        for g, (ga, gb) in morphisms.items():
            if fb != ga:
                continue
            if f in identity_ids:
                composition[(f, g)] = g
            elif g in identity_ids:
                composition[(f, g)] = f
            else:
                external.add((f, g))

    shape = FiniteCategory(
        objects=objects,
        morphisms=morphisms,
        identities=identities,
        composition=composition,
        external=frozenset(external),
        name="random-shape",
    )
    return SetDiagram(shape=shape, values=values, transitions=transitions)

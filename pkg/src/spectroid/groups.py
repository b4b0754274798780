"""Small finite groups and groupoid builders.

Groups are plain multiplication tables over string element names; the
groupoid builders produce the connected ("one orbit times a group")
shape and disjoint unions of those, which together exhaust finite
groupoids up to isomorphism.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

__all__ = [
    "FiniteGroup",
    "cyclic",
    "direct_product",
    "symmetric",
    "klein_four",
    "group_by_name",
    "connected_groupoid",
    "disjoint_union",
]


@dataclass(frozen=True)
class FiniteGroup:
    name: str
    elements: tuple[str, ...]
    mult: dict  # (a, b) -> a*b
    identity: str
    inverse: dict  # a -> a^{-1}

    @property
    def order(self) -> int:
        return len(self.elements)

    def is_abelian(self) -> bool:
        return all(
            self.mult[(a, b)] == self.mult[(b, a)]
            for a in self.elements
            for b in self.elements
        )


def cyclic(n: int) -> FiniteGroup:
    """The cyclic group of order ``n``, elements named ``"0"..."n-1"``."""
    if n < 1:
        raise ValueError("order must be >= 1")
    elements = tuple(str(i) for i in range(n))
    mult = {
        (str(a), str(b)): str((a + b) % n) for a in range(n) for b in range(n)
    }
    inverse = {str(a): str((-a) % n) for a in range(n)}
    return FiniteGroup(f"Z{n}", elements, mult, "0", inverse)


def direct_product(g: FiniteGroup, h: FiniteGroup) -> FiniteGroup:
    elements = tuple(f"{a},{b}" for a in g.elements for b in h.elements)
    mult = {}
    for a1, b1 in itertools.product(g.elements, h.elements):
        for a2, b2 in itertools.product(g.elements, h.elements):
            mult[(f"{a1},{b1}", f"{a2},{b2}")] = (
                f"{g.mult[(a1, a2)]},{h.mult[(b1, b2)]}"
            )
    inverse = {
        f"{a},{b}": f"{g.inverse[a]},{h.inverse[b]}"
        for a in g.elements
        for b in h.elements
    }
    return FiniteGroup(
        f"{g.name}x{h.name}",
        elements,
        mult,
        f"{g.identity},{h.identity}",
        inverse,
    )


def symmetric(n: int) -> FiniteGroup:
    """The symmetric group on ``n`` letters (meant for tiny ``n``)."""
    perms = sorted(itertools.permutations(range(n)))
    names = {p: "".join(str(i) for i in p) for p in perms}
    elements = tuple(names[p] for p in perms)
    mult = {}
    for p in perms:
        for q in perms:
            comp = tuple(p[q[i]] for i in range(n))  # p after q
            mult[(names[p], names[q])] = names[comp]
    identity = names[tuple(range(n))]
    inverse = {}
    for p in perms:
        inv = tuple(p.index(i) for i in range(n))
        inverse[names[p]] = names[inv]
    return FiniteGroup(f"S{n}", elements, mult, identity, inverse)


def klein_four() -> FiniteGroup:
    g = direct_product(cyclic(2), cyclic(2))
    return FiniteGroup("V4", g.elements, g.mult, g.identity, g.inverse)


_NAMED = {
    "1": lambda: cyclic(1),
    "Z1": lambda: cyclic(1),
    "Z2": lambda: cyclic(2),
    "Z3": lambda: cyclic(3),
    "Z4": lambda: cyclic(4),
    "Z5": lambda: cyclic(5),
    "Z6": lambda: cyclic(6),
    "Z7": lambda: cyclic(7),
    "Z8": lambda: cyclic(8),
    "Z9": lambda: cyclic(9),
    "Z10": lambda: cyclic(10),
    "Z11": lambda: cyclic(11),
    "Z12": lambda: cyclic(12),
    "V4": klein_four,
    "Z2xZ2": klein_four,
    "S3": lambda: symmetric(3),
}


def group_by_name(name: str) -> FiniteGroup:
    """Look up a group by conventional name (Z2...Z12, V4, S3)."""
    try:
        return _NAMED[name]()
    except KeyError:
        raise ValueError(
            f"unknown group {name!r}; known: {sorted(_NAMED)}"
        ) from None


def connected_groupoid(n_objects: int, group: FiniteGroup, prefix: str = "X"):
    """Transitive groupoid on ``n_objects`` objects with the given
    isotropy group: arrows are (target, group element, source) triples.

    Returns a :class:`spectroid.cstarcat.FiniteGroupoid`.
    """
    from .cstarcat import FiniteGroupoid

    if n_objects < 1:
        raise ValueError("need at least one object")
    objects = tuple(f"{prefix}{i}" for i in range(n_objects))

    def arrow_id(t, g, s):
        return f"{t}|{g}|{s}"

    arrows = []
    source, target = {}, {}
    for t in objects:
        for g in group.elements:
            for s in objects:
                a = arrow_id(t, g, s)
                arrows.append(a)
                source[a] = s
                target[a] = t
    compose = {}
    for t, g, mid in itertools.product(objects, group.elements, objects):
        left = arrow_id(t, g, mid)
        for h, s in itertools.product(group.elements, objects):
            right = arrow_id(mid, h, s)
            compose[(left, right)] = arrow_id(t, group.mult[(g, h)], s)
    identities = {o: arrow_id(o, group.identity, o) for o in objects}
    inverses = {
        arrow_id(t, g, s): arrow_id(s, group.inverse[g], t)
        for t in objects
        for g in group.elements
        for s in objects
    }
    return FiniteGroupoid(
        objects=objects,
        arrows=tuple(arrows),
        source=source,
        target=target,
        compose=compose,
        identities=identities,
        inverses=inverses,
    )


def disjoint_union(*groupoids):
    """Disjoint union of groupoids; components are kept disconnected.

    Object and arrow ids are prefixed with the component index so the
    inputs never clash.
    """
    from .cstarcat import FiniteGroupoid

    objects, arrows = [], []
    source, target, compose, identities, inverses = {}, {}, {}, {}, {}
    for idx, g in enumerate(groupoids):
        ren_obj = {o: f"c{idx}.{o}" for o in g.objects}
        ren_arr = {a: f"c{idx}.{a}" for a in g.arrows}
        objects.extend(ren_obj[o] for o in g.objects)
        arrows.extend(ren_arr[a] for a in g.arrows)
        for a in g.arrows:
            source[ren_arr[a]] = ren_obj[g.source[a]]
            target[ren_arr[a]] = ren_obj[g.target[a]]
        for (x, y), z in g.compose.items():
            compose[(ren_arr[x], ren_arr[y])] = ren_arr[z]
        for o, a in g.identities.items():
            identities[ren_obj[o]] = ren_arr[a]
        for a, b in g.inverses.items():
            inverses[ren_arr[a]] = ren_arr[b]
    return FiniteGroupoid(
        objects=tuple(objects),
        arrows=tuple(arrows),
        source=source,
        target=target,
        compose=compose,
        identities=identities,
        inverses=inverses,
    )

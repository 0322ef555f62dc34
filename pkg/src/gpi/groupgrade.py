"""Finitely generated abelian groups and elementary gradings on UT3."""
from __future__ import annotations

import re
from dataclasses import dataclass, field

UNIVERSAL = "Universal"
CANONICAL = "Canonical"
ALMOST_UNIVERSAL = "AlmostUniversal"
ALMOST_CANONICAL = "AlmostCanonical"
REMAINING = "Remaining"
TRIVIAL = "Trivial"
CLASSES = (UNIVERSAL, CANONICAL, ALMOST_UNIVERSAL, ALMOST_CANONICAL, REMAINING, TRIVIAL)


class GroupError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class GroupElement:
    coords: tuple
    orders: tuple = field(compare=False, repr=False)

    def __mul__(self, other: GroupElement) -> GroupElement:
        if self.orders != other.orders:
            raise GroupError("elements of different groups")
        return _reduce(tuple(a + b for a, b in zip(self.coords, other.coords)), self.orders)

    def inverse(self) -> GroupElement:
        return _reduce(tuple(-a for a in self.coords), self.orders)

    def __pow__(self, n: int) -> GroupElement:
        return _reduce(tuple(n * a for a in self.coords), self.orders)

    def is_identity(self) -> bool:
        return not any(self.coords)

    def __str__(self):
        return "(" + ",".join(str(c) for c in self.coords) + ")"


def _reduce(coords, orders) -> GroupElement:
    return GroupElement(tuple(c % n if n else c for c, n in zip(coords, orders)), orders)


@dataclass(frozen=True)
class GroupDescriptor:
    """Direct product of cyclic groups; ``orders[i] == 0`` means infinite cyclic."""

    orders: tuple

    def __post_init__(self):
        if any((not isinstance(n, int)) or n < 0 or n == 1 for n in self.orders):
            raise GroupError(f"invalid generator orders {self.orders}")

    @classmethod
    def parse(cls, text: str) -> GroupDescriptor:
        parts = [p.strip() for p in re.split(r"[*x×]", text.strip()) if p.strip()]
        if not parts:
            raise GroupError(f"cannot parse group {text!r}")
        orders = []
        for part in parts:
            m = re.fullmatch(r"Z(\d*)", part)
            if not m:
                raise GroupError(f"bad group factor {part!r}")
            orders.append(int(m.group(1)) if m.group(1) else 0)
        return cls(tuple(orders))

    @property
    def rank(self) -> int:
        return len(self.orders)

    def element(self, coords) -> GroupElement:
        coords = tuple(int(c) for c in coords)
        if len(coords) != len(self.orders):
            raise GroupError(f"element {coords} has wrong length for {self}")
        return _reduce(coords, self.orders)

    def parse_element(self, text: str) -> GroupElement:
        t = text.strip()
        if not (t.startswith("(") and t.endswith(")")):
            raise GroupError(f"group element must look like (a,b,...): {text!r}")
        body = t[1:-1].strip()
        try:
            coords = [int(c) for c in body.split(",")] if body else []
        except ValueError as exc:
            raise GroupError(f"bad group element {text!r}") from exc
        return self.element(coords)

    @property
    def identity(self) -> GroupElement:
        return self.element([0] * self.rank)

    def generators(self):
        return [self.element([int(i == j) for j in range(self.rank)]) for i in range(self.rank)]

    def is_finite(self) -> bool:
        return all(self.orders)

    def elements(self):
        if not self.is_finite():
            raise GroupError("infinite group")
        out = [()]
        for n in self.orders:
            out = [c + (i,) for c in out for i in range(n)]
        return [self.element(c) for c in out]

    def __str__(self):
        return "*".join("Z" if n == 0 else f"Z{n}" for n in self.orders)


@dataclass(frozen=True)
class GroupHom:
    domain: GroupDescriptor
    codomain: GroupDescriptor
    images: tuple

    def __post_init__(self):
        if len(self.images) != self.domain.rank:
            raise GroupError("one image per domain generator is required")
        for n, img in zip(self.domain.orders, self.images):
            if img.orders != self.codomain.orders:
                raise GroupError("image outside the codomain")
            if n and not (img ** n).is_identity():
                raise GroupError(f"image {img} does not respect generator order {n}")

    def __call__(self, x: GroupElement) -> GroupElement:
        out = self.codomain.identity
        for c, img in zip(x.coords, self.images):
            out = out * img ** c
        return out

    def compose_after(self, other: GroupHom) -> GroupHom:
        """``self o other``."""
        return GroupHom(other.domain, self.codomain,
                        tuple(self(img) for img in other.images))

    @classmethod
    def identity(cls, G: GroupDescriptor) -> GroupHom:
        return cls(G, G, tuple(G.generators()))


def classify_grading(G: GroupDescriptor, g: GroupElement, h: GroupElement) -> dict:
    one = G.identity
    k = g * h
    if g == one and h == one:
        cls = TRIVIAL
    elif (g == one) != (h == one):
        cls = REMAINING
    elif g == h:
        cls = ALMOST_CANONICAL if (g * g) == one else CANONICAL
    elif k == one:
        cls = ALMOST_UNIVERSAL
    else:
        cls = UNIVERSAL
    return {"class": cls, "support": frozenset({one, g, h, k})}


@dataclass(frozen=True)
class GradingSpec:
    """Elementary grading: deg e12 = g, deg e23 = h, deg e13 = gh, diagonal trivial."""

    group: GroupDescriptor
    g: GroupElement
    h: GroupElement

    @property
    def k(self) -> GroupElement:
        return self.g * self.h

    @property
    def cls(self) -> str:
        return classify_grading(self.group, self.g, self.h)["class"]

    @property
    def support(self) -> frozenset:
        return classify_grading(self.group, self.g, self.h)["support"]

    def unit_degree(self, i: int, j: int) -> GroupElement:
        """Degree of the matrix unit e_ij (0-based, i <= j)."""
        if i == j:
            return self.group.identity
        if (i, j) == (0, 1):
            return self.g
        if (i, j) == (1, 2):
            return self.h
        if (i, j) == (0, 2):
            return self.k
        raise GroupError(f"no matrix unit e{i+1}{j+1} in UT3")

    def positions(self, d: GroupElement) -> list:
        return [(i, j) for i in range(3) for j in range(i, 3) if self.unit_degree(i, j) == d]

    def nontrivial_degrees(self) -> list:
        return sorted(d for d in self.support if not d.is_identity())

    def distinguished_degree(self) -> GroupElement:
        nt = self.nontrivial_degrees()
        if len(nt) != 1:
            raise GroupError(f"{self.cls} grading has no unique nontrivial degree for z")
        return nt[0]

    def __str__(self):
        return f"Gamma({self.g},{self.h}) over {self.group}"


def gradings_isomorphic(G1: GradingSpec, G2: GradingSpec) -> bool:
    if G1.group != G2.group:
        raise GroupError("gradings over different groups")
    return (G1.g, G1.h) == (G2.g, G2.h) or (G1.g, G1.h) == (G2.h, G2.g)


def coarsen_grading(G: GradingSpec, alpha: GroupHom) -> GradingSpec:
    if alpha.domain != G.group:
        raise GroupError("homomorphism domain does not match the grading group")
    return GradingSpec(alpha.codomain, alpha(G.g), alpha(G.h))


# named gradings used throughout
def _named(group, g, h):
    G = GroupDescriptor.parse(group)
    return GradingSpec(G, G.parse_element(g), G.parse_element(h))


NAMED_GRADINGS = {
    "universal": ("Z*Z", "(1,0)", "(0,1)"),
    "almost-universal": ("Z", "(1)", "(-1)"),
    "almost-canonical": ("Z2", "(1)", "(1)"),
    "remaining": ("Z", "(1)", "(0)"),
    "canonical": ("Z", "(1)", "(1)"),
    "trivial": ("Z", "(0)", "(0)"),
}


def named_grading(name: str) -> GradingSpec:
    try:
        return _named(*NAMED_GRADINGS[name.lower()])
    except KeyError:
        raise GroupError(f"unknown grading {name!r}; choose from {sorted(NAMED_GRADINGS)}") from None

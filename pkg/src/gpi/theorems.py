"""Generator lists and basis handles for the four identity-basis theorems."""
from __future__ import annotations

from dataclasses import dataclass

from .freelie import LiePolynomial, Var, left_normed, theorem_basis
from .groupgrade import (ALMOST_CANONICAL, ALMOST_UNIVERSAL, REMAINING, UNIVERSAL,
                         GradingSpec, named_grading)
from .scalars import FieldMode
from .tideal import GeneratorSet

OPEN_PROBLEM_MESSAGE = (
    "the identities of the Remaining grading over a finite field are an open problem; "
    "use Q or an Fp-inf mode")


def _mono(*items, coef=1):
    return LiePolynomial.mono(left_normed(*items), coef)


def _y(i, G):
    return Var.make(i, G.group.identity)


def ut2_identities(G: GradingSpec, mode: FieldMode) -> list:
    """Identities generating Id(UT2) on trivial-degree variables.

    Over a finite field with q elements the list adds [y1,y2,y3^(q)] - [y1,y2,y3]
    and [y2,y1] - [y2,y1^(q)] - [y2,y1,y2^(q-1)] + [y2,y1^(q),y2^(q-1)].
    """
    y1, y2, y3, y4 = (_y(i, G) for i in range(1, 5))
    out = [LiePolynomial.mono(((y1, y2), (y3, y4)))]
    q = mode.q
    if q is not None:
        out.append(_mono(y1, y2, *[y3] * q) - _mono(y1, y2, y3))
        out.append(_mono(y2, y1) - _mono(y2, *[y1] * q) - _mono(y2, y1, *[y2] * (q - 1))
                   + _mono(y2, *[y1] * q, *[y2] * (q - 1)))
    return out


def cancelling_ut2_variant(G: GradingSpec, q: int) -> LiePolynomial:
    """The fourth-term-cancelling variant of the last UT2 identity, kept for comparison."""
    y1, y2 = _y(1, G), _y(2, G)
    return (_mono(y2, y1, *[y2] * (q - 1)) + _mono(y2, y1) - _mono(y2, *[y1] * q)
            - _mono(y2, y1, *[y2] * (q - 1)))


@dataclass
class GeneratorItem:
    label: str
    polys: list
    outside_support: bool = False
    finite_only: bool = False


@dataclass
class TheoremSpec:
    cls: str
    grading: GradingSpec
    infinite_only: bool = False

    def admits(self, mode: FieldMode) -> bool:
        return not (self.infinite_only and mode.is_finite)

    def inadmissible_message(self, mode: FieldMode) -> str:
        return OPEN_PROBLEM_MESSAGE if self.cls == REMAINING else f"{mode} not admissible"

    def items(self, mode: FieldMode) -> list:
        G = self.grading
        q = mode.q
        y1, y2, y3, y4, y5 = (_y(i, G) for i in range(1, 6))
        out = []
        if self.cls == UNIVERSAL:
            out.append(GeneratorItem("i", [], outside_support=True))
            out.append(GeneratorItem("ii", [_mono(y1, y2)]))
            if q is not None:
                out.append(GeneratorItem("iii", [
                    _mono(Var.make(1, d), *[y1] * q) - _mono(Var.make(1, d), y1)
                    for d in (G.g, G.h, G.k)], finite_only=True))
        elif self.cls == ALMOST_UNIVERSAL:
            ls = (G.g, G.h)
            out.append(GeneratorItem("i", [], outside_support=True))
            out.append(GeneratorItem("ii", [_mono(Var.make(1, l), Var.make(2, l)) for l in ls]))
            out.append(GeneratorItem("iii", [
                _mono(Var.make(1, l), Var.make(1, h), Var.make(2, l))
                for l in ls for h in ls if l != h]))
            out.append(GeneratorItem("iv", [_mono(y1, y2, Var.make(1, l)) for l in ls]))
            out.append(GeneratorItem("v", ut2_identities(G, mode)))
            if q is not None:
                out.append(GeneratorItem("vi", [
                    _mono(Var.make(1, l), *[y1] * q) - _mono(Var.make(1, l), y1) for l in ls],
                    finite_only=True))
        elif self.cls == ALMOST_CANONICAL:
            z = [Var.make(i, G.g) for i in range(1, 4)]
            out.append(GeneratorItem("i", [_mono(*z)]))
            out.append(GeneratorItem("ii", [_mono(y1, y2, z[0])]))
            out.append(GeneratorItem("iii", ut2_identities(G, mode)))
            if q is not None:
                out.append(GeneratorItem("iv", [_mono(z[0], *[y1] * q) - _mono(z[0], y1)],
                                         finite_only=True))
        elif self.cls == REMAINING:
            zd = G.distinguished_degree()
            z1, z2 = Var.make(1, zd), Var.make(2, zd)
            out.append(GeneratorItem("i", [], outside_support=True))
            out.append(GeneratorItem("ii", [_mono(z1, z2)]))
            out.append(GeneratorItem("iii", [LiePolynomial.mono(((y1, y2), (y3, y4)))]))
            out.append(GeneratorItem("iv", [LiePolynomial.mono(((z1, (y2, y3)), (y4, y5)))]))
        else:
            raise ValueError(f"no theorem for {self.cls}")
        return out

    def generators(self, mode: FieldMode, drop: tuple = ()) -> GeneratorSet:
        gs = GeneratorSet()
        for item in self.items(mode):
            if item.label in drop:
                continue
            gs.polys.extend(item.polys)
            gs.outside_support = gs.outside_support or item.outside_support
        return gs

    def without(self, *labels) -> TheoremSpec:
        return _MutatedSpec(self.cls, self.grading, self.infinite_only, tuple(labels))

    def basis(self, D, mode):
        return theorem_basis(self.cls, D, mode, self.grading)


@dataclass
class _MutatedSpec(TheoremSpec):
    dropped: tuple = ()

    def generators(self, mode: FieldMode, drop: tuple = ()) -> GeneratorSet:
        return super().generators(mode, drop=tuple(drop) + self.dropped)


_DEFAULT_NAMES = {UNIVERSAL: "universal", ALMOST_UNIVERSAL: "almost-universal",
                  ALMOST_CANONICAL: "almost-canonical", REMAINING: "remaining"}


def theorem_spec(cls: str, grading: GradingSpec | None = None) -> TheoremSpec:
    if cls not in _DEFAULT_NAMES:
        raise ValueError(f"no identity basis theorem for the {cls} class")
    G = grading or named_grading(_DEFAULT_NAMES[cls])
    if G.cls != cls:
        raise ValueError(f"grading {G} is {G.cls}, not {cls}")
    return TheoremSpec(cls, G, infinite_only=(cls == REMAINING))

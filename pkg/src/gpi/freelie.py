"""The free G-graded Lie algebra.

Monomials are plain Python values: a leaf is a ``Var`` and a bracket [a, b] is
the 2-tuple ``(a, b)``. Equality of Lie polynomials is decided by expanding into
the free associative algebra, where anticommutativity and Jacobi hold for free.
"""
from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import NamedTuple

from .groupgrade import (ALMOST_CANONICAL, ALMOST_UNIVERSAL, REMAINING, UNIVERSAL,
                         GradingSpec, GroupElement, named_grading)
from .scalars import FieldMode


class LieError(ValueError):
    pass


class Var(NamedTuple):
    """Graded variable x_{index, degree}; ordered by (degree, index)."""

    coords: tuple
    index: int
    orders: tuple

    @classmethod
    def make(cls, index: int, degree: GroupElement) -> Var:
        if index < 1:
            raise LieError("variable indices start at 1")
        return cls(degree.coords, index, degree.orders)

    @property
    def degree(self) -> GroupElement:
        return GroupElement(self.coords, self.orders)

    @property
    def trivial(self) -> bool:
        return not any(self.coords)

    def name(self) -> str:
        if self.trivial:
            return f"y{self.index}"
        return f"x{self.index}@(" + ",".join(map(str, self.coords)) + ")"

    def __str__(self):
        return self.name()


def is_leaf(m) -> bool:
    return isinstance(m, Var)


def bracket(a, b):
    return (a, b)


def left_normed(*items):
    """[a1, a2, ..., ak] as a left comb; a single item is returned unchanged."""
    if not items:
        raise LieError("empty commutator")
    m = items[0]
    for x in items[1:]:
        m = (m, x)
    return m


def leaves(m) -> list:
    if isinstance(m, Var):
        return [m]
    out = []
    stack = [m]
    while stack:
        t = stack.pop()
        if isinstance(t, Var):
            out.append(t)
        else:
            stack.append(t[1])
            stack.append(t[0])
    return out


def length(m) -> int:
    return 1 if isinstance(m, Var) else length(m[0]) + length(m[1])


def comb_items(m) -> list:
    """Items of ``m`` read as a left comb [i1, i2, ...]."""
    out = []
    while not isinstance(m, Var):
        out.append(m[1])
        m = m[0]
    out.append(m)
    return out[::-1]


def format_monomial(m) -> str:
    if isinstance(m, Var):
        return m.name()
    return "[" + ",".join(format_monomial(x) if not isinstance(x, Var) else x.name()
                          for x in comb_items(m)) + "]"


def substitute_leaves(m, images):
    """Replace the leaves of ``m``, in left-to-right order, by ``images``."""
    it = iter(images)

    def go(t):
        if isinstance(t, Var):
            return next(it)
        return (go(t[0]), go(t[1]))

    return go(m)


def rename(m, mapping: dict):
    if isinstance(m, Var):
        return mapping.get(m, m)
    return (rename(m[0], mapping), rename(m[1], mapping))


# ---------------------------------------------------------------- multidegrees

class Multidegree:
    """Multiset of graded variables (variable -> positive count)."""

    __slots__ = ("items", "_hash")

    def __init__(self, counts=None):
        if counts is None:
            counts = {}
        elif not isinstance(counts, dict):
            c = {}
            for v in counts:
                c[v] = c.get(v, 0) + 1
            counts = c
        self.items = tuple(sorted((v, n) for v, n in counts.items() if n > 0))
        if any(n < 0 for n in counts.values()):
            raise LieError("negative multiplicity")
        self._hash = hash(self.items)

    @classmethod
    def of(cls, m) -> Multidegree:
        return cls(leaves(m))

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        return isinstance(other, Multidegree) and self.items == other.items

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def sort_key(self):
        return (self.total, self.items)

    def as_dict(self) -> dict:
        return dict(self.items)

    def count(self, v) -> int:
        for w, n in self.items:
            if w == v:
                return n
        return 0

    @property
    def total(self) -> int:
        return sum(n for _, n in self.items)

    def variables(self) -> list:
        return [v for v, _ in self.items]

    def multiset(self) -> list:
        return [v for v, n in self.items for _ in range(n)]

    def gdegree(self, group_identity: GroupElement) -> GroupElement:
        d = group_identity
        for v, n in self.items:
            d = d * (v.degree ** n)
        return d

    def __add__(self, other: Multidegree) -> Multidegree:
        c = self.as_dict()
        for v, n in other.items:
            c[v] = c.get(v, 0) + n
        return Multidegree(c)

    def __sub__(self, other: Multidegree) -> Multidegree:
        c = self.as_dict()
        for v, n in other.items:
            if c.get(v, 0) < n:
                raise LieError("multidegree difference is negative")
            c[v] -= n
        return Multidegree(c)

    def __le__(self, other: Multidegree) -> bool:
        d = other.as_dict()
        return all(d.get(v, 0) >= n for v, n in self.items)

    def submultidegrees(self) -> list:
        """All nonzero E <= self, ordered by total degree then items."""
        vs = [v for v, _ in self.items]
        out = []
        for ns in product(*[range(n + 1) for _, n in self.items]):
            if any(ns):
                out.append(Multidegree(dict(zip(vs, ns))))
        out.sort()
        return out

    def restrict(self, pred) -> Multidegree:
        return Multidegree({v: n for v, n in self.items if pred(v)})

    def __repr__(self):
        return "{" + ", ".join(f"{v.name()}:{n}" for v, n in self.items) + "}"

    __str__ = __repr__


# ---------------------------------------------------------------- polynomials

class LiePolynomial:
    """Finite combination of Lie monomials with rational (or integer) coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {}
        if terms:
            items = terms.items() if isinstance(terms, dict) else terms
            for a, b in items:
                # accept (mono, coef) from dicts and (coef, mono) from lists
                mono, coef = (a, b) if isinstance(terms, dict) else (b, a)
                self._acc(mono, coef)

    def _acc(self, mono, coef):
        if isinstance(coef, Fraction) and coef.denominator == 1:
            coef = coef.numerator
        v = self.terms.get(mono, 0) + coef
        if v:
            self.terms[mono] = v
        else:
            self.terms.pop(mono, None)

    @classmethod
    def mono(cls, m, coef=1) -> LiePolynomial:
        return cls({m: coef})

    def copy(self) -> LiePolynomial:
        out = LiePolynomial()
        out.terms = dict(self.terms)
        return out

    def __add__(self, other):
        out = self.copy()
        for m, c in other.terms.items():
            out._acc(m, c)
        return out

    def __neg__(self):
        out = LiePolynomial()
        out.terms = {m: -c for m, c in self.terms.items()}
        return out

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> LiePolynomial:
        out = LiePolynomial()
        if c:
            out.terms = {m: v * c for m, v in self.terms.items()}
        return out

    def bracket(self, other) -> LiePolynomial:
        out = LiePolynomial()
        for a, ca in self.terms.items():
            for b, cb in other.terms.items():
                out._acc((a, b), ca * cb)
        return out

    def variables(self) -> set:
        return {v for m in self.terms for v in leaves(m)}

    def components(self) -> dict:
        """Split into multihomogeneous components keyed by Multidegree."""
        out = {}
        for m, c in self.terms.items():
            D = Multidegree.of(m)
            out.setdefault(D, LiePolynomial())._acc(m, c)
        return {D: p for D, p in out.items() if p.terms}

    def multidegree(self) -> Multidegree:
        comps = self.components()
        if len(comps) != 1:
            raise LieError("polynomial is not multihomogeneous")
        return next(iter(comps))

    def is_multihomogeneous(self) -> bool:
        return len(self.components()) <= 1

    def expand(self) -> dict:
        out = {}
        for m, c in self.terms.items():
            for w, x in expand_assoc(m).items():
                v = out.get(w, 0) + c * x
                if v:
                    out[w] = v
                else:
                    out.pop(w, None)
        return out

    def is_zero(self) -> bool:
        return not self.expand()

    def equals(self, other) -> bool:
        return (self - other).is_zero()

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for m, c in sorted(self.terms.items(), key=lambda t: format_monomial(t[0])):
            parts.append(f"{c}*{format_monomial(m)}")
        return " + ".join(parts)

    def format(self) -> str:
        if not self.terms:
            return "0"
        out = ""
        for m, c in sorted(self.terms.items(), key=lambda t: format_monomial(t[0])):
            sign = "-" if c < 0 else "+"
            a = -c if c < 0 else c
            body = format_monomial(m) if a == 1 else f"{a}*{format_monomial(m)}"
            out += (("-" if sign == "-" else "") if not out else f" {sign} ") + body
        return out


# ---------------------------------------------------------------- expansion

@lru_cache(maxsize=1 << 18)
def expand_assoc(m) -> dict:
    """Associative expansion: words (tuples of Var) -> integer coefficients."""
    if isinstance(m, Var):
        return {(m,): 1}
    ea = expand_assoc(m[0])
    eb = expand_assoc(m[1])
    out = {}
    for wa, ca in ea.items():
        for wb, cb in eb.items():
            c = ca * cb
            w = wa + wb
            out[w] = out.get(w, 0) + c
            w = wb + wa
            out[w] = out.get(w, 0) - c
    return {w: c for w, c in out.items() if c}


def expand_bracket_right(e: dict, v) -> dict:
    """Expansion of [E, v] given the expansion E and a single variable v."""
    out = {}
    for w, c in e.items():
        a = w + (v,)
        out[a] = out.get(a, 0) + c
        b = (v,) + w
        out[b] = out.get(b, 0) - c
    return {w: c for w, c in out.items() if c}


# ---------------------------------------------------------------- enumeration

def distinct_permutations(seq):
    """Distinct orderings of a multiset, in lexicographic order."""
    a = sorted(seq)
    n = len(a)
    if n == 0:
        yield ()
        return
    while True:
        yield tuple(a)
        i = n - 2
        while i >= 0 and not a[i] < a[i + 1]:
            i -= 1
        if i < 0:
            return
        j = n - 1
        while not a[i] < a[j]:
            j -= 1
        a[i], a[j] = a[j], a[i]
        a[i + 1:] = reversed(a[i + 1:])


def spanning_monomials(D: Multidegree) -> list:
    """Every distinct left-normed arrangement of the multiset D."""
    if D.total < 1:
        raise LieError("multidegree must be nonempty")
    return [left_normed(*p) for p in distinct_permutations(D.multiset())]


def ut2_y_basis(D: Multidegree, mode: FieldMode | None = None) -> list:
    """Left-normed [y_i1, ..., y_in] over D with i1 > i2 <= i3 <= ... <= in."""
    if mode is not None and mode.is_finite:
        raise LieError("the UT2 basis is only available over infinite fields")
    if any(not v.trivial for v in D.variables()):
        raise LieError("ut2_y_basis takes trivial-degree variables only")
    if D.total == 1:
        return [D.variables()[0]]
    out = []
    for j in D.variables():
        rest = sorted((D - Multidegree({j: 1})).multiset())
        if rest and j > rest[0]:
            out.append(left_normed(j, *rest))
    return out


def _pow_items(ys, exps):
    out = []
    for y, e in zip(ys, exps):
        out.extend([y] * e)
    return out


def _splits(counts, bound):
    """All (p, q) with p + q = counts, entries < bound when bound is set."""
    ranges = [range(c + 1) for c in counts]
    for p in product(*ranges):
        q = tuple(c - a for c, a in zip(counts, p))
        if bound is not None and (any(a >= bound for a in p) or any(b >= bound for b in q)):
            continue
        yield p, q


def theorem_basis(cls: str, D: Multidegree, mode: FieldMode, grading: GradingSpec | None = None):
    """The claimed basis elements of multidegree D, or None when no named basis exists.

    None is returned only for trivial-degree components of degree >= 2 in
    Finite mode for the classes whose trivial part is the UT2 relatively free
    algebra.
    """
    defaults = {UNIVERSAL: "universal", ALMOST_UNIVERSAL: "almost-universal",
                ALMOST_CANONICAL: "almost-canonical", REMAINING: "remaining"}
    if cls not in defaults:
        raise LieError(f"no basis theorem for the {cls} class")
    if cls == REMAINING and mode.is_finite:
        raise LieError("the Remaining grading basis is only known over infinite fields")
    G = grading or named_grading(defaults[cls])
    bound = mode.q
    ys = [v for v in D.variables() if v.trivial]
    yc = [D.count(v) for v in ys]
    nts = [(v, n) for v, n in D.items if not v.trivial]

    if not nts:
        if D.total == 1:
            return [ys[0]]
        if cls == UNIVERSAL:
            return []
        if mode.is_finite:
            return None
        return ut2_y_basis(D)

    def within(exps):
        return bound is None or all(e < bound for e in exps)

    if cls == UNIVERSAL:
        if len(nts) == 1 and nts[0][1] == 1:
            x = nts[0][0]
            if x.degree not in (G.g, G.h, G.k) or not within(yc):
                return []
            return [left_normed(x, *_pow_items(ys, yc))]
        if len(nts) == 2 and nts[0][1] == 1 and nts[1][1] == 1:
            a, b = nts[0][0], nts[1][0]
            if {a.degree, b.degree} != {G.g, G.h} or G.g == G.h:
                return []
            x1, x2 = (a, b) if a.degree == G.g else (b, a)
            return [left_normed(x1, *_pow_items(ys, p), x2, *_pow_items(ys, q))
                    for p, q in _splits(yc, bound)]
        return []

    if cls == ALMOST_UNIVERSAL:
        if len(nts) == 1 and nts[0][1] == 1:
            x = nts[0][0]
            if x.degree not in (G.g, G.h) or not within(yc):
                return []
            return [left_normed(x, *_pow_items(ys, yc))]
        if len(nts) == 2 and nts[0][1] == 1 and nts[1][1] == 1:
            a, b = nts[0][0], nts[1][0]
            if {a.degree, b.degree} != {G.g, G.h}:
                return []
            xg, xh = (a, b) if a.degree == G.g else (b, a)
            return [(left_normed(xg, *_pow_items(ys, p)), left_normed(xh, *_pow_items(ys, q)))
                    for p, q in _splits(yc, bound)]
        return []

    if cls == ALMOST_CANONICAL:
        zdeg = G.g
        if any(v.degree != zdeg for v, _ in nts):
            return []
        if len(nts) == 1 and nts[0][1] == 1:
            if not within(yc):
                return []
            return [left_normed(nts[0][0], *_pow_items(ys, yc))]
        if len(nts) == 2 and nts[0][1] == 1 and nts[1][1] == 1:
            zi, zj = nts[0][0], nts[1][0]
            return [(left_normed(zi, *_pow_items(ys, p)), left_normed(zj, *_pow_items(ys, q)))
                    for p, q in _splits(yc, bound)]
        if len(nts) == 1 and nts[0][1] == 2:
            z = nts[0][0]
            return [(left_normed(z, *_pow_items(ys, p)), left_normed(z, *_pow_items(ys, q)))
                    for p, q in _splits(yc, bound) if p < q]
        return []

    # Remaining
    zdeg = G.distinguished_degree()
    if len(nts) != 1 or nts[0][1] != 1 or nts[0][0].degree != zdeg:
        return []
    z = nts[0][0]
    out = [left_normed(z, *_pow_items(ys, yc))]
    Dy = D.restrict(lambda v: v.trivial)
    if Dy.total >= 2:
        for E in Dy.submultidegrees():
            if E.total < 2:
                continue
            rest = Dy - E
            tail = _pow_items(ys, [rest.count(y) for y in ys])
            for m in ut2_y_basis(E):
                out.append(left_normed(m, z, *tail))
    return out


# ---------------------------------------------------------------- parsing

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<sym>[\[\],@()^+\-*/])|(?P<name>[xyz]))")


class _Parser:
    def __init__(self, text: str, grading: GradingSpec):
        self.text = text
        self.grading = grading
        self.pos = 0
        self.toks = []
        i = 0
        while i < len(text):
            if text[i].isspace():
                i += 1
                continue
            m = _TOKEN.match(text, i)
            if not m or m.end() == i:
                raise LieError(f"syntax error at position {i}: unexpected {text[i]!r}")
            kind = m.lastgroup
            self.toks.append((kind, m.group(kind), m.start(kind)))
            i = m.end()
        self.toks.append(("end", "", len(text)))

    def peek(self):
        return self.toks[self.pos]

    def take(self, value=None, kind=None):
        t = self.toks[self.pos]
        if (value is not None and t[1] != value) or (kind is not None and t[0] != kind):
            want = value if value is not None else kind
            got = t[1] or "end of input"
            raise LieError(f"syntax error at position {t[2]}: expected {want!r}, got {got!r}")
        self.pos += 1
        return t

    def poly(self) -> LiePolynomial:
        out = LiePolynomial()
        sign = 1
        if self.peek()[1] in "+-" and self.peek()[0] == "sym":
            sign = -1 if self.take()[1] == "-" else 1
        out = out + self.term().scale(sign)
        while self.peek()[0] == "sym" and self.peek()[1] in ("+", "-"):
            sign = -1 if self.take()[1] == "-" else 1
            out = out + self.term().scale(sign)
        self.take(kind="end")
        return out

    def term(self) -> LiePolynomial:
        coef = Fraction(1)
        if self.peek()[0] == "num":
            num = int(self.take()[1])
            den = 1
            if self.peek()[1] == "/":
                self.take("/")
                den = int(self.take(kind="num")[1])
                if den == 0:
                    raise LieError("zero denominator")
            coef = Fraction(num, den)
            self.take("*")
        return LiePolynomial.mono(self.bracket(), coef)

    def bracket(self):
        at = self.take("[")[2]
        items = self.elem()
        while self.peek()[1] == ",":
            self.take(",")
            items += self.elem()
        self.take("]")
        if not items:
            raise LieError(f"empty commutator at position {at}")
        return left_normed(*items)

    def elem(self) -> list:
        if self.peek()[1] == "[":
            return [self.bracket()]
        v = self.var()
        n = 1
        if self.peek()[1] == "^":
            self.take("^")
            n = int(self.take(kind="num")[1])
        return [v] * n

    def var(self) -> Var:
        kind, name, at = self.take(kind="name")
        idx = 1
        if self.peek()[0] == "num":
            idx = int(self.take()[1])
        G = self.grading.group
        if name == "y":
            return Var.make(idx, G.identity)
        if name == "z":
            return Var.make(idx, self.grading.distinguished_degree())
        self.take("@")
        self.take("(")
        coords = [self._int()]
        while self.peek()[1] == ",":
            self.take(",")
            coords.append(self._int())
        self.take(")")
        if len(coords) != G.rank:
            raise LieError(f"degree vector of length {len(coords)} at position {at}, "
                           f"group {G} needs {G.rank}")
        return Var.make(idx, G.element(coords))

    def _int(self) -> int:
        sign = 1
        if self.peek()[1] == "-":
            self.take("-")
            sign = -1
        return sign * int(self.take(kind="num")[1])


def parse_poly(text: str, grading: GradingSpec) -> LiePolynomial:
    return _Parser(text, grading).poly()


def substitute(f: LiePolynomial, mapping: dict) -> LiePolynomial:
    """Graded substitution: each variable in ``mapping`` becomes the given LiePolynomial."""
    out = LiePolynomial()

    def image(t):
        if isinstance(t, Var):
            return mapping.get(t) if t in mapping else LiePolynomial.mono(t)
        return image(t[0]).bracket(image(t[1]))

    for m, c in f.terms.items():
        out = out + image(m).scale(c)
    return out


def bracket_poly(f: LiePolynomial, *items) -> LiePolynomial:
    """[f, a1, ..., ak] for variables or polynomials a_i."""
    for a in items:
        f = f.bracket(a if isinstance(a, LiePolynomial) else LiePolynomial.mono(a))
    return f

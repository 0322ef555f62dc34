"""Sparse polynomials in commuting indeterminates."""
from __future__ import annotations

from .field import FieldError, FieldMode

# A monomial is a sorted tuple of (indeterminate id, exponent) pairs, exponents >= 1.
ONE = ()


def _mono_mul(a, b):
    if not a:
        return b
    if not b:
        return a
    out = []
    i = j = 0
    la, lb = len(a), len(b)
    while i < la and j < lb:
        ka, kb = a[i][0], b[j][0]
        if ka == kb:
            out.append((ka, a[i][1] + b[j][1]))
            i += 1
            j += 1
        elif ka < kb:
            out.append(a[i])
            i += 1
        else:
            out.append(b[j])
            j += 1
    if i < la:
        out.extend(a[i:])
    if j < lb:
        out.extend(b[j:])
    return tuple(out)


class MultiPoly:
    """Polynomial with coefficients in ``field``; no zero coefficients are stored."""

    __slots__ = ("terms", "field")

    def __init__(self, terms=None, field: FieldMode | None = None):
        self.field = field or FieldMode.rational()
        self.terms = {}
        if terms:
            for mono, c in terms.items():
                c = self.field.coerce(c)
                if c:
                    self.terms[tuple(sorted(mono))] = c

    @classmethod
    def _raw(cls, terms, field):
        obj = cls.__new__(cls)
        obj.terms = terms
        obj.field = field
        return obj

    @classmethod
    def var(cls, ident, field=None) -> MultiPoly:
        return cls._raw({((ident, 1),): 1}, field or FieldMode.rational())

    @classmethod
    def const(cls, c, field=None) -> MultiPoly:
        return cls({ONE: c}, field)

    @classmethod
    def zero(cls, field=None) -> MultiPoly:
        return cls._raw({}, field or FieldMode.rational())

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other: MultiPoly) -> MultiPoly:
        p = self.field.p
        out = dict(self.terms)
        for mono, c in other.terms.items():
            v = out.get(mono, 0) + c
            if p is not None:
                v %= p
            if v:
                out[mono] = v
            else:
                out.pop(mono, None)
        return MultiPoly._raw(out, self.field)

    def __neg__(self) -> MultiPoly:
        p = self.field.p
        if p is None:
            return MultiPoly._raw({m: -c for m, c in self.terms.items()}, self.field)
        return MultiPoly._raw({m: (-c) % p for m, c in self.terms.items()}, self.field)

    def __sub__(self, other: MultiPoly) -> MultiPoly:
        return self + (-other)

    def scale(self, c) -> MultiPoly:
        c = self.field.coerce(c)
        if not c:
            return MultiPoly.zero(self.field)
        p = self.field.p
        if p is None:
            return MultiPoly._raw({m: v * c for m, v in self.terms.items()}, self.field)
        return MultiPoly._raw({m: v * c % p for m, v in self.terms.items()}, self.field)

    def __mul__(self, other: MultiPoly) -> MultiPoly:
        if not self.terms or not other.terms:
            return MultiPoly.zero(self.field)
        p = self.field.p
        out = {}
        for ma, ca in self.terms.items():
            for mb, cb in other.terms.items():
                m = _mono_mul(ma, mb)
                out[m] = out.get(m, 0) + ca * cb
        if p is None:
            out = {m: c for m, c in out.items() if c}
        else:
            out = {m: c % p for m, c in out.items() if c % p}
        return MultiPoly._raw(out, self.field)

    def indeterminates(self) -> set:
        return {i for mono in self.terms for i, _ in mono}

    def evaluate(self, point) -> object:
        """Value at ``point`` (mapping indeterminate -> scalar)."""
        p = self.field.p
        total = 0
        for mono, c in self.terms.items():
            v = c
            for i, e in mono:
                v = v * pow(point[i], e, p) if p is not None else v * point[i] ** e
            total += v
        return total % p if p is not None else total

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for mono, c in sorted(self.terms.items()):
            m = "*".join(f"t{i}" + (f"^{e}" if e > 1 else "") for i, e in mono)
            parts.append(f"{c}" + (f"*{m}" if m else ""))
        return " + ".join(parts)


def reduce_exponent(e: int, q: int) -> int:
    return 0 if e == 0 else (e - 1) % (q - 1) + 1


def func_reduce(poly: MultiPoly, q: int) -> MultiPoly:
    """Rewrite ``poly`` with x**q == x for every indeterminate, coefficients mod q.

    The result agrees with ``poly`` as a function on F_q**n and has every
    exponent in 1..q-1.
    """
    if q < 2:
        raise FieldError(f"invalid field size {q}")
    field = poly.field
    if field.p is not None and field.p != q:
        raise FieldError(f"polynomial over F_{field.p} reduced with q={q}")
    if field.p is None:
        field = FieldMode.finite(q)
    out = {}
    for mono, c in poly.terms.items():
        m = tuple((i, (e - 1) % (q - 1) + 1) for i, e in mono)
        out[m] = out.get(m, 0) + field.coerce(c)
    out = {m: c % q for m, c in out.items() if c % q}
    return MultiPoly._raw(out, field)

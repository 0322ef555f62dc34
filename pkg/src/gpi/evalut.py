"""Generic graded evaluation into upper-triangular matrices."""
from __future__ import annotations

from itertools import product

from .freelie import LieError, LiePolynomial, Var, leaves
from .groupgrade import GradingSpec, GroupElement
from .scalars import FieldMode, MultiPoly, func_reduce


class GenericUTElement:
    """n x n upper-triangular matrix with MultiPoly entries (zero entries omitted)."""

    __slots__ = ("n", "entries", "field")

    def __init__(self, n: int, entries: dict, field: FieldMode):
        if any(i > j for i, j in entries):
            raise ValueError("strictly lower entries are not allowed")
        self.n = n
        self.field = field
        self.entries = {k: v for k, v in entries.items() if v}

    @classmethod
    def zero(cls, n, field) -> GenericUTElement:
        return cls(n, {}, field)

    def is_zero(self) -> bool:
        return not self.entries

    def __eq__(self, other):
        return isinstance(other, GenericUTElement) and self.entries == other.entries

    def __add__(self, other):
        out = dict(self.entries)
        for k, v in other.entries.items():
            out[k] = out[k] + v if k in out else v
        return GenericUTElement(self.n, out, self.field)

    def __sub__(self, other):
        out = dict(self.entries)
        for k, v in other.entries.items():
            out[k] = out[k] - v if k in out else -v
        return GenericUTElement(self.n, out, self.field)

    def scale(self, c):
        return GenericUTElement(self.n, {k: v.scale(c) for k, v in self.entries.items()}, self.field)

    def __matmul__(self, other) -> GenericUTElement:
        out = {}
        q = self.field.q
        for (i, j), a in self.entries.items():
            for (j2, k), b in other.entries.items():
                if j != j2:
                    continue
                prod = a * b
                out[(i, k)] = out[(i, k)] + prod if (i, k) in out else prod
        if q is not None:
            out = {k: func_reduce(v, q) for k, v in out.items()}
        return GenericUTElement(self.n, out, self.field)

    def commutator(self, other) -> GenericUTElement:
        return (self @ other) - (other @ self)

    def to_vector(self) -> dict:
        """Flatten to {(i, j, poly monomial): coefficient}."""
        return {(i, j, mono): c for (i, j), p in self.entries.items() for mono, c in p.terms.items()}

    def __repr__(self):
        return "UT(" + ", ".join(f"e{i+1}{j+1}:{p!r}" for (i, j), p in sorted(self.entries.items())) + ")"


def indeterminate_id(k: int, i: int, j: int) -> int:
    """Deterministic id for the indeterminate attached to slot k at position (i, j)."""
    return k * 16 + i * 4 + j


def generic_element(grading: GradingSpec, d: GroupElement, k: int,
                    mode: FieldMode | None = None) -> GenericUTElement:
    """Sum of one fresh indeterminate times each matrix unit of degree d."""
    mode = mode or FieldMode.rational()
    entries = {(i, j): MultiPoly.var(indeterminate_id(k, i, j), mode)
               for (i, j) in grading.positions(d)}
    return GenericUTElement(3, entries, mode)


def generic_ut2_element(k: int, mode: FieldMode | None = None) -> GenericUTElement:
    mode = mode or FieldMode.rational()
    entries = {(i, j): MultiPoly.var(indeterminate_id(k, i, j), mode)
               for i in range(2) for j in range(i, 2)}
    return GenericUTElement(2, entries, mode)


def evaluate_monomial(m, assignment: dict, memo: dict | None = None) -> GenericUTElement:
    if memo is None:
        memo = {}
    if m in memo:
        return memo[m]
    if isinstance(m, Var):
        try:
            r = assignment[m]
        except KeyError:
            raise LieError(f"unassigned variable {m.name()}") from None
    else:
        r = evaluate_monomial(m[0], assignment, memo).commutator(
            evaluate_monomial(m[1], assignment, memo))
    memo[m] = r
    return r


def evaluate(f: LiePolynomial, assignment: dict, memo: dict | None = None) -> GenericUTElement:
    if not assignment:
        raise LieError("empty assignment")
    some = next(iter(assignment.values()))
    out = GenericUTElement.zero(some.n, some.field)
    if memo is None:
        memo = {}
    for m, c in f.terms.items():
        out = out + evaluate_monomial(m, assignment, memo).scale(c)
    return out


def generic_assignment(variables, grading: GradingSpec, mode: FieldMode) -> dict:
    """One generic element per variable, slots allocated in sorted variable order."""
    return {v: generic_element(grading, v.degree, k, mode)
            for k, v in enumerate(sorted(variables))}


def is_identity(f: LiePolynomial, grading: GradingSpec, mode: FieldMode) -> bool:
    vs = f.variables()
    if not vs:
        return True
    return evaluate(f, generic_assignment(vs, grading, mode)).is_zero()


def is_identity_exhaustive(f: LiePolynomial, grading: GradingSpec, mode: FieldMode) -> bool:
    """Brute force over every homogeneous assignment with entries in F_q."""
    q = mode.q
    if q is None:
        raise LieError("exhaustive evaluation needs a finite field")
    vs = sorted(f.variables())
    slots = [(v, p) for v in vs for p in grading.positions(v.degree)]
    const = FieldMode.finite(q)
    for values in product(range(q), repeat=len(slots)):
        a = {v: {} for v in vs}
        for (v, pos), x in zip(slots, values):
            if x:
                a[v][pos] = MultiPoly.const(x, const)
        assignment = {v: GenericUTElement(3, e, const) for v, e in a.items()}
        if not evaluate(f, assignment).is_zero():
            return False
    return True


def variables_of(m) -> set:
    return set(leaves(m))

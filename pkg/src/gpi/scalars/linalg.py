"""Exact linear algebra over Q (fraction-free) and F_p.

Two tools live here. ``EchelonSpace`` is an incremental sparse row-echelon
basis used for every rank/containment question on component subspaces.
``solve_linear`` is the dense reference solver returning rank, kernel and the
reduced row echelon form.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm

from .field import FieldMode


def _to_int_row(vec: dict) -> dict:
    """Scale a rational sparse vector to a primitive integer one."""
    den = 1
    for v in vec.values():
        if isinstance(v, Fraction):
            den = lcm(den, v.denominator)
    if den != 1:
        vec = {k: int(v * den) for k, v in vec.items()}
    else:
        vec = {k: int(v) for k, v in vec.items() if v}
    return _primitive(vec)


def _primitive(vec: dict) -> dict:
    g = 0
    for v in vec.values():
        g = gcd(g, v)
        if g == 1:
            return vec
    if g > 1:
        return {k: v // g for k, v in vec.items()}
    return vec


class EchelonSpace:
    """Row-echelon basis of a subspace of sparse vectors (dict column -> scalar).

    Columns are any mutually comparable keys; the pivot of a row is its
    smallest column. Over Q rows are kept as primitive integer vectors, over
    F_p the pivot entry is normalised to 1.
    """

    def __init__(self, field: FieldMode):
        self.field = field
        self.p = field.p
        self.rows = {}

    def __len__(self):
        return len(self.rows)

    @property
    def rank(self) -> int:
        return len(self.rows)

    def copy(self) -> EchelonSpace:
        other = EchelonSpace(self.field)
        other.rows = dict(self.rows)
        return other

    def _prepare(self, vec: dict) -> dict:
        if self.p is None:
            return _to_int_row(vec)
        p = self.p
        out = {}
        for k, v in vec.items():
            if isinstance(v, Fraction):
                v = self.field.coerce(v)
            v %= p
            if v:
                out[k] = v
        return out

    def _reduce(self, v: dict) -> dict:
        rows = self.rows
        if not rows or not v:
            return v
        heap = [c for c in v if c in rows]
        if not heap:
            return v
        heapq.heapify(heap)
        p = self.p
        while heap:
            c = heapq.heappop(heap)
            a = v.get(c)
            if not a:
                continue
            r = rows[c]
            if p is None:
                b = r[c]
                g = gcd(a, b)
                ma, mb = b // g, a // g
                if ma != 1:
                    for k in v:
                        v[k] *= ma
                for k, x in r.items():
                    nv = v.get(k, 0) - mb * x
                    if nv:
                        if k not in v and k in rows and k != c:
                            heapq.heappush(heap, k)
                        v[k] = nv
                    else:
                        v.pop(k, None)
            else:
                for k, x in r.items():
                    nv = (v.get(k, 0) - a * x) % p
                    if nv:
                        if k not in v and k in rows:
                            heapq.heappush(heap, k)
                        v[k] = nv
                    else:
                        v.pop(k, None)
        if p is None and v:
            v = _primitive(v)
        return v

    def reduce(self, vec: dict) -> dict:
        """Residual of ``vec`` modulo the space (zero dict iff contained)."""
        return self._reduce(self._prepare(vec))

    def contains(self, vec: dict) -> bool:
        return not self.reduce(vec)

    def add(self, vec: dict) -> bool:
        """Insert ``vec``; return True if the rank grew."""
        v = self.reduce(vec)
        if not v:
            return False
        c = min(v)
        if self.p is None:
            if v[c] < 0:
                v = {k: -x for k, x in v.items()}
        else:
            inv = pow(v[c], -1, self.p)
            if inv != 1:
                v = {k: x * inv % self.p for k, x in v.items()}
        self.rows[c] = v
        return True

    def add_all(self, vecs) -> int:
        return sum(1 for v in vecs if self.add(v))

    def contains_space(self, other: EchelonSpace) -> bool:
        return all(self.contains(r) for r in other.rows.values())

    def equals(self, other: EchelonSpace) -> bool:
        return self.rank == other.rank and self.contains_space(other)

    def pivots(self) -> list:
        return sorted(self.rows)

    def basis(self) -> list:
        return [self.rows[c] for c in sorted(self.rows)]


@dataclass(frozen=True)
class ExactMatrix:
    """Dense matrix with entries in ``field``."""

    rows: tuple
    ncols: int
    field: FieldMode

    @classmethod
    def from_rows(cls, rows, field: FieldMode | None = None, ncols: int | None = None):
        field = field or FieldMode.rational()
        rows = tuple(tuple(field.coerce(Fraction(x)) if field.p is None else field.coerce(x)
                           for x in r) for r in rows)
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged matrix")
        return cls(rows, ncols, field)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    def mul_vec(self, vec) -> list:
        p = self.field.p
        out = []
        for r in self.rows:
            s = sum(a * b for a, b in zip(r, vec))
            out.append(s % p if p is not None else s)
        return out


@dataclass(frozen=True)
class LinearSolution:
    rank: int
    kernel_basis: list
    rref: ExactMatrix


def solve_linear(M: ExactMatrix) -> LinearSolution:
    """Gauss-Jordan elimination: rank, a kernel basis and the unique RREF."""
    field = M.field
    p = field.p
    if p is None:
        A = [[Fraction(x) for x in r] for r in M.rows]
    else:
        A = [[x % p for x in r] for r in M.rows]
    n, m = len(A), M.ncols
    pivots = []
    r = 0
    for c in range(m):
        piv = next((i for i in range(r, n) if A[i][c]), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = field.inv(A[r][c])
        A[r] = [x * inv % p for x in A[r]] if p is not None else [x * inv for x in A[r]]
        for i in range(n):
            if i != r and A[i][c]:
                f = A[i][c]
                if p is None:
                    A[i] = [a - f * b for a, b in zip(A[i], A[r])]
                else:
                    A[i] = [(a - f * b) % p for a, b in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == n:
            break
    free = [c for c in range(m) if c not in pivots]
    kernel = []
    for fc in free:
        v = [0] * m
        v[fc] = 1
        for i, pc in enumerate(pivots):
            v[pc] = (-A[i][fc]) % p if p is not None else -A[i][fc]
        kernel.append([field.coerce(x) for x in v])
    rref_rows = tuple(tuple(field.coerce(x) for x in row) for row in A)
    return LinearSolution(len(pivots), kernel, ExactMatrix(rref_rows, m, field))

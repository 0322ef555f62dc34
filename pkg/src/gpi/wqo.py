"""Higman order on finite sequences, commutator encodings and consequence witnesses."""
from __future__ import annotations

from dataclasses import dataclass

from .freelie import (LiePolynomial, Multidegree, Var, bracket_poly, comb_items, format_monomial,
                      left_normed, rename, substitute)
from .groupgrade import GradingSpec
from .scalars import FieldMode

KINDS = ("S", "V", "Sc", "C")
LESS, GREATER, EQUAL = "Less", "Greater", "Equal"


class WqoError(ValueError):
    pass


@dataclass(frozen=True)
class SeqNm:
    """Finite sequence of m-tuples of nonnegative integers."""

    entries: tuple
    m: int = 1

    def __post_init__(self):
        if self.m < 1:
            raise WqoError("arity must be at least 1")
        for e in self.entries:
            if len(e) != self.m or any(not isinstance(x, int) or x < 0 for x in e):
                raise WqoError(f"entry {e!r} is not a {self.m}-tuple of nonnegative integers")

    @classmethod
    def of(cls, values, m: int | None = None) -> SeqNm:
        """Build from ints (arity 1) or tuples."""
        entries = tuple(tuple(v) if isinstance(v, (tuple, list)) else (v,) for v in values)
        if m is None:
            m = len(entries[0]) if entries else 1
        return cls(entries, m)

    def __len__(self):
        return len(self.entries)

    def to_json(self):
        if self.m == 1:
            return [e[0] for e in self.entries]
        return [list(e) for e in self.entries]


def _dominated(a: tuple, b: tuple) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _embed(a, b, lo: int = 0, hi: int | None = None):
    """Greedy order-preserving match of the tuples ``a`` into b[lo:hi]; positions or None."""
    hi = len(b) if hi is None else hi
    out = []
    j = lo
    for x in a:
        while j < hi and not _dominated(x, b[j]):
            j += 1
        if j >= hi:
            return None
        out.append(j)
        j += 1
    return out


def higman_embedding(a: SeqNm, b: SeqNm):
    """The greedy injection psi (0-based positions) witnessing a <= b, or None."""
    if a.m != b.m:
        raise WqoError(f"arity mismatch: {a.m} vs {b.m}")
    return _embed(a.entries, b.entries)


def higman_leq(a: SeqNm, b: SeqNm) -> bool:
    return higman_embedding(a, b) is not None


@dataclass(frozen=True)
class CommutatorEncoding:
    kind: str
    seq: SeqNm
    k: int | None = None
    j: int | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise WqoError(f"unknown kind {self.kind!r}")
        want = 1 if self.kind in ("S", "C") else 2
        if self.seq.m != want:
            raise WqoError(f"{self.kind} encodings have arity {want}")
        if self.kind == "Sc" and (self.k is None or self.j is None):
            raise WqoError("Sc encodings carry k and j")

    def to_json(self):
        if self.kind == "Sc":
            return {"k": self.k, "j": self.j, "pairs": self.seq.to_json()}
        return self.seq.to_json()


def _sc_embedding(a: CommutatorEncoding, b: CommutatorEncoding):
    """Order-preserving psi with psi(k)=k', psi(j)=j' and entrywise domination (0-based)."""
    A, B = a.seq.entries, b.seq.entries
    k, j, k2, j2 = a.k - 1, a.j - 1, b.k - 1, b.j - 1
    if k2 >= len(B) or j2 >= len(B) or (k < j) != (k2 < j2):
        return None
    if not (_dominated(A[k], B[k2]) and _dominated(A[j], B[j2])):
        return None
    lo, hi = sorted((k, j))
    lo2, hi2 = sorted((k2, j2))
    parts = [(A[:lo], 0, lo2), (A[lo + 1:hi], lo2 + 1, hi2), (A[hi + 1:], hi2 + 1, len(B))]
    psi = []
    for seg, s, e in parts:
        got = _embed(seg, B, s, e)
        if got is None:
            return None
        psi.append(got)
    return psi[0] + [lo2] + psi[1] + [hi2] + psi[2]


def encoding_embedding(a: CommutatorEncoding, b: CommutatorEncoding):
    if a.kind != b.kind:
        raise WqoError(f"cannot compare {a.kind} with {b.kind} encodings")
    if a.kind == "Sc":
        return _sc_embedding(a, b)
    return higman_embedding(a.seq, b.seq)


def encoding_leq(a: CommutatorEncoding, b: CommutatorEncoding) -> bool:
    return encoding_embedding(a, b) is not None


# ---------------------------------------------------------------- encodings

def _monomial(c):
    if isinstance(c, LiePolynomial):
        if len(c.terms) != 1:
            raise WqoError("expected a single commutator")
        return next(iter(c.terms))
    return c


def _leaf_items(m) -> list:
    items = comb_items(m)
    if not all(isinstance(x, Var) for x in items):
        raise WqoError(f"{format_monomial(m)} is not a left-normed commutator of variables")
    return items


def _y_counts(items, what: str) -> dict:
    """Index -> count for a block of trivial variables listed in nondecreasing index order."""
    out = {}
    last = 0
    for y in items:
        if not y.trivial:
            raise WqoError(f"{what}: expected a trivial-degree variable, got {y.name()}")
        if y.index < last:
            raise WqoError(f"{what}: trivial-degree variables must appear in increasing index order")
        last = y.index
        out[y.index] = out.get(y.index, 0) + 1
    return out


def _vector(counts: dict, n: int) -> list:
    return [counts.get(i, 0) for i in range(1, n + 1)]


def _split_single(m):
    """[x, y...] with x nontrivial: returns (x, counts)."""
    items = _leaf_items(m)
    if items[0].trivial:
        raise WqoError(f"{format_monomial(m)} does not start with a nontrivial variable")
    return items[0], _y_counts(items[1:], format_monomial(m))


def _v_parts(m):
    """(x1, counts1, x2, counts2) for [x1, y.., x2, y..] or [[x1, y..], [x2, y..]]."""
    if not isinstance(m, Var) and not isinstance(m[1], Var):
        x1, c1 = _split_single(m[0])
        x2, c2 = _split_single(m[1])
        return x1, c1, x2, c2
    items = _leaf_items(m)
    nts = [i for i, x in enumerate(items) if not x.trivial]
    if len(nts) != 2 or nts[0] != 0:
        raise WqoError(f"{format_monomial(m)} is not of the form [x1, y.., x2, y..]")
    p = nts[1]
    what = format_monomial(m)
    return items[0], _y_counts(items[1:p], what), items[p], _y_counts(items[p + 1:], what)


def _sc_parts(m):
    """(j, p counts, z, q counts) for [y_j, y.., z, y..] of type 2."""
    items = _leaf_items(m)
    what = format_monomial(m)
    nts = [i for i, x in enumerate(items) if not x.trivial]
    if len(nts) != 1 or nts[0] < 2:
        raise WqoError(f"{what} is not of the form [y_j, y.., z, y..]")
    pos = nts[0]
    head, rest = items[0], items[1:pos]
    if not head.trivial:
        raise WqoError(f"{what} must start with a trivial-degree variable")
    p = _y_counts(rest, what)
    if min(p) >= head.index:
        raise WqoError(f"{what}: the leading index must exceed the smallest following index")
    p[head.index] = p.get(head.index, 0) + 1
    return head.index, p, items[pos], _y_counts(items[pos + 1:], what)


def encode(c, kind: str) -> CommutatorEncoding:
    m = _monomial(c)
    if kind in ("S", "C"):
        _, counts = _split_single(m)
        n = max(counts, default=0)
        return CommutatorEncoding(kind, SeqNm.of(_vector(counts, n), 1))
    if kind == "V":
        _, c1, _, c2 = _v_parts(m)
        n = max(list(c1) + list(c2), default=0)
        return CommutatorEncoding("V", SeqNm.of(list(zip(_vector(c1, n), _vector(c2, n))), 2))
    if kind == "Sc":
        j, p, _, q = _sc_parts(m)
        n = max(list(p) + list(q))
        k = min(s for s in p)
        return CommutatorEncoding("Sc", SeqNm.of(list(zip(_vector(p, n), _vector(q, n))), 2),
                                  k=k, j=j)
    raise WqoError(f"unknown kind {kind!r}; choose from {', '.join(KINDS)}")


def minimal_elements(C: list, kind: str) -> list:
    """The elements of C whose encodings are minimal; one representative per encoding."""
    encs = [encode(c, kind) for c in C]
    out = []
    for i, e in enumerate(encs):
        dominated = False
        for j, other in enumerate(encs):
            if i == j:
                continue
            if encoding_leq(other, e) and (not encoding_leq(e, other) or j < i):
                dominated = True
                break
        if not dominated:
            out.append(C[i])
    return out


# ---------------------------------------------------------------- linear orders

def _cmp(a, b) -> str:
    return LESS if a < b else GREATER if a > b else EQUAL


def compare_order(m1, m2, kind: str) -> str:
    a, b = _monomial(m1), _monomial(m2)
    if Multidegree.of(a) != Multidegree.of(b):
        raise WqoError("monomials of different multidegree")
    ea, eb = encode(a, kind), encode(b, kind)
    if kind == "Sc":
        if ea.k != eb.k:
            return _cmp(ea.k, eb.k)
        if ea.j != eb.j:
            return _cmp(ea.j, eb.j)
        qa = [q for _, q in ea.seq.entries]
        qb = [q for _, q in eb.seq.entries]
        # c1 <' c2 when (q'_1..q'_n) <_lex (q_1..q_n)
        if qb < qa:
            return LESS
        if qa < qb:
            return GREATER
        return EQUAL
    ka = [e[0] for e in ea.seq.entries]
    kb = [e[0] for e in eb.seq.entries]
    n = max(len(ka), len(kb))
    ka += [0] * (n - len(ka))
    kb += [0] * (n - len(kb))
    if sum(ka) != sum(kb):
        return _cmp(sum(ka), sum(kb))
    return _cmp(ka, kb)


def leading_monomial(f: LiePolynomial, kind: str):
    if not f.terms:
        raise WqoError("the zero polynomial has no leading monomial")
    best = None
    for m in sorted(f.terms, key=format_monomial):
        if best is None or compare_order(m, best, kind) == GREATER:
            best = m
    return best


# ---------------------------------------------------------------- realisations

def _y(i: int, grading: GradingSpec) -> Var:
    return Var.make(i, grading.group.identity)


def _ys(counts, grading: GradingSpec) -> list:
    out = []
    for i, c in enumerate(counts, start=1):
        out += [_y(i, grading)] * c
    return out


def realize(enc: CommutatorEncoding, grading: GradingSpec, x1: Var, x2: Var | None = None,
            double: bool = False):
    """A commutator with the given encoding built on the nontrivial variables x1 (and x2)."""
    if enc.kind in ("S", "C"):
        return left_normed(x1, *_ys([e[0] for e in enc.seq.entries], grading))
    ks = [e[0] for e in enc.seq.entries]
    ls = [e[1] for e in enc.seq.entries]
    if enc.kind == "V":
        if double:
            return (left_normed(x1, *_ys(ks, grading)), left_normed(x2, *_ys(ls, grading)))
        return left_normed(x1, *_ys(ks, grading), x2, *_ys(ls, grading))
    p = list(ks)
    p[enc.j - 1] -= 1
    return left_normed(_y(enc.j, grading), *_ys(p, grading), x1, *_ys(ls, grading))


# ---------------------------------------------------------------- witnesses

def _gap_ys(gaps: list, grading: GradingSpec) -> list:
    return _ys(gaps, grading)


def _rename_map(psi: list, grading: GradingSpec) -> dict:
    return {_y(i + 1, grading): _y(s + 1, grading) for i, s in enumerate(psi)}


def _renamed(f: LiePolynomial, mapping: dict) -> LiePolynomial:
    return LiePolynomial({rename(m, mapping): c for m, c in f.terms.items()})


def _padded(entries, n: int, width: int) -> list:
    out = [tuple(e) for e in entries]
    return out + [(0,) * width] * (n - len(out))


def _shifted(ea: CommutatorEncoding, psi: list, n: int) -> list:
    """Entries of ``ea`` moved to the positions psi, within length n."""
    out = [(0,) * ea.seq.m for _ in range(n)]
    for i, s in enumerate(psi):
        out[s] = ea.seq.entries[i]
    return out


def build_witness(f, h, kind: str, grading: GradingSpec) -> LiePolynomial:
    """The element of <f>^T produced by the substitutions and brackets from the order proofs."""
    fp = f if isinstance(f, LiePolynomial) else LiePolynomial.mono(f)
    fm, hm = _lead_for(fp, kind), _lead_for(h, kind)
    ea, eb = encode(fm, kind), encode(hm, kind)
    psi = encoding_embedding(ea, eb)
    if psi is None:
        raise WqoError(f"incomparable encodings: {ea.to_json()} and {eb.to_json()}")
    n = len(eb.seq)
    src = _shifted(ea, psi, n)
    dst = list(eb.seq.entries)
    w = _renamed(fp, _rename_map(psi, grading))
    gaps = [tuple(b - a for a, b in zip(s, d)) for s, d in zip(src, dst)]

    if kind == "S":
        x = comb_items(fm)[0]
        img = bracket_poly(LiePolynomial.mono(x), *_gap_ys([g[0] for g in gaps], grading))
        return substitute(w, {x: img})
    if kind == "C":
        return bracket_poly(w, *_gap_ys([g[0] for g in gaps], grading))
    if kind == "V":
        x1, _, x2, _ = _v_parts(fm)
        kgaps = _gap_ys([g[0] for g in gaps], grading)
        lgaps = _gap_ys([g[1] for g in gaps], grading)
        if not isinstance(fm[1], Var):
            # double bracket: both sides carry their own tail
            return substitute(w, {x1: bracket_poly(LiePolynomial.mono(x1), *kgaps),
                                  x2: bracket_poly(LiePolynomial.mono(x2), *lgaps)})
        w = substitute(w, {x1: bracket_poly(LiePolynomial.mono(x1), *kgaps)})
        return bracket_poly(w, *lgaps)
    # Sc: grow the part before z one variable at a time, then the tail
    _, _, z, _ = _sc_parts(fm)
    for y in _gap_ys([g[0] for g in gaps], grading):
        w = bracket_poly(w, y) - substitute(w, {z: bracket_poly(LiePolynomial.mono(z), y)})
    return bracket_poly(w, *_gap_ys([g[1] for g in gaps], grading))


def _lead_for(f, kind: str):
    if not isinstance(f, LiePolynomial):
        return f
    if kind == "C":
        ones = [m for m in f.terms if isinstance(m, Var) or not comb_items(m)[0].trivial]
        if len(ones) != 1:
            raise WqoError("expected exactly one commutator of the form [z, y..]")
        return ones[0]
    return leading_monomial(f, kind)


def consequence_witness(f, h, kind: str, grading: GradingSpec, mode: FieldMode,
                        bounds=None) -> dict:
    """Witness that h follows from f, and whether the bounded computation confirms it.

    For kind C the conclusion is that the witness has the same [z, y..] part as h
    up to a nonzero scalar.
    """
    from .evalut import is_identity
    from .tideal import Bounds, TIdealError, membership, normal_form
    from .theorems import theorem_spec

    fp = f if isinstance(f, LiePolynomial) else LiePolynomial.mono(f)
    hp = h if isinstance(h, LiePolynomial) else LiePolynomial.mono(h)
    w = build_witness(fp, hp, kind, grading)
    if kind == "C":
        A = _lead_for(hp, "C")
        spec = theorem_spec(grading.cls, grading)
        try:
            coefs = normal_form(w, spec, mode, grading)
        except TIdealError:
            return {"witness": w, "verified": False}
        hit = [c for c, b in coefs if b == A]
        return {"witness": w, "verified": bool(hit and hit[0])}
    if is_identity(hp - w, grading, mode):
        return {"witness": w, "verified": True}
    deg = max(D.total for D in hp.components())
    bounds = bounds or Bounds(max_deg=max(deg, 1))
    try:
        ok = membership(hp, [fp], grading, mode, bounds)
    except TIdealError:
        ok = False
    return {"witness": w, "verified": ok}

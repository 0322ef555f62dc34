import random
from fractions import Fraction
from math import factorial, gcd
from functools import reduce

import pytest

from conftest import P, Q, F2
from gpi.evalut import evaluate, generic_ut2_element
from gpi.freelie import (LieError, LiePolynomial, Multidegree, Var, expand_assoc, left_normed,
                         spanning_monomials, theorem_basis, ut2_y_basis)
from gpi.groupgrade import GroupDescriptor
from gpi.scalars import EchelonSpace

Z = GroupDescriptor.parse("Z")


def v(i, d=0):
    return Var.make(i, Z.element([d]))


def add(*ds):
    out = {}
    for d in ds:
        for w, c in d.items():
            out[w] = out.get(w, 0) + c
    return {w: c for w, c in out.items() if c}


def rank_of(exps):
    words = sorted({w for e in exps for w in e})
    idx = {w: i for i, w in enumerate(words)}
    E = EchelonSpace(Q)
    for e in exps:
        E.add({idx[w]: Fraction(c) for w, c in e.items()})
    return E.rank


def mobius(n):
    out, k = 1, 2
    while k * k <= n:
        if n % k == 0:
            n //= k
            if n % k == 0:
                return 0
            out = -out
        k += 1
    return -out if n > 1 else out


def witt_dimension(counts):
    """Fine-graded free Lie algebra dimension by the necklace formula."""
    n = sum(counts)
    g = reduce(gcd, counts)
    total = 0
    for d in range(1, g + 1):
        if g % d == 0:
            term = factorial(n // d)
            for c in counts:
                term //= factorial(c // d)
            total += mobius(d) * term
    return total // n


def test_parse_examples(U, AC):
    f = P("[y1,y2]", U)
    assert f.terms == {(v(1).__class__.make(1, U.group.identity),
                        Var.make(2, U.group.identity)): 1}
    g = P("[x1@(1,0), y1^2, x2@(0,1)]", U)
    y1 = Var.make(1, U.group.identity)
    x1, x2 = Var.make(1, U.g), Var.make(2, U.h)
    assert g.terms == {left_normed(x1, y1, y1, x2): 1}
    h = P("[[z1,y1],[z2]]", AC)
    z1, z2 = Var.make(1, AC.g), Var.make(2, AC.g)
    assert h.terms == {((z1, Var.make(1, AC.group.identity)), z2): 1}


def test_parse_coefficients_and_errors(U):
    f = P("2*[y1,y2] - 1/2*[y2,y1]", U)
    assert f.format() == "2*[y1,y2] - 1/2*[y2,y1]" or len(f.terms) == 2
    with pytest.raises(LieError, match="position"):
        P("[y1,,y2]", U)
    with pytest.raises(LieError):
        P("[x1@(1), y1]", U)
    with pytest.raises(LieError):
        P("[]", U)


def test_expand_examples():
    a, b, c = v(1), v(2), v(3)
    assert expand_assoc((a, b)) == {(a, b): 1, (b, a): -1}
    assert expand_assoc((a, a)) == {}
    assert expand_assoc(((a, b), c)) == {(a, b, c): 1, (b, a, c): -1, (c, a, b): -1, (c, b, a): 1}


def random_monomial(rng, depth=2):
    if depth == 0 or rng.random() < 0.3:
        return v(rng.randrange(1, 4))
    return (random_monomial(rng, depth - 1), random_monomial(rng, depth - 1))


def test_antisymmetry_and_jacobi():
    rng = random.Random(5)
    for _ in range(200):
        a, b, c = (random_monomial(rng) for _ in range(3))
        assert add(expand_assoc((a, b)), expand_assoc((b, a))) == {}
        assert add(expand_assoc(((a, b), c)), expand_assoc(((b, c), a)),
                   expand_assoc(((c, a), b))) == {}


def test_spanning_examples():
    a, b, c = v(1), v(2), v(3)
    m = spanning_monomials(Multidegree({a: 1, b: 1}))
    assert set(m) == {(a, b), (b, a)} and rank_of([expand_assoc(x) for x in m]) == 1
    m = spanning_monomials(Multidegree({a: 1, b: 1, c: 1}))
    assert len(m) == 6 and rank_of([expand_assoc(x) for x in m]) == 2
    m = spanning_monomials(Multidegree({a: 2}))
    assert m == [(a, a)] and rank_of([expand_assoc(x) for x in m]) == 0


def all_count_vectors(max_total):
    out = []

    def go(prefix, room):
        if prefix and sum(prefix) >= 1:
            out.append(tuple(prefix))
        if len(prefix) == 4:
            return
        for c in range(1, room + 1):
            go(prefix + [c], room - c)

    go([], max_total)
    return out


@pytest.mark.parametrize("counts", all_count_vectors(4))
def test_spanning_rank_matches_witt(counts):
    D = Multidegree({v(i + 1): c for i, c in enumerate(counts)})
    exps = [expand_assoc(m) for m in spanning_monomials(D)]
    assert rank_of(exps) == witt_dimension(counts)


def test_ut2_examples():
    y1, y2 = v(1), v(2)
    assert ut2_y_basis(Multidegree({y1: 1, y2: 1})) == [(y2, y1)]
    assert ut2_y_basis(Multidegree({y1: 2})) == []
    assert ut2_y_basis(Multidegree({y1: 2, y2: 1})) == [left_normed(y2, y1, y1)]
    with pytest.raises(LieError):
        ut2_y_basis(Multidegree({y1: 1, y2: 1}), F2)


@pytest.mark.parametrize("counts", [(1, 1), (2, 1), (1, 2), (1, 1, 1), (2, 2), (2, 1, 1),
                                    (1, 1, 1, 1), (3, 1), (1, 2, 1), (2, 1, 2)])
def test_ut2_basis_independent_on_generic_ut2(counts):
    D = Multidegree({v(i + 1): c for i, c in enumerate(counts)})
    basis = ut2_y_basis(D)
    assign = {v(i + 1): generic_ut2_element(i) for i in range(len(counts))}
    vecs = [evaluate(LiePolynomial.mono(b), assign).to_vector() for b in basis]
    keys = sorted({k for x in vecs for k in x})
    idx = {k: i for i, k in enumerate(keys)}
    E = EchelonSpace(Q)
    for x in vecs:
        assert E.add({idx[k]: c for k, c in x.items()})


def test_theorem_basis_examples(U, AU, AC):
    y1 = Var.make(1, U.group.identity)
    e1, e2 = Var.make(1, U.g), Var.make(1, U.h)
    got = theorem_basis("Universal", Multidegree({e1: 1, e2: 1, y1: 1}), Q, U)
    assert set(got) == {left_normed(e1, y1, e2), left_normed(e1, e2, y1)}
    xg, xh = Var.make(1, AU.g), Var.make(1, AU.h)
    assert theorem_basis("AlmostUniversal", Multidegree({xg: 1, xh: 1}), Q, AU) == [(xg, xh)]
    z1, z2 = Var.make(1, AC.g), Var.make(2, AC.g)
    y = Var.make(1, AC.group.identity)
    got = theorem_basis("AlmostCanonical", Multidegree({z1: 1, z2: 1, y: 1}), Q, AC)
    assert set(got) == {((z1, y), z2), (z1, (z2, y))}
    assert theorem_basis("AlmostCanonical", Multidegree({z1: 3}), Q, AC) == []


def test_theorem_basis_degrees(U, AU, AC, R):
    from gpi.tideal import Bounds, enumerate_multidegrees
    from gpi.freelie import leaves
    for G in (U, AU, AC, R):
        for D in enumerate_multidegrees(G, Bounds(max_deg=4)):
            for b in theorem_basis(G.cls, D, Q, G):
                assert Multidegree.of(b) == D
                deg = G.group.identity
                for leaf in leaves(b):
                    deg = deg * leaf.degree
                assert deg == D.gdegree(G.group.identity)

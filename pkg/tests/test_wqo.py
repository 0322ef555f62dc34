import random
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from conftest import P, Q
from gpi.freelie import LiePolynomial, Var, left_normed
from gpi.groupgrade import named_grading
from gpi.wqo import (EQUAL, GREATER, LESS, SeqNm, WqoError, compare_order, consequence_witness,
                     encode, encoding_leq, higman_leq, leading_monomial, minimal_elements)

U = named_grading("universal")
AU = named_grading("almost-universal")
AC = named_grading("almost-canonical")
R = named_grading("remaining")


def y(i, G=U):
    return Var.make(i, G.group.identity)


def block(counts, G=U):
    out = []
    for i, c in enumerate(counts, start=1):
        out += [y(i, G)] * c
    return out


def S_mono(x, ks, G=U):
    return LiePolynomial.mono(left_normed(x, *block(ks, G)))


def V_mono(ks, ls):
    return LiePolynomial.mono(left_normed(Var.make(1, U.g), *block(ks), Var.make(1, U.h),
                                          *block(ls)))


def AU_mono(ks, ls):
    a = left_normed(Var.make(1, AU.g), *block(ks, AU))
    b = left_normed(Var.make(1, AU.h), *block(ls, AU))
    return LiePolynomial.mono((a, b))


def Sc_mono(j, p, q):
    """Type-2 commutator: p counts the part before z including the leading y_j."""
    rest = list(p)
    rest[j - 1] -= 1
    return LiePolynomial.mono(left_normed(y(j, R), *block(rest, R), Var.make(1, R.g),
                                          *block(q, R)))


def brute_leq(a, b):
    for pos in combinations(range(len(b)), len(a)):
        if all(all(x <= z for x, z in zip(a[i], b[p])) for i, p in enumerate(pos)):
            return True
    return False


# ---------------------------------------------------------------- examples

def test_higman_examples():
    assert higman_leq(SeqNm.of([1, 2]), SeqNm.of([0, 1, 3]))
    assert not higman_leq(SeqNm.of([2]), SeqNm.of([1, 1]))
    assert higman_leq(SeqNm.of([(1, 0)]), SeqNm.of([(2, 1)]))
    assert higman_leq(SeqNm.of([]), SeqNm.of([3]))
    with pytest.raises(WqoError):
        higman_leq(SeqNm.of([1]), SeqNm.of([(1, 1)]))


def test_encode_examples():
    assert encode(P("[x1@(1,0),y1^2,y2]", U), "S").to_json() == [2, 1]
    assert encode(P("[x1@(1,0),y1,x1@(0,1),y1^2]", U), "V").to_json() == [[1, 2]]
    assert encode(P("[y2,y1,z,y1]", R), "Sc").to_json() == {"k": 1, "j": 2,
                                                            "pairs": [[1, 1], [1, 0]]}
    assert encode(P("[[x1@(1),y1],[x1@(-1),y2^2]]", AU), "V").to_json() == [[1, 0], [0, 2]]
    assert encode(P("[z,y2]", R), "C").to_json() == [0, 1]


def test_encode_pattern_errors():
    with pytest.raises(WqoError):
        encode(P("[y1,x1@(1,0)]", U), "S")
    with pytest.raises(WqoError):
        encode(P("[x1@(1,0),y2,y1]", U), "S")
    with pytest.raises(WqoError):
        encode(P("[y1,y2,z]", R), "Sc")
    with pytest.raises(WqoError):
        encode(P("[x1@(1,0),y1]", U), "V")


def test_minimal_examples():
    C = [P(s, U) for s in ("[x1@(1,0),y1]", "[x1@(1,0),y1^2]", "[x1@(1,0),y1,y2]")]
    assert minimal_elements(C, "S") == [C[0]]
    assert minimal_elements(C[:1], "S") == C[:1]
    assert minimal_elements(C[1:], "S") == C[1:]


def test_compare_examples():
    a = P("[x1@(1,0),x1@(0,1),y1]", U)
    b = P("[x1@(1,0),y1,x1@(0,1)]", U)
    assert compare_order(a, b, "V") == LESS
    assert compare_order(a, a, "V") == EQUAL
    c = P("[x1@(1,0),y1,y2^0,x1@(0,1),y2]", U)
    d = P("[x1@(1,0),y2,x1@(0,1),y1]", U)
    assert compare_order(c, d, "V") == GREATER
    with pytest.raises(WqoError):
        compare_order(a, P("[x1@(1,0),y1,y1,x1@(0,1)]", U), "V")


def test_leading_examples():
    f = P("[x1@(1,0),x1@(0,1),y1] + [x1@(1,0),y1,x1@(0,1)]", U)
    assert LiePolynomial.mono(leading_monomial(f, "V")).equals(P("[x1@(1,0),y1,x1@(0,1)]", U))
    g = P("[x1@(1,0),y1,x1@(0,1)]", U)
    assert LiePolynomial.mono(leading_monomial(g, "V")).equals(g)
    # k = 1 versus k = 2 over the same multidegree {y1, y2^2, y3, z}
    c1 = Sc_mono(3, [1, 1, 1], [0, 1, 0])
    c2 = Sc_mono(3, [0, 1, 1], [1, 1, 0])
    assert encode(c1, "Sc").k == 1 and encode(c2, "Sc").k == 2
    assert LiePolynomial.mono(leading_monomial(c1 + c2, "Sc")).equals(c2)
    with pytest.raises(WqoError):
        leading_monomial(LiePolynomial(), "V")


def test_witness_examples():
    r = consequence_witness(P("[x1@(1,0),y1]", U), P("[x1@(1,0),y1^2]", U), "S", U, Q)
    assert r["witness"].equals(P("[x1@(1,0),y1,y1]", U)) and r["verified"]
    f = P("[x1@(1,0),y1]", U)
    r = consequence_witness(f, f, "S", U, Q)
    assert r["witness"].equals(f) and r["verified"]
    r = consequence_witness(P("[x1@(1,0),x1@(0,1)]", U), P("[x1@(1,0),y1,x1@(0,1)]", U),
                            "V", U, Q)
    assert r["witness"].equals(P("[x1@(1,0),y1,x1@(0,1)]", U)) and r["verified"]
    with pytest.raises(WqoError):
        consequence_witness(P("[x1@(1,0),y1^2]", U), P("[x1@(1,0),y1,y2]", U), "S", U, Q)


# ---------------------------------------------------------------- higman properties

def rand_seq(rng, m, maxlen=5, top=3):
    return tuple(tuple(rng.randrange(top + 1) for _ in range(m))
                 for _ in range(rng.randrange(maxlen + 1)))


def dominate(rng, a, m, extra=2, top=2):
    """A sequence that a embeds into."""
    out = []
    for e in a:
        for _ in range(rng.randrange(extra + 1)):
            out.append(tuple(rng.randrange(top + 1) for _ in range(m)))
        out.append(tuple(x + rng.randrange(top + 1) for x in e))
    return tuple(out)


def test_higman_reflexive_transitive_1000_triples():
    rng = random.Random(7)
    chains = 0
    for t in range(1000):
        m = 1 + t % 2
        if t % 2:
            a = rand_seq(rng, m)
            b = dominate(rng, a, m)
            c = dominate(rng, b, m)
        else:
            a, b, c = (rand_seq(rng, m) for _ in range(3))
        A, B, C = (SeqNm(x, m) for x in (a, b, c))
        assert higman_leq(A, A)
        assert higman_leq(A, B) == brute_leq(a, b)
        if higman_leq(A, B) and higman_leq(B, C):
            chains += 1
            assert higman_leq(A, C)
        if higman_leq(A, B) and higman_leq(B, A):
            assert a == b
    assert chains >= 500


seqs = st.integers(1, 2).flatmap(lambda m: st.tuples(
    st.just(m), st.lists(st.tuples(*[st.integers(0, 3)] * m), max_size=5),
    st.lists(st.tuples(*[st.integers(0, 3)] * m), max_size=5)))


@settings(max_examples=300, deadline=None)
@given(seqs)
def test_greedy_matches_brute_force(case):
    m, a, b = case
    assert higman_leq(SeqNm(tuple(a), m), SeqNm(tuple(b), m)) == brute_leq(a, b)


# ---------------------------------------------------------------- minimal elements

def test_minimal_elements_200_sets():
    rng = random.Random(11)
    for t in range(200):
        kind = "S" if t % 2 else "V"
        C = []
        for _ in range(rng.randrange(1, 9)):
            n = rng.randrange(0, 4)
            if kind == "S":
                C.append(S_mono(Var.make(1, U.g), [rng.randrange(3) for _ in range(n)]))
            else:
                C.append(V_mono([rng.randrange(3) for _ in range(n)],
                                [rng.randrange(3) for _ in range(n)]))
        out = minimal_elements(C, kind)
        enc = {id(c): encode(c, kind) for c in C}
        for a in out:
            for b in out:
                if a is not b:
                    assert not encoding_leq(enc[id(a)], enc[id(b)])
        for c in C:
            assert any(encoding_leq(enc[id(m)], enc[id(c)]) for m in out)


def test_minimal_elements_sc():
    C = [Sc_mono(2, [1, 1], [1, 0]), Sc_mono(2, [1, 1], [2, 0]), Sc_mono(3, [1, 0, 1], [0, 0, 0]),
         Sc_mono(3, [1, 1, 1], [0, 0, 0])]
    assert minimal_elements(C, "Sc") == [C[0], C[2]]
    # plain Higman embeds a into b, but psi(j) = j' is required
    a = encode(Sc_mono(2, [1, 2], [0, 0]), "Sc")
    b = encode(Sc_mono(2, [1, 1, 2], [0, 0, 0]), "Sc")
    assert higman_leq(a.seq, b.seq)
    assert not encoding_leq(a, b)


# ---------------------------------------------------------------- witnesses

def grow(rng, base, room):
    """Random entrywise increase of ``base`` plus inserted entries, bounded by room."""
    out = []
    for b in base:
        while room and rng.random() < 0.25:
            out.append(1)
            room -= 1
        add = rng.randrange(room + 1) if room else 0
        room -= add
        out.append(b + add)
    while room and rng.random() < 0.3:
        out.append(1)
        room -= 1
    return out


def s_pairs(rng, count):
    pairs = []
    opts = [(U, U.g), (U, U.h), (U, U.g * U.h), (AU, AU.g), (AU, AU.h), (AC, AC.g)]
    while len(pairs) < count:
        G, d = opts[len(pairs) % len(opts)]
        x = Var.make(1, d)
        base = [rng.randrange(3) for _ in range(rng.randrange(0, 3))]
        f = S_mono(x, base, G)
        h = S_mono(x, grow(rng, base, 5 - sum(base)), G)
        if encoding_leq(encode(f, "S"), encode(h, "S")):
            pairs.append((G, f, h))
    return pairs


def v_pairs(rng, count):
    pairs = []
    while len(pairs) < count:
        n = rng.randrange(0, 3)
        ks = [rng.randrange(2) for _ in range(n)]
        ls = [rng.randrange(2) for _ in range(n)]
        room = 5 - sum(ks) - sum(ls)
        k2 = grow(rng, ks, room // 2)
        l2 = [0] * len(k2)
        # embed ls at the same positions k2 used for ks, then add slack
        pos = _positions(ks, k2)
        for i, p in enumerate(pos):
            l2[p] = ls[i]
        for i in range(len(l2)):
            l2[i] += rng.randrange(2) if room - room // 2 > 0 and rng.random() < 0.3 else 0
        if len(pairs) % 2:
            G, f, h = AU, AU_mono(ks, ls), AU_mono(k2, l2)
        else:
            G, f, h = U, V_mono(ks, ls), V_mono(k2, l2)
        if encoding_leq(encode(f, "V"), encode(h, "V")):
            pairs.append((G, f, h))
    return pairs


def _positions(a, b):
    """Positions of b matched by a when ``grow`` built b from a (first fit)."""
    out, j = [], 0
    for x in a:
        while b[j] < x:
            j += 1
        out.append(j)
        j += 1
    return out


def sc_pairs(rng, count):
    pairs = []
    while len(pairs) < count:
        n = rng.randrange(2, 4)
        k = rng.randrange(1, n)
        j = rng.randrange(k + 1, n + 1)
        p = [0] * n
        p[k - 1] = 1
        p[j - 1] += 1
        q = [rng.randrange(2) if rng.random() < 0.4 else 0 for _ in range(n)]
        f = Sc_mono(j, p, q)
        # h: insert fresh indices after k, raise entries at indices >= k
        p2, q2, idx = [], [], {}
        for i in range(1, n + 1):
            if i > k and rng.random() < 0.3:
                p2.append(rng.randrange(2))
                q2.append(rng.randrange(2))
            idx[i] = len(p2) + 1
            p2.append(p[i - 1] + (rng.randrange(2) if i >= k else 0))
            q2.append(q[i - 1] + rng.randrange(2))
        h = Sc_mono(idx[j], p2, q2)
        if sum(p2) + sum(q2) > 6:
            continue
        if encoding_leq(encode(f, "Sc"), encode(h, "Sc")):
            pairs.append((R, f, h))
    return pairs


def c_pairs(rng, count):
    pairs = []
    z = Var.make(1, R.g)
    while len(pairs) < count:
        base = [rng.randrange(2) for _ in range(rng.randrange(0, 3))]
        f = S_mono(z, base, R)
        h = S_mono(z, grow(rng, base, 4 - sum(base)), R)
        if encoding_leq(encode(f, "C"), encode(h, "C")):
            pairs.append((R, f, h))
    return pairs


@pytest.mark.parametrize("kind,maker", [("S", s_pairs), ("V", v_pairs), ("Sc", sc_pairs),
                                        ("C", c_pairs)])
def test_witness_100_random_pairs(kind, maker):
    rng = random.Random(hash(kind) & 0xFFFF)
    pairs = maker(rng, 100)
    assert len(pairs) == 100
    for G, f, h in pairs:
        r = consequence_witness(f, h, kind, G, Q)
        assert r["verified"], (kind, f.format(), h.format(), r["witness"].format())


# ---------------------------------------------------------------- order compatibility

def _same_multidegree_v(rng):
    n = rng.randrange(1, 4)
    tot = [rng.randrange(1, 3) for _ in range(n)]
    k1 = [rng.randrange(t + 1) for t in tot]
    k2 = [rng.randrange(t + 1) for t in tot]
    return (k1, [t - a for t, a in zip(tot, k1)]), (k2, [t - a for t, a in zip(tot, k2)])


def test_order_compatibility_v_200_pairs():
    rng = random.Random(13)
    done = 0
    while done < 200:
        (k1, l1), (k2, l2) = _same_multidegree_v(rng)
        o = compare_order(V_mono(k1, l1), V_mono(k2, l2), "V")
        if o == EQUAL:
            continue
        if o == GREATER:
            (k1, l1), (k2, l2) = (k2, l2), (k1, l1)
        n = len(k1)
        i = rng.randrange(n)
        inc = lambda v: [x + (t == i) for t, x in enumerate(v)]
        cases = [
            (V_mono(k1 + [1], l1 + [0]), V_mono(k2 + [1], l2 + [0])),
            (V_mono(k1 + [0], l1 + [1]), V_mono(k2 + [0], l2 + [1])),
            (V_mono(inc(k1), l1), V_mono(inc(k2), l2)),
            (V_mono(k1, inc(l1)), V_mono(k2, inc(l2))),
        ]
        for a, b in cases:
            assert compare_order(a, b, "V") == LESS
        done += 1


def _random_sc(rng, n, total_p, total_q):
    while True:
        p = [0] * n
        for _ in range(total_p):
            p[rng.randrange(n)] += 1
        nz = [i + 1 for i in range(n) if p[i]]
        heads = [j for j in nz if j > min(nz)]
        if len(nz) >= 1 and sum(p) >= 2 and heads:
            break
    q = [0] * n
    for _ in range(total_q):
        q[rng.randrange(n)] += 1
    return rng.choice(heads), p, q


def _sc_pair_same_multidegree(rng):
    n = rng.randrange(2, 4)
    while True:
        j1, p1, q1 = _random_sc(rng, n, rng.randrange(2, 4), rng.randrange(0, 3))
        tot = [a + b for a, b in zip(p1, q1)]
        # split the same totals differently
        p2 = [rng.randrange(t + 1) for t in tot]
        q2 = [t - a for t, a in zip(tot, p2)]
        nz = [i + 1 for i in range(n) if p2[i]]
        heads = [j for j in nz if j > min(nz)] if nz else []
        if sum(p2) >= 2 and heads:
            return (j1, p1, q1), (rng.choice(heads), p2, q2)


def test_order_compatibility_remaining_200_pairs():
    rng = random.Random(17)
    done = 0
    while done < 200:
        a, b = _sc_pair_same_multidegree(rng)
        o = compare_order(Sc_mono(*a), Sc_mono(*b), "Sc")
        if o == EQUAL:
            continue
        if o == GREATER:
            a, b = b, a
        (j1, p1, q1), (j2, p2, q2) = a, b
        n = len(p1)
        k2 = encode(Sc_mono(*b), "Sc").k
        i = rng.randrange(n)
        inc = lambda v, t: [x + (s == t) for s, x in enumerate(v)]
        # (i) one more y_i after z; (ii) y_{n+1} appended at the end
        assert compare_order(Sc_mono(j1, p1, inc(q1, i)), Sc_mono(j2, p2, inc(q2, i)), "Sc") == LESS
        assert compare_order(Sc_mono(j1, p1 + [0], q1 + [1]), Sc_mono(j2, p2 + [0], q2 + [1]),
                             "Sc") == LESS
        # (iii) two-term forms for k' <= t <= n
        t = rng.randrange(k2 - 1, n)
        c1 = Sc_mono(j1, p1, inc(q1, t)) - Sc_mono(j1, inc(p1, t), q1)
        c2 = Sc_mono(j2, p2, inc(q2, t)) - Sc_mono(j2, inc(p2, t), q2)
        m1, m2 = leading_monomial(c1, "Sc"), leading_monomial(c2, "Sc")
        assert LiePolynomial.mono(m1).equals(Sc_mono(j1, inc(p1, t), q1))
        assert LiePolynomial.mono(m2).equals(Sc_mono(j2, inc(p2, t), q2))
        assert compare_order(m1, m2, "Sc") == LESS
        # (iv) y_{n+1} before z versus at the end
        d1 = Sc_mono(j1, p1 + [0], q1 + [1]) - Sc_mono(j1, p1 + [1], q1 + [0])
        d2 = Sc_mono(j2, p2 + [0], q2 + [1]) - Sc_mono(j2, p2 + [1], q2 + [0])
        m1, m2 = leading_monomial(d1, "Sc"), leading_monomial(d2, "Sc")
        assert LiePolynomial.mono(m1).equals(Sc_mono(j1, p1 + [1], q1 + [0]))
        assert compare_order(m1, m2, "Sc") == LESS
        done += 1


def test_compare_total_order_on_random_triples():
    rng = random.Random(19)
    for _ in range(200):
        tot = [rng.randrange(1, 3) for _ in range(rng.randrange(1, 4))]
        monos = []
        for _ in range(3):
            ks = [rng.randrange(t + 1) for t in tot]
            monos.append(V_mono(ks, [t - a for t, a in zip(tot, ks)]))
        a, b, c = monos
        ab, ba = compare_order(a, b, "V"), compare_order(b, a, "V")
        assert {ab, ba} in ({LESS, GREATER}, {EQUAL})
        assert (ab == EQUAL) == a.equals(b)
        if ab == LESS and compare_order(b, c, "V") == LESS:
            assert compare_order(a, c, "V") == LESS

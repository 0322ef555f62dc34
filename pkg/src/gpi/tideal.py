"""Bounded-multidegree T-ideal computations.

Everything is carried out in *reduced coordinates*: a Lie element of a
multihomogeneous component L_D is identified with the values of its
associative expansion at the pivot words of an echelon basis of L_D. This
restriction is injective on L_D and costs one dictionary lookup per word.

Over a finite field the T-ideal of identities is not multihomogeneous. It is
still graded by the set of variables, by G-degree and by every variable's
multiplicity modulo q-1 (scalar substitutions x -> a*x separate these
classes). Finite-mode computations therefore run on a *cluster*: all bounded
multidegrees sharing those three invariants.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from itertools import combinations, product

from .evalut import generic_assignment, evaluate_monomial, is_identity
from .freelie import (LiePolynomial, Multidegree, Var, distinct_permutations,
                      expand_assoc, expand_bracket_right, leaves, spanning_monomials)
from .groupgrade import GradingSpec, GroupHom
from .scalars import EchelonSpace, ExactMatrix, FieldMode, solve_linear

KERNEL_OFFSET = 10 ** 9


class TIdealError(ValueError):
    pass


@dataclass(frozen=True)
class Bounds:
    max_deg: int = 5
    max_nontrivial: int = 2
    max_y: int = 3

    def as_dict(self) -> dict:
        return {"max_deg": self.max_deg, "max_nontrivial": self.max_nontrivial,
                "max_y": self.max_y}


# ---------------------------------------------------------------- free components

@dataclass
class FreeComponent:
    multidegree: Multidegree
    monomials: list          # basis monomials (a subset of the spanning set)
    expansions: list         # their associative expansions
    pivot_words: list
    spanning_count: int


def _commute(a: dict, b: dict) -> dict:
    out = {}
    for wa, ca in a.items():
        for wb, cb in b.items():
            c = ca * cb
            w = wa + wb
            out[w] = out.get(w, 0) + c
            w = wb + wa
            out[w] = out.get(w, 0) - c
    return {w: c for w, c in out.items() if c}


@lru_cache(maxsize=4096)
def free_component(D: Multidegree, p: int | None) -> FreeComponent:
    """Echelon data of L_D over Q (p None) or F_p."""
    mode = FieldMode.rational() if p is None else FieldMode.prime_infinite(p)
    words = list(distinct_permutations(D.multiset()))
    index = {w: i for i, w in enumerate(words)}
    ech = EchelonSpace(mode)
    monos, exps = [], []
    span = spanning_monomials(D)
    for m in span:
        e = expand_assoc(m)
        if ech.add({index[w]: c for w, c in e.items()}):
            monos.append(m)
            exps.append(e)
    pivots = [words[c] for c in ech.pivots()]
    return FreeComponent(D, monos, exps, pivots, len(span))


def free_dimension(D: Multidegree, p: int | None = None) -> int:
    return len(free_component(D, p).monomials)


# ---------------------------------------------------------------- component spaces

class ComponentSpace:
    """Direct sum of L_D over ``members`` in reduced coordinates.

    A single member is the ordinary multihomogeneous component. Several
    members form a finite-field cluster; they must share the variable set.
    """

    def __init__(self, grading: GradingSpec, members, mode: FieldMode):
        self.grading = grading
        self.mode = mode
        self.members = sorted(members)
        if not self.members:
            raise TIdealError("empty component")
        vs = {tuple(D.variables()) for D in self.members}
        if len(vs) != 1:
            raise TIdealError("cluster members must share their variables")
        self.variables = list(vs.pop())
        self.p = mode.p
        self.offsets = {}
        self.pivot_index = {}
        self.components = {}
        off = 0
        for D in self.members:
            fc = free_component(D, self.p)
            self.components[D] = fc
            self.offsets[D] = off
            for i, w in enumerate(fc.pivot_words):
                self.pivot_index[w] = off + i
            off += len(fc.pivot_words)
        self.dim = off
        self.assignment = generic_assignment(self.variables, grading, mode)
        self._memo = {}
        self._eval_cols = {}
        self._kernel = None
        self._eval_rank = None

    @property
    def single(self) -> Multidegree:
        if len(self.members) != 1:
            raise TIdealError("component is a cluster")
        return self.members[0]

    def __contains__(self, D):
        return D in self.offsets

    # coordinates
    def coords(self, expansion: dict) -> dict:
        out = {}
        p = self.p
        idx = self.pivot_index
        for w, c in expansion.items():
            i = idx.get(w)
            if i is not None:
                if p is not None:
                    c %= p
                if c:
                    out[i] = c
        return out

    def coords_of(self, f: LiePolynomial) -> dict:
        for D in f.components():
            if D not in self.offsets:
                raise TIdealError(f"multidegree {D} is outside this component")
        return self.coords(f.expand())

    def basis_pairs(self):
        """(monomial, coordinate vector) for the basis monomials of every member."""
        for D in self.members:
            fc = self.components[D]
            for m, e in zip(fc.monomials, fc.expansions):
                yield m, self.coords(e)

    # evaluation
    def eval_vector(self, f) -> dict:
        """Generic evaluation of a monomial or LiePolynomial as a sparse vector."""
        terms = f.terms.items() if isinstance(f, LiePolynomial) else [(f, 1)]
        out = {}
        p = self.p
        cols = self._eval_cols
        for m, c in terms:
            val = evaluate_monomial(m, self.assignment, self._memo)
            for key, x in val.to_vector().items():
                col = cols.get(key)
                if col is None:
                    col = cols[key] = len(cols)
                v = out.get(col, 0) + c * x
                if p is not None:
                    v %= p
                if v:
                    out[col] = v
                else:
                    out.pop(col, None)
        return out

    def _compute_kernel(self):
        ech = EchelonSpace(self.mode)
        for m, co in self.basis_pairs():
            row = self.eval_vector(m)
            for i, c in co.items():
                row[KERNEL_OFFSET + i] = c
            ech.add(row)
        ker = EchelonSpace(self.mode)
        rank = 0
        for c, row in ech.rows.items():
            if c >= KERNEL_OFFSET:
                ker.add({k - KERNEL_OFFSET: v for k, v in row.items()})
            else:
                rank += 1
        self._kernel = ker
        self._eval_rank = rank

    def identity_kernel(self) -> EchelonSpace:
        if self._kernel is None:
            self._compute_kernel()
        return self._kernel

    @property
    def eval_rank(self) -> int:
        if self._eval_rank is None:
            self._compute_kernel()
        return self._eval_rank


# ---------------------------------------------------------------- multidegree sets

def enumerate_multidegrees(grading: GradingSpec, bounds: Bounds) -> list:
    """Canonical representatives of the bounded multidegrees.

    Nontrivial variables are numbered per degree starting at 1; trivial
    variables are y1..yr, each occurring, with every ordered composition of
    multiplicities.
    """
    G = grading.group
    nts = grading.nontrivial_degrees()
    N = bounds.max_deg
    out = []
    nt_choices = [()]
    for s in range(1, bounds.max_nontrivial + 1):
        for degs in _multisets(nts, s):
            nt_choices.append(degs)
    for degs in nt_choices:
        seen = {}
        nvars = []
        for d in degs:
            seen[d] = seen.get(d, 0) + 1
            nvars.append(Var.make(seen[d], d))
        for r in range(0, bounds.max_y + 1):
            yvars = [Var.make(i, G.identity) for i in range(1, r + 1)]
            allv = nvars + yvars
            if not allv:
                continue
            for counts in _compositions_bounded(len(allv), N):
                out.append(Multidegree(dict(zip(allv, counts))))
    out = sorted(set(out))
    return out


def _multisets(items, s):
    def go(start, k):
        if k == 0:
            yield ()
            return
        for i in range(start, len(items)):
            for rest in go(i, k - 1):
                yield (items[i],) + rest
    return list(go(0, s))


def _compositions_bounded(n, N):
    """Tuples of n positive integers with sum <= N."""
    def go(k, budget):
        if k == 0:
            yield ()
            return
        for a in range(1, budget - (k - 1) + 1):
            for rest in go(k - 1, budget - a):
                yield (a,) + rest
    if n > N:
        return []
    return list(go(n, N))


def cluster_key(D: Multidegree, grading: GradingSpec, q: int):
    """Invariants that the T-ideal respects over the q-element field."""
    return (tuple(D.variables()), D.gdegree(grading.group.identity),
            tuple(n % (q - 1) for _, n in D.items))


def finite_clusters(grading: GradingSpec, bounds: Bounds, q: int) -> list:
    groups = {}
    for D in enumerate_multidegrees(grading, bounds):
        groups.setdefault(cluster_key(D, grading, q), []).append(D)
    return sorted((sorted(v) for v in groups.values()), key=lambda c: c[0].sort_key())


def cluster_of(D: Multidegree, grading: GradingSpec, q: int, max_deg: int) -> list:
    """Every multidegree over D's variables in D's cluster with total <= max_deg."""
    vs = D.variables()
    key = cluster_key(D, grading, q)
    out = []
    for counts in _compositions_bounded(len(vs), max_deg):
        E = Multidegree(dict(zip(vs, counts)))
        if cluster_key(E, grading, q) == key:
            out.append(E)
    return sorted(out)


# ---------------------------------------------------------------- generators

OUTSIDE_SUPPORT = "outside-support"


@dataclass
class GeneratorSet:
    """Generators of a T-ideal: explicit polynomials plus, optionally, every x_d with d outside the support."""

    polys: list = dc_field(default_factory=list)
    outside_support: bool = False

    def pieces(self, grading: GradingSpec, mode: FieldMode) -> list:
        """Split into the homogeneous pieces a T-ideal may be separated into."""
        out = []
        for f in self.polys:
            if mode.is_finite:
                groups = {}
                for D, comp in f.components().items():
                    groups.setdefault(cluster_key(D, grading, mode.q), LiePolynomial())
                    groups[cluster_key(D, grading, mode.q)] = \
                        groups[cluster_key(D, grading, mode.q)] + comp
                out.extend(g for _, g in sorted(groups.items(), key=lambda t: repr(t[0])))
            else:
                out.extend(comp for _, comp in sorted(f.components().items()))
        return out


class _Candidates:
    """Basis monomials of free components, grouped by G-degree, as substitution images."""

    def __init__(self, space: ComponentSpace, degs, max_total: int):
        self.space = space
        vs = space.variables
        self.vars = vs
        p = space.p
        ident = space.grading.group.identity
        self.by_degree = {}
        if len(space.members) == 1:
            D = space.members[0]
            subs = D.submultidegrees()
        else:
            subs = []
            for n in range(1, max_total + 1):
                for k in range(1, len(vs) + 1):
                    for chosen in combinations(vs, k):
                        for counts in _compositions_exact(k, n):
                            subs.append(Multidegree(dict(zip(chosen, counts))))
            subs.sort()
        for E in subs:
            d = E.gdegree(ident)
            if degs is not None and d not in degs:
                continue
            fc = free_component(E, p)
            vec = tuple(E.count(v) for v in vs)
            for m, e in zip(fc.monomials, fc.expansions):
                self.by_degree.setdefault(d, []).append((vec, m, e))


def _compositions_exact(k, n):
    if k == 1:
        return [(n,)] if n >= 1 else []
    out = []
    for a in range(1, n - k + 2):
        for rest in _compositions_exact(k - 1, n - a):
            out.append((a,) + rest)
    return out


def _occurrence_layout(f: LiePolynomial):
    """Variables of f in sorted order and, per monomial, leaf slots per variable."""
    vs = sorted(f.variables())
    terms = []
    for m, c in f.terms.items():
        lv = leaves(m)
        slots = {v: [i for i, x in enumerate(lv) if x == v] for v in vs}
        terms.append((m, c, lv, slots))
    return vs, terms


def _expand_with_leaves(m, images):
    """Expansion of m after replacing its leaves, left to right, by ``images`` (expansions)."""
    it = iter(images)

    def go(t):
        if isinstance(t, Var):
            return next(it)
        return _commute(go(t[0]), go(t[1]))

    return go(m)


class ConsequenceBuilder:
    """Computes the component of a T-ideal generated by ``gens`` inside ``space``."""

    def __init__(self, space: ComponentSpace, gens: GeneratorSet, grading: GradingSpec,
                 mode: FieldMode, drop_identities: bool = False):
        self.space = space
        self.gens = gens
        self.grading = grading
        self.mode = mode
        self.pieces = gens.pieces(grading, mode)
        if drop_identities:
            self.pieces = [f for f in self.pieces if not is_identity(f, grading, mode)]
        self.max_total = max(D.total for D in space.members)

    def run(self, ceiling: int | None = None, seed: EchelonSpace | None = None,
            target: dict | None = None) -> EchelonSpace:
        """Echelon span of consequences (plus ``seed``).

        Stops once the rank reaches ``ceiling`` or once ``target`` lies in the span.
        """
        ech = seed.copy() if seed is not None else EchelonSpace(self.mode)
        self._ech = ech
        self._ceiling = ceiling
        self._target = target
        try:
            if self.mode.is_finite:
                self._run_finite()
            else:
                self._run_infinite()
        except _Done:
            pass
        return ech

    def _push(self, vec: dict):
        if not vec:
            return
        ech = self._ech
        if ech.add(vec):
            if self._ceiling is not None and ech.rank >= self._ceiling:
                raise _Done
            if self._target is not None and ech.contains(self._target):
                raise _Done

    # -------------------------------------------------- infinite fields
    def _run_infinite(self):
        space = self.space
        D = space.single
        vs = space.variables
        dvec = tuple(D.count(v) for v in vs)
        support = self.grading.support
        cands = _Candidates(space, None, D.total).by_degree
        if self.gens.outside_support:
            for d, lst in cands.items():
                if d in support:
                    continue
                for vec, m, e in lst:
                    self._bracket_leftover(e, _sub(dvec, vec), vs)
        for f in self.pieces:
            fD = f.multidegree()
            if fD.total > D.total:
                continue
            fvars, terms = _occurrence_layout(f)
            counts = [fD.count(v) for v in fvars]
            lists = [cands.get(v.degree, []) for v in fvars]
            if any(not l for l in lists):
                continue
            for choice, used in self._choose(lists, counts, dvec):
                e = self._substituted(terms, fvars, choice, lists)
                if e:
                    self._bracket_leftover(e, _sub(dvec, used), vs)

    def _choose(self, lists, counts, budget):
        """Per variable a multiset (nondecreasing index tuple) of candidates within budget."""
        k = len(lists)

        def multisets(lst, n, start, remaining):
            if n == 0:
                yield (), tuple(0 for _ in remaining)
                return
            for i in range(start, len(lst)):
                vec = lst[i][0]
                rem = _sub_checked(remaining, vec)
                if rem is None:
                    continue
                for rest, used in multisets(lst, n - 1, i, rem):
                    yield (i,) + rest, _add(vec, used)

        def go(j, remaining):
            if j == k:
                yield (), tuple(0 for _ in remaining)
                return
            for ms, used in multisets(lists[j], counts[j], 0, remaining):
                rem = _sub(remaining, used)
                for rest, used2 in go(j + 1, rem):
                    yield (ms,) + rest, _add(used, used2)

        yield from go(0, budget)

    def _substituted(self, terms, fvars, choice, lists):
        out = {}
        perms = [list(distinct_permutations(ms)) for ms in choice]
        for m, c, lv, slots in terms:
            for arrangement in product(*perms):
                images = [None] * len(lv)
                for v, arr, lst in zip(fvars, arrangement, lists):
                    for pos, idx in zip(slots[v], arr):
                        images[pos] = lst[idx][2]
                e = _expand_with_leaves(m, images)
                for w, x in e.items():
                    val = out.get(w, 0) + c * x
                    if val:
                        out[w] = val
                    else:
                        out.pop(w, None)
        return out

    def _bracket_leftover(self, e: dict, left: tuple, vs):
        rest = [v for v, n in zip(vs, left) for _ in range(n)]
        if not rest:
            self._push(self.space.coords(e))
            return
        for order in distinct_permutations(rest):
            x = e
            for v in order:
                x = expand_bracket_right(x, v)
            self._push(self.space.coords(x))

    # -------------------------------------------------- finite fields
    def _run_finite(self):
        space = self.space
        q = self.mode.q
        vs = space.variables
        N = self.max_total
        support = self.grading.support
        cand = _Candidates(space, None, N).by_degree
        member_set = set(space.members)

        if self.gens.outside_support:
            for d, lst in cand.items():
                if d in support:
                    continue
                for vec, m, e in lst:
                    self._finite_emit({vec: e}, vs, member_set, N)

        for f in self.pieces:
            parts = sorted(f.components().items())
            fvars = sorted(f.variables())
            if any(set(D.variables()) != set(fvars) for D, _ in parts):
                raise TIdealError("finite-mode generator pieces must share their variables")
            layouts = [(D, _occurrence_layout(comp)[1]) for D, comp in parts]
            nmax = [max(D.count(v) for D, _ in parts) for v in fvars]
            lists = [cand.get(v.degree, []) for v in fvars]
            if any(not l for l in lists):
                continue
            for sel in self._finite_selections(lists, nmax, N, q):
                S = {}
                for D, terms in layouts:
                    ns = [D.count(v) for v in fvars]
                    per_var = []
                    ok = True
                    for (chosen, classes), n in zip(sel, ns):
                        comps = [c for c in _class_compositions(n, classes, q)]
                        if not comps:
                            ok = False
                            break
                        per_var.append([(chosen, c) for c in comps])
                    if not ok:
                        continue
                    for combo in product(*per_var):
                        choice = []
                        used = tuple(0 for _ in vs)
                        for chosen, ks in combo:
                            ms = []
                            for idx, k in zip(chosen, ks):
                                ms.extend([idx] * k)
                            choice.append(tuple(ms))
                        for lst, ms in zip(lists, choice):
                            for idx in ms:
                                used = _add(used, lst[idx][0])
                        e = self._substituted(terms, fvars, choice, lists)
                        if not e:
                            continue
                        acc = S.setdefault(used, {})
                        for w, x in e.items():
                            val = acc.get(w, 0) + x
                            if val % q:
                                acc[w] = val
                            else:
                                acc.pop(w, None)
                S = {k: v for k, v in S.items() if v}
                if S:
                    self._finite_emit(S, vs, member_set, N)

    def _finite_selections(self, lists, nmax, N, q):
        """Per variable: a set of distinct candidates with exponent classes in 1..q-1."""
        k = len(lists)

        def sets_for(j, budget):
            lst = lists[j]
            out = []

            def go(start, chosen, size):
                if chosen:
                    yield tuple(chosen), size
                if len(chosen) == nmax[j]:
                    return
                for i in range(start, len(lst)):
                    s = sum(lst[i][0])
                    if size + s > budget:
                        continue
                    chosen.append(i)
                    yield from go(i + 1, chosen, size + s)
                    chosen.pop()

            for chosen, size in go(0, [], 0):
                for classes in product(range(1, q), repeat=len(chosen)):
                    out.append(((chosen, classes), size))
            return out

        def go(j, budget):
            if j == k:
                yield ()
                return
            for item, size in sets_for(j, budget):
                for rest in go(j + 1, budget - size):
                    yield (item,) + rest

        yield from go(0, N)

    def _finite_emit(self, S: dict, vs, member_set, N):
        """Bracket every part of S by the same leftover variables; keep sums inside the cluster."""
        tops = [sum(vec) for vec in S]
        if max(tops) > N:
            return
        room = N - max(tops)
        for extra in _vectors_upto(len(vs), room):
            finals = [_add(vec, extra) for vec in S]
            if not all(Multidegree(dict(zip(vs, f))) in member_set for f in finals):
                continue
            rest = [v for v, n in zip(vs, extra) for _ in range(n)]
            orders = list(distinct_permutations(rest)) if rest else [()]
            for order in orders:
                total = {}
                for vec, e in S.items():
                    x = e
                    for v in order:
                        x = expand_bracket_right(x, v)
                    for w, c in self.space.coords(x).items():
                        total[w] = (total.get(w, 0) + c) % self.mode.q
                self._push({k: v for k, v in total.items() if v})


class _Done(Exception):
    pass


def _vectors_upto(n, room):
    def go(k, budget):
        if k == 0:
            yield ()
            return
        for a in range(budget + 1):
            for rest in go(k - 1, budget - a):
                yield (a,) + rest
    return list(go(n, room))


def _class_compositions(n, classes, q):
    """Tuples k_j >= 1 summing to n with ((k_j - 1) mod (q-1)) + 1 == classes[j]."""
    s = len(classes)
    out = []

    def go(j, remaining, acc):
        if j == s:
            if remaining == 0:
                out.append(tuple(acc))
            return
        k = classes[j]
        while k <= remaining - (s - j - 1):
            acc.append(k)
            go(j + 1, remaining - k, acc)
            acc.pop()
            k += q - 1
    go(0, n, [])
    return out


def _add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def _sub_checked(a, b):
    out = tuple(x - y for x, y in zip(a, b))
    return None if any(x < 0 for x in out) else out


# ---------------------------------------------------------------- public operations

def _as_generators(gens) -> GeneratorSet:
    if isinstance(gens, GeneratorSet):
        return gens
    return GeneratorSet(list(gens))


def component_space(grading: GradingSpec, D: Multidegree, mode: FieldMode,
                    max_deg: int | None = None) -> ComponentSpace:
    """The component holding D: L_D itself, or D's cluster over a finite field."""
    if mode.is_finite:
        N = max_deg if max_deg is not None else D.total
        return ComponentSpace(grading, cluster_of(D, grading, mode.q, max(N, D.total)), mode)
    return ComponentSpace(grading, [D], mode)


def identity_kernel(grading: GradingSpec, D: Multidegree, mode: FieldMode,
                    bounds: Bounds | None = None) -> EchelonSpace:
    bounds = bounds or Bounds()
    if D.total > bounds.max_deg:
        raise TIdealError(f"multidegree {D} exceeds the degree bound {bounds.max_deg}")
    return component_space(grading, D, mode).identity_kernel()


def consequence_component(gens, grading: GradingSpec, D: Multidegree, mode: FieldMode,
                          bounds: Bounds | None = None) -> EchelonSpace:
    bounds = bounds or Bounds()
    if D.total > bounds.max_deg:
        raise TIdealError(f"multidegree {D} exceeds the degree bound {bounds.max_deg}")
    space = component_space(grading, D, mode)
    return ConsequenceBuilder(space, _as_generators(gens), grading, mode).run()


def membership(f: LiePolynomial, gens, grading: GradingSpec, mode: FieldMode,
               bounds: Bounds | None = None, drop_identities: bool = True) -> bool:
    """Whether f lies in <gens>^T + Id inside the bounded computation.

    Generator pieces that are themselves identities are skipped when
    ``drop_identities`` is set; they only contribute identities.
    """
    bounds = bounds or Bounds()
    gens = _as_generators(gens)
    comps = f.components()
    if not comps:
        return True
    if max(D.total for D in comps) > bounds.max_deg:
        raise TIdealError(f"polynomial degree exceeds the bound {bounds.max_deg}")
    if mode.is_finite:
        groups = {}
        for D, comp in comps.items():
            k = cluster_key(D, grading, mode.q)
            groups[k] = groups.get(k, LiePolynomial()) + comp
        work = []
        for k, piece in sorted(groups.items(), key=lambda t: repr(t[0])):
            Ds = list(piece.components())
            N = max(D.total for D in Ds)
            space = ComponentSpace(grading, cluster_of(Ds[0], grading, mode.q, N), mode)
            work.append((space, piece))
    else:
        work = [(ComponentSpace(grading, [D], mode), comp) for D, comp in sorted(comps.items())]
    for space, piece in work:
        target = space.coords_of(piece)
        kernel = space.identity_kernel()
        if kernel.contains(target):
            continue
        ech = ConsequenceBuilder(space, gens, grading, mode,
                                 drop_identities=drop_identities).run(seed=kernel, target=target)
        if not ech.contains(target):
            return False
    return True


def _basis_elements(spec, D: Multidegree, mode: FieldMode, grading: GradingSpec):
    from .freelie import theorem_basis
    return theorem_basis(spec.cls, D, mode, grading)


def normal_form(f: LiePolynomial, spec, mode: FieldMode, grading: GradingSpec | None = None) -> list:
    """Coefficients c with f - sum c_i b_i an identity, as [(c_i, b_i)] over the theorem basis."""
    grading = grading or spec.grading
    D = f.multidegree()
    space = component_space(grading, D, mode)
    basis = []
    for E in space.members:
        b = _basis_elements(spec, E, mode, grading)
        if b is None:
            raise TIdealError(f"no named basis at {E} in {mode} mode")
        basis.extend(b)
    kernel = space.identity_kernel()
    cols = [space.coords(expand_assoc(b)) for b in basis] + kernel.basis()
    target = space.coords_of(f)
    ncols = len(cols) + 1
    rows = []
    for i in range(space.dim):
        rows.append([c.get(i, 0) for c in cols] + [target.get(i, 0)])
    M = ExactMatrix.from_rows(rows, mode if mode.p is None else FieldMode.prime_infinite(mode.p),
                              ncols=ncols)
    sol = solve_linear(M)
    last = ncols - 1
    vec = next((k for k in sol.kernel_basis if k[last]), None)
    if vec is None:
        raise TIdealError(f"{f.format()} is not spanned by the basis modulo identities at {D}")
    inv = M.field.inv(vec[last])
    coefs = []
    for i, b in enumerate(basis):
        c = -vec[i] * inv
        if mode.p is not None:
            c %= mode.p
        coefs.append((M.field.coerce(c), b))
    # residual check: f - sum c b must be an identity
    resid = dict(target)
    for c, b in coefs:
        for k, v in space.coords(expand_assoc(b)).items():
            resid[k] = resid.get(k, 0) - c * v
    if not kernel.contains({k: v for k, v in resid.items() if v}):
        raise TIdealError("normal form residual is not an identity")
    return coefs


def _checks_for(space: ComponentSpace, basis, gens: GeneratorSet, grading, mode,
                gens_ok: bool) -> dict:
    kernel = space.identity_kernel()
    computed_basis = basis is None
    if computed_basis:
        # no named basis: complete the kernel by spanning monomials
        tmp = kernel.copy()
        basis = [m for m, co in space.basis_pairs() if tmp.add(co)]
    ev = EchelonSpace(mode)
    for b in basis:
        ev.add(space.eval_vector(b))
    check_b = ev.rank == len(basis)
    cons = ConsequenceBuilder(space, gens, grading, mode).run(ceiling=kernel.rank)
    total = cons.copy()
    for b in basis:
        total.add(space.coords(expand_assoc(b)))
    check_c = total.rank == space.dim
    check_d = cons.rank == kernel.rank and kernel.contains_space(cons)
    return {
        "multidegree": " ~ ".join(str(D) for D in space.members),
        "ambient_dim": space.dim,
        "kernel_dim": kernel.rank,
        "basis_count": len(basis),
        "consequence_dim": cons.rank,
        "checks": {"a": gens_ok, "b": check_b, "c": check_c, "d": check_d},
    }


def verify_theorem(spec, grading: GradingSpec | None, mode: FieldMode,
                   bounds: Bounds | None = None, progress=None) -> dict:
    """Check generators, basis independence, spanning and generation at every bounded multidegree."""
    grading = grading or spec.grading
    bounds = bounds or Bounds()
    if not spec.admits(mode):
        raise TIdealError(spec.inadmissible_message(mode))
    gens = spec.generators(mode)
    gens_ok = all(is_identity(f, grading, mode) for f in gens.polys)
    # outside-support generators are single variables of unsupported degree: zero on evaluation
    components = []
    if mode.is_finite:
        groups = finite_clusters(grading, bounds, mode.q)
    else:
        groups = [[D] for D in enumerate_multidegrees(grading, bounds)]
    for members in groups:
        space = ComponentSpace(grading, members, mode)
        basis = []
        named = True
        for D in space.members:
            b = _basis_elements(spec, D, mode, grading)
            if b is None:
                named = False
                break
            basis.extend(b)
        entry = _checks_for(space, basis if named else None, gens, grading, mode, gens_ok)
        components.append(entry)
        if progress:
            progress(entry)
    ok = all(all(c["checks"].values()) for c in components)
    return {
        "grading": spec.cls,
        "field_mode": mode.label(),
        "bounds": bounds.as_dict(),
        "components": components,
        "pass": ok,
    }


def pi_map(f: LiePolynomial, alpha: GroupHom, grading: GradingSpec) -> LiePolynomial:
    """Send x_{i,h} to the sum of x_{i,g} over g in Supp with alpha(g) = h."""
    if alpha.domain != grading.group:
        raise TIdealError("alpha must start at the grading group")
    supp = sorted(grading.support)
    out = LiePolynomial()
    for m, c in f.terms.items():
        lv = leaves(m)
        options = []
        for v in lv:
            fiber = [Var.make(v.index, g) for g in supp if alpha(g) == v.degree]
            options.append(fiber)
        if any(not o for o in options):
            continue
        from .freelie import substitute_leaves
        for images in product(*options):
            out = out + LiePolynomial.mono(substitute_leaves(m, images), c)
    return out


def nonspecht_chain_check(k_max: int = 4, mode: FieldMode | None = None) -> dict:
    """Strictness of the chain <pi(c_2)> < <pi(c_2), pi(c_3)> < ... modulo Id(Delta)."""
    from .freelie import left_normed
    from .groupgrade import GroupDescriptor, coarsen_grading, named_grading
    mode = mode or FieldMode.prime_infinite(2)
    if mode != FieldMode.prime_infinite(2):
        raise TIdealError("the chain lives over an infinite field of characteristic 2")
    if k_max < 3:
        raise TIdealError("k_max must be at least 3")
    delta = named_grading("canonical")
    Z2 = GroupDescriptor.parse("Z2")
    alpha = GroupHom(delta.group, Z2, (Z2.element([1]),))
    coarse = coarsen_grading(delta, alpha)
    z1 = Var.make(1, coarse.g)

    def c(k):
        ys = [Var.make(i, Z2.identity) for i in range(1, k + 1)]
        return LiePolynomial.mono(left_normed(z1, *ys, z1))

    pis = {k: pi_map(c(k), alpha, delta) for k in range(2, k_max + 1)}
    bounds = Bounds(max_deg=k_max + 2)
    steps = []
    for k in range(2, k_max):
        member = membership(pis[k + 1], [pis[j] for j in range(2, k + 1)], delta, mode, bounds)
        steps.append({"k": k, "target": f"pi(c_{k + 1})",
                      "generators": [f"pi(c_{j})" for j in range(2, k + 1)],
                      "member": member, "strict": not member})
    sanity = membership(pis[2], [pis[2]], delta, mode, bounds)
    return {
        "grading": delta.cls,
        "coarsening": coarse.cls,
        "field_mode": mode.label(),
        "k_max": k_max,
        "steps": steps,
        "sanity_self_member": sanity,
        "pass": sanity and all(s["strict"] for s in steps),
    }

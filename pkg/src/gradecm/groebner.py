"""Buchberger engine for ideals and submodules of finite free modules.

Elements of a free module R^r are term maps ``{(position, exponent tuple):
coefficient}``.  The default module order is term-over-position extending
the ring order; a block order with the leading positions dominant powers
syzygy computation by elimination.  Pair handling uses the Gebauer-Moeller
update with normal (smallest lcm) selection.
"""

import heapq
import itertools

from .errors import AmbientMismatch, BudgetExceeded, ZeroColonDivisor
from .polyring import (Elimination, Poly, mono_coprime, mono_deg, mono_div,
                       mono_divides, mono_lcm, mono_mul)

DEFAULT_BUDGET_STEPS = 10**6


class Budget:
    """Deterministic reduction-step budget for engine runs."""

    def __init__(self, steps=DEFAULT_BUDGET_STEPS):
        self.remaining = steps

    def spend(self, n=1):
        self.remaining -= n
        if self.remaining < 0:
            raise BudgetExceeded("Groebner step budget exhausted")


class ModuleOrder:
    def key(self, pos, mono):
        raise NotImplementedError


class TermOverPosition(ModuleOrder):
    """Compare by ring order on monomials, lower position wins ties."""

    def __init__(self, ring_order):
        self.ring_order = ring_order

    def key(self, pos, mono):
        return (self.ring_order.key(mono), -pos)

    def __eq__(self, other):
        return isinstance(other, TermOverPosition) and self.ring_order == other.ring_order

    def __hash__(self):
        return hash(("TOP", self.ring_order))


class BlockElimination(ModuleOrder):
    """Positions below `split` dominate the rest; term-over-position inside."""

    def __init__(self, split, ring_order):
        self.split = split
        self.ring_order = ring_order

    def key(self, pos, mono):
        return (1 if pos < self.split else 0, self.ring_order.key(mono), -pos)

    def __eq__(self, other):
        return (isinstance(other, BlockElimination) and self.split == other.split
                and self.ring_order == other.ring_order)

    def __hash__(self):
        return hash(("BLK", self.split, self.ring_order))


class FreeModule:
    __slots__ = ("ring", "rank", "order")

    def __init__(self, ring, rank, order=None):
        self.ring = ring
        self.rank = rank
        self.order = order if order is not None else TermOverPosition(ring.order)

    def __eq__(self, other):
        return (isinstance(other, FreeModule) and self.ring == other.ring
                and self.rank == other.rank and self.order == other.order)

    def __hash__(self):
        return hash((self.ring, self.rank, self.order))

    def __repr__(self):
        return f"{self.ring}^{self.rank}"

    def zero(self):
        return Vector(self, {})

    def unit(self, pos, coeff=1, mono=None):
        c = self.ring.field.coerce(coeff)
        if self.ring.field.is_zero(c):
            return self.zero()
        m = mono if mono is not None else (0,) * self.ring.n
        return Vector(self, {(pos, m): c})

    def from_polys(self, polys):
        """Column vector from a list of rank-many polynomials."""
        f = self.ring.field
        terms = {}
        for pos, p in enumerate(polys):
            for m, c in p.terms.items():
                terms[(pos, m)] = c
        return Vector(self, terms)


class Vector:
    """Element of a finite free module, a map (position, monomial) -> coeff."""

    __slots__ = ("module", "terms", "_lt", "_intform")

    def __init__(self, module, terms):
        self.module = module
        self.terms = terms
        self._lt = None
        self._intform = None

    def intform(self):
        """Primitive integer-coefficient copy (characteristic 0 only)."""
        if self._intform is None:
            import math as _math

            den = 1
            for c in self.terms.values():
                den = den * c.denominator // _math.gcd(den, c.denominator)
            ints = {t: int(c * den) for t, c in self.terms.items()}
            g = 0
            for v in ints.values():
                g = _math.gcd(g, v)
            if g > 1:
                ints = {t: v // g for t, v in ints.items()}
            self._intform = ints
        return self._intform

    def is_zero(self):
        return not self.terms

    def lt_key(self):
        if self._lt is None and self.terms:
            ok = self.module.order.key
            self._lt = max(self.terms, key=lambda t: ok(*t))
        return self._lt

    def lc(self):
        k = self.lt_key()
        return self.terms[k] if k is not None else self.module.ring.field.zero

    def coordinate(self, pos):
        """The position-th entry as a Poly."""
        return Poly(self.module.ring,
                    {m: c for (p, m), c in self.terms.items() if p == pos})

    def coordinates(self):
        return [self.coordinate(p) for p in range(self.module.rank)]

    def _check(self, other):
        if self.module != other.module:
            raise AmbientMismatch("vectors in different modules")

    def __add__(self, other):
        self._check(other)
        f = self.module.ring.field
        res = dict(self.terms)
        for t, c in other.terms.items():
            s = f.add(res.get(t, f.zero), c)
            if f.is_zero(s):
                res.pop(t, None)
            else:
                res[t] = s
        return Vector(self.module, res)

    def __neg__(self):
        f = self.module.ring.field
        return Vector(self.module, {t: f.neg(c) for t, c in self.terms.items()})

    def __sub__(self, other):
        return self.__add__(other.__neg__())

    def mul_term(self, coeff, mono):
        f = self.module.ring.field
        if f.is_zero(coeff):
            return self.module.zero()
        return Vector(self.module, {(p, mono_mul(m, mono)): f.mul(c, coeff)
                                    for (p, m), c in self.terms.items()})

    def mul_poly(self, poly):
        out = self.module.zero()
        for m, c in poly.terms.items():
            out = out + self.mul_term(c, m)
        return out

    def monic(self):
        if not self.terms:
            return self
        f = self.module.ring.field
        ci = f.inv(self.lc())
        return Vector(self.module, {t: f.mul(c, ci) for t, c in self.terms.items()})

    def key(self):
        return tuple(sorted(self.terms.items()))

    def __eq__(self, other):
        return (isinstance(other, Vector) and self.module == other.module
                and self.terms == other.terms)

    def __hash__(self):
        return hash((self.module, self.key()))

    def __repr__(self):
        if not self.terms:
            return "<0>"
        return "<" + ", ".join(repr(c) for c in self.coordinates()) + ">"


def poly_to_vector(module, f):
    return Vector(module, {(0, m): c for m, c in f.terms.items()})


def vector_to_poly(v):
    return Poly(v.module.ring, {m: c for (p, m), c in v.terms.items() if p == 0})


# ---------------------------------------------------------------------------
# division / reduction


def _find_reducer(by_pos, pos, mono):
    for lt, lc, g in by_pos.get(pos, ()):
        if mono_divides(lt[1], mono):
            return lt, lc, g
    return None


def _group_by_position(basis):
    by_pos = {}
    for g in basis:
        lt = g.lt_key()
        by_pos.setdefault(lt[0], []).append((lt, g.terms[lt], g))
    return by_pos


class _MaxItem:
    """Inverted comparison wrapper so heapq acts as a max-heap."""

    __slots__ = ("key", "term")

    def __init__(self, key, term):
        self.key = key
        self.term = term

    def __lt__(self, other):
        return self.key > other.key


def reduce_vector(v, basis, budget=None, by_pos=None, up_to_scalar=False):
    """Normal form of v against basis (heads and tails).  With
    up_to_scalar, characteristic-0 reductions run fraction-free, so the
    result is only canonical up to a nonzero scalar."""
    if budget is None:
        budget = Budget()
    if by_pos is None:
        by_pos = _group_by_position(basis)
    f = v.module.ring.field
    if up_to_scalar and getattr(f, "char", 0) == 0:
        return _pseudo_reduce(v, by_pos, budget)
    okey = v.module.order.key
    work = dict(v.terms)
    rem = {}
    heap = [_MaxItem(okey(*t), t) for t in work]
    heapq.heapify(heap)
    while heap:
        item = heapq.heappop(heap)
        t = item.term
        c = work.get(t)
        if c is None:
            continue
        hit = _find_reducer(by_pos, t[0], t[1])
        if hit is None:
            rem[t] = c
            del work[t]
            continue
        budget.spend()
        lt, lc, g = hit
        shift = mono_div(t[1], lt[1])
        factor = f.div(c, lc)
        for (p, m), gc in g.terms.items():
            key = (p, mono_mul(m, shift))
            old = work.get(key)
            s = f.sub(old if old is not None else f.zero, f.mul(gc, factor))
            if f.is_zero(s):
                work.pop(key, None)
            else:
                if old is None and key != t:
                    heapq.heappush(heap, _MaxItem(okey(*key), key))
                work[key] = s
    return Vector(v.module, rem)


def _pseudo_reduce(v, by_pos, budget):
    """Fraction-free reduction over the rationals: integer coefficients,
    whole-row rescaling at each pseudo-division, periodic content strip.
    Returns a nonzero scalar multiple of the normal form."""
    import math as _math
    from fractions import Fraction

    okey = v.module.order.key
    den = 1
    for c in v.terms.values():
        den = den * c.denominator // _math.gcd(den, c.denominator)
    work = {t: int(c * den) for t, c in v.terms.items()}
    rem = {}
    heap = [_MaxItem(okey(*t), t) for t in work]
    heapq.heapify(heap)
    steps = 0
    while heap:
        item = heapq.heappop(heap)
        t = item.term
        c = work.get(t)
        if c is None or c == 0:
            work.pop(t, None)
            continue
        hit = _find_reducer(by_pos, t[0], t[1])
        if hit is None:
            rem[t] = c
            del work[t]
            continue
        budget.spend()
        steps += 1
        lt, _, g = hit
        gints = g.intform()
        lcg = gints[lt]
        d = _math.gcd(c, lcg)
        mw = lcg // d
        mg = c // d
        if mw != 1:
            for k in work:
                work[k] *= mw
            for k in rem:
                rem[k] *= mw
        shift = mono_div(t[1], lt[1])
        for (p, m), gc in gints.items():
            key = (p, mono_mul(m, shift))
            old = work.get(key)
            s = (old if old is not None else 0) - mg * gc
            if s == 0:
                work.pop(key, None)
            else:
                if old is None and key != t:
                    heapq.heappush(heap, _MaxItem(okey(*key), key))
                work[key] = s
        work.pop(t, None)
        if steps % 64 == 0 and (work or rem):
            g0 = 0
            for val in work.values():
                g0 = _math.gcd(g0, val)
            for val in rem.values():
                g0 = _math.gcd(g0, val)
            if g0 > 1:
                for k in work:
                    work[k] //= g0
                for k in rem:
                    rem[k] //= g0
    return Vector(v.module, {t: Fraction(c) for t, c in rem.items() if c})


def reduce_with_quotients(v, basis, budget=None):
    """Return (quotients, remainder) with v = sum(q_i * basis_i) + remainder."""
    if budget is None:
        budget = Budget()
    by_pos = {}
    for i, g in enumerate(basis):
        lt = g.lt_key()
        by_pos.setdefault(lt[0], []).append((lt, g.terms[lt], g, i))
    ring = v.module.ring
    f = ring.field
    okey = v.module.order.key
    work = dict(v.terms)
    rem = {}
    quots = {}
    while work:
        t = max(work, key=lambda s: okey(*s))
        c = work[t]
        hit = None
        for lt, lc, g, i in by_pos.get(t[0], ()):
            if mono_divides(lt[1], t[1]):
                hit = (lt, lc, g, i)
                break
        if hit is None:
            rem[t] = c
            del work[t]
            continue
        budget.spend()
        lt, lc, g, i = hit
        shift = mono_div(t[1], lt[1])
        factor = f.div(c, lc)
        q = quots.get(i, ring.zero())
        quots[i] = q + ring.monomial(shift, factor)
        for (p, m), gc in g.terms.items():
            key = (p, mono_mul(m, shift))
            s = f.sub(work.get(key, f.zero), f.mul(gc, factor))
            if f.is_zero(s):
                work.pop(key, None)
            else:
                work[key] = s
    return quots, Vector(v.module, rem)


# ---------------------------------------------------------------------------
# Buchberger with Gebauer-Moeller pair pruning


def _s_vector(g1, g2, budget):
    lt1, lt2 = g1.lt_key(), g2.lt_key()
    f = g1.module.ring.field
    lcm = mono_lcm(lt1[1], lt2[1])
    a = g1.mul_term(f.inv(g1.terms[lt1]), mono_div(lcm, lt1[1]))
    b = g2.mul_term(f.inv(g2.terms[lt2]), mono_div(lcm, lt2[1]))
    return a - b


def buchberger(gens, budget=None, interreduce=True):
    """Reduced Groebner basis of the submodule generated by gens."""
    if budget is None:
        budget = Budget()
    basis = []
    for g in gens:
        if not g.is_zero():
            basis.append(g.monic())
    if not basis:
        return []
    module = basis[0].module
    okey = module.order.key
    use_coprime = module.rank == 1

    pairs = []          # heap of (lcm order key, i, j)
    pair_set = {}

    def lcm_of(i, j):
        li, lj = basis[i].lt_key(), basis[j].lt_key()
        return mono_lcm(li[1], lj[1])

    def add_element(h):
        """Gebauer-Moeller update: prune old pairs, create new ones."""
        t = len(basis)
        basis.append(h)
        lt_t = h.lt_key()
        # candidate new pairs, same leading position only
        cand = [i for i in range(t)
                if basis[i] is not None and basis[i].lt_key()[0] == lt_t[0]]
        lcms = {i: mono_lcm(basis[i].lt_key()[1], lt_t[1]) for i in cand}
        kept = []
        for i in cand:
            li = lcms[i]
            drop = False
            for j in cand:
                if j == i:
                    continue
                lj = lcms[j]
                if lj == li:
                    # keep the earliest representative of an lcm class
                    if j < i:
                        drop = True
                        break
                elif mono_divides(lj, li):
                    drop = True
                    break
            if not drop:
                kept.append(i)
        for i in kept:
            if use_coprime and mono_coprime(basis[i].lt_key()[1], lt_t[1]):
                continue
            key = (okey(lt_t[0], lcms[i]), i, t)
            if (i, t) not in pair_set:
                pair_set[(i, t)] = True
                heapq.heappush(pairs, (key, i, t))
        # prune old pairs via the chain criterion
        for (i, j) in list(pair_set):
            if t in (i, j):
                continue
            if basis[i] is None or basis[j] is None:
                continue
            if basis[i].lt_key()[0] != lt_t[0]:
                continue
            lij = lcm_of(i, j)
            if (mono_divides(lt_t[1], lij)
                    and lcms.get(i) != lij and lcms.get(j) != lij):
                pair_set.pop((i, j))

    seeds = basis
    basis = []
    for g in seeds:
        add_element(g)

    while pairs:
        _, i, j = heapq.heappop(pairs)
        if (i, j) not in pair_set:
            continue
        del pair_set[(i, j)]
        s = _s_vector(basis[i], basis[j], budget)
        r = reduce_vector(s, [b for b in basis if b is not None], budget,
                          up_to_scalar=True)
        if not r.is_zero():
            add_element(r.monic())

    out = [b for b in basis if b is not None]
    if interreduce:
        out = interreduce_basis(out, budget)
    return out


def interreduce_basis(basis, budget=None):
    """Minimal reduced basis: no lt divides another, tails fully reduced."""
    if budget is None:
        budget = Budget()
    basis = [g.monic() for g in basis if not g.is_zero()]
    # minimality: drop elements whose lt is divisible by another lt
    keep = []
    for i, g in enumerate(basis):
        lt = g.lt_key()
        dominated = False
        for j, h in enumerate(basis):
            if i == j:
                continue
            lh = h.lt_key()
            if lh[0] == lt[0] and mono_divides(lh[1], lt[1]):
                if lh[1] != lt[1] or j < i:
                    dominated = True
                    break
        if not dominated:
            keep.append(g)
    # tail reduction to the canonical reduced basis
    changed = True
    while changed:
        changed = False
        for i in range(len(keep)):
            others = keep[:i] + keep[i + 1:]
            r = (reduce_vector(keep[i], others, budget, up_to_scalar=True)
                 if others else keep[i])
            r = r.monic()
            if r.terms != keep[i].terms:
                changed = True
                if r.is_zero():
                    keep.pop(i)
                else:
                    keep[i] = r
                break
    okey = keep[0].module.order.key if keep else None
    keep.sort(key=lambda g: okey(*g.lt_key()), reverse=True)
    return keep


def is_groebner_basis(basis, budget=None):
    """Check the Buchberger criterion: every S-vector reduces to zero."""
    if budget is None:
        budget = Budget()
    for g1, g2 in itertools.combinations(basis, 2):
        if g1.lt_key()[0] != g2.lt_key()[0]:
            continue
        s = _s_vector(g1, g2, budget)
        if not reduce_vector(s, basis, budget).is_zero():
            return False
    return True


# ---------------------------------------------------------------------------
# syzygies via block elimination


def syzygies(vectors, budget=None):
    """Generators of the syzygy module of the given vectors (or polys).

    Works by computing a basis of {(v_i, e_i)} in R^r (+) R^s under an order
    making the first block dominant; basis elements supported in the tag
    block are exactly the syzygies.
    """
    if budget is None:
        budget = Budget()
    vecs = list(vectors)
    if not vecs:
        return []
    if isinstance(vecs[0], Poly):
        ring = vecs[0].ring
        mod = FreeModule(ring, 1)
        vecs = [poly_to_vector(mod, f) for f in vecs]
    module = vecs[0].module
    ring = module.ring
    r, s = module.rank, len(vecs)
    big = FreeModule(ring, r + s, BlockElimination(r, ring.order))
    tagged = []
    for i, v in enumerate(vecs):
        terms = {(p, m): c for (p, m), c in v.terms.items()}
        terms[(r + i, (0,) * ring.n)] = ring.field.one
        tagged.append(Vector(big, terms))
    gb = buchberger(tagged, budget, interreduce=False)
    syz_mod = FreeModule(ring, s)
    out = []
    for g in gb:
        if g.lt_key()[0] >= r:
            out.append(Vector(syz_mod,
                              {(p - r, m): c for (p, m), c in g.terms.items()}))
    return out


# ---------------------------------------------------------------------------
# ideal-level operations over a polynomial ring (no quotient)


def ideal_gb(gens, budget=None):
    """Reduced Groebner basis of an ideal, as monic polynomials."""
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        return []
    ring = gens[0].ring
    mod = FreeModule(ring, 1)
    gb = buchberger([poly_to_vector(mod, g) for g in gens], budget)
    return [vector_to_poly(v) for v in gb]


def ideal_nf(f, gb, budget=None):
    if not gb:
        return f
    ring = gb[0].ring
    mod = FreeModule(ring, 1)
    r = reduce_vector(poly_to_vector(mod, f), [poly_to_vector(mod, g) for g in gb],
                      budget)
    return vector_to_poly(r)


def ideal_contains(f, gb, budget=None):
    return ideal_nf(f, gb, budget).is_zero()


def module_colon(ngens, v, budget=None):
    """Generators of the ideal {r in S : r*v in <ngens>}."""
    if v.is_zero():
        raise ZeroColonDivisor("colon by the zero element")
    cols = [v] + list(ngens)
    syz = syzygies(cols, budget)
    out = [s.coordinate(0) for s in syz]
    out = [f for f in out if not f.is_zero()]
    return ideal_gb(out, budget)


def ideal_colon(gens, f, budget=None):
    """(J : f) over the ambient polynomial ring."""
    if f.is_zero():
        raise ZeroColonDivisor("colon by zero")
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        return []
    ring = f.ring
    mod = FreeModule(ring, 1)
    return module_colon([poly_to_vector(mod, g) for g in gens],
                        poly_to_vector(mod, f), budget)


def _fresh_name(ring, stem="_t"):
    name = stem
    k = 0
    while name in ring.names:
        k += 1
        name = f"{stem}{k}"
    return name


def ideal_intersect(gens_a, gens_b, ring, budget=None):
    """a cap b by the t-trick: eliminate t from t*a + (1-t)*b."""
    gens_a = [g for g in gens_a if not g.is_zero()]
    gens_b = [g for g in gens_b if not g.is_zero()]
    if not gens_a or not gens_b:
        return []
    big, inj = ring.extend([_fresh_name(ring)], front=True, order=Elimination(1))
    t = big.var(0)
    mixed = [t * inj(g) for g in gens_a]
    mixed += [(big.one() - t) * inj(g) for g in gens_b]
    gb = ideal_gb(mixed, budget)
    out = []
    for g in gb:
        if all(m[0] == 0 for m in g.terms):
            out.append(Poly(ring, {m[1:]: c for m, c in g.terms.items()}))
    return out


def saturate(gens, f, budget=None):
    """(J : f^infinity) by stabilizing colons; returns (gens, steps)."""
    if f.is_zero():
        raise ZeroColonDivisor("saturation by zero")
    cur = ideal_gb(gens, budget)
    k = 0
    while True:
        nxt = ideal_colon(cur, f, budget) if cur else []
        if [g.key() for g in nxt] == [g.key() for g in cur]:
            return cur, k
        cur = nxt
        k += 1


def radical_membership(f, gens, ring, budget=None):
    """Rabinowitsch: f in rad(J) iff 1 in J + (1 - t*f)."""
    if f.is_zero():
        return True
    big, inj = ring.extend([_fresh_name(ring)], front=True, order=Elimination(1))
    t = big.var(0)
    sys = [inj(g) for g in gens if not g.is_zero()]
    sys.append(big.one() - t * inj(f))
    gb = ideal_gb(sys, budget)
    return any(g.is_constant() and not g.is_zero() for g in gb)

"""Builders for the corpus rings: trivial extensions (idealizations), lazy
infinite-variable polynomial rings realized level by level, perfect-closure
level rings with fractional-exponent input, invariant/Veronese subrings with
their Reynolds operators, and the combinatorial rank-r valuation model.
"""

import itertools
import re
from fractions import Fraction

from .errors import BadCharacteristic, LevelTooLow
from .grade import koszul_grade
from .groebner import Budget, ideal_gb, ideal_nf
from .polyring import Elimination, Poly, PolyRing, _PolyParser
from .ringpres import IdealHandle, PresentedModule, PresentedRing, height_ideal
from .scalars import GF, QQ


# ---------------------------------------------------------------------------
# trivial extension R |x M (idealization)


def trivial_extension(R, M, var_prefix="z"):
    """R |x M for a finitely generated M: adjoin one nilpotent generator per
    module generator, with z_i z_j = 0 and the presentation relations."""
    b = M.rank
    znames = [f"{var_prefix}{i+1}" for i in range(b)]
    big, inj = R.ambient.extend(znames)
    zvars = [big.var(R.ambient.n + i) for i in range(b)]
    rels = [inj(f) for f in R.defining]
    for i in range(b):
        for j in range(i, b):
            rels.append(zvars[i] * zvars[j])
    for col in M.relations:
        acc = big.zero()
        for i in range(b):
            acc = acc + inj(col.coordinate(i)) * zvars[i]
        if not acc.is_zero():
            rels.append(acc)
    return PresentedRing(big, rels)


# ---------------------------------------------------------------------------
# lazy limit ring R[X_1, X_2, ...]


class LimitRing:
    """Union of the level rings R[X_1..X_m]; levels are realized on demand
    and agree under the natural inclusions (generator lists are prefixes)."""

    def __init__(self, base, prefix="X"):
        self.base = base
        self.prefix = prefix
        self._levels = {}

    def realize(self, m):
        if m not in self._levels:
            extra = [f"{self.prefix}{i+1}" for i in range(m)]
            big, inj = self.base.ambient.extend(extra)
            ring = PresentedRing(big, [inj(f) for f in self.base.defining],
                                 defining_is_prime=self.base.defining_is_prime)
            self._levels[m] = ring
        return self._levels[m]

    def level_of(self, texts):
        level = 0
        pat = re.compile(re.escape(self.prefix) + r"(\d+)")
        for t in texts:
            for mt in pat.finditer(t):
                level = max(level, int(mt.group(1)))
        return level


def limit_ring_ops(L, gen_texts, level=None, budget=None):
    """Grade and height of an ideal given at some realization level, with a
    faithful-flatness stability check one level up."""
    if budget is None:
        budget = Budget()
    m = L.level_of(gen_texts) if level is None else level
    ring_m = L.realize(m)
    a_m = ring_m.ideal(gen_texts)
    grade_m = koszul_grade(a_m, None, budget)
    ht_m = height_ideal(a_m)
    ring_up = L.realize(m + 1)
    a_up = ring_up.ideal(gen_texts)
    grade_up = koszul_grade(a_up, None, budget)
    ht_up = height_ideal(a_up)
    return {
        "level": m,
        "grade": grade_m.to_json(),
        "height": "inf" if ht_m == float("inf") else ht_m,
        "stable": grade_m.value == grade_up.value and ht_m == ht_up,
        "grade_next": grade_up.to_json(),
        "height_next": "inf" if ht_up == float("inf") else ht_up,
    }


# ---------------------------------------------------------------------------
# perfect closure levels (characteristic p)


class FracPoly:
    """Sparse polynomial with nonnegative rational exponents; just enough
    arithmetic to parse perfect-closure ideal generators."""

    def __init__(self, names, field, terms):
        self.names = tuple(names)
        self.field = field
        self.terms = {m: c for m, c in terms.items() if not field.is_zero(c)}

    @classmethod
    def const(cls, names, field, c):
        c = field.coerce(c)
        return cls(names, field, {(Fraction(0),) * len(names): c})

    @classmethod
    def variable(cls, names, field, name):
        e = [Fraction(0)] * len(names)
        e[list(names).index(name)] = Fraction(1)
        return cls(names, field, {tuple(e): field.one})

    def __add__(self, other):
        f = self.field
        res = dict(self.terms)
        for m, c in other.terms.items():
            s = f.add(res.get(m, f.zero), c)
            if f.is_zero(s):
                res.pop(m, None)
            else:
                res[m] = s
        return FracPoly(self.names, f, res)

    def __neg__(self):
        f = self.field
        return FracPoly(self.names, f, {m: f.neg(c) for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, FracPoly):
            other = FracPoly.const(self.names, self.field, other)
        f = self.field
        res = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                s = f.add(res.get(m, f.zero), f.mul(c1, c2))
                if f.is_zero(s):
                    res.pop(m, None)
                else:
                    res[m] = s
        return FracPoly(self.names, f, res)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __pow__(self, k):
        out = FracPoly.const(self.names, self.field, 1)
        for _ in range(k):
            out = out * self
        return out

    def pow_fraction(self, q):
        if len(self.terms) != 1:
            raise ValueError("fractional powers only on monomials")
        (m, c), = self.terms.items()
        if c != self.field.one:
            raise ValueError("fractional powers only on monic monomials")
        return FracPoly(self.names, self.field,
                        {tuple(e * q for e in m): c})

    def denominator(self):
        out = 1
        for m in self.terms:
            for e in m:
                out = out * e.denominator // __import__("math").gcd(out, e.denominator)
        return out

    def rescale(self, factor, ring):
        terms = {}
        for m, c in self.terms.items():
            exps = []
            for e in m:
                v = e * factor
                if v.denominator != 1:
                    raise LevelTooLow(f"exponent {e} does not clear at this level")
                exps.append(int(v))
            terms[tuple(exps)] = c
        return ring.from_terms(terms)


class _FracParser(_PolyParser):
    def __init__(self, names, field, text):
        super().__init__(None, text, fractional=True)
        self.names = names
        self.field = field
        self.var_names = tuple(names)
        self.field_char = getattr(field, "char", 0)

    def make_const(self, c):
        return FracPoly.const(self.names, self.field, c)

    def make_var(self, name):
        return FracPoly.variable(self.names, self.field, name)


class PerfectClosure:
    """Level rings of the perfect closure of k[x_1..x_d] in characteristic p:
    at level l the variable y_i stands for x_i^(1/p^l), so a fractional
    exponent e becomes the integer exponent e * p^l."""

    def __init__(self, p, var_names, field=None):
        self.p = p
        self.names = tuple(var_names)
        self.field = field if field is not None else GF(p)
        if getattr(self.field, "char", 0) != p:
            raise BadCharacteristic("perfect closure needs characteristic p")

    def parse(self, text):
        return _FracParser(self.names, self.field, text).parse()

    def min_level(self, fpolys):
        level = 0
        for fp in fpolys:
            den = fp.denominator()
            l = 0
            while self.p ** l % den != 0:
                l += 1
                if l > 64:
                    raise LevelTooLow(f"denominator {den} is not a power of {self.p}")
            level = max(level, l)
        return level

    def level_ring(self, level):
        return PresentedRing.polynomial(PolyRing(self.field, self.names))

    def realize(self, fpolys, level):
        ring = self.level_ring(level)
        factor = self.p ** level
        return ring, [fp.rescale(factor, ring.ambient) for fp in fpolys]


def perfect_closure_ops(pc, gen_texts, level=None, budget=None):
    """Grade/height of a fractional-exponent ideal at its level ring, with a
    flatness stability check one level up (y_i -> z_i^p rescaling)."""
    if budget is None:
        budget = Budget()
    fpolys = [pc.parse(t) if isinstance(t, str) else t for t in gen_texts]
    need = pc.min_level(fpolys)
    if level is None:
        level = need
    if level < need:
        raise LevelTooLow(f"level {level} < required {need}")
    out = {}
    for tag, lv in (("level", level), ("level_next", level + 1)):
        ring, gens = pc.realize(fpolys, lv)
        a = ring.ideal(gens)
        rep = koszul_grade(a, None, budget)
        ht = height_ideal(a)
        out[tag] = {"l": lv, "grade": rep.to_json(),
                    "height": "inf" if ht == float("inf") else ht}
    out["stable"] = (out["level"]["grade"]["value"] == out["level_next"]["grade"]["value"]
                     and out["level"]["height"] == out["level_next"]["height"])
    return out


# ---------------------------------------------------------------------------
# invariant rings


class GroupAction:
    """Finite group acting on a polynomial ring, either by permutations of
    the variables or diagonally through a character with integer weights."""

    def __init__(self, kind, data, order):
        self.kind = kind
        self.data = data
        self.order = order

    @classmethod
    def permutation(cls, generators, nvars):
        """generators: permutations as tuples of images of 0..nvars-1."""
        ident = tuple(range(nvars))
        group = {ident}
        frontier = [tuple(g) for g in generators]
        while frontier:
            g = frontier.pop()
            if g in group:
                continue
            group.add(g)
            for h in list(group):
                for comp in ((tuple(g[h[i]] for i in range(nvars))),
                             (tuple(h[g[i]] for i in range(nvars)))):
                    if comp not in group:
                        frontier.append(comp)
        return cls("permutation", sorted(group), len(group))

    @classmethod
    def diagonal(cls, weights, modulus):
        """Cyclic group of the given order acting by x_i -> g^{w_i} x_i;
        handled through the character combinatorics (a monomial is invariant
        iff its weighted degree vanishes mod the order)."""
        return cls("diagonal", (tuple(w % modulus for w in weights), modulus),
                   modulus)

    def check_unit_order(self, field):
        char = getattr(field, "char", 0)
        if char and self.order % char == 0:
            raise BadCharacteristic(
                f"group order {self.order} is zero in characteristic {char}")


def reynolds(ambient, action, f):
    """The averaging retraction (1/|G|) sum_g g.f onto the invariants."""
    fld = ambient.field
    if action.kind == "diagonal":
        weights, modulus = action.data
        kept = {m: c for m, c in f.terms.items()
                if sum(w * e for w, e in zip(weights, m)) % modulus == 0}
        return Poly(ambient, kept)
    acc = ambient.zero()
    for perm in action.data:
        mapping = {ambient.names[i]: ambient.var(perm[i])
                   for i in range(ambient.n)}
        acc = acc + f.substitute(mapping, target=ambient)
    return acc.scale(fld.inv(fld.coerce(action.order)))


def apply_group_element(ambient, action, g, f):
    if action.kind == "permutation":
        mapping = {ambient.names[i]: ambient.var(g[i]) for i in range(ambient.n)}
        return f.substitute(mapping, target=ambient)
    raise ValueError("diagonal actions act through characters only")


def subalgebra_membership_gb(ambient, gens, tnames, budget=None):
    """Elimination data for membership in k[g_1..g_s]: the ideal
    (t_j - g_j) under an order eliminating the original variables."""
    allnames = list(ambient.names) + list(tnames)
    big = PolyRing(ambient.field, allnames, Elimination(ambient.n))
    pad = len(tnames)
    sys = []
    for j, g in enumerate(gens):
        lift = Poly(big, {m + (0,) * pad: c for m, c in g.terms.items()})
        sys.append(big.var(ambient.n + j) - lift)
    return big, ideal_gb(sys, budget)


def _member(big, gb, ambient, f, budget=None):
    pad = big.n - ambient.n
    lift = Poly(big, {m + (0,) * pad: c for m, c in f.terms.items()})
    nf = ideal_nf(lift, gb, budget)
    return all(all(e == 0 for e in m[:ambient.n]) for m in nf.terms)


class InvariantRingPresentation:
    def __init__(self, ambient, action, gens, tnames, pres_ring, embedding):
        self.ambient = ambient
        self.action = action
        self.gens = gens
        self.tnames = tnames
        self.pres_ring = pres_ring
        self.embedding = embedding  # tname -> invariant polynomial

    def reynolds(self, f):
        return reynolds(self.ambient, self.action, f)

    def embed_poly(self, f_in_t):
        """Image in the big ring of an element written in the t-variables."""
        mapping = {tn: g for tn, g in self.embedding.items()}
        return f_in_t.substitute(mapping, target=self.ambient)

    def verify_generation(self, extra=2, budget=None):
        """Noether-bound check: the Reynolds image of every monomial of
        degree <= |G| + extra lies in the generated subalgebra."""
        big, gb = subalgebra_membership_gb(self.ambient, self.gens,
                                           self.tnames, budget)
        for d in range(1, self.action.order + extra + 1):
            for m in self.ambient.monomials_of_degree(d):
                rho = reynolds(self.ambient, self.action, self.ambient.monomial(m))
                if rho.is_zero():
                    continue
                if not _member(big, gb, self.ambient, rho, budget):
                    return False
        return True


def invariant_ring(ambient, action, tprefix="t", budget=None):
    """Generators (Reynolds averages up to the Noether degree bound |G|),
    presentation by elimination, and the recorded embedding."""
    if budget is None:
        budget = Budget()
    action.check_unit_order(ambient.field)
    candidates = []
    seen = set()
    for d in range(1, action.order + 1):
        for m in ambient.monomials_of_degree(d):
            rho = reynolds(ambient, action, ambient.monomial(m))
            if rho.is_zero():
                continue
            rho = rho.monic()
            if rho.key() not in seen:
                seen.add(rho.key())
                candidates.append(rho)
    candidates.sort(key=lambda f: (f.total_degree(), f.key()))
    kept = []
    for f in candidates:
        if not kept:
            kept.append(f)
            continue
        tnames = [f"{tprefix}{i}" for i in range(len(kept))]
        big, gb = subalgebra_membership_gb(ambient, kept, tnames, budget)
        if not _member(big, gb, ambient, f, budget):
            kept.append(f)
    tnames = [f"{tprefix}{i}" for i in range(len(kept))]
    big, gb = subalgebra_membership_gb(ambient, kept, tnames, budget)
    pad = len(tnames)
    kernel = []
    for g in gb:
        if all(all(e == 0 for e in m[:ambient.n]) for m in g.terms):
            kernel.append(Poly(PolyRing(ambient.field, tnames),
                               {m[ambient.n:]: c for m, c in g.terms.items()}))
    tring = PolyRing(ambient.field, tnames)
    pres = PresentedRing(tring, kernel, defining_is_prime=True)
    embedding = {tn: g for tn, g in zip(tnames, kept)}
    return InvariantRingPresentation(ambient, action, kept, tnames, pres,
                                     embedding)


def veronese(field, var_names, n, tprefix="t"):
    """The n-th Veronese subalgebra as the invariant ring of the diagonal
    cyclic action with all weights 1."""
    ambient = PolyRing(field, var_names)
    action = GroupAction.diagonal([1] * len(var_names), n)
    return invariant_ring(ambient, action, tprefix)


def invariant_transfer_check(P, gen_texts, budget=None):
    """Both sides of the grade/height transfer: a in the presentation ring
    versus its expansion aR in the big ring."""
    if budget is None:
        budget = Budget()
    R_G = P.pres_ring
    a = R_G.ideal(gen_texts)
    big_ring = PresentedRing.polynomial(P.ambient)
    expanded = [P.embed_poly(g) for g in a.gens]
    aR = big_ring.ideal(expanded)
    g1 = koszul_grade(a, None, budget).value
    g2 = koszul_grade(aR, None, budget).value
    h1 = height_ideal(a)
    h2 = height_ideal(aR)
    fmt = lambda v: "inf" if v == float("inf") else v
    return {
        "grade_invariant_ring": fmt(g1),
        "grade_expanded": fmt(g2),
        "height_invariant_ring": fmt(h1),
        "height_expanded": fmt(h2),
        "grades_match": g1 == g2,
        "heights_match": h1 == h2,
    }


# ---------------------------------------------------------------------------
# valuation-domain model (rank r, value group Z^r ordered lexicographically
# with the last coordinate most significant)


class ValuationModel:
    """Symbolic model of a valuation domain of finite rank: the spectrum is
    the chain p_0 = 0 < p_1 < ... < p_r = m given by the convex subgroups,
    finitely generated ideals are principal and keyed by their minimal value,
    and the Koszul grade of a nonzero proper ideal is 1."""

    def __init__(self, rank):
        if rank < 0:
            raise ValueError("rank must be >= 0")
        self.rank = rank

    # value arithmetic -----------------------------------------------------

    def is_positive(self, v):
        for c in reversed(v):
            if c:
                return c > 0
        return False

    def level(self, v):
        """1 + index of the most significant nonzero coordinate; 0 for v=0."""
        for i in range(self.rank - 1, -1, -1):
            if v[i]:
                return i + 1
        return 0

    # spectrum -------------------------------------------------------------

    def primes(self):
        return list(range(self.rank + 1))

    def height(self, i):
        return i

    def min_prime_of(self, v):
        """Index of the unique minimal prime over the principal ideal vR."""
        l = self.level(v)
        return self.rank - l + 1

    def wass_of(self, v):
        """Weakly associated primes of R/vR: colon ideals realize every
        level below the value's own."""
        l = self.level(v)
        return sorted({self.rank - j + 1 for j in range(1, l + 1)})

    def kgrade_ideal(self, v):
        """Koszul grade of vR: 0 for the zero ideal, 1 for nonzero proper."""
        if v is None:
            return 0
        if not self.is_positive(v):
            return float("inf")  # unit ideal
        return 1

    def kgrade_prime(self, i):
        return 0 if i == 0 else 1

    def localized_kgrade(self, i):
        """Koszul grade of the maximal ideal of R_{p_i} (a rank-i model)."""
        return 0 if i == 0 else 1

    def family(self):
        vals = []
        for v in itertools.product((0, 1, 2), repeat=self.rank):
            if any(v):
                vals.append(v)
        return vals

    # the seven conditions of the equivalence ------------------------------

    def seven_conditions(self):
        fam = self.family()
        ideals_ok = all(self.min_prime_of(v) == self.kgrade_ideal(v) for v in fam) \
            and all(self.height(i) == self.kgrade_prime(i)
                    for i in self.primes() if i >= 1)
        primes_ok = all(self.height(i) == self.kgrade_prime(i)
                        for i in self.primes() if i >= 1)
        glaz_ok = all(self.height(i) == self.localized_kgrade(i)
                      for i in self.primes())
        fg_ok = all(self.min_prime_of(v) == self.kgrade_ideal(v) for v in fam)
        dim_ok = self.rank <= 1
        wb_ok = all(self.wass_of(v) == [self.min_prime_of(v)] for v in fam)
        max_ok = self.height(self.rank) == self.kgrade_prime(self.rank)
        return {
            "ideals": ideals_ok,
            "primes": primes_ok,
            "glaz": glaz_ok,
            "fg_ideals": fg_ok,
            "dim_le_1": dim_ok,
            "wb_unmixed": wb_ok,
            "max": max_ok,
        }

    def report(self):
        conds = self.seven_conditions()
        values = set(conds.values())
        return {
            "rank": self.rank,
            "spec_chain": [f"p{i} (ht {i})" for i in self.primes()],
            "conditions": conds,
            "all_equivalent": len(values) == 1,
            "value": all(conds.values()),
        }

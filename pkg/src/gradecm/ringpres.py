"""Presented rings R = k[x..]/I, ideals, finitely presented modules, and the
ideal-theoretic layer: Krull dimension, minimal primes, heights, annihilators
and associated primes.

All computation is lifted to the ambient polynomial ring; quotient-ring
objects carry preimage generators and cached Groebner data.
"""

import itertools
import math
from fractions import Fraction

from .errors import OutsideSupport, UnitIdeal, ZeroRing
from .groebner import (Budget, FreeModule, Vector, ideal_colon, ideal_gb,
                       ideal_intersect, ideal_nf, module_colon, poly_to_vector,
                       radical_membership, saturate, syzygies)
from .polyring import Poly, PolyRing, parse_poly

INF = math.inf

_MAX_SPLIT_DEPTH = 30


class PresentedRing:
    """R = ambient/I with cached reduced Groebner basis of I."""

    def __init__(self, ambient, defining, defining_is_prime=None):
        self.ambient = ambient
        self.defining = [f for f in defining if not f.is_zero()]
        self.defining_is_prime = defining_is_prime
        self._gb = None
        self._min_primes = None
        self._dim_cache = {}

    @classmethod
    def polynomial(cls, ambient):
        return cls(ambient, [], defining_is_prime=True)

    def gb(self):
        if self._gb is None:
            self._gb = ideal_gb(self.defining)
        return self._gb

    def is_zero_ring(self):
        return any(g.is_constant() and not g.is_zero() for g in self.gb())

    def nf(self, f):
        return ideal_nf(f, self.gb())

    def eq_elements(self, f, g):
        return self.nf(f - g).is_zero()

    def poly(self, text):
        return parse_poly(self.ambient, text)

    def element(self, f):
        if isinstance(f, str):
            f = self.poly(f)
        return self.nf(f)

    def ideal(self, gens):
        return IdealHandle(self, gens)

    def zero_ideal(self):
        return IdealHandle(self, [])

    def maximal_ideal(self):
        """The irrelevant maximal ideal (all the variables)."""
        return IdealHandle(self, self.ambient.gens())

    def key(self):
        return (self.ambient.field.name, self.ambient.names,
                tuple(g.key() for g in self.gb()))

    def __eq__(self, other):
        return isinstance(other, PresentedRing) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        if not self.defining:
            return repr(self.ambient)
        return f"{self.ambient} / ({', '.join(map(repr, self.gb()))})"

    # dimension helpers with a per-ring cache

    def dim_of(self, gens_with_defining):
        gens = list(gens_with_defining)
        key = tuple(sorted(g.key() for g in gens))
        if key not in self._dim_cache:
            gb = ideal_gb(gens)
            self._dim_cache[key] = dim_quotient_gb(self.ambient, gb)
        return self._dim_cache[key]


class IdealHandle:
    """Finitely generated ideal of a PresentedRing, stored by ambient
    preimage generators (normal forms against the defining ideal)."""

    def __init__(self, ring, gens):
        self.ring = ring
        clean = []
        seen = set()
        for g in gens:
            if isinstance(g, str):
                g = ring.poly(g)
            g = ring.nf(g)
            if g.is_zero():
                continue
            k = g.key()
            if k not in seen:
                seen.add(k)
                clean.append(g)
        self.gens = clean
        self._gb = None
        self._min = None

    def preimage_gens(self):
        return self.ring.defining + self.gens

    def gb(self):
        if self._gb is None:
            self._gb = ideal_gb(self.preimage_gens())
        return self._gb

    def contains(self, f):
        if isinstance(f, str):
            f = self.ring.poly(f)
        return ideal_nf(f, self.gb()).is_zero()

    def radical_contains(self, f):
        if isinstance(f, str):
            f = self.ring.poly(f)
        return radical_membership(f, self.gb(), self.ring.ambient)

    def is_proper(self):
        return not any(g.is_constant() and not g.is_zero() for g in self.gb())

    def is_zero(self):
        return not self.gens

    def plus(self, others):
        extra = []
        for g in others:
            extra.append(self.ring.poly(g) if isinstance(g, str) else g)
        return IdealHandle(self.ring, self.gens + extra)

    def power(self, k):
        if k <= 0:
            return IdealHandle(self.ring, [self.ring.ambient.one()])
        prods = [math.prod(c, start=self.ring.ambient.one())
                 for c in itertools.combinations_with_replacement(self.gens, k)]
        return IdealHandle(self.ring, prods)

    def interreduced_gens(self):
        """Greedy generator trim; the count is an upper bound for mu."""
        gens = list(self.gens)
        changed = True
        while changed:
            changed = False
            for i in range(len(gens)):
                rest = gens[:i] + gens[i + 1:]
                gb = ideal_gb(self.ring.defining + rest)
                if ideal_nf(gens[i], gb).is_zero():
                    gens.pop(i)
                    changed = True
                    break
        return gens

    def key(self):
        return tuple(g.key() for g in self.gb())

    def __eq__(self, other):
        return (isinstance(other, IdealHandle) and self.ring == other.ring
                and self.key() == other.key())

    def __hash__(self):
        return hash((self.ring.key(), self.key()))

    def __repr__(self):
        return f"({', '.join(map(repr, self.gens)) or '0'})"


class PresentedModule:
    """M = coker(phi) for phi a map of finite free R-modules; stored as the
    target rank plus the relation columns (vectors over the ambient ring)."""

    def __init__(self, ring, rank, relations):
        self.ring = ring
        self.rank = rank
        self.relations = [v for v in relations if not v.is_zero()]
        self._rel_gb = None

    @classmethod
    def free(cls, ring, rank=1):
        return cls(ring, rank, [])

    @classmethod
    def cyclic(cls, ring, gens):
        """R/a as a module, a given by generators (or an IdealHandle)."""
        if isinstance(gens, IdealHandle):
            gens = gens.gens
        mod = FreeModule(ring.ambient, 1)
        rels = []
        for g in gens:
            if isinstance(g, str):
                g = ring.poly(g)
            rels.append(poly_to_vector(mod, g))
        return cls(ring, 1, rels)

    @classmethod
    def from_matrix(cls, ring, rows):
        """rows: list of rows of polynomials (or strings); relations are the
        columns of the matrix."""
        parsed = []
        for row in rows:
            parsed.append([ring.poly(e) if isinstance(e, str) else e for e in row])
        rank = len(parsed)
        if rank == 0:
            return cls(ring, 0, [])
        ncols = len(parsed[0])
        mod = FreeModule(ring.ambient, rank)
        rels = []
        for j in range(ncols):
            rels.append(mod.from_polys([parsed[i][j] for i in range(rank)]))
        return cls(ring, rank, rels)

    def module(self):
        return FreeModule(self.ring.ambient, self.rank)

    def relations_with_defining(self):
        """Relation vectors over the ambient ring, including I * e_j."""
        mod = self.module()
        rels = list(self.relations)
        for f in self.ring.defining:
            for j in range(self.rank):
                rels.append(mod.unit(j).mul_poly(f))
        return rels

    def rel_gb(self):
        if self._rel_gb is None:
            from .groebner import buchberger
            self._rel_gb = buchberger(self.relations_with_defining())
        return self._rel_gb

    def nf(self, vec):
        from .groebner import reduce_vector
        return reduce_vector(vec, self.rel_gb())

    def is_zero(self):
        if self.rank == 0:
            return True
        mod = self.module()
        return all(self.nf(mod.unit(j)).is_zero() for j in range(self.rank))

    def __repr__(self):
        return f"coker({len(self.relations)} rels on {self.ring}^{self.rank})"


class PrimeWitness:
    def __init__(self, ideal, certified, certificate=""):
        self.ideal = ideal
        self.certified = certified
        self.certificate = certificate

    def contains(self, other):
        """True if other (an IdealHandle) is contained in this prime."""
        return all(self.ideal.contains(g) for g in other.gens)

    def key(self):
        return self.ideal.key()

    def __repr__(self):
        tag = "prime" if self.certified else "probable prime"
        return f"{self.ideal!r} [{tag}: {self.certificate}]"


# ---------------------------------------------------------------------------
# Krull dimension via independent variable sets modulo the initial ideal


def dim_quotient_gb(ambient, gb):
    """dim(S/J) from a Groebner basis of J; -1 for the zero ring."""
    if any(g.is_constant() and not g.is_zero() for g in gb):
        return -1
    n = ambient.n
    supports = set()
    for g in gb:
        m = g.lm()
        supports.add(sum(1 << i for i, e in enumerate(m) if e))
    if 0 in supports:
        return -1
    for size in range(n, -1, -1):
        for combo in itertools.combinations(range(n), size):
            mask = sum(1 << i for i in combo)
            if all(s & mask != s for s in supports):
                return size
    return 0


def krull_dim(ring):
    if ring.is_zero_ring():
        raise ZeroRing("Krull dimension of the zero ring")
    return dim_quotient_gb(ring.ambient, ring.gb())


# ---------------------------------------------------------------------------
# primality certificates


def _poly_sqrt(f):
    """Exact square root of a polynomial, or None."""
    ring = f.ring
    fld = ring.field
    if f.is_zero():
        return ring.zero()
    if getattr(fld, "char", 0) == 2:
        # squaring is the Frobenius: f is a square iff all exponents are even
        terms = {}
        for m, c in f.terms.items():
            if any(e % 2 for e in m):
                return None
            terms[tuple(e // 2 for e in m)] = c
        return Poly(ring, terms)
    lm = f.lm()
    if any(e % 2 for e in lm):
        return None
    lc = f.lc()
    c = _coeff_sqrt(fld, lc)
    if c is None:
        return None
    root = ring.monomial(tuple(e // 2 for e in lm), c)
    guard = 4 * (len(f.terms) + 2) ** 2
    while guard:
        guard -= 1
        d = f - root * root
        if d.is_zero():
            return root
        dm = d.lm()
        halfm = root.lm()
        if not all(dm[i] >= halfm[i] for i in range(len(dm))):
            return None
        q = tuple(dm[i] - halfm[i] for i in range(len(dm)))
        t = ring.monomial(q, fld.div(d.lc(), fld.mul(fld.coerce(2), c)))
        new = root + t
        if ring.order.key(t.lm()) >= ring.order.key(halfm):
            return None
        root = new
    return None


def _coeff_sqrt(field, c):
    if getattr(field, "char", 0) == 0:
        if c < 0:
            return None
        num, den = c.numerator, c.denominator
        a = math.isqrt(num)
        b = math.isqrt(den)
        if a * a == num and b * b == den:
            return Fraction(a, b)
        return None
    p = field.char
    c = c % p
    if c == 0:
        return 0
    if p == 2:
        return c
    if pow(c, (p - 1) // 2, p) != 1:
        return None
    # Tonelli-Shanks
    if p % 4 == 3:
        return pow(c, (p + 1) // 4, p)
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, cc, t, r = s, pow(z, q, p), pow(c, q, p), pow(c, (q + 1) // 2, p)
    while t != 1:
        t2, i = t, 0
        while t2 != 1:
            t2 = (t2 * t2) % p
            i += 1
        b = pow(cc, 1 << (m - i - 1), p)
        m, cc, t, r = i, (b * b) % p, (t * b * b) % p, (r * b) % p
    return r


def _support_vars(f):
    out = set()
    for m in f.terms:
        for i, e in enumerate(m):
            if e:
                out.add(i)
    return out


def _as_univariate(f, i):
    """Coefficients of f as a polynomial in variable i, constant-wise polys."""
    ring = f.ring
    coeffs = {}
    for m, c in f.terms.items():
        d = m[i]
        rest = list(m)
        rest[i] = 0
        coeffs.setdefault(d, {})[tuple(rest)] = c
    deg = max(coeffs)
    return [Poly(ring, coeffs.get(d, {})) for d in range(deg + 1)]


def _variable_divides(f, i, power=1):
    return all(m[i] >= power for m in f.terms)


def _univariate_irreducible(f, i):
    """deg <= 3 univariate irreducibility over QQ or GF(p); None if unknown."""
    ring = f.ring
    fld = ring.field
    coeffs = _as_univariate(f, i)
    if not all(c.is_constant() for c in coeffs):
        return None
    cs = [c.constant_value() for c in coeffs]
    d = len(cs) - 1
    if d == 1:
        return True
    if getattr(fld, "char", 0) == 0:
        if d > 3:
            return None
        # clear denominators; rational root test
        den = math.lcm(*[c.denominator for c in cs])
        ints = [int(c * den) for c in cs]
        g = math.gcd(*[abs(v) for v in ints if v] or [1])
        ints = [v // g for v in ints]
        if ints[0] == 0:
            return False  # root at 0
        lead, const = ints[-1], ints[0]
        for p in _divisors(abs(const)):
            for q in _divisors(abs(lead)):
                for sgn in (1, -1):
                    r = Fraction(sgn * p, q)
                    if sum(Fraction(ints[k]) * r**k for k in range(d + 1)) == 0:
                        return False
        if d == 2:
            return True
        return True if d == 3 else None
    p = fld.char
    if d > 3:
        return None
    if cs[0] % p == 0:
        return False
    if d == 2:
        if p == 2:
            return all((cs[2] * r * r + cs[1] * r + cs[0]) % 2 for r in (0, 1))
        disc = (cs[1] * cs[1] - 4 * cs[2] * cs[0]) % p
        return _coeff_sqrt(fld, disc) is None
    # cubic: irreducible iff no root; root iff gcd(X^p - X, f) nontrivial
    return not _has_root_fp(cs, p)


def _divisors(n):
    if n == 0:
        return [1]
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            if d != n // d:
                out.append(n // d)
        d += 1
    return sorted(out)


def _has_root_fp(cs, p):
    """Root existence for a dense univariate over GF(p) via gcd(X^p - X, f)."""

    def pmod(a, b):
        a = a[:]
        db, lb = len(b) - 1, b[-1]
        inv = pow(lb, p - 2, p)
        while len(a) - 1 >= db and any(a):
            if a[-1] == 0:
                a.pop()
                continue
            f = (a[-1] * inv) % p
            sh = len(a) - 1 - db
            for k in range(len(b)):
                a[sh + k] = (a[sh + k] - f * b[k]) % p
            a.pop()
        return a or [0]

    def pmul(a, b):
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] = (out[i + j] + x * y) % p
        return out

    cs = [c % p for c in cs]
    # X^p mod f by square and multiply
    base = [0, 1]
    result = [1]
    e = p
    base = pmod(base, cs)
    while e:
        if e & 1:
            result = pmod(pmul(result, base), cs)
        base = pmod(pmul(base, base), cs)
        e >>= 1
    # X^p - X mod f
    res = result[:]
    while len(res) < 2:
        res.append(0)
    res[1] = (res[1] - 1) % p
    return any(res)


def _certify_principal(g):
    """Certificate that a single polynomial generates a prime ideal."""
    ring = g.ring
    sup = sorted(_support_vars(g))
    if g.total_degree() == 1:
        return True, "linear"
    # monomial content rules primality out (splitting handles it)
    for i in sup:
        if _variable_divides(g, i):
            return False, None
    if len(sup) == 1:
        r = _univariate_irreducible(g, sup[0])
        if r is True:
            return True, "univariate irreducible"
        return (False, None) if r is False else (None, None)
    # Eisenstein at a variable
    for main in sup:
        coeffs = _as_univariate(g, main)
        d = len(coeffs) - 1
        if d < 1 or not coeffs[-1].is_constant() or coeffs[-1].is_zero():
            continue
        lower = [c for c in coeffs[:-1] if not c.is_zero()]
        for w in sup:
            if w == main:
                continue
            if all(_variable_divides(c, w) for c in lower) and \
                    not _variable_divides(coeffs[0], w, power=2) and \
                    not coeffs[0].is_zero():
                return True, f"Eisenstein in {ring.names[main]} at {ring.names[w]}"
        # quadratic with constant lead: discriminant square test
        if d == 2 and getattr(ring.field, "char", 0) != 2:
            c2, c1, c0 = coeffs[2].constant_value(), coeffs[1], coeffs[0]
            disc = c1 * c1 - c0.scale(ring.field.mul(ring.field.coerce(4), c2))
            if _poly_sqrt(disc) is None and _poly_sqrt(-disc) is None:
                return True, f"quadratic in {ring.names[main]}, non-square discriminant"
    return None, None


def _eliminate_linear(ambient, gb):
    """Substitute away a variable solved by a linear generator; returns
    (smaller ambient, gens) or None."""
    from .polyring import DegRevLex

    for g in gb:
        if g.total_degree() != 1:
            continue
        pivot = None
        for m, c in g.terms.items():
            if sum(m) == 1:
                pivot = (m.index(1), c)
                break
        if pivot is None:
            continue
        i, coeff = pivot
        fld = ambient.field
        rest = Poly(ambient, {m: c for m, c in g.terms.items() if m[i] == 0})
        expr_big = rest.scale(fld.neg(fld.inv(coeff)))
        names = [nm for k, nm in enumerate(ambient.names) if k != i]
        small = PolyRing(ambient.field, names, DegRevLex())
        mapping = {nm: small.var(nm) for nm in names}
        expr_small = (expr_big.substitute(mapping, target=small)
                      if not expr_big.is_zero() else small.zero())
        mapping[ambient.names[i]] = expr_small
        new_gens = []
        for h in gb:
            if h is g:
                continue
            img = h.substitute(mapping, target=small)
            if not img.is_zero():
                new_gens.append(img)
        return small, new_gens
    return None


def certify_prime(ambient, gb):
    """(True, tag) when gb is certified prime, (False, None) when certified
    not prime, (None, None) when unknown."""
    if not gb:
        return True, "zero ideal of a polynomial ring"
    if any(g.is_constant() and not g.is_zero() for g in gb):
        return False, None
    if all(g.total_degree() == 1 for g in gb):
        return True, "linear forms"
    step = _eliminate_linear(ambient, gb)
    if step is not None:
        small, gens = step
        return certify_prime(small, ideal_gb(gens))
    if len(gb) == 1:
        return _certify_principal(gb[0])
    return None, None


# ---------------------------------------------------------------------------
# minimal primes by splitting


def _splitter_candidates(ambient, gb):
    seen = set()
    out = []

    def push(f):
        f = f.monic()
        k = f.key()
        if k not in seen and not f.is_zero() and not f.is_constant():
            seen.add(k)
            out.append(f)

    fld = ambient.field
    for g in gb:
        sup = sorted(_support_vars(g))
        for i in sup:
            if _variable_divides(g, i):
                push(ambient.var(i))
        s = _poly_sqrt(g.monic())
        if s is not None:
            push(s)
        # binomial difference of squares: c1*m1 + c2*m2
        if len(g.terms) == 2 and getattr(fld, "char", 0) != 2:
            (m1, c1), (m2, c2) = sorted(g.terms.items(),
                                        key=lambda t: ambient.order.key(t[0]),
                                        reverse=True)
            if all(e % 2 == 0 for e in m1) and all(e % 2 == 0 for e in m2):
                ratio = fld.neg(fld.div(c2, c1))
                r = _coeff_sqrt(fld, ratio)
                if r is not None:
                    h1 = tuple(e // 2 for e in m1)
                    h2 = tuple(e // 2 for e in m2)
                    push(ambient.monomial(h1) - ambient.monomial(h2, r))
        # univariate with a rational root: peel the root factor
        sup = sorted(_support_vars(g))
        if len(sup) == 1 and getattr(fld, "char", 0) == 0:
            root = _rational_root(g, sup[0])
            if root is not None:
                push(ambient.var(sup[0]) - ambient.const(root))
    for i in range(ambient.n):
        push(ambient.var(i))
    return out


def _rational_root(g, i):
    coeffs = _as_univariate(g, i)
    if not all(c.is_constant() for c in coeffs):
        return None
    cs = [c.constant_value() for c in coeffs]
    den = math.lcm(*[c.denominator for c in cs])
    ints = [int(c * den) for c in cs]
    if ints[0] == 0:
        return Fraction(0)
    lead, const = ints[-1], ints[0]
    for p in _divisors(abs(const)):
        for q in _divisors(abs(lead)):
            for sgn in (1, -1):
                r = Fraction(sgn * p, q)
                if sum(Fraction(ints[k]) * r**k for k in range(len(ints))) == 0:
                    return r
    return None


def _min_primes_ambient(ambient, gens, depth=0):
    """Minimal primes over the ambient polynomial ring, as
    (gb, certified, certificate) triples."""
    gb = ideal_gb(gens)
    if any(g.is_constant() and not g.is_zero() for g in gb):
        return []
    cert, tag = certify_prime(ambient, gb)
    if cert is True:
        return [(gb, True, tag)]
    if depth < _MAX_SPLIT_DEPTH:
        for f in _splitter_candidates(ambient, gb):
            if ideal_nf(f, gb).is_zero():
                continue
            sat_gb, _ = saturate(gb, f)
            if [g.key() for g in sat_gb] == [g.key() for g in gb]:
                continue
            left = _min_primes_ambient(ambient, gb + [f], depth + 1)
            right = _min_primes_ambient(ambient, sat_gb, depth + 1)
            return _dedupe_minimal(left + right)
    return [(gb, False, "no splitter made progress")]


def _dedupe_minimal(cands):
    uniq = {}
    for gb, cert, tag in cands:
        key = tuple(g.key() for g in gb)
        if key not in uniq:
            uniq[key] = (gb, cert, tag)
    items = list(uniq.values())
    keep = []
    for i, (gb_i, cert_i, tag_i) in enumerate(items):
        minimal = True
        for j, (gb_j, _, _) in enumerate(items):
            if i == j:
                continue
            if all(ideal_nf(g, gb_i).is_zero() for g in gb_j):
                # gb_j is contained in gb_i
                if not all(ideal_nf(g, gb_j).is_zero() for g in gb_i):
                    minimal = False
                    break
        if minimal:
            keep.append((gb_i, cert_i, tag_i))
    keep.sort(key=lambda t: tuple(g.key() for g in t[0]))
    return keep


def minimal_primes(a):
    """Min(a) over the presented ring, as PrimeWitness list."""
    if a._min is not None:
        return a._min
    ring = a.ring
    if not a.is_proper():
        raise UnitIdeal("Min of the unit ideal")
    if a.is_zero() and ring.defining_is_prime:
        w = [PrimeWitness(IdealHandle(ring, ring.gb()), True,
                          "defining ideal certified prime by construction")]
        a._min = w
        return w
    triples = _min_primes_ambient(ring.ambient, a.preimage_gens())
    out = [PrimeWitness(IdealHandle(ring, gb), cert, tag or "")
           for gb, cert, tag in triples]
    a._min = out
    return out


def ring_minimal_primes(ring):
    if ring._min_primes is None:
        ring._min_primes = minimal_primes(ring.zero_ideal())
    return ring._min_primes


# ---------------------------------------------------------------------------
# heights


def height_prime(p):
    """ht(p) = max over ring components q below p of dim R/q - dim R/p."""
    ring = p.ideal.ring
    dim_p = ring.dim_of(p.ideal.preimage_gens())
    best = None
    for q in ring_minimal_primes(ring):
        if all(p.ideal.contains(g) for g in q.ideal.gens):
            dim_q = ring.dim_of(q.ideal.preimage_gens())
            h = dim_q - dim_p
            if best is None or h > best:
                best = h
    if best is None:
        # no component below: p not in Spec R (cannot happen for proper p)
        raise ZeroRing("prime outside the spectrum")
    return best


def height_ideal(a):
    """ht(a) = min over minimal primes; +infinity for the unit ideal."""
    if not a.is_proper():
        return INF
    return min(height_prime(p) for p in minimal_primes(a))


def height_certified(a):
    """(height, all primes certified) for reporting."""
    if not a.is_proper():
        return INF, True
    mins = minimal_primes(a)
    cert = all(p.certified for p in mins) and \
        all(q.certified for q in ring_minimal_primes(a.ring))
    return min(height_prime(p) for p in mins), cert


# ---------------------------------------------------------------------------
# annihilators, module heights, associated primes


def annihilator(M):
    """Ann_R(M) as an IdealHandle (generators are ambient preimages)."""
    ring = M.ring
    if M.rank == 0:
        return IdealHandle(ring, [ring.ambient.one()])
    rels = M.relations_with_defining()
    mod = M.module()
    ann = None
    for j in range(M.rank):
        col = module_colon(rels, mod.unit(j)) if rels else []
        if ann is None:
            ann = col
        else:
            ann = ideal_intersect(ann, col, ring.ambient)
        if not ann:
            break
    return IdealHandle(ring, ann or [])


def module_height(a, M):
    """ht_M(a): height of (a + Ann M)/Ann M over R/Ann M; +inf when M = aM."""
    ring = a.ring
    ann = annihilator(M)
    combined = ideal_gb(ring.defining + ann.gens + a.gens)
    if any(g.is_constant() and not g.is_zero() for g in combined):
        return INF
    rbar = PresentedRing(ring.ambient, ring.defining + ann.gens)
    return height_ideal(IdealHandle(rbar, a.gens))


def associated_primes(M):
    """Ass(M) over the ambient polynomial ring (equal to wAss here; the
    presented rings are Noetherian), via the Ext-annihilator criterion:
    p is associated iff p is minimal over Ann Ext^i(M, S) with ht p = i."""
    from .homology import ext_module

    ring = M.ring
    ambient = ring.ambient
    s_ring = PresentedRing.polynomial(ambient)
    m_over_s = PresentedModule(s_ring, M.rank, M.relations_with_defining())
    if m_over_s.is_zero():
        return []
    s_free = PresentedModule.free(s_ring, 1)
    n = ambient.n
    found = {}
    for i in range(n + 1):
        ext_i, nonzero = ext_module(i, m_over_s, s_free)
        if not nonzero:
            continue
        ann = annihilator(ext_i)
        if not ann.is_proper():
            continue
        for gb, cert, tag in _min_primes_ambient(ambient, ann.gens):
            dim_p = dim_quotient_gb(ambient, gb)
            if n - dim_p == i:
                key = tuple(g.key() for g in gb)
                if key not in found:
                    found[key] = PrimeWitness(IdealHandle(ring, gb), cert,
                                              tag or "")
    out = list(found.values())
    out.sort(key=lambda w: w.key())
    return out


def support_contains(p, M):
    """p contains Ann M, i.e. p is in Supp M."""
    ann = annihilator(M)
    return all(p.ideal.contains(g) for g in ann.gens)

"""Multivariate polynomials over an exact field, with pluggable monomial orders.

Monomials are plain exponent tuples; polynomials are immutable term maps
``{exponent tuple: nonzero coefficient}`` attached to a PolyRing.
"""

from fractions import Fraction

from .errors import AmbientMismatch, SubstitutionDomainError
from .scalars import QQ


# ---------------------------------------------------------------------------
# monomial helpers (exponent tuples)

def mono_mul(a, b):
    return tuple(x + y for x, y in zip(a, b))


def mono_divides(a, b):
    """True if a | b componentwise."""
    return all(x <= y for x, y in zip(a, b))


def mono_div(a, b):
    """a / b, assuming b | a."""
    return tuple(x - y for x, y in zip(a, b))


def mono_lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def mono_gcd(a, b):
    return tuple(min(x, y) for x, y in zip(a, b))


def mono_deg(a):
    return sum(a)


def mono_coprime(a, b):
    return all(x == 0 or y == 0 for x, y in zip(a, b))


# ---------------------------------------------------------------------------
# monomial orders


class MonomialOrder:
    """Total multiplicative order with 1 minimal, given by a sort key."""

    name = "order"

    def key(self, mono):
        raise NotImplementedError

    def __eq__(self, other):
        return type(self) is type(other) and self.__dict__ == other.__dict__

    def __hash__(self):
        return hash((type(self).__name__, tuple(sorted(self.__dict__.items()))))

    def __repr__(self):
        return self.name


class Lex(MonomialOrder):
    name = "lex"

    def key(self, mono):
        return mono


class DegRevLex(MonomialOrder):
    name = "degrevlex"

    def key(self, mono):
        return (sum(mono), tuple(-e for e in reversed(mono)))


class Elimination(MonomialOrder):
    """Block order eliminating the first `split` variables (degrevlex on
    each block); any monomial involving the first block beats any that
    does not."""

    def __init__(self, split):
        self.split = split
        self.name = f"elim({split})"

    def key(self, mono):
        a, b = mono[: self.split], mono[self.split:]
        return (sum(a), tuple(-e for e in reversed(a)),
                sum(b), tuple(-e for e in reversed(b)))


# ---------------------------------------------------------------------------


class PolyRing:
    """k[x_1..x_n] with a fixed monomial order."""

    __slots__ = ("field", "names", "order", "n", "_zero_mono")

    def __init__(self, field, names, order=None):
        self.field = field
        self.names = tuple(names)
        self.order = order if order is not None else DegRevLex()
        self.n = len(self.names)
        self._zero_mono = (0,) * self.n

    def __eq__(self, other):
        return (isinstance(other, PolyRing) and self.field == other.field
                and self.names == other.names and self.order == other.order)

    def __hash__(self):
        return hash((self.field, self.names, self.order))

    def __repr__(self):
        return f"{self.field}[{','.join(self.names)}]/{self.order.name}"

    # construction helpers

    def zero(self):
        return Poly(self, {})

    def one(self):
        return self.const(1)

    def const(self, c):
        c = self.field.coerce(c)
        if self.field.is_zero(c):
            return Poly(self, {})
        return Poly(self, {self._zero_mono: c})

    def var(self, i):
        if isinstance(i, str):
            i = self.names.index(i)
        e = [0] * self.n
        e[i] = 1
        return Poly(self, {tuple(e): self.field.one})

    def gens(self):
        return [self.var(i) for i in range(self.n)]

    def monomial(self, exps, coeff=1):
        coeff = self.field.coerce(coeff)
        if self.field.is_zero(coeff):
            return self.zero()
        return Poly(self, {tuple(exps): coeff})

    def from_terms(self, terms):
        clean = {}
        for m, c in terms.items():
            c = self.field.coerce(c)
            if not self.field.is_zero(c):
                clean[tuple(m)] = c
        return Poly(self, clean)

    def monomials_of_degree(self, d):
        """All exponent tuples of total degree exactly d."""
        out = []

        def rec(prefix, remaining, slots):
            if slots == 1:
                out.append(tuple(prefix + [remaining]))
                return
            for e in range(remaining + 1):
                rec(prefix + [e], remaining - e, slots - 1)

        if self.n == 0:
            return [()] if d == 0 else []
        rec([], d, self.n)
        return out

    def extend(self, extra_names, front=False, order=None):
        """Return (bigger ring, injection fn) adjoining new variables."""
        if front:
            names = tuple(extra_names) + self.names
            pad = len(extra_names)

            def inject(f, ring=None):
                target = ring
                return Poly(target, {(0,) * pad + m: c for m, c in f.terms.items()})
        else:
            names = self.names + tuple(extra_names)
            pad = len(extra_names)

            def inject(f, ring=None):
                target = ring
                return Poly(target, {m + (0,) * pad: c for m, c in f.terms.items()})

        big = PolyRing(self.field, names, order if order is not None else self.order)

        def inj(f):
            return inject(f, big)

        return big, inj

    def parse(self, text):
        return parse_poly(self, text)


class Poly:
    """Immutable polynomial; ``terms`` maps exponent tuples to nonzero coeffs."""

    __slots__ = ("ring", "terms", "_lm")

    def __init__(self, ring, terms):
        self.ring = ring
        self.terms = terms
        self._lm = None

    # ---- queries

    def is_zero(self):
        return not self.terms

    def is_constant(self):
        return not self.terms or (len(self.terms) == 1 and self.ring._zero_mono in self.terms)

    def constant_value(self):
        return self.terms.get(self.ring._zero_mono, self.ring.field.zero)

    def lm(self):
        if self._lm is None and self.terms:
            self._lm = max(self.terms, key=self.ring.order.key)
        return self._lm

    def lc(self):
        m = self.lm()
        return self.terms[m] if m is not None else self.ring.field.zero

    def lt(self):
        m = self.lm()
        return (m, self.terms[m]) if m is not None else None

    def total_degree(self):
        if not self.terms:
            return -1
        return max(sum(m) for m in self.terms)

    def is_homogeneous(self):
        degs = {sum(m) for m in self.terms}
        return len(degs) <= 1

    def monic(self):
        if not self.terms:
            return self
        f = self.ring.field
        c = self.lc()
        if c == f.one:
            return self
        ci = f.inv(c)
        return Poly(self.ring, {m: f.mul(v, ci) for m, v in self.terms.items()})

    # ---- arithmetic

    def _check(self, other):
        if self.ring != other.ring:
            raise AmbientMismatch(f"{self.ring} vs {other.ring}")

    def __add__(self, other):
        if not isinstance(other, Poly):
            other = self.ring.const(other)
        self._check(other)
        f = self.ring.field
        res = dict(self.terms)
        for m, c in other.terms.items():
            s = f.add(res.get(m, f.zero), c)
            if f.is_zero(s):
                res.pop(m, None)
            else:
                res[m] = s
        return Poly(self.ring, res)

    def __radd__(self, other):
        return self.__add__(other)

    def __neg__(self):
        f = self.ring.field
        return Poly(self.ring, {m: f.neg(c) for m, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, Poly):
            other = self.ring.const(other)
        return self.__add__(other.__neg__())

    def __rsub__(self, other):
        return self.ring.const(other).__sub__(self)

    def __mul__(self, other):
        if not isinstance(other, Poly):
            c = self.ring.field.coerce(other)
            return self.scale(c)
        self._check(other)
        f = self.ring.field
        res = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = mono_mul(m1, m2)
                s = f.add(res.get(m, f.zero), f.mul(c1, c2))
                if f.is_zero(s):
                    res.pop(m, None)
                else:
                    res[m] = s
        return Poly(self.ring, res)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __pow__(self, k):
        if k < 0:
            raise ValueError("negative power")
        out = self.ring.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base if k > 1 else base
            k >>= 1
        return out

    def scale(self, c):
        f = self.ring.field
        c = f.coerce(c)
        if f.is_zero(c):
            return self.ring.zero()
        return Poly(self.ring, {m: f.mul(v, c) for m, v in self.terms.items()})

    def mul_term(self, coeff, mono):
        f = self.ring.field
        if f.is_zero(coeff):
            return self.ring.zero()
        return Poly(self.ring, {mono_mul(m, mono): f.mul(v, coeff)
                                for m, v in self.terms.items()})

    def substitute(self, mapping, target=None):
        """Ring-homomorphic image; mapping sends every variable appearing in
        self to a Poly of the target ring."""
        used = set()
        for m in self.terms:
            for i, e in enumerate(m):
                if e:
                    used.add(self.ring.names[i])
        missing = used - set(mapping)
        if missing:
            raise SubstitutionDomainError(f"no image for {sorted(missing)}")
        if target is None:
            for v in mapping.values():
                target = v.ring
                break
            if target is None:
                target = self.ring
        out = target.zero()
        for m, c in self.terms.items():
            part = target.const(c)
            for i, e in enumerate(m):
                if e:
                    part = part * (mapping[self.ring.names[i]] ** e)
            out = out + part
        return out

    # ---- identity

    def key(self):
        return tuple(sorted(self.terms.items()))

    def __eq__(self, other):
        return isinstance(other, Poly) and self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        return hash((self.ring, self.key()))

    def __repr__(self):
        if not self.terms:
            return "0"
        names = self.ring.names
        parts = []
        for m in sorted(self.terms, key=self.ring.order.key, reverse=True):
            c = self.terms[m]
            factors = []
            for i, e in enumerate(m):
                if e == 1:
                    factors.append(names[i])
                elif e > 1:
                    factors.append(f"{names[i]}^{e}")
            body = "*".join(factors)
            if not body:
                parts.append(str(c))
            elif c == self.ring.field.one:
                parts.append(body)
            elif c == self.ring.field.coerce(-1):
                parts.append(f"-{body}")
            else:
                parts.append(f"{c}*{body}")
        s = " + ".join(parts)
        return s.replace("+ -", "- ")


# ---------------------------------------------------------------------------
# textual syntax: x^2*y - 3/2*z   (explicit *, ^ for powers)


class _PolyParser:
    def __init__(self, ring, text, fractional=False):
        self.ring = ring
        self.text = text
        self.pos = 0
        self.fractional = fractional  # allow x^(1/2) exponents
        self.var_names = ring.names if ring is not None else ()
        self.field_char = getattr(ring.field, "char", 0) if ring is not None else 0

    def error(self, msg):
        raise ValueError(f"{msg} at position {self.pos} in {self.text!r}")

    def peek(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take_int(self):
        self.peek()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            self.error("expected integer")
        return int(self.text[start:self.pos])

    def take_name(self):
        self.peek()
        start = self.pos
        while self.pos < len(self.text) and (self.text[self.pos].isalnum() or self.text[self.pos] == "_"):
            self.pos += 1
        return self.text[start:self.pos]

    def parse(self):
        out = self.expr()
        if self.peek():
            self.error("trailing input")
        return out

    def expr(self):
        sign = 1
        c = self.peek()
        if c == "+":
            self.pos += 1
        elif c == "-":
            sign = -1
            self.pos += 1
        acc = self.term() * sign
        while True:
            c = self.peek()
            if c == "+":
                self.pos += 1
                acc = acc + self.term()
            elif c == "-":
                self.pos += 1
                acc = acc - self.term()
            else:
                return acc

    def term(self):
        acc = self.factor()
        while self.peek() == "*":
            self.pos += 1
            acc = acc * self.factor()
        return acc

    def factor(self):
        base = self.base()
        if self.peek() == "^":
            self.pos += 1
            if self.peek() == "(":
                self.pos += 1
                num = self.take_int()
                den = 1
                if self.peek() == "/":
                    self.pos += 1
                    den = self.take_int()
                if self.peek() != ")":
                    self.error("expected )")
                self.pos += 1
                if den == 1:
                    return base ** num
                if not self.fractional:
                    self.error("fractional exponent not allowed here")
                return base.pow_fraction(Fraction(num, den))
            e = self.take_int()
            return base ** e
        return base

    def base(self):
        c = self.peek()
        if c == "(":
            self.pos += 1
            inner = self.expr()
            if self.peek() != ")":
                self.error("expected )")
            self.pos += 1
            return inner
        if c == "-":
            self.pos += 1
            return -self.factor()
        if c.isdigit():
            num = self.take_int()
            save = self.pos
            if self.peek() == "/":
                self.pos += 1
                if self.peek().isdigit():
                    den = self.take_int()
                    return self.make_const(Fraction(num, den))
                self.pos = save
            # "a mod p" literal for prime fields
            save = self.pos
            name = self.take_name()
            if name == "mod":
                p = self.take_int()
                if self.field_char != p:
                    self.error(f"modulus {p} does not match the ring's field")
                return self.make_const(num)
            self.pos = save
            return self.make_const(num)
        name = self.take_name()
        if not name:
            self.error("expected term")
        if name not in self.var_names:
            self.error(f"unknown variable {name!r}")
        return self.make_var(name)

    def make_const(self, c):
        return self.ring.const(c)

    def make_var(self, name):
        return self.ring.var(name)


def parse_poly(ring, text):
    return _PolyParser(ring, text).parse()

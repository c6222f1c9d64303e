"""Input DSL: ring/ideal/module/family bindings, constructor statements and
commands, with line/column diagnostics.

Statements end with ';' and '#' starts a comment.  Example:

    ring R = QQ[x,y,z] / (x*y, x*z);
    ideal a = (y) in R;
    grade --notion koszul --ideal a;
    cm-check --sense fg --ring R;
"""

import json

from .cmsense import (check_hm_surrogate, check_sense_fg, check_sense_glaz,
                      check_sense_max, check_sense_primes, check_wb_unmixed,
                      generated_family, implication_audit, primes_for_family,
                      TestFamily)
from .constructors import (GroupAction, LimitRing, PerfectClosure,
                           ValuationModel, invariant_ring,
                           invariant_transfer_check, limit_ring_ops,
                           perfect_closure_ops, trivial_extension, veronese)
from .errors import (DslError, DuplicateName, UnknownReference,
                     UnsupportedField)
from .grade import (cech_grade, classical_grade, ext_grade, hgrade_truncated,
                    koszul_grade, polynomial_grade_witness,
                    strong_parameter_certificate, weak_proregular_check)
from .groebner import Budget
from .polyring import PolyRing
from .ringpres import (IdealHandle, PresentedModule, PresentedRing,
                       height_ideal, krull_dim, minimal_primes)
from .scalars import GF, QQ


class Session:
    def __init__(self, budget_steps=10**6, n_max=4, degree_bound=2, workers=1):
        self.bindings = {}
        self.statements = {}
        self.results = []
        self.current_ring = None
        self.budget_steps = budget_steps
        self.n_max = n_max
        self.degree_bound = degree_bound
        self.workers = workers

    def budget(self):
        return Budget(self.budget_steps)

    def bind(self, name, kind, value, stmt_text, line, col):
        if name in self.bindings:
            raise DuplicateName(f"name {name!r} already bound", line, col)
        self.bindings[name] = (kind, value)
        self.statements[name] = stmt_text

    def get(self, name, kind=None, line=None, col=None):
        if name not in self.bindings:
            raise UnknownReference(f"unknown name {name!r}", line, col)
        k, v = self.bindings[name]
        if kind is not None and k != kind:
            kinds = kind if isinstance(kind, tuple) else (kind,)
            if k not in kinds:
                raise UnknownReference(
                    f"{name!r} is a {k}, expected {kind}", line, col)
        return v

    def kind_of(self, name):
        return self.bindings[name][0] if name in self.bindings else None

    def dump(self):
        """Canonical re-parseable text of all binding statements."""
        return "\n".join(self.statements[n] for n in self.statements)

    def binding_keys(self):
        out = {}
        for name, (kind, value) in self.bindings.items():
            if hasattr(value, "key"):
                out[name] = (kind, value.key())
            else:
                out[name] = (kind, repr(value))
        return out


class _Cursor:
    def __init__(self, text):
        self.text = text
        self.pos = 0

    def location(self, pos=None):
        pos = self.pos if pos is None else pos
        line = self.text.count("\n", 0, pos) + 1
        col = pos - (self.text.rfind("\n", 0, pos) + 1) + 1
        return line, col

    def skip_ws(self):
        while self.pos < len(self.text):
            c = self.text[self.pos]
            if c == "#":
                nl = self.text.find("\n", self.pos)
                self.pos = len(self.text) if nl < 0 else nl + 1
            elif c.isspace():
                self.pos += 1
            else:
                break

    def eof(self):
        self.skip_ws()
        return self.pos >= len(self.text)

    def peek(self):
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch):
        if self.peek() != ch:
            line, col = self.location()
            raise DslError(f"expected {ch!r}", line, col)
        self.pos += 1

    def word(self):
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and \
                (self.text[self.pos].isalnum() or self.text[self.pos] in "_-"):
            self.pos += 1
        return self.text[start:self.pos]

    def until_semicolon(self):
        """Raw text up to the statement-ending ';' (nesting-aware)."""
        self.skip_ws()
        start = self.pos
        depth = 0
        while self.pos < len(self.text):
            c = self.text[self.pos]
            if c in "([":
                depth += 1
            elif c in ")]":
                depth -= 1
            elif c == ";" and depth == 0:
                text = self.text[start:self.pos]
                self.pos += 1
                return text
            self.pos += 1
        line, col = self.location(start)
        raise DslError("missing ';'", line, col)


def _split_top(text, sep=","):
    """Split on sep at paren/bracket nesting level zero."""
    parts = []
    depth = 0
    cur = []
    for ch in text:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if ch == sep and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return parts


def _strip_parens(text, line, col):
    text = text.strip()
    if not (text.startswith("(") and text.endswith(")")):
        raise DslError("expected a parenthesized list", line, col)
    return text[1:-1]


def _parse_polys(ring, blob, line, col, allow_empty=False):
    blob = blob.strip()
    if blob == "":
        if allow_empty:
            return []
        raise DslError("empty list", line, col)
    out = []
    for part in _split_top(blob):
        part = part.strip()
        if part == "" or part == "0":
            if part == "0":
                continue
            raise DslError("empty term in list", line, col)
        try:
            out.append(ring.ambient.parse(part) if isinstance(ring, PresentedRing)
                       else ring.parse(part))
        except ValueError as exc:
            raise DslError(str(exc), line, col) from exc
    return out


def _parse_flags(blob, line, col):
    """--name value pairs; a value runs to the next --flag."""
    tokens = blob.split()
    flags = {}
    i = 0
    while i < len(tokens):
        tok = tokens[i]
        if not tok.startswith("--"):
            raise DslError(f"expected --flag, got {tok!r}", line, col)
        name = tok[2:]
        vals = []
        i += 1
        while i < len(tokens) and not tokens[i].startswith("--"):
            vals.append(tokens[i])
            i += 1
        flags[name] = " ".join(vals)
    return flags


def _field_from_text(text, line, col):
    text = text.strip()
    if text == "QQ":
        return QQ
    if text.startswith("GF(") and text.endswith(")"):
        try:
            return GF(int(text[3:-1]))
        except ValueError as exc:
            raise UnsupportedField(str(exc), line, col) from exc
    raise UnsupportedField(f"unsupported field {text!r} "
                           "(use QQ or GF(p) with p prime)", line, col)


def parse_dsl(text, session=None):
    """Execute statements against a session (created on demand)."""
    if session is None:
        session = Session()
    cur = _Cursor(text)
    while not cur.eof():
        line, col = cur.location()
        head_start = cur.pos
        head = cur.word()
        if not head:
            raise DslError("expected a statement keyword", line, col)
        body = cur.until_semicolon()
        stmt_text = text[head_start:cur.pos].strip()
        _run_statement(session, head, body, stmt_text, line, col)
    return session


def _resolve_ring(session, name, line, col):
    if name:
        return session.get(name, "ring", line, col)
    if session.current_ring is None:
        raise UnknownReference("no ring in scope", line, col)
    return session.current_ring


def _in_clause(body):
    """Split 'expr in NAME' into (expr, NAME or None)."""
    parts = body.rsplit(" in ", 1)
    if len(parts) == 2 and parts[1].strip().isidentifier():
        return parts[0], parts[1].strip()
    return body, None


def _run_statement(session, head, body, stmt_text, line, col):
    if head == "ring":
        name, eq, rest = body.partition("=")
        if not eq:
            raise DslError("ring statement needs '='", line, col)
        name = name.strip()
        rest = rest.strip()
        if "[" not in rest or "]" not in rest:
            raise DslError("ring syntax: FIELD[vars] / (gens)", line, col)
        fld_text, _, after = rest.partition("[")
        varpart, _, tail = after.partition("]")
        field = _field_from_text(fld_text, line, col)
        names = [v.strip() for v in varpart.split(",") if v.strip()]
        ambient = PolyRing(field, names)
        tail = tail.strip()
        defining = []
        if tail:
            if not tail.startswith("/"):
                raise DslError("expected '/' before defining ideal", line, col)
            blob = _strip_parens(tail[1:].strip(), line, col)
            tmp = PresentedRing.polynomial(ambient)
            defining = _parse_polys(tmp, blob, line, col, allow_empty=True)
        ring = PresentedRing(ambient, defining)
        session.bind(name, "ring", ring, stmt_text, line, col)
        session.current_ring = ring
        return

    if head == "ideal":
        name, eq, rest = body.partition("=")
        if not eq:
            raise DslError("ideal statement needs '='", line, col)
        rest, ring_name = _in_clause(rest)
        ring = _resolve_ring(session, ring_name, line, col)
        blob = _strip_parens(rest, line, col)
        gens = _parse_polys(ring, blob, line, col, allow_empty=True)
        session.bind(name.strip(), "ideal", IdealHandle(ring, gens),
                     stmt_text, line, col)
        return

    if head == "module":
        name, eq, rest = body.partition("=")
        if not eq:
            raise DslError("module statement needs '='", line, col)
        rest, ring_name = _in_clause(rest)
        ring = _resolve_ring(session, ring_name, line, col)
        rest = rest.strip()
        if rest.startswith("coker"):
            blob = rest[len("coker"):].strip()
            if not (blob.startswith("[") and blob.endswith("]")):
                raise DslError("coker expects [[...],[...]]", line, col)
            rows = []
            for row_text in _split_top(blob[1:-1]):
                row_text = row_text.strip()
                if not (row_text.startswith("[") and row_text.endswith("]")):
                    raise DslError("matrix rows are bracketed", line, col)
                rows.append(_parse_polys(ring, row_text[1:-1], line, col,
                                         allow_empty=True))
            mod = PresentedModule.from_matrix(ring, rows)
        elif rest.startswith("quotient"):
            blob = _strip_parens(rest[len("quotient"):].strip(), line, col)
            gens = _parse_polys(ring, blob, line, col, allow_empty=True)
            mod = PresentedModule.cyclic(ring, gens)
        elif rest.startswith("free"):
            try:
                rank = int(rest[len("free"):].strip() or "1")
            except ValueError as exc:
                raise DslError("free expects an integer rank", line, col) from exc
            mod = PresentedModule.free(ring, rank)
        else:
            raise DslError("module syntax: coker [..] | quotient (..) | free n",
                           line, col)
        session.bind(name.strip(), "module", mod, stmt_text, line, col)
        return

    if head == "family":
        name, eq, rest = body.partition("=")
        if not eq:
            raise DslError("family statement needs '='", line, col)
        rest, ring_name = _in_clause(rest)
        ring = _resolve_ring(session, ring_name, line, col)
        rest = rest.strip()
        if rest.startswith("generated"):
            blob = _strip_parens(rest[len("generated"):].strip() or "()",
                                 line, col)
            kwargs = {}
            if blob.strip():
                for part in _split_top(blob):
                    k, eq2, v = part.partition("=")
                    if not eq2:
                        raise DslError("generated(...) takes key=value", line, col)
                    kwargs[k.strip()] = int(v.strip())
            fam = generated_family(
                ring,
                max_gens=kwargs.get("maxgens", 3),
                max_degree=kwargs.get("maxdeg", session.degree_bound),
                size=kwargs.get("size", 24),
                seed=kwargs.get("seed", 0))
        elif rest.startswith("ideals"):
            blob = _strip_parens(rest[len("ideals"):].strip(), line, col)
            ideals = []
            for part in _split_top(blob):
                ideals.append(session.get(part.strip(), "ideal", line, col))
            fam = TestFamily(ideals, provenance="user")
        else:
            raise DslError("family syntax: generated(...) | ideals(...)",
                           line, col)
        session.bind(name.strip(), "family", fam, stmt_text, line, col)
        return

    if head == "limitring":
        name, eq, rest = body.partition("=")
        rest = rest.strip()
        if not rest.startswith("base"):
            raise DslError("limitring syntax: limitring L = base QQ|RINGNAME",
                           line, col)
        base_text = rest[len("base"):].strip()
        if base_text == "QQ" or base_text.startswith("GF("):
            field = _field_from_text(base_text, line, col)
            base = PresentedRing.polynomial(PolyRing(field, []))
        else:
            base = session.get(base_text, "ring", line, col)
        session.bind(name.strip(), "limitring", LimitRing(base),
                     stmt_text, line, col)
        return

    if head == "perfect":
        name, eq, rest = body.partition("=")
        kwargs = dict(_keywords(rest, line, col))
        p = int(kwargs.get("p", "0"))
        vars_ = [v.strip() for v in kwargs.get("vars", "").split(",") if v.strip()]
        if not p or not vars_:
            raise DslError("perfect syntax: perfect P = p 2 vars x,z", line, col)
        session.bind(name.strip(), "perfect", PerfectClosure(p, vars_),
                     stmt_text, line, col)
        return

    if head == "veronese":
        name, eq, rest = body.partition("=")
        kwargs = dict(_keywords(rest, line, col))
        n = int(kwargs.get("n", "0"))
        vars_ = [v.strip() for v in kwargs.get("vars", "").split(",") if v.strip()]
        field = _field_from_text(kwargs.get("field", "QQ"), line, col)
        if not n or not vars_:
            raise DslError("veronese syntax: veronese V = n 2 vars x,y", line, col)
        session.bind(name.strip(), "veronese", veronese(field, vars_, n),
                     stmt_text, line, col)
        return

    if head == "valuation":
        name, eq, rest = body.partition("=")
        kwargs = dict(_keywords(rest, line, col))
        session.bind(name.strip(), "valuation",
                     ValuationModel(int(kwargs.get("rank", "0"))),
                     stmt_text, line, col)
        return

    if head == "idealize":
        name, eq, rest = body.partition("=")
        parts = rest.split()
        if len(parts) != 2:
            raise DslError("idealize syntax: idealize T = R M", line, col)
        ring = session.get(parts[0], "ring", line, col)
        mod = session.get(parts[1], "module", line, col)
        session.bind(name.strip(), "ring", trivial_extension(ring, mod),
                     stmt_text, line, col)
        return

    # ---- commands --------------------------------------------------------
    flags = _parse_flags(body, line, col)
    result = _run_command(session, head, flags, line, col)
    session.results.append({"cmd": head, "args": flags, "result": result})


def _keywords(text, line, col):
    toks = text.split()
    if len(toks) % 2:
        raise DslError("expected key value pairs", line, col)
    return [(toks[i], toks[i + 1]) for i in range(0, len(toks), 2)]


def _module_for(session, flags, line, col):
    name = flags.get("module", "")
    if not name:
        return None
    kind = session.kind_of(name)
    if kind == "ring":
        return PresentedModule.free(session.get(name, "ring", line, col), 1)
    return session.get(name, "module", line, col)


def _run_command(session, head, flags, line, col):
    budget = session.budget()
    if head == "grade":
        notion = flags.get("notion", "koszul")
        a = session.get(flags.get("ideal", ""), "ideal", line, col)
        M = _module_for(session, flags, line, col)
        n_max = int(flags.get("nmax", session.n_max))
        if notion == "koszul":
            rep = koszul_grade(a, M, budget)
        elif notion == "ext":
            rep = ext_grade(a, M, budget)
        elif notion == "classical":
            rep = classical_grade(a, M,
                                  degree_cap=session.degree_bound,
                                  budget=budget)
        elif notion == "pgrade":
            rep = polynomial_grade_witness(a, M, budget)
        elif notion == "hgrade":
            rep = hgrade_truncated(a, M, n_max, budget)
        elif notion == "cech":
            rep = cech_grade(a, M, budget)
        else:
            raise DslError(f"unknown grade notion {notion!r}", line, col)
        return rep.to_json()

    if head == "cm-check":
        sense = flags.get("sense", "fg")
        R = session.get(flags.get("ring", ""), "ring", line, col)
        fam = None
        if flags.get("family"):
            fam = session.get(flags["family"], "family", line, col)
        if fam is None:
            fam = generated_family(R, max_degree=session.degree_bound)
        if sense == "fg":
            rep = check_sense_fg(R, fam, budget)
        elif sense == "primes":
            rep = check_sense_primes(R, primes_for_family(R, fam), budget)
        elif sense == "max":
            rep = check_sense_max(R, budget=budget)
        elif sense == "glaz":
            rep = check_sense_glaz(R, primes_for_family(R, fam), budget)
        elif sense == "wb":
            rep = check_wb_unmixed(R, fam, budget=budget)
        elif sense == "wbh":
            rep = check_wb_unmixed(R, fam, height_variant=True, budget=budget)
        elif sense == "hm":
            from .cmsense import default_sequences
            rep = check_hm_surrogate(R, default_sequences(R, fam), budget=budget)
        else:
            raise DslError(f"unknown sense {sense!r}", line, col)
        return rep.to_json()

    if head == "audit":
        R = session.get(flags.get("ring", ""), "ring", line, col)
        fam = None
        if flags.get("family"):
            fam = session.get(flags["family"], "family", line, col)
        return implication_audit(R, fam, budget=budget)

    if head == "min-primes":
        a = session.get(flags.get("ideal", ""), "ideal", line, col)
        return {"primes": [{"gens": [repr(g) for g in w.ideal.gens],
                            "certified": w.certified,
                            "certificate": w.certificate}
                           for w in minimal_primes(a)]}

    if head == "height":
        a = session.get(flags.get("ideal", ""), "ideal", line, col)
        h = height_ideal(a)
        return {"height": "inf" if h == float("inf") else h}

    if head == "dim":
        R = session.get(flags.get("ring", ""), "ring", line, col)
        return {"dim": krull_dim(R)}

    if head == "param-cert":
        R = session.get(flags.get("ring", ""), "ring", line, col)
        seq = _split_top(_strip_parens(flags.get("seq", ""), line, col))
        return strong_parameter_certificate([s.strip() for s in seq], R,
                                            int(flags.get("mmax", 4)), budget)

    if head == "wpr":
        R = session.get(flags.get("ring", ""), "ring", line, col)
        seq = [s.strip() for s in
               _split_top(_strip_parens(flags.get("seq", ""), line, col))]
        mods = None
        if flags.get("modules"):
            mods = [_module_for(session, {"module": m.strip()}, line, col)
                    for m in flags["modules"].split(",")]
        return weak_proregular_check(seq, int(flags.get("n", 1)),
                                     int(flags.get("mmax", 4)),
                                     mods, ring=R, budget=budget)

    if head == "limit-grade":
        L = session.get(flags.get("limitring", ""), "limitring", line, col)
        gens = [s.strip() for s in
                _split_top(_strip_parens(flags.get("gens", ""), line, col))]
        level = int(flags["level"]) if flags.get("level") else None
        return limit_ring_ops(L, gens, level, budget)

    if head == "perfect-grade":
        pc = session.get(flags.get("perfect", ""), "perfect", line, col)
        gens = [s.strip() for s in
                _split_top(_strip_parens(flags.get("gens", ""), line, col))]
        level = int(flags["level"]) if flags.get("level") else None
        return perfect_closure_ops(pc, gens, level, budget)

    if head == "transfer":
        P = session.get(flags.get("veronese", ""), "veronese", line, col)
        gens = [s.strip() for s in
                _split_top(_strip_parens(flags.get("gens", ""), line, col))]
        gens = [g for g in gens if g]
        return invariant_transfer_check(P, gens, budget)

    if head == "valuation-report":
        W = session.get(flags.get("model", ""), "valuation", line, col)
        return W.report()

    raise DslError(f"unknown statement {head!r}", line, col)

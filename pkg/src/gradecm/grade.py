"""Grade notions on finitely generated ideals: Koszul, Ext, classical
(regular sequences), polynomial (generic-combination witness), truncated
local-cohomology grade, depth at a prime, and the Hamilton-Marley style
proregularity / parameter-sequence certificates.

All ideals here carry finite generator lists, so the sup-over-finitely-
generated-subideals clause in the Koszul/Cech definitions collapses to a
single computation on the stored generators.
"""

import itertools
import math
from dataclasses import dataclass, field

from .errors import OutsideSupport, UnitIdeal, WitnessSearchFailed
from .groebner import (Budget, FreeModule, Vector, buchberger, ideal_gb,
                       ideal_nf, reduce_vector, syzygies)
from .homology import (CohomologyVerdict, ResolutionBuilder, hom_cohomology,
                       koszul_complex, tensor_homology_data)
from .polyring import PolyRing
from .ringpres import (IdealHandle, PresentedModule, PresentedRing,
                       annihilator, minimal_primes)

INF = math.inf


@dataclass
class GradeReport:
    notion: str
    value: object            # int or math.inf
    witness: dict = field(default_factory=dict)
    truncated: bool = False
    exact: bool = True       # False when the value is only a bound

    def to_json(self):
        return {
            "notion": self.notion,
            "value": "inf" if self.value == INF else self.value,
            "witness": self.witness,
            "truncated": self.truncated,
            "exact": self.exact,
        }


def _as_module(R_or_M):
    if isinstance(R_or_M, PresentedRing):
        return PresentedModule.free(R_or_M, 1)
    return R_or_M


def _ideal_elements(a):
    """Nonzero normal forms of the stored generators."""
    return [g for g in a.gens if not g.is_zero()]


# ---------------------------------------------------------------------------
# Koszul grade


def koszul_grade(a, M=None, budget=None):
    """inf{ i : H^i(Hom(K(x), M)) != 0 } for the stored generators of a."""
    if budget is None:
        budget = Budget()
    M = _as_module(M if M is not None else a.ring)
    xs = _ideal_elements(a)
    C = koszul_complex(a.ring, xs)
    for i in range(len(xs) + 1):
        verdict = hom_cohomology(C, M, i, budget=budget)
        if verdict.nonvanishing:
            return GradeReport("koszul", i,
                               witness={"index": i,
                                        "element": repr(verdict.witness)})
    return GradeReport("koszul", INF, witness={"all_vanish": True})


def cech_grade(a, M=None, budget=None):
    """Cech grade, exposed as an alias of the Koszul grade; the stable
    Koszul comparison makes the two coincide for finitely generated ideals."""
    rep = koszul_grade(a, M, budget)
    return GradeReport("cech-alias", rep.value,
                       witness=dict(rep.witness, equals="koszul"),
                       truncated=rep.truncated)


# ---------------------------------------------------------------------------
# Ext grade


def ext_grade(a, M=None, budget=None, max_index=None):
    """inf{ i : Ext^i(R/a, M) != 0 }, scanned up to a bound."""
    if budget is None:
        budget = Budget()
    ring = a.ring
    M = _as_module(M if M is not None else ring)
    gens = _ideal_elements(a)
    if max_index is None:
        max_index = ring.ambient.n + len(gens) + 1
    N = PresentedModule.cyclic(ring, gens)
    builder = ResolutionBuilder(N, budget)
    for i in range(max_index + 1):
        builder.extend_to(i + 1)
        C = builder.complex()
        if i >= len(C.ranks):
            # resolution terminated: all higher Ext vanish
            return GradeReport("ext", INF, witness={"pd_finite_below": i})
        verdict = hom_cohomology(C, M, i, budget=budget)
        if verdict.nonvanishing:
            return GradeReport("ext", i, witness={"index": i})
    return GradeReport("ext", INF, witness={"scanned_to": max_index},
                       truncated=True)


# ---------------------------------------------------------------------------
# classical grade via weak regular sequences


def quotient_by_sequence(M, seq):
    """M/(seq)M as a presented module."""
    mod = M.module()
    extra = []
    for f in seq:
        for j in range(M.rank):
            extra.append(mod.unit(j).mul_poly(f))
    return PresentedModule(M.ring, M.rank, M.relations + extra)


def is_nonzerodivisor(f, M, budget=None):
    """(0 :_M f) = 0, decided by a module colon over the ambient ring."""
    if budget is None:
        budget = Budget()
    f = M.ring.nf(f)
    if f.is_zero():
        return False
    rels = M.relations_with_defining()
    mod = M.module()
    cols = [mod.unit(j).mul_poly(f) for j in range(M.rank)]
    syz = syzygies(cols + rels, budget)
    gb = M.rel_gb()
    for s in syz:
        terms = {(p, m): c for (p, m), c in s.terms.items() if p < M.rank}
        v = Vector(mod, terms)
        if v.is_zero():
            continue
        if not reduce_vector(v, gb, budget).is_zero():
            return False
    return True


def _candidate_pool(a, degree_cap=2, limit=64):
    """Elements of a to try in regular sequences: the generators, then
    homogeneous {0,+1,-1}-combinations and variable multiples within the
    degree cap."""
    ring = a.ring
    gens = _ideal_elements(a)
    pool = []
    seen = set()

    def push(f):
        f = ring.nf(f)
        if f.is_zero():
            return
        k = f.monic().key()
        if k not in seen:
            seen.add(k)
            pool.append(f)

    for g in gens:
        push(g)
    if len(gens) > 1:
        for eps in itertools.product((0, 1, -1), repeat=len(gens)):
            if all(e == 0 for e in eps) or eps[next(i for i, e in enumerate(eps) if e != 0)] != 1:
                continue
            f = ring.ambient.zero()
            for e, g in zip(eps, gens):
                if e:
                    f = f + (g if e == 1 else -g)
            if f.is_homogeneous() and 0 < f.total_degree() <= degree_cap:
                push(f)
            if len(pool) >= limit:
                return pool
    for g in gens:
        if g.total_degree() < degree_cap:
            for v in ring.ambient.gens():
                push(v * g)
                if len(pool) >= limit:
                    return pool
    return pool[:limit]


def classical_grade(a, M=None, depth_bound=None, degree_cap=2, budget=None):
    """Longest weak regular sequence on M found inside a by backtracking;
    a lower bound, flagged exact when it meets the Koszul grade."""
    if budget is None:
        budget = Budget()
    M = _as_module(M if M is not None else a.ring)
    kg = koszul_grade(a, M, budget).value
    if kg == 0:
        return GradeReport("classical", 0, witness={"sequence": []}, exact=True)
    target = kg if kg != INF else (depth_bound if depth_bound is not None
                                   else len(a.gens))
    if depth_bound is not None:
        target = min(target, depth_bound)
    pool = _candidate_pool(a, degree_cap)
    best = []

    def dfs(seq, quotient):
        nonlocal best
        if len(seq) > len(best):
            best = list(seq)
        if len(seq) >= target:
            return True
        for f in pool:
            if is_nonzerodivisor(f, quotient, budget):
                if dfs(seq + [f], quotient_by_sequence(quotient, [f])):
                    return True
        return False

    dfs([], M)
    value = len(best)
    return GradeReport("classical", value,
                       witness={"sequence": [repr(f) for f in best]},
                       exact=(value == kg))


# ---------------------------------------------------------------------------
# polynomial grade with an explicit generic witness


def _extend_module(M, big_ring, pad):
    """Reinterpret M over an ambient ring with `pad` extra trailing vars."""
    mod = FreeModule(big_ring.ambient, M.rank)
    rels = []
    for v in M.relations:
        rels.append(Vector(mod, {(p, m + (0,) * pad): c
                                 for (p, m), c in v.terms.items()}))
    return PresentedModule(big_ring, M.rank, rels)


def polynomial_grade_witness(a, M=None, budget=None):
    """Certifies p.grade >= K.grade by exhibiting a weak regular sequence of
    generic coefficient combinations over R[t_1..t_{l*g}]; equality of the
    two grades then pins the value."""
    if budget is None:
        budget = Budget()
    ring = a.ring
    M = _as_module(M if M is not None else ring)
    kg = koszul_grade(a, M, budget).value
    if kg == 0 or kg == INF:
        return GradeReport("polynomial-witness", kg, witness={"sequence": []})
    gens = _ideal_elements(a)
    g = len(gens)
    ell = kg
    tnames = [f"t{i+1}" for i in range(ell * g)]
    big_amb, inj = ring.ambient.extend(tnames)
    big = PresentedRing(big_amb, [inj(f) for f in ring.defining])
    pad = len(tnames)
    bigM = _extend_module(M, big, pad)
    gens_big = [inj(f) for f in gens]
    seq = []
    for i in range(ell):
        s = big_amb.zero()
        for j in range(g):
            s = s + big_amb.var(ring.ambient.n + i * g + j) * gens_big[j]
        seq.append(s)
    quotient = bigM
    for i, s in enumerate(seq):
        if not is_nonzerodivisor(s, quotient, budget):
            raise WitnessSearchFailed(
                f"generic combination {i+1} failed the colon test")
        quotient = quotient_by_sequence(quotient, [s])
    return GradeReport("polynomial-witness", kg,
                       witness={"sequence": [repr(s) for s in seq],
                                "length": ell})


# ---------------------------------------------------------------------------
# truncated local-cohomology grade


def hgrade_truncated(a, M=None, n_max=4, budget=None):
    """inf{ i : Ext^i(R/a^n, M) != 0 } for n = 1..n_max, reported with its
    stabilization level."""
    if budget is None:
        budget = Budget()
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    ring = a.ring
    M = _as_module(M if M is not None else ring)
    values = []
    for n in range(1, n_max + 1):
        power = a.power(n)
        gens = [ring.nf(g) for g in ideal_gb(power.preimage_gens())]
        gens = [g for g in gens if not g.is_zero()]
        handle = IdealHandle(ring, gens)
        values.append(ext_grade(handle, M, budget).value)
    stable_from = n_max
    for k in range(n_max - 1, 0, -1):
        if values[k - 1] == values[-1]:
            stable_from = k
        else:
            break
    truncated = n_max >= 2 and values[-1] != values[-2]
    if n_max == 1:
        truncated = True
    return GradeReport("hgrade-truncated", values[-1],
                       witness={"levels": ["inf" if v == INF else v for v in values],
                                "stable_from": stable_from},
                       truncated=truncated)


# ---------------------------------------------------------------------------
# depth at a prime via Ext annihilators over the ambient ring


def depth_at_prime(p, M=None, budget=None):
    """depth of M_p over the localized ring: the first i with
    Ann Ext^i_S(S/p', M) contained in the ambient preimage p'."""
    if budget is None:
        budget = Budget()
    ring = p.ideal.ring
    M = _as_module(M if M is not None else ring)
    p_gb = p.ideal.gb()
    ann = annihilator(M)
    for gen in ann.gens:
        if not ideal_nf(gen, p_gb).is_zero():
            raise OutsideSupport("prime does not contain Ann M")
    ambient = ring.ambient
    s_ring = PresentedRing.polynomial(ambient)
    n_mod = PresentedModule.cyclic(s_ring, list(p_gb))
    m_over_s = PresentedModule(s_ring, M.rank, M.relations_with_defining())
    builder = ResolutionBuilder(n_mod, budget)
    for i in range(ambient.n + 1):
        builder.extend_to(i + 1)
        C = builder.complex()
        if i >= len(C.ranks):
            break
        verdict, ext_i = hom_cohomology(C, m_over_s, i, want_module=True,
                                        budget=budget)
        if not verdict.nonvanishing:
            continue
        ann_i = annihilator(ext_i)
        if all(ideal_nf(g, p_gb).is_zero() for g in ann_i.gens):
            return i
    raise OutsideSupport("no Ext survived localization; support check failed")


# ---------------------------------------------------------------------------
# weak proregularity and parameter-sequence certificates


def weak_proregular_check(xs, n=1, m_max=4, test_modules=None, ring=None,
                          budget=None):
    """Search m in [n, m_max] making every Koszul homology transition map
    H_i(K(x^m; M)) -> H_i(K(x^n; M)), i >= 1, the zero map.

    Returns a dict with per-module results and an aggregate verdict in
    {"holds", "holds-for-R-only", "fails-at-bound"}.
    """
    if budget is None:
        budget = Budget()
    if ring is None:
        raise ValueError("pass ring= explicitly")
    xs = [ring.nf(ring.poly(x) if isinstance(x, str) else x) for x in xs]
    xs = [x for x in xs if not x.is_zero()]
    if test_modules is None:
        test_modules = [PresentedModule.free(ring, 1)]
    r = len(xs)
    results = []
    for M in test_modules:
        found = None
        for m in range(n, m_max + 1):
            Cm = koszul_complex(ring, [x ** m for x in xs])
            Cn = koszul_complex(ring, [x ** n for x in xs])
            # identify complexes degreewise through the diagonal map
            trans = []
            for i in range(r + 1):
                colmap = {}
                for t, J in enumerate(Cm.labels[i]):
                    f = ring.ambient.one()
                    for k in J:
                        f = f * xs[k] ** (m - n)
                    colmap[t] = [(t, ring.nf(f))]
                trans.append(colmap)
            ok = True
            for i in range(1, r + 1):
                zm, _, _ = tensor_homology_data(Cm, M, i, budget)
                if not zm:
                    continue
                _, bn_gb, flat_n = tensor_homology_data(Cn, M, i, budget)
                from .homology import _apply_blocks
                for z in zm:
                    img = _apply_blocks(trans[i], z, M.rank, flat_n)
                    red = reduce_vector(img, bn_gb, budget) if bn_gb else img
                    if not red.is_zero():
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                found = m
                break
        results.append({"module": repr(M), "level": found})
    verdicts = [res["level"] is not None for res in results]
    if all(verdicts):
        verdict = "holds"
    elif verdicts and verdicts[0]:
        verdict = "holds-for-R-only"
    else:
        verdict = "fails-at-bound"
    return {"verdict": verdict, "n": n, "m_max": m_max, "modules": results}


def strong_parameter_certificate(xs, R, m_max=4, budget=None):
    """Per-prefix verdicts: prefix x_1..x_i is certified when
    K.grade((x_1..x_i), R) = i and the truncated weak-proregularity search
    succeeds; a full pass certifies a strong parameter sequence via the
    grade criterion."""
    if budget is None:
        budget = Budget()
    xs = [R.nf(R.poly(x) if isinstance(x, str) else x) for x in xs]
    if xs:
        probe = IdealHandle(R, xs)
        if not probe.is_proper():
            raise UnitIdeal("sequence generates the unit ideal")
    prefixes = []
    all_ok = True
    for i in range(1, len(xs) + 1):
        prefix = xs[:i]
        a = IdealHandle(R, prefix)
        kg = koszul_grade(a, None, budget).value
        grade_ok = (kg == i)
        wpr = weak_proregular_check(prefix, 1, m_max, ring=R, budget=budget)
        ok = grade_ok and wpr["verdict"] == "holds"
        prefixes.append({
            "prefix": [repr(x) for x in prefix],
            "koszul_grade": "inf" if kg == INF else kg,
            "grade_criterion": grade_ok,
            "weak_proregular": wpr["verdict"],
            "certified": ok,
        })
        all_ok = all_ok and ok
    return {
        "certified": all_ok,
        "tag": ("strong parameter sequence (certified via grade criterion)"
                if all_ok else "not certified (grade criterion)"),
        "prefixes": prefixes,
    }

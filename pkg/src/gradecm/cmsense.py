"""Cohen-Macaulay sense checks over finite test families.

A report never claims the universal statement: it records the family that
was examined, the per-ideal comparisons, and the first counterexample when
a sense fails.
"""

import math
import random
from dataclasses import dataclass, field

from .grade import (depth_at_prime, is_nonzerodivisor, koszul_grade,
                    quotient_by_sequence, strong_parameter_certificate)
from .groebner import Budget
from .ringpres import (IdealHandle, PresentedModule, PresentedRing,
                       PrimeWitness, associated_primes, height_certified,
                       height_ideal, height_prime, minimal_primes)

INF = math.inf


@dataclass
class TestFamily:
    ideals: list
    provenance: str = "user"

    def sorted_ideals(self):
        return sorted(self.ideals, key=lambda a: a.key())

    def __len__(self):
        return len(self.ideals)


@dataclass
class CMReport:
    sense: str
    verdict: str                 # "pass" | "fail" | "conditional"
    counterexample: dict = None
    provenance: str = ""
    items: list = field(default_factory=list)

    def passed(self):
        return self.verdict in ("pass", "conditional")

    def to_json(self):
        return {
            "sense": self.sense,
            "verdict": self.verdict,
            "counterexample": self.counterexample,
            "family": self.provenance,
            "items": self.items,
        }


def _fmt(v):
    return "inf" if v == INF else v


# ---------------------------------------------------------------------------
# family generation


def generated_family(R, max_gens=3, max_degree=2, size=24, seed=0,
                     include_maximal=True):
    """Ideals with <= max_gens homogeneous generators of degree <= max_degree
    and coefficients in {0, +1, -1}: every variable ideal, the irrelevant
    maximal ideal, and a deterministic sample of the rest of the pool."""
    ambient = R.ambient
    rng = random.Random(seed)
    pool = []
    for v in ambient.gens():
        pool.append(v)
    for d in range(2, max_degree + 1):
        monos = [ambient.monomial(m) for m in ambient.monomials_of_degree(d)]
        pool.extend(monos)
        for i in range(len(monos)):
            for j in range(i + 1, len(monos)):
                pool.append(monos[i] - monos[j])
                pool.append(monos[i] + monos[j])
    ideals = {}

    def add(gens):
        a = IdealHandle(R, gens)
        if a.is_zero() or not a.is_proper():
            return
        key = a.key()
        if key not in ideals:
            ideals[key] = a

    for v in ambient.gens():
        add([v])
    if include_maximal and ambient.n:
        add(list(ambient.gens()))
    guard = 40 * size
    while len(ideals) < size and guard:
        guard -= 1
        k = rng.randint(1, max_gens)
        add(rng.sample(pool, min(k, len(pool))))
    fam = TestFamily(sorted(ideals.values(), key=lambda a: a.key()),
                     provenance=f"generated-degree<={max_degree} "
                                f"gens<={max_gens} size={len(ideals)} seed={seed}")
    return fam


def primes_for_family(R, fam, include_maximal=True, cap=24):
    """Primes attached to a family: minimal primes of its members plus the
    irrelevant maximal ideal."""
    seen = {}
    if include_maximal and R.ambient.n:
        m = PrimeWitness(IdealHandle(R, R.ambient.gens()), True,
                         "irrelevant maximal ideal")
        seen[m.key()] = m
    for a in fam.sorted_ideals():
        for p in minimal_primes(a):
            if p.key() not in seen:
                seen[p.key()] = p
        if len(seen) >= cap:
            break
    return sorted(seen.values(), key=lambda w: w.key())


# ---------------------------------------------------------------------------
# the senses


def check_sense_fg(R, fam, budget=None):
    """ht(a) = K.grade(a, R) for every a in the family."""
    if budget is None:
        budget = Budget()
    items = []
    counterexample = None
    conditional = False
    for a in fam.sorted_ideals():
        ht, certified = height_certified(a)
        kg = koszul_grade(a, None, budget).value
        ok = (ht == kg)
        conditional = conditional or not certified
        items.append({"ideal": repr(a), "ht": _fmt(ht), "grade": _fmt(kg),
                      "ok": ok, "certified": certified})
        if not ok and counterexample is None:
            counterexample = {"ideal": repr(a), "ht": _fmt(ht), "grade": _fmt(kg)}
    if counterexample:
        verdict = "fail"
    else:
        verdict = "conditional" if conditional else "pass"
    return CMReport("fg-ideals", verdict, counterexample, fam.provenance, items)


def check_sense_primes(R, primes, budget=None):
    """ht(p) = K.grade(p, R) for the listed primes."""
    if budget is None:
        budget = Budget()
    items = []
    counterexample = None
    conditional = False
    for p in sorted(primes, key=lambda w: w.key()):
        ht = height_prime(p)
        kg = koszul_grade(p.ideal, None, budget).value
        ok = (ht == kg)
        conditional = conditional or not p.certified
        items.append({"prime": repr(p.ideal), "ht": _fmt(ht), "grade": _fmt(kg),
                      "ok": ok, "certified": p.certified})
        if not ok and counterexample is None:
            counterexample = {"ideal": repr(p.ideal), "ht": _fmt(ht),
                              "grade": _fmt(kg)}
    verdict = "fail" if counterexample else ("conditional" if conditional else "pass")
    return CMReport("primes", verdict, counterexample, "primes-of-ring", items)


def check_sense_max(R, maximals=None, budget=None):
    """The Max sense: the irrelevant maximal ideal plus any user maximals."""
    if maximals is None:
        maximals = [PrimeWitness(IdealHandle(R, R.ambient.gens()), True,
                                 "irrelevant maximal ideal")]
    report = check_sense_primes(R, maximals, budget)
    report.sense = "max"
    report.provenance = "maximal-sample"
    return report


def check_sense_glaz(R, primes, budget=None):
    """ht(p) = depth of R_p (Koszul grade over the localization) per prime."""
    if budget is None:
        budget = Budget()
    items = []
    counterexample = None
    conditional = False
    for p in sorted(primes, key=lambda w: w.key()):
        ht = height_prime(p)
        depth = depth_at_prime(p, None, budget)
        ok = (ht == depth)
        conditional = conditional or not p.certified
        items.append({"prime": repr(p.ideal), "ht": _fmt(ht), "depth": depth,
                      "ok": ok, "certified": p.certified})
        if not ok and counterexample is None:
            counterexample = {"ideal": repr(p.ideal), "ht": _fmt(ht),
                              "depth": depth}
    verdict = "fail" if counterexample else ("conditional" if conditional else "pass")
    return CMReport("glaz", verdict, counterexample, "primes-of-ring", items)


def check_wb_unmixed(R, fam, height_variant=False, budget=None):
    """Weak Bourbaki unmixedness over the filtered family: for ideals with
    ht(a) >= interreduced generator count, Min(a) must equal wAss(R/a)
    (computed as Ass; the presented rings are Noetherian).  The height
    variant instead asks all weakly associated primes to share one height."""
    if budget is None:
        budget = Budget()
    items = []
    counterexample = None
    conditional = False
    for a in fam.sorted_ideals():
        mu_hat = len(a.interreduced_gens())
        ht, certified = height_certified(a)
        if ht == INF or ht < mu_hat:
            items.append({"ideal": repr(a), "ht": _fmt(ht), "mu_hat": mu_hat,
                          "skipped": True})
            continue
        mins = minimal_primes(a)
        ass = associated_primes(PresentedModule.cyclic(R, a))
        conditional = conditional or not certified \
            or not all(w.certified for w in mins + ass)
        if height_variant:
            heights = sorted({height_prime(w) for w in ass})
            ok = len(heights) <= 1
            detail = {"ass_heights": heights}
        else:
            ok = {w.key() for w in mins} == {w.key() for w in ass}
            detail = {"min": [repr(w.ideal) for w in mins],
                      "ass": [repr(w.ideal) for w in ass]}
        items.append({"ideal": repr(a), "ht": _fmt(ht), "mu_hat": mu_hat,
                      "ok": ok, **detail})
        if not ok and counterexample is None:
            counterexample = {"ideal": repr(a), "ht": _fmt(ht),
                              "mu_hat": mu_hat, **detail}
    verdict = "fail" if counterexample else ("conditional" if conditional else "pass")
    return CMReport("wbh" if height_variant else "wb", verdict, counterexample,
                    fam.provenance, items)


def check_hm_surrogate(R, sequences, m_max=4, budget=None):
    """Every sequence certified strong-parameter (by the grade criterion)
    must be a weak regular sequence."""
    if budget is None:
        budget = Budget()
    items = []
    counterexample = None
    free = PresentedModule.free(R, 1)
    for seq in sequences:
        seq = [R.nf(R.poly(s) if isinstance(s, str) else s) for s in seq]
        if any(s.is_zero() for s in seq):
            continue
        probe = IdealHandle(R, seq)
        if not probe.is_proper():
            continue
        cert = strong_parameter_certificate(seq, R, m_max, budget)
        if not cert["certified"]:
            items.append({"sequence": [repr(s) for s in seq],
                          "certified": False, "skipped": True})
            continue
        regular = True
        quotient = free
        for f in seq:
            if not is_nonzerodivisor(f, quotient, budget):
                regular = False
                break
            quotient = quotient_by_sequence(quotient, [f])
        items.append({"sequence": [repr(s) for s in seq], "certified": True,
                      "regular": regular, "ok": regular})
        if not regular and counterexample is None:
            counterexample = {"sequence": [repr(s) for s in seq]}
    verdict = "fail" if counterexample else "pass"
    return CMReport("hm-surrogate", verdict, counterexample,
                    "certified-sequences", items)


# ---------------------------------------------------------------------------
# implication audit


def default_sequences(R, fam, cap=10):
    out = []
    for a in fam.sorted_ideals():
        if 1 <= len(a.gens) <= 3:
            out.append(list(a.gens))
        if len(out) >= cap:
            break
    return out


def implication_audit(R, fam=None, sequences=None, budget=None):
    """Evaluate all senses on shared families and assert the proved
    implication chain: primes => glaz => fg => hm, and (fg and primes) => wb.
    Any violation is reported with the counterexample that witnessed it."""
    if budget is None:
        budget = Budget()
    if fam is None:
        fam = generated_family(R)
    primes = primes_for_family(R, fam)
    if sequences is None:
        sequences = default_sequences(R, fam)
    reports = {
        "primes": check_sense_primes(R, primes, budget),
        "glaz": check_sense_glaz(R, primes, budget),
        "fg": check_sense_fg(R, fam, budget),
        "hm": check_hm_surrogate(R, sequences, budget=budget),
        "wb": check_wb_unmixed(R, fam, budget=budget),
        "max": check_sense_max(R, budget=budget),
    }
    violations = []

    def implied(lhs, rhs):
        if reports[lhs].passed() and not reports[rhs].passed():
            violations.append({
                "implication": f"{lhs} => {rhs}",
                "counterexample": reports[rhs].counterexample,
            })

    implied("primes", "glaz")
    implied("glaz", "fg")
    implied("fg", "hm")
    if reports["fg"].passed() and reports["primes"].passed() \
            and not reports["wb"].passed():
        violations.append({
            "implication": "fg+primes => wb",
            "counterexample": reports["wb"].counterexample,
        })
    # Spec => Max is part of the diagram as well
    implied("primes", "max")
    return {
        "ring": repr(R),
        "family": fam.provenance,
        "verdicts": {k: r.verdict for k, r in reports.items()},
        "violations": violations,
        "reports": {k: r.to_json() for k, r in reports.items()},
    }

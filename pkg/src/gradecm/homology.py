"""Koszul complexes, Hom-complex cohomology, free resolutions and Ext over
presented rings.

A complex of finite free R-modules is stored by its ranks and differential
matrices; all kernel/image computations are lifted to the ambient polynomial
ring, with the defining ideal adjoined to every relation submodule.
"""

import itertools

from .errors import GradecmError
from .groebner import (Budget, FreeModule, Vector, buchberger, reduce_vector,
                       syzygies)
from .polyring import Poly, mono_mul
from .ringpres import PresentedModule, PresentedRing


class FreeComplex:
    """F_0 <- F_1 <- ... ; diffs[k] is the matrix of F_{k+1} -> F_k (entries
    as rows x cols = ranks[k] x ranks[k+1])."""

    def __init__(self, ring, ranks, diffs, labels=None, check=True):
        self.ring = ring
        self.ranks = list(ranks)
        self.diffs = list(diffs)
        self.labels = labels
        if check:
            self._check_complex()

    def length(self):
        return len(self.ranks) - 1

    def _check_complex(self):
        gb = self.ring.gb()
        from .groebner import ideal_nf
        for k in range(len(self.diffs) - 1):
            a, b = self.diffs[k], self.diffs[k + 1]
            rows, mid, cols = self.ranks[k], self.ranks[k + 1], self.ranks[k + 2]
            for i in range(rows):
                for j in range(cols):
                    acc = self.ring.ambient.zero()
                    for t in range(mid):
                        acc = acc + a[i][t] * b[t][j]
                    if not ideal_nf(acc, gb).is_zero():
                        raise GradecmError("differentials do not compose to zero")

    def rank_at(self, i):
        return self.ranks[i] if 0 <= i < len(self.ranks) else 0


def koszul_complex(ring, elements):
    """Exterior-algebra complex on the given ring elements; the empty list
    yields 0 -> R -> 0."""
    xs = []
    for x in elements:
        if isinstance(x, str):
            x = ring.poly(x)
        xs.append(ring.nf(x))
    r = len(xs)
    ranks = [_binom(r, i) for i in range(r + 1)]
    labels = [list(itertools.combinations(range(r), i)) for i in range(r + 1)]
    index = [{c: k for k, c in enumerate(level)} for level in labels]
    diffs = []
    for i in range(1, r + 1):
        rows, cols = ranks[i - 1], ranks[i]
        mat = [[ring.ambient.zero() for _ in range(cols)] for _ in range(rows)]
        for col, subset in enumerate(labels[i]):
            for k, j in enumerate(subset):
                rest = subset[:k] + subset[k + 1:]
                row = index[i - 1][rest]
                entry = xs[j] if k % 2 == 0 else -xs[j]
                mat[row][col] = mat[row][col] + entry
        diffs.append(mat)
    C = FreeComplex(ring, ranks, diffs, labels=labels, check=False)
    C.elements = xs
    return C


def _binom(n, k):
    out = 1
    for i in range(k):
        out = out * (n - i) // (i + 1)
    return out


# ---------------------------------------------------------------------------
# flattened Hom / tensor machinery


def _flat(ambient, b, c):
    return FreeModule(ambient, max(b * c, 0))


def _embed_slot(vec, t, b, flat):
    return Vector(flat, {(t * b + p, m): c for (p, m), c in vec.terms.items()})


def _power_relations(M, c, flat):
    rels = M.relations_with_defining()
    out = []
    for t in range(c):
        for r in rels:
            out.append(_embed_slot(r, t, M.rank, flat))
    return out


def _apply_blocks(colmap, v, b, flat_to):
    """colmap[t] = [(u, poly)]: image of slot t lands in slots u via poly."""
    f = flat_to.ring.field
    out = {}
    for (pos, mono), c in v.terms.items():
        t, j = divmod(pos, b)
        for u, poly in colmap.get(t, ()):
            for em, ec in poly.terms.items():
                key = (u * b + j, mono_mul(mono, em))
                s = f.add(out.get(key, f.zero), f.mul(c, ec))
                if f.is_zero(s):
                    out.pop(key, None)
                else:
                    out[key] = s
    return Vector(flat_to, out)


def _hom_colmap(D, c_from, c_to):
    """Cochain map Hom(F_i, M) -> Hom(F_{i+1}, M) from the matrix of
    d_{i+1} (rows=c_from, cols=c_to): slot t -> sum_u D[t][u] * slot u."""
    colmap = {}
    for t in range(c_from):
        entries = []
        for u in range(c_to):
            if not D[t][u].is_zero():
                entries.append((u, D[t][u]))
        colmap[t] = entries
    return colmap


def _tensor_colmap(T, c_from, c_to):
    """Chain map F_i (x) M -> F_{i-1} (x) M from the matrix of d_i
    (rows=c_to, cols=c_from): slot t -> sum_r T[r][t] * slot r."""
    colmap = {}
    for t in range(c_from):
        entries = []
        for r in range(c_to):
            if not T[r][t].is_zero():
                entries.append((r, T[r][t]))
        colmap[t] = entries
    return colmap


def _kernel_gens(colmap, b, c_from, M, c_to, budget=None):
    """Generators of ker(M^c_from -> M^c_to) in the flattened module."""
    ambient = M.ring.ambient
    flat_from = _flat(ambient, b, c_from)
    flat_to = _flat(ambient, b, c_to)
    q = b * c_from
    if c_to == 0 or all(not colmap.get(t) for t in range(c_from)):
        return [flat_from.unit(p) for p in range(q)], flat_from
    cols = []
    for p in range(q):
        cols.append(_apply_blocks(colmap, flat_from.unit(p), b, flat_to))
    rel_to = _power_relations(M, c_to, flat_to)
    syz = syzygies(cols + rel_to, budget)
    out = []
    seen = set()
    for s in syz:
        terms = {(p, m): c for (p, m), c in s.terms.items() if p < q}
        if not terms:
            continue
        v = Vector(flat_from, terms)
        k = v.key()
        if k not in seen:
            seen.add(k)
            out.append(v)
    return out, flat_from


def _vec_degree(v):
    return max((sum(m) for (_, m) in v.terms), default=-1)


class CohomologyVerdict:
    def __init__(self, index, nonvanishing, witness=None):
        self.index = index
        self.nonvanishing = nonvanishing
        self.witness = witness

    def __repr__(self):
        state = "nonzero" if self.nonvanishing else "zero"
        return f"H^{self.index} {state}"


def hom_cohomology(C, M, i, want_module=False, budget=None):
    """H^i(Hom(C, M)) nonvanishing verdict (and presentation on request)."""
    if budget is None:
        budget = Budget()
    ring = C.ring
    ambient = ring.ambient
    b = M.rank
    c_i = C.rank_at(i)
    if c_i == 0 or b == 0:
        verdict = CohomologyVerdict(i, False)
        return (verdict, PresentedModule(ring, 0, [])) if want_module else verdict
    c_next = C.rank_at(i + 1)
    if c_next and i < len(C.diffs):
        colmap = _hom_colmap(C.diffs[i], c_i, c_next)
    else:
        colmap, c_next = {}, 0
    kernel, flat_i = _kernel_gens(colmap, b, c_i, M, c_next, budget)
    # boundaries: image of the previous cochain map plus module relations
    parts = _power_relations(M, c_i, flat_i)
    if i > 0 and C.rank_at(i - 1):
        prev = _hom_colmap(C.diffs[i - 1], C.rank_at(i - 1), c_i)
        flat_prev = _flat(ambient, b, C.rank_at(i - 1))
        for p in range(b * C.rank_at(i - 1)):
            img = _apply_blocks(prev, flat_prev.unit(p), b, flat_i)
            if not img.is_zero():
                parts.append(img)
    bnd_gb = buchberger(parts, budget) if parts else []
    kernel.sort(key=lambda v: (_vec_degree(v), v.key()))
    witness = None
    for v in kernel:
        if not reduce_vector(v, bnd_gb, budget).is_zero() if bnd_gb else not v.is_zero():
            witness = v
            break
    verdict = CohomologyVerdict(i, witness is not None, witness)
    if not want_module:
        return verdict
    if witness is None:
        return verdict, PresentedModule(ring, 0, [])
    # presentation of the subquotient on the kernel generators
    t = len(kernel)
    syz = syzygies(kernel + bnd_gb, budget)
    mod_t = FreeModule(ambient, t)
    rels = []
    seen = set()
    for s in syz:
        terms = {(p, m): c for (p, m), c in s.terms.items() if p < t}
        v = Vector(mod_t, {k: c for k, c in terms.items()})
        if v.is_zero():
            continue
        k = v.key()
        if k not in seen:
            seen.add(k)
            rels.append(v)
    return verdict, PresentedModule(ring, t, rels)


def tensor_homology_data(C, M, i, budget=None):
    """(kernel generators, boundary GB, flat module) for H_i(C (x) M)."""
    if budget is None:
        budget = Budget()
    ambient = C.ring.ambient
    b = M.rank
    c_i = C.rank_at(i)
    if c_i == 0 or b == 0:
        return [], [], _flat(ambient, b, c_i)
    if i >= 1 and C.rank_at(i - 1):
        colmap = _tensor_colmap(C.diffs[i - 1], c_i, C.rank_at(i - 1))
        kernel, flat_i = _kernel_gens(colmap, b, c_i, M, C.rank_at(i - 1), budget)
    else:
        flat_i = _flat(ambient, b, c_i)
        kernel = [flat_i.unit(p) for p in range(b * c_i)]
    parts = _power_relations(M, c_i, flat_i)
    if i + 1 <= C.length() and C.rank_at(i + 1):
        nxt = _tensor_colmap(C.diffs[i], C.rank_at(i + 1), c_i)
        flat_next = _flat(ambient, b, C.rank_at(i + 1))
        for p in range(b * C.rank_at(i + 1)):
            img = _apply_blocks(nxt, flat_next.unit(p), b, flat_i)
            if not img.is_zero():
                parts.append(img)
    bnd_gb = buchberger(parts, budget) if parts else []
    kernel.sort(key=lambda v: (_vec_degree(v), v.key()))
    return kernel, bnd_gb, flat_i


def tensor_homology_nonvanishing(C, M, i, budget=None):
    kernel, bnd_gb, _ = tensor_homology_data(C, M, i, budget)
    for v in kernel:
        r = reduce_vector(v, bnd_gb, budget) if bnd_gb else v
        if not r.is_zero():
            return CohomologyVerdict(i, True, v)
    return CohomologyVerdict(i, False)


# ---------------------------------------------------------------------------
# free resolutions and Ext


def _trim_columns(ring, cols, rank, budget=None, cap=40):
    """Drop columns lying in the span of the others (over R)."""
    if len(cols) > cap:
        return cols
    mod = FreeModule(ring.ambient, rank)
    iembeds = []
    for f in ring.defining:
        for j in range(rank):
            iembeds.append(mod.unit(j).mul_poly(f))
    cols = list(cols)
    changed = True
    while changed:
        changed = False
        for i in range(len(cols)):
            others = cols[:i] + cols[i + 1:] + iembeds
            if not others:
                continue
            gb = buchberger(others, budget)
            if reduce_vector(cols[i], gb, budget).is_zero():
                cols.pop(i)
                changed = True
                break
    return cols


class ResolutionBuilder:
    """Incrementally extended free resolution of a presented module over R;
    in the graded setting trimming generators keeps it minimal, so running
    out of syzygies detects finite projective dimension."""

    def __init__(self, M, budget=None, minimalize=True):
        self.M = M
        self.budget = budget if budget is not None else Budget()
        self.minimalize = minimalize
        self.ranks = [M.rank]
        self.diffs = []
        cur = [v for v in M.relations if not v.is_zero()]
        if minimalize:
            cur = _trim_columns(M.ring, cur, M.rank, self.budget)
        self.cur = cur

    def extend_to(self, length):
        while len(self.diffs) < length and self.cur:
            self._step()
        return self

    def _step(self):
        from .groebner import ideal_nf

        ring = self.M.ring
        ambient = ring.ambient
        cur = self.cur
        rank_prev = self.ranks[-1]
        mat = [[cur[j].coordinate(i) for j in range(len(cur))]
               for i in range(rank_prev)]
        self.diffs.append(mat)
        self.ranks.append(len(cur))
        mod = FreeModule(ambient, rank_prev)
        iembeds = []
        for f in ring.defining:
            for j in range(rank_prev):
                iembeds.append(mod.unit(j).mul_poly(f))
        syz = syzygies(cur + iembeds, self.budget)
        nxt_mod = FreeModule(ambient, len(cur))
        nxt = []
        seen = set()
        gb_i = ring.gb()
        for s in syz:
            terms = {}
            for (p, m), c in s.terms.items():
                if p < len(cur):
                    terms[(p, m)] = c
            v = Vector(nxt_mod, terms)
            if v.is_zero():
                continue
            polys = [ideal_nf(v.coordinate(j), gb_i) for j in range(len(cur))]
            v = nxt_mod.from_polys(polys)
            if v.is_zero():
                continue
            k = v.key()
            if k not in seen:
                seen.add(k)
                nxt.append(v)
        if self.minimalize:
            nxt = _trim_columns(ring, nxt, len(cur), self.budget)
        self.cur = nxt

    def complex(self):
        return FreeComplex(self.M.ring, self.ranks, self.diffs, check=False)


def free_resolution(M, length, budget=None, minimalize=True):
    """Resolution F_0 <- F_1 <- ... of M by iterated syzygies over R."""
    return ResolutionBuilder(M, budget, minimalize).extend_to(length).complex()


def ext_module(i, N, M, budget=None, resolution=None):
    """Ext^i_R(N, M) as (PresentedModule, nonvanishing flag)."""
    if budget is None:
        budget = Budget()
    F = resolution if resolution is not None else free_resolution(N, i + 1, budget)
    if i >= len(F.ranks):
        return PresentedModule(N.ring, 0, []), False
    verdict, module = hom_cohomology(F, M, i, want_module=True, budget=budget)
    return module, verdict.nonvanishing


def ext_nonvanishing(i, N, M, budget=None, resolution=None):
    if budget is None:
        budget = Budget()
    F = resolution if resolution is not None else free_resolution(N, i + 1, budget)
    if i >= len(F.ranks):
        return CohomologyVerdict(i, False)
    return hom_cohomology(F, M, i, budget=budget)

"""Deterministic (ring, ideal) corpus shared by the acceptance criteria:
rings over <= 4 variables with degree <= 2 defining ideals, ideals with
<= 3 generators of degree <= 2."""

import random

from gradecm import GF, QQ, PolyRing
from gradecm.ringpres import IdealHandle, PresentedRing

RING_SPECS = [
    (QQ, ["x"], []),
    (QQ, ["x", "y"], []),
    (QQ, ["x", "y", "z"], []),
    (QQ, ["w", "x", "y", "z"], []),
    (QQ, ["x", "y"], ["x*y"]),
    (QQ, ["x", "y"], ["x^2"]),
    (QQ, ["x", "y", "z"], ["x*y", "x*z"]),
    (QQ, ["x", "y", "z"], ["x^2 - y*z"]),
    (QQ, ["w", "x", "y", "z"], ["w*x - y*z"]),
    (QQ, ["w", "x", "y", "z"], ["w*y", "w*z"]),
    (GF(5), ["x", "y"], []),
    (GF(2), ["x", "y", "z"], ["x*z", "y*z"]),
    (GF(3), ["x", "y", "z"], ["x^2"]),
    (QQ, ["x", "y", "z"], ["x*y - z^2"]),
]


def build_rings():
    rings = []
    for field, names, defining in RING_SPECS:
        ambient = PolyRing(field, names)
        rings.append(PresentedRing(ambient, [ambient.parse(t) for t in defining]))
    return rings


def _element_pool(ring):
    amb = ring.ambient
    pool = list(amb.gens())
    n = amb.n
    for i in range(n):
        for j in range(i, n):
            pool.append(amb.var(i) * amb.var(j))
    for i in range(n):
        for j in range(i + 1, n):
            pool.append(amb.var(i) * amb.var(j) - amb.var(j) * amb.var(j))
            pool.append(amb.var(i) + amb.var(j))
            pool.append(amb.var(i) - amb.var(j))
            pool.append(amb.var(i) * amb.var(i) - amb.var(j) * amb.var(j))
            pool.append(amb.var(i) * amb.var(i) + amb.var(i) * amb.var(j))
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                pool.append(amb.var(i) * amb.var(j) - amb.var(i) * amb.var(k))
                pool.append(amb.var(i) + amb.var(j) + amb.var(k))
    return pool


def build_pairs(per_ring=18, seed=2024):
    """At least 200 deterministic (ring, ideal) pairs.  On the
    four-variable rings the sampler stays with sparse generators (splitting
    powers of dense mixed ideals is out of desk scale)."""
    rng = random.Random(seed)
    pairs = []
    for ring in build_rings():
        pool = _element_pool(ring)
        big = ring.ambient.n >= 4
        seen = set()
        picked = 0
        guard = 1600
        while picked < per_ring and guard:
            guard -= 1
            k = rng.randint(1, 2 if big else 3)
            gens = rng.sample(pool, min(k, len(pool)))
            if big and sum(len(g.terms) for g in gens) > 3:
                continue
            a = IdealHandle(ring, gens)
            if a.is_zero() or not a.is_proper():
                continue
            key = a.key()
            if key in seen:
                continue
            if not _desk_scale(ring, a):
                continue
            seen.add(key)
            pairs.append((ring, a))
            picked += 1
    return pairs


def _desk_scale(ring, a):
    """Size probe keeping the corpus within the runtime budget: the fourth
    power (used by the truncated local-cohomology criterion) must stay
    small."""
    from gradecm.groebner import ideal_gb

    gb4 = ideal_gb(a.power(4).preimage_gens())
    return len(gb4) <= 8 and sum(len(g.terms) for g in gb4) <= 24

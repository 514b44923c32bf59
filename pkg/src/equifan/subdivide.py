"""Centered (star) and barycentric subdivision.

Both of the classical barycentric constructions are implemented: the
top-down cascade of centered subdivisions (by decreasing dimension of
the original cones) and the bottom-up inductive construction over the
face lattice.  They must produce the same complex; tests exploit that
as a cross-check.
"""

from __future__ import annotations

import warnings

from .complexes import Complex, same_complex
from .lattice import Vec, primitive


def barycenter(gens) -> Vec:
    """Primitive generator of the barycenter ray: sum of the edge generators."""
    gens = [primitive(g) for g in gens]
    if not gens:
        raise ValueError("zero cone has no barycenter")
    total = tuple(sum(col) for col in zip(*gens))
    return primitive(total)


def star_subdivide(cx: Complex, center) -> Complex:
    """Subdivision of the complex centered at the ray through `center`.

    Every cone containing the center is replaced by the joins of the
    center with its faces disjoint from the center ray; all other cones
    are untouched.  If the center already is a ray of the complex the
    complex is returned unchanged.  New rays get fresh ids appended; old
    ids never change.
    """
    c = tuple(int(v) for v in center)
    p = primitive(c)
    if p != c:
        warnings.warn(f"star center {c} normalized to primitive {p}")
    center = p
    if not cx.support_contains(center):
        raise ValueError("center not in support")
    if center in cx.rays:
        return cx

    new_id = len(cx.rays)
    rays = cx.rays + (center,)
    cones = {c0 for c0 in cx.cones if not cx.contains_point(c0, center)}
    affected = [s for s in cx.maximal_cones if cx.contains_point(s, center)]
    for sigma in affected:
        for f in cx.faces(sigma):
            if not cx.contains_point(f, center):
                cones.add(f | {new_id})
    return Complex(cx.ambient_rank, rays, cones)


def barycentric_subdivision(cx: Complex) -> Complex:
    """Barycentric subdivision via the cascade of centered subdivisions.

    Centers are the barycenters of the original cones, processed by
    decreasing dimension; within one dimension level the order is fixed
    (ascending sorted ray ids of the host cone) for determinism, though
    it does not affect the result.
    """
    return _barycentric_cascade(cx)[0]


def _barycentric_cascade(cx: Complex):
    """Run the cascade; also return the per-dimension batches of centers.

    One batch holds all effective barycenters of one dimension level of
    the original complex, as (center, minimal host in the batch's base
    complex) pairs; the group of a symmetric complex permutes each batch,
    which downstream order-function construction relies on.
    """
    by_dim: dict[int, list] = {}
    for c in cx.cones:
        d = cx.dim(c)
        if d >= 1:
            by_dim.setdefault(d, []).append(c)
    result = cx
    batches = []
    for d in sorted(by_dim, reverse=True):
        base = result
        centers = []
        for orig in sorted(by_dim[d], key=sorted):
            b = barycenter(cx.generators(orig))
            before = result
            result = star_subdivide(result, b)
            if result is not before:
                centers.append((b, base.minimal_cone_containing(b)))
        if centers:
            batches.append((centers, base, result))
    return result, batches


def barycentric_subdivision_inductive(cx: Complex) -> Complex:
    """Barycentric subdivision built bottom-up over the face lattice.

    The subdivision of a cone is the subdivision of its boundary plus
    the joins of the boundary pieces with the cone's own barycenter.
    Serves as an independent oracle for the cascade construction.
    """
    memo: dict[frozenset, frozenset] = {}

    def bary_cones(cone) -> frozenset:
        cone = frozenset(cone)
        if cone in memo:
            return memo[cone]
        if cx.dim(cone) == 0:
            out = frozenset({frozenset()})
        else:
            boundary = frozenset()
            for f in cx.faces(cone):
                if f != cone:
                    boundary |= bary_cones(f)
            b = barycenter(cx.generators(cone))
            out = boundary | frozenset(s | {b} for s in boundary)
        memo[cone] = out
        return out

    all_cones: set[frozenset] = set()
    for c in sorted(cx.cones, key=lambda c: (cx.dim(c), sorted(c))):
        all_cones |= bary_cones(c)

    # cone members are generator vectors here; keep original ray ids and
    # append new barycenters in order of first appearance (dim ascending)
    rays = list(cx.rays)
    index = {r: i for i, r in enumerate(rays)}
    for c in sorted(cx.cones, key=lambda c: (cx.dim(c), sorted(c))):
        if cx.dim(c) >= 1:
            b = barycenter(cx.generators(c))
            if b not in index:
                index[b] = len(rays)
                rays.append(b)
    id_cones = {frozenset(index[v] for v in s) for s in all_cones}
    return Complex(cx.ambient_rank, tuple(rays), id_cones)


def barycentric_edge_bijection(cx: Complex, bcx: Complex) -> dict:
    """Map each ray of the barycentric subdivision to its source cone.

    Returns {ray id in bcx -> cone of cx whose relative interior contains
    that ray}; this is a bijection onto the positive-dimensional cones of
    cx, with inverse given by taking barycenters.
    """
    if not same_complex(bcx, barycentric_subdivision(cx)):
        raise ValueError("not the barycentric subdivision of the base complex")
    used_rays = sorted({i for c in bcx.cones for i in c})
    mapping = {}
    targets = set()
    for rid in used_rays:
        g = bcx.rays[rid]
        host = cx.minimal_cone_containing(g)
        if barycenter(cx.generators(host)) != g:
            raise ValueError("not the barycentric subdivision of the base complex")
        mapping[rid] = host
        targets.add(host)
    positive = {c for c in cx.cones if cx.dim(c) >= 1}
    if targets != positive or len(mapping) != len(positive):
        raise ValueError("not the barycentric subdivision of the base complex")
    return mapping

"""Finite group actions on complexes.

A group is a finite set of unimodular integer matrices acting on the
ambient lattice.  An action on a complex is verified by checking that
every element permutes the ray generators and the cones; all later
operations (orbits, strictness checks, quotients, invariant order
functions) work through the induced ray permutations.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .complexes import Complex
from .lattice import Mat, identity_matrix, is_unimodular, mat_mul, mat_vec
from .orderfun import OrderFunction
from .subdivide import star_subdivide

GROUP_CAP_DEFAULT = 10_000


def generate_group(generators, cap: int = GROUP_CAP_DEFAULT, rank: int | None = None) -> tuple[Mat, ...]:
    """Close a set of unimodular matrices under multiplication.

    Always contains the identity; raises when a generator is not
    unimodular or the group would exceed `cap` elements.  Without
    generators the ambient rank must be given to form the identity.
    """
    gens = [tuple(tuple(int(c) for c in row) for row in m) for m in generators]
    if not gens:
        if rank is None:
            raise ValueError("empty generating set needs an explicit rank")
        return trivial_group(rank)
    n = len(gens[0])
    for m in gens:
        if not is_unimodular(m):
            raise ValueError(f"generator {m} is not unimodular")
        if len(m) != n or any(len(r) != n for r in m):
            raise ValueError("generators must be square matrices of equal size")
    ident = identity_matrix(n)
    elements = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for a in gens:
            for b in frontier:
                c = mat_mul(a, b)
                if c not in elements:
                    elements.add(c)
                    nxt.append(c)
                    if len(elements) > cap:
                        raise ValueError(f"group size cap {cap} exceeded")
        frontier = nxt
    return tuple(sorted(elements))


def trivial_group(rank: int) -> tuple[Mat, ...]:
    return (identity_matrix(rank),)


@dataclass
class ActionReport:
    """Result of verifying that matrices act on a complex."""

    violations: list[str] = field(default_factory=list)
    ray_permutations: tuple[tuple[int, ...], ...] = ()
    cone_permutations: tuple[dict, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok


def verify_action(cx: Complex, elements) -> ActionReport:
    """Check every element permutes rays and cones; emit permutation tables."""
    report = ActionReport()
    elements = tuple(tuple(tuple(int(c) for c in row) for row in m) for m in elements)
    ray_index = {r: i for i, r in enumerate(cx.rays)}
    perms = []
    cone_maps = []
    for k, m in enumerate(elements):
        if not is_unimodular(m):
            report.violations.append(f"element {k} is not unimodular")
            continue
        perm = []
        ok = True
        for i, r in enumerate(cx.rays):
            img = mat_vec(m, r)
            j = ray_index.get(img)
            if j is None:
                report.violations.append(
                    f"element {k} maps ray {i} = {r} to {img}, not a ray"
                )
                ok = False
                break
            perm.append(j)
        if not ok:
            continue
        cmap = {}
        for c in cx.cones:
            img = frozenset(perm[i] for i in c)
            if img not in cx.cones:
                report.violations.append(
                    f"element {k} maps cone {sorted(c)} to {sorted(img)}, not a cone"
                )
                ok = False
                break
            cmap[c] = img
        if ok:
            perms.append(tuple(perm))
            cone_maps.append(cmap)
    if report.ok:
        report.ray_permutations = tuple(perms)
        report.cone_permutations = tuple(cone_maps)
    return report


def group_action(cx: Complex, elements) -> "GroupAction":
    """Verified action of the given matrices on the complex (raises if invalid)."""
    report = verify_action(cx, elements)
    if not report.ok:
        raise ValueError("group does not act on the complex: " + "; ".join(report.violations))
    elements = tuple(tuple(tuple(int(c) for c in row) for row in m) for m in elements)
    return GroupAction(cx, elements, report.ray_permutations, report.cone_permutations)


@dataclass(frozen=True)
class GroupAction:
    complex: Complex
    elements: tuple[Mat, ...]
    ray_permutations: tuple[tuple[int, ...], ...]
    cone_permutations: tuple[dict, ...]

    def ray_orbits(self) -> tuple[tuple[int, ...], ...]:
        n = len(self.complex.rays)
        seen = set()
        orbits = []
        for i in range(n):
            if i in seen:
                continue
            orbit = {perm[i] for perm in self.ray_permutations}
            seen |= orbit
            orbits.append(tuple(sorted(orbit)))
        return tuple(orbits)

    def cone_orbits(self, maximal_only: bool = False) -> tuple[tuple, ...]:
        cones = self.complex.maximal_cones if maximal_only else sorted(
            self.complex.cones, key=lambda c: (len(c), sorted(c))
        )
        seen = set()
        orbits = []
        for c in cones:
            c = frozenset(c)
            if c in seen:
                continue
            orbit = {cmap[c] for cmap in self.cone_permutations}
            seen |= orbit
            orbits.append(tuple(sorted(orbit, key=sorted)))
        return tuple(orbits)


@dataclass
class CheckReport:
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok


def check_fixed_cone_identity(cx: Complex, elements) -> CheckReport:
    """Every element fixing a cone setwise must fix its rays pointwise."""
    action = group_action(cx, elements)
    report = CheckReport()
    for k, (perm, cmap) in enumerate(zip(action.ray_permutations, action.cone_permutations)):
        for c in sorted(cx.cones, key=sorted):
            if cmap[c] == c and any(perm[i] != i for i in c):
                report.violations.append(
                    f"element {k} fixes cone {sorted(c)} but permutes its edges"
                )
    return report


def check_G_strict(cx: Complex, elements) -> CheckReport:
    """No cone may have two distinct edges in one ray orbit."""
    action = group_action(cx, elements)
    report = CheckReport()
    orbit_of = {}
    for orbit in action.ray_orbits():
        for i in orbit:
            orbit_of[i] = orbit
    for c in sorted(cx.cones, key=sorted):
        by_orbit: dict[tuple, list] = {}
        for i in c:
            by_orbit.setdefault(orbit_of[i], []).append(i)
        for orbit, members in sorted(by_orbit.items()):
            if len(members) > 1:
                report.violations.append(
                    f"cone {sorted(c)} has edges {sorted(members)} in one orbit"
                )
    return report


def is_equivariant_subdivision(fine: Complex, coarse: Complex, elements) -> bool:
    """True when `fine` subdivides `coarse` and the group permutes its cones."""
    from .complexes import is_subdivision

    if not is_subdivision(fine, coarse):
        raise ValueError("not a subdivision")
    return verify_action(fine, elements).ok


def orbit_of_point(point, elements):
    """Orbit of a lattice point under the matrices, sorted for determinism."""
    return tuple(sorted({mat_vec(m, tuple(point)) for m in elements}))


def simultaneous_star_subdivide(cx: Complex, centers) -> Complex:
    """Star subdivide at several centers, no two of which share a cone.

    The pairwise condition makes the outcome order-independent; the
    implementation still fixes a deterministic order.
    """
    centers = tuple(sorted({tuple(int(v) for v in c) for c in centers}))
    for i, a in enumerate(centers):
        for b in centers[i + 1:]:
            if any(
                cx.contains_point(c, a) and cx.contains_point(c, b)
                for c in cx.maximal_cones
            ):
                raise ValueError("orbit not simultaneous-safe")
    out = cx
    for c in centers:
        out = star_subdivide(out, c)
    return out


def equivariant_star_subdivide(cx: Complex, center, elements) -> Complex:
    """Star subdivision at the whole orbit of the center, simultaneously."""
    group_action(cx, elements)  # action must be valid
    return simultaneous_star_subdivide(cx, orbit_of_point(center, elements))


@dataclass
class QuotientStructure:
    """Orbit/representative form of the quotient of a complex by a group.

    Well-defined only when the fixed-cone-identity and strictness checks
    pass; then orbit representatives with their induced face relations
    form a conical-complex-shaped incidence structure.
    """

    ray_orbits: tuple[tuple[int, ...], ...]
    cone_orbits: tuple[tuple, ...]
    ray_representatives: tuple[int, ...]
    cone_representatives: tuple
    face_relations: dict
    maximal_representatives: tuple = ()


def quotient_structure(cx: Complex, elements) -> QuotientStructure:
    """Quotient orbit structure of a strict action (raises when not strict)."""
    fci = check_fixed_cone_identity(cx, elements)
    if not fci.ok:
        raise ValueError("fixed-cone-identity check failed: " + "; ".join(fci.violations))
    gs = check_G_strict(cx, elements)
    if not gs.ok:
        raise ValueError("strictness check failed: " + "; ".join(gs.violations))
    action = group_action(cx, elements)
    ray_orbits = action.ray_orbits()
    cone_orbits = action.cone_orbits()
    ray_reps = tuple(o[0] for o in ray_orbits)
    cone_reps = tuple(o[0] for o in cone_orbits)
    rep_of = {}
    elem_to_rep = {}
    for orbit in cone_orbits:
        rep = orbit[0]
        for c in orbit:
            rep_of[frozenset(c)] = frozenset(rep)
            # one element carrying the cone onto the representative
            for k, cmap in enumerate(action.cone_permutations):
                if cmap[frozenset(c)] == frozenset(rep):
                    elem_to_rep[frozenset(c)] = k
                    break
    face_relations = {}
    for rep in cone_reps:
        rep = frozenset(rep)
        rels = []
        for f in cx.faces(rep):
            rels.append((tuple(sorted(f)), tuple(sorted(rep_of[f])), elem_to_rep[f]))
        face_relations[tuple(sorted(rep))] = tuple(sorted(rels))
    # an orbit is maximal in the quotient iff its members are maximal cones
    maximal = tuple(
        sorted(
            (frozenset(rep) for rep in cone_reps if frozenset(rep) in set(cx.maximal_cones)),
            key=sorted,
        )
    )
    return QuotientStructure(
        ray_orbits, cone_orbits, ray_reps, cone_reps, face_relations, maximal
    )


def invariant_order_function(
    base: Complex, subdivision: Complex, elements, representative_values: dict
) -> OrderFunction:
    """Extend per-orbit ray values to a G-invariant order function.

    Values are given on at least one representative per ray orbit of the
    subdivision and propagated by the action; stabilizers fix rays, so
    the extension is well-defined.
    """
    action = group_action(subdivision, elements)
    if not is_equivariant_subdivision(subdivision, base, elements):
        raise ValueError("not an equivariant subdivision")
    values: dict[int, int] = {}
    for orbit in action.ray_orbits():
        given = [i for i in orbit if i in representative_values]
        if not given:
            raise ValueError(f"missing representative value for ray orbit {orbit}")
        vals = {representative_values[i] for i in given}
        if len(vals) > 1:
            raise ValueError(f"inconsistent values {sorted(vals)} on ray orbit {orbit}")
        v = vals.pop()
        for i in orbit:
            values[i] = v
    ord_fn = OrderFunction(base, subdivision, values)
    for perm in action.ray_permutations:
        assert all(
            ord_fn.ray_values[perm[i]] == ord_fn.ray_values[i]
            for i in range(len(subdivision.rays))
        )
    return ord_fn

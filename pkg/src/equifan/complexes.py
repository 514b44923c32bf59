"""Conical polyhedral complexes with integral structure.

A complex is a finite, face-closed collection of pointed rational cones
in one ambient lattice, any two of which intersect in a common face.
Cones are stored as frozensets of ray ids; the complex owns the ray
table, so subdivisions and group actions are pure index manipulations.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from .lattice import Vec, primitive, rank, rational_nullspace

ConeIds = frozenset


@dataclass(frozen=True)
class DualDescription:
    """H-representation of a cone: span equations and facet inequalities.

    A point x belongs to the cone iff every equation vanishes on x and
    every inequality is >= 0 on x.
    """

    equations: tuple[Vec, ...]
    inequalities: tuple[Vec, ...]

    def contains(self, x) -> bool:
        return all(_dot(e, x) == 0 for e in self.equations) and all(
            _dot(u, x) >= 0 for u in self.inequalities
        )


def _dot(u, v):
    return sum(a * b for a, b in zip(u, v))


def cone_dual(gens, ambient_rank: int) -> DualDescription:
    """Dual description of the cone spanned by gens (no pointedness check)."""
    gens = tuple(tuple(g) for g in gens)
    if not gens:
        eqs = tuple(
            tuple(1 if i == j else 0 for j in range(ambient_rank))
            for i in range(ambient_rank)
        )
        return DualDescription(eqs, ())
    equations = tuple(rational_nullspace(gens, n=ambient_rank))
    d = ambient_rank - len(equations)
    seen = set()
    normals = []
    # every facet is spanned by d-1 independent generators lying on it
    for subset in combinations(range(len(gens)), d - 1) if d >= 1 else []:
        sub = [gens[i] for i in subset]
        if rank(sub) != d - 1:
            continue
        candidates = rational_nullspace(list(sub) + list(equations), n=ambient_rank)
        # unique normal direction within the span, up to sign
        if len(candidates) != 1:
            continue
        u = candidates[0]
        vals = [_dot(u, g) for g in gens]
        if all(v >= 0 for v in vals) and any(v > 0 for v in vals):
            pass
        elif all(v <= 0 for v in vals) and any(v < 0 for v in vals):
            u = tuple(-c for c in u)
            vals = [-v for v in vals]
        else:
            continue
        zero_set = frozenset(i for i, v in enumerate(vals) if v == 0)
        if zero_set not in seen:
            seen.add(zero_set)
            normals.append(primitive(u))
    normals.sort()
    return DualDescription(equations, tuple(normals))


def dual_description(gens, ambient_rank: int) -> DualDescription:
    """Dual description of a pointed cone; raises on cones with lineality."""
    dd = cone_dual(gens, ambient_rank)
    if gens and rank(list(dd.equations) + list(dd.inequalities)) < ambient_rank:
        raise ValueError("not pointed")
    return dd


def cone_contains(gens, x, ambient_rank: int, dual: DualDescription | None = None) -> bool:
    if dual is None:
        dual = cone_dual(gens, ambient_rank)
    return dual.contains(x)


class Complex:
    """Immutable conical polyhedral complex in a fixed ambient lattice."""

    def __init__(self, ambient_rank: int, rays, cones):
        self.ambient_rank = int(ambient_rank)
        self.rays: tuple[Vec, ...] = tuple(tuple(int(c) for c in r) for r in rays)
        for r in self.rays:
            if len(r) != self.ambient_rank:
                raise ValueError("ray length does not match ambient rank")
        self.cones: frozenset[ConeIds] = frozenset(frozenset(c) for c in cones)
        for c in self.cones:
            for i in c:
                if not (0 <= i < len(self.rays)):
                    raise ValueError(f"cone references unknown ray id {i}")
        self._dual_cache: dict[ConeIds, DualDescription] = {}
        self._faces_cache: dict[ConeIds, frozenset[ConeIds]] = {}
        self._dim_cache: dict[ConeIds, int] = {}
        self._maximal: tuple[ConeIds, ...] | None = None

    # -- construction -------------------------------------------------

    @classmethod
    def from_maximal_cones(cls, ambient_rank, rays, maximal):
        """Build a complex from ray generators and maximal cones (face-closed)."""
        rays = tuple(tuple(int(c) for c in r) for r in rays)
        for r in rays:
            if all(c == 0 for c in r):
                raise ValueError("zero ray")
        cones: set[ConeIds] = {frozenset()}
        for c in maximal:
            c = frozenset(c)
            if c in cones:
                continue
            gens = [rays[i] for i in sorted(c)]
            order = sorted(c)
            for f in _raw_faces(tuple(gens), ambient_rank):
                cones.add(frozenset(order[i] for i in f))
        return cls(ambient_rank, rays, cones)

    # -- basic queries -------------------------------------------------

    def generators(self, cone) -> tuple[Vec, ...]:
        return tuple(self.rays[i] for i in sorted(cone))

    def dim(self, cone) -> int:
        cone = frozenset(cone)
        if cone not in self._dim_cache:
            self._dim_cache[cone] = rank(self.generators(cone)) if cone else 0
        return self._dim_cache[cone]

    def dual(self, cone) -> DualDescription:
        cone = frozenset(cone)
        if cone not in self._dual_cache:
            self._dual_cache[cone] = cone_dual(self.generators(cone), self.ambient_rank)
        return self._dual_cache[cone]

    def contains_point(self, cone, x) -> bool:
        return self.dual(cone).contains(x)

    @property
    def maximal_cones(self) -> tuple[ConeIds, ...]:
        if self._maximal is None:
            self._maximal = tuple(
                sorted(
                    (c for c in self.cones if not any(c < d for d in self.cones)),
                    key=lambda c: (len(c), sorted(c)),
                )
            )
        return self._maximal

    def faces(self, cone) -> frozenset[ConeIds]:
        """All faces of a cone, including itself and the zero face."""
        cone = frozenset(cone)
        if cone not in self._faces_cache:
            order = sorted(cone)
            raw = _raw_faces(self.generators(cone), self.ambient_rank)
            self._faces_cache[cone] = frozenset(
                frozenset(order[i] for i in f) for f in raw
            )
        return self._faces_cache[cone]

    def facets(self, cone) -> tuple[ConeIds, ...]:
        d = self.dim(cone)
        return tuple(sorted((f for f in self.faces(cone) if self.dim(f) == d - 1),
                            key=sorted))

    def support_contains(self, x) -> bool:
        return any(self.contains_point(c, x) for c in self.maximal_cones)

    def minimal_cone_containing(self, x) -> ConeIds:
        """The unique cone whose relative interior contains x."""
        best = None
        for c in sorted(self.cones, key=lambda c: (self.dim(c), sorted(c))):
            if self.contains_point(c, x):
                best = c
                break
        if best is None:
            raise ValueError("center not in support")
        return best

    # -- equality ------------------------------------------------------

    def _key(self):
        return (self.ambient_rank, self.rays, self.cones)

    def __eq__(self, other):
        return isinstance(other, Complex) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return (
            f"Complex(rank={self.ambient_rank}, rays={len(self.rays)}, "
            f"cones={len(self.cones)}, maximal={len(self.maximal_cones)})"
        )


def _raw_faces(gens, ambient_rank):
    """Face lattice of a cone as frozensets of generator indices.

    Recursively peels facets off via the dual description; each face of a
    finitely generated cone is spanned by the generators lying on it.
    """
    memo: dict[frozenset, None] = {}

    def walk(idxs: frozenset):
        if idxs in memo:
            return
        memo[idxs] = None
        sub = [gens[i] for i in sorted(idxs)]
        order = sorted(idxs)
        if not idxs:
            return
        dd = cone_dual(tuple(sub), ambient_rank)
        if not dd.inequalities:
            # no facets: the cone is its own span; only the zero face below
            walk(frozenset())
            return
        for u in dd.inequalities:
            facet = frozenset(order[i] for i, g in enumerate(sub) if _dot(u, g) == 0)
            walk(facet)

    walk(frozenset(range(len(gens))))
    return frozenset(memo)


def same_complex(a: Complex, b: Complex) -> bool:
    """Geometric equality: same rank and the same cones (id-independent).

    Ray tables are bookkeeping and may carry unused entries (for id
    stability across derived complexes); only the cone geometry counts.
    """
    if a.ambient_rank != b.ambient_rank:
        return False
    ca = {frozenset(a.rays[i] for i in c) for c in a.cones}
    cb = {frozenset(b.rays[i] for i in c) for c in b.cones}
    return ca == cb


# ---------------------------------------------------------------------------
# validation


@dataclass
class ValidationReport:
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok

    def __str__(self):
        if self.ok:
            return "valid"
        return "\n".join(self.violations)


def validate_complex(cx: Complex) -> ValidationReport:
    """Check the complex axioms and report every violation found.

    Checks: ray primitivity and distinctness, pointedness, irredundant
    generators, face closure, and pairwise intersection-is-a-common-face
    (decided exactly via dual descriptions).
    """
    report = ValidationReport()
    seen = {}
    for i, r in enumerate(cx.rays):
        if all(c == 0 for c in r):
            report.violations.append(f"ray {i} is zero")
            return report
        if primitive(r) != r:
            report.violations.append(f"ray {i} = {r} is not primitive")
        if r in seen:
            report.violations.append(f"rays {seen[r]} and {i} have equal generators {r}")
        seen[r] = i
    if report.violations:
        return report

    for c in sorted(cx.cones, key=sorted):
        gens = cx.generators(c)
        if not c:
            continue
        dd = cx.dual(c)
        if rank(list(dd.equations) + list(dd.inequalities)) < cx.ambient_rank:
            report.violations.append(f"cone {sorted(c)} is not pointed")
            continue
        for i in sorted(c):
            others = [cx.rays[j] for j in sorted(c) if j != i]
            if others and cone_contains(tuple(others), cx.rays[i], cx.ambient_rank):
                report.violations.append(
                    f"cone {sorted(c)}: generator {i} is not an extreme ray"
                )
    if report.violations:
        return report

    for c in sorted(cx.cones, key=sorted):
        for f in cx.faces(c):
            if f not in cx.cones:
                report.violations.append(
                    f"face {sorted(f)} of cone {sorted(c)} missing from the complex"
                )

    for c1, c2 in combinations(cx.maximal_cones, 2):
        inter = _intersect_cones(cx, c1, c2)
        shared = c1 & c2
        candidate = frozenset(i for i in shared)
        ok = (
            inter == frozenset(cx.rays[i] for i in candidate)
            and candidate in cx.faces(c1)
            and candidate in cx.faces(c2)
        )
        if not ok:
            report.violations.append(
                f"cones {sorted(c1)} and {sorted(c2)} do not intersect in a common face"
            )
    return report


def _intersect_cones(cx: Complex, c1, c2) -> frozenset[Vec]:
    """Extreme rays (as primitive generators) of the exact intersection."""
    d1, d2 = cx.dual(c1), cx.dual(c2)
    equations = list(d1.equations) + list(d2.equations)
    normals = list(d1.inequalities) + list(d2.inequalities)
    n = cx.ambient_rank
    span = rational_nullspace(equations, n=n) if equations else [
        tuple(1 if i == j else 0 for j in range(n)) for i in range(n)
    ]
    d = len(span)
    if d == 0:
        return frozenset()
    rays = set()
    # an extreme ray is cut out by d-1 independent active constraints
    for subset in combinations(range(len(normals)), d - 1) if d >= 1 else []:
        active = [normals[i] for i in subset] + list(equations)
        dirs = rational_nullspace(active, n=n)
        if len(dirs) != 1:
            continue
        v = dirs[0]
        for cand in (v, tuple(-c for c in v)):
            if all(_dot(u, cand) >= 0 for u in normals) and all(
                _dot(e, cand) == 0 for e in equations
            ):
                rays.add(primitive(cand))
                break
    if d == 1:
        # no constraints needed; test the span direction itself
        v = span[0]
        for cand in (v, tuple(-c for c in v)):
            if all(_dot(u, cand) >= 0 for u in normals):
                rays.add(primitive(cand))
    return frozenset(rays)


# ---------------------------------------------------------------------------
# subdivision check


@dataclass
class SubdivisionReport:
    ok: bool
    witnesses: list[str] = field(default_factory=list)

    def __bool__(self):
        return self.ok

    def __str__(self):
        return "subdivision" if self.ok else "; ".join(self.witnesses)


def is_subdivision(fine: Complex, coarse: Complex) -> SubdivisionReport:
    """Decide whether `fine` subdivides `coarse` (same support, refined cones).

    Every cone of `fine` must sit inside a cone of `coarse`, and inside
    each maximal cone of `coarse` the equal-dimension pieces of `fine`
    must tile it: every facet of a piece either lies in a facet of the
    host or is shared by exactly two pieces.
    """
    if fine.ambient_rank != coarse.ambient_rank:
        raise ValueError("ambient rank mismatch")
    witnesses = []
    contained = {}
    for c in fine.maximal_cones:
        gens = fine.generators(c)
        hosts = [
            s
            for s in coarse.maximal_cones
            if all(coarse.contains_point(s, g) for g in gens)
        ]
        if not hosts:
            witnesses.append(f"cone {sorted(c)} of the fine complex is not contained in any cone")
            return SubdivisionReport(False, witnesses)
        contained[c] = hosts

    for sigma in coarse.maximal_cones:
        d = coarse.dim(sigma)
        pieces = [c for c, hs in contained.items() if sigma in hs and fine.dim(c) == d]
        if not pieces:
            witnesses.append(f"cone {sorted(sigma)} is not covered")
            return SubdivisionReport(False, witnesses)
        sigma_dd = coarse.dual(sigma)
        facet_count: dict[frozenset, int] = {}
        for p in pieces:
            for f in fine.facets(p):
                fgens = fine.generators(f)
                on_boundary = any(
                    all(_dot(u, g) == 0 for g in fgens) for u in sigma_dd.inequalities
                )
                if on_boundary:
                    continue
                facet_count[f] = facet_count.get(f, 0) + 1
        for f, cnt in sorted(facet_count.items(), key=lambda kv: sorted(kv[0])):
            if cnt != 2:
                witnesses.append(
                    f"interior facet {sorted(f)} of host {sorted(sigma)} met {cnt} time(s), expected 2"
                )
        if witnesses:
            return SubdivisionReport(False, witnesses)
    return SubdivisionReport(True, [])


def is_simplicial(cx: Complex) -> bool:
    """Every cone's generator count equals its dimension."""
    return all(len(c) == cx.dim(c) for c in cx.maximal_cones)


def is_smooth(cx: Complex) -> bool:
    """Simplicial and every maximal cone has lattice index 1."""
    from .lattice import cone_index

    if not is_simplicial(cx):
        return False
    return all(cone_index(cx.generators(c)) == 1 for c in cx.maximal_cones if c)

"""Equivariant smooth refinement with a full audit trail.

The pipeline subdivides a complex until every maximal cone has lattice
index 1, keeping the action of a finite group intact throughout:

  stage 1 (canonical mode): barycentric subdivision, which makes the
  action strict; later stages: simultaneous centered subdivisions at the
  lattice points selected by the lexicographic order of their canonical
  coordinates.

Each stage carries a verified strict positive order function; stages
compose into a single certificate function whose linearity domains are
exactly the final complex.  Everything is re-verified from scratch
before a certificate is issued.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .complexes import Complex, is_simplicial, is_smooth, is_subdivision, same_complex
from .groups import (
    check_G_strict,
    group_action,
    trivial_group,
    verify_action,
)
from .lattice import (
    cone_index,
    mat_vec,
    parallelepiped_points,
    primitive,
    rational_nullspace,
    solve_in_basis,
    transpose,
)
from .orderfun import (
    OrderFunction,
    compose_with_multiplier,
    linearity_domains,
    search_centered_order_function,
    verify_order_axioms,
)
from .subdivide import (
    _barycentric_cascade,
    barycentric_edge_bijection,
    barycentric_subdivision,
    star_subdivide,
)

ROUND_CAP = 10_000


def total_index(cx: Complex) -> int:
    """Sum of cone_index over the maximal cones."""
    if not is_simplicial(cx):
        raise ValueError("not simplicial")
    return sum(cone_index(cx.generators(c)) for c in cx.maximal_cones if c)


def max_index(cx: Complex) -> int:
    """Largest cone_index among the maximal cones."""
    if not is_simplicial(cx):
        raise ValueError("not simplicial")
    return max((cone_index(cx.generators(c)) for c in cx.maximal_cones if c), default=1)


# ---------------------------------------------------------------------------
# canonical frames


def canonical_coordinates(w, ordered_gens):
    """Coordinates of w in an ordered simplicial generator frame."""
    coeffs = solve_in_basis(tuple(tuple(g) for g in ordered_gens), tuple(w))
    if coeffs is None or any(c < 0 for c in coeffs):
        raise ValueError("point outside host cone")
    return coeffs


def initial_frames_plain(cx: Complex) -> dict:
    """Plain-mode frames: input generator order (ascending ray id)."""
    return {c: tuple(sorted(c)) for c in cx.maximal_cones}


def initial_frames_barycentric(cx: Complex, bcx: Complex) -> dict:
    """Frames on the barycentric subdivision, ordered by source-cone dimension."""
    bij = barycentric_edge_bijection(cx, bcx)
    dim_of = {rid: cx.dim(host) for rid, host in bij.items()}
    frames = {}
    for mc in bcx.maximal_cones:
        dims = sorted(dim_of[i] for i in mc)
        if len(set(dims)) != len(dims):
            raise ValueError("barycentric cone with repeated source dimensions")
        frames[mc] = tuple(sorted(mc, key=lambda i: dim_of[i]))
    return frames


def frames_coherent(frames: dict) -> bool:
    """Shared rays of two framed cones appear in the same relative order.

    Holds for the initial frames (dimension labels are intrinsic per
    ray).  Slot inheritance cannot keep it between siblings of one star
    in rank >= 3 — the new ray takes the dropped slot, which differs per
    sibling — so later rounds only guarantee the per-host frames and
    their equivariance, which is all the selection needs.
    """
    items = sorted(frames.items(), key=lambda kv: sorted(kv[0]))
    for i, (c1, f1) in enumerate(items):
        for c2, f2 in items[i + 1:]:
            shared = c1 & c2
            if len(shared) < 2:
                continue
            o1 = [r for r in f1 if r in shared]
            o2 = [r for r in f2 if r in shared]
            if o1 != o2:
                return False
    return True


def frames_equivariant(frames: dict, action) -> bool:
    """The group must carry the frame of a cone onto the image's frame."""
    for perm, cmap in zip(action.ray_permutations, action.cone_permutations):
        for mc, frame in frames.items():
            image = cmap[mc]
            if tuple(perm[i] for i in frame) != frames[image]:
                return False
    return True


def _star_with_frames(cx: Complex, frames: dict, center):
    """Star subdivide and inherit frames: the center takes the replaced slot."""
    out = star_subdivide(cx, center)
    if out is cx:
        return out, frames
    wid = len(cx.rays)
    new_frames = {}
    for mc in out.maximal_cones:
        if wid not in mc:
            new_frames[mc] = frames[mc]
            continue
        base = mc - {wid}
        parent = None
        for h, fr in frames.items():
            if len(h) == len(base) + 1 and base < h and cx.contains_point(h, center):
                parent = (h, fr)
                break
        assert parent is not None, "no framed parent for subdivision piece"
        h, fr = parent
        dropped = next(iter(h - base))
        slot = fr.index(dropped)
        new_frames[mc] = fr[:slot] + (wid,) + fr[slot + 1:]
    return out, new_frames


# ---------------------------------------------------------------------------
# center selection


def select_centers(cx: Complex, frames: dict, elements=None):
    """Lexicographically minimal parallelepiped points over non-smooth cones.

    Returns (coordinate tuple, ((point, host maximal cone), ...)); every
    witness realizing the minimal canonical coordinate tuple is returned,
    and the set is stable under the group action.
    """
    if not is_simplicial(cx):
        raise ValueError("not simplicial")
    if is_smooth(cx):
        raise ValueError("nothing to select")
    best = None
    chosen = []
    for mc in cx.maximal_cones:
        frame = frames[mc]
        gens = tuple(cx.rays[i] for i in frame)
        if cone_index(gens) == 1:
            continue
        for point, coords in parallelepiped_points(gens):
            if best is None or coords < best:
                best = coords
                chosen = [(point, mc)]
            elif coords == best:
                chosen.append((point, mc))
    chosen = tuple(sorted(set(chosen), key=lambda pc: (pc[0], sorted(pc[1]))))
    if elements is not None:
        action = group_action(cx, elements)
        pts = {p for p, _ in chosen}
        for m in action.elements:
            assert {tuple(mat_vec(m, p)) for p in pts} == pts, (
                "selected centers are not stable under the group"
            )
    return best, chosen


# ---------------------------------------------------------------------------
# certificate data


@dataclass(frozen=True)
class BatchStep:
    """One simultaneous centered subdivision with its order-function data."""

    centers: tuple  # ((vector, host cone ray ids), ...) in application order
    scale: int
    dip: int
    multiplier: int  # composition multiplier folding this step into the stage


@dataclass(frozen=True)
class StageRecord:
    kind: str  # "barycentric" | "barycentric-direct" | "centered"
    steps: tuple
    multiplier: int  # composition multiplier folding this stage into the total
    values: tuple[int, ...]  # stage order-function values on subdivision rays
    new_rays: tuple  # ((ray id, generator), ...)
    input_hash: str
    output_hash: str


@dataclass
class ResolutionCertificate:
    mode: str
    input_complex: Complex
    group: tuple
    stages: tuple
    composite: OrderFunction
    final: Complex
    flags: dict
    trace: tuple  # ((label, max_index or None, total_index or None), ...)

    @property
    def ok(self) -> bool:
        return all(self.flags.values())


FLAG_NAMES = (
    "smooth",
    "simplicial",
    "subdivision_of_input",
    "equivariant",
    "g_strict",
    "ord_positive",
    "ord_integral",
    "ord_strictly_convex",
    "ord_linearity_matches_final",
    "ord_g_invariant",
)


def certificate_flags(input_cx, elements, final, composite) -> dict:
    """Re-derive every certificate flag from scratch (nothing trusted)."""
    flags = {}
    action_rep = verify_action(final, elements)
    flags["smooth"] = is_smooth(final)
    flags["simplicial"] = is_simplicial(final)
    flags["subdivision_of_input"] = bool(is_subdivision(final, input_cx))
    flags["equivariant"] = flags["subdivision_of_input"] and action_rep.ok
    flags["g_strict"] = action_rep.ok and check_G_strict(final, elements).ok
    rep = verify_order_axioms(composite)
    flags["ord_positive"] = rep.positive
    flags["ord_integral"] = rep.integral
    flags["ord_strictly_convex"] = rep.convex and rep.strict
    flags["ord_linearity_matches_final"] = rep.ok and same_complex(
        linearity_domains(composite), final
    )
    inv = action_rep.ok
    for perm in action_rep.ray_permutations:
        inv = inv and all(
            composite.ray_values[perm[i]] == composite.ray_values[i]
            for i in range(len(final.rays))
        )
    flags["ord_g_invariant"] = inv
    return flags


# ---------------------------------------------------------------------------
# direct barycentric order function (non-simplicial inputs)


def _consistent_base_values(cx: Complex):
    """Positive integer ray values extending linearly over every cone."""
    nrays = len(cx.rays)
    constraints = []
    for c in cx.maximal_cones:
        ids = sorted(c)
        gens = cx.generators(c)
        if len(ids) == cx.dim(c):
            continue
        for z in rational_nullspace(transpose(gens), n=len(ids)):
            row = [0] * nrays
            for zi, rid in zip(z, ids):
                row[rid] = zi
            constraints.append(tuple(row))
    if not constraints:
        return tuple(1 for _ in range(nrays))
    basis = rational_nullspace(constraints, n=nrays)
    from itertools import product as iproduct

    for bound in range(1, 6):
        for combo in iproduct(range(-bound, bound + 1), repeat=len(basis)):
            y = [sum(c * b[i] for c, b in zip(combo, basis)) for i in range(nrays)]
            if all(v > 0 for v in y):
                return tuple(y)
    raise ValueError("no positive per-cone-linear base values exist for this complex")


def direct_barycentric_order_function(cx: Complex, bcx: Complex):
    """Order function for B(cx) built directly from dimension-graded dips.

    Used when the input has non-simplicial cones, where the cascade of
    centered order functions is not representable.  Values take the form
    L * base(ray) - a * (2^dim - 1) with (L, a) searched until the axiom
    check passes with strict bends.
    """
    bij = barycentric_edge_bijection(cx, bcx)
    y = _consistent_base_values(cx)
    base_val = {}
    dim_of = {}
    for rid, host in bij.items():
        # the base function is linear on the host, so its value at the
        # barycenter is the edge-value sum divided by the primitivization
        # factor of the generator sum
        gens = cx.generators(host)
        total = tuple(sum(col) for col in zip(*gens))
        factor = math.gcd(*[abs(c) for c in total])
        base_val[rid] = Fraction(sum(y[i] for i in host), factor)
        dim_of[rid] = cx.dim(host)
    denom = math.lcm(*[Fraction(v).denominator for v in base_val.values()])
    m = max(dim_of.values())
    for a in range(1, 64):
        alpha = {d: a * (2**d - 1) for d in range(1, m + 1)}
        lmin = max(
            (alpha[dim_of[r]] + 1) / Fraction(base_val[r]) for r in base_val
        )
        lstart = denom * math.ceil(Fraction(lmin) / denom)
        for l in range(lstart, lstart + 64 * denom, denom):
            values = {
                rid: int(l * base_val[rid]) - alpha[dim_of[rid]] for rid in base_val
            }
            if any(v <= 0 for v in values.values()):
                continue
            cand = OrderFunction(cx, bcx, values)
            rep = verify_order_axioms(cand, check_subdivision=False)
            if rep.ok and rep.strict and rep.positive:
                return cand, l, a
    raise ValueError("scale insufficient")


# ---------------------------------------------------------------------------
# the pipeline


def _complex_hash(cx: Complex) -> str:
    from .fanio import complex_hash

    return complex_hash(cx)


def resolve_equivariant(cx: Complex, elements=None, mode: str = "canonical") -> ResolutionCertificate:
    """Refine the complex until smooth, equivariantly, with a certificate.

    Canonical mode starts with the barycentric subdivision and then
    repeatedly takes simultaneous centered subdivisions at the selected
    lattice points; plain mode (trivial group, simplicial input only)
    runs just the loop with the input generator order as frame.
    """
    if elements is None:
        elements = trivial_group(cx.ambient_rank)
    elements = tuple(tuple(tuple(int(v) for v in row) for row in m) for m in elements)
    if mode not in ("canonical", "plain"):
        raise ValueError(f"unknown mode {mode!r}")
    group_action(cx, elements)  # raises when the action is invalid

    stages = []
    trace = []

    def trace_row(label, c):
        if is_simplicial(c):
            trace.append((label, max_index(c), total_index(c)))
        else:
            trace.append((label, None, None))

    trace_row("input", cx)

    if mode == "plain":
        if len(elements) != 1:
            raise ValueError("plain mode requires the trivial group")
        if not is_simplicial(cx):
            raise ValueError("not simplicial")
        cur = cx
        frames = initial_frames_plain(cx)
        composite = None
    else:
        if is_simplicial(cx):
            bcx, batches = _barycentric_cascade(cx)
            stage_ord = None
            steps = []
            for centers, base, after in batches:
                ord_k, scale, dip = search_centered_order_function(base, centers)
                assert ord_k.subdivision == after
                if stage_ord is None:
                    stage_ord, mult = ord_k, 1
                else:
                    stage_ord, mult = compose_with_multiplier(stage_ord, ord_k)
                steps.append(
                    BatchStep(
                        tuple((c, tuple(sorted(h))) for c, h in centers),
                        scale,
                        dip,
                        mult,
                    )
                )
            if stage_ord is None:
                stage_ord = OrderFunction(cx, cx, {i: 1 for i in range(len(cx.rays))})
            kind = "barycentric"
        else:
            bcx = barycentric_subdivision(cx)
            stage_ord, scale, dip = direct_barycentric_order_function(cx, bcx)
            steps = [BatchStep((), scale, dip, 1)]
            kind = "barycentric-direct"
        stages.append(
            StageRecord(
                kind=kind,
                steps=tuple(steps),
                multiplier=1,
                values=stage_ord.ray_values,
                new_rays=tuple(
                    (i, bcx.rays[i]) for i in range(len(cx.rays), len(bcx.rays))
                ),
                input_hash=_complex_hash(cx),
                output_hash=_complex_hash(bcx),
            )
        )
        cur = bcx
        frames = initial_frames_barycentric(cx, bcx)
        composite = stage_ord
        trace_row("stage1", cur)

    rounds = 0
    while not is_smooth(cur):
        rounds += 1
        if rounds > ROUND_CAP:
            raise RuntimeError("resolution did not terminate within the round cap")
        _, selected = select_centers(cur, frames, elements)
        centers = sorted({primitive(p) for p, _ in selected})
        centers_with_hosts = [(c, cur.minimal_cone_containing(c)) for c in centers]
        # simultaneity guard: distinct centers must not share a cone
        for i, a in enumerate(centers):
            for b in centers[i + 1:]:
                if any(
                    cur.contains_point(mc, a) and cur.contains_point(mc, b)
                    for mc in cur.maximal_cones
                ):
                    raise ValueError("orbit not simultaneous-safe")

        hosts_idx = {
            mc: cone_index(cur.generators(mc))
            for mc in cur.maximal_cones
            if any(cur.contains_point(mc, c) for c in centers)
        }
        ord_k, scale, dip = search_centered_order_function(cur, centers_with_hosts)
        nxt = ord_k.subdivision
        new_frames = frames
        stepped = cur
        for c in centers:
            stepped, new_frames = _star_with_frames(stepped, new_frames, c)
        assert stepped == nxt
        for mc, frame in new_frames.items():
            assert frozenset(frame) == mc, "frame inconsistency"
        assert frames_equivariant(new_frames, group_action(nxt, elements)), (
            "frame inconsistency"
        )

        # the measure must drop on every subdivided cone's descendants
        for mc, idx in hosts_idx.items():
            descendants = [
                d
                for d in nxt.maximal_cones
                if all(cur.contains_point(mc, g) for g in nxt.generators(d))
                and nxt.dim(d) == cur.dim(mc)
            ]
            dmax = max(cone_index(nxt.generators(d)) for d in descendants)
            assert dmax < idx, "termination measure failed to decrease"

        if composite is None:
            composite, mult = ord_k, 1
        else:
            composite, mult = compose_with_multiplier(composite, ord_k)
        stages.append(
            StageRecord(
                kind="centered",
                steps=(
                    BatchStep(
                        tuple((c, tuple(sorted(h))) for c, h in centers_with_hosts),
                        scale,
                        dip,
                        1,
                    ),
                ),
                multiplier=mult,
                values=ord_k.ray_values,
                new_rays=tuple(
                    (i, nxt.rays[i]) for i in range(len(cur.rays), len(nxt.rays))
                ),
                input_hash=_complex_hash(cur),
                output_hash=_complex_hash(nxt),
            )
        )
        cur = nxt
        frames = new_frames
        trace_row(f"round{rounds}", cur)

    if composite is None:
        composite = OrderFunction(cx, cx, {i: 1 for i in range(len(cx.rays))})

    flags = certificate_flags(cx, elements, cur, composite)
    if not all(flags.values()):
        bad = [k for k, v in flags.items() if not v]
        raise RuntimeError(f"resolution verification failed: {bad}")
    return ResolutionCertificate(
        mode=mode,
        input_complex=cx,
        group=elements,
        stages=tuple(stages),
        composite=composite,
        final=cur,
        flags=flags,
        trace=tuple(trace),
    )

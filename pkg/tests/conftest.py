"""Shared builders and independent oracles for the test suite."""

from fractions import Fraction
from itertools import combinations, product

import pytest

from equifan.complexes import Complex
from equifan.lattice import solve_in_basis

# permutation / sign matrices used as candidate group generators
SWAP2 = ((0, 1), (1, 0))
ROT2 = ((0, -1), (1, 0))
NEG2 = ((-1, 0), (0, -1))
CYC3 = ((0, 0, 1), (1, 0, 0), (0, 1, 0))
SWAP3_01 = ((0, 1, 0), (1, 0, 0), (0, 0, 1))
SWAP3_12 = ((1, 0, 0), (0, 0, 1), (0, 1, 0))


def orthant(d):
    rays = [tuple(1 if i == j else 0 for j in range(d)) for i in range(d)]
    return Complex.from_maximal_cones(d, rays, [list(range(d))])


def p2_fan():
    return Complex.from_maximal_cones(2, [(1, 0), (0, 1), (-1, -1)], [[0, 1], [1, 2], [2, 0]])


def complete_2d_fan():
    return Complex.from_maximal_cones(
        2, [(1, 0), (0, 1), (-1, 0), (0, -1)], [[0, 1], [1, 2], [2, 3], [3, 0]]
    )


def singular_cone_2d(r):
    return Complex.from_maximal_cones(2, [(1, 0), (1, r)], [[0, 1]])


def square_cone():
    return Complex.from_maximal_cones(
        3, [(1, 1, 1), (-1, 1, 1), (-1, -1, 1), (1, -1, 1)], [[0, 1, 2, 3]]
    )


def skew_quad_cone():
    return Complex.from_maximal_cones(
        3, [(1, 0, 1), (0, 1, 1), (-1, 0, 1), (0, -1, 2)], [[0, 1, 2, 3]]
    )


def pentagon_cone():
    return Complex.from_maximal_cones(
        3,
        [(1, 0, 1), (0, 1, 1), (-1, 1, 1), (-1, -1, 1), (1, -1, 1)],
        [[0, 1, 2, 3, 4]],
    )


def corpus():
    """The 20-complex corpus used by the cross-construction criteria."""
    from equifan.subdivide import barycentric_subdivision

    cases = [
        ("ray-1d", Complex.from_maximal_cones(1, [(1,)], [[0]])),
        ("orthant-2", orthant(2)),
        ("orthant-3", orthant(3)),
        ("orthant-4", orthant(4)),
        ("p2-fan", p2_fan()),
        ("complete-2d", complete_2d_fan()),
        ("singular-r2", singular_cone_2d(2)),
        ("singular-r3", singular_cone_2d(3)),
        ("singular-r5", singular_cone_2d(5)),
        (
            "two-cones-shared-ray",
            Complex.from_maximal_cones(2, [(1, 0), (1, 2), (0, 1)], [[0, 1], [1, 2]]),
        ),
        ("square-cone", square_cone()),
        ("skew-quad-cone", skew_quad_cone()),
        (
            "singular-3d",
            Complex.from_maximal_cones(3, [(1, 0, 0), (0, 1, 0), (1, 1, 2)], [[0, 1, 2]]),
        ),
        (
            "two-3-cones",
            Complex.from_maximal_cones(
                3,
                [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, -1)],
                [[0, 1, 2], [0, 1, 3]],
            ),
        ),
        (
            "weighted-p112",
            Complex.from_maximal_cones(2, [(1, 0), (0, 1), (-1, -2)], [[0, 1], [1, 2], [2, 0]]),
        ),
        (
            "mixed-dim",
            Complex.from_maximal_cones(2, [(1, 0), (0, 1), (-1, -3)], [[0, 1], [2]]),
        ),
        (
            "opposite-cones",
            Complex.from_maximal_cones(2, [(1, 0), (0, 1), (-1, 0), (0, -1)], [[0, 1], [2, 3]]),
        ),
        (
            "cone-plus-flap",
            Complex.from_maximal_cones(
                3, [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, -1, 0)], [[0, 1, 2], [0, 3]]
            ),
        ),
        ("pentagon-cone", pentagon_cone()),
        ("subdivided-orthant", barycentric_subdivision(orthant(2))),
    ]
    assert len(cases) == 20
    return cases


def candidate_actions(cx):
    """Candidate symmetry groups whose action on cx actually verifies."""
    from equifan.groups import generate_group, verify_action

    if cx.ambient_rank == 2:
        candidates = [("swap", [SWAP2])]
    elif cx.ambient_rank == 3:
        candidates = [("3-cycle", [CYC3]), ("s3", [CYC3, SWAP3_01])]
    else:
        candidates = []
    out = []
    for name, gens in candidates:
        elements = generate_group(gens)
        if verify_action(cx, elements).ok:
            out.append((name, elements))
    return out


# ---------------------------------------------------------------------------
# independent oracles


def random_action_pairs(rng, count, require_strict=False):
    """Deterministic stream of (complex, verified action) pairs.

    With require_strict the stream yields only pairs whose action passes
    the strictness check; a barycentric step guarantees a steady supply.
    """
    from equifan.groups import (
        check_G_strict,
        equivariant_star_subdivide,
        generate_group,
        verify_action,
    )
    from equifan.lattice import primitive
    from equifan.subdivide import barycentric_subdivision

    pairs = []
    attempts = 0
    while len(pairs) < count and attempts < 40 * count:
        attempts += 1
        rank = rng.choice([2, 3])
        if rank == 2:
            base = rng.choice([orthant(2), complete_2d_fan()])
            gens = rng.choice([[SWAP2], [ROT2], [NEG2], [SWAP2, NEG2]])
        else:
            base = orthant(3)
            gens = rng.choice([[CYC3], [SWAP3_01], [SWAP3_12], [CYC3, SWAP3_01]])
        elements = generate_group(gens)
        if not verify_action(base, elements).ok:
            continue
        cx = base
        steps = ["barycentric"] if rng.random() < 0.7 else []
        steps += [rng.choice(["none", "barycentric", "orbit-star"]) for _ in range(rng.randint(0, 2))]
        for step in steps:
            if step == "barycentric":
                if len(cx.maximal_cones) > 12:
                    continue  # keep the corpus at desk scale
                cx = barycentric_subdivision(cx)
            elif step == "orbit-star":
                mcs = sorted(cx.maximal_cones, key=sorted)
                mc = mcs[rng.randrange(len(mcs))]
                weights = [rng.randint(1, 3) for _ in mc]
                pt = primitive(
                    tuple(
                        sum(w * g[j] for w, g in zip(weights, cx.generators(mc)))
                        for j in range(cx.ambient_rank)
                    )
                )
                try:
                    cx = equivariant_star_subdivide(cx, pt, elements)
                except ValueError:
                    continue
        if not verify_action(cx, elements).ok:
            continue
        if require_strict and not check_G_strict(cx, elements).ok:
            continue
        pairs.append((cx, elements))
    return pairs


def box_parallelepiped_points(gens):
    """Brute-force oracle: scan integer points of the bounding box.

    Enumerates the half-open parallelepiped {sum a_i g_i : 0 <= a_i < 1}
    by exact membership tests on every lattice point of the box spanned
    by the 0/1-corner sums.
    """
    gens = [tuple(g) for g in gens]
    n = len(gens[0])
    corners = [
        tuple(sum(eps[i] * gens[i][j] for i in range(len(gens))) for j in range(n))
        for eps in product((0, 1), repeat=len(gens))
    ]
    lo = [min(c[j] for c in corners) for j in range(n)]
    hi = [max(c[j] for c in corners) for j in range(n)]
    found = []
    for point in product(*[range(lo[j], hi[j] + 1) for j in range(n)]):
        coeffs = solve_in_basis(tuple(gens), point)
        if coeffs is None:
            continue
        if all(0 <= a < 1 for a in coeffs) and any(a > 0 for a in coeffs):
            found.append((tuple(point), tuple(coeffs)))
    found.sort(key=lambda pc: pc[1])
    return found


def subset_faces_oracle(cx, cone):
    """Faces of a simplicial cone are exactly the subsets of its rays."""
    cone = sorted(cone)
    return {frozenset(sub) for k in range(len(cone) + 1) for sub in combinations(cone, k)}


def interior_point(cx, cone, weights=None):
    """A rational point in the relative interior of a cone."""
    ids = sorted(cone)
    if weights is None:
        weights = [1] * len(ids)
    gens = cx.generators(cone)
    return tuple(
        sum(Fraction(w) * g[j] for w, g in zip(weights, gens))
        for j in range(cx.ambient_rank)
    )


@pytest.fixture
def orthant2():
    return orthant(2)


@pytest.fixture
def orthant3():
    return orthant(3)

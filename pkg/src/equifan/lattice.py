"""Exact integer lattice arithmetic.

Everything here works over arbitrary-precision integers and exact
rationals; there is no floating point anywhere.  Vectors are tuples of
ints, matrices are tuples of row tuples.
"""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import product

Vec = tuple[int, ...]
Mat = tuple[tuple[int, ...], ...]


def primitive(v) -> Vec:
    """Primitive lattice point on the ray through v (divide out the gcd)."""
    v = tuple(int(c) for c in v)
    if all(c == 0 for c in v):
        raise ValueError("zero ray")
    g = math.gcd(*[abs(c) for c in v])
    return tuple(c // g for c in v)


def identity_matrix(n: int) -> Mat:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def transpose(m) -> Mat:
    return tuple(zip(*[tuple(r) for r in m])) if m else ()


def mat_vec(m, v) -> Vec:
    return tuple(sum(row[j] * v[j] for j in range(len(v))) for row in m)


def mat_mul(a, b) -> Mat:
    bt = list(zip(*b))
    return tuple(
        tuple(sum(ra[k] * cb[k] for k in range(len(ra))) for cb in bt) for ra in a
    )


def det(m) -> int:
    """Exact determinant of a square integer matrix (fraction-free Bareiss)."""
    a = [list(r) for r in m]
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def is_unimodular(m) -> bool:
    rows = tuple(tuple(r) for r in m)
    return (
        len(rows) > 0
        and all(len(r) == len(rows) for r in rows)
        and det(rows) in (1, -1)
    )


# ---------------------------------------------------------------------------
# rational Gaussian elimination helpers

def rank(vectors) -> int:
    """Rank over Q of a list of integer (or rational) vectors."""
    rows = [[Fraction(c) for c in v] for v in vectors]
    r = 0
    ncols = len(rows[0]) if rows else 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][col] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        for i in range(len(rows)):
            if i != r and rows[i][col] != 0:
                f = rows[i][col] / rows[r][col]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        r += 1
        if r == len(rows):
            break
    return r


def solve_in_basis(gens, x):
    """Solve x = sum c_i * gens_i exactly.

    Returns the tuple of Fraction coefficients, or None when x is not in
    the linear span of gens.  gens must be linearly independent.
    """
    k = len(gens)
    n = len(x)
    # augmented system: columns are the generators, rhs is x
    rows = [[Fraction(gens[i][j]) for i in range(k)] + [Fraction(x[j])] for j in range(n)]
    pivots = []
    r = 0
    for col in range(k):
        piv = next((i for i in range(r, n) if rows[i][col] != 0), None)
        if piv is None:
            raise ValueError("not simplicial")  # dependent generators
        rows[r], rows[piv] = rows[piv], rows[r]
        for i in range(n):
            if i != r and rows[i][col] != 0:
                f = rows[i][col] / rows[r][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append((r, col))
        r += 1
    # inconsistent rows mean x is outside the span
    for i in range(r, n):
        if rows[i][k] != 0:
            return None
    coeffs = [Fraction(0)] * k
    for row, col in pivots:
        coeffs[col] = rows[row][k] / rows[row][col]
    return tuple(coeffs)


def rational_nullspace(vectors, n=None):
    """Primitive integer basis of {u : v . u = 0 for all v in vectors}."""
    if not vectors and n is None:
        raise ValueError("ambient dimension required for empty input")
    ncols = n if n is not None else len(vectors[0])
    rows = [[Fraction(c) for c in v] for v in vectors]
    pivots = {}
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][col] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        for i in range(len(rows)):
            if i != r and rows[i][col] != 0:
                f = rows[i][col] / rows[r][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots[col] = r
        r += 1
    basis = []
    free_cols = [c for c in range(ncols) if c not in pivots]
    for fc in free_cols:
        vec = [Fraction(0)] * ncols
        vec[fc] = Fraction(1)
        for col, row in pivots.items():
            vec[col] = -rows[row][fc] / rows[row][col]
        denom = math.lcm(*[f.denominator for f in vec])
        ints = [int(f * denom) for f in vec]
        basis.append(primitive(ints))
    return basis


# ---------------------------------------------------------------------------
# Smith normal form

def _swap_rows(a, u, i, j):
    a[i], a[j] = a[j], a[i]
    u[i], u[j] = u[j], u[i]


def _swap_cols(a, v, i, j):
    for row in a:
        row[i], row[j] = row[j], row[i]
    for row in v:
        row[i], row[j] = row[j], row[i]


def _add_row(a, u, dst, src, q):
    # row_dst += q * row_src
    a[dst] = [x + q * y for x, y in zip(a[dst], a[src])]
    u[dst] = [x + q * y for x, y in zip(u[dst], u[src])]


def _add_col(a, v, dst, src, q):
    for row in a:
        row[dst] += q * row[src]
    for row in v:
        row[dst] += q * row[src]


def smith_normal_form(m):
    """Smith normal form of an integer matrix.

    Returns (D, U, V) with U*M*V = D, D diagonal with d_i | d_{i+1} and
    U, V unimodular.  The contract is re-checked by exact multiplication
    before returning.
    """
    M = tuple(tuple(int(c) for c in row) for row in m)
    nrows = len(M)
    ncols = len(M[0]) if nrows else 0
    a = [list(r) for r in M]
    u = [list(r) for r in identity_matrix(nrows)]
    v = [list(r) for r in identity_matrix(ncols)]

    t = 0
    while t < min(nrows, ncols):
        # choose the nonzero entry of smallest magnitude as pivot
        pivot = None
        for i in range(t, nrows):
            for j in range(t, ncols):
                if a[i][j] != 0 and (pivot is None or abs(a[i][j]) < abs(a[pivot[0]][pivot[1]])):
                    pivot = (i, j)
        if pivot is None:
            break
        while True:
            i, j = pivot
            if i != t:
                _swap_rows(a, u, t, i)
            if j != t:
                _swap_cols(a, v, t, j)
            p = a[t][t]
            dirty = False
            for i in range(t + 1, nrows):
                if a[i][t] != 0:
                    _add_row(a, u, i, t, -(a[i][t] // p))
                    if a[i][t] != 0:
                        dirty = True
            for j in range(t + 1, ncols):
                if a[t][j] != 0:
                    _add_col(a, v, j, t, -(a[t][j] // p))
                    if a[t][j] != 0:
                        dirty = True
            if not dirty:
                # pivot must divide the remaining block for the divisor chain
                culprit = None
                for i in range(t + 1, nrows):
                    for j in range(t + 1, ncols):
                        if a[i][j] % p != 0:
                            culprit = i
                            break
                    if culprit is not None:
                        break
                if culprit is None:
                    break
                _add_row(a, u, t, culprit, 1)
            pivot = min(
                ((i, j) for i in range(t, nrows) for j in range(t, ncols) if a[i][j] != 0),
                key=lambda ij: abs(a[ij[0]][ij[1]]),
            )
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
        t += 1

    D = tuple(tuple(r) for r in a)
    U = tuple(tuple(r) for r in u)
    V = tuple(tuple(r) for r in v)
    assert mat_mul(mat_mul(U, M), V) == D, "SNF contract violated"
    assert is_unimodular(U) and is_unimodular(V), "SNF transform not unimodular"
    diag = [D[i][i] for i in range(min(nrows, ncols))]
    for x, y in zip(diag, diag[1:]):
        assert y % x == 0 if x != 0 else y == 0, "SNF divisibility violated"
    return D, U, V


def elementary_divisors(vectors):
    """Diagonal of the SNF of the matrix whose rows are the given vectors."""
    D, _, _ = smith_normal_form(vectors)
    return tuple(D[i][i] for i in range(min(len(D), len(D[0]) if D else 0)))


def cone_index(gens) -> int:
    """Lattice index of a simplicial cone.

    The index of the subgroup generated by gens inside the saturation of
    their span; 1 exactly when the generators extend to a basis of the
    ambient lattice intersected with the span.
    """
    gens = tuple(tuple(g) for g in gens)
    if not gens:
        return 1
    k, n = len(gens), len(gens[0])
    if k > n:
        raise ValueError("not simplicial")
    divs = elementary_divisors(gens)
    if len(divs) < k or any(d == 0 for d in divs):
        raise ValueError("not simplicial")
    idx = 1
    for d in divs:
        idx *= d
    return idx


def is_smooth_cone(gens) -> bool:
    """True when the simplicial cone spanned by gens has index 1."""
    return cone_index(gens) == 1


def parallelepiped_points(gens):
    """Nonzero lattice points in the half-open fundamental parallelepiped.

    Returns [(point, coords), ...] where point = sum a_i * gens_i with
    all a_i in [0, 1), sorted lexicographically by the coordinate tuple.
    The list has exactly cone_index(gens) - 1 entries.

    Enumeration goes through the SNF quotient group rather than a
    bounding-box scan, so the cost is proportional to the index.
    """
    gens = tuple(tuple(g) for g in gens)
    k = len(gens)
    n = len(gens[0]) if gens else 0
    if k > n:
        raise ValueError("not simplicial")
    D, U, V = smith_normal_form(gens)
    divs = [D[i][i] for i in range(k)] if k <= min(len(D), n) else []
    if len(divs) < k or any(d == 0 for d in divs):
        raise ValueError("not simplicial")
    points = []
    for t in product(*[range(d) for d in divs]):
        if all(ti == 0 for ti in t):
            continue
        # coset representative in generator coordinates: a = (t_i/d_i) . U
        s = [Fraction(ti, di) for ti, di in zip(t, divs)]
        a = [sum(s[i] * U[i][j] for i in range(k)) for j in range(k)]
        coords = tuple(x - (x.numerator // x.denominator) for x in a)
        w = []
        for j in range(n):
            c = sum(coords[i] * gens[i][j] for i in range(k))
            assert c.denominator == 1
            w.append(int(c))
        points.append((tuple(w), coords))
    points.sort(key=lambda pc: pc[1])
    assert len(points) == cone_index(gens) - 1
    return points

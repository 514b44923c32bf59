"""Order functions: convexity certificates for subdivisions.

Shows how integer ray values on a simplicial subdivision encode a
piecewise-linear function, how the bend arithmetic decides convexity,
and how composing the functions of successive centered subdivisions
certifies the whole chain.
Run directly: python demos/02_order_functions.py
"""

from equifan import (
    Complex,
    OrderFunction,
    compose_order_functions,
    evaluate,
    linearity_domains,
    same_complex,
    star_order_function,
    star_subdivide,
    verify_order_axioms,
)

orthant = Complex.from_maximal_cones(2, [(1, 0), (0, 1)], [[0, 1]])
starred = star_subdivide(orthant, (1, 1))

# The canonical function of the star: old rays at the scale, the new ray
# one below the linear extension (2 + 2 - 1 = 3).
f = star_order_function(orthant, (1, 1), 2)
print("star order function values:", f.ray_values)
rep = verify_order_axioms(f)
print("axioms hold:", rep.ok, " strict bends:", rep.strict, " positive:", rep.positive)
print("value at (2,3):", evaluate(f, (2, 3)))

# Its linearity domains recover exactly the subdivision it certifies.
print("linearity domains = subdivision:", linearity_domains(f) == starred)

# A flat assignment (the linear form x + y) merges back to the orthant.
flat = OrderFunction(orthant, starred, {0: 1, 1: 1, 2: 2})
print("\nflat values:", flat.ray_values)
print("strict:", verify_order_axioms(flat).strict)
print("domains merge to the orthant:", same_complex(linearity_domains(flat), orthant))

# A value above the linear extension bends the wrong way.
broken = OrderFunction(orthant, starred, {0: 1, 1: 1, 2: 3})
print("\nbroken values:", broken.ray_values)
print("convex:", verify_order_axioms(broken).convex)

# Chains compose: star at (1,1), then at (2,1); the composite certifies
# the two-step subdivision in one function.
second = star_order_function(starred, (2, 1), 2)
comp = compose_order_functions(f, second)
print("\ncomposite values:", comp.ray_values)
rep = verify_order_axioms(comp)
print("composite strict and positive:", rep.strict and rep.positive)
print(
    "composite domains = final subdivision:",
    same_complex(linearity_domains(comp), second.subdivision),
)

"""Equivariant smooth refinement end to end.

A finite group acts on a singular complex; the pipeline subdivides it
until every cone has index 1 while keeping the action intact, and emits
a certificate that re-verifies from scratch.
Run directly: python demos/03_equivariant_resolution.py
"""

from equifan import (
    Complex,
    check_G_strict,
    check_fixed_cone_identity,
    generate_group,
    quotient_structure,
    resolve_equivariant,
    verify_action,
)
from equifan.fanio import (
    fan_from_complex,
    parse_certificate,
    verify_certificate,
    write_certificate,
)

# Two index-4 cones swapped by the reflection (x,y) -> (y,x).
swap = ((0, 1), (1, 0))
cx = Complex.from_maximal_cones(2, [(1, 0), (1, -4), (0, 1), (-4, 1)], [[0, 1], [2, 3]])
group = generate_group([swap])
print("group order:", len(group))
print("acts on the complex:", verify_action(cx, group).ok)
print("strict before refinement:", check_G_strict(cx, group).ok)

cert = resolve_equivariant(cx, group, mode="canonical")
print("\nmeasure trace (label, max index, total index):")
for row in cert.trace:
    print("  ", row)
print("stages:", [s.kind for s in cert.stages])
print("final complex:", cert.final)
print("all flags verified:", cert.ok)
for name, value in cert.flags.items():
    print(f"  {name}: {value}")

# The composite order function is invariant: swapped rays share values.
print("\ncomposite values by ray:")
for rid, v in enumerate(cert.composite.ray_values):
    print(f"  {cert.final.rays[rid]} -> {v}")

# After refinement the action is strict, so the quotient structure exists.
print("\nfixed-cone identity on the result:", check_fixed_cone_identity(cert.final, group).ok)
q = quotient_structure(cert.final, group)
print("ray orbits:", q.ray_orbits)
print("maximal cone orbit representatives:", [sorted(c) for c in q.maximal_representatives])

# Certificates round-trip through text and re-verify without trusting
# any stored flag.
fan = fan_from_complex(cx, [swap])
text = write_certificate(cert, fan)
violations = verify_certificate(parse_certificate(text), fan)
print("\ncertificate re-verification violations:", violations or "none")

# Tampering with any single field is caught with a named violation.
lines = text.splitlines()
idx = next(i for i, l in enumerate(lines) if lines[i - 1].startswith("composite"))
rid, val = lines[idx].split()
lines[idx] = f"{rid} {int(val) + 1}"
tampered = verify_certificate(parse_certificate("\n".join(lines) + "\n"), fan)
print("after tampering one value:", tampered)

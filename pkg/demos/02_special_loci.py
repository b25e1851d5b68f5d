"""Where a map loses information, and whether orbits bring it back.

For (x + y, 1/x) the three exceptional lines of f are listed with the points
they collapse to, then each collapse point is pushed forward.  When an orbit
lands on an indeterminacy point of f the singularity is confined; the AS
diagnostic records those collisions.  Run: python3 demos/02_special_loci.py
"""

from birmap.geometry import as_diagnostic, orbit_of_point, special_loci
from birmap.maps import ParameterTuple as P, build_family_map, family_projective, invert_family

params = P((0, 1, 1), (1, 0, 0), (0, 1, 0))
print("f      =", build_family_map(params))
print("f^-1   =", invert_family(params))

loci = special_loci(params)
print("F      =", family_projective(params))

print("\nexceptional lines of F and the points they collapse to:")
for label, line in loci.exceptional.items():
    if label in loci.collapse_targets:
        target = loci.collapse_targets[label]
        print(f"  {label} {line}  ->  {target} {loci.indeterminacy_inv[target]}")
    else:
        print(f"  {label} {line}")
print("indeterminacy points of F:", ", ".join(f"{k} {v}" for k, v in loci.indeterminacy_f.items()))

F = family_projective(params)
print("\nforward orbits of the collapse points:")
for target in loci.collapse_targets.values():
    orbit = orbit_of_point(F, loci.indeterminacy_inv[target], loci, 6)
    trail = " -> ".join(str(p) for p in orbit.points)
    if orbit.collided:
        fate = f"meets {orbit.collision[1]}"
    elif orbit.cycle_length is not None:
        fate = f"enters a cycle of length {orbit.cycle_length}"
    else:
        fate = "still wandering"
    print(f"  {target}: {trail}  ({fate})")

report = as_diagnostic(params, 64)
print("\ncollisions within 64 steps:")
for c in report.collisions:
    print(f"  line {c.line} (image {c.target}) hits indeterminacy point {c.point} after {c.n} step(s)")
print("algebraically stable on the plane:", report.is_as_on_p2)

# A map with no collisions at all: degrees multiply, so growth is 2^n.
print("\n(0,1,1),(0,1,0),(0,1,1) stable:", as_diagnostic(P((0, 1, 1), (0, 1, 0), (0, 1, 1)), 64).is_as_on_p2)

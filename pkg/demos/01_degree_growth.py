"""Three growth regimes side by side.

Each map is iterated exactly (homogenize, compose, strip the common factor),
the degree sequence is fitted with Berlekamp-Massey and the growth tag is
read off the characteristic polynomial.  Run: python3 demos/01_degree_growth.py
"""

from birmap.degrees import degree_sequence, dynamical_degree_estimate, fit_recurrence, growth_class, render_z
from birmap.maps import ParameterTuple as P, build_family_map

SAMPLES = [
    ("doubling", P((0, 1, 1), (0, 1, 0), (0, 1, 1)), 7),
    ("golden", P((0, 0, 1), (0, 1, 0), (0, 0, 1)), 12),
    ("linear", P((0, 1, 0), (0, 0, 1), (0, 1, 0)), 12),
    ("periodic", P((0, 0, 1), (-1, 0, 0), (1, 1, 0)), 12),
]

for name, params, n in SAMPLES:
    f = build_family_map(params)
    seq = degree_sequence(params, n)
    fit = fit_recurrence(seq)
    growth = growth_class(fit, seq)
    ratio = dynamical_degree_estimate(seq)
    print(f"{name}: f = {f}")
    print(f"  degrees      {' '.join(map(str, seq))}")
    print(f"  char poly    {render_z(fit.char_poly)}")
    print(f"  growth       {growth.tag}  (d_n/d_(n-1) at n={n}: {float(ratio):.6f})")
    print()

# The last ratio for the golden map approaches (1 + sqrt 5)/2 from alternating sides.
seq = degree_sequence(SAMPLES[1][1], 16)
print("golden ratios:", ", ".join(f"{b / a:.5f}" for a, b in zip(seq, seq[1:])))

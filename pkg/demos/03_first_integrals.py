"""From a degenerate map to its invariant fibrations.

A degenerate member of the family is sorted into its sub-case, the predicted
degree law is checked against exact iteration, and the map is brought to a
normal form whose known fibrations are verified symbolically.  The second
half shows how the one-dimensional Moebius map behind the G2 family decides
periodicity.  Run: python3 demos/03_first_integrals.py
"""

from birmap.classifier import classify, cross_check, h_map, predicted_model
from birmap.fibrations import builtin_fibrations, detect_periodicity, normal_form, transversality, verify_catalog
from birmap.maps import ParameterTuple as P, build_family_map
from birmap.moebius import moebius_from_h, periodicity_exact

params = P((0, 0, 1), (-1, 0, 0), (2, 1, 0))
print("f =", build_family_map(params))

case = classify(params)
model = predicted_model(case)
print(f"sub-case {case.subcase} ({case.family}); predicted growth {model.growth}, law: {model.law}")

check = cross_check(params, 12)
print("degrees  ", " ".join(map(str, check.sequence)))
print("fitted   ", check.fitted_char_poly, "| passes prediction:", check.passed)

form = normal_form(params)
print("\nnormal form:", form.map, f"(shape {form.shape})")
for verdict in verify_catalog(form):
    print(f"  {verdict.label:<3} {str(verdict.transform):<12} {verdict.status} via {verdict.method}")

specs = {s.label: s for s in builtin_fibrations(form)}
for label in ("K1", "K2", "W"):
    print(f"  {label} = {specs[label].function}")
tv = transversality(specs["K1"], specs["K2"])
print("  dK1 ^ dK2 =", tv.determinant)

# G2 maps are driven by h(z) = b0/(g0 + z); periodic exactly when h has finite order.
print("\nG2 orbits through h(z) = b0/(g0 + z):")
for g0, b0 in [(1, -1), (0, 1), (1, 1), (2, -1)]:
    report = periodicity_exact(moebius_from_h(g0, b0))
    label = f"order {report.period}" if report.periodic else report.classification
    example = P((0, 0, 1), (b0, 0, 0), (g0, 1, 0))
    period = detect_periodicity(example, 24).period
    print(f"  g0={g0:>2}, b0={b0:>2}: h is {label:<12} map period {period}")

print("\nh for the first map:", h_map(params))

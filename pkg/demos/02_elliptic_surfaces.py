"""Partition q-series of elliptic surfaces and the failed gluing shortcut.

E(2) is the K3 surface: its partition function mixes G = 1/eta^24 at three
arguments.  For larger even n a single binomial survives.  If the invariants
obeyed a naive multiplicative fiber-sum rule, Z(E(6)) would follow from
Z(E(2)) and Z(E(4)); comparing exact series shows it does not, starting at
the leading power.
"""

from vw3d.elliptic import en_closed_form, g_series, gluing_check, sw_data_en, z_vw_kahler

print("G(q) = 1/eta^24:")
print(g_series(5).to_text())

print("\nZ for E(2) (K3), exact dyadic coefficients:")
print(z_vw_kahler(sw_data_en(2), order=4).to_text())

print("\nZ for E(4) = -G(q^2)^2/16:")
print(en_closed_form(4, order=4).to_text())

print("\nSeiberg-Witten data used for E(6):")
for cls in sw_data_en(6).basic_classes:
    print(f"  class {cls.multiple:+d}F  SW = {cls.sw:+d}")

report = gluing_check(6, order=8)
print("\nmultiplicative gluing prediction vs the direct series for E(6):")
print("  equal:", report["equal"])
print("  first differing q-power:", report["first_differing_exponent"])
print("  direct leading term:    ", report["lhs_leading"])
print("  prediction leading term:", report["rhs_leading"])

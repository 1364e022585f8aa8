"""The geometric ground truth, computed by brute force.

Exact rational representations, sampled generic points, and the full
group of linear maps permuting the orbit.  The closure iteration
recomputes the symmetry group of its own orbit until nothing new
appears; one round always suffices.
"""

from orbitsym.chars import character_table, rational_ideal_characters
from orbitsym.oracle import (
    closure_iterate,
    ideal_component_rep,
    linear_symmetry_group,
    regular_representation,
    sample_generic_point,
)
from orbitsym.groups import builtin_group

g = builtin_group("cyclic(5)")
t = character_table(g)
gamma = rational_ideal_characters(t)[1]
rep = ideal_component_rep(g, gamma)
print(f"faithful rational component of C5: dimension {rep.dim}")

od = sample_generic_point(rep, seed=3)
print("sampled orbit:", [tuple(str(x) for x in p) for p in od.points])

oracle = linear_symmetry_group(od)
print("|GL(Gv)| =", oracle.order, " (the regular simplex: all of S5)")

result = closure_iterate(od, seed=3, max_step_order=500)
print("closure chain of symmetry orders:", result["orders"])
print("stabilized:", result["stabilized"])

d4 = builtin_group("dihedral(4)")
rep = regular_representation(d4)
od = sample_generic_point(rep, seed=1)
oracle = linear_symmetry_group(od)
print(f"\nregular orbit of D4: {len(od.points)} independent points,"
      f" |GL(Gv)| = {oracle.order} = 8!")

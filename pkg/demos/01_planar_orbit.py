"""A square orbit and everything that permutes it.

C4 rotating a generic point of the plane traces out a quadrilateral.
The character of the rotation action predicts, with no geometry at all,
that exactly 8 permutations of the group extend to linear maps; the
brute-force oracle confirms it on sampled points.
"""

from fractions import Fraction

from orbitsym.chars import character_table
from orbitsym.exact import RationalMatrix
from orbitsym.gensym import sym_group_of_character
from orbitsym.groups import builtin_group
from orbitsym.oracle import (
    linear_symmetry_group,
    rep_from_generators,
    sample_generic_point,
    verify_theory_vs_oracle,
)

g = builtin_group("cyclic(4)")
t = character_table(g)

lam = next(c for c in t.irreducibles if not c.is_real_valued())
chi = lam + lam.conj()
print("character of the rotation action:", [str(v) for v in chi.values])

res = sym_group_of_character(chi)
print("predicted symmetry group order:", res.group_of_permutations.order())
print("only left translations?", res.is_generically_closed)

rot = RationalMatrix.from_rows(
    [[Fraction(0), Fraction(-1)], [Fraction(1), Fraction(0)]]
)
rep = rep_from_generators(g, [(1, rot)])

for seed in (1, 2, 3):
    od = sample_generic_point(rep, seed=seed)
    oracle = linear_symmetry_group(od)
    corners = [tuple(str(x) for x in p) for p in od.points]
    print(f"seed {seed}: orbit {corners} -> oracle order {oracle.order}")

report = verify_theory_vs_oracle(rep, chi, trials=3, seed=7)
print("theory and oracle agree on the induced permutations:", report["passed"])

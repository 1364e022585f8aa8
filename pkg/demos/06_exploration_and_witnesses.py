"""Search stories: abelian closure hunting and index-p witnesses.

C3xC3 admits no generically closed multiplicity-free character at all;
small cyclic groups find a faithful linear one immediately.  The
witness machinery builds the automorphism behind the non-realizability
proofs and re-verifies it against the character table.
"""

from orbitsym.chars import character_table, kernel_of
from orbitsym.classify import verify_witness, witness_automorphism
from orbitsym.exact import cyclo_is_rational
from orbitsym.gensym import explore_abelian_closure
from orbitsym.groups import builtin_group, subgroup

print("searching all 511 candidates on C3xC3:",
      explore_abelian_closure(builtin_group("elem_abelian(3,2)")))

for n in (2, 3, 5, 7):
    g = builtin_group(f"cyclic({n})")
    chi = explore_abelian_closure(g)
    deg = cyclo_is_rational(chi.degree)
    print(f"C{n}: found degree-{deg} character,"
          f" faithful: {kernel_of(chi).order == 1}")

# the quaternion witness: N = <i>, z = the unique involution
q8 = builtin_group("quaternion8")
w = witness_automorphism(q8, subgroup(q8, (0, 1, 2, 3)), 2)
print("\nQ8 witness automorphism:", w.alpha.cycle_string())
print("preserves every rational ideal pairing:",
      verify_witness(w, character_table(q8)))

# same construction one level up, on Q8 x C7
g = builtin_group("product(quaternion8,cyclic(7))")
members = tuple(sorted(a * 7 + y for a in (0, 1, 2, 3) for y in range(7)))
w = witness_automorphism(g, subgroup(g, members), 14)
print("Q8xC7 witness verifies:", verify_witness(w, character_table(g)))

"""What the generic symmetry group sees, character by character.

The group of permutations preserving every generic orbit of a module
splits along the ideal part of its character.  Two product groups from
the quaternions close up completely: their generic orbits have no
symmetries beyond the group itself.
"""

from orbitsym.chars import (
    character_table,
    product_character,
    regular_character,
    trivial_character,
)
from orbitsym.gensym import hat_character, ideal_part, sym_group_of_character
from orbitsym.groups import builtin_group


def faithful_two_dim(g):
    t = character_table(g)
    return next(c for c in t.irreducibles if c.degree == 2)


q8 = builtin_group("quaternion8")
alpha = faithful_two_dim(q8)

dec = ideal_part(alpha * 2)
print("2*alpha is an ideal character:", dec.chi_I.values == (alpha * 2).values)
res = sym_group_of_character(alpha * 2)
print("|Sym(Q8, 2a)| =", res.group_of_permutations.order())
print("  (it is the signed permutations of four antipodal point pairs)")

rho = regular_character(q8)
print("|Sym(Q8, regular)| =", sym_group_of_character(rho).group_of_permutations.order())

# the hat character restricted to translations recovers chi
pi = res.group_of_permutations.generators[0]
print("hat value at one generator:", hat_character(alpha * 2, pi))

for other_spec, other_char in (
    ("product(quaternion8,cyclic(4))", "lambda"),
    ("product(quaternion8,quaternion8)", "2*alpha"),
):
    g = builtin_group(other_spec)
    right = builtin_group(other_spec[len("product(quaternion8,") : -1])
    t_right = character_table(right)
    if other_char == "lambda":
        beta = next(c for c in t_right.irreducibles if not c.is_real_valued())
        mixed = product_character(g, alpha, beta)
        tail = product_character(g, trivial_character(q8), beta)
    else:
        beta = faithful_two_dim(right)
        mixed = product_character(g, alpha, beta)
        tail = product_character(g, trivial_character(q8), beta * 2)
    chi = mixed + product_character(g, alpha * 2, trivial_character(right)) + tail
    res = sym_group_of_character(chi)
    print(
        f"{g.label}: |Sym| = {res.group_of_permutations.order()}"
        f" = |G| is {res.group_of_permutations.order() == g.order},"
        f" generically closed: {res.is_generically_closed}"
    )

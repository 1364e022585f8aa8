"""Character tables with no floating point anywhere.

Values live in cyclotomic fields and print symbolically.  The rational
ideal characters are the building blocks every rational orbit
representation decomposes into.
"""

from orbitsym.chars import (
    character_table,
    inner_product,
    rational_ideal_characters,
)
from orbitsym.groups import builtin_group

for spec in ("quaternion8", "dihedral(5)", "cyclic(12)"):
    g = builtin_group(spec)
    t = character_table(g)
    print(f"\n{g.label}: {len(t.irreducibles)} irreducible characters")
    for chi, fs in zip(t.irreducibles, t.fs_indicators):
        print("  ", [str(v) for v in chi.values], f"(indicator {fs})")

    # rows are orthonormal, exactly
    for i, a in enumerate(t.irreducibles):
        for j, b in enumerate(t.irreducibles):
            assert inner_product(a, b) == (1 if i == j else 0)

    print("  galois orbits of rows:", t.galois_orbits)
    for gamma in rational_ideal_characters(t):
        print("   rational ideal component:", [str(v) for v in gamma.values])

"""Which groups are exactly the symmetries of one of their orbits?

Three settings, increasingly rigid: euclidean, affine, rational.  A
group fails exactly when it lands in one of a short list of structural
families; the classifier names the family it matched.
"""

from orbitsym.classify import (
    classify_affine,
    classify_euclidean,
    classify_rational,
    nker_R,
    nontrivial_nker_family,
)
from orbitsym.groups import builtin_group

probes = (
    "cyclic(2)",
    "cyclic(6)",
    "elem_abelian(2,2)",
    "elem_abelian(2,5)",
    "dihedral(4)",
    "quaternion8",
    "dicyclic(3)",
    "product(quaternion8,cyclic(7))",
    "product(quaternion8,cyclic(4))",
)

print(f"{'group':38}{'euclid':8}{'affine':8}{'rational':10}matched family")
for spec in probes:
    g = builtin_group(spec)
    e = classify_euclidean(g)
    a = classify_affine(g)
    r = classify_rational(g)
    tag = r.matched_case if not r.realizable else (a.matched_case if not a.realizable else "")
    print(
        f"{g.label:38}"
        f"{str(e.realizable):8}{str(a.realizable):8}{str(r.realizable):10}{tag}"
    )

print()
print("hidden real kernels (obstructions visible over R):")
for spec in probes:
    g = builtin_group(spec)
    n = nker_R(g)
    family = nontrivial_nker_family(g)
    if n.order > 1:
        print(f"  {g.label}: |NKer| = {n.order} ({family})")

"""Realizability classifiers against the worked catalog of small groups."""

import json
import math
from itertools import permutations

import pytest

from orbitsym import classify
from orbitsym.chars import character_table
from orbitsym.classify import (
    classify_affine,
    classify_euclidean,
    classify_rational,
    nker_R,
    nontrivial_nker_family,
    verdict_to_json,
    verify_witness,
    witness_automorphism,
)
from orbitsym.errors import BadParameter, BadWitnessData, GroupMismatch, SizeLimit
from orbitsym.groups import (
    FiniteGroup,
    cyclic,
    dicyclic,
    dihedral,
    elem_abelian,
    generated_subgroup,
    group_from_table,
    product,
    quaternion8,
    subgroup,
)


def catalog():
    gs = [cyclic(n) for n in range(1, 33)]
    gs += [elem_abelian(2, r) for r in range(2, 6)]
    gs += [elem_abelian(3, 2), elem_abelian(3, 3), elem_abelian(5, 2)]
    gs += [dihedral(n) for n in range(3, 17)]
    gs += [dicyclic(n) for n in range(3, 9)]
    gs += [quaternion8(), product(quaternion8(), cyclic(4))]
    return gs


def split_metacyclic(q, n, k, label):
    """C_q : C_n where the C_n generator acts by x -> k*x mod q."""
    size = q * n
    tab = [[0] * size for _ in range(size)]
    for x1 in range(q):
        for y1 in range(n):
            row = tab[x1 * n + y1]
            m = pow(k, y1, q)
            for x2 in range(q):
                for y2 in range(n):
                    row[x2 * n + y2] = ((x1 + m * x2) % q) * n + (y1 + y2) % n
    return group_from_table(tab, 0, label)


def alternating4():
    els = sorted(
        p
        for p in permutations(range(4))
        if sum(p[a] > p[b] for a in range(4) for b in range(a + 1, 4)) % 2 == 0
    )
    pos = {p: i for i, p in enumerate(els)}
    tab = [[pos[tuple(a[b[x]] for x in range(4))] for b in els] for a in els]
    return group_from_table(tab, pos[(0, 1, 2, 3)], "a4")


def unchecked_product(a, b, label):
    # direct-product table built without the size cap, for white-box tests
    nb = b.order
    tab = tuple(
        tuple(
            a.table[x1][x2] * nb + b.table[y1][y2]
            for x2 in range(a.order)
            for y2 in range(nb)
        )
        for x1 in range(a.order)
        for y1 in range(nb)
    )
    inv = tuple(
        a.inverse[x] * nb + b.inverse[y] for x in range(a.order) for y in range(nb)
    )
    orders = tuple(
        math.lcm(a.orders[x], b.orders[y])
        for x in range(a.order)
        for y in range(nb)
    )
    return FiniteGroup(label, tab, 0, inv, orders, math.lcm(a.exponent, b.exponent))


# ---------------------------------------------------------------------------
# euclidean


def test_cyclic_three_fails_the_abelian_test():
    v = classify_euclidean(cyclic(3))
    assert not v.realizable
    assert v.matched_case == "abelian exponent>2"
    assert v.witness["matches"][0]["case"] == "(i)"


def test_klein_four_is_euclidean_realizable():
    v = classify_euclidean(elem_abelian(2, 2))
    assert v.realizable
    assert v.matched_case == "none"
    assert v.witness["matches"] == []


def test_dihedral_four_is_euclidean_realizable():
    assert classify_euclidean(dihedral(4)).realizable


def test_quaternion_is_generalized_dicyclic():
    g = quaternion8()
    v = classify_euclidean(g)
    assert not v.realizable
    assert v.matched_case == "generalized dicyclic"
    m = v.witness["matches"][0]
    assert len(m["abelian_subgroup"]) == 4
    assert g.orders[m["twisting_element"]] == 4


def test_c4_matches_both_euclidean_cases():
    # the literal generalized-dicyclic reading admits C4; abelian comes first
    v = classify_euclidean(cyclic(4))
    assert [m["case"] for m in v.witness["matches"]] == ["(i)", "(ii)"]
    assert v.matched_case == "abelian exponent>2"


# ---------------------------------------------------------------------------
# affine


def test_c6_fails_affine_as_abelian():
    v = classify_affine(cyclic(6))
    assert not v.realizable
    assert v.witness["matches"][0]["case"] == "(i)"


def test_elementary_sixteen_fails_only_affine():
    g = elem_abelian(2, 4)
    assert classify_euclidean(g).realizable
    v = classify_affine(g)
    assert not v.realizable
    assert v.matched_case == "elem-abelian 4/8/16"
    assert v.witness["matches"][0]["order"] == 16


def test_elementary_thirty_two_is_affine_realizable():
    assert classify_affine(elem_abelian(2, 5)).realizable


def test_quaternion_times_c7_is_affine_realizable():
    assert classify_affine(product(quaternion8(), cyclic(7))).realizable


def test_affine_exception_set_is_exactly_the_three_small_spaces():
    gap = [
        g
        for g in catalog()
        if classify_euclidean(g).realizable and not classify_affine(g).realizable
    ]
    assert sorted(g.order for g in gap) == [4, 8, 16]
    assert all(g.exponent <= 2 for g in gap)


# ---------------------------------------------------------------------------
# rational


def test_quaternion_times_c7_matches_the_product_case():
    g = product(quaternion8(), cyclic(7))
    v = classify_rational(g)
    assert not v.realizable
    assert v.matched_case == "7.2(ii) S×A"
    m = v.witness["matches"][0]
    assert m["ord_2_mod_a"] == 3
    assert len(m["s_members"]) == 8
    assert len(m["a_members"]) == 7
    assert len(m["lemma_witness"]["N"]) == 28


def test_quaternion_times_c4_is_rational_realizable():
    assert classify_rational(product(quaternion8(), cyclic(4))).realizable


def test_quaternion_squared_is_rational_realizable():
    assert classify_rational(product(quaternion8(), quaternion8())).realizable


def test_elementary_abelian_split_of_verdicts():
    assert classify_rational(elem_abelian(2, 5)).realizable
    v = classify_rational(elem_abelian(2, 3))
    assert not v.realizable
    assert v.matched_case == "7.2(i) abelian"


def test_quaternion_matches_product_then_dicyclic():
    v = classify_rational(quaternion8())
    assert [m["case"] for m in v.witness["matches"]] == ["7.2(ii)", "7.2(iii)"]


def test_c4_reports_every_matching_case():
    v = classify_rational(cyclic(4))
    assert [m["case"] for m in v.witness["matches"]] == [
        "7.2(i)",
        "7.2(ii)",
        "7.2(iii)",
    ]
    assert v.matched_case == "7.2(i) abelian"


def test_dicyclic_three_matches_dicyclic_and_pq_cases():
    v = classify_rational(dicyclic(3))
    assert [m["case"] for m in v.witness["matches"]] == ["7.2(iii)", "7.2(iv)"]
    m = v.witness["matches"][1]
    assert (m["p"], m["q"], m["conjugation_power"]) == (2, 3, 2)
    assert (m["c"], m["d"]) == (1, 1)


def test_dicyclic_five_matches_only_the_dicyclic_case():
    # ord(y^2) = 2 but the 2-part of q-1 = 4 does not divide it
    v = classify_rational(dicyclic(5))
    assert [m["case"] for m in v.witness["matches"]] == ["7.2(iii)"]


def test_semidirect_63_is_a_pq_group():
    g = split_metacyclic(7, 9, 2, "c7:c9")
    v = classify_rational(g)
    assert not v.realizable
    assert [m["case"] for m in v.witness["matches"]] == ["7.2(iv)"]
    m = v.witness["matches"][0]
    assert (m["p"], m["q"]) == (3, 7)
    assert (m["c"], m["d"]) == (1, 1)
    lw = m["lemma_witness"]
    assert len(lw["N"]) == 21
    assert g.orders[lw["z"]] == 3


def test_semidirect_117_is_a_pq_group():
    # C13 : C9 where the action has a C3 kernel, so C_P(Q) is nontrivial
    g = split_metacyclic(13, 9, 3, "c13:c9")
    v = classify_rational(g)
    assert not v.realizable
    m = v.witness["matches"][0]
    assert (m["p"], m["q"], m["c"], m["d"]) == (3, 13, 1, 1)


def test_semidirect_21_is_realizable():
    # ord(y^2) = 1 < the 2-part of q-1... here p = 3 and p^d = 1 < (q-1)_3
    assert classify_rational(split_metacyclic(7, 3, 2, "c7:c3")).realizable


def test_alternating_is_realizable():
    # V4 admits no uniform conjugation power, so case (iv) cannot fire
    assert classify_rational(alternating4()).realizable


def test_dihedral_groups_are_rational_realizable():
    for n in range(3, 17):
        assert classify_rational(dihedral(n)).realizable


def test_rational_implies_affine_on_the_catalog():
    for g in catalog():
        if classify_rational(g).realizable:
            assert classify_affine(g).realizable


def test_size_limit_is_enforced():
    big = unchecked_product(cyclic(12), cyclic(11), "c12xc11")
    with pytest.raises(SizeLimit):
        classify_rational(big)


def test_verdict_json_for_both_outcomes():
    bad = verdict_to_json(classify_rational(product(quaternion8(), cyclic(7))))
    assert bad["schema"] == "orbitsym/1"
    assert bad["realizable"] is False
    assert bad["case_number"] == "7.2(ii)"
    json.dumps(bad)
    good = verdict_to_json(classify_rational(dihedral(4)))
    assert good["realizable"] is True
    assert good["matched_case"] == "none"
    assert good["case_number"] == "none"
    assert good["witness"] == {"matches": []}
    json.dumps(good)
    aff = verdict_to_json(classify_affine(elem_abelian(2, 4)))
    assert aff["case_number"] == "(iii)"
    json.dumps(aff)


# ---------------------------------------------------------------------------
# the kernel core


def test_nker_s3_is_trivial():
    assert nker_R(dihedral(3)).members == (0,)


def test_nker_q8_is_everything():
    # the 2-dim irreducible is quaternionic, so no character qualifies
    assert nker_R(quaternion8()).order == 8


def test_nker_c2_fallback_clause():
    assert nker_R(cyclic(2)).order == 2


def test_nker_q8_c4_has_one_hidden_involution():
    g = product(quaternion8(), cyclic(4))
    nk = nker_R(g)
    assert nk.order == 2
    x = next(m for m in nk.members if m != g.identity)
    assert g.orders[x] == 2
    assert all(g.mul(x, y) == g.mul(y, x) for y in range(g.order))


def test_nker_families_cover_the_catalog():
    for g in catalog():
        assert (nker_R(g).order > 1) == (nontrivial_nker_family(g) is not None), g.label


def test_nker_family_names():
    assert nontrivial_nker_family(cyclic(6)) == "abelian"
    assert nontrivial_nker_family(cyclic(1)) is None
    assert nontrivial_nker_family(quaternion8()) == "generalized dicyclic"
    assert nontrivial_nker_family(dihedral(5)) is None
    assert (
        nontrivial_nker_family(product(quaternion8(), cyclic(4))) == "Q8×C4×C2^r"
    )
    assert (
        nontrivial_nker_family(product(product(quaternion8(), cyclic(4)), cyclic(2)))
        == "Q8×C4×C2^r"
    )
    assert nontrivial_nker_family(product(quaternion8(), quaternion8())) == "Q8×Q8×C2^r"
    assert nontrivial_nker_family(product(dihedral(4), cyclic(4))) is None


def test_trivial_nker_implies_affine_realizable():
    for g in catalog():
        if nker_R(g).order == 1:
            assert classify_affine(g).realizable, g.label


def test_quaternion_squared_realizable_despite_nontrivial_nker():
    g = product(quaternion8(), quaternion8())
    assert nker_R(g).order == 2
    assert classify_rational(g).realizable


# ---------------------------------------------------------------------------
# witness automorphisms


def test_quaternion_witness_negates_the_other_two_axes():
    g = quaternion8()
    axis = next(x for x in range(8) if g.orders[x] == 4)
    n = subgroup(g, generated_subgroup(g, [axis]))
    z = next(x for x in range(8) if g.orders[x] == 2)
    w = witness_automorphism(g, n, z)
    assert all(w.alpha(x) == x for x in n.members)
    assert all(w.alpha(x) == g.mul(x, z) for x in range(8) if x not in n.members)
    assert verify_witness(w, character_table(g))


def test_c4_witness_is_inversion():
    g = cyclic(4)
    w = witness_automorphism(g, subgroup(g, [0, 2]), 2)
    assert w.alpha.images == (0, 3, 2, 1)
    assert verify_witness(w, character_table(g))


def test_s3_witness_names_the_first_transposition():
    g = dihedral(3)
    with pytest.raises(BadWitnessData, match="element 3 outside N"):
        witness_automorphism(g, subgroup(g, [0, 1, 2]), 1)


def test_witness_rejects_non_normal_subgroup():
    g = dihedral(3)
    with pytest.raises(BadWitnessData, match="not normal"):
        witness_automorphism(g, subgroup(g, [0, 3]), 1)


def test_witness_rejects_composite_index():
    g = cyclic(4)
    with pytest.raises(BadWitnessData, match="not prime"):
        witness_automorphism(g, subgroup(g, [0]), 2)


def test_witness_rejects_z_of_wrong_order():
    g = cyclic(4)
    with pytest.raises(BadWitnessData, match="order 4"):
        witness_automorphism(g, subgroup(g, [0, 2]), 1)


def test_witness_rejects_foreign_subgroup_and_bad_element():
    with pytest.raises(GroupMismatch):
        witness_automorphism(quaternion8(), subgroup(dihedral(4), [0, 1, 2, 3]), 2)
    g = cyclic(4)
    with pytest.raises(BadParameter):
        witness_automorphism(g, subgroup(g, [0, 2]), 7)


def test_classifier_lemma_witnesses_all_verify():
    groups = [
        quaternion8(),
        cyclic(4),
        dicyclic(3),
        dicyclic(4),
        product(quaternion8(), cyclic(2)),
        product(quaternion8(), cyclic(7)),
        split_metacyclic(7, 9, 2, "c7:c9"),
    ]
    for g in groups:
        v = classify_rational(g)
        assert not v.realizable
        checked = 0
        for m in v.witness["matches"]:
            lw = m.get("lemma_witness")
            if lw is None:
                continue
            w = witness_automorphism(g, subgroup(g, lw["N"]), lw["z"])
            assert not w.alpha.is_identity()
            assert w.alpha(g.identity) == g.identity
            assert verify_witness(w, character_table(g)), (g.label, m["case"])
            checked += 1
        assert checked > 0, g.label


# ---------------------------------------------------------------------------
# the Q8 x C2^r x H case: its smallest genuine member is far past the size
# cap, so the branch is exercised on an unchecked product with the odd-order
# arithmetic stubbed to behave as it would at that scale


def _q8_times_metacyclic():
    return unchecked_product(
        quaternion8(), split_metacyclic(7, 9, 2, "c7:c9"), "q8x(c7:c9)"
    )


def test_five_branch_rejects_even_multiplicative_order(monkeypatch):
    g = _q8_times_metacyclic()
    monkeypatch.setattr(classify, "RATIONAL_ORDER_LIMIT", 600)
    v = classify_rational(g)
    assert v.realizable
    assert classify._mult_order(2, 63) == 6


def test_five_branch_wiring(monkeypatch):
    g = _q8_times_metacyclic()
    monkeypatch.setattr(classify, "RATIONAL_ORDER_LIMIT", 600)
    real = classify._mult_order

    def stubbed(a, m):
        if (a, m) == (2, 63):
            return 3
        return real(a, m)

    monkeypatch.setattr(classify, "_mult_order", stubbed)
    v = classify_rational(g)
    assert not v.realizable
    assert v.matched_case == "7.2(v) Q8×C2^r×H"
    m = v.witness["matches"][0]
    assert len(m["two_part"]) == 8
    assert len(m["h_members"]) == 63
    assert m["h_structure"]["case"] == "7.2(iv)"
    lw = m["lemma_witness"]
    assert len(lw["N"]) == 168
    assert g.orders[lw["z"]] == 3
    w = witness_automorphism(g, subgroup(g, lw["N"]), lw["z"])
    assert not w.alpha.is_identity()
    assert all(w.alpha(x) == x for x in lw["N"])

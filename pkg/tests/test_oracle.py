"""Oracle route: explicit representations, orbits, brute-force symmetry."""

from __future__ import annotations

import itertools
import json
from fractions import Fraction

import pytest

from orbitsym.chars import (
    character_table,
    kernel_of,
    rational_ideal_characters,
    regular_character,
    trivial_character,
)
from orbitsym.errors import (
    BadParameter,
    DimensionMismatch,
    GroupMismatch,
    NotAGenericSymmetry,
    NotCyclic,
    NotGenerating,
    NotRationalIdealCharacter,
    NotSpanning,
    RelationViolated,
    SchemaError,
    Singular,
)
from orbitsym.exact import RationalMatrix, cyclo_is_rational
from orbitsym.gensym import sym_group_of_character
from orbitsym.groups import (
    GPermutation,
    cyclic,
    dihedral,
    elem_abelian,
    quaternion8,
)
from orbitsym.oracle import (
    RationalRepresentation,
    annihilator_symmetry_check,
    closure_iterate,
    ideal_component_rep,
    linear_symmetry_group,
    orbit,
    point_from_json,
    point_to_json,
    regular_representation,
    rep_from_generators,
    rep_from_json,
    rep_to_json,
    sample_generic_point,
    verify_theory_vs_oracle,
)


def _rotation_rep():
    g = cyclic(4)
    m = RationalMatrix.from_rows([[0, -1], [1, 0]])
    return g, rep_from_generators(g, [(1, m)])


def _sign_rep():
    g = elem_abelian(2, 2)
    a = RationalMatrix.from_rows([[-1, 0], [0, 1]])
    b = RationalMatrix.from_rows([[1, 0], [0, -1]])
    return g, rep_from_generators(g, [(1, a), (2, b)])


def _conjugate_pair_character(g):
    for psi in character_table(g).irreducibles:
        if cyclo_is_rational(psi.degree) == 1 and kernel_of(psi).order == 1:
            return psi + psi.conj()
    raise AssertionError


# ---------------------------------------------------------------------------
# building representations


def test_rotation_representation_completes_from_one_generator():
    g, rep = _rotation_rep()
    assert rep.dim == 2
    assert rep.matrices[2].entries == ((-1, 0), (0, -1))
    assert rep.matrices[3].entries == ((0, 1), (-1, 0))
    assert rep.character.values == _conjugate_pair_character(g).values


def test_generator_matrix_violating_a_relation_is_caught():
    g = cyclic(2)
    with pytest.raises(RelationViolated):
        rep_from_generators(g, [(1, RationalMatrix.from_rows([[2]]))])


def test_non_generating_set_is_caught():
    g = cyclic(4)
    minus_one = RationalMatrix.from_rows([[-1, 0], [0, -1]])
    with pytest.raises(NotGenerating):
        rep_from_generators(g, [(2, minus_one)])


def test_singular_generator_matrix_is_caught():
    g = cyclic(2)
    with pytest.raises(Singular):
        rep_from_generators(g, [(1, RationalMatrix.from_rows([[1, 1], [1, 1]]))])


def test_regular_representation_by_permutation_matrices():
    g = cyclic(2)
    rep = regular_representation(g)
    assert rep.dim == 2
    assert rep.matrices[1].entries == ((0, 1), (1, 0))
    assert rep.character.values == regular_character(g).values


def test_ideal_component_of_the_trivial_character():
    g = cyclic(4)
    rep = ideal_component_rep(g, trivial_character(g))
    assert rep.dim == 1
    assert all(m.entries == ((1,),) for m in rep.matrices)


def test_ideal_component_of_the_conjugate_linear_pair():
    g = cyclic(4)
    gamma = next(
        c
        for c in rational_ideal_characters(character_table(g))
        if cyclo_is_rational(c.degree) == 2
    )
    rep = ideal_component_rep(g, gamma)
    assert rep.dim == 2
    assert rep.character.values == gamma.values
    assert (rep.matrices[1] * rep.matrices[1]).entries == rep.matrices[2].entries


def test_ideal_component_of_the_quaternion_plane():
    g = quaternion8()
    gamma = next(
        c
        for c in rational_ideal_characters(character_table(g))
        if cyclo_is_rational(c.degree) == 4
    )
    rep = ideal_component_rep(g, gamma)
    assert rep.dim == 4
    assert rep.character.values == gamma.values


def test_ideal_component_rejections():
    g = quaternion8()
    alpha = next(
        p for p in character_table(g).irreducibles if cyclo_is_rational(p.degree) == 2
    )
    with pytest.raises(NotRationalIdealCharacter):
        ideal_component_rep(g, alpha)
    c5 = cyclic(5)
    psi = character_table(c5).irreducibles[1]
    with pytest.raises(NotRationalIdealCharacter):
        ideal_component_rep(c5, psi)
    with pytest.raises(GroupMismatch):
        ideal_component_rep(g, trivial_character(c5))


# ---------------------------------------------------------------------------
# orbits


def test_rotation_orbit_of_a_unit_point():
    g, rep = _rotation_rep()
    od = orbit(rep, (1, 0))
    assert set(od.points) == {(1, 0), (0, 1), (-1, 0), (0, -1)}
    assert od.stabilizer.order == 1
    assert od.spans
    assert od.basis_elements == (0, 1)
    assert len(od.points) * od.stabilizer.order == g.order


def test_orbit_of_zero_is_a_single_fixed_point():
    g, rep = _rotation_rep()
    od = orbit(rep, (0, 0))
    assert len(od.points) == 1
    assert od.stabilizer.order == 4
    assert not od.spans
    assert od.basis_elements is None


def test_orbit_rejects_wrong_dimension():
    _, rep = _rotation_rep()
    with pytest.raises(DimensionMismatch):
        orbit(rep, (1, 0, 0))


def test_regular_orbit_spans():
    g = cyclic(3)
    od = orbit(regular_representation(g), (1, 0, 0))
    assert len(od.points) == 3
    assert od.spans


# ---------------------------------------------------------------------------
# brute-force symmetry groups


def test_square_orbit_has_eight_linear_symmetries():
    _, rep = _rotation_rep()
    lsg = linear_symmetry_group(orbit(rep, (1, 0)))
    assert lsg.order == 8
    assert lsg.permutation_group.order() == 8
    for mat, perm in zip(lsg.matrices, lsg.orbit_permutations):
        for x, p in enumerate(lsg.points):
            assert mat.apply(p) == lsg.points[perm.images[x]]


def test_rectangle_orbit_has_eight_linear_symmetries():
    _, rep = _sign_rep()
    lsg = linear_symmetry_group(orbit(rep, (1, 2)))
    assert lsg.order == 8


def test_triangle_orbit_admits_every_permutation():
    rep = regular_representation(cyclic(3))
    lsg = linear_symmetry_group(orbit(rep, (1, 2, 4)))
    assert lsg.order == 6


def test_non_spanning_orbit_is_rejected():
    _, rep = _rotation_rep()
    with pytest.raises(NotSpanning):
        linear_symmetry_group(orbit(rep, (0, 0)))


def test_matrix_for_members_and_nonmembers():
    _, rep = _rotation_rep()
    od = orbit(rep, (1, 0))
    lsg = linear_symmetry_group(od)
    flip = GPermutation(
        tuple(od.points.index((p[0], -p[1])) for p in od.points)
    )
    assert lsg.contains_permutation(flip)
    assert lsg.matrix_for(flip).entries == ((1, 0), (0, -1))
    rotate_three = GPermutation((1, 2, 0, 3))
    assert not lsg.contains_permutation(rotate_three)
    with pytest.raises(NotAGenericSymmetry):
        lsg.matrix_for(rotate_three)


# ---------------------------------------------------------------------------
# annihilator criterion


def test_annihilator_check_fixtures():
    g, rep = _rotation_rep()
    od = orbit(rep, (1, 0))
    assert annihilator_symmetry_check(od, GPermutation.identity(4))
    assert annihilator_symmetry_check(od, GPermutation(tuple(g.inverse)))
    assert not annihilator_symmetry_check(od, GPermutation((1, 0, 2, 3)))


def test_annihilator_check_matches_the_linear_route():
    # every accepted coordinate permutation must push down to a point map
    # induced by some matrix of the symmetry group, and conversely
    for g, rep, v in (
        (_rotation_rep()[0], _rotation_rep()[1], (1, 0)),
        (_sign_rep()[0], _sign_rep()[1], (1, 2)),
    ):
        od = orbit(rep, v)
        lsg = linear_symmetry_group(od)
        accepted = set()
        for images in itertools.permutations(range(g.order)):
            if annihilator_symmetry_check(od, GPermutation(images)):
                accepted.add(images)
        induced = set()
        for images in itertools.permutations(range(g.order)):
            pushed = [None] * len(od.points)
            ok = True
            for x in range(g.order):
                j = od.point_of_element[x]
                t = od.point_of_element[images[x]]
                if pushed[j] is None:
                    pushed[j] = t
                elif pushed[j] != t:
                    ok = False
                    break
            if ok and lsg.contains_permutation(GPermutation(tuple(pushed))):
                induced.add(images)
        assert accepted == induced


def test_annihilator_set_equals_the_theory_group():
    g, rep = _rotation_rep()
    od = orbit(rep, (1, 0))
    chi = _conjugate_pair_character(g)
    theory = {
        p.images
        for p in sym_group_of_character(chi).group_of_permutations.elements()
    }
    accepted = {
        images
        for images in itertools.permutations(range(4))
        if annihilator_symmetry_check(od, GPermutation(images))
    }
    assert accepted == theory


# ---------------------------------------------------------------------------
# generic points


def test_sampled_point_spans_with_trivial_stabilizer():
    _, rep = _rotation_rep()
    od = sample_generic_point(rep, seed=1, bound=10)
    assert od.spans
    assert od.stabilizer.order == 1
    again = sample_generic_point(rep, seed=1, bound=10)
    assert again.base_point == od.base_point


def test_sampled_stabilizer_is_the_kernel():
    g = cyclic(4)
    rep = rep_from_generators(g, [(1, RationalMatrix.from_rows([[-1]]))])
    od = sample_generic_point(rep, seed=3)
    assert set(od.stabilizer.members) == {0, 2}


def test_non_cyclic_module_has_no_generic_point():
    g = cyclic(2)
    two_trivial = rep_from_generators(g, [(1, RationalMatrix.identity(2))])
    with pytest.raises(NotCyclic):
        sample_generic_point(two_trivial, seed=0)


def test_zero_dimensional_candidate_is_rejected():
    g = cyclic(2)
    fake = RationalRepresentation(g, 0, (), trivial_character(g) * 0)
    with pytest.raises(NotCyclic):
        sample_generic_point(fake)


# ---------------------------------------------------------------------------
# theory against oracle


def test_rotation_representation_verifies():
    g, rep = _rotation_rep()
    report = verify_theory_vs_oracle(rep, _conjugate_pair_character(g), trials=3, seed=0)
    assert report["passed"] is True
    assert report["theory_order"] == 8
    assert len(report["trials"]) == 3
    assert all(t["oracle_order"] == 8 for t in report["trials"])
    assert report == json.loads(json.dumps(report))


def test_regular_representation_verifies():
    g = cyclic(3)
    report = verify_theory_vs_oracle(
        regular_representation(g), regular_character(g), trials=2, seed=5
    )
    assert report["passed"] is True
    assert report["theory_order"] == 6
    assert all(t["oracle_order"] == 6 for t in report["trials"])


def test_quaternion_plane_verifies():
    # the orbit is four antipodal pairs of independent points, so every
    # sign-respecting permutation extends linearly: 2^4 * 4! symmetries
    g = quaternion8()
    gamma = next(
        c
        for c in rational_ideal_characters(character_table(g))
        if cyclo_is_rational(c.degree) == 4
    )
    rep = ideal_component_rep(g, gamma)
    report = verify_theory_vs_oracle(rep, gamma, trials=2, seed=2)
    assert report["passed"] is True
    assert report["theory_order"] == 384
    assert all(t["oracle_order"] == 384 for t in report["trials"])


def test_verification_rejects_a_foreign_character():
    g, rep = _rotation_rep()
    with pytest.raises(BadParameter):
        verify_theory_vs_oracle(rep, regular_character(g))


# ---------------------------------------------------------------------------
# ideal characters are insensitive to the spanning point


def test_ideal_component_symmetries_match_at_three_points():
    g = cyclic(4)
    for gamma in rational_ideal_characters(character_table(g)):
        rep = ideal_component_rep(g, gamma)
        reference = None
        for seed in (11, 12, 13):
            od = sample_generic_point(rep, seed=seed)
            accepted = frozenset(
                images
                for images in itertools.permutations(range(4))
                if annihilator_symmetry_check(od, GPermutation(images))
            )
            if reference is None:
                reference = accepted
            else:
                assert accepted == reference


def test_symmetry_traces_agree_across_generic_points():
    _, rep = _rotation_rep()
    traces = []
    for seed in (21, 22):
        od = sample_generic_point(rep, seed=seed)
        lsg = linear_symmetry_group(od)
        mats = [lsg.matrix_for(p) for p in lsg.permutation_group.elements()]
        traces.append(sorted(m.trace() for m in mats))
    assert traces[0] == traces[1]


# ---------------------------------------------------------------------------
# closure iteration


def test_rotation_orbit_closes_after_one_step():
    _, rep = _rotation_rep()
    report = closure_iterate(orbit(rep, (1, 0)), seed=0)
    assert report["orders"] == [4, 8, 8]
    assert report["stabilized"] is True


def test_octagon_is_already_closed():
    g = dihedral(4)
    r = RationalMatrix.from_rows([[0, -1], [1, 0]])
    s = RationalMatrix.from_rows([[1, 0], [0, -1]])
    rep = rep_from_generators(g, [(1, r), (4, s)])
    od = sample_generic_point(rep, seed=7)
    report = closure_iterate(od, seed=0)
    assert report["orders"] == [8, 8]
    assert report["stabilized"] is True


def test_two_point_orbit_is_already_closed():
    rep = regular_representation(cyclic(2))
    od = sample_generic_point(rep, seed=0)
    report = closure_iterate(od, seed=0)
    assert report["orders"] == [2, 2]
    assert report["stabilized"] is True


# ---------------------------------------------------------------------------
# serialization


def test_representation_round_trips_through_json():
    g, rep = _rotation_rep()
    blob = rep_to_json(rep)
    assert blob == json.loads(json.dumps(blob))
    back = rep_from_json(g, blob)
    assert all(
        a.entries == b.entries for a, b in zip(back.matrices, rep.matrices)
    )


def test_representation_json_rejects_corruption():
    g, rep = _rotation_rep()
    blob = rep_to_json(rep)
    wrong_group = dict(blob, group="cyclic(5)")
    with pytest.raises(SchemaError):
        rep_from_json(g, wrong_group)
    bad_matrix = json.loads(json.dumps(blob))
    bad_matrix["generators"][0]["matrix"][0] = ["1"]
    with pytest.raises(SchemaError):
        rep_from_json(g, bad_matrix)


def test_point_round_trips_through_json():
    v = (Fraction(1, 2), Fraction(-3), Fraction(0))
    assert point_from_json(point_to_json(v)) == v
    with pytest.raises(SchemaError):
        point_from_json("not a list")

"""Geometric ground truth for orbit symmetry groups.

Everything here works with explicit rational matrices and explicit orbit
point sets, independent of the character-theoretic route, so the two can
be played against each other.  Linear symmetry groups come from a
backtracking search over images of a basis of orbit points; membership
of a coordinate permutation is decided through its action on the
annihilator of the base point.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .chars import Character, conjugacy_classes, values_on_elements
from .errors import (
    BadParameter,
    DimensionMismatch,
    GroupMismatch,
    NotAGenericSymmetry,
    NotCyclic,
    NotGenerating,
    NotRationalIdealCharacter,
    NotSpanning,
    PersistentMismatch,
    RelationViolated,
    SchemaError,
    SearchBudgetExceeded,
    Singular,
    ValidationFailure,
)
from .exact import (
    Cyclo,
    RationalMatrix,
    cyclo_is_rational,
    mat_inverse,
    mat_kernel,
    mat_rank,
    mat_solve_mat,
    rat_from_json,
    rat_to_str,
)
from .gensym import sym_group_of_character
from .groups import (
    FiniteGroup,
    GPermutation,
    GPermutationGroup,
    Subgroup,
    generating_set,
    subgroup,
)

DEFAULT_BUDGET = 200_000


@dataclass(frozen=True, eq=False)
class RationalRepresentation:
    """A matrix representation with one invertible matrix per element."""

    group: FiniteGroup
    dim: int
    matrices: tuple[RationalMatrix, ...]
    character: Character


def _character_of(g: FiniteGroup, mats) -> Character:
    cd = conjugacy_classes(g)
    return Character.from_values(
        g, [Cyclo.rational(mats[r].trace()) for r in cd.representatives]
    )


def _check_homomorphism(g: FiniteGroup, mats) -> None:
    idm = RationalMatrix.identity(mats[0].rows)
    if mats[g.identity].entries != idm.entries:
        raise RelationViolated("the identity element does not map to the identity matrix")
    for a in range(g.order):
        ma = mats[a]
        for b in range(g.order):
            if (ma * mats[b]).entries != mats[g.mul(a, b)].entries:
                raise RelationViolated(
                    f"matrices at elements {a} and {b} do not multiply to the"
                    f" matrix at their product"
                )


def rep_from_generators(
    g: FiniteGroup, gens: list[tuple[int, RationalMatrix]]
) -> RationalRepresentation:
    """Complete generator matrices to all elements and validate throughout."""
    if not gens:
        raise NotGenerating("no generators given")
    d = gens[0][1].rows
    for el, m in gens:
        if not 0 <= el < g.order:
            raise BadParameter(f"element index {el} out of range")
        if m.rows != m.cols or m.rows != d:
            raise DimensionMismatch(f"generator matrix at element {el} is not {d}x{d}")
        if mat_inverse(m) is None:
            raise Singular(f"generator matrix at element {el} is singular")
    mats: dict[int, RationalMatrix] = {g.identity: RationalMatrix.identity(d)}
    frontier = [g.identity]
    while frontier:
        a = frontier.pop(0)
        for el, m in gens:
            b = g.mul(a, el)
            prod = mats[a] * m
            known = mats.get(b)
            if known is None:
                mats[b] = prod
                frontier.append(b)
            elif known.entries != prod.entries:
                raise RelationViolated(
                    f"element {b} is reached with two different matrices"
                )
    if len(mats) != g.order:
        raise NotGenerating(
            f"given elements generate only {len(mats)} of {g.order} elements"
        )
    out = tuple(mats[a] for a in range(g.order))
    _check_homomorphism(g, out)
    return RationalRepresentation(g, d, out, _character_of(g, out))


def regular_representation(g: FiniteGroup) -> RationalRepresentation:
    """Permutation matrices of left translation on the group itself."""
    n = g.order
    mats = []
    for a in range(n):
        rows = [[Fraction(0)] * n for _ in range(n)]
        for y in range(n):
            rows[g.mul(a, y)][y] = Fraction(1)
        mats.append(RationalMatrix(n, n, tuple(tuple(r) for r in rows)))
    rep = RationalRepresentation(g, n, tuple(mats), _character_of(g, mats))
    vals = values_on_elements(rep.character)
    if vals[g.identity] != n or any(vals[x] != 0 for x in range(n) if x != g.identity):
        raise ValidationFailure("regular representation traces are off")
    return rep


def ideal_component_rep(g: FiniteGroup, gamma: Character) -> RationalRepresentation:
    """The subrepresentation cut out by gamma's central idempotent.

    gamma must be a rational ideal-component character or a sum of such;
    the idempotent has coefficients gamma(h^-1)/|G| and the basis is read
    off its pivot columns inside the regular representation.
    """
    if gamma.group != g:
        raise GroupMismatch("character belongs to a different group")
    n = g.order
    vals = values_on_elements(gamma)
    coeff = []
    for h in range(n):
        q = cyclo_is_rational(vals[g.inverse[h]])
        if q is None:
            raise NotRationalIdealCharacter("character values must be rational")
        coeff.append(q / n)
    e_mat = RationalMatrix(
        n,
        n,
        tuple(
            tuple(coeff[g.mul(x, g.inverse[y])] for y in range(n)) for x in range(n)
        ),
    )
    if (e_mat * e_mat).entries != e_mat.entries:
        raise NotRationalIdealCharacter(
            "the associated group-algebra element is not idempotent"
        )
    degree = cyclo_is_rational(gamma.degree)
    d = mat_rank(e_mat)
    if degree is None or degree.denominator != 1 or d != degree:
        raise NotRationalIdealCharacter(
            f"idempotent rank {d} does not match the degree {gamma.degree}"
        )
    cols = list(zip(*e_mat.entries))
    pivots = []
    probe: list[list[Fraction]] = []
    for j in range(n):
        probe.append(list(cols[j]))
        if mat_rank(RationalMatrix.from_rows(probe)) == len(pivots) + 1:
            pivots.append(j)
            if len(pivots) == d:
                break
        else:
            probe.pop()
    basis = RationalMatrix(
        n, d, tuple(tuple(cols[j][x] for j in pivots) for x in range(n))
    )
    mats = []
    for a in range(n):
        moved = RationalMatrix(
            n, d, tuple(basis.entries[g.mul(g.inverse[a], x)] for x in range(n))
        )
        da = _solve_in_basis(basis, moved)
        mats.append(da)
    rep = RationalRepresentation(g, d, tuple(mats), _character_of(g, mats))
    if rep.character.values != gamma.values:
        raise NotRationalIdealCharacter(
            "component traces do not reproduce the character"
        )
    return rep


def _solve_in_basis(basis: RationalMatrix, target: RationalMatrix) -> RationalMatrix:
    sol = mat_solve_mat(basis, target)
    if sol is None:
        raise ValidationFailure("column space is not invariant under the action")
    return sol


@dataclass(frozen=True, eq=False)
class OrbitData:
    """An orbit point set with its bookkeeping.

    points are deduplicated in first-appearance order over the elements;
    basis_elements name group elements whose points form a basis when the
    orbit spans.
    """

    rep: RationalRepresentation
    base_point: tuple[Fraction, ...]
    points: tuple[tuple[Fraction, ...], ...]
    point_of_element: tuple[int, ...]
    stabilizer: Subgroup
    spans: bool
    basis_elements: tuple[int, ...] | None


def orbit(rep: RationalRepresentation, v) -> OrbitData:
    vv = tuple(Fraction(x) for x in v)
    if len(vv) != rep.dim:
        raise DimensionMismatch(
            f"point of length {len(vv)} against dimension {rep.dim}"
        )
    g = rep.group
    n = g.order
    images = [rep.matrices[a].apply(vv) for a in range(n)]
    index: dict[tuple, int] = {}
    points: list[tuple[Fraction, ...]] = []
    of_element = []
    for a in range(n):
        j = index.get(images[a])
        if j is None:
            j = len(points)
            index[images[a]] = j
            points.append(images[a])
        of_element.append(j)
    stab = subgroup(g, [a for a in range(n) if images[a] == vv])
    if len(points) * stab.order != n:
        raise ValidationFailure("orbit size times stabilizer order misses the group order")
    point_matrix = RationalMatrix(len(points), rep.dim, tuple(points))
    spans = mat_rank(point_matrix) == rep.dim
    basis_elements = None
    if spans:
        chosen: list[int] = []
        probe: list[tuple[Fraction, ...]] = []
        for a in range(n):
            probe.append(images[a])
            if mat_rank(RationalMatrix(len(probe), rep.dim, tuple(probe))) == len(chosen) + 1:
                chosen.append(a)
                if len(chosen) == rep.dim:
                    break
            else:
                probe.pop()
        basis_elements = tuple(chosen)
    return OrbitData(rep, vv, tuple(points), tuple(of_element), stab, spans, basis_elements)


# ---------------------------------------------------------------------------
# brute-force linear symmetry group


@dataclass(eq=False)
class LinearSymmetryGroup:
    """GL of an orbit point set: generator matrices, their point actions,
    and the exact order via a stabilizer chain on the point permutations."""

    matrices: tuple[RationalMatrix, ...]
    orbit_permutations: tuple[GPermutation, ...]
    order: int
    permutation_group: GPermutationGroup
    points: tuple[tuple[Fraction, ...], ...] = field(repr=False)
    basis_indices: tuple[int, ...] = field(repr=False)
    basis_inverse: RationalMatrix = field(repr=False)

    def contains_permutation(self, perm: GPermutation) -> bool:
        return self.permutation_group.contains(perm)

    def matrix_for(self, perm: GPermutation) -> RationalMatrix:
        """The unique linear map inducing a member permutation."""
        if not self.permutation_group.contains(perm):
            raise NotAGenericSymmetry("permutation is not induced by a linear symmetry")
        return _matrix_of_point_map(
            self.points, self.basis_indices, self.basis_inverse, perm.images
        )


def _matrix_of_point_map(points, basis_idx, binv, images) -> RationalMatrix:
    d = len(basis_idx)
    q_cols = [points[images[b]] for b in basis_idx]
    q = RationalMatrix(d, d, tuple(tuple(col[r] for col in q_cols) for r in range(d)))
    a = q * binv
    for x, p in enumerate(points):
        if a.apply(p) != points[images[x]]:
            raise ValidationFailure("matrix does not induce the claimed point map")
    return a


def _point_symmetry_generators(points, basis_idx, seeds, budget):
    """Backtracking search for generators of the point-set symmetry group.

    Walks the basis positions identity-first; a candidate image must keep
    the partial basis image independent, and every point whose coordinates
    are supported on the assigned basis prefix gets a forced image that
    must land on a distinct orbit point.  Seeds join the orbit pruning.

    A symmetry also maps every linear relation among the points to a
    relation, so each assigned pair must be consistent with one linear
    map between relation-coefficient profiles; that echelon check prunes
    class-mixing prefixes long before a forced point would.
    """
    m = len(points)
    d = len(basis_idx)
    b_cols = [points[b] for b in basis_idx]
    bmat = RationalMatrix(d, d, tuple(tuple(col[r] for col in b_cols) for r in range(d)))
    binv = mat_inverse(bmat)
    if binv is None:
        raise ValidationFailure("basis points are not independent")
    coords = [binv.apply(p) for p in points]
    index = {p: i for i, p in enumerate(points)}
    forced_at = [[] for _ in range(d)]
    for p in range(m):
        top = max((k for k in range(d) if coords[p][k]), default=0)
        if p not in basis_idx:
            forced_at[top].append(p)

    profiles = None
    if 0 < m - d <= 32:
        rels = _relation_vectors(points)
        profiles = [tuple(rel[p] for rel in rels) for p in range(m)]

    img = [-1] * m
    used = [False] * m
    qvec: list = [None] * d
    ech: list[tuple[int, tuple]] = []
    rel_f: list[tuple[int, tuple, tuple]] = []
    rel_b: list[tuple[int, tuple, tuple]] = []
    log: list[int] = []
    nodes = [0]
    found: list[tuple[int, ...]] = []

    def rel_reduce(rows, key, val):
        """Returns False on conflict, None if (key, val) is implied, or a
        new normalized echelon row."""
        kv = list(key)
        vv = list(val)
        for piv, krow, vrow in rows:
            f = kv[piv]
            if f:
                kv = [a - f * b for a, b in zip(kv, krow)]
                vv = [a - f * b for a, b in zip(vv, vrow)]
        piv = next((k for k, a in enumerate(kv) if a), None)
        if piv is None:
            return None if not any(vv) else False
        inv = 1 / kv[piv]
        return piv, tuple(a * inv for a in kv), tuple(a * inv for a in vv)

    def rel_put(p, j) -> bool:
        # both directions: the profile map and its inverse must be linear
        new_f = rel_reduce(rel_f, profiles[j], profiles[p])
        if new_f is False:
            return False
        new_b = rel_reduce(rel_b, profiles[p], profiles[j])
        if new_b is False:
            return False
        if new_f is not None:
            rel_f.append(new_f)
        if new_b is not None:
            rel_b.append(new_b)
        return True

    def reduce_vec(vec):
        v = list(vec)
        for piv, row in ech:
            f = v[piv]
            if f:
                v = [a - f * b for a, b in zip(v, row)]
        for k in range(d):
            if v[k]:
                inv = 1 / v[k]
                return k, tuple(a * inv for a in v)
        return None

    def put(p, j) -> bool:
        if used[j]:
            return False
        if profiles is not None and not rel_put(p, j):
            return False
        img[p] = j
        used[j] = True
        log.append(p)
        return True

    def undo(mark):
        logpos, echpos, fpos, bpos = mark
        while len(log) > logpos:
            p = log.pop()
            used[img[p]] = False
            img[p] = -1
        del ech[echpos:]
        del rel_f[fpos:]
        del rel_b[bpos:]

    def assign_level(i, w):
        """Image w for basis position i plus all newly forced points."""
        mark = (len(log), len(ech), len(rel_f), len(rel_b))
        red = reduce_vec(points[w])
        if red is None or not put(basis_idx[i], w):
            undo(mark)
            return None
        qvec[i] = points[w]
        ech.append(red)
        for p in forced_at[i]:
            vec = tuple(
                sum(coords[p][k] * qvec[k][r] for k in range(i + 1))
                for r in range(d)
            )
            j = index.get(vec)
            if j is None or not put(p, j):
                undo(mark)
                return None
        return mark

    def complete(i) -> bool:
        if i == d:
            return True
        for w in range(m):
            if used[w]:
                continue
            nodes[0] += 1
            if nodes[0] > budget:
                raise _BudgetHit
            mark = assign_level(i, w)
            if mark is None:
                continue
            if complete(i + 1):
                return True
            undo(mark)
        return False

    def explore(i):
        if i == d:
            return
        explore(i + 1)
        v = basis_idx[i]
        gens_seen = -1
        reach = set()
        for w in range(m):
            if w == v:
                continue
            if gens_seen != len(found):
                # reach depends only on the level and the generators found
                # so far, so rebuild it only when a generator lands
                gens_seen = len(found)
                fixers = [
                    p
                    for p in (*seeds, *found)
                    if all(p[basis_idx[j]] == basis_idx[j] for j in range(i))
                ]
                reach = {v}
                queue = [v]
                while queue:
                    x = queue.pop()
                    for p in fixers:
                        y = p[x]
                        if y not in reach:
                            reach.add(y)
                            queue.append(y)
            if w in reach:
                continue
            marks = []
            ok = True
            for j in range(i):
                mk = assign_level(j, basis_idx[j])
                if mk is None:
                    ok = False
                    break
                marks.append(mk)
            if ok:
                nodes[0] += 1
                if nodes[0] > budget:
                    for mk in reversed(marks):
                        undo(mk)
                    raise _BudgetHit
                mk = assign_level(i, w)
                if mk is not None:
                    if complete(i + 1):
                        found.append(tuple(img))
                    undo(mk)
            for mk in reversed(marks):
                undo(mk)

    class _BudgetHit(Exception):
        pass

    try:
        explore(0)
    except _BudgetHit:
        partial = GPermutationGroup(
            m, [GPermutation(t) for t in (*seeds, *found)]
        )
        exc = SearchBudgetExceeded(
            f"symmetry search exceeded {budget} nodes;"
            f" order is at least {partial.order()}"
        )
        exc.lower_bound = partial.order()
        raise exc from None
    return found, binv


def _relation_vectors(points):
    """Basis of the left kernel of the point matrix, rows sparsified by
    pairwise elimination so small circuits surface."""
    m = len(points)
    n = len(points[0])
    one = Fraction(1)
    zero = Fraction(0)
    aug = [
        list(points[i]) + [one if i == j else zero for j in range(m)]
        for i in range(m)
    ]
    r = 0
    for col in range(n):
        sel = next((i for i in range(r, m) if aug[i][col]), None)
        if sel is None:
            continue
        aug[r], aug[sel] = aug[sel], aug[r]
        inv = 1 / aug[r][col]
        aug[r] = [a * inv for a in aug[r]]
        for i in range(m):
            if i != r and aug[i][col]:
                f = aug[i][col]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[r])]
        r += 1
        if r == m:
            break
    rels = [row[n:] for row in aug[r:]]

    def supp(vec):
        return [i for i, a in enumerate(vec) if a]

    # swap rows into one another when that shrinks support; a few passes
    # suffice and each step keeps the rows a kernel basis
    for _ in range(4):
        changed = False
        for i in range(len(rels)):
            size = len(supp(rels[i]))
            for j in range(len(rels)):
                if i == j:
                    continue
                for t in supp(rels[j]):
                    if not rels[i][t]:
                        continue
                    lam = rels[i][t] / rels[j][t]
                    cand = [a - lam * b for a, b in zip(rels[i], rels[j])]
                    cs = supp(cand)
                    if cs and len(cs) < size:
                        rels[i] = cand
                        size = len(cs)
                        changed = True
        if not changed:
            break
    return [v for v in rels if supp(v)]


def _point_relations(points):
    return [
        frozenset(i for i, a in enumerate(v) if a)
        for v in _relation_vectors(points)
    ]


def _pruning_basis(points, basis_idx):
    """A spanning subset ordered so dependent points sit behind short
    prefixes; the search can then force images early instead of only at
    the last level.  Points are taken circuit by circuit, smallest
    circuits first, then independent leftovers in index order."""
    m = len(points)
    d = len(basis_idx)
    if m > 32 or m == d:
        return basis_idx
    circuits = _point_relations(points)
    if not circuits:
        return basis_idx
    order: list[int] = []
    placed: set[int] = set()
    open_circuits = sorted(circuits, key=lambda s: (len(s), sorted(s)))
    while open_circuits:
        nxt = min(
            open_circuits,
            key=lambda s: (len(s - placed), len(s), sorted(s)),
        )
        open_circuits.remove(nxt)
        order.extend(sorted(nxt - placed))
        placed |= nxt
    order.extend(p for p in range(m) if p not in placed)

    ech: list[tuple[int, list[Fraction]]] = []
    chosen: list[int] = []
    for p in order:
        vec = list(points[p])
        for piv, row in ech:
            f = vec[piv]
            if f:
                vec = [a - f * b for a, b in zip(vec, row)]
        piv = next((k for k, a in enumerate(vec) if a), None)
        if piv is None:
            continue
        inv = 1 / vec[piv]
        ech.append((piv, [a * inv for a in vec]))
        chosen.append(p)
        if len(chosen) == d:
            break
    if len(chosen) < d:
        return basis_idx
    return chosen


def _group_from_points(points, basis_idx, seeds, budget) -> LinearSymmetryGroup:
    m = len(points)
    basis_idx = _pruning_basis(points, basis_idx)
    found, binv = _point_symmetry_generators(points, basis_idx, seeds, budget)
    gens = [GPermutation(t) for t in (*seeds, *found)]
    pgroup = GPermutationGroup(m, gens)
    out_perms = pgroup.generators
    mats = tuple(
        _matrix_of_point_map(points, basis_idx, binv, p.images) for p in out_perms
    )
    return LinearSymmetryGroup(
        mats, out_perms, pgroup.order(), pgroup, tuple(points), tuple(basis_idx), binv
    )


def linear_symmetry_group(
    orbit_data: OrbitData, budget: int = DEFAULT_BUDGET
) -> LinearSymmetryGroup:
    """All invertible linear maps permuting the orbit point set."""
    if not orbit_data.spans:
        raise NotSpanning("symmetry search needs a spanning orbit")
    g = orbit_data.rep.group
    of_el = orbit_data.point_of_element
    basis_idx = [of_el[a] for a in orbit_data.basis_elements]
    seeds = []
    m = len(orbit_data.points)
    reps_of_point = [None] * m
    for a in range(g.order):
        if reps_of_point[of_el[a]] is None:
            reps_of_point[of_el[a]] = a
    for s in generating_set(g):
        seeds.append(
            tuple(of_el[g.mul(s, reps_of_point[j])] for j in range(m))
        )
    return _group_from_points(orbit_data.points, basis_idx, seeds, budget)


def annihilator_symmetry_check(orbit_data: OrbitData, pi: GPermutation) -> bool:
    """Whether the coordinate permutation preserves the base point's annihilator."""
    if not orbit_data.spans:
        raise NotSpanning("the annihilator criterion needs a spanning orbit")
    g = orbit_data.rep.group
    n = g.order
    if pi.degree != n:
        raise DimensionMismatch(
            f"permutation of degree {pi.degree} against a group of order {n}"
        )
    d = orbit_data.rep.dim
    cols = [orbit_data.points[orbit_data.point_of_element[a]] for a in range(n)]
    k_mat = RationalMatrix(d, n, tuple(tuple(cols[a][r] for a in range(n)) for r in range(d)))
    for w in mat_kernel(k_mat):
        moved = [Fraction(0)] * n
        for a in range(n):
            moved[pi.images[a]] = w[a]
        if any(k_mat.apply(moved)):
            return False
    return True


def _kernel_members(rep: RationalRepresentation) -> list[int]:
    idm = RationalMatrix.identity(rep.dim)
    return [
        a for a in range(rep.group.order) if rep.matrices[a].entries == idm.entries
    ]


def sample_generic_point(
    rep: RationalRepresentation, seed: int = 0, bound: int = 99, retries: int = 5
) -> OrbitData:
    """A random integer point whose orbit spans with minimal stabilizer.

    Genericity is not certified; it is established operationally by the
    spanning and stabilizer conditions, with resampling for bad draws.
    """
    if rep.dim < 1:
        raise NotCyclic("a zero module has no generating point")
    if bound < 1:
        raise BadParameter(f"sampling bound must be positive, got {bound}")
    kernel = set(_kernel_members(rep))
    rng = random.Random(seed)
    for _ in range(retries):
        v = tuple(Fraction(rng.randint(-bound, bound)) for _ in range(rep.dim))
        od = orbit(rep, v)
        if od.spans and set(od.stabilizer.members) == kernel:
            return od
    raise NotCyclic(f"no spanning point with minimal stabilizer in {retries} draws")


# ---------------------------------------------------------------------------
# theory vs oracle


def _push_to_points(orbit_data: OrbitData, pi: GPermutation):
    """The orbit permutation induced by a symmetry of the group, if coherent."""
    of_el = orbit_data.point_of_element
    m = len(orbit_data.points)
    out = [-1] * m
    for x in range(len(of_el)):
        j = of_el[x]
        target = of_el[pi.images[x]]
        if out[j] == -1:
            out[j] = target
        elif out[j] != target:
            return None
    return GPermutation(tuple(out))


def verify_theory_vs_oracle(
    rep: RationalRepresentation,
    chi: Character,
    trials: int = 3,
    seed: int = 0,
    budget: int = DEFAULT_BUDGET,
) -> dict:
    """Play the character-theoretic symmetry group against the brute-force one.

    At each sampled generic point the pushed-down permutation groups must
    agree, the order formula |Sym| = |GL(Gv)| * (|H|!)^[G:H] must hold,
    and oracle matrix traces must reproduce the extended character on
    every generator.  A failing point is resampled a few times before the
    mismatch is reported as persistent.
    """
    g = rep.group
    if chi.group != g:
        raise GroupMismatch("character belongs to a different group")
    if chi.values != rep.character.values:
        raise BadParameter("character does not match the representation's traces")
    theory = sym_group_of_character(chi, budget)
    t_group = theory.group_of_permutations
    theory_order = t_group.order()
    rng = random.Random(seed)
    entries = []
    for trial in range(trials):
        failure = "no spanning point"
        done = False
        for _ in range(5):
            od = sample_generic_point(rep, seed=rng.randrange(2**32))
            oracle = linear_symmetry_group(od, budget)
            h = od.stabilizer.order
            fibers = g.order // od.stabilizer.order
            pushed = []
            for p in t_group.generators:
                q = _push_to_points(od, p)
                if q is None:
                    break
                pushed.append(q)
            if len(pushed) != len(t_group.generators):
                failure = "a symmetry does not respect the orbit fibers"
                continue
            p_group = GPermutationGroup(len(od.points), pushed)
            groups_equal = p_group.order() == oracle.order and all(
                oracle.permutation_group.contains(q) for q in p_group.generators
            )
            if not groups_equal:
                failure = (
                    f"pushed theory group of order {p_group.order()} differs"
                    f" from oracle order {oracle.order}"
                )
                continue
            formula_ok = theory_order == oracle.order * math.factorial(h) ** fibers
            if not formula_ok:
                failure = (
                    f"order formula fails: {theory_order} !="
                    f" {oracle.order} * ({h}!)^{fibers}"
                )
                continue
            trace_ok = True
            for p in t_group.generators:
                q = _push_to_points(od, p)
                mat = oracle.matrix_for(q)
                if theory.hat_values[p] != mat.trace():
                    trace_ok = False
                    failure = "a generator's matrix trace misses the extended character"
                    break
            if not trace_ok:
                continue
            entries.append(
                {
                    "point": [rat_to_str(x) for x in od.base_point],
                    "orbit_size": len(od.points),
                    "oracle_order": oracle.order,
                    "groups_equal": True,
                    "formula_ok": True,
                    "traces_ok": True,
                }
            )
            done = True
            break
        if not done:
            raise PersistentMismatch(
                f"trial {trial}: {failure} (after 5 resamples)"
            )
    return {
        "schema": "orbitsym/1",
        "group": g.label,
        "dim": rep.dim,
        "theory_order": theory_order,
        "trials": entries,
        "passed": True,
    }


# ---------------------------------------------------------------------------
# closure iteration


def closure_iterate(
    orbit_data: OrbitData,
    seed: int = 0,
    max_step_order: int = 10_000,
    budget: int = DEFAULT_BUDGET,
) -> dict:
    """Recompute the symmetry group of its own generic orbit until stable.

    The chain starts at the order of the acting group's image, then lists
    each recomputed symmetry group order; one extra step is expected at
    most.  A step whose group is too large to enumerate raises
    SearchBudgetExceeded.
    """
    if not orbit_data.spans:
        raise NotSpanning("closure iteration needs a spanning orbit")
    rep = orbit_data.rep
    image_order = rep.group.order // len(_kernel_members(rep))
    chain = [image_order]
    current = linear_symmetry_group(orbit_data, budget)
    chain.append(current.order)
    rng = random.Random(seed)
    while chain[-1] != chain[-2] and len(chain) < 6:
        if current.order > max_step_order:
            raise SearchBudgetExceeded(
                f"closure step needs {current.order} group elements,"
                f" over the cap {max_step_order}"
            )
        mats = [
            current.matrix_for(p)
            for p in current.permutation_group.elements(max_size=max_step_order)
        ]
        d = mats[0].rows
        od = None
        for _ in range(5):
            w = tuple(Fraction(rng.randint(-99, 99)) for _ in range(d))
            images = [m.apply(w) for m in mats]
            if len(set(images)) != len(images):
                continue
            index = {p: i for i, p in enumerate(images)}
            points = tuple(images)
            if mat_rank(RationalMatrix(len(points), d, points)) != d:
                continue
            chosen = []
            probe: list[tuple] = []
            for i, p in enumerate(points):
                probe.append(p)
                if mat_rank(RationalMatrix(len(probe), d, tuple(probe))) == len(chosen) + 1:
                    chosen.append(i)
                    if len(chosen) == d:
                        break
                else:
                    probe.pop()
            seeds = [
                tuple(index[a.apply(points[j])] for j in range(len(points)))
                for a in current.matrices
            ]
            od = (points, chosen, seeds)
            break
        if od is None:
            raise NotCyclic("no free generic point for the closure step in 5 draws")
        points, chosen, seeds = od
        current = _group_from_points(points, chosen, seeds, budget)
        chain.append(current.order)
    return {
        "schema": "orbitsym/1",
        "orders": chain,
        "stabilized": chain[-1] == chain[-2],
    }


# ---------------------------------------------------------------------------
# serialization


def rep_to_json(rep: RationalRepresentation) -> dict:
    gens = generating_set(rep.group)
    return {
        "schema": "orbitsym/1",
        "group": rep.group.label,
        "dim": rep.dim,
        "generators": [
            {
                "element": int(s),
                "matrix": [
                    [rat_to_str(x) for x in row] for row in rep.matrices[s].entries
                ],
            }
            for s in gens
        ],
    }


def rep_from_json(g: FiniteGroup, obj) -> RationalRepresentation:
    if not isinstance(obj, dict):
        raise SchemaError("representation document must be an object at /")
    if obj.get("schema") != "orbitsym/1":
        raise SchemaError("unsupported or missing version at /schema")
    if obj.get("group") != g.label:
        raise SchemaError(
            f"group label {obj.get('group')!r} does not match {g.label!r} at /group"
        )
    gens_doc = obj.get("generators")
    if not isinstance(gens_doc, list) or not gens_doc:
        raise SchemaError("expected a nonempty list at /generators")
    dim = obj.get("dim")
    if not isinstance(dim, int) or dim < 1:
        raise SchemaError("expected a positive integer at /dim")
    gens = []
    for i, entry in enumerate(gens_doc):
        if not isinstance(entry, dict):
            raise SchemaError(f"expected an object at /generators/{i}")
        el = entry.get("element")
        if not isinstance(el, int) or not 0 <= el < g.order:
            raise SchemaError(f"bad element index at /generators/{i}/element")
        rows_doc = entry.get("matrix")
        if (
            not isinstance(rows_doc, list)
            or len(rows_doc) != dim
            or any(not isinstance(r, list) or len(r) != dim for r in rows_doc)
        ):
            raise SchemaError(f"expected a {dim}x{dim} matrix at /generators/{i}/matrix")
        rows = [
            [rat_from_json(x, f"/generators/{i}/matrix/{r}/{c}") for c, x in enumerate(row)]
            for r, row in enumerate(rows_doc)
        ]
        gens.append((el, RationalMatrix.from_rows(rows)))
    return rep_from_generators(g, gens)


def point_to_json(v) -> list:
    return [rat_to_str(Fraction(x)) for x in v]


def point_from_json(arr) -> tuple[Fraction, ...]:
    if not isinstance(arr, list) or not arr:
        raise SchemaError("expected a nonempty list of rationals at /")
    return tuple(rat_from_json(x, f"/{i}") for i, x in enumerate(arr))

"""Generic symmetry groups of finite group orbits.

Membership is decided by two finite conditions: the ideal part of the
character acts as an edge coloring of the group that any symmetry must
preserve, and the kernel of the residual splits the group into cosets
that must be translated coherently.  The full symmetry group factors as
left translations composed with the stabilizer of the identity, and the
stabilizer is found by partition-backtracking over the coloring.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .chars import (
    Character,
    character_table,
    inner_product,
    irreducible_multiplicities,
    kernel_of,
    trivial_character,
    values_on_elements,
)
from .errors import (
    DimensionMismatch,
    NotACharacter,
    NotAbelian,
    NotAGenericSymmetry,
    NotCyclicModuleCharacter,
    NotIrreducible,
    SearchBudgetExceeded,
    SizeLimit,
    ValidationFailure,
)
from .exact import Cyclo, cyclo_is_rational
from .groups import (
    FiniteGroup,
    GPermutation,
    GPermutationGroup,
    Subgroup,
    cayley_permutation,
    generating_set,
    is_abelian,
)

DEFAULT_BUDGET = 200_000


@dataclass(frozen=True)
class IdealPartDecomposition:
    """A character split into ideal part and residual.

    The ideal part collects constituents whose multiplicity equals their
    degree; N is the kernel of what remains (all of G when the residual
    vanishes).
    """

    chi: Character
    chi_I: Character
    residual: Character
    N: Subgroup
    constituents_of_residual: tuple[tuple[Character, int], ...]


def _decompose_from_mults(chi: Character, mults) -> IdealPartDecomposition:
    t = character_table(chi.group)
    ideal = trivial_character(chi.group) * 0
    residual = ideal
    parts = []
    for m, psi in zip(mults, t.irreducibles):
        deg = int(cyclo_is_rational(psi.degree))
        if m > deg:
            raise NotCyclicModuleCharacter(
                f"multiplicity {m} of a degree-{deg} constituent exceeds the degree"
            )
        if m == deg:
            ideal = ideal + psi * deg
        elif m:
            residual = residual + psi * m
            parts.append((psi, m))
    return IdealPartDecomposition(
        chi, ideal, residual, kernel_of(residual), tuple(parts)
    )


def ideal_part(chi: Character) -> IdealPartDecomposition:
    try:
        mults = irreducible_multiplicities(chi)
    except NotACharacter as exc:
        raise NotCyclicModuleCharacter(str(exc)) from None
    return _decompose_from_mults(chi, mults)


@dataclass(frozen=True)
class CayleyColoring:
    """Edge colors chi_I(g^-1 h) interned to ids, plus the N-coset blocks."""

    group: FiniteGroup
    color_of: tuple[tuple[int, ...], ...]
    coset_partition: tuple[tuple[int, ...], ...]
    palette: tuple[Cyclo, ...]


def cayley_coloring(dec: IdealPartDecomposition) -> CayleyColoring:
    g = dec.chi.group
    n = g.order
    vals = values_on_elements(dec.chi_I)
    palette: list[Cyclo] = []
    ids: dict[Cyclo, int] = {}
    elem_color = []
    for x in range(n):
        cid = ids.get(vals[x])
        if cid is None:
            cid = len(palette)
            ids[vals[x]] = cid
            palette.append(vals[x])
        elem_color.append(cid)
    rows = tuple(
        tuple(elem_color[g.mul(g.inverse[a], b)] for b in range(n))
        for a in range(n)
    )
    seen = [False] * n
    blocks = []
    for x in range(n):
        if seen[x]:
            continue
        block = tuple(sorted(g.mul(x, m) for m in dec.N.members))
        for y in block:
            seen[y] = True
        blocks.append(block)
    return CayleyColoring(g, rows, tuple(blocks), tuple(palette))


@dataclass
class GenericSymmetryResult:
    group_of_permutations: GPermutationGroup
    is_generically_closed: bool
    hat_values: dict[GPermutation, Cyclo]


def _block_ids(coloring: CayleyColoring) -> list[int]:
    out = [0] * coloring.group.order
    for i, block in enumerate(coloring.coset_partition):
        for x in block:
            out[x] = i
    return out


def _member_ok(coloring: CayleyColoring, pi: GPermutation) -> bool:
    g = coloring.group
    n = g.order
    if pi.degree != n:
        raise DimensionMismatch(
            f"permutation of degree {pi.degree} against a group of order {n}"
        )
    e = coloring.color_of
    im = pi.images
    for a in range(n):
        ea = e[a]
        eia = e[im[a]]
        for b in range(n):
            if eia[im[b]] != ea[b]:
                return False
    block = _block_ids(coloring)
    t = im[g.identity]
    for x in range(n):
        if block[im[x]] != block[g.mul(t, x)]:
            return False
    return True


def _hat_value(chi: Character, pi: GPermutation) -> Cyclo:
    g = chi.group
    vals = values_on_elements(chi)
    total = Cyclo.rational(0)
    for x in range(g.order):
        total = total + vals[g.mul(g.inverse[x], pi.images[x])]
    return total * Fraction(1, g.order)


# ---------------------------------------------------------------------------
# stabilizer search


def _stable_colors(n: int, e, init: list[int]) -> list[int]:
    """Iterated neighborhood refinement until the partition stops splitting."""
    colors = init
    cell_count = len(set(colors))
    while True:
        sigs = []
        for v in range(n):
            ev = e[v]
            neigh = sorted((colors[w], ev[w], e[w][v]) for w in range(n))
            sigs.append((colors[v], tuple(neigh)))
        ids: dict = {}
        new = []
        for s in sigs:
            if s not in ids:
                ids[s] = len(ids)
            new.append(ids[s])
        if len(ids) == cell_count:
            return new
        colors = new
        cell_count = len(ids)


class _BudgetHit(Exception):
    pass


def _stabilizer_search(
    g: FiniteGroup, coloring: CayleyColoring, budget: int
) -> list[GPermutation]:
    """Generators of the symmetries fixing the identity element.

    Classic automorphism backtracking: walk a static base identity-first,
    and at each level try one completion per candidate image not already
    reachable by the generators found so far.
    """
    n = g.order
    idv = g.identity
    e = coloring.color_of
    block = _block_ids(coloring)

    init_ids: dict = {}
    init = []
    for v in range(n):
        key = (v == idv, block[v], e[idv][v], e[v][idv])
        if key not in init_ids:
            init_ids[key] = len(init_ids)
        init.append(init_ids[key])
    colors = _stable_colors(n, e, init)
    cells: dict[int, list[int]] = {}
    for v in range(n):
        cells.setdefault(colors[v], []).append(v)
    base = sorted(
        (v for v in range(n) if v != idv),
        key=lambda v: (len(cells[colors[v]]), colors[v], v),
    )
    pos_of = {v: i for i, v in enumerate(base)}

    img = [-1] * n
    used = [False] * n
    img[idv] = idv
    used[idv] = True
    assigned = [idv]
    nodes = [0]
    kgens: list[tuple[int, ...]] = []

    def compatible(u: int, w: int) -> bool:
        eu = e[u]
        ew = e[w]
        for x in assigned:
            y = img[x]
            if e[x][u] != e[y][w] or eu[x] != ew[y]:
                return False
        return True

    def complete(pos: int) -> bool:
        if pos == len(base):
            return True
        u = base[pos]
        for w in cells[colors[u]]:
            if used[w] or not compatible(u, w):
                continue
            nodes[0] += 1
            if nodes[0] > budget:
                raise _BudgetHit
            img[u] = w
            used[w] = True
            assigned.append(u)
            if complete(pos + 1):
                return True
            assigned.pop()
            img[u] = -1
            used[w] = False
        return False

    def snapshot() -> tuple[int, ...]:
        return tuple(img)

    def clear_from(level: int) -> None:
        while len(assigned) > level:
            x = assigned.pop()
            used[img[x]] = False
            img[x] = -1

    def explore(i: int) -> None:
        if i == len(base):
            return
        explore(i + 1)
        v = base[i]
        for w in cells[colors[v]]:
            if w == v:
                continue
            # orbit of v under the found generators fixing base[:i]
            fixers = [
                p for p in kgens if all(p[base[j]] == base[j] for j in range(i))
            ]
            orbit = {v}
            frontier = [v]
            while frontier:
                x = frontier.pop()
                for p in fixers:
                    y = p[x]
                    if y not in orbit:
                        orbit.add(y)
                        frontier.append(y)
            if w in orbit:
                continue
            # one completion with prefix base[:i] fixed and v -> w
            clear_from(1)
            ok = True
            for j in range(i):
                b = base[j]
                img[b] = b
                used[b] = True
                assigned.append(b)
            if used[w] or not compatible(v, w):
                ok = False
            if ok:
                nodes[0] += 1
                if nodes[0] > budget:
                    raise _BudgetHit
                img[v] = w
                used[w] = True
                assigned.append(v)
                if complete(i + 1):
                    found = snapshot()
                    perm = GPermutation(found)
                    if not _member_ok(coloring, perm):
                        raise ValidationFailure(
                            "search produced a map violating the symmetry conditions"
                        )
                    kgens.append(found)
            clear_from(1)
        return

    try:
        explore(0)
    except _BudgetHit:
        partial = GPermutationGroup(n, [GPermutation(t) for t in kgens])
        bound = n * partial.order()
        exc = SearchBudgetExceeded(
            f"search exceeded {budget} nodes; order is at least {bound}"
        )
        exc.lower_bound = bound
        raise exc from None
    return [GPermutation(t) for t in kgens]


# ---------------------------------------------------------------------------
# the symmetry group of a character


def _left_cosets(g: FiniteGroup, sub: Subgroup) -> list[tuple[int, ...]]:
    seen = [False] * g.order
    blocks = []
    for x in range(g.order):
        if seen[x]:
            continue
        block = tuple(sorted(g.mul(x, m) for m in sub.members))
        for y in block:
            seen[y] = True
        blocks.append(block)
    return blocks


def _block_group(g: FiniteGroup, sub: Subgroup) -> GPermutationGroup:
    """All permutations moving left cosets of sub by one left translation.

    Order |G/H| * (|H|!) ^ [G:H], verified against the stabilizer chain.
    """
    n = g.order
    gens = [cayley_permutation(g, s) for s in generating_set(g)]
    for block in _left_cosets(g, sub):
        if len(block) >= 2:
            swap = list(range(n))
            swap[block[0]], swap[block[1]] = block[1], block[0]
            gens.append(GPermutation(tuple(swap)))
        if len(block) >= 3:
            cyc = list(range(n))
            for a, b in zip(block, block[1:] + block[:1]):
                cyc[a] = b
            gens.append(GPermutation(tuple(cyc)))
    group = GPermutationGroup(n, gens)
    index = n // sub.order
    expected = index * math.factorial(sub.order) ** index
    if group.order() != expected:
        raise ValidationFailure(
            f"coset-block group has order {group.order()}, expected {expected}"
        )
    return group


def _reject_zero(chi: Character) -> None:
    if all(v == 0 for v in chi.values):
        raise NotACharacter("the zero character has no generator semantics")


def _sym_result(
    chi: Character, dec: IdealPartDecomposition, budget: int
) -> GenericSymmetryResult:
    g = chi.group
    n = g.order
    coloring = cayley_coloring(dec)
    e = coloring.color_of
    offdiag = set()
    for a in range(n):
        for b in range(n):
            if a != b:
                offdiag.add(e[a][b])
    if len(offdiag) <= 1:
        # the coloring constrains nothing off the diagonal, so membership
        # reduces to the coset condition alone and has a closed form
        sym = _block_group(g, dec.N)
    else:
        p_gens = _stabilizer_search(g, coloring, budget)
        p_order = GPermutationGroup(n, p_gens).order()
        lam = [cayley_permutation(g, s) for s in generating_set(g)]
        for perm in lam:
            if not _member_ok(coloring, perm):
                raise ValidationFailure(
                    "a left translation violates the symmetry conditions"
                )
        sym = GPermutationGroup(n, lam + p_gens)
        if sym.order() != n * p_order:
            raise ValidationFailure(
                f"group order {sym.order()} does not factor as"
                f" {n} * {p_order}"
            )
    hat: dict[GPermutation, Cyclo] = {}
    for perm in (GPermutation.identity(n), *sym.generators):
        hat[perm] = _hat_value(chi, perm)
    return GenericSymmetryResult(sym, sym.order() == n, hat)


def sym_group_of_character(
    chi: Character, budget: int = DEFAULT_BUDGET
) -> GenericSymmetryResult:
    """The full group of permutations preserving the orbit geometry of chi."""
    _reject_zero(chi)
    dec = ideal_part(chi)
    return _sym_result(chi, dec, budget)


def sym_of_irreducible(psi: Character) -> GenericSymmetryResult:
    """Closed form for irreducible characters: coset blocks of the kernel."""
    d = cyclo_is_rational(psi.degree)
    if d is None or d < 1 or inner_product(psi, psi) != 1:
        raise NotIrreducible(
            f"need an irreducible character, got degree {psi.degree}"
        )
    g = psi.group
    sym = _block_group(g, kernel_of(psi))
    hat: dict[GPermutation, Cyclo] = {}
    for perm in (GPermutation.identity(g.order), *sym.generators):
        hat[perm] = _hat_value(psi, perm)
    return GenericSymmetryResult(sym, sym.order() == g.order, hat)


def hat_character(chi: Character, pi: GPermutation) -> Cyclo:
    """The extended character (1/|G|) sum of chi(g^-1 pi(g)).

    Only defined on members of the symmetry group; membership is checked.
    """
    _reject_zero(chi)
    dec = ideal_part(chi)
    coloring = cayley_coloring(dec)
    if not _member_ok(coloring, pi):
        raise NotAGenericSymmetry(
            "permutation violates the coloring or coset conditions"
        )
    return _hat_value(chi, pi)


def is_generically_closed(
    chi: Character, budget: int = DEFAULT_BUDGET
) -> bool:
    """Whether the symmetry group is no larger than the translations.

    A faithful residual settles the question without any search.
    """
    _reject_zero(chi)
    dec = ideal_part(chi)
    if dec.N.order == 1:
        return True
    res = _sym_result(chi, dec, budget)
    return res.group_of_permutations.order() == chi.group.order


def explore_abelian_closure(
    g: FiniteGroup, budget: int = DEFAULT_BUDGET
) -> Character | None:
    """Search all multiplicity-free characters for a generically closed one.

    Candidates are subsets of the linear characters, smallest subsets
    first and smaller joint kernels next, so a faithful single
    constituent is preferred over the trivial character when both close.
    The sweep is exhaustive: expect 2^|G| - 1 candidates on a failing
    group.
    """
    if not is_abelian(g):
        raise NotAbelian(f"{g.label} is not abelian")
    if g.order > 64:
        raise SizeLimit(f"exploration is capped at order 64, got {g.order}")
    t = character_table(g)
    k = len(t.irreducibles)
    kernel_bits = []
    for chi in t.irreducibles:
        bits = 0
        for x in kernel_of(chi).members:
            bits |= 1 << x
        kernel_bits.append(bits)
    full = (1 << g.order) - 1

    def joint_kernel(m: int) -> int:
        bits = full
        for i in range(k):
            if m >> i & 1:
                bits &= kernel_bits[i]
        return bin(bits).count("1")

    masks = sorted(
        range(1, 1 << k), key=lambda m: (bin(m).count("1"), joint_kernel(m), m)
    )
    for mask in masks:
        chi = trivial_character(g) * 0
        mults = []
        for i in range(k):
            if mask >> i & 1:
                chi = chi + t.irreducibles[i]
                mults.append(1)
            else:
                mults.append(0)
        dec = _decompose_from_mults(chi, mults)
        if dec.N.order == 1:
            return chi
        res = _sym_result(chi, dec, budget)
        if res.group_of_permutations.order() == g.order:
            return chi
    return None


def sym_result_to_json(res: GenericSymmetryResult) -> dict:
    return {
        "schema": "orbitsym/1",
        "order": int(res.group_of_permutations.order()),
        "generators": [
            list(p.images) for p in res.group_of_permutations.generators
        ],
        "generically_closed": bool(res.is_generically_closed),
    }

"""Realizability of groups as symmetry groups of orbit polytopes.

Three nested settings are decided: euclidean (isometry groups), affine
over the reals, and affine with rational vertex coordinates.  Each
classifier checks a short negative list; a group is realizable exactly
when no list entry matches.  Verdicts carry structured evidence for
every matching entry, and for the rational list most entries come with
an automorphism witness (a normal subgroup N of prime index and a
central element z) that forces extra generic symmetries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .chars import (
    CharacterTable,
    character_table,
    kernel_of,
    rational_ideal_characters,
    values_on_elements,
)
from .errors import (
    BadParameter,
    BadWitnessData,
    GroupMismatch,
    SizeLimit,
    ValidationFailure,
)
from .exact import cyclo_is_rational
from .groups import (
    FiniteGroup,
    GPermutation,
    Subgroup,
    coprime_split,
    decompose_structure,
    generated_subgroup,
    is_abelian,
    is_generalized_dicyclic,
    is_prime,
    prime_factors,
    subgroup,
    subgroup_as_group,
    sylow_subgroup,
)

RATIONAL_ORDER_LIMIT = 128


@dataclass(frozen=True)
class ClassificationVerdict:
    """Outcome of one realizability test.

    matched_case is the tag of the first matching list entry, or "none";
    witness["matches"] holds one evidence record per matching entry, in
    list order.
    """

    realizable: bool
    matched_case: str
    witness: dict


@dataclass(frozen=True)
class WitnessAutomorphism:
    """Twist automorphism alpha(g) = g * kappa(g) built from (N, z).

    kappa maps each element to a power of z, is a homomorphism with
    kernel N, and alpha fixes N pointwise.
    """

    N: Subgroup
    z: int
    kappa: tuple[int, ...]
    alpha: GPermutation


def _verdict(matches: list[dict]) -> ClassificationVerdict:
    tag = matches[0]["tag"] if matches else "none"
    return ClassificationVerdict(not matches, tag, {"matches": matches})


def _p_part(n: int, p: int) -> int:
    r = 1
    while n % p == 0:
        n //= p
        r *= p
    return r


def _p_log(n: int, p: int) -> int:
    """Exact base-p logarithm; n must be a power of p."""
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    if n != 1:
        raise ValidationFailure(f"{n * p**e} is not a power of {p}")
    return e


def _mult_order(a: int, m: int) -> int:
    """Multiplicative order of a modulo m, with order 1 when m = 1."""
    if m == 1:
        return 1
    if math.gcd(a, m) != 1:
        raise BadParameter(f"{a} is not invertible modulo {m}")
    r = a % m
    k = 1
    while r != 1:
        r = r * a % m
        k += 1
    return k


def _exponent_of(g: FiniteGroup, members) -> int:
    e = 1
    for x in members:
        e = math.lcm(e, g.orders[x])
    return e


def _members_commute(g: FiniteGroup, members) -> bool:
    return all(g.mul(a, b) == g.mul(b, a) for a in members for b in members)


# ---------------------------------------------------------------------------
# negative-list predicates


def _abelian_exponent_match(g: FiniteGroup, case: str) -> dict | None:
    if is_abelian(g) and g.exponent > 2:
        return {"case": case, "tag": "abelian exponent>2", "exponent": g.exponent}
    return None


def _gen_dicyclic_match(g: FiniteGroup, case: str, tag: str) -> dict | None:
    w = is_generalized_dicyclic(g)
    if w is None:
        return None
    return {
        "case": case,
        "tag": tag,
        "abelian_subgroup": list(w.subgroup.members),
        "twisting_element": w.g,
    }


def classify_euclidean(g: FiniteGroup) -> ClassificationVerdict:
    """Is g an isometry group of an orbit polytope?

    Negative list: (i) abelian but not elementary 2-abelian,
    (ii) generalized dicyclic.
    """
    matches = []
    m = _abelian_exponent_match(g, "(i)")
    if m:
        matches.append(m)
    m = _gen_dicyclic_match(g, "(ii)", "generalized dicyclic")
    if m:
        matches.append(m)
    return _verdict(matches)


def classify_affine(g: FiniteGroup) -> ClassificationVerdict:
    """Is g the full affine symmetry group of some orbit polytope?

    Negative list: (i) abelian of exponent over 2, (ii) generalized
    dicyclic, (iii) elementary abelian of order 4, 8 or 16.  Abelianness
    is tested before the generalized-dicyclic predicate, which reads its
    definition literally and so also matches C4 and C4 x C2^r.
    """
    matches = []
    m = _abelian_exponent_match(g, "(i)")
    if m:
        matches.append(m)
    m = _gen_dicyclic_match(g, "(ii)", "generalized dicyclic")
    if m:
        matches.append(m)
    if is_abelian(g) and g.exponent <= 2 and g.order in (4, 8, 16):
        matches.append(
            {"case": "(iii)", "tag": "elem-abelian 4/8/16", "order": g.order}
        )
    return _verdict(matches)


# ---------------------------------------------------------------------------
# the rational negative list


def _is_quaternion8(h: FiniteGroup) -> bool:
    return (
        h.order == 8
        and not is_abelian(h)
        and sum(1 for o in h.orders if o == 2) == 1
    )


def _is_quaternion8_times_elem2(h: FiniteGroup) -> bool:
    """Does h split as the order-8 quaternion group times C2^r, r >= 0?"""
    if _is_quaternion8(h):
        return True
    if h.order % 8 or is_abelian(h):
        return False
    for a, b in decompose_structure(h).splittings:
        for x, y in ((a, b), (b, a)):
            if x.order != 8:
                continue
            if any(h.orders[m] > 2 for m in y.members):
                continue
            xg, _ = subgroup_as_group(x)
            if _is_quaternion8(xg):
                return True
    return False


def _is_c4_times_elem2(h: FiniteGroup, members) -> bool:
    # abelian 2-group with exponent 4 and exactly one C4 invariant factor
    if not _members_commute(h, members):
        return False
    if _exponent_of(h, members) != 4:
        return False
    low = sum(1 for x in members if h.orders[x] <= 2)
    return len(members) == 2 * low


def nontrivial_nker_family(g: FiniteGroup) -> str | None:
    """Which family makes the real-representation kernel core nontrivial.

    Returns "abelian", "generalized dicyclic", "Q8×C4×C2^r",
    "Q8×Q8×C2^r", or None; nker_R(g) is nontrivial exactly when a
    family matches.
    """
    if is_abelian(g):
        return "abelian" if g.order > 1 else None
    if is_generalized_dicyclic(g) is not None:
        return "generalized dicyclic"
    if g.order % 32 == 0:
        for a, b in decompose_structure(g).splittings:
            for x, y in ((a, b), (b, a)):
                if x.order != 8:
                    continue
                xg, _ = subgroup_as_group(x)
                if not _is_quaternion8(xg):
                    continue
                if _is_c4_times_elem2(g, y.members):
                    return "Q8×C4×C2^r"
    if g.order % 64 == 0:
        for a, b in decompose_structure(g).splittings:
            for x, y in ((a, b), (b, a)):
                if x.order != 8:
                    continue
                xg, _ = subgroup_as_group(x)
                if not _is_quaternion8(xg):
                    continue
                yg, _ = subgroup_as_group(y)
                if _is_quaternion8_times_elem2(yg):
                    return "Q8×Q8×C2^r"
    return None


def _uniform_conjugation_power(g: FiniteGroup, members, by: int, exponent: int):
    """k with by^-1 * x * by = x^k for every x in members, or None."""
    byi = g.inverse[by]
    for k in range(exponent):
        if all(g.conjugate(x, byi) == g.power(x, k) for x in members):
            return k
    return None


def _pq_times_b_match(g: FiniteGroup) -> dict | None:
    """Match g = (PQ) x B with abelian P, Q, B and a power-map action.

    P and Q are Sylow subgroups for distinct primes, Q is normal, some
    generator-modulo-centralizer g0 conjugates every element of Q to a
    fixed power, and three arithmetic conditions on p-parts and
    multiplicative orders hold.  Groups where P centralizes Q are
    abelian and left to the abelian list entry.
    """
    primes = prime_factors(g.order)
    for p in primes:
        for q in primes:
            if p == q:
                continue
            split = coprime_split(g, (p, q))
            if split is None:
                continue
            usub, bsub = split
            if usub.order % (p * q):
                continue
            if not _members_commute(g, bsub.members):
                continue
            u, umem = subgroup_as_group(usub)
            psyl = sylow_subgroup(u, p)
            qsyl = sylow_subgroup(u, q)
            if not _members_commute(u, psyl.members):
                continue
            if not _members_commute(u, qsyl.members):
                continue
            qset = set(qsyl.members)
            if any(
                u.conjugate(x, a) not in qset
                for a in range(u.order)
                for x in qsyl.members
            ):
                continue
            cent = tuple(
                x
                for x in psyl.members
                if all(u.mul(x, y) == u.mul(y, x) for y in qsyl.members)
            )
            pc = len(psyl.members) // len(cent)
            if pc == 1:
                continue
            c = _p_log(pc, p)
            exp_q = _exponent_of(u, qsyl.members)
            exp_cent = _exponent_of(u, cent)
            for g0 in psyl.members:
                if len(generated_subgroup(u, (g0,) + cent)) != len(psyl.members):
                    continue
                k = _uniform_conjugation_power(u, qsyl.members, g0, exp_q)
                if k is None:
                    continue
                pd = u.orders[u.power(g0, pc)]
                if pd != exp_cent:
                    continue
                if pd % _p_part(q - 1, p):
                    continue
                d = _p_log(pd, p)
                ord_literal = _mult_order(q, bsub.order)
                ord_target = _mult_order(q, pd)
                if ord_target % _p_part(ord_literal, p):
                    continue
                match = {
                    "case": "7.2(iv)",
                    "tag": "7.2(iv) (PQ)×B",
                    "p": p,
                    "q": q,
                    "conjugation_power": k,
                    "c": c,
                    "d": d,
                    "p_members": [umem[x] for x in psyl.members],
                    "q_members": [umem[x] for x in qsyl.members],
                    "b_members": list(bsub.members),
                    "ord_q_mod_b": ord_literal,
                }
                ord_exp_b = _mult_order(q, _exponent_of(g, bsub.members))
                if ord_exp_b != ord_literal:
                    match["ord_q_mod_b_exponent"] = ord_exp_b
                core = [umem[x] for x in cent]
                core += [umem[x] for x in qsyl.members]
                core += list(bsub.members)
                g0_parent = umem[g0]
                nmem = generated_subgroup(
                    g, core + [g.power(g0_parent, p)]
                )
                if len(nmem) * p != g.order:
                    raise ValidationFailure(
                        f"witness subgroup has index {g.order // len(nmem)}, not {p}"
                    )
                z = g.power(g0_parent, p ** (c + d - 1))
                match["lemma_witness"] = {"N": list(nmem), "z": z, "p": p}
                return match
    return None


def classify_rational(g: FiniteGroup) -> ClassificationVerdict:
    """Is g the affine symmetry group of an orbit polytope with
    rational (equivalently integer) vertex coordinates?

    Negative list, in order: (i) abelian of exponent over 2 or
    elementary abelian of order 4, 8, 16; (ii) a direct product of a
    generalized dicyclic 2-group of exponent 4 with an abelian group of
    odd order over which 2 has odd multiplicative order; (iii)
    generalized dicyclic; (iv) (PQ) x B with a power-map action and the
    arithmetic side conditions; (v) quaternion-times-C2^r times an odd
    group of shape (iv) over which 2 has odd multiplicative order.
    """
    if g.order > RATIONAL_ORDER_LIMIT:
        raise SizeLimit(
            f"rational classification is limited to order {RATIONAL_ORDER_LIMIT},"
            f" got {g.order}"
        )
    matches = []
    if is_abelian(g) and (
        g.exponent > 2 or (g.exponent <= 2 and g.order in (4, 8, 16))
    ):
        matches.append(
            {"case": "7.2(i)", "tag": "7.2(i) abelian", "exponent": g.exponent}
        )
    split2 = coprime_split(g, (2,))
    if split2 is not None:
        ssub, asub = split2
        s, smem = subgroup_as_group(ssub)
        w = is_generalized_dicyclic(s)
        if (
            w is not None
            and s.exponent == 4
            and _members_commute(g, asub.members)
            and _mult_order(2, asub.order) % 2 == 1
        ):
            nmem = generated_subgroup(
                g, [smem[x] for x in w.subgroup.members] + list(asub.members)
            )
            y = smem[w.g]
            matches.append(
                {
                    "case": "7.2(ii)",
                    "tag": "7.2(ii) S×A",
                    "s_members": list(ssub.members),
                    "a_members": list(asub.members),
                    "ord_2_mod_a": _mult_order(2, asub.order),
                    "lemma_witness": {
                        "N": list(nmem),
                        "z": g.mul(y, y),
                        "p": 2,
                    },
                }
            )
    m = _gen_dicyclic_match(g, "7.2(iii)", "7.2(iii) generalized dicyclic")
    if m:
        w = is_generalized_dicyclic(g)
        m["lemma_witness"] = {
            "N": list(w.subgroup.members),
            "z": g.mul(w.g, w.g),
            "p": 2,
        }
        matches.append(m)
    m = _pq_times_b_match(g)
    if m:
        matches.append(m)
    if split2 is not None:
        usub, hsub = split2
        if hsub.order > 1:
            u, _ = subgroup_as_group(usub)
            if _is_quaternion8_times_elem2(u):
                h, hmem = subgroup_as_group(hsub)
                hm = _pq_times_b_match(h)
                if hm is not None and _mult_order(2, hsub.order) % 2 == 1:
                    inner = hm["lemma_witness"]
                    nmem = generated_subgroup(
                        g,
                        list(usub.members) + [hmem[x] for x in inner["N"]],
                    )
                    matches.append(
                        {
                            "case": "7.2(v)",
                            "tag": "7.2(v) Q8×C2^r×H",
                            "two_part": list(usub.members),
                            "h_members": list(hsub.members),
                            "ord_2_mod_h": _mult_order(2, hsub.order),
                            "h_structure": {
                                kk: vv
                                for kk, vv in hm.items()
                                if kk != "lemma_witness"
                            },
                            "lemma_witness": {
                                "N": list(nmem),
                                "z": hmem[inner["z"]],
                                "p": inner["p"],
                            },
                        }
                    )
    return _verdict(matches)


# ---------------------------------------------------------------------------
# the kernel core over the reals


def nker_R(g: FiniteGroup) -> Subgroup:
    """Intersection of kernels of irreducibles whose degree exceeds
    their real multiplicity (2 for quaternionic type, else 1).

    When no irreducible qualifies the whole group is returned.
    """
    t = character_table(g)
    kernels = []
    for psi, fs in zip(t.irreducibles, t.fs_indicators):
        deg = int(cyclo_is_rational(psi.degree))
        if deg > (2 if fs == -1 else 1):
            kernels.append(set(kernel_of(psi).members))
    if not kernels:
        return subgroup(g, range(g.order))
    return subgroup(g, set.intersection(*kernels))


# ---------------------------------------------------------------------------
# the twist automorphism


def witness_automorphism(g: FiniteGroup, n: Subgroup, z: int) -> WitnessAutomorphism:
    """Build the automorphism alpha(x) = x * kappa(x) from (N, z).

    Requires N normal of prime index p and z of order p lying in the
    cyclic subgroup generated by every element outside N.  kappa is the
    epimorphism onto <z> with kernel N whose twist is bijective, taken
    with the smallest power pairing.
    """
    if n.parent != g:
        raise GroupMismatch("subgroup belongs to a different group")
    if not 0 <= z < g.order:
        raise BadParameter(f"element {z} is out of range")
    if not n.is_normal():
        raise BadWitnessData("N is not normal")
    p = g.order // n.order
    if not is_prime(p):
        raise BadWitnessData(f"N has index {p}, which is not prime")
    nset = set(n.members)
    for x in range(g.order):
        if x in nset:
            continue
        powers = set()
        y = x
        while y not in powers:
            powers.add(y)
            y = g.mul(y, x)
        if z not in powers:
            raise BadWitnessData(
                f"z={z} is not a power of the element {x} outside N"
            )
    if g.orders[z] != p:
        raise BadWitnessData(f"z has order {g.orders[z]}, the index of N is {p}")

    g0 = min(x for x in range(g.order) if x not in nset)
    coset_log = [None] * g.order
    for i in range(p):
        lead = g.power(g0, i)
        for mmm in n.members:
            coset_log[g.mul(lead, mmm)] = i
    for e in range(1, p):
        kappa = tuple(g.power(z, e * coset_log[x] % p) for x in range(g.order))
        alpha = tuple(g.mul(x, kappa[x]) for x in range(g.order))
        if len(set(alpha)) != g.order:
            continue
        for a in range(g.order):
            for b in range(g.order):
                if alpha[g.mul(a, b)] != g.mul(alpha[a], alpha[b]):
                    raise ValidationFailure("twist is not a homomorphism")
        if any(alpha[x] != x for x in n.members):
            raise ValidationFailure("twist moves a point of N")
        return WitnessAutomorphism(n, z, kappa, GPermutation(alpha))
    raise BadWitnessData(
        "no pairing of cosets with powers of z makes the twist bijective"
    )


def verify_witness(w: WitnessAutomorphism, t: CharacterTable) -> bool:
    """Check the twist preserves all pairwise values of every rational
    ideal character, the membership test for the generic symmetry
    group of each rational ideal."""
    g = w.N.parent
    if t.group != g:
        raise GroupMismatch("table belongs to a different group")
    am = w.alpha.images
    inv = g.inverse
    for gamma in rational_ideal_characters(t):
        vals = values_on_elements(gamma)
        for a in range(g.order):
            ia = inv[am[a]]
            iaa = inv[a]
            for b in range(g.order):
                if vals[g.mul(ia, am[b])] != vals[g.mul(iaa, b)]:
                    return False
    return True


def verdict_to_json(v: ClassificationVerdict) -> dict:
    matches = v.witness["matches"]
    return {
        "schema": "orbitsym/1",
        "realizable": v.realizable,
        "matched_case": v.matched_case,
        "case_number": matches[0]["case"] if matches else "none",
        "witness": {"matches": matches},
    }

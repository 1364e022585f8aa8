"""Exact complex character tables of finite groups.

Tables are computed by Dixon's modular method: the class algebra is
diagonalized over a prime field F_p with p = 1 (mod exponent), degrees and
character values are recovered mod p, and eigenvalue multiplicities are
lifted through a discrete Fourier inversion to exact cyclotomic values.
Every table, computed or ingested, passes an exact orthogonality check
before it is returned.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import groups
from .errors import (
    BadParameter,
    GroupMismatch,
    NotACharacter,
    NotIrreducible,
    SchemaError,
    SizeLimit,
    ValidationFailure,
)
from .exact import (
    Cyclo,
    coords_at_conductor,
    cyclo_from_json,
    cyclo_is_rational,
    cyclo_sort_key,
    cyclo_to_json,
    cyclotomic_degree,
    power_basis_height,
)
from .groups import FiniteGroup, Subgroup, subgroup


@dataclass(frozen=True)
class ClassData:
    """Conjugacy class bookkeeping for one group.

    Class 0 is always the class of the identity.  representatives[i] is the
    least member of class i, class_of maps each element to its class index,
    inverse_class[i] holds the inverses of class i, and power_map[i] holds
    the squares.
    """

    group: FiniteGroup
    representatives: tuple[int, ...]
    class_of: tuple[int, ...]
    sizes: tuple[int, ...]
    inverse_class: tuple[int, ...]
    power_map: tuple[int, ...]

    @property
    def count(self) -> int:
        return len(self.representatives)


@lru_cache(maxsize=None)
def conjugacy_classes(g: FiniteGroup) -> ClassData:
    """Class data for g, with the identity class at index 0."""
    classes = groups.conjugacy_classes(g)
    class_of = [0] * g.order
    for idx, members in enumerate(classes):
        for m in members:
            class_of[m] = idx
    reps = tuple(members[0] for members in classes)
    sizes = tuple(len(members) for members in classes)
    inverse_class = tuple(class_of[g.inverse[r]] for r in reps)
    power_map = tuple(class_of[g.mul(r, r)] for r in reps)
    return ClassData(g, reps, tuple(class_of), sizes, inverse_class, power_map)


@dataclass(frozen=True)
class Character:
    """A class function with one exact cyclotomic value per conjugacy class."""

    group: FiniteGroup
    values: tuple[Cyclo, ...]

    @classmethod
    def from_values(cls, group: FiniteGroup, values) -> "Character":
        cd = conjugacy_classes(group)
        if len(values) != cd.count:
            raise BadParameter(
                f"expected {cd.count} class values, got {len(values)}"
            )
        vals = tuple(
            v if isinstance(v, Cyclo) else Cyclo.rational(v) for v in values
        )
        return cls(group, vals)

    @property
    def degree(self) -> Cyclo:
        """The value at the identity class."""
        return self.values[0]

    def __call__(self, element: int) -> Cyclo:
        cd = conjugacy_classes(self.group)
        if not 0 <= element < self.group.order:
            raise BadParameter(f"element {element} out of range")
        return self.values[cd.class_of[element]]

    def conj(self) -> "Character":
        return Character(self.group, tuple(v.conj() for v in self.values))

    def is_real_valued(self) -> bool:
        return all(v == v.conj() for v in self.values)

    def _same_group(self, other: "Character") -> None:
        if self.group != other.group:
            raise GroupMismatch(
                f"characters of {self.group.label} and {other.group.label}"
            )

    def __add__(self, other):
        if not isinstance(other, Character):
            return NotImplemented
        self._same_group(other)
        return Character(
            self.group, tuple(a + b for a, b in zip(self.values, other.values))
        )

    def __sub__(self, other):
        if not isinstance(other, Character):
            return NotImplemented
        self._same_group(other)
        return Character(
            self.group, tuple(a - b for a, b in zip(self.values, other.values))
        )

    def __mul__(self, other):
        if isinstance(other, Character):
            # pointwise product: the character of a tensor product
            self._same_group(other)
            return Character(
                self.group,
                tuple(a * b for a, b in zip(self.values, other.values)),
            )
        if isinstance(other, (int, Fraction)):
            return Character(self.group, tuple(v * other for v in self.values))
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Character(self.group, tuple(v * other for v in self.values))
        return NotImplemented


def trivial_character(g: FiniteGroup) -> Character:
    k = conjugacy_classes(g).count
    return Character(g, tuple(Cyclo.rational(1) for _ in range(k)))


def regular_character(g: FiniteGroup) -> Character:
    """|G| at the identity class, zero elsewhere."""
    k = conjugacy_classes(g).count
    vals = [Cyclo.rational(0)] * k
    vals[0] = Cyclo.rational(g.order)
    return Character(g, tuple(vals))


def values_on_elements(chi: Character) -> tuple[Cyclo, ...]:
    """chi spread out to one value per group element."""
    cd = conjugacy_classes(chi.group)
    return tuple(chi.values[cd.class_of[x]] for x in range(chi.group.order))


def product_character(
    pg: FiniteGroup, left: Character, right: Character
) -> Character:
    """The character (x, y) -> left(x) * right(y) on the product group pg.

    pg must index elements as x * |right group| + y, the convention the
    product constructor uses; inconsistent indexing is reported.
    """
    na = left.group.order
    nb = right.group.order
    if pg.order != na * nb:
        raise GroupMismatch(
            f"group of order {pg.order} cannot be the product of orders {na} and {nb}"
        )
    cda = conjugacy_classes(left.group)
    cdb = conjugacy_classes(right.group)
    cdp = conjugacy_classes(pg)
    vals: list[Cyclo | None] = [None] * cdp.count
    for el in range(pg.order):
        x, y = divmod(el, nb)
        v = left.values[cda.class_of[x]] * right.values[cdb.class_of[y]]
        c = cdp.class_of[el]
        if vals[c] is None:
            vals[c] = v
        elif vals[c] != v:
            raise GroupMismatch(
                "element indexing does not match a direct product of the factors"
            )
    return Character(pg, tuple(vals))  # type: ignore[arg-type]


@dataclass(frozen=True)
class CharacterTable:
    group: FiniteGroup
    classes: ClassData
    irreducibles: tuple[Character, ...]
    fs_indicators: tuple[int, ...]
    galois_orbits: tuple[tuple[int, ...], ...]


# ---------------------------------------------------------------------------
# modular linear algebra


def _primitive_root(p: int) -> int:
    if p == 2:
        return 1
    fac = groups.prime_factors(p - 1)
    for z in range(2, p):
        if all(pow(z, (p - 1) // q, p) != 1 for q in fac):
            return z
    raise ValidationFailure(f"no primitive root mod {p}")


def _dixon_prime(n: int, e: int) -> int:
    # smallest p = 1 (mod e) with p > 2*sqrt(n); p never divides |G|
    p = e + 1
    while True:
        if p * p > 4 * n and groups.is_prime(p):
            return p
        p += e


def _mod_rref(a: np.ndarray, p: int):
    a = np.mod(a, p).astype(np.int64)
    rows, cols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        a[r] = a[r] * pow(int(a[r, c]), p - 2, p) % p
        col = a[:, c].copy()
        col[r] = 0
        a = (a - np.outer(col, a[r])) % p
        pivots.append(c)
        r += 1
    return a, pivots


def _mod_nullspace(a: np.ndarray, p: int) -> np.ndarray:
    """Columns spanning the right kernel of a over F_p."""
    red, pivots = _mod_rref(a, p)
    cols = a.shape[1]
    free = [c for c in range(cols) if c not in pivots]
    basis = np.zeros((cols, len(free)), dtype=np.int64)
    for idx, fc in enumerate(free):
        basis[fc, idx] = 1
        for ri, pc in enumerate(pivots):
            basis[pc, idx] = (-int(red[ri, fc])) % p
    return basis


def _mod_solve_square(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """Solve a @ x = b for square invertible a; b may have many columns."""
    d = a.shape[0]
    aug = np.concatenate([a % p, b % p], axis=1)
    red, pivots = _mod_rref(aug, p)
    if pivots != list(range(d)):
        raise ValidationFailure("modular solve hit a singular system")
    return red[:, d:]


# ---------------------------------------------------------------------------
# Dixon's method


def _class_matrices(g: FiniteGroup, cd: ClassData) -> list[np.ndarray]:
    k = cd.count
    table = np.array(g.table, dtype=np.int64)
    invs = np.array(g.inverse, dtype=np.int64)
    cls = np.array(cd.class_of, dtype=np.int64)
    reps = np.array(cd.representatives, dtype=np.int64)
    members: list[list[int]] = [[] for _ in range(k)]
    for x in range(g.order):
        members[cd.class_of[x]].append(x)
    col_idx = np.arange(k, dtype=np.int64)
    mats = []
    for i in range(k):
        x = np.array(members[i], dtype=np.int64)
        # products x^-1 * rep_m land in class j: one structure constant each
        j = cls[table[np.ix_(invs[x], reps)]]
        m = np.zeros((k, k), dtype=np.int64)
        np.add.at(m, (j, np.broadcast_to(col_idx, j.shape)), 1)
        mats.append(m)
    return mats


def _omega_vectors(g: FiniteGroup, cd: ClassData, p: int) -> list[np.ndarray]:
    """Common eigenvectors of the class matrices mod p, one per character.

    Each returned vector w is normalized so w[0] = 1; its entries are the
    class-algebra eigenvalues |K_j| chi(g_j) / chi(1) mod p.
    """
    k = cd.count
    mats = _class_matrices(g, cd)
    spaces = [np.eye(k, dtype=np.int64)]
    for mat in mats[1:]:
        if all(s.shape[1] == 1 for s in spaces):
            break
        mat = mat % p
        nxt: list[np.ndarray] = []
        for s in spaces:
            d = s.shape[1]
            if d == 1:
                nxt.append(s)
                continue
            _, prows = _mod_rref(s.T, p)
            sub = s[prows]
            ms = (mat @ s) % p
            r = _mod_solve_square(sub, ms[prows], p)
            remaining = d
            for lam in range(p):
                shifted = (r - lam * np.eye(d, dtype=np.int64)) % p
                ns = _mod_nullspace(shifted, p)
                if ns.shape[1]:
                    nxt.append((s @ ns) % p)
                    remaining -= ns.shape[1]
                    if remaining == 0:
                        break
            if remaining:
                raise ValidationFailure(
                    "class matrix failed to split a block into eigenspaces"
                )
        spaces = nxt
    if len(spaces) != k or any(s.shape[1] != 1 for s in spaces):
        raise ValidationFailure(
            "conjugacy class matrices did not separate the characters"
        )
    out = []
    for s in spaces:
        w = s[:, 0] % p
        lead = int(w[0])
        if lead == 0:
            raise ValidationFailure(
                "character eigenvector vanishes at the identity class"
            )
        out.append(w * pow(lead, p - 2, p) % p)
    return out


@lru_cache(maxsize=None)
def _zeta(n: int, k: int) -> Cyclo:
    return Cyclo.zeta(n, k)


def _embedding_primes(e: int, n: int, need: int) -> list[int]:
    # primes q = 1 (mod e), q > n, with product exceeding `need`
    out = []
    prod = 1
    q = (max(n, 2) // e + 1) * e + 1
    while prod <= need:
        if groups.is_prime(q):
            out.append(q)
            prod *= q
        q += e
    return out


def _validate_irreducible_rows(
    g: FiniteGroup, cd: ClassData, rows
) -> tuple[int, np.ndarray]:
    """Exact orthonormality and regular-character checks for a full table.

    Values are algebraic integers, so all coefficients in the checked
    identities are integers with a computable bound; vanishing under every
    embedding of the cyclotomic field modulo enough primes certifies exact
    equality.  Returns one prime q and the table of values mod q under the
    identity embedding, for reuse by indicator checks.
    """
    n = g.order
    k = cd.count
    e = g.exponent
    if len(rows) != k:
        raise ValidationFailure(
            f"expected {k} irreducible characters, found {len(rows)}"
        )
    phi = cyclotomic_degree(e)
    c_e = power_basis_height(e)
    cap = 4 * n * c_e
    x = np.zeros((k, k, phi), dtype=np.int64)
    for i, row in enumerate(rows):
        if len(row) != k:
            raise ValidationFailure(f"row {i} has {len(row)} values, expected {k}")
        for c, v in enumerate(row):
            try:
                coords = coords_at_conductor(v, e)
            except BadParameter:
                raise ValidationFailure(
                    f"value at row {i}, class {c} lies outside the"
                    f" order-{e} cyclotomic field"
                ) from None
            for t, q in enumerate(coords):
                if q.denominator != 1:
                    raise ValidationFailure(
                        f"value at row {i}, class {c} is not an algebraic integer"
                    )
                qi = int(q)
                if abs(qi) > cap:
                    raise ValidationFailure(
                        f"value at row {i}, class {c} is implausibly large"
                    )
                x[i, c, t] = qi
    degs = []
    for i in range(k):
        if np.any(x[i, 0, 1:]):
            raise ValidationFailure(f"degree of row {i} is not rational")
        d = int(x[i, 0, 0])
        if d < 1:
            raise ValidationFailure(f"degree of row {i} is not positive")
        degs.append(d)
    if sum(d * d for d in degs) != n:
        raise ValidationFailure(
            f"degree squares sum to {sum(d * d for d in degs)}, group order is {n}"
        )
    b1 = max(1, int(np.max(np.abs(x))))
    m_bound = 2 * n * phi * phi * b1 * b1 * c_e + n
    primes = _embedding_primes(e, n, 2 * m_bound)
    sizes = np.array(cd.sizes, dtype=np.int64)
    dvec = np.array(degs, dtype=np.int64)
    units = [u for u in range(1, e + 1) if math.gcd(u, e) == 1]
    flat = x.reshape(k * k, phi)
    first_v1 = None
    for q in primes:
        th = pow(_primitive_root(q), (q - 1) // e, q)
        for u in units:
            pv = np.array(
                [pow(th, (u * t) % e, q) for t in range(phi)], dtype=np.int64
            )
            pvc = np.array(
                [pow(th, ((e - u) * t) % e, q) for t in range(phi)],
                dtype=np.int64,
            )
            v = (flat @ pv % q).reshape(k, k)
            w = (flat @ pvc % q).reshape(k, k)
            if u == 1 and first_v1 is None:
                first_v1 = v
            gram = (v * sizes % q) @ w.T % q
            expect = np.zeros((k, k), dtype=np.int64)
            np.fill_diagonal(expect, n % q)
            if not np.array_equal(gram, expect):
                i, j = map(int, np.argwhere(gram != expect)[0])
                raise ValidationFailure(
                    f"rows {i} and {j} fail exact orthonormality"
                )
            col = dvec @ v % q
            expect_col = np.zeros(k, dtype=np.int64)
            expect_col[0] = n % q
            if not np.array_equal(col, expect_col):
                c = int(np.nonzero(col != expect_col)[0][0])
                raise ValidationFailure(
                    f"degree-weighted column {c} does not match the regular character"
                )
    assert first_v1 is not None
    return primes[0], first_v1


def _fs_from_mod(
    v: np.ndarray, cd: ClassData, n: int, q: int
) -> list[int]:
    """Frobenius-Schur indicators from a table of values mod q.

    Only sound once the rows are certified irreducible: the indicator is
    then known to be -1, 0, or 1, and q > 3 identifies it.
    """
    pm = np.array(cd.power_map, dtype=np.int64)
    sizes = np.array(cd.sizes, dtype=np.int64)
    ninv = pow(n % q, q - 2, q)
    sums = (v[:, pm] * sizes % q).sum(axis=1) % q * ninv % q
    out = []
    for i, s in enumerate(map(int, sums)):
        if s == 0:
            out.append(0)
        elif s == 1:
            out.append(1)
        elif s == q - 1:
            out.append(-1)
        else:
            raise ValidationFailure(
                f"indicator of row {i} is {s} mod {q}, not -1, 0, or 1"
            )
    return out


@lru_cache(maxsize=65536)
def _galois_image(v: Cyclo, u: int) -> Cyclo:
    return v.galois(u)


def _galois_orbits_generic(rows, e: int) -> tuple[tuple[int, ...], ...]:
    units = [u for u in range(1, e + 1) if math.gcd(u, e) == 1]
    lookup = {row: i for i, row in enumerate(rows)}
    assigned = [False] * len(rows)
    orbits = []
    for i in range(len(rows)):
        if assigned[i]:
            continue
        orb = set()
        for u in units:
            image = tuple(_galois_image(v, u) for v in rows[i])
            j = lookup.get(image)
            if j is None:
                raise ValidationFailure(
                    f"Galois conjugate of row {i} is missing from the table"
                )
            orb.add(j)
        for j in orb:
            assigned[j] = True
        orbits.append(tuple(sorted(orb)))
    return tuple(orbits)


def _compute_table(g: FiniteGroup) -> CharacterTable:
    n = g.order
    if n > groups.MAX_GROUP_ORDER:
        raise SizeLimit(f"character table capped at order {groups.MAX_GROUP_ORDER}")
    cd = conjugacy_classes(g)
    k = cd.count
    e = g.exponent
    p = _dixon_prime(n, e)
    omegas = _omega_vectors(g, cd, p)

    sizes = np.array(cd.sizes, dtype=np.int64)
    inv_sizes = np.array(
        [pow(s, p - 2, p) for s in cd.sizes], dtype=np.int64
    )
    istar = np.array(cd.inverse_class, dtype=np.int64)
    sqrt_n = math.isqrt(n)

    # class of rep_j^s for every exponent s < e, for the Fourier lift
    pc = np.zeros((k, e), dtype=np.int64)
    for j, rep in enumerate(cd.representatives):
        elt = g.identity
        for s in range(e):
            pc[j, s] = cd.class_of[elt]
            elt = g.mul(elt, rep)

    theta = pow(_primitive_root(p), (p - 1) // e, p)
    tinv = pow(theta, p - 2, p)
    einv = pow(e % p, p - 2, p)
    tpow = np.array([pow(tinv, t, p) for t in range(e)], dtype=np.int64)
    st = np.multiply.outer(np.arange(e), np.arange(e)) % e
    fourier = tpow[st] * einv % p

    raw = []
    for w in omegas:
        s_val = int(np.sum(w * w[istar] % p * inv_sizes % p) % p)
        if s_val == 0:
            raise ValidationFailure("character norm sum vanished mod p")
        d2 = n % p * pow(s_val, p - 2, p) % p
        deg = next(
            (t for t in range(1, sqrt_n + 1) if t * t % p == d2), None
        )
        if deg is None:
            raise ValidationFailure(
                f"no degree below sqrt({n}) matches the modular norm"
            )
        chi_p = deg * w % p * inv_sizes % p
        mult = chi_p[pc] @ fourier % p
        if np.any(mult > deg):
            raise ValidationFailure("lifted multiplicities exceed the degree")
        if np.any(mult.sum(axis=1) != deg):
            raise ValidationFailure(
                "lifted multiplicities do not sum to the degree"
            )
        raw.append((deg, mult, chi_p))

    rows = []
    for deg, mult, _ in raw:
        vals = []
        for j in range(k):
            terms = [(int(t), int(m)) for t, m in enumerate(mult[j]) if m]
            if len(terms) == 1 and terms[0][1] == 1:
                v = _zeta(e, terms[0][0])
            else:
                v = Cyclo.rational(0)
                for t, m in terms:
                    v = v + _zeta(e, t) * m
            vals.append(v)
        dv = cyclo_is_rational(vals[0])
        if dv != deg:
            raise ValidationFailure(
                f"identity value {vals[0]} disagrees with degree {deg}"
            )
        rows.append(tuple(vals))

    order = sorted(
        range(k),
        key=lambda i: (
            raw[i][0],
            tuple(cyclo_sort_key(v) for v in rows[i]),
        ),
    )
    rows = [rows[i] for i in order]
    mults = [raw[i][1] for i in order]
    chi_ps = [raw[i][2] for i in order]

    _validate_irreducible_rows(g, cd, rows)

    pm = np.array(cd.power_map, dtype=np.int64)
    ninv = pow(n % p, p - 2, p)
    fs_list = []
    for chi_p in chi_ps:
        s = int(np.sum(sizes * chi_p[pm] % p) % p * ninv % p)
        if s == 0:
            fs_list.append(0)
        elif s == 1:
            fs_list.append(1)
        elif s == p - 1:
            fs_list.append(-1)
        else:
            raise ValidationFailure(
                f"indicator came out as {s} mod {p}, not -1, 0, or 1"
            )

    # Galois orbits from multiplicity patterns: conjugation by a unit u
    # permutes zeta exponents, so it permutes the integer matrices
    key_of = {m.tobytes(): i for i, m in enumerate(mults)}
    units = [u for u in range(1, e + 1) if math.gcd(u, e) == 1]
    dest = {u: (u * np.arange(e)) % e for u in units}
    assigned = [False] * k
    orbits = []
    for i in range(k):
        if assigned[i]:
            continue
        orb = set()
        for u in units:
            image = np.zeros_like(mults[i])
            image[:, dest[u]] = mults[i]
            j = key_of.get(image.tobytes())
            if j is None:
                raise ValidationFailure(
                    f"Galois conjugate of character {i} is missing from the table"
                )
            orb.add(j)
        for j in orb:
            assigned[j] = True
        orbits.append(tuple(sorted(orb)))

    irred = tuple(Character(g, r) for r in rows)
    return CharacterTable(g, cd, irred, tuple(fs_list), tuple(orbits))


@lru_cache(maxsize=None)
def character_table(g: FiniteGroup) -> CharacterTable:
    """The exact character table of g, validated before return."""
    return _compute_table(g)


# ---------------------------------------------------------------------------
# derived quantities


def inner_product(a: Character, b: Character) -> Cyclo:
    """(1/|G|) sum over G of a(g) * conj(b(g))."""
    if a.group != b.group:
        raise GroupMismatch(
            f"characters of {a.group.label} and {b.group.label}"
        )
    cd = conjugacy_classes(a.group)
    total = Cyclo.rational(0)
    for c in range(cd.count):
        total = total + a.values[c] * b.values[c].conj() * cd.sizes[c]
    return total * Fraction(1, a.group.order)


def fs_indicator(psi: Character) -> int:
    """Frobenius-Schur indicator (1/|G|) sum of psi(g^2)."""
    d = cyclo_is_rational(psi.degree)
    if d is None or d <= 0 or inner_product(psi, psi) != 1:
        raise NotIrreducible(
            f"indicator needs an irreducible character, got degree {psi.degree}"
            f" with norm {inner_product(psi, psi)}"
        )
    cd = conjugacy_classes(psi.group)
    total = Cyclo.rational(0)
    for c in range(cd.count):
        total = total + psi.values[cd.power_map[c]] * cd.sizes[c]
    r = cyclo_is_rational(total * Fraction(1, psi.group.order))
    if r is None or r.denominator != 1 or int(r) not in (-1, 0, 1):
        raise ValidationFailure(f"indicator came out as {r}, not -1, 0, or 1")
    return int(r)


def kernel_of(chi: Character) -> Subgroup:
    """Elements where chi takes its identity value.

    A subgroup for genuine characters, and for differences of characters
    whose value at the identity is real and nonnegative.
    """
    cd = conjugacy_classes(chi.group)
    top = chi.values[0]
    members = [
        x
        for x in range(chi.group.order)
        if chi.values[cd.class_of[x]] == top
    ]
    return subgroup(chi.group, members)


def irreducible_multiplicities(chi: Character) -> tuple[int, ...]:
    """Multiplicity of each table irreducible in chi.

    Raises NotACharacter unless every multiplicity is a nonnegative integer.
    """
    t = character_table(chi.group)
    out = []
    for psi in t.irreducibles:
        m = inner_product(chi, psi)
        mr = cyclo_is_rational(m)
        if mr is None or mr.denominator != 1 or mr < 0:
            raise NotACharacter(
                f"multiplicity {m} of a degree-{psi.degree} constituent"
                " is not a nonnegative integer"
            )
        out.append(int(mr))
    return tuple(out)


def character_from_multiplicities(t: CharacterTable, mults) -> Character:
    """Integer combination sum of mults[i] * irreducible i."""
    if len(mults) != len(t.irreducibles):
        raise BadParameter(
            f"expected {len(t.irreducibles)} multiplicities, got {len(mults)}"
        )
    total = trivial_character(t.group) * 0
    for m, psi in zip(mults, t.irreducibles):
        if int(m) != m:
            raise BadParameter(f"multiplicity {m!r} is not an integer")
        if m:
            total = total + psi * int(m)
    return total


def rational_ideal_characters(t: CharacterTable) -> tuple[Character, ...]:
    """One character per Galois orbit: degree times the orbit sum.

    Every value is rational; together they sum to the regular character.
    """
    out = []
    for orbit in t.galois_orbits:
        base = t.irreducibles[orbit[0]]
        deg = cyclo_is_rational(base.degree)
        total = base
        for idx in orbit[1:]:
            total = total + t.irreducibles[idx]
        gamma = total * int(deg)
        for c, v in enumerate(gamma.values):
            if cyclo_is_rational(v) is None:
                raise ValidationFailure(
                    f"orbit sum value {v} at class {c} is not rational"
                )
        out.append(gamma)
    return tuple(out)


def affordable_by_left_ideal(chi: Character, field: str) -> bool:
    """Whether a left ideal of the group algebra over the field affords chi.

    field "C": every constituent multiplicity is at most its degree.
    field "R": additionally chi is real-valued and each multiplicity is
    divisible by 2 on constituents of quaternionic type.
    """
    if field not in ("C", "R"):
        raise BadParameter(f'field must be "C" or "R", got {field!r}')
    t = character_table(chi.group)
    mults = irreducible_multiplicities(chi)
    for m, psi in zip(mults, t.irreducibles):
        if m > int(cyclo_is_rational(psi.degree)):
            return False
    if field == "R":
        if not chi.is_real_valued():
            return False
        for m, fs in zip(mults, t.fs_indicators):
            if fs == -1 and m % 2:
                return False
    return True


# ---------------------------------------------------------------------------
# serialization


def character_table_to_json(t: CharacterTable) -> dict:
    return {
        "schema": "orbitsym/1",
        "group": t.group.label,
        "classes": {
            "reps": list(t.classes.representatives),
            "sizes": list(t.classes.sizes),
        },
        "irreducibles": [
            [cyclo_to_json(v) for v in chi.values] for chi in t.irreducibles
        ],
        "fs": list(t.fs_indicators),
    }


def character_table_from_json(g: FiniteGroup, obj) -> CharacterTable:
    """Rebuild a table for g from JSON, re-validating it completely."""
    if not isinstance(obj, dict):
        raise SchemaError("expected a JSON object at /")
    if "schema" in obj and obj["schema"] != "orbitsym/1":
        raise SchemaError(f"unsupported schema {obj['schema']!r} at /schema")
    if obj.get("group") != g.label:
        raise SchemaError(
            f"table is for group {obj.get('group')!r}, not {g.label!r} (at /group)"
        )
    cd = conjugacy_classes(g)
    classes = obj.get("classes")
    if not isinstance(classes, dict):
        raise SchemaError("expected an object at /classes")
    if list(classes.get("reps", ())) != list(cd.representatives):
        raise SchemaError("class representatives disagree at /classes/reps")
    if list(classes.get("sizes", ())) != list(cd.sizes):
        raise SchemaError("class sizes disagree at /classes/sizes")
    irr = obj.get("irreducibles")
    if not isinstance(irr, list) or len(irr) != cd.count:
        raise SchemaError(
            f"expected {cd.count} irreducibles at /irreducibles"
        )
    rows = []
    for i, row in enumerate(irr):
        if not isinstance(row, list) or len(row) != cd.count:
            raise SchemaError(f"expected {cd.count} values at /irreducibles/{i}")
        rows.append(
            tuple(
                cyclo_from_json(v, where=f"/irreducibles/{i}/{j}")
                for j, v in enumerate(row)
            )
        )
    fs = obj.get("fs")
    if not isinstance(fs, list) or len(fs) != cd.count:
        raise SchemaError(f"expected {cd.count} indicators at /fs")
    for i, f in enumerate(fs):
        if not isinstance(f, int) or f not in (-1, 0, 1):
            raise SchemaError(f"indicator at /fs/{i} must be -1, 0, or 1")

    q, v1 = _validate_irreducible_rows(g, cd, rows)
    true_fs = _fs_from_mod(v1, cd, g.order, q)
    for i, (a, b) in enumerate(zip(fs, true_fs)):
        if a != b:
            raise ValidationFailure(
                f"declared indicator {a} at index {i} recomputes as {b}"
            )
    irred = tuple(Character(g, r) for r in rows)
    orbits = _galois_orbits_generic(rows, g.exponent)
    return CharacterTable(g, cd, irred, tuple(true_fs), orbits)

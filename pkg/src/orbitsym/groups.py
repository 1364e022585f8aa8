"""Finite groups as multiplication tables, and permutations of the element set.

Elements are integers 0..order-1 indexing table rows.  Every builtin
constructor fixes a documented element ordering, so indices are stable
across runs and serialized fixtures stay valid.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from functools import lru_cache
from math import lcm

import numpy as np

from .errors import (
    BadParameter,
    DimensionMismatch,
    NoIdentity,
    NoInverse,
    NonAssociative,
    SchemaError,
    SizeLimit,
)

MAX_GROUP_ORDER = 128

# Hard stop for the exhaustive normal-subgroup walk; only very subgroup-rich
# groups near the order cap (large elementary abelian 2-groups) can hit it.
_NORMAL_ENUM_LIMIT = 400_000


def prime_factors(n: int) -> tuple[int, ...]:
    out = []
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            out.append(p)
            while m % p == 0:
                m //= p
        p += 1
    if m > 1:
        out.append(m)
    return tuple(out)


def is_prime(n: int) -> bool:
    return n > 1 and prime_factors(n) == (n,)


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    """Immutable finite group on elements 0..order-1."""

    label: str
    table: tuple[tuple[int, ...], ...]
    identity: int
    inverse: tuple[int, ...]
    orders: tuple[int, ...]
    exponent: int

    @property
    def order(self) -> int:
        return len(self.table)

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        return self.inverse[a]

    def element_order(self, a: int) -> int:
        return self.orders[a]

    def power(self, a: int, k: int) -> int:
        k %= self.orders[a]
        x = self.identity
        for _ in range(k):
            x = self.table[x][a]
        return x

    def conjugate(self, a: int, by: int) -> int:
        """by * a * by^-1."""
        return self.table[self.table[by][a]][self.inverse[by]]

    def commutator(self, a: int, b: int) -> int:
        """a * b * a^-1 * b^-1."""
        return self.table[self.table[a][b]][self.inverse[self.table[b][a]]]

    def __eq__(self, other):
        if not isinstance(other, FiniteGroup):
            return NotImplemented
        return (
            self.label == other.label
            and self.table == other.table
            and self.identity == other.identity
        )

    def __hash__(self):
        h = getattr(self, "_cached_hash", None)
        if h is None:
            h = hash((self.label, self.identity, self.table))
            object.__setattr__(self, "_cached_hash", h)
        return h

    def __repr__(self):
        return f"FiniteGroup({self.label}, order={self.order})"


def group_from_table(table, identity=None, label=None) -> FiniteGroup:
    """Validate a multiplication table and build the group.

    Checks run in a fixed order: size cap, identity, inverses, then
    exhaustive associativity; each failure names its first violator.
    """
    rows = [tuple(int(x) for x in row) for row in table]
    n = len(rows)
    if n == 0:
        raise BadParameter("empty multiplication table")
    if n > MAX_GROUP_ORDER:
        raise SizeLimit(f"group order {n} exceeds the cap of {MAX_GROUP_ORDER}")
    for i, row in enumerate(rows):
        if len(row) != n:
            raise BadParameter(f"row {i} has length {len(row)}, expected {n}")
        for j, x in enumerate(row):
            if not 0 <= x < n:
                raise BadParameter(f"entry [{i}][{j}] = {x} out of range 0..{n - 1}")
    t = tuple(rows)

    if identity is None:
        e = next(
            (c for c in range(n) if all(t[c][x] == x and t[x][c] == x for x in range(n))),
            None,
        )
        if e is None:
            raise NoIdentity("table has no two-sided identity")
    else:
        e = int(identity)
        if not 0 <= e < n:
            raise BadParameter(f"identity index {e} out of range 0..{n - 1}")
        bad = next((x for x in range(n) if t[e][x] != x or t[x][e] != x), None)
        if bad is not None:
            raise NoIdentity(f"declared identity {e} fails at element {bad}")

    inverse = []
    for a in range(n):
        b = next((b for b in range(n) if t[a][b] == e and t[b][a] == e), None)
        if b is None:
            raise NoInverse(f"element {a} has no two-sided inverse")
        inverse.append(b)

    arr = np.asarray(t, dtype=np.int32)
    left = arr[arr]
    right = arr[:, arr]
    if not np.array_equal(left, right):
        i, j, k = (int(v) for v in np.argwhere(left != right)[0])
        raise NonAssociative(
            f"({i}*{j})*{k} = {int(left[i, j, k])} but {i}*({j}*{k}) = {int(right[i, j, k])}"
        )

    orders = []
    for a in range(n):
        x, o = a, 1
        while x != e:
            x = t[x][a]
            o += 1
        orders.append(o)
    exponent = lcm(*orders) if orders else 1

    if label is None:
        digest = hashlib.blake2b(repr(t).encode(), digest_size=4).hexdigest()
        label = f"table{n}-{digest}"
    return FiniteGroup(label, t, e, tuple(inverse), tuple(orders), exponent)


# ---------------------------------------------------------------------------
# Builtin constructors.  Element orderings are part of the contract.


def _check_small(name: str, order: int):
    if order > MAX_GROUP_ORDER:
        raise SizeLimit(f"{name} would have order {order}, cap is {MAX_GROUP_ORDER}")


def cyclic(n: int) -> FiniteGroup:
    """C_n with generator t; element i is t^i."""
    if n < 1:
        raise BadParameter(f"cyclic needs n >= 1, got {n}")
    _check_small(f"cyclic({n})", n)
    t = [[(i + j) % n for j in range(n)] for i in range(n)]
    return group_from_table(t, 0, f"cyclic({n})")


def elem_abelian(p: int, r: int) -> FiniteGroup:
    """(C_p)^r; element x has base-p digits of x (little-endian) as coordinates."""
    if not is_prime(p):
        raise BadParameter(f"elem_abelian needs a prime, got {p}")
    if r < 1:
        raise BadParameter(f"elem_abelian needs r >= 1, got {r}")
    n = p**r
    _check_small(f"elem_abelian({p},{r})", n)
    weights = [p**i for i in range(r)]

    def add(x, y):
        return sum(((x // w + y // w) % p) * w for w in weights)

    t = [[add(x, y) for y in range(n)] for x in range(n)]
    return group_from_table(t, 0, f"elem_abelian({p},{r})")


def dihedral(n: int) -> FiniteGroup:
    """D_n of order 2n; element i + j*n is r^i s^j (rotation r, reflection s)."""
    if n < 1:
        raise BadParameter(f"dihedral needs n >= 1, got {n}")
    _check_small(f"dihedral({n})", 2 * n)

    def mul(a, b):
        i1, j1 = a % n, a // n
        i2, j2 = b % n, b // n
        i = (i1 + (i2 if j1 == 0 else -i2)) % n
        return i + (j1 ^ j2) * n

    t = [[mul(a, b) for b in range(2 * n)] for a in range(2 * n)]
    return group_from_table(t, 0, f"dihedral({n})")


def dicyclic(n: int) -> FiniteGroup:
    """Dicyclic group of order 4n; element i + j*2n is a^i b^j.

    Relations: a^(2n) = 1, b^2 = a^n, b a b^-1 = a^-1.
    """
    if n < 1:
        raise BadParameter(f"dicyclic needs n >= 1, got {n}")
    _check_small(f"dicyclic({n})", 4 * n)
    m = 2 * n

    def mul(x, y):
        i1, j1 = x % m, x // m
        i2, j2 = y % m, y // m
        if j1 == 0:
            return (i1 + i2) % m + j2 * m
        if j2 == 0:
            return (i1 - i2) % m + m
        return (i1 - i2 + n) % m

    t = [[mul(x, y) for y in range(2 * m)] for x in range(2 * m)]
    return group_from_table(t, 0, f"dicyclic({n})")


def quaternion8() -> FiniteGroup:
    """Q8 as dicyclic(2): elements 1, i, i^2, i^3, j, ij, i^2 j, i^3 j."""
    g = dicyclic(2)
    return group_from_table(g.table, 0, "quaternion8")


def product(a: FiniteGroup, b: FiniteGroup) -> FiniteGroup:
    """Direct product; pair (x, y) sits at index x*|B| + y."""
    n = a.order * b.order
    _check_small(f"product({a.label},{b.label})", n)
    nb = b.order
    t = [
        [a.table[x1][x2] * nb + b.table[y1][y2] for x2 in range(a.order) for y2 in range(nb)]
        for x1 in range(a.order)
        for y1 in range(nb)
    ]
    return group_from_table(t, 0, f"product({a.label},{b.label})")


_INT_ARG_BUILDERS = {
    "cyclic": (cyclic, 1),
    "dihedral": (dihedral, 1),
    "dicyclic": (dicyclic, 1),
    "elem_abelian": (elem_abelian, 2),
}


def _tokenize_spec(text: str) -> list[str]:
    toks = []
    i = 0
    while i < len(text):
        c = text[i]
        if c.isspace():
            i += 1
        elif c in "(),":
            toks.append(c)
            i += 1
        elif c.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            toks.append(text[i:j])
            i = j
        elif c.isalpha() or c == "_":
            j = i
            while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                j += 1
            toks.append(text[i:j])
            i = j
        else:
            raise BadParameter(f"bad character {c!r} in group spec {text!r}")
    return toks


def _expect(toks, i, want):
    if i >= len(toks) or toks[i] != want:
        got = toks[i] if i < len(toks) else "end of input"
        raise BadParameter(f"expected {want!r} in group spec, found {got!r}")
    return i + 1


def _parse_group(toks, i):
    if i >= len(toks):
        raise BadParameter("group spec ended early")
    name = toks[i]
    i += 1
    if name == "quaternion8":
        return quaternion8(), i
    if name == "product":
        i = _expect(toks, i, "(")
        left, i = _parse_group(toks, i)
        i = _expect(toks, i, ",")
        right, i = _parse_group(toks, i)
        i = _expect(toks, i, ")")
        return product(left, right), i
    if name in _INT_ARG_BUILDERS:
        builder, argc = _INT_ARG_BUILDERS[name]
        i = _expect(toks, i, "(")
        args = []
        for k in range(argc):
            if k:
                i = _expect(toks, i, ",")
            if i >= len(toks) or not toks[i].isdigit():
                raise BadParameter(f"expected an integer argument for {name}")
            args.append(int(toks[i]))
            i += 1
        i = _expect(toks, i, ")")
        return builder(*args), i
    raise BadParameter(f"unknown group constructor {name!r}")


def builtin_group(spec: str) -> FiniteGroup:
    """Build a group from a constructor expression.

    Grammar: cyclic(n) | elem_abelian(p,r) | dihedral(n) | dicyclic(n)
    | quaternion8 | product(spec,spec).  Whitespace is ignored; labels
    are the normalized expression text.
    """
    toks = _tokenize_spec(spec)
    g, pos = _parse_group(toks, 0)
    if pos != len(toks):
        raise BadParameter(f"trailing input after group spec: {' '.join(toks[pos:])!r}")
    return g


# ---------------------------------------------------------------------------
# Subgroups and structure.


@dataclass(frozen=True, eq=False)
class Subgroup:
    """A subgroup given by its sorted member indices inside a parent group."""

    parent: FiniteGroup
    members: tuple[int, ...]

    @property
    def order(self) -> int:
        return len(self.members)

    @property
    def index(self) -> int:
        return self.parent.order // len(self.members)

    def contains(self, x: int) -> bool:
        return x in set(self.members)

    def is_normal(self) -> bool:
        g = self.parent
        mem = set(self.members)
        return all(g.conjugate(s, x) in mem for s in self.members for x in range(g.order))

    def __eq__(self, other):
        if not isinstance(other, Subgroup):
            return NotImplemented
        return self.parent == other.parent and self.members == other.members

    def __hash__(self):
        return hash((hash(self.parent), self.members))

    def __repr__(self):
        return f"Subgroup(order={self.order} of {self.parent.label})"


def subgroup(g: FiniteGroup, members) -> Subgroup:
    """Validate a member set (identity, closure) and wrap it."""
    mem = tuple(sorted({int(x) for x in members}))
    if not mem:
        raise BadParameter("subgroup needs at least the identity")
    for x in mem:
        if not 0 <= x < g.order:
            raise BadParameter(f"member {x} out of range for {g.label}")
    ms = set(mem)
    if g.identity not in ms:
        raise BadParameter("subgroup is missing the identity")
    for a in mem:
        for b in mem:
            if g.table[a][b] not in ms:
                raise BadParameter(f"member set not closed: {a}*{b} escapes")
    return Subgroup(g, mem)


def generated_subgroup(g: FiniteGroup, gens) -> tuple[int, ...]:
    """Sorted members of the subgroup generated by `gens`."""
    e = g.identity
    mask = 1 << e
    out = [e]
    gl = sorted({int(x) for x in gens})
    frontier = [e]
    while frontier:
        nxt = []
        for x in frontier:
            row = g.table[x]
            for s in gl:
                y = row[s]
                if not (mask >> y) & 1:
                    mask |= 1 << y
                    out.append(y)
                    nxt.append(y)
        frontier = nxt
    return tuple(sorted(out))


def _closure_with_normal(g: FiniteGroup, nmem, gens) -> tuple[int, ...]:
    # <N u gens> for N normal in g: the result is a union of N-cosets, so
    # BFS over coset representatives absorbing one coset at a time.
    t = g.table
    mask = 0
    for s in nmem:
        mask |= 1 << s
    frontier = [g.identity]
    while frontier:
        nxt = []
        for w in frontier:
            row = t[w]
            for s in gens:
                y = row[s]
                if not (mask >> y) & 1:
                    for m in nmem:
                        mask |= 1 << t[m][y]
                    nxt.append(y)
        frontier = nxt
    out = []
    x = 0
    while mask:
        if mask & 1:
            out.append(x)
        mask >>= 1
        x += 1
    return tuple(out)


@lru_cache(maxsize=None)
def is_abelian(g: FiniteGroup) -> bool:
    t = g.table
    return all(t[a][b] == t[b][a] for a in range(g.order) for b in range(a))


@lru_cache(maxsize=None)
def center(g: FiniteGroup) -> Subgroup:
    t = g.table
    mem = [x for x in range(g.order) if all(t[x][y] == t[y][x] for y in range(g.order))]
    return Subgroup(g, tuple(mem))


def centralizer(g: FiniteGroup, members) -> tuple[int, ...]:
    t = g.table
    mem = tuple(members)
    return tuple(x for x in range(g.order) if all(t[x][m] == t[m][x] for m in mem))


@lru_cache(maxsize=None)
def commutator_subgroup(g: FiniteGroup) -> Subgroup:
    gens = {g.commutator(a, b) for a in range(g.order) for b in range(g.order)}
    return Subgroup(g, generated_subgroup(g, gens))


@lru_cache(maxsize=None)
def conjugacy_classes(g: FiniteGroup) -> tuple[tuple[int, ...], ...]:
    """Classes as sorted tuples: identity class first, then by least member."""
    n = g.order
    seen = [False] * n
    classes = []
    for x in range(n):
        if seen[x]:
            continue
        cls = sorted({g.conjugate(x, c) for c in range(n)})
        for y in cls:
            seen[y] = True
        classes.append(tuple(cls))
    classes.sort(key=lambda c: (g.identity not in c, c[0]))
    return tuple(classes)


@dataclass(frozen=True)
class StructurePredicates:
    is_abelian: bool
    exponent: int
    is_elementary_abelian: bool
    center: Subgroup
    commutator_subgroup: Subgroup


def structure_predicates(g: FiniteGroup) -> StructurePredicates:
    ab = is_abelian(g)
    elem = ab and (g.exponent == 1 or is_prime(g.exponent))
    return StructurePredicates(ab, g.exponent, elem, center(g), commutator_subgroup(g))


@lru_cache(maxsize=None)
def _elementary_quotient(g: FiniteGroup, p: int):
    # Coordinates of G / <commutators, p-th powers> as an F_p space.
    gens = {g.commutator(a, b) for a in range(g.order) for b in range(g.order)}
    gens.update(g.power(a, p) for a in range(g.order))
    k = generated_subgroup(g, gens)
    if len(k) == g.order:
        return 0, None, None
    q, proj = quotient_group(g, k)
    coord = {q.identity: ()}
    basis = []
    for c in range(q.order):
        if c in coord:
            continue
        idx = len(basis)
        basis.append(c)
        coord = {x: v + (0,) for x, v in coord.items()}
        items = list(coord.items())
        pw = q.identity
        for mult in range(1, p):
            pw = q.table[pw][c]
            for x, v in items:
                coord[q.table[x][pw]] = v[:idx] + (mult,)
    return len(basis), proj, coord


@lru_cache(maxsize=None)
def prime_index_normal_subgroups(g: FiniteGroup, p: int) -> tuple[tuple[int, ...], ...]:
    """All normal subgroups of index p (kernels of maps onto C_p)."""
    if not is_prime(p):
        raise BadParameter(f"index must be prime, got {p}")
    if g.order % p:
        return ()
    r, proj, coord = _elementary_quotient(g, p)
    if r == 0:
        return ()
    out = []
    for code in range(1, p**r):
        vec = []
        c = code
        for _ in range(r):
            vec.append(c % p)
            c //= p
        first = next(v for v in vec if v)
        if first != 1:
            continue
        mem = tuple(
            x
            for x in range(g.order)
            if sum(a * b for a, b in zip(coord[proj[x]], vec)) % p == 0
        )
        out.append(mem)
    return tuple(out)


def index2_subgroups(g: FiniteGroup) -> tuple[tuple[int, ...], ...]:
    return prime_index_normal_subgroups(g, 2)


@dataclass(frozen=True)
class GeneralizedDicyclicWitness:
    subgroup: Subgroup
    g: int


@lru_cache(maxsize=None)
def is_generalized_dicyclic(g: FiniteGroup):
    """Witness (abelian A of index 2, order-4 element inverting A), or None.

    The definition is applied literally, so some abelian groups (C4 and
    C4 x C2^r) pass; callers that care test abelianness first.
    """
    n = g.order
    if n % 4:
        return None
    t = g.table
    inv = g.inverse
    for amem in index2_subgroups(g):
        aset = set(amem)
        if not all(t[a][b] == t[b][a] for a in amem for b in amem):
            continue
        for x in range(n):
            if x in aset or g.orders[x] != 4:
                continue
            if all(g.conjugate(a, x) == inv[a] for a in amem):
                return GeneralizedDicyclicWitness(Subgroup(g, amem), x)
    return None


def quotient_group(g: FiniteGroup, members):
    """Quotient by a normal subgroup; returns (group, projection array).

    Cosets are numbered by ascending least representative.
    """
    sub = subgroup(g, members)
    if not sub.is_normal():
        raise BadParameter(f"subgroup of order {sub.order} is not normal in {g.label}")
    n = g.order
    coset_of = [-1] * n
    reps = []
    for x in range(n):
        if coset_of[x] < 0:
            cid = len(reps)
            reps.append(x)
            for s in sub.members:
                coset_of[g.table[x][s]] = cid
    m = len(reps)
    qt = [[coset_of[g.table[reps[i]][reps[j]]] for j in range(m)] for i in range(m)]
    label = f"{g.label}/o{sub.order}"
    return group_from_table(qt, coset_of[g.identity], label), tuple(coset_of)


@lru_cache(maxsize=None)
def normal_subgroups(g: FiniteGroup) -> tuple[tuple[int, ...], ...]:
    """All normal subgroups, sorted by (order, members).

    Walks closures of unions of conjugacy classes.  Guarded by a step
    budget that only extremely subgroup-rich groups near the order cap
    can exhaust.
    """
    classes = conjugacy_classes(g)
    triv = (g.identity,)
    found = {triv}
    frontier = [triv]
    ops = 0
    while frontier:
        nxt = []
        for nmem in frontier:
            nset = set(nmem)
            for cls in classes:
                if cls[0] in nset:
                    continue
                ops += 1
                if ops > _NORMAL_ENUM_LIMIT:
                    raise SizeLimit(
                        f"normal-subgroup enumeration for {g.label} exceeded "
                        f"{_NORMAL_ENUM_LIMIT} closure steps"
                    )
                ext = _closure_with_normal(g, nmem, cls)
                if ext not in found:
                    found.add(ext)
                    nxt.append(ext)
        frontier = nxt
    return tuple(sorted(found, key=lambda s: (len(s), s)))


def _is_power_of(n: int, p: int) -> bool:
    while n % p == 0:
        n //= p
    return n == 1


def p_elements(g: FiniteGroup, p: int) -> tuple[int, ...]:
    return tuple(x for x in range(g.order) if _is_power_of(g.orders[x], p))


def normal_sylow(g: FiniteGroup, p: int):
    """The unique Sylow p-subgroup when the p-elements form a subgroup."""
    mem = p_elements(g, p)
    ms = set(mem)
    if all(g.table[a][b] in ms for a in mem for b in mem):
        return Subgroup(g, mem)
    return None


def sylow_subgroup(g: FiniteGroup, p: int) -> Subgroup:
    """A Sylow p-subgroup by greedy extension (first one in element order)."""
    if not is_prime(p):
        raise BadParameter(f"sylow_subgroup needs a prime, got {p}")
    cur = (g.identity,)
    pels = [x for x in p_elements(g, p) if x != g.identity]
    grown = True
    while grown:
        grown = False
        cset = set(cur)
        for y in pels:
            if y in cset:
                continue
            cand = generated_subgroup(g, cur + (y,))
            if _is_power_of(len(cand), p):
                cur = cand
                grown = True
                break
    return Subgroup(g, cur)


def hall_subgroup(g: FiniteGroup, primes):
    """Elements of order supported on `primes`, when they form a subgroup."""
    ps = tuple(sorted(set(primes)))
    mem = tuple(
        x for x in range(g.order) if all(q in ps for q in prime_factors(g.orders[x]))
    )
    ms = set(mem)
    if all(g.table[a][b] in ms for a in mem for b in mem):
        return Subgroup(g, mem)
    return None


def coprime_split(g: FiniteGroup, primes):
    """Split G = U x B with U generated by `primes`-elements, B the rest.

    Returns (U, B) as subgroups when the split is a genuine direct
    product (B closed, trivial intersection, elementwise commuting),
    else None.
    """
    ps = tuple(sorted(set(primes)))
    gens = [x for x in range(g.order) if g.orders[x] > 1 and _in_primes(g.orders[x], ps)]
    umem = generated_subgroup(g, gens)
    bmem = tuple(
        x for x in range(g.order) if all(q not in ps for q in prime_factors(g.orders[x]))
    )
    if len(umem) * len(bmem) != g.order:
        return None
    bset = set(bmem)
    if any(g.table[a][b] not in bset for a in bmem for b in bmem):
        return None
    if len(set(umem) & bset) != 1:
        return None
    t = g.table
    if any(t[u][b] != t[b][u] for u in umem for b in bmem):
        return None
    return Subgroup(g, umem), Subgroup(g, bmem)


def _in_primes(order: int, ps) -> bool:
    # order is a prime power; test whether its prime lies in ps
    for p in ps:
        if _is_power_of(order, p):
            return True
    return False


@dataclass(frozen=True)
class StructureDecomposition:
    normal_sylows: tuple
    splittings: tuple
    hall_subgroup: Subgroup | None


def decompose_structure(g: FiniteGroup, hall_primes=()) -> StructureDecomposition:
    """Normal Sylows, all nontrivial direct splittings, optional Hall part.

    Splittings come from exhaustive search over pairs of normal
    subgroups with trivial intersection and complementary orders.
    """
    sylows = []
    for p in prime_factors(g.order):
        s = normal_sylow(g, p)
        if s is not None:
            sylows.append((p, s))
    norms = normal_subgroups(g)
    masks = []
    for mem in norms:
        m = 0
        for x in mem:
            m |= 1 << x
        masks.append(m)
    ebit = 1 << g.identity
    splits = []
    n = g.order
    for i, nm in enumerate(norms):
        if len(nm) == 1:
            continue
        for j in range(i, len(norms)):
            wm = norms[j]
            if len(wm) == 1 or len(nm) * len(wm) != n:
                continue
            if masks[i] & masks[j] == ebit:
                splits.append((Subgroup(g, nm), Subgroup(g, wm)))
    hall = hall_subgroup(g, hall_primes) if hall_primes else None
    return StructureDecomposition(tuple(sylows), tuple(splits), hall)


def order_profile(g: FiniteGroup, members=None) -> tuple[int, ...]:
    """Sorted element orders; a complete isomorphism invariant for abelian sets."""
    mem = range(g.order) if members is None else members
    return tuple(sorted(g.orders[x] for x in mem))


def subgroup_as_group(sub: Subgroup):
    """The subgroup as a standalone group plus its member mapping."""
    g = sub.parent
    mem = sub.members
    pos = {x: i for i, x in enumerate(mem)}
    t = [[pos[g.table[a][b]] for b in mem] for a in mem]
    digest = hashlib.blake2b(repr(mem).encode(), digest_size=3).hexdigest()
    return group_from_table(t, pos[g.identity], f"{g.label}|{len(mem)}-{digest}"), mem


def generating_set(g: FiniteGroup) -> tuple[int, ...]:
    """A small generating set, chosen greedily over ascending elements."""
    gens: list[int] = []
    have = {g.identity}
    for x in range(g.order):
        if x not in have:
            gens.append(x)
            have = set(generated_subgroup(g, gens))
    return tuple(gens)


# ---------------------------------------------------------------------------
# Permutations of the element set.


@dataclass(frozen=True)
class GPermutation:
    """A bijection of 0..degree-1 stored as its image tuple."""

    images: tuple[int, ...]

    @classmethod
    def from_images(cls, images) -> "GPermutation":
        t = tuple(int(x) for x in images)
        if sorted(t) != list(range(len(t))):
            raise BadParameter("images are not a bijection")
        return cls(t)

    @classmethod
    def identity(cls, degree: int) -> "GPermutation":
        return cls(tuple(range(degree)))

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, x: int) -> int:
        return self.images[x]

    def compose(self, other: "GPermutation") -> "GPermutation":
        """(self . other)(x) = self(other(x)); other acts first."""
        if len(self.images) != len(other.images):
            raise DimensionMismatch("composing permutations of different degree")
        im = self.images
        return GPermutation(tuple(im[i] for i in other.images))

    def inverse(self) -> "GPermutation":
        inv = [0] * len(self.images)
        for i, im in enumerate(self.images):
            inv[im] = i
        return GPermutation(tuple(inv))

    def is_identity(self) -> bool:
        return all(i == im for i, im in enumerate(self.images))

    def cycle_string(self) -> str:
        seen = [False] * len(self.images)
        parts = []
        for start in range(len(self.images)):
            if seen[start] or self.images[start] == start:
                seen[start] = True
                continue
            cyc = [start]
            seen[start] = True
            x = self.images[start]
            while x != start:
                cyc.append(x)
                seen[x] = True
                x = self.images[x]
            parts.append("(" + " ".join(map(str, cyc)) + ")")
        return "".join(parts) if parts else "()"


def cayley_permutation(g: FiniteGroup, a: int) -> GPermutation:
    """Left translation x -> a*x as a permutation of the element set."""
    return GPermutation(tuple(g.table[a]))


class GPermutationGroup:
    """Permutation group with exact order via a stabilizer chain."""

    def __init__(self, degree: int, generators=()):
        self.degree = int(degree)
        ident = tuple(range(self.degree))
        gens = []
        seen = set()
        for p in generators:
            if not isinstance(p, GPermutation):
                p = GPermutation.from_images(p)
            if p.degree != self.degree:
                raise DimensionMismatch(
                    f"generator of degree {p.degree} in group of degree {self.degree}"
                )
            if p.images == ident or p.images in seen:
                continue
            seen.add(p.images)
            gens.append(p)
        self.generators = tuple(gens)
        self._base: list[int] = []
        self._levels: list[dict] = []
        self._strong: list[GPermutation] = list(gens)
        self._build()

    # Bottom-up Schreier-Sims; levels deeper than the working index stay
    # complete, so sifting below is always sound.
    def _build(self):
        for p in self._strong:
            if all(p.images[b] == b for b in self._base):
                self._base.append(next(x for x in range(self.degree) if p.images[x] != x))
        self._levels = [None] * len(self._base)
        i = len(self._base) - 1
        while i >= 0:
            i = self._complete_level(i)

    def _complete_level(self, i: int) -> int:
        base = self._base
        b = base[i]
        prefix = base[:i]
        s_i = [g for g in self._strong if all(g.images[p] == p for p in prefix)]
        trans = {b: GPermutation.identity(self.degree)}
        queue = [b]
        while queue:
            pt = queue.pop(0)
            t = trans[pt]
            for gperm in s_i:
                q = gperm.images[pt]
                if q not in trans:
                    trans[q] = gperm.compose(t)
                    queue.append(q)
        self._levels[i] = {"point": b, "transversal": trans}
        for pt in sorted(trans):
            tp = trans[pt]
            for gperm in s_i:
                sg = trans[gperm.images[pt]].inverse().compose(gperm).compose(tp)
                if sg.is_identity():
                    continue
                residue, j = self._sift(sg, i + 1)
                if residue is None:
                    continue
                if j == len(base):
                    base.append(
                        next(x for x in range(self.degree) if residue.images[x] != x)
                    )
                    self._levels.append(None)
                self._strong.append(residue)
                return j
        return i - 1

    def _sift(self, perm: GPermutation, start: int):
        for l in range(start, len(self._levels)):
            lvl = self._levels[l]
            img = perm.images[lvl["point"]]
            t = lvl["transversal"].get(img)
            if t is None:
                return perm, l
            perm = t.inverse().compose(perm)
        if perm.is_identity():
            return None, len(self._levels)
        return perm, len(self._base)

    def order(self) -> int:
        out = 1
        for lvl in self._levels:
            out *= len(lvl["transversal"])
        return out

    def contains(self, perm: GPermutation) -> bool:
        if perm.degree != self.degree:
            raise DimensionMismatch(
                f"permutation of degree {perm.degree} against group of degree {self.degree}"
            )
        residue, _ = self._sift(perm, 0)
        return residue is None

    def __contains__(self, perm) -> bool:
        return self.contains(perm)

    def elements(self, max_size: int = 10**6) -> list[GPermutation]:
        """All elements via transversal products; refuses huge groups."""
        n = self.order()
        if n > max_size:
            raise SizeLimit(f"group of order {n} exceeds enumeration cap {max_size}")
        out = [GPermutation.identity(self.degree)]
        for lvl in reversed(self._levels):
            trans = [lvl["transversal"][p] for p in sorted(lvl["transversal"])]
            out = [t.compose(h) for t in trans for h in out]
        return out


def left_regular_group(g: FiniteGroup) -> GPermutationGroup:
    """The group of all left translations, generated from a small set."""
    gens = [cayley_permutation(g, a) for a in generating_set(g)]
    return GPermutationGroup(g.order, gens)


# ---------------------------------------------------------------------------
# Serialization.


def group_to_json(g: FiniteGroup) -> dict:
    return {
        "schema": "orbitsym/1",
        "label": g.label,
        "order": g.order,
        "identity": g.identity,
        "table": [list(row) for row in g.table],
    }


def group_from_json(obj) -> FiniteGroup:
    if not isinstance(obj, dict):
        raise SchemaError("/: expected an object describing a group")
    schema = obj.get("schema", "orbitsym/1")
    if schema != "orbitsym/1":
        raise SchemaError(f"/schema: unsupported schema {schema!r}")
    label = obj.get("label")
    if not isinstance(label, str) or not label:
        raise SchemaError("/label: expected a nonempty string")
    table = obj.get("table")
    if not isinstance(table, list) or not table:
        raise SchemaError("/table: expected a nonempty list of rows")
    n = len(table)
    for i, row in enumerate(table):
        if not isinstance(row, list) or len(row) != n:
            raise SchemaError(f"/table/{i}: expected a row of {n} entries")
        for j, x in enumerate(row):
            if not isinstance(x, int) or isinstance(x, bool) or not 0 <= x < n:
                raise SchemaError(f"/table/{i}/{j}: expected an element index 0..{n - 1}")
    order = obj.get("order")
    if order != n:
        raise SchemaError(f"/order: declared {order!r}, table has {n} rows")
    identity = obj.get("identity")
    if not isinstance(identity, int) or isinstance(identity, bool) or not 0 <= identity < n:
        raise SchemaError(f"/identity: expected an element index 0..{n - 1}")
    return group_from_table(table, identity, label)

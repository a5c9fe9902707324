"""Finite groups as dense multiplication tables over element indices.

Elements are the integers ``0..n-1`` with ``0`` the identity.  Groups are
built from permutation generators; permutations act on the right, so the
product ``x*y`` means "apply x, then y" and ``mul[x][y]`` is its index.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional, Sequence, Union

from .errors import (
    ClosureCapExceeded,
    EnumerationCapExceeded,
    NotABijection,
    NotAPGroup,
    NotNormal,
)

DEFAULT_CLOSURE_CAP = 65536
# A dense table has n*n entries; past this many elements it stops fitting in memory.
TABLE_CAP = 4096
SUBGROUP_ORDER_CAP = 512
SUBGROUP_COUNT_CAP = 100_000


def prime_power_base(n: int) -> Optional[int]:
    """Return p if n = p^k with k >= 1, else None."""
    if n < 2:
        return None
    p = 2
    while p * p <= n:
        if n % p == 0:
            break
        p += 1
    else:
        return n
    while n % p == 0:
        n //= p
    return p if n == 1 else None


def log_p(n: int, p: int) -> int:
    k = 0
    while n > 1:
        if n % p:
            raise ValueError(f"{n} is not a power of {p}")
        n //= p
        k += 1
    return k


def compose(a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
    """Image list of "apply a, then b"."""
    return tuple(b[i] for i in a)


class Group:
    """A finite group given by its full multiplication table.

    Immutable after construction.  Derived data (element orders, series,
    subgroup lattices) is memoized on the instance.
    """

    identity = 0

    def __init__(
        self,
        mul: list[list[int]],
        generators: Sequence[int],
        element_perms: Sequence[tuple[int, ...]],
        degree: int,
        name: str = "",
    ):
        self.mul = mul
        self.order = len(mul)
        inv = [0] * self.order
        for x, row in enumerate(mul):
            inv[x] = row.index(0)
        self.inv = inv
        self.generators = tuple(generators)
        self.element_perms = tuple(element_perms)
        self.degree = degree
        self.name = name
        self.prime = prime_power_base(self.order)
        self._cache: dict = {}

    def __repr__(self) -> str:
        return f"<Group {self.name or '?'} of order {self.order}>"

    def __len__(self) -> int:
        return self.order

    def __getstate__(self):
        state = dict(self.__dict__)
        state["_cache"] = {}
        for key in ("orders", "whole", "trivial"):
            state.pop(key, None)
        return state

    def power(self, x: int, k: int) -> int:
        result, base, mul = 0, x, self.mul
        if k < 0:
            base, k = self.inv[x], -k
        while k:
            if k & 1:
                result = mul[result][base]
            base = mul[base][base]
            k >>= 1
        return result

    def commutator(self, a: int, b: int) -> int:
        """[a, b] = a^-1 b^-1 a b."""
        mul, inv = self.mul, self.inv
        return mul[mul[inv[a]][inv[b]]][mul[a][b]]

    def conjugate(self, x: int, g: int) -> int:
        """x^g = g^-1 x g."""
        mul = self.mul
        return mul[mul[self.inv[g]][x]][g]

    @cached_property
    def orders(self) -> tuple[int, ...]:
        mul = self.mul
        result = [0] * self.order
        for x in range(self.order):
            if result[x]:
                continue
            k, y = 1, x
            while y != 0:
                y = mul[y][x]
                k += 1
            result[x] = k if x else 1
        return tuple(result)

    @cached_property
    def whole(self) -> "Subgroup":
        return Subgroup(self, tuple(range(self.order)))

    @cached_property
    def trivial(self) -> "Subgroup":
        return Subgroup(self, (0,))

    @property
    def is_abelian(self) -> bool:
        mul = self.mul
        return all(
            mul[a][b] == mul[b][a]
            for i, a in enumerate(self.generators)
            for b in self.generators[i + 1:]
        )


@dataclass(frozen=True)
class Subgroup:
    parent: Group = field(repr=False)
    members: tuple[int, ...]

    @property
    def order(self) -> int:
        return len(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __contains__(self, x: int) -> bool:
        return x in self.member_set

    @cached_property
    def member_set(self) -> frozenset[int]:
        return frozenset(self.members)

    @cached_property
    def mask(self) -> int:
        m = 0
        for x in self.members:
            m |= 1 << x
        return m

    @cached_property
    def generators(self) -> tuple[int, ...]:
        """A small (not necessarily minimal) generating set, chosen greedily."""
        gens: list[int] = []
        span = {0}
        for x in self.members:
            if x not in span:
                gens.append(x)
                span = set(_closure(self.parent, gens))
                if len(span) == len(self.members):
                    break
        return tuple(gens)

    def issubset(self, other: "Subgroup") -> bool:
        return self.member_set <= other.member_set

    @property
    def is_trivial(self) -> bool:
        return len(self.members) == 1

    @property
    def is_abelian(self) -> bool:
        mul = self.parent.mul
        gens = self.generators
        return all(mul[a][b] == mul[b][a] for i, a in enumerate(gens) for b in gens[i + 1:])


def _closure(G: Group, gens: Iterable[int], start: Iterable[int] = (0,)) -> list[int]:
    """Elements reachable from ``start`` by right multiplication with ``gens``."""
    gens = [g for g in gens if g != 0]
    mul = G.mul
    seen = set(start)
    queue = list(seen)
    for x in queue:
        row = mul[x]
        for g in gens:
            y = row[g]
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return queue


def _subgroup(G: Group, members: Iterable[int]) -> Subgroup:
    return Subgroup(G, tuple(sorted(members)))


def from_permutation_generators(
    degree: int,
    gens: Sequence[Sequence[int]],
    name: str = "",
    cap: int = DEFAULT_CLOSURE_CAP,
) -> Group:
    """Close the permutations ``gens`` on ``{0..degree-1}`` into a Group.

    Elements are numbered breadth-first: identity, then products in the
    order they are discovered by right-multiplying with each generator.
    """
    perms = []
    for k, g in enumerate(gens):
        g = tuple(int(v) for v in g)
        if len(g) != degree or sorted(g) != list(range(degree)):
            raise NotABijection(f"generator {k} is not a permutation of {{0..{degree - 1}}}: {list(g)}")
        perms.append(g)

    identity = tuple(range(degree))
    index = {identity: 0}
    elements = [identity]
    queue = deque([identity])
    while queue:
        x = queue.popleft()
        for g in perms:
            y = compose(x, g)
            if y not in index:
                if len(elements) >= min(cap, TABLE_CAP):
                    raise ClosureCapExceeded(
                        f"closure of {name or 'generators'} exceeds {min(cap, TABLE_CAP)} elements"
                    )
                index[y] = len(elements)
                elements.append(y)
                queue.append(y)

    n = len(elements)
    mul = []
    for x in elements:
        mul.append([index[tuple(y[i] for i in x)] for y in elements])
    gen_idx = []
    for g in perms:
        i = index[g]
        if i and i not in gen_idx:
            gen_idx.append(i)
    G = Group(mul, gen_idx, elements, degree, name)
    assert G.order == n
    return G


def group_from_table(mul: list[list[int]], generators: Sequence[int], name: str = "") -> Group:
    """Wrap a multiplication table; provenance is the right regular representation."""
    n = len(mul)
    perms = [tuple(mul[i][x] for i in range(n)) for x in range(n)]
    return Group(mul, generators, perms, n, name)


def element_order(G: Group, x: int) -> int:
    return G.orders[x]


def subgroup_generated(G: Group, seed: Iterable[int]) -> Subgroup:
    return _subgroup(G, _closure(G, sorted(set(seed))))


def is_normal(G: Group, S: Subgroup) -> bool:
    members = S.member_set
    return all(G.conjugate(x, g) in members for x in S.generators for g in G.generators)


def centralizer(G: Group, target: Union[Subgroup, int]) -> Subgroup:
    xs = [target] if isinstance(target, int) else list(target.generators)
    mul = G.mul
    return Subgroup(G, tuple(g for g in range(G.order) if all(mul[g][x] == mul[x][g] for x in xs)))


def center(G: Group) -> Subgroup:
    if "center" not in G._cache:
        G._cache["center"] = centralizer(G, G.whole)
    return G._cache["center"]


def commutator_subgroup(G: Group, A: Subgroup, B: Subgroup) -> Subgroup:
    comm = G.commutator
    seed = {comm(a, b) for a in A.members for b in B.members}
    return subgroup_generated(G, seed)


def derived_subgroup(G: Group) -> Subgroup:
    if "derived" not in G._cache:
        G._cache["derived"] = commutator_subgroup(G, G.whole, G.whole)
    return G._cache["derived"]


@dataclass
class SeriesReport:
    lower_central: list[Subgroup]
    upper_central: list[Subgroup]
    nilpotency_class: Optional[int]
    coclass: Optional[int]
    two_step_centralizers: dict[int, Subgroup] = field(default_factory=dict)
    g1: Optional[Subgroup] = None
    degree_of_commutativity: Optional[int] = None

    @property
    def lower_orders(self) -> list[int]:
        return [S.order for S in self.lower_central]


def _lower_central(G: Group) -> list[Subgroup]:
    if "lcs" not in G._cache:
        series = [G.whole]
        comm = G.commutator
        while True:
            last = series[-1]
            # [N, G] is the normal closure of the [n, g] with g a generator of G.
            nxt = subgroup_generated(G, {comm(a, g) for a in last.members for g in G.generators})
            nxt = normal_closure(G, nxt)
            if nxt.order == last.order:
                break
            series.append(nxt)
        G._cache["lcs"] = series
    return G._cache["lcs"]


def upper_central_series(G: Group) -> list[Subgroup]:
    """Z_0 = 1 < Z_1 < ... until it stabilizes."""
    if "ucs" not in G._cache:
        comm = G.commutator
        series = [G.trivial]
        while True:
            Z = series[-1].member_set
            nxt = Subgroup(G, tuple(
                x for x in range(G.order) if all(comm(x, g) in Z for g in G.generators)
            ))
            if nxt.order == len(Z):
                break
            series.append(nxt)
        G._cache["ucs"] = series
    return G._cache["ucs"]


def lower_central_series(G: Group) -> SeriesReport:
    lower = _lower_central(G)
    upper = upper_central_series(G)
    cls = coclass = None
    if lower[-1].is_trivial:
        cls = len(lower) - 1
        if G.prime is not None:
            coclass = log_p(G.order, G.prime) - cls
        elif G.order == 1:
            coclass = 0
    return SeriesReport(lower, upper, cls, coclass)


def nilpotency_class(G: Group) -> Optional[int]:
    return lower_central_series(G).nilpotency_class


def normal_closure(G: Group, S: Subgroup) -> Subgroup:
    seed = set(S.generators)
    members = set(_closure(G, seed))
    while True:
        extra = {G.conjugate(x, g) for x in seed for g in G.generators} - members
        if not extra:
            return _subgroup(G, members)
        seed |= extra
        members = set(_closure(G, seed))


def _require_p(G: Group) -> int:
    if G.prime is None:
        raise NotAPGroup(f"{G.name or 'group'} of order {G.order} is not a p-group")
    return G.prime


def omega(G: Group, i: int) -> Subgroup:
    """Subgroup generated by the elements of order dividing p^i."""
    p = _require_p(G)
    bound = p ** i
    return subgroup_generated(G, [x for x, k in enumerate(G.orders) if bound % k == 0])


def agemo(G: Group, i: int) -> Subgroup:
    """Subgroup generated by all p^i-th powers."""
    p = _require_p(G)
    q = p ** i
    return subgroup_generated(G, {G.power(x, q) for x in range(G.order)})


def frattini(G: Group) -> Subgroup:
    if G.order == 1:
        return G.trivial
    _require_p(G)
    if "frattini" not in G._cache:
        G._cache["frattini"] = subgroup_generated(
            G, set(derived_subgroup(G).members) | set(agemo(G, 1).members)
        )
    return G._cache["frattini"]


def frattini_coordinates(G: Group) -> tuple[list[int], list[tuple[int, ...]]]:
    """Basis elements of G/Phi(G) and the F_p coordinate vector of every element."""
    p = _require_p(G)
    phi = frattini(G)
    basis: list[int] = []
    span = set(phi.members)
    for x in range(G.order):
        if x not in span:
            basis.append(x)
            span = set(_closure(G, list(phi.generators) + basis))
    d = len(basis)
    coords: list[Optional[tuple[int, ...]]] = [None] * G.order
    zero = (0,) * d
    queue = list(phi.members)
    for x in queue:
        coords[x] = zero
    mul = G.mul
    for x in queue:
        cx = coords[x]
        for k, b in enumerate(basis):
            y = mul[x][b]
            if coords[y] is None:
                c = list(cx)
                c[k] = (c[k] + 1) % p
                coords[y] = tuple(c)
                queue.append(y)
    return basis, coords  # type: ignore[return-value]


def maximal_subgroups(G: Group) -> list[Subgroup]:
    """All index-p subgroups, as kernels of the nonzero functionals on G/Phi(G)."""
    if G.order == 1:
        return []
    p = _require_p(G)
    if "maximal" in G._cache:
        return G._cache["maximal"]
    basis, coords = frattini_coordinates(G)
    d = len(basis)
    found = []
    for functional in _projective_points(p, d):
        members = tuple(
            x for x in range(G.order)
            if sum(a * b for a, b in zip(functional, coords[x])) % p == 0
        )
        found.append(Subgroup(G, members))
    found.sort(key=lambda S: S.members)
    G._cache["maximal"] = found
    return found


def _projective_points(p: int, d: int):
    """Nonzero vectors of F_p^d whose first nonzero entry is 1."""
    from itertools import product

    for lead in range(d):
        for rest in product(range(p), repeat=d - lead - 1):
            yield (0,) * lead + (1,) + rest


def quotient(G: Group, N: Subgroup, name: str = "") -> tuple[Group, list[int]]:
    """G/N with cosets numbered by their least member; returns (Q, projection)."""
    if not is_normal(G, N):
        raise NotNormal(f"subgroup of order {N.order} is not normal in {G.name}")
    mul = G.mul
    coset = [-1] * G.order
    reps = []
    for x in range(G.order):
        if coset[x] < 0:
            c = len(reps)
            reps.append(x)
            for n in N.members:
                coset[mul[x][n]] = c
    table = [[coset[mul[a][b]] for b in reps] for a in reps]
    gens = []
    for g in G.generators:
        c = coset[g]
        if c and c not in gens:
            gens.append(c)
    Q = group_from_table(table, gens, name or f"{G.name}/N{N.order}")
    return Q, coset


def direct_product(A: Group, B: Group, name: str = "", cap: int = DEFAULT_CLOSURE_CAP) -> Group:
    if A.order * B.order > min(cap, TABLE_CAP):
        raise ClosureCapExceeded(f"{A.name} x {B.name} has order {A.order * B.order}")
    da, db = A.degree, B.degree
    gens = [tuple(A.element_perms[g]) + tuple(range(da, da + db)) for g in A.generators]
    gens += [tuple(range(da)) + tuple(da + v for v in B.element_perms[g]) for g in B.generators]
    return from_permutation_generators(da + db, gens, name or f"{A.name}x{B.name}", cap)


def all_subgroups(
    G: Group, order_cap: int = SUBGROUP_ORDER_CAP, count_cap: int = SUBGROUP_COUNT_CAP
) -> list[Subgroup]:
    """Every subgroup, by joining cyclic subgroups onto known ones until nothing new appears."""
    if G.order > order_cap:
        raise EnumerationCapExceeded(f"order {G.order} exceeds subgroup enumeration cap {order_cap}")
    if "all_subgroups" in G._cache:
        cached = G._cache["all_subgroups"]
        if len(cached) > count_cap:
            raise EnumerationCapExceeded(f"more than {count_cap} subgroups")
        return cached
    mul = G.mul

    def to_mask(elts):
        m = 0
        for x in elts:
            m |= 1 << x
        return m

    cyclic: dict[int, int] = {}
    for x in range(G.order):
        members = _closure(G, [x])
        cyclic.setdefault(to_mask(members), x)
    cyc = sorted(cyclic.items(), key=lambda kv: kv[1])

    found: dict[int, tuple[list[int], tuple[int, ...]]] = {}
    for m, x in cyc:
        found[m] = (_closure(G, [x]), (x,) if x else ())
    frontier = list(found)
    while frontier:
        fresh = []
        for m in frontier:
            members, gens = found[m]
            for cm, x in cyc:
                if cm & ~m == 0:
                    continue
                new_gens = gens + (x,)
                joined = set(members)
                queue = list(members)
                for y in queue:
                    row = mul[y]
                    for g in new_gens:
                        z = row[g]
                        if z not in joined:
                            joined.add(z)
                            queue.append(z)
                jm = to_mask(joined)
                if jm not in found:
                    found[jm] = (queue, new_gens)
                    fresh.append(jm)
                    if len(found) > count_cap:
                        raise EnumerationCapExceeded(f"more than {count_cap} subgroups")
        frontier = fresh
    result = [_subgroup(G, members) for members, _ in found.values()]
    result.sort(key=lambda S: (S.order, S.members))
    G._cache["all_subgroups"] = result
    return result


def normal_subgroups(G: Group, **caps) -> list[Subgroup]:
    return [S for S in all_subgroups(G, **caps) if is_normal(G, S)]


def normal_core_set(G: Group, members: Iterable[int]) -> set[int]:
    """Largest conjugation-invariant subset of ``members`` (the normal core when it is a subgroup)."""
    core = set(members)
    gens = G.generators
    changed = True
    while changed:
        changed = False
        for x in list(core):
            if any(G.conjugate(x, g) not in core for g in gens):
                core.discard(x)
                changed = True
    return core


def normal_core(G: Group, U: Subgroup) -> Subgroup:
    return _subgroup(G, normal_core_set(G, U.members))


def intersection(A: Subgroup, B: Subgroup) -> Subgroup:
    return Subgroup(A.parent, tuple(x for x in A.members if x in B.member_set))


def join(A: Subgroup, B: Subgroup) -> Subgroup:
    return subgroup_generated(A.parent, set(A.generators) | set(B.generators))


def subgroup_as_group(S: Subgroup, name: str = "") -> Group:
    """S as a standalone Group; element i of the result is ``S.members[i]``."""
    G = S.parent
    pos = {x: i for i, x in enumerate(S.members)}
    table = [[pos[G.mul[a][b]] for b in S.members] for a in S.members]
    perms = [G.element_perms[x] for x in S.members]
    gens = [pos[g] for g in S.generators]
    return Group(table, gens, perms, G.degree, name or f"{G.name}[{S.order}]")


def exponent(G: Group) -> int:
    from math import lcm

    result = 1
    for k in set(G.orders):
        result = lcm(result, k)
    return result


def table_invariant_violations(G: Group, samples: int = 10_000, seed: int = 0) -> list[str]:
    """Names of the construction invariants that fail (empty list means all hold)."""
    n, mul, inv = G.order, G.mul, G.inv
    bad = []
    if any(mul[0][x] != x or mul[x][0] != x for x in range(n)):
        bad.append("identity")
    if any(mul[x][inv[x]] != 0 for x in range(n)):
        bad.append("inverse")
    if n <= 64:
        triples: Iterable = ((x, y, z) for x in range(n) for y in range(n) for z in range(n))
    else:
        rng = random.Random(seed)
        triples = [(rng.randrange(n), rng.randrange(n), rng.randrange(n)) for _ in range(samples)]
    if any(mul[mul[x][y]][z] != mul[x][mul[y][z]] for x, y, z in triples):
        bad.append("associativity")
    if len(_closure(G, G.generators)) != n:
        bad.append("generation")
    perms = G.element_perms
    if n <= 64:
        pairs: Iterable = ((x, y) for x in range(n) for y in range(n))
    else:
        rng = random.Random(seed + 1)
        pairs = [(rng.randrange(n), rng.randrange(n)) for _ in range(samples)]
    if any(perms[mul[x][y]] != compose(perms[x], perms[y]) for x, y in pairs):
        bad.append("element_perms")
    return bad

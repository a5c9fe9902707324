"""Structure theory specific to finite p-groups.

Powerful groups and their bases, Omega_1 of powerful groups, rank, and the
machinery of groups of maximal class: the two-step centralizer G_1, the
degree of commutativity and uniform elements.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .errors import (
    BasisSearchFailed,
    LemmaViolation,
    NotAPGroup,
    NotMaximalClass,
    NotNormal,
    NotPowerful,
    OrderTooSmall,
)
from .group import (
    Group,
    SeriesReport,
    Subgroup,
    _closure,
    agemo,
    all_subgroups,
    centralizer,
    commutator_subgroup,
    derived_subgroup,
    frattini,
    is_normal,
    log_p,
    lower_central_series,
    maximal_subgroups,
    omega,
    subgroup_as_group,
    subgroup_generated,
)


def prime_of(G: Group) -> int:
    if G.prime is None:
        raise NotAPGroup(f"{G.name or 'group'} of order {G.order} is not a nontrivial p-group")
    return G.prime


def log_order(G: Group) -> int:
    return log_p(G.order, prime_of(G)) if G.order > 1 else 0


def minimal_generator_count(G: Group) -> int:
    """d(G) = log_p |G : Phi(G)|."""
    if G.order == 1:
        return 0
    p = prime_of(G)
    return log_p(G.order // frattini(G).order, p)


def subgroup_generator_count(S: Subgroup) -> int:
    """d(S) computed inside the parent, without building a table for S."""
    if S.is_trivial:
        return 0
    G = S.parent
    p = prime_of(G)
    comm = G.commutator
    members = S.members
    seed = {comm(a, b) for a in members for b in members}
    seed.update(G.power(x, p) for x in members)
    phi = _closure(G, seed)
    return log_p(S.order // len(phi), p)


def rank(G: Group) -> int:
    """Maximum of d(H) over all subgroups H (raises EnumerationCapExceeded past the caps)."""
    if G.order == 1:
        return 0
    prime_of(G)
    return max(subgroup_generator_count(S) for S in all_subgroups(G))


def is_powerful(G: Group) -> bool:
    if G.order == 1:
        return True
    p = prime_of(G)
    target = agemo(G, 2 if p == 2 else 1)
    return derived_subgroup(G).issubset(target)


@dataclass(frozen=True)
class BasisDecomposition:
    elements: tuple[int, ...]
    orders: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.elements)


def basis_products(G: Group, elements, orders) -> set[int]:
    """All products a_1^{n_1} ... a_d^{n_d} with 0 <= n_i < m_i."""
    mul = G.mul
    current = {0}
    count = 1
    for a, m in zip(elements, orders):
        powers = [0]
        for _ in range(m - 1):
            powers.append(mul[powers[-1]][a])
        current = {mul[x][y] for x in current for y in powers}
        count *= m
    return current


def is_basis(G: Group, elements, orders) -> bool:
    total = 1
    for m in orders:
        total *= m
    return total == G.order and len(basis_products(G, elements, orders)) == G.order


def powerful_basis(G: Group) -> BasisDecomposition:
    """A basis (a_1, ..., a_d) with |a_1| >= ... >= |a_d|.

    Greedy: at each step take the highest-order cyclic factor that keeps the
    partial product set free of repetitions; backtrack when stuck.  The
    result is always checked by full product enumeration.
    """
    if not is_powerful(G):
        raise NotPowerful(f"{G.name} is not powerful")
    if G.order == 1:
        return BasisDecomposition((), ())
    orders = G.orders
    # one generator per cyclic subgroup is enough: <a> = <a^j> give the same products
    reps: dict[frozenset, int] = {}
    for x in range(1, G.order):
        key = frozenset(_closure(G, [x]))
        reps.setdefault(key, x)
    candidates = sorted(reps.values(), key=lambda x: (-orders[x], x))
    mul = G.mul
    n = G.order

    def extend(products: set[int], chosen: list[int], cap: int) -> Optional[list[int]]:
        if len(products) == n:
            return chosen
        for a in candidates:
            m = orders[a]
            if m > cap or n % (len(products) * m):
                continue
            if a in products:
                continue
            powers = [0]
            for _ in range(m - 1):
                powers.append(mul[powers[-1]][a])
            nxt = {mul[x][y] for x in products for y in powers}
            if len(nxt) != len(products) * m:
                continue
            found = extend(nxt, chosen + [a], m)
            if found is not None:
                return found
        return None

    chosen = extend({0}, [], n)
    if chosen is None:
        raise BasisSearchFailed(f"no basis found for powerful group {G.name}")
    basis = BasisDecomposition(tuple(chosen), tuple(orders[a] for a in chosen))
    if not is_basis(G, basis.elements, basis.orders):
        raise BasisSearchFailed(f"basis check failed for {G.name}")
    return basis


def square_subgroup(G: Group) -> Subgroup:
    """G^2, generated by all squares (equal to G for odd p)."""
    return subgroup_generated(G, {G.mul[x][x] for x in range(G.order)})


def omega1_of_powerful(G: Group) -> Subgroup:
    """Omega_1(N) for N = G^2, read off a basis of N and checked against the direct computation."""
    if not is_powerful(G):
        raise NotPowerful(f"{G.name} is not powerful")
    N = square_subgroup(G)
    if N.is_trivial:
        return N
    p = prime_of(G)
    NG = subgroup_as_group(N)
    basis = powerful_basis(NG)
    from_basis = subgroup_generated(
        NG, [NG.power(a, m // p) for a, m in zip(basis.elements, basis.orders)]
    )
    direct = omega(NG, 1)
    if from_basis.members != direct.members:
        raise LemmaViolation(
            f"{G.name}: basis gives Omega_1 of order {from_basis.order}, direct order {direct.order}"
        )
    if direct.order != p ** basis.size:
        raise LemmaViolation(f"{G.name}: |Omega_1(N)| = {direct.order} != p^{basis.size}")
    return Subgroup(G, tuple(N.members[i] for i in direct.members))


def is_uniform(G: Group) -> bool:
    """Powerful with all basis orders equal."""
    if G.order == 1:
        return True
    prime_of(G)
    if not is_powerful(G):
        return False
    orders = powerful_basis(G).orders
    return orders[0] == orders[-1]


def is_maximal_class(G: Group) -> bool:
    p = prime_of(G)
    n = log_p(G.order, p)
    if n < 2:
        raise OrderTooSmall(f"{G.name} has order {G.order} < p^2")
    return lower_central_series(G).nilpotency_class == n - 1


@dataclass
class MaximalClassData:
    """G_i for i = 0..n, with G_0 = G, G_1 the two-step centralizer, G_i = gamma_i for i >= 2."""

    terms: list[Subgroup]
    report: SeriesReport

    @property
    def n(self) -> int:
        return len(self.terms) - 1

    @property
    def g1(self) -> Subgroup:
        return self.terms[1]

    def term(self, i: int) -> Subgroup:
        return self.terms[min(i, self.n)]

    def level(self, x: int) -> int:
        """The t with x in G_t minus G_{t+1} (n for the identity)."""
        for t in range(self.n, -1, -1):
            if x in self.terms[t]:
                return t
        raise AssertionError("unreachable")


def _check_maximal_class(G: Group) -> int:
    p = prime_of(G)
    n = log_p(G.order, p)
    if n < 4:
        raise OrderTooSmall(f"{G.name} has order {G.order} < p^4")
    if not is_maximal_class(G):
        raise NotMaximalClass(f"{G.name} is not of maximal class")
    return n


def _two_step_centralizer(G: Group, upper: Subgroup, lower: Subgroup) -> Subgroup:
    """C_G(upper/lower) = {x : [x, y] in lower for all y in upper}."""
    comm = G.commutator
    low = lower.member_set
    ys = upper.generators
    return Subgroup(G, tuple(x for x in range(G.order) if all(comm(x, y) in low for y in ys)))


def maximal_class_data(G: Group) -> MaximalClassData:
    if "mcd" in G._cache:
        return G._cache["mcd"]
    n = _check_maximal_class(G)
    report = lower_central_series(G)
    gamma = report.lower_central  # gamma[i-1] = gamma_i, gamma_n trivial
    terms = [G.whole, _two_step_centralizer(G, gamma[1], gamma[3])] + gamma[1:]
    assert len(terms) == n + 1 and terms[-1].is_trivial

    def G_(i: int) -> Subgroup:
        return terms[min(i, n)]

    report.g1 = terms[1]
    report.two_step_centralizers = {
        i: _two_step_centralizer(G, G_(i), G_(i + 2)) for i in range(2, n - 1)
    }
    brackets = {}
    for i in range(1, n):
        for j in range(i, n):
            brackets[i, j] = commutator_subgroup(G, G_(i), G_(j)).member_set
    ell = 0
    for cand in range(n - 3, -1, -1):
        if all(brackets[i, j] <= G_(i + j + cand).member_set for (i, j) in brackets):
            ell = cand
            break
    report.degree_of_commutativity = ell
    data = MaximalClassData(terms, report)
    G._cache["mcd"] = data
    return data


def uniform_elements(G: Group) -> list[int]:
    """Elements whose centralizer has order p^2."""
    data = maximal_class_data(G)
    p = G.prime
    result = [s for s in range(G.order) if centralizer(G, s).order == p * p]
    c_last = data.report.two_step_centralizers[data.n - 2]
    complement = [
        x for x in range(G.order) if x not in data.g1 and x not in c_last
    ]
    if result != complement:
        raise LemmaViolation(f"{G.name}: uniform elements differ from G minus (G_1 u C_G(G_n-2))")
    return result


def is_elementary_abelian(S: Subgroup) -> bool:
    if S.is_trivial:
        return True
    G = S.parent
    p = prime_of(G)
    orders = G.orders
    return S.is_abelian and all(orders[x] in (1, p) for x in S.members)


def splits_over(G: Group, N: Subgroup) -> Optional[Subgroup]:
    """A complement to the normal subgroup N, or None when G does not split over N."""
    if not is_normal(G, N):
        raise NotNormal(f"subgroup of order {N.order} is not normal in {G.name}")
    if N.is_trivial:
        return G.whole
    if N.order == G.order:
        return G.trivial
    index = G.order // N.order
    if G.prime is not None and index == G.prime:
        for x in range(G.order):
            if G.orders[x] == index and x not in N:
                return subgroup_generated(G, [x])
        return None
    for C in all_subgroups(G):
        if C.order == index and not (C.member_set & N.member_set) - {0}:
            return C
    return None


def abelian_maximal_subgroups(G: Group) -> list[Subgroup]:
    prime_of(G)
    return [M for M in maximal_subgroups(G) if M.is_abelian]


def is_cyclic(G: Group) -> bool:
    return G.order in G.orders


"""Machine checks of the structure theory over the built-in catalog.

Every check yields ``CheckRow`` records; a suite passes when all its rows
do.  The same functions back ``selfsim verify`` and the acceptance tests.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from itertools import product
from typing import Callable, Iterator, Optional

from .constructions import builtin, catalog, elementary_abelian
from .endo import (
    DecisionReport,
    Homomorphism,
    assignment_is_homomorphism,
    decide_self_similar,
    homomorphisms,
    minimal_generating_set,
    phi_core,
    proposition_max_scan,
    sunic_predicate,
    theorem_b_predicate,
)
from .errors import SelfSimError
from .group import (
    Group,
    Subgroup,
    all_subgroups,
    center,
    centralizer,
    derived_subgroup,
    exponent,
    frattini,
    log_p,
    lower_central_series,
    maximal_subgroups,
    normal_subgroups,
    quotient,
    subgroup_as_group,
    subgroup_generated,
    table_invariant_violations,
    upper_central_series,
)
from .pgroups import (
    abelian_maximal_subgroups,
    is_elementary_abelian,
    is_maximal_class,
    is_powerful,
    is_uniform,
    maximal_class_data,
    minimal_generator_count,
    omega1_of_powerful,
    rank,
    splits_over,
    square_subgroup,
    uniform_elements,
)
from .tree import (
    faithful_depth,
    is_level_transitive,
    multiplicativity_holds,
    relation_violations,
    section,
    wreath_recursion,
)


@dataclass
class CheckRow:
    suite: str
    check: str
    group: str
    passed: bool
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        tail = f"  ({self.detail})" if self.detail else ""
        return f"{status}  {self.suite:<15} {self.check:<34} {self.group:<10}{tail}"


def decision(G: Group) -> DecisionReport:
    """decide_self_similar, memoized on the group."""
    if "decision" not in G._cache:
        G._cache["decision"] = decide_self_similar(G)
    return G._cache["decision"]


def _safe(suite: str, check: str, G: Group, fn: Callable[[], tuple[bool, str]]) -> CheckRow:
    try:
        ok, detail = fn()
    except (SelfSimError, AssertionError) as exc:
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    return CheckRow(suite, check, G.name, ok, detail)


def is_deep_maximal_class(G: Group) -> bool:
    p = G.prime
    return p is not None and G.order >= p ** 4 and is_maximal_class(G)


def maximal_class_groups() -> list[Group]:
    return [G for G in catalog() if is_deep_maximal_class(G)]


def groups_with_abelian_maximal() -> list[Group]:
    return [G for G in catalog() if abelian_maximal_subgroups(G)]


# --- maximal class equivalence and the order bound ------------------------


def suite_theorem_b() -> Iterator[CheckRow]:
    for G in maximal_class_groups():
        def run(G=G):
            ss, pred = decision(G).self_similar, theorem_b_predicate(G)
            return ss == pred, f"self_similar={ss} predicate={pred}"
        yield _safe("theoremB", "decision == G_1 predicate", G, run)

        def bound(G=G):
            p = G.prime
            ss = decision(G).self_similar
            if G.order > p ** (p + 1):
                return not ss, f"|G|={G.order} > p^(p+1)={p ** (p + 1)}, self_similar={ss}"
            return True, f"|G|={G.order} <= p^(p+1), self_similar={ss}"
        yield _safe("theoremB", "self-similar => |G| <= p^(p+1)", G, bound)
    G = builtin("wreath3")

    def sharp():
        p = G.prime
        ok = G.order == p ** (p + 1) and is_maximal_class(G) and decision(G).self_similar
        return ok, f"order {G.order}, maximal class, self_similar={decision(G).self_similar}"
    yield _safe("theoremB", "bound attained by C3 wr C3", G, sharp)


# --- groups with an abelian maximal subgroup ---------------------------------


def suite_abelian_maximal() -> Iterator[CheckRow]:
    for G in groups_with_abelian_maximal():
        def equiv(G=G):
            ss, pred = decision(G).self_similar, sunic_predicate(G)
            return ss == pred, f"self_similar={ss} predicate={pred}"
        yield _safe("abelianMaximal", "decision == split el.-ab. maximal", G, equiv)
        if not G.is_abelian:
            yield _safe("abelianMaximal", "commutator identities", G, lambda G=G: abelian_maximal_identities(G))
        if G.prime != 2:
            yield _safe("abelianMaximal", "odd p: every abelian maximal splits", G, lambda G=G: _odd_corollary(G))
    D8 = builtin("D8")

    def counterexample():
        non_elem = [A for A in abelian_maximal_subgroups(D8) if not is_elementary_abelian(A)]
        return decision(D8).self_similar and bool(non_elem), f"{len(non_elem)} non-elementary abelian maximal"
    yield _safe("abelianMaximal", "p=2 converse fails (D8)", D8, counterexample)


def abelian_maximal_identities(G: Group) -> tuple[bool, str]:
    p = G.prime
    Gp = derived_subgroup(G).member_set
    Z = center(G)
    if G.order != p * len(Gp) * Z.order:
        return False, f"|G:Z(G)| = {G.order // Z.order} but p|G'| = {p * len(Gp)}"
    checked = 0
    for A in abelian_maximal_subgroups(G):
        for g in range(G.order):
            if g in A:
                continue
            comms = {G.commutator(g, a) for a in A.members}
            if comms != Gp:
                return False, f"{{[g,a]}} != G' for g={g}"
            c_a = sum(1 for a in A.members if G.mul[a][g] == G.mul[g][a])
            if len(Gp) != A.order // c_a:
                return False, f"|G'| != |A:C_A(g)| for g={g}"
            checked += 1
    return True, f"{checked} (A, g) pairs"


def _odd_corollary(G: Group) -> tuple[bool, str]:
    if not decision(G).self_similar:
        return True, "not self-similar (vacuous)"
    for A in abelian_maximal_subgroups(G):
        if not is_elementary_abelian(A) or splits_over(G, A) is None:
            return False, f"abelian maximal of order {A.order} is not a split elementary abelian"
    return True, f"{len(abelian_maximal_subgroups(G))} abelian maximal subgroups"


# --- Omega_1 of powerful groups -----------------------------------------------


def suite_omega1() -> Iterator[CheckRow]:
    for G in catalog():
        if not is_powerful(G):
            continue

        def run(G=G):
            N = square_subgroup(G)
            om = omega1_of_powerful(G)
            dN = minimal_generator_count(subgroup_as_group(N))
            ok = om.order == G.prime ** dN
            return ok, f"|N|={N.order} |Omega_1(N)|={om.order} d(N)={dN}"
        yield _safe("omega1", "basis powers give Omega_1(G^2)", G, run)


# --- groups of maximal class ---------------------------------------------------


def suite_maxclass() -> Iterator[CheckRow]:
    for G in maximal_class_groups():
        def scan(G=G):
            rows = proposition_max_scan(G)
            simple = sum(r.simple for r in rows)
            homs = sum(r.homomorphisms for r in rows)
            return simple == 0, f"{len(rows)} subgroups, {homs} homomorphisms, {simple} simple"
        yield _safe("maxclass", "no simple phi off G_1", G, scan)
        yield _safe("maxclass", "uniform elements", G, lambda G=G: uniform_element_checks(G))
        yield _safe("maxclass", "G_t <= K and K = <s, G_t+1>", G, lambda G=G: subgroups_with_uniform_checks(G))
        yield _safe("maxclass", "series quotients of order p", G, lambda G=G: _series_steps(G))
        if G.order >= G.prime ** 5:
            yield _safe("maxclass", "l(G/Z(G)) >= 1", G, lambda G=G: _ell_of_central_quotient(G))
    for G in catalog():
        if G.prime is not None and G.order >= G.prime ** 2 and is_maximal_class(G):
            yield _safe("maxclass", "upper = lower central series", G, lambda G=G: _upper_equals_lower(G))
    W = builtin("wreath3")

    def final_corollary():
        Q, _ = quotient(W, center(W), "wreath3/Z")
        ss = decide_self_similar(Q).self_similar
        return ss, f"|G/Z|={Q.order}, exponent {exponent(Q)}, self_similar={ss}"
    yield _safe("maxclass", "G/Z(G) self-similar", W, final_corollary)


def uniform_element_checks(G: Group) -> tuple[bool, str]:
    p = G.prime
    us = uniform_elements(G)  # raises on mismatch with G \ (G_1 u C_G(G_n-2))
    Z = center(G).member_set
    if any(centralizer(G, s).order != p * p for s in us):
        return False, "centralizer order"
    if any(G.power(s, p) not in Z for s in us):
        return False, "s^p not central"
    if any(G.orders[s] not in (p, p * p) for s in us):
        return False, "order not p or p^2"
    return True, f"{len(us)} uniform elements"


def subgroups_with_uniform_checks(G: Group) -> tuple[bool, str]:
    data = maximal_class_data(G)
    n, p = data.n, G.prime
    uniform = set(uniform_elements(G))
    count = 0
    for K in all_subgroups(G):
        us = [s for s in K.members if s in uniform]
        if not us:
            continue
        count += 1
        for x in K.members:
            t = data.level(x)
            if 1 <= t < n and not data.term(t).issubset(K):
                return False, f"G_{t} not inside K of order {K.order}"
        t = n - log_p(K.order, p)
        for s in us:
            gen = subgroup_generated(G, [s] + list(data.term(t + 1).generators))
            if gen.members != K.members:
                return False, f"K of order {K.order} != <s, G_{t + 1}>"
    return True, f"{count} subgroups containing a uniform element"


def _series_steps(G: Group) -> tuple[bool, str]:
    orders = lower_central_series(G).lower_orders
    steps = [orders[i] // orders[i + 1] for i in range(1, len(orders) - 1)]
    return all(s == G.prime for s in steps), f"gamma orders {orders}"


def _ell_of_central_quotient(G: Group) -> tuple[bool, str]:
    Q, _ = quotient(G, center(G))
    ell = maximal_class_data(Q).report.degree_of_commutativity
    return ell >= 1, f"l(G/Z) = {ell}"


def _upper_equals_lower(G: Group) -> tuple[bool, str]:
    lower = [S.members for S in lower_central_series(G).lower_central]
    upper = [S.members for S in upper_central_series(G)]
    return lower == upper[::-1], f"{len(lower)} terms"


# --- general properties, automata and oracles -------------------------------------


def suite_props() -> Iterator[CheckRow]:
    for G in catalog():
        yield _safe("props", "table invariants", G, lambda G=G: _table(G))
        yield _safe("props", "Frattini = meet of maximals", G, lambda G=G: _frattini_meet(G))
        yield _safe("props", "projection to G/Z(G) is a hom", G, lambda G=G: _projection_hom(G))
    for G in catalog():
        if decision(G).self_similar:
            yield _safe("props", "witness automaton", G, lambda G=G: automaton_checks(G))
    for G in catalog():
        if G.order <= 16:
            yield _safe("props", "graph test == pointwise test", G, lambda G=G: graph_vs_naive(G))
    for G in catalog():
        if G.order <= 64:
            yield _safe("props", "phi-core == brute force", G, lambda G=G: phi_core_vs_brute(G))
    for p in (2, 3):
        for d in range(1, 5):
            E = elementary_abelian(p, d)

            def elem(E=E):
                return decide_self_similar(E).self_similar, f"order {E.order}"
            yield _safe("props", "elementary abelian self-similar", E, elem)
    yield from exponent_inequality_rows()
    yield from rank_order_rows()


def _table(G: Group) -> tuple[bool, str]:
    bad = table_invariant_violations(G)
    return not bad, ", ".join(bad) or "all invariants hold"


def _frattini_meet(G: Group) -> tuple[bool, str]:
    meet = set(range(G.order))
    for M in maximal_subgroups(G):
        meet &= M.member_set
    return meet == frattini(G).member_set, f"|Phi|={frattini(G).order}"


def _projection_hom(G: Group) -> tuple[bool, str]:
    Q, proj = quotient(G, center(G))
    ok = all(
        proj[G.mul[x][y]] == Q.mul[proj[x]][proj[y]] for x in range(G.order) for y in range(G.order)
    )
    return ok, f"|G/Z|={Q.order}"


def automaton_checks(G: Group) -> tuple[bool, str]:
    report = decision(G)
    if report.witness is None:
        return G.order == 1, "trivial group"
    a = wreath_recursion(G, report.witness)
    bad = relation_violations(a, report.witness)
    if bad:
        return False, ", ".join(bad)
    p = a.alphabet_size
    for g in range(a.size):
        for length in range(5):
            for word in product(range(p), repeat=length):
                if not 0 <= section(a, g, word) < a.size:
                    return False, "section outside the state set"
    if not is_level_transitive(a, 1):
        return False, "not transitive on level 1"
    for level in (1, 2, 3):
        if not multiplicativity_holds(a, level):
            return False, f"not multiplicative on level {level}"
    depth = faithful_depth(a)
    bound = log_p(G.order, G.prime)
    return depth <= bound, f"{a.size} states, faithful at depth {depth} <= {bound}"


def naive_homomorphism(H: Subgroup, gens, images, codomain: Group) -> Optional[dict[int, int]]:
    """Oracle: spell every element of H as a word in gens, multiply the images, check f(xy) = f(x)f(y)."""
    G = H.parent
    words: dict[int, list[int]] = {0: []}
    queue = [0]
    for x in queue:
        for k, g in enumerate(gens):
            y = G.mul[x][g]
            if y not in words:
                words[y] = words[x] + [k]
                queue.append(y)
    f = {}
    for x, w in words.items():
        v = 0
        for k in w:
            v = codomain.mul[v][images[k]]
        f[x] = v
    for x in H.members:
        for y in H.members:
            if f[G.mul[x][y]] != codomain.mul[f[x]][f[y]]:
                return None
    return f


def graph_vs_naive(G: Group) -> tuple[bool, str]:
    count = 0
    for H in maximal_subgroups(G):
        gens = minimal_generating_set(H)
        for images in product(range(G.order), repeat=len(gens)):
            fast = assignment_is_homomorphism(H, gens, images)
            slow = naive_homomorphism(H, gens, images, G)
            if (fast is None) != (slow is None):
                return False, f"disagree on images {images}"
            if fast is not None and fast.as_dict() != slow:
                return False, f"different maps for images {images}"
            count += 1
    return True, f"{count} assignments"


def brute_phi_core(hom: Homomorphism, normals: list[Subgroup]) -> Subgroup:
    """Oracle: the largest normal subgroup inside H that phi maps into itself."""
    H = hom.domain
    f = hom.as_dict()
    best = H.parent.trivial
    invariant = []
    for N in normals:
        if N.issubset(H) and all(f[x] in N.member_set for x in N.members):
            invariant.append(N)
            if N.order > best.order:
                best = N
    assert all(N.issubset(best) for N in invariant)
    return best


def phi_core_vs_brute(G: Group) -> tuple[bool, str]:
    normals = normal_subgroups(G)
    count = 0
    for H in maximal_subgroups(G):
        inside = [N for N in normals if N.issubset(H)]
        for hom in homomorphisms(H, G):
            if phi_core(hom).members != brute_phi_core(hom, inside).members:
                return False, f"mismatch for images {hom.images}"
            count += 1
    return True, f"{count} homomorphisms"


def exponent_inequality_rows() -> Iterator[CheckRow]:
    """exp(U) <= exp(G/U) (odd p) or <= 4 exp(G/U) (p = 2) for uniform normal U inside the witness domain."""
    nonvacuous = 0
    total = 0
    for G in catalog():
        report = decision(G)
        if report.witness is None:
            continue
        H = report.witness.domain
        tested = 0
        failures = []
        for U in normal_subgroups(G):
            if U.is_trivial or not U.issubset(H) or not is_uniform(subgroup_as_group(U)):
                continue
            Q, _ = quotient(G, U)
            eU, eQ = exponent(subgroup_as_group(U)), exponent(Q)
            factor = 4 if G.prime == 2 else 1
            tested += 1
            if eU > factor * eQ:
                failures.append(f"|U|={U.order}: exp {eU} > {factor}*{eQ}")
        total += 1
        nonvacuous += bool(tested)
        yield CheckRow(
            "props", "exp(U) <= exp(G/U) (x4 at p=2)", G.name, not failures,
            "; ".join(failures) or (f"{tested} uniform normal subgroups" if tested else "vacuous"),
        )
    yield CheckRow(
        "props", "exponent inequality coverage", "catalog", nonvacuous > 0,
        f"non-vacuous on {nonvacuous} of {total} witnesses",
    )


def rank_order_rows() -> Iterator[CheckRow]:
    """Record (p, rank, order) for every self-similar catalog member; no bound is asserted."""
    triples = []
    for G in catalog():
        if decision(G).self_similar and G.order > 1:
            triples.append((G.prime, rank(G), G.order))
    yield CheckRow("props", "(p, rank, order) of self-similar", "catalog", True, str(sorted(triples)))


SUITES: dict[str, Callable[[], Iterator[CheckRow]]] = {
    "theoremB": suite_theorem_b,
    "abelianMaximal": suite_abelian_maximal,
    "omega1": suite_omega1,
    "maxclass": suite_maxclass,
    "props": suite_props,
}


def run_suite(name: str, on_row: Optional[Callable[[CheckRow], None]] = None) -> list[CheckRow]:
    names = list(SUITES) if name == "all" else [name]
    rows = []
    for suite in names:
        for row in SUITES[suite]():
            rows.append(row)
            if on_row is not None:
                on_row(row)
    return rows


def timed(fn: Callable[[], object]) -> tuple[object, float]:
    start = time.perf_counter()
    value = fn()
    return value, time.perf_counter() - start

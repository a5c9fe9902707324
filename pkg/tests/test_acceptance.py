"""The thirteen acceptance criteria, each printed as one PASS/FAIL line.

Run under pytest, or directly: ``python tests/test_acceptance.py``.
All comparisons are exact.
"""

from __future__ import annotations

import sys
import time
from itertools import product

import pytest

from selfsim.constructions import BUILDERS, builtin, catalog
from selfsim.endo import (
    Homomorphism,
    decide_self_similar,
    minimal_generating_set,
    proposition_max_scan,
    sunic_predicate,
    theorem_b_predicate,
)
from selfsim.group import (
    center,
    maximal_subgroups,
    normal_subgroups,
    omega,
    quotient,
    subgroup_as_group,
    subgroup_generated,
)
from selfsim.pgroups import (
    is_basis,
    is_maximal_class,
    is_powerful,
    minimal_generator_count,
    powerful_basis,
    square_subgroup,
)
from selfsim.verify import (
    abelian_maximal_identities,
    automaton_checks,
    brute_phi_core,
    exponent_inequality_rows,
    graph_vs_naive,
    groups_with_abelian_maximal,
    maximal_class_groups,
    naive_homomorphism,
    phi_core_vs_brute,
    rank_order_rows,
    subgroups_with_uniform_checks,
    uniform_element_checks,
)


def fresh(name):
    """Build and decide from scratch so the timing includes construction."""
    start = time.perf_counter()
    G = BUILDERS[name]()
    G.name = name
    report = decide_self_similar(G)
    return G, report, time.perf_counter() - start


def c1_d8():
    G, rep, secs = fresh("D8")
    if not rep.self_similar or rep.witness is None:
        return False, "D8 not decided self-similar"
    ve = rep.witness
    inside = [N for N in normal_subgroups(G) if N.issubset(ve.domain)]
    brute = brute_phi_core(ve.hom, inside)
    ok = ve.phi_core.is_trivial and brute.is_trivial and secs < 1.0
    return ok, f"witness on |H|={ve.domain.order}, phi-core trivial (brute force agrees), {secs:.3f}s < 1s"


def c2_wreath():
    G, rep, secs = fresh("wreath3")
    p = G.prime
    ok = rep.self_similar and G.order == 81 == 3 ** 4 == p ** (p + 1) and is_maximal_class(G) and secs < 120
    return ok, f"self_similar={rep.self_similar}, order {G.order} = p^(p+1), maximal class, {secs:.3f}s < 120s"


def _brute_force_not_self_similar(G):
    """Oracle: every assignment on every maximal subgroup, pointwise homomorphism test, brute phi-core."""
    normals = normal_subgroups(G)
    for H in maximal_subgroups(G):
        gens = minimal_generating_set(H)
        inside = [N for N in normals if N.issubset(H)]
        for images in product(range(G.order), repeat=len(gens)):
            f = naive_homomorphism(H, gens, images, G)
            if f is None:
                continue
            hom = Homomorphism(H, G, tuple(f[x] for x in H.members))
            if brute_phi_core(hom, inside).is_trivial:
                return False
    return True


def c3_sharp_bound():
    parts = []
    ok = True
    for name, limit in [("D16", 10), ("Q16", 10), ("SD16", 10), ("D32", 600), ("Q32", 600), ("SD32", 600)]:
        G, rep, secs = fresh(name)
        good = not rep.self_similar and secs < limit
        if G.order == 16:
            good = good and _brute_force_not_self_similar(G)
        ok = ok and good
        parts.append(f"{name} {secs:.3f}s")
    return ok, "all false; " + ", ".join(parts) + "; order-16 trio confirmed by brute force"


def c4_theorem_b():
    groups = maximal_class_groups()
    names = [G.name for G in groups]
    expected = {"D16", "Q16", "SD16", "D32", "Q32", "SD32", "wreath3"}
    ok = set(names) == expected and all(
        decide_self_similar(G).self_similar == theorem_b_predicate(G) for G in groups
    )
    return ok, f"{len(groups)} groups: {', '.join(names)}"


def c5_abelian_maximal():
    groups = groups_with_abelian_maximal()
    names = {G.name for G in groups}
    required = {"D8", "Q8", "M16", "M27", "He27", "C4", "C4xC2"}
    required |= {G.name for G in catalog() if G.is_abelian}
    ok = required <= names and all(decide_self_similar(G).self_similar == sunic_predicate(G) for G in groups)
    return ok, f"{len(groups)} groups agree with the split elementary abelian maximal predicate"


def c6_proposition_max():
    total = homs = 0
    for G in maximal_class_groups():
        rows = proposition_max_scan(G)
        total += sum(r.simple for r in rows)
        homs += sum(r.homomorphisms for r in rows)
    return total == 0, f"{homs} homomorphisms from maximal H != G_1, {total} simple"


def c7_omega1():
    count = 0
    for G in catalog():
        if not is_powerful(G):
            continue
        N = subgroup_as_group(square_subgroup(G))
        count += 1
        if N.order == 1:
            continue
        basis = powerful_basis(N)
        if not is_basis(N, basis.elements, basis.orders):
            return False, f"{G.name}: basis check failed"
        p = G.prime
        from_basis = subgroup_generated(N, [N.power(a, m // p) for a, m in zip(basis.elements, basis.orders)])
        direct = omega(N, 1)
        if from_basis.members != direct.members or direct.order != p ** minimal_generator_count(N):
            return False, f"{G.name}: Omega_1 mismatch"
    return count == 13, f"{count} powerful catalog groups"


def c8_identities():
    groups = [G for G in groups_with_abelian_maximal() if not G.is_abelian]
    for G in groups:
        ok, detail = abelian_maximal_identities(G)
        if not ok:
            return False, f"{G.name}: {detail}"
    return True, f"{len(groups)} nonabelian groups, every g outside every abelian maximal"


def c9_maxclass_structure():
    names = []
    for G in maximal_class_groups():
        for check in (uniform_element_checks, subgroups_with_uniform_checks):
            ok, detail = check(G)
            if not ok:
                return False, f"{G.name}: {detail}"
        names.append(G.name)
    return True, "exhaustive over all subgroups on " + ", ".join(names)


def c10_central_quotient():
    W = builtin("wreath3")
    Q, _ = quotient(W, center(W), "wreath3/Z")
    ss = decide_self_similar(Q).self_similar
    return ss, f"|G/Z(G)| = {Q.order}, self_similar={ss}"


def c11_automata():
    names = []
    for G in catalog():
        if not decide_self_similar(G).self_similar:
            continue
        ok, detail = automaton_checks(G)
        if not ok:
            return False, f"{G.name}: {detail}"
        names.append(G.name)
    return True, f"{len(names)} witness automata: " + ", ".join(names)


def c12_oracles():
    small = [G for G in catalog() if G.order <= 16]
    for G in small:
        ok, detail = graph_vs_naive(G)
        if not ok:
            return False, f"graph test, {G.name}: {detail}"
    medium = [G for G in catalog() if G.order <= 64]
    for G in medium:
        ok, detail = phi_core_vs_brute(G)
        if not ok:
            return False, f"phi-core, {G.name}: {detail}"
    return True, f"graph test on {len(small)} groups, phi-core on {len(medium)} groups"


def c13_exponent_inequality():
    rows = list(exponent_inequality_rows()) + list(rank_order_rows())
    bad = [r for r in rows if not r.passed]
    coverage = next(r.detail for r in rows if r.check == "exponent inequality coverage")
    return not bad, f"{coverage}; (p, rank, order) triples recorded"


CRITERIA = [
    (1, "D8 is self-similar", c1_d8),
    (2, "C3 wr C3 is self-similar of order p^(p+1)", c2_wreath),
    (3, "maximal class 2-groups of order 16 and 32 are not", c3_sharp_bound),
    (4, "decision == G_1 predicate on maximal class", c4_theorem_b),
    (5, "decision == split elementary abelian maximal", c5_abelian_maximal),
    (6, "no simple phi from maximal H != G_1", c6_proposition_max),
    (7, "Omega_1 of powerful N from a basis", c7_omega1),
    (8, "commutator identities with abelian maximal", c8_identities),
    (9, "uniform elements and subgroups containing them", c9_maxclass_structure),
    (10, "C3 wr C3 / Z is self-similar", c10_central_quotient),
    (11, "witness automata", c11_automata),
    (12, "oracle agreement", c12_oracles),
    (13, "exponent inequality and rank records", c13_exponent_inequality),
]


def evaluate(fn):
    try:
        return fn()
    except Exception as exc:  # a crash is a failure, reported on the same line
        return False, f"{type(exc).__name__}: {exc}"


def line(number, title, ok, detail):
    return f"{'PASS' if ok else 'FAIL'}  criterion {number:>2}: {title} ({detail})"


@pytest.mark.parametrize("number,title,fn", CRITERIA, ids=[f"criterion_{n:02d}" for n, _, _ in CRITERIA])
def test_criterion(number, title, fn, capsys):
    ok, detail = evaluate(fn)
    with capsys.disabled():
        print("\n" + line(number, title, ok, detail))
    assert ok, detail


if __name__ == "__main__":
    failed = 0
    for number, title, fn in CRITERIA:
        ok, detail = evaluate(fn)
        failed += not ok
        print(line(number, title, ok, detail), flush=True)
    sys.exit(1 if failed else 0)

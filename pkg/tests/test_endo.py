from itertools import product

import pytest

import selfsim.endo as endo
from selfsim.constructions import builtin, from_permutation_generators
from selfsim.endo import (
    Homomorphism,
    SearchStats,
    assignment_is_homomorphism,
    decide_self_similar,
    homomorphisms,
    is_simple,
    minimal_generating_set,
    phi_core,
    proposition_max_scan,
    sunic_predicate,
    theorem_b_predicate,
    virtual_endomorphism,
)
from selfsim.errors import (
    BudgetExceeded,
    GeneratorsDontGenerate,
    NotAPGroup,
    NotMaximalClass,
    OrderTooSmall,
)
from selfsim.group import is_normal, maximal_subgroups, normal_subgroups
from selfsim.pgroups import maximal_class_data, minimal_generator_count, subgroup_generator_count


def is_multiplicative(hom: Homomorphism) -> bool:
    H, G = hom.domain, hom.codomain
    src = H.parent
    return hom(0) == 0 and all(
        hom(src.mul[x][y]) == G.mul[hom(x)][hom(y)] for x in H.members for y in H.members
    )


def test_cyclic_into_c4():
    C2, C4 = builtin("C2"), builtin("C4")
    H = C2.whole
    c = C4.generators[0]
    assert assignment_is_homomorphism(H, [1], [c], C4) is None
    emb = assignment_is_homomorphism(H, [1], [C4.mul[c][c]], C4)
    assert emb is not None and emb.images == (0, C4.mul[c][c])


def test_klein_into_d8_has_28():
    V, D8 = builtin("C2^2"), builtin("D8")
    gens = list(V.generators)
    count = sum(
        assignment_is_homomorphism(V.whole, gens, list(imgs), D8) is not None
        for imgs in product(range(D8.order), repeat=2)
    )
    assert count == 28
    assert len(list(homomorphisms(V.whole, D8))) == 28


def test_generators_must_generate():
    D8 = builtin("D8")
    with pytest.raises(GeneratorsDontGenerate):
        assignment_is_homomorphism(D8.whole, [D8.generators[0]], [0])


def test_c2_to_c2():
    C2 = builtin("C2")
    assert len(list(homomorphisms(C2.whole, C2))) == 2


@pytest.mark.parametrize("name", ["D8", "Q8", "M16", "He27"])
def test_homomorphisms_are_distinct_and_multiplicative(name):
    G = builtin(name)
    for H in maximal_subgroups(G):
        homs = list(homomorphisms(H, G))
        assert len({h.images for h in homs}) == len(homs)
        assert all(is_multiplicative(h) for h in homs)
        assert any(all(y == 0 for y in h.images) for h in homs)


@pytest.mark.parametrize("name", ["D8", "Q16", "wreath3", "C2^4", "Q8xC2"])
def test_minimal_generating_set_size(name):
    G = builtin(name)
    for H in maximal_subgroups(G):
        assert len(minimal_generating_set(H)) == subgroup_generator_count(H)
    assert len(minimal_generating_set(G.whole)) == minimal_generator_count(G)


def test_phi_core_of_identity_and_trivial_maps():
    G = builtin("D8")
    for H in maximal_subgroups(G):
        ident = Homomorphism(H, G, H.members)
        assert phi_core(ident) == H
        trivial = Homomorphism(H, G, tuple(0 for _ in H.members))
        assert phi_core(trivial) == H
        assert not is_simple(ident)


def test_phi_core_on_trivial_domain():
    C3 = builtin("C3")
    (H,) = maximal_subgroups(C3)
    assert is_simple(Homomorphism(H, C3, (0,)))


def test_phi_core_is_maximal_invariant_normal():
    G = builtin("D8")
    normals = normal_subgroups(G)
    for H in maximal_subgroups(G):
        for hom in homomorphisms(H, G):
            K = phi_core(hom)
            assert is_normal(G, K) and K.issubset(H)
            assert all(hom(x) in K for x in K.members)
            for N in normals:
                if N.issubset(H) and all(hom(x) in N for x in N.members):
                    assert N.issubset(K)


def test_decide_d8():
    rep = decide_self_similar(builtin("D8"))
    assert rep.self_similar
    ve = rep.witness
    assert ve.is_simple and ve.index == 2
    assert ve.phi_core.is_trivial and is_multiplicative(ve.hom)


def test_decide_c4_false():
    rep = decide_self_similar(builtin("C4"))
    assert not rep.self_similar and rep.witness is None
    assert rep.stats.homomorphisms_found == 2


def test_decide_wreath3():
    rep = decide_self_similar(builtin("wreath3"))
    assert rep.self_similar and rep.witness.index == 3


def test_decide_trivial_and_non_p():
    rep = decide_self_similar(builtin("C1"))
    assert rep.self_similar and rep.witness is None and "convention" in rep.note
    with pytest.raises(NotAPGroup):
        decide_self_similar(from_permutation_generators(3, [[1, 2, 0], [1, 0, 2]], "S3"))


def test_budget_exhausted_carries_stats():
    with pytest.raises(BudgetExceeded) as info:
        decide_self_similar(builtin("D32"), budget_secs=0)
    assert isinstance(info.value.stats, SearchStats)


@pytest.mark.parametrize("name", ["D8", "Q16", "wreath3", "C2^4", "Q8xC2", "He27"])
def test_workers_do_not_change_the_result(name, monkeypatch):
    G = builtin(name)
    serial = decide_self_similar(G, workers=1)
    monkeypatch.setattr(endo, "PARALLEL_THRESHOLD", 1)
    parallel = decide_self_similar(G, workers=2)
    assert parallel.self_similar == serial.self_similar
    assert parallel.stats.as_dict() == serial.stats.as_dict()
    if serial.witness is not None:
        assert parallel.witness.hom.images == serial.witness.hom.images
        assert parallel.witness.domain == serial.witness.domain


def test_sunic_predicate():
    assert sunic_predicate(builtin("D8"))
    assert not sunic_predicate(builtin("Q8"))
    assert not sunic_predicate(builtin("M27"))


def test_theorem_b_predicate():
    assert theorem_b_predicate(builtin("wreath3"))
    assert not theorem_b_predicate(builtin("D16"))
    assert not theorem_b_predicate(builtin("Q16"))
    with pytest.raises(NotMaximalClass):
        theorem_b_predicate(builtin("Q8xC2"))
    with pytest.raises(OrderTooSmall):
        theorem_b_predicate(builtin("D8"))


@pytest.mark.parametrize("name,rows", [("D16", 2), ("Q16", 2), ("wreath3", 3)])
def test_proposition_max_scan(name, rows):
    G = builtin(name)
    scan = proposition_max_scan(G)
    assert len(scan) == rows
    assert all(row.simple == 0 for row in scan)
    assert all(row.subgroup != maximal_class_data(G).g1 for row in scan)


def test_virtual_endomorphism_index():
    G = builtin("He27")
    H = maximal_subgroups(G)[0]
    hom = next(iter(homomorphisms(H, G)))
    ve = virtual_endomorphism(hom)
    assert ve.index == 3 and ve.domain == H

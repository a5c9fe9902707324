"""Property-based checks of the algebraic invariants."""

from functools import lru_cache

from hypothesis import given, settings
from hypothesis import strategies as st

from selfsim.constructions import CATALOG_NAMES, builtin, format_group_file, load, parse_group_file
from selfsim.endo import decide_self_similar, homomorphisms, phi_core
from selfsim.group import (
    compose,
    from_permutation_generators,
    is_normal,
    maximal_subgroups,
    normal_subgroups,
    quotient,
    subgroup_generated,
    table_invariant_violations,
)
from selfsim.tree import act, portrait, portrait_product, section, wreath_recursion

permutations = st.integers(min_value=1, max_value=6).flatmap(
    lambda n: st.lists(st.permutations(list(range(n))), min_size=0, max_size=3).map(lambda gs: (n, gs))
)


@lru_cache(maxsize=None)
def automaton(name):
    G = builtin(name)
    return G, wreath_recursion(G, decide_self_similar(G).witness)


@settings(max_examples=60, deadline=None)
@given(permutations)
def test_closure_satisfies_table_invariants(data):
    n, gens = data
    G = from_permutation_generators(n, gens)
    assert table_invariant_violations(G) == []
    for x in range(G.order):
        for y in range(0, G.order, max(1, G.order // 7)):
            assert G.element_perms[G.mul[x][y]] == compose(G.element_perms[x], G.element_perms[y])


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(CATALOG_NAMES), st.sets(st.integers(min_value=0, max_value=80), max_size=3))
def test_generated_subgroups_obey_lagrange(name, seed):
    G = builtin(name)
    S = subgroup_generated(G, {x % G.order for x in seed})
    assert G.order % S.order == 0
    members = S.member_set
    assert all(G.mul[x][y] in members for x in S.members for y in S.members)
    assert all(G.inv[x] in members for x in S.members)


@settings(max_examples=40, deadline=None)
@given(permutations)
def test_group_file_round_trip(data):
    n, gens = data
    G = from_permutation_generators(n, gens, "g")
    text = format_group_file(G)
    H = load(parse_group_file(text))
    assert H.mul == G.mul and format_group_file(H) == text


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(["D8", "Q16", "He27", "wreath3", "D8xC2"]), st.data())
def test_quotient_projection_is_homomorphism(name, data):
    G = builtin(name)
    N = data.draw(st.sampled_from(normal_subgroups(G)))
    Q, proj = quotient(G, N)
    assert Q.order * N.order == G.order
    x = data.draw(st.integers(0, G.order - 1))
    y = data.draw(st.integers(0, G.order - 1))
    assert proj[G.mul[x][y]] == Q.mul[proj[x]][proj[y]]


WITNESSED = ["D8", "He27", "wreath3", "C3^3", "D8xC2"]


@settings(max_examples=80, deadline=None)
@given(st.sampled_from(WITNESSED), st.data())
def test_section_composition_identity(name, data):
    G, a = automaton(name)
    p = a.alphabet_size
    g = data.draw(st.integers(0, G.order - 1))
    u = data.draw(st.lists(st.integers(0, p - 1), max_size=4))
    v = data.draw(st.lists(st.integers(0, p - 1), max_size=4))
    assert section(a, g, u + v) == section(a, section(a, g, u), v)
    # g(uv) = g(u) g_u(v)
    assert act(a, g, u + v) == act(a, g, u) + act(a, section(a, g, u), v)


@settings(max_examples=80, deadline=None)
@given(st.sampled_from(WITNESSED), st.data())
def test_action_is_a_left_action(name, data):
    G, a = automaton(name)
    p = a.alphabet_size
    g = data.draw(st.integers(0, G.order - 1))
    h = data.draw(st.integers(0, G.order - 1))
    w = tuple(data.draw(st.lists(st.integers(0, p - 1), max_size=5)))
    assert act(a, G.mul[g][h], w) == act(a, g, act(a, h, w))


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(WITNESSED), st.data())
def test_portrait_product_law(name, data):
    G, a = automaton(name)
    g = data.draw(st.integers(0, G.order - 1))
    h = data.draw(st.integers(0, G.order - 1))
    depth = data.draw(st.integers(0, 3))
    assert portrait(a, G.mul[g][h], depth) == portrait_product(portrait(a, g, depth), portrait(a, h, depth))


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(["D8", "Q8", "M16", "He27", "C3^2"]), st.data())
def test_phi_core_is_normal_invariant_and_inside(name, data):
    G = builtin(name)
    H = data.draw(st.sampled_from(maximal_subgroups(G)))
    homs = list(homomorphisms(H, G))
    hom = data.draw(st.sampled_from(homs))
    K = phi_core(hom)
    assert K.issubset(H) and is_normal(G, K)
    assert all(hom(x) in K for x in K.members)

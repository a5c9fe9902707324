import pytest

from selfsim.constructions import (
    CATALOG_NAMES,
    builtin,
    catalog,
    dihedral,
    elementary_abelian,
    extraspecial_exponent_p,
    format_group_file,
    load,
    parse_group_file,
    wreath_CpCp,
)
from selfsim.errors import NotABijection, OrderMismatch, ParseError
from selfsim.group import center, exponent, lower_central_series, maximal_subgroups, table_invariant_violations
from selfsim.pgroups import is_maximal_class, is_powerful, minimal_generator_count, rank
from selfsim.verify import decision

# (order, exponent, |Z|, class, d, #maximal, rank, powerful, self-similar)
GOLDEN = {
    "C2": (2, 2, 2, 1, 1, 1, 1, True, True),
    "C4": (4, 4, 4, 1, 1, 1, 1, True, False),
    "C8": (8, 8, 8, 1, 1, 1, 1, True, False),
    "C2^2": (4, 2, 4, 1, 2, 3, 2, True, True),
    "C2^3": (8, 2, 8, 1, 3, 7, 3, True, True),
    "C2^4": (16, 2, 16, 1, 4, 15, 4, True, True),
    "C3": (3, 3, 3, 1, 1, 1, 1, True, True),
    "C9": (9, 9, 9, 1, 1, 1, 1, True, False),
    "C3^2": (9, 3, 9, 1, 2, 4, 2, True, True),
    "C3^3": (27, 3, 27, 1, 3, 13, 3, True, True),
    "D8": (8, 4, 2, 2, 2, 3, 2, False, True),
    "Q8": (8, 4, 2, 2, 2, 3, 2, False, False),
    "D16": (16, 8, 2, 3, 2, 3, 2, False, False),
    "Q16": (16, 8, 2, 3, 2, 3, 2, False, False),
    "SD16": (16, 8, 2, 3, 2, 3, 2, False, False),
    "M16": (16, 8, 4, 2, 2, 3, 2, True, False),
    "D32": (32, 16, 2, 4, 2, 3, 2, False, False),
    "Q32": (32, 16, 2, 4, 2, 3, 2, False, False),
    "SD32": (32, 16, 2, 4, 2, 3, 2, False, False),
    "He27": (27, 3, 3, 2, 2, 4, 2, False, True),
    "M27": (27, 9, 3, 2, 2, 4, 2, True, False),
    "wreath3": (81, 9, 3, 3, 2, 4, 3, False, True),
    "D8xC2": (16, 4, 4, 2, 3, 7, 3, False, True),
    "Q8xC2": (16, 4, 4, 2, 3, 7, 3, False, False),
    "C4xC2": (8, 4, 8, 1, 2, 3, 2, True, False),
}


def fingerprint(G):
    return (
        G.order,
        exponent(G),
        center(G).order,
        lower_central_series(G).nilpotency_class,
        minimal_generator_count(G),
        len(maximal_subgroups(G)),
        rank(G),
        is_powerful(G),
        decision(G).self_similar,
    )


def test_catalog_has_25_groups():
    assert len(CATALOG_NAMES) == 25
    assert set(CATALOG_NAMES) == set(GOLDEN)
    assert [G.name for G in catalog()] == list(CATALOG_NAMES)


@pytest.mark.parametrize("name", CATALOG_NAMES)
def test_golden_fingerprint(name):
    assert fingerprint(builtin(name)) == GOLDEN[name]


@pytest.mark.parametrize("name", CATALOG_NAMES)
def test_builders_satisfy_table_invariants(name):
    assert table_invariant_violations(builtin(name)) == []


def test_builtin_is_cached():
    assert builtin("D8") is builtin("D8")
    with pytest.raises(KeyError):
        builtin("nope")


def test_wreath_2_looks_like_d8():
    W = wreath_CpCp(2)
    D = dihedral(8)
    assert W.order == 8 and is_maximal_class(W)
    assert fingerprint(W)[:8] == fingerprint(D)[:8]


def test_wreath_3():
    W = wreath_CpCp(3)
    assert W.order == 81 and W.degree == 9


def test_heisenberg():
    G = extraspecial_exponent_p(3)
    assert (G.order, exponent(G), center(G).order) == (27, 3, 3)


def test_elementary_abelian_builder():
    E = elementary_abelian(3, 4)
    assert E.order == 81 and exponent(E) == 3


D8_FILE = """\
# the symmetries of a square
name: D8
degree: 4
order: 8
gen: 1 2 3 0
gen: 0 3 2 1
"""


def test_parse_and_load_d8():
    spec = parse_group_file(D8_FILE)
    assert (spec.name, spec.degree, spec.expected_order) == ("D8", 4, 8)
    G = load(spec)
    assert G.order == 8 and lower_central_series(G).lower_orders == [8, 2, 1]


def test_order_mismatch():
    with pytest.raises(OrderMismatch):
        load(parse_group_file(D8_FILE.replace("order: 8", "order: 16")))


def test_repeated_point_is_not_a_bijection():
    with pytest.raises(NotABijection):
        load(parse_group_file(D8_FILE.replace("gen: 1 2 3 0", "gen: 1 1 3 0")))


def test_order_is_optional_and_comments_ignored():
    text = "name: C3  # a comment\n\ndegree: 3\ngen: 1 2 0\n"
    G = load(parse_group_file(text))
    assert G.order == 3 and G.name == "C3"


@pytest.mark.parametrize(
    "text,line,column",
    [
        ("degree: 4\nname: x\n", 1, 1),
        ("name: x\ngen: 0\n", 2, 1),
        ("name: x\ndegree: four\n", 2, 9),
        ("name: x\ndegree: 2\ngen: 1 zero\n", 3, 8),
        ("name: x\ndegree: 2\ngen: 1 0 2\n", 3, 6),
        ("name: x\ndegree: 2\nfoo: 1\n", 3, 1),
        ("name: x\ndegree: 2\ngarbage\n", 3, 1),
        ("name: x\ndegree: 2\ngen: 1 0\norder: 2\n", 4, 1),
        ("", 1, 1),
    ],
)
def test_parse_errors_have_positions(text, line, column):
    with pytest.raises(ParseError) as info:
        parse_group_file(text)
    assert (info.value.line, info.value.column) == (line, column)


@pytest.mark.parametrize("name", ["D8", "Q16", "wreath3", "M27", "C1"])
def test_format_round_trip(name):
    G = builtin(name)
    text = format_group_file(G)
    H = load(parse_group_file(text))
    assert H.order == G.order and H.mul == G.mul
    assert format_group_file(H) == text

"""Built-in p-groups and the plain-text group file format.

File format, one item per line (``#`` starts a comment, blank lines are
ignored)::

    name: D8
    degree: 4
    order: 8            # optional, checked against the closure
    gen: 1 2 3 0
    gen: 0 3 2 1

Each ``gen`` line lists the images of points 0..degree-1.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Optional

from .errors import OrderMismatch, ParseError
from .group import DEFAULT_CLOSURE_CAP, Group, direct_product, from_permutation_generators


def _cycle(n: int, shift: int = 1) -> list[int]:
    return [(i + shift) % n for i in range(n)]


def cyclic(p: int, k: int = 1) -> Group:
    n = p ** k
    return from_permutation_generators(n, [_cycle(n)] if n > 1 else [], f"C{n}")


def elementary_abelian(p: int, d: int) -> Group:
    gens = []
    for j in range(d):
        g = list(range(p * d))
        for i in range(p):
            g[j * p + i] = j * p + (i + 1) % p
        gens.append(g)
    return from_permutation_generators(p * d, gens, f"C{p}^{d}")


def dihedral(n: int) -> Group:
    """Dihedral group of order n acting on the vertices of an (n/2)-gon."""
    m = n // 2
    rotation = _cycle(m)
    reflection = [(-i) % m for i in range(m)]
    return from_permutation_generators(m, [rotation, reflection], f"D{n}")


def metacyclic(m: int, q: int, r: int, s: int, name: str) -> Group:
    """<a, b | a^m, b^q = a^s, b a b^-1 = a^r> in its right regular representation.

    Elements are pairs (i, j) standing for a^i b^j with 0 <= i < m, 0 <= j < q.
    """
    assert pow(r, q, m) == 1 and (r * s - s) % m == 0

    def product(x, y):
        (i, j), (k, l) = x, y
        e = i + k * pow(r, j, m)
        t = j + l
        if t >= q:
            t -= q
            e += s
        return e % m, t

    elements = [(i, j) for j in range(q) for i in range(m)]
    index = {x: n for n, x in enumerate(elements)}

    def right_mult(g):
        return [index[product(x, g)] for x in elements]

    return from_permutation_generators(len(elements), [right_mult((1, 0)), right_mult((0, 1))], name)


def quaternion(n: int) -> Group:
    """Generalized quaternion group of order n = 2^k >= 8."""
    m = n // 2
    return metacyclic(m, 2, m - 1, m // 2, f"Q{n}")


def semidihedral(n: int) -> Group:
    """Semidihedral group of order n = 2^k >= 16: b a b^-1 = a^(n/4 - 1)."""
    m = n // 2
    return metacyclic(m, 2, m // 2 - 1, 0, f"SD{n}")


def modular_maximal_cyclic(p: int, n: int) -> Group:
    """M(p^n) = <a, b | a^(p^(n-1)), b^p, b a b^-1 = a^(1 + p^(n-2))>, n >= 3."""
    m = p ** (n - 1)
    return metacyclic(m, p, 1 + p ** (n - 2), 0, f"M{p ** n}")


def extraspecial_exponent_p(p: int) -> Group:
    """Heisenberg group of upper unitriangular 3x3 matrices over F_p (odd p)."""
    elements = [(x, y, z) for x in range(p) for y in range(p) for z in range(p)]
    index = {e: n for n, e in enumerate(elements)}

    def product(u, v):
        return ((u[0] + v[0]) % p, (u[1] + v[1]) % p, (u[2] + v[2] + u[0] * v[1]) % p)

    def right_mult(g):
        return [index[product(e, g)] for e in elements]

    return from_permutation_generators(
        len(elements), [right_mult((1, 0, 0)), right_mult((0, 1, 0))], f"He{p ** 3}"
    )


def extraspecial_exponent_p2(p: int) -> Group:
    """Extraspecial group of order p^3 and exponent p^2 (odd p), i.e. M(p^3)."""
    return modular_maximal_cyclic(p, 3)


def wreath_CpCp(p: int) -> Group:
    """C_p wr C_p in its imprimitive action on p^2 points (point b*p + i is i in block b)."""
    base = list(range(p * p))
    for i in range(p):
        base[i] = (i + 1) % p
    top = [(x + p) % (p * p) for x in range(p * p)]
    return from_permutation_generators(p * p, [base, top], f"C{p}wrC{p}")


def _product(a: Callable[[], Group], b: Callable[[], Group], name: str) -> Callable[[], Group]:
    return lambda: direct_product(a(), b(), name)


BUILDERS: dict[str, Callable[[], Group]] = {
    "C2": lambda: cyclic(2),
    "C4": lambda: cyclic(2, 2),
    "C8": lambda: cyclic(2, 3),
    "C2^2": lambda: elementary_abelian(2, 2),
    "C2^3": lambda: elementary_abelian(2, 3),
    "C2^4": lambda: elementary_abelian(2, 4),
    "C3": lambda: cyclic(3),
    "C9": lambda: cyclic(3, 2),
    "C3^2": lambda: elementary_abelian(3, 2),
    "C3^3": lambda: elementary_abelian(3, 3),
    "D8": lambda: dihedral(8),
    "Q8": lambda: quaternion(8),
    "D16": lambda: dihedral(16),
    "Q16": lambda: quaternion(16),
    "SD16": lambda: semidihedral(16),
    "M16": lambda: modular_maximal_cyclic(2, 4),
    "D32": lambda: dihedral(32),
    "Q32": lambda: quaternion(32),
    "SD32": lambda: semidihedral(32),
    "He27": lambda: extraspecial_exponent_p(3),
    "M27": lambda: extraspecial_exponent_p2(3),
    "wreath3": lambda: wreath_CpCp(3),
    "D8xC2": _product(lambda: dihedral(8), lambda: cyclic(2), "D8xC2"),
    "Q8xC2": _product(lambda: quaternion(8), lambda: cyclic(2), "Q8xC2"),
    "C4xC2": _product(lambda: cyclic(2, 2), lambda: cyclic(2), "C4xC2"),
}

CATALOG_NAMES: tuple[str, ...] = tuple(BUILDERS)

EXTRA_BUILDERS: dict[str, Callable[[], Group]] = {
    "wreath2": lambda: wreath_CpCp(2),
    "C1": lambda: from_permutation_generators(1, [], "C1"),
    "C5": lambda: cyclic(5),
    "C4xC4": _product(lambda: cyclic(2, 2), lambda: cyclic(2, 2), "C4xC4"),
}


@lru_cache(maxsize=None)
def builtin(name: str) -> Group:
    """A built-in group by name; the same object is returned on every call."""
    if name in BUILDERS:
        G = BUILDERS[name]()
    elif name in EXTRA_BUILDERS:
        G = EXTRA_BUILDERS[name]()
    else:
        raise KeyError(f"unknown built-in group {name!r}; known: {', '.join(list(BUILDERS) + list(EXTRA_BUILDERS))}")
    G.name = name
    return G


def catalog() -> list[Group]:
    return [builtin(name) for name in CATALOG_NAMES]


@dataclass
class GroupSpecFile:
    name: str
    degree: int
    generators: list[list[int]] = field(default_factory=list)
    expected_order: Optional[int] = None


def parse_group_file(text: str) -> GroupSpecFile:
    name: Optional[str] = None
    degree: Optional[int] = None
    order: Optional[int] = None
    gens: list[list[int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        indent = len(line) - len(line.lstrip())
        key, sep, value = line.strip().partition(":")
        if not sep:
            raise ParseError("expected 'key: value'", lineno, indent + 1)
        key = key.strip()
        # 1-based column where the value text begins
        value_col = indent + len(key) + 2
        tokens = [(m.group(), value_col + m.start()) for m in re.finditer(r"\S+", value)]
        col = tokens[0][1] if tokens else value_col
        if key == "name":
            if name is not None:
                raise ParseError("duplicate 'name'", lineno, indent + 1)
            name = value.strip()
        elif name is None:
            raise ParseError("the first entry must be 'name'", lineno, indent + 1)
        elif key == "degree":
            if degree is not None:
                raise ParseError("duplicate 'degree'", lineno, indent + 1)
            degree = _parse_int(value, lineno, col)
            if degree < 0:
                raise ParseError("degree must be non-negative", lineno, col)
        elif degree is None:
            raise ParseError("'degree' must follow 'name'", lineno, indent + 1)
        elif key == "order":
            if order is not None or gens:
                raise ParseError("'order' must come once, before the generators", lineno, indent + 1)
            order = _parse_int(value, lineno, col)
        elif key == "gen":
            images = [_parse_int(tok, lineno, c) for tok, c in tokens]
            if len(images) != degree:
                raise ParseError(f"generator has {len(images)} images, expected {degree}", lineno, col)
            gens.append(images)
        else:
            raise ParseError(f"unknown key {key!r}", lineno, indent + 1)
    if name is None or degree is None:
        raise ParseError("missing 'name' or 'degree'", max(1, len(text.splitlines())))
    return GroupSpecFile(name, degree, gens, order)


def _parse_int(token: str, lineno: int, col: int) -> int:
    try:
        return int(token.strip())
    except ValueError:
        raise ParseError(f"expected an integer, got {token.strip()!r}", lineno, col) from None


def load(spec: GroupSpecFile, cap: int = DEFAULT_CLOSURE_CAP) -> Group:
    G = from_permutation_generators(spec.degree, spec.generators, spec.name, cap)
    if spec.expected_order is not None and spec.expected_order != G.order:
        raise OrderMismatch(f"{spec.name}: declared order {spec.expected_order}, closure has {G.order}")
    return G


def format_group_file(G: Group) -> str:
    lines = [f"name: {G.name}", f"degree: {G.degree}", f"order: {G.order}"]
    lines += ["gen: " + " ".join(map(str, G.element_perms[g])) for g in G.generators]
    return "\n".join(lines) + "\n"

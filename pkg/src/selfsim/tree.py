"""Self-similar actions on the p-adic tree built from simple virtual endomorphisms.

Letter i of the alphabet stands for the coset t_i H.  For g in G and a
letter i write g t_i = t_j h with h in H; then g sends i to j and its
section at i is phi(h).  This is a left action: g(uv) = g(u) g_u(v), and
(g g')(w) = g(g'(w)).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .endo import VirtualEndomorphism
from .errors import LevelTooLarge, NotFaithful, NotSimple, ParseError
from .group import Group

FORMAT_TAG = "selfsim-automaton/1"
LEAF_CAP = 10 ** 6
PORTRAIT_DEPTH_CAP = 8


@dataclass
class WreathRecursion:
    alphabet_size: int
    transversal: tuple[int, ...]
    perms: tuple[tuple[int, ...], ...]  # perms[g][i] = image of letter i under g
    sections: tuple[tuple[int, ...], ...]  # sections[g][i] = state of g at letter i
    generator_states: dict[str, int]
    group_name: str = ""
    group: Optional[Group] = field(default=None, repr=False, compare=False)
    _level_cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def size(self) -> int:
        return len(self.perms)


def coset_transversal(G: Group, members: Sequence[int]) -> tuple[tuple[int, ...], list[int]]:
    """Least-index representative of each left coset tH (cosets ordered by least member)."""
    H = list(members)
    coset = [-1] * G.order
    reps: list[int] = []
    for x in range(G.order):
        if coset[x] < 0:
            for h in H:
                coset[G.mul[x][h]] = len(reps)
            reps.append(x)
    return tuple(reps), coset


def wreath_recursion(
    G: Group, ve: VirtualEndomorphism, allow_unfaithful: bool = False
) -> WreathRecursion:
    """The automaton of the coset-tree action defined by ``ve``.

    Refuses non-simple endomorphisms (whose action has a kernel) unless
    ``allow_unfaithful`` is set.
    """
    if not ve.is_simple and not allow_unfaithful:
        raise NotSimple(f"phi-core has order {ve.phi_core.order}; the action would not be faithful")
    H = ve.domain
    if H.parent is not G:
        raise ValueError("virtual endomorphism belongs to another group")
    transversal, coset = coset_transversal(G, H.members)
    mul, inv = G.mul, G.inv
    phi = ve.hom
    perms, sections = [], []
    for g in range(G.order):
        row, secs = [], []
        for t in transversal:
            x = mul[g][t]
            j = coset[x]
            h = mul[inv[transversal[j]]][x]
            row.append(j)
            secs.append(phi(h))
        perms.append(tuple(row))
        sections.append(tuple(secs))
    gens = {f"g{k}": g for k, g in enumerate(G.generators)}
    return WreathRecursion(
        len(transversal), transversal, tuple(perms), tuple(sections), gens, G.name, G
    )


def relation_violations(a: WreathRecursion, ve: Optional[VirtualEndomorphism] = None) -> list[str]:
    """Names of the automaton invariants that fail.

    With ``ve`` also recheck g t_i = t_{sigma(i)} h_i, h_i in H, section = phi(h_i).
    """
    bad = []
    p = a.alphabet_size
    if a.perms[0] != tuple(range(p)) or any(s != 0 for s in a.sections[0]):
        bad.append("identity state")
    if any(s < 0 or s >= a.size for row in a.sections for s in row):
        bad.append("state closure")
    if ve is not None and a.group is not None:
        G = a.group
        H = ve.domain
        t = a.transversal
        for g in range(G.order):
            for i in range(p):
                h = G.mul[G.inv[t[a.perms[g][i]]]][G.mul[g][t[i]]]
                if h not in H or ve.hom(h) != a.sections[g][i]:
                    bad.append("defining relation")
                    return bad
    return bad


def multiplicativity_holds(a: WreathRecursion, level: int) -> bool:
    """level_permutation(g g') is level_permutation(g') followed by level_permutation(g)."""
    G = a.group
    if G is None:
        raise ValueError("automaton has no attached group")
    perms = [level_permutation(a, g, level) for g in range(a.size)]
    for g in range(G.order):
        pg = perms[g]
        row = G.mul[g]
        for h in range(G.order):
            ph = perms[h]
            if perms[row[h]] != tuple(pg[x] for x in ph):
                return False
    return True


def section(a: WreathRecursion, g: int, word: Sequence[int]) -> int:
    for x in word:
        g = a.sections[g][x]
    return g


def act(a: WreathRecursion, g: int, word: Sequence[int]) -> tuple[int, ...]:
    out = []
    for x in word:
        out.append(a.perms[g][x])
        g = a.sections[g][x]
    return tuple(out)


def leaf_index(word: Sequence[int], p: int) -> int:
    """Big-endian: the first letter is the most significant digit."""
    k = 0
    for x in word:
        k = k * p + x
    return k


def level_permutation(a: WreathRecursion, g: int, level: int) -> tuple[int, ...]:
    """The permutation of the p^level leaves induced by state g."""
    p = a.alphabet_size
    if p ** level > LEAF_CAP:
        raise LevelTooLarge(f"{p}^{level} leaves exceeds the cap of {LEAF_CAP}")
    return _level_perm(a, g, level)


def _level_perm(a: WreathRecursion, g: int, level: int) -> tuple[int, ...]:
    key = (g, level)
    cached = a._level_cache.get(key)
    if cached is not None:
        return cached
    p = a.alphabet_size
    if level == 0:
        result: tuple[int, ...] = (0,)
    else:
        block = p ** (level - 1)
        out = [0] * (block * p)
        for i in range(p):
            sub = _level_perm(a, a.sections[g][i], level - 1)
            base = a.perms[g][i] * block
            offset = i * block
            for r in range(block):
                out[offset + r] = base + sub[r]
        result = tuple(out)
    a._level_cache[key] = result
    return result


def level_kernel(a: WreathRecursion, level: int) -> list[int]:
    """States acting trivially on the given level."""
    ident = tuple(range(a.alphabet_size ** level))
    return [g for g in range(a.size) if level_permutation(a, g, level) == ident]


def faithful_depth(a: WreathRecursion) -> int:
    """Least level on which only the identity acts trivially.

    Kernels K_n of the level-n action descend; once K_{n+1} = K_n the chain
    is constant, so a nontrivial repeat proves the action unfaithful.
    """
    if a.size == 1:
        return 0
    previous = list(range(a.size))
    n = 0
    while True:
        n += 1
        ident = tuple(range(a.alphabet_size))
        # K_n = states with trivial root permutation and every section in K_{n-1}
        prev = set(previous)
        kernel = [
            g for g in previous
            if a.perms[g] == ident and all(s in prev for s in a.sections[g])
        ]
        if len(kernel) == 1:
            return n
        if len(kernel) == len(previous):
            raise NotFaithful(f"kernel stabilizes at {len(kernel)} states on level {n}")
        previous = kernel


def stable_kernel(a: WreathRecursion) -> list[int]:
    """States in the kernel of the whole tree action."""
    previous = list(range(a.size))
    ident = tuple(range(a.alphabet_size))
    while True:
        prev = set(previous)
        kernel = [g for g in previous if a.perms[g] == ident and all(s in prev for s in a.sections[g])]
        if len(kernel) == len(previous):
            return kernel
        previous = kernel


def is_level_transitive(a: WreathRecursion, level: int) -> bool:
    """Whether the states generate a group transitive on the leaves of ``level``."""
    p = a.alphabet_size
    if p ** level > LEAF_CAP:
        raise LevelTooLarge(f"{p}^{level} leaves exceeds the cap of {LEAF_CAP}")
    states = list(a.generator_states.values()) or list(range(a.size))
    perms = [level_permutation(a, g, level) for g in states]
    seen = {0}
    stack = [0]
    while stack:
        x = stack.pop()
        for perm in perms:
            y = perm[x]
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return len(seen) == p ** level


@dataclass(frozen=True)
class Portrait:
    root_perm: tuple[int, ...]
    children: Optional[tuple["Portrait", ...]] = None

    def act(self, word: Sequence[int]) -> tuple[int, ...]:
        out, node = [], self
        for x in word:
            if node is None:
                raise ValueError("word longer than the portrait depth")
            out.append(node.root_perm[x])
            node = node.children[x] if node.children is not None else None
        return tuple(out)


def portrait(a: WreathRecursion, g: int, depth: int) -> Portrait:
    """Labels of g on levels 0..depth; a depth-d portrait acts on words up to length d+1."""
    if depth > PORTRAIT_DEPTH_CAP:
        raise LevelTooLarge(f"portrait depth {depth} exceeds {PORTRAIT_DEPTH_CAP}")
    if depth == 0:
        return Portrait(a.perms[g])
    return Portrait(a.perms[g], tuple(portrait(a, s, depth - 1) for s in a.sections[g]))


def portrait_product(P: Portrait, Q: Portrait) -> Portrait:
    """Portrait of gh from those of g and h: (gh)_i = g_{h(i)} h_i."""
    root = tuple(P.root_perm[j] for j in Q.root_perm)
    if P.children is None or Q.children is None:
        return Portrait(root)
    kids = tuple(portrait_product(P.children[Q.root_perm[i]], Q.children[i]) for i in range(len(root)))
    return Portrait(root, kids)


# --- serialization ----------------------------------------------------------


def to_document(a: WreathRecursion) -> str:
    """Serialize as JSON with one state per line (stable layout, round-trips byte for byte)."""
    lines = [
        "{",
        f'  "format": {json.dumps(FORMAT_TAG)},',
        f'  "group": {json.dumps(a.group_name)},',
        f'  "alphabet_size": {a.alphabet_size},',
        f'  "transversal": {json.dumps(list(a.transversal))},',
        f'  "generator_states": {json.dumps(a.generator_states)},',
        '  "states": [',
    ]
    rows = [
        f'    {{"perm": {json.dumps(list(p))}, "sections": {json.dumps(list(s))}}}'
        for p, s in zip(a.perms, a.sections)
    ]
    lines.append(",\n".join(rows))
    lines += ["  ]", "}", ""]
    return "\n".join(lines)


def from_document(text: str) -> WreathRecursion:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from None
    if doc.get("format") != FORMAT_TAG:
        raise ParseError(f"expected format {FORMAT_TAG!r}", 1)
    try:
        p = int(doc["alphabet_size"])
        states = doc["states"]
        perms = tuple(tuple(int(v) for v in st["perm"]) for st in states)
        sections = tuple(tuple(int(v) for v in st["sections"]) for st in states)
        a = WreathRecursion(
            p,
            tuple(int(v) for v in doc["transversal"]),
            perms,
            sections,
            {str(k): int(v) for k, v in doc["generator_states"].items()},
            str(doc.get("group", "")),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed automaton document: {exc}", 1) from None
    for k, (perm, secs) in enumerate(zip(perms, sections)):
        if sorted(perm) != list(range(p)) or len(secs) != p or any(not 0 <= s < len(perms) for s in secs):
            raise ParseError(f"state {k} is malformed", 1)
    return a

"""Virtual endomorphisms from maximal subgroups and the self-similarity decision.

A finite p-group is self-similar exactly when some maximal subgroup H
admits a homomorphism phi: H -> G whose phi-core (the largest subgroup of
H that is normal in G and mapped into itself) is trivial.  The search
enumerates generator images with order-divisibility and prefix pruning.
"""

from __future__ import annotations

import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterator, Optional, Sequence

from .errors import (
    BudgetExceeded,
    GeneratorsDontGenerate,
    NotAPGroup,
    NotMaximalClass,
    OrderTooSmall,
)
from .group import Group, Subgroup, _closure, is_normal, maximal_subgroups, normal_core_set
from .pgroups import (
    is_elementary_abelian,
    is_maximal_class,
    maximal_class_data,
    prime_of,
    splits_over,
)


@dataclass(frozen=True)
class Homomorphism:
    domain: Subgroup
    codomain: Group
    images: tuple[int, ...]  # images[k] is the image of domain.members[k]

    def __call__(self, x: int) -> int:
        return self.images[self.position[x]]

    @property
    def position(self) -> dict[int, int]:
        pos = self.__dict__.get("_position")
        if pos is None:
            pos = {x: k for k, x in enumerate(self.domain.members)}
            object.__setattr__(self, "_position", pos)
        return pos

    def as_dict(self) -> dict[int, int]:
        return dict(zip(self.domain.members, self.images))

    def kernel(self) -> Subgroup:
        return Subgroup(self.domain.parent, tuple(x for x, y in zip(self.domain.members, self.images) if y == 0))


@dataclass
class VirtualEndomorphism:
    hom: Homomorphism
    index: int
    phi_core: Subgroup

    @property
    def domain(self) -> Subgroup:
        return self.hom.domain

    @property
    def is_simple(self) -> bool:
        return self.phi_core.is_trivial


@dataclass
class SearchStats:
    maximal_subgroups_examined: int = 0
    assignments_tried: int = 0
    assignments_pruned: int = 0
    homomorphisms_found: int = 0
    simple_found: int = 0

    def add(self, other: "SearchStats") -> None:
        self.assignments_tried += other.assignments_tried
        self.assignments_pruned += other.assignments_pruned
        self.homomorphisms_found += other.homomorphisms_found
        self.simple_found += other.simple_found

    def as_dict(self) -> dict:
        return {
            "maximal_subgroups_examined": self.maximal_subgroups_examined,
            "assignments_tried": self.assignments_tried,
            "assignments_pruned": self.assignments_pruned,
            "homomorphisms_found": self.homomorphisms_found,
            "simple_found": self.simple_found,
        }


@dataclass
class DecisionReport:
    name: str
    order: int
    prime: Optional[int]
    self_similar: bool
    witness: Optional[VirtualEndomorphism]
    stats: SearchStats = field(default_factory=SearchStats)
    elapsed: float = 0.0
    note: str = ""


def minimal_generating_set(H: Subgroup) -> tuple[int, ...]:
    """Generators of H, one per step, each of least order outside the span so far.

    For a p-group each pick is taken outside Phi(H)<chosen>, so the result has
    exactly d(H) elements (Burnside basis theorem).
    """
    G = H.parent
    if H.is_trivial:
        return ()
    orders = G.orders
    members = H.members
    if G.prime is not None:
        comm = G.commutator
        seed = {comm(a, b) for a in members for b in members}
        seed.update(G.power(x, G.prime) for x in members)
        base = list(seed)
    else:
        base = []
    chosen: list[int] = []
    span = set(_closure(G, base))
    by_order = sorted(members, key=lambda x: (orders[x], x))
    while len(span) < len(members):
        x = next(x for x in by_order if x not in span)
        chosen.append(x)
        span = set(_closure(G, base + chosen))
    return tuple(chosen)


def _check_generates(H: Subgroup, gens: Sequence[int]) -> None:
    if len(_closure(H.parent, gens)) != H.order or any(g not in H for g in gens):
        raise GeneratorsDontGenerate(f"{list(gens)} do not generate the subgroup of order {H.order}")


def _extend(dst, src_mul, f, known, gens, imgs, new_gen, new_img):
    """Extend the partial map f (over ``known``) by one generator pair.

    This closes the set of pairs (x, f(x)) under right multiplication by the
    generator pairs; a clash means the generated subgroup of H x G is larger
    than H, so the assignment is not a homomorphism.
    """
    f = f[:]
    known = known[:]
    queue = []
    for x in known:
        y = src_mul[x][new_gen]
        v = dst[f[x]][new_img]
        fy = f[y]
        if fy < 0:
            f[y] = v
            known.append(y)
            queue.append(y)
        elif fy != v:
            return None, None
    all_gens = list(zip(gens, imgs)) + [(new_gen, new_img)]
    for x in queue:
        row = src_mul[x]
        fx = dst[f[x]]
        for g, im in all_gens:
            y = row[g]
            v = fx[im]
            fy = f[y]
            if fy < 0:
                f[y] = v
                known.append(y)
                queue.append(y)
            elif fy != v:
                return None, None
    return f, known


def assignment_is_homomorphism(
    H: Subgroup, gens: Sequence[int], images: Sequence[int], codomain: Optional[Group] = None
) -> Optional[Homomorphism]:
    """The homomorphism H -> codomain sending gens[i] to images[i], if one exists."""
    codomain = codomain or H.parent
    if len(gens) != len(images):
        raise ValueError("gens and images differ in length")
    _check_generates(H, gens)
    src = H.parent
    f = [-1] * src.order
    f[0] = 0
    known = [0]
    done_g: list[int] = []
    done_i: list[int] = []
    for g, im in zip(gens, images):
        f, known = _extend(codomain.mul, src.mul, f, known, done_g, done_i, g, im)
        if f is None:
            return None
        done_g.append(g)
        done_i.append(im)
    return Homomorphism(H, codomain, tuple(f[x] for x in H.members))


def _candidates(H: Subgroup, G: Group, gens: Sequence[int]) -> list[list[int]]:
    src_orders, dst_orders = H.parent.orders, G.orders
    return [[y for y in range(G.order) if src_orders[g] % dst_orders[y] == 0] for g in gens]


def divisibility_pruned(G: Group, cands: list[list[int]]) -> int:
    """Assignments ruled out up front because an image order does not divide its generator's."""
    kept = 1
    for c in cands:
        kept *= len(c)
    return G.order ** len(cands) - kept


def _search(
    H: Subgroup,
    G: Group,
    gens: Sequence[int],
    cands: list[list[int]],
    stats: SearchStats,
    first: Optional[Sequence[int]] = None,
    deadline: Optional[float] = None,
) -> Iterator[tuple[int, ...]]:
    """Depth-first enumeration of image tuples, lexicographic in element index.

    Yields the full-length image list (indexed by parent element, -1 off H)
    for every assignment that extends to a homomorphism.  ``first`` restricts
    the choices for the first generator (a partition of the search).  Only
    prefix failures are counted as pruned here; divisibility pruning is
    charged once per subgroup by the caller.
    """
    src = H.parent
    d = len(gens)
    f0 = [-1] * src.order
    f0[0] = 0
    if d == 0:
        stats.homomorphisms_found += 1
        yield tuple(f0)
        return
    dst_mul, src_mul = G.mul, src.mul
    levels = [first if first is not None else cands[0]] + cands[1:]
    suffix = [1] * (d + 1)
    for k in range(d - 1, 0, -1):
        suffix[k] = suffix[k + 1] * len(cands[k])

    imgs: list[int] = []
    ticks = 0

    def rec(k, f, known):
        nonlocal ticks
        for y in levels[k]:
            stats.assignments_tried += 1
            ticks += 1
            if deadline is not None and not ticks & 1023 and time.monotonic() > deadline:
                raise BudgetExceeded("time budget exhausted during homomorphism search", stats)
            nf, nknown = _extend(dst_mul, src_mul, f, known, gens[:k], imgs, gens[k], y)
            if nf is None:
                if k + 1 < d:
                    stats.assignments_pruned += suffix[k + 1]
                continue
            if k + 1 == d:
                stats.homomorphisms_found += 1
                yield tuple(nf)
            else:
                imgs.append(y)
                yield from rec(k + 1, nf, nknown)
                imgs.pop()

    yield from rec(0, f0, [0])


def homomorphisms(H: Subgroup, G: Group, stats: Optional[SearchStats] = None) -> Iterator[Homomorphism]:
    """Every homomorphism H -> G exactly once, in lexicographic order of generator images."""
    stats = stats if stats is not None else SearchStats()
    gens = minimal_generating_set(H)
    cands = _candidates(H, G, gens)
    stats.assignments_pruned += divisibility_pruned(G, cands)
    for f in _search(H, G, gens, cands, stats):
        yield Homomorphism(H, G, tuple(f[x] for x in H.members))


def _phi_core_members(G: Group, H: Subgroup, f: Sequence[int]) -> set[int]:
    K = set(H.members)
    while True:
        pre = {h for h in K if f[h] in K}
        nxt = normal_core_set(G, pre)
        if nxt == K:
            return K
        K = nxt


def phi_core(hom: Homomorphism) -> Subgroup:
    """Largest subgroup of H that is normal in G and mapped into itself."""
    H, G = hom.domain, hom.codomain
    if H.parent is not G:
        raise ValueError("a virtual endomorphism maps into the parent of its domain")
    if not is_normal(G, H):
        raise ValueError("domain must be normal (maximal subgroups of p-groups are)")
    f = [-1] * G.order
    for x, y in zip(H.members, hom.images):
        f[x] = y
    return Subgroup(G, tuple(sorted(_phi_core_members(G, H, f))))


def is_simple(hom: Homomorphism) -> bool:
    return phi_core(hom).is_trivial


def virtual_endomorphism(hom: Homomorphism) -> VirtualEndomorphism:
    return VirtualEndomorphism(hom, hom.codomain.order // hom.domain.order, phi_core(hom))


# --- the decision ---------------------------------------------------------

_WORKER_GROUP: Optional[Group] = None


def _init_worker(G: Group) -> None:
    global _WORKER_GROUP
    _WORKER_GROUP = G


def _first_simple(G, H, gens, cands, first, deadline):
    """Stats and first simple image map in one partition of the search."""
    stats = SearchStats()
    for f in _search(H, G, gens, cands, stats, first, deadline):
        if not _phi_core_members(G, H, f) - {0}:
            stats.simple_found += 1
            return stats, f
    return stats, None


def _worker_task(H_members, gens, cands, first, deadline):
    G = _WORKER_GROUP
    return _first_simple(G, Subgroup(G, H_members), gens, cands, first, deadline)


# Below this many first-level candidates times search width, a pool costs more than it saves.
PARALLEL_THRESHOLD = 20_000


def decide_self_similar(
    G: Group, workers: int = 1, budget_secs: Optional[float] = None
) -> DecisionReport:
    """Search every maximal subgroup for a simple virtual endomorphism.

    The witness is the first simple one in the deterministic search order;
    it and the search statistics do not depend on ``workers``.
    """
    start = time.monotonic()
    deadline = start + budget_secs if budget_secs is not None else None
    if G.order == 1:
        return DecisionReport(G.name, 1, None, True, None, note="trivial group: self-similar by convention")
    if G.prime is None:
        raise NotAPGroup(f"{G.name} of order {G.order} is not a p-group")
    stats = SearchStats()
    pool = None
    try:
        for H in maximal_subgroups(G):
            if deadline is not None and time.monotonic() > deadline:
                raise BudgetExceeded("time budget exhausted between subgroups", stats)
            stats.maximal_subgroups_examined += 1
            gens = minimal_generating_set(H)
            cands = _candidates(H, G, gens)
            stats.assignments_pruned += divisibility_pruned(G, cands)
            width = 1
            for c in cands:
                width *= len(c)
            if workers > 1 and len(gens) > 1 and width >= PARALLEL_THRESHOLD:
                if pool is None:
                    pool = ProcessPoolExecutor(workers, initializer=_init_worker, initargs=(G,))
                found = _parallel_first(pool, H, gens, cands, workers, deadline, stats)
            else:
                part, found = _first_simple(G, H, gens, cands, None, deadline)
                stats.add(part)
            if found is not None:
                hom = Homomorphism(H, G, tuple(found[x] for x in H.members))
                witness = virtual_endomorphism(hom)
                assert witness.is_simple
                return DecisionReport(
                    G.name, G.order, G.prime, True, witness, stats, time.monotonic() - start
                )
    except BudgetExceeded as exc:
        exc.stats = stats
        raise
    finally:
        if pool is not None:
            pool.shutdown(cancel_futures=True)
    return DecisionReport(G.name, G.order, G.prime, False, None, stats, time.monotonic() - start)


def _parallel_first(pool, H, gens, cands, workers, deadline, stats):
    first = cands[0]
    chunk = max(1, -(-len(first) // (4 * workers)))
    parts = [first[i:i + chunk] for i in range(0, len(first), chunk)]
    futures = [pool.submit(_worker_task, H.members, gens, cands, part, deadline) for part in parts]
    # consume partitions in search order so stats match a serial run
    for fut in futures:
        part_stats, found = fut.result()
        stats.add(part_stats)
        if found is not None:
            for later in futures:
                later.cancel()
            return found
    return None


def cpu_workers() -> int:
    return os.cpu_count() or 1


# --- predicates from the structure theory ---------------------------------


def sunic_predicate(G: Group) -> bool:
    """Some elementary abelian maximal subgroup has a complement."""
    prime_of(G)
    return any(
        is_elementary_abelian(M) and splits_over(G, M) is not None for M in maximal_subgroups(G)
    )


def theorem_b_predicate(G: Group) -> bool:
    """G_1 is elementary abelian and G splits over it (maximal class, order >= p^4)."""
    data = maximal_class_data(G)
    return is_elementary_abelian(data.g1) and splits_over(G, data.g1) is not None


@dataclass
class MaxScanRow:
    subgroup: Subgroup
    homomorphisms: int
    simple: int


def proposition_max_scan(G: Group) -> list[MaxScanRow]:
    """Count simple virtual endomorphisms from every maximal subgroup other than G_1."""
    data = maximal_class_data(G)
    rows = []
    for H in maximal_subgroups(G):
        if H == data.g1:
            continue
        count = simple = 0
        for hom in homomorphisms(H, G):
            count += 1
            if is_simple(hom):
                simple += 1
        rows.append(MaxScanRow(H, count, simple))
    return rows


def require_maximal_class(G: Group) -> None:
    """Raise unless G is of maximal class and order at least p^4."""
    p = prime_of(G)
    if G.order < p ** 4:
        raise OrderTooSmall(f"{G.name} has order {G.order} < p^4")
    if not is_maximal_class(G):
        raise NotMaximalClass(f"{G.name} is not of maximal class")

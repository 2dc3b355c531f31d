"""Subgroup lattice enumeration, maximal subgroups and maximality certificates."""

from __future__ import annotations

from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from sympy import primefactors

from ..config.settings import Config
from ..utils.logger import setup_logger
from .errors import ContractViolationError, ResourceLimitError
from .permcore import ElementTable, PermutationGroup, is_subgroup
from .structure import coset_enumeration

logger = setup_logger(__name__)


def _join(table: ElementTable, base: FrozenSet[int], generators: Sequence[int], bound: int) -> Optional[FrozenSet[int]]:
    """Closure of `base` under `generators`, or None once it exceeds `bound` elements."""
    members = set(base)
    columns = [table.right(g) for g in generators]
    queue = list(members)
    for x in queue:
        for column in columns:
            y = column[x]
            if y not in members:
                members.add(y)
                if len(members) > bound:
                    return None
                queue.append(y)
    return frozenset(members)


def all_subgroup_subsets(G: PermutationGroup, cap: Optional[int] = None) -> List[FrozenSet[int]]:
    """
    Every subgroup of G as an index set, sorted by (order, indices).

    Subgroups are found by joining each known subgroup with each cyclic
    subgroup until no new join appears; every subgroup is an iterated join of
    its cyclic subgroups.
    """
    limit = cap if cap is not None else Config.SUBGROUP_CAP
    order = G.order()
    if order > limit:
        raise ResourceLimitError("SUBGROUP_CAP", limit, order, f"subgroups of {G.label()}")

    def build() -> List[FrozenSet[int]]:
        table = G.table()
        whole = frozenset(range(table.size))
        smallest_prime = min(primefactors(order)) if order > 1 else 1
        bound = order // smallest_prime
        generators: Dict[FrozenSet[int], Tuple[int, ...]] = {frozenset({0}): ()}
        cyclic_gens: Dict[FrozenSet[int], int] = {}
        for i in range(1, table.size):
            C = table.cyclic(i)
            if C not in cyclic_gens:
                cyclic_gens[C] = i
                generators.setdefault(C, (i,))
        frontier = sorted(generators, key=len)
        rounds = 0
        while frontier:
            rounds += 1
            fresh = []
            for A in frontier:
                if A == whole:
                    continue
                gens_a = generators[A]
                for C, x in cyclic_gens.items():
                    if x in A or C <= A:
                        continue
                    J = _join(table, A, gens_a + (x,), bound)
                    if J is None:
                        J = whole
                    if J not in generators:
                        generators[J] = gens_a + (x,)
                        fresh.append(J)
            frontier = fresh
        logger.debug(f"Subgroups of {G.label()}: {len(generators)} after {rounds} join rounds")
        return sorted(generators, key=lambda s: (len(s), tuple(sorted(s))))

    return G.memo("all_subgroup_subsets", build)


def all_subgroups(G: PermutationGroup, cap: Optional[int] = None) -> List[PermutationGroup]:
    subsets = all_subgroup_subsets(G, cap)
    table = G.table()
    return [table.group_of(H) for H in subsets]


def maximal_subgroup_subsets(G: PermutationGroup, cap: Optional[int] = None) -> List[FrozenSet[int]]:
    subsets = all_subgroup_subsets(G, cap)
    order = G.order()
    proper = [H for H in subsets if len(H) < order]
    maximal = []
    for H in proper:
        size = len(H)
        if not any(len(K) > size and len(K) % size == 0 and H < K for K in proper):
            maximal.append(H)
    return maximal


def maximal_subgroups(G: PermutationGroup, cap: Optional[int] = None) -> List[PermutationGroup]:
    """Proper subgroups contained in no other proper subgroup, by lattice filtering."""
    if G.is_trivial():
        return []
    table = G.table()
    return [table.group_of(H) for H in maximal_subgroup_subsets(G, cap)]


def is_maximal(G: PermutationGroup, M: PermutationGroup, degree_cap: Optional[int] = None) -> bool:
    """
    Certify maximality without the lattice: M is maximal iff M and any element
    outside it generate G. One coset per M-orbit on the right cosets suffices.
    """
    if not is_subgroup(M, G):
        raise ContractViolationError(f"not a subgroup of {G.label()}")
    target = G.order()
    if M.order() == target:
        raise ContractViolationError("a group is not a maximal subgroup of itself")
    cosets = coset_enumeration(G, M, degree_cap)
    index = len(cosets.representatives)
    actions = [cosets.action(m) for m in M.generators]
    seen = [False] * index
    seen[0] = True
    for start in range(1, index):
        if seen[start]:
            continue
        orbit = [start]
        seen[start] = True
        for j in orbit:
            for action in actions:
                k = action[j]
                if not seen[k]:
                    seen[k] = True
                    orbit.append(k)
        g = cosets.representatives[start]
        if PermutationGroup(G.degree, M.generators + (g,)).order() != target:
            return False
    return True


def conjugacy_types(G: PermutationGroup, subsets: Sequence[FrozenSet[int]]) -> List[List[FrozenSet[int]]]:
    """Group subgroups (index sets, closed under conjugation in G) into G-conjugacy classes."""
    table = G.table()
    maps = [table.conjugation(j) for j in table.generator_indices()]
    remaining = set(subsets)
    classes = []
    for H in subsets:
        if H not in remaining:
            continue
        orbit = [H]
        remaining.discard(H)
        for K in orbit:
            for conj in maps:
                image = frozenset(conj[x] for x in K)
                if image in remaining:
                    remaining.discard(image)
                    orbit.append(image)
        classes.append(orbit)
    return classes
"""
Structural analysis on top of the permutation kernel: conjugacy classes,
normal and minimal normal subgroups, quotients by coset action, chief series,
socle, sigma-partitions and the class predicates.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, FrozenSet, Hashable, Iterable, List, Optional, Sequence, Tuple

from sympy import isprime, perfect_power, primefactors

from ..config.settings import Config
from ..utils.logger import setup_logger
from .errors import ContractViolationError, ResourceLimitError
from .permcore import (
    Permutation,
    PermutationGroup,
    derived_series,
    format_cycles,
    is_normal,
    is_subgroup,
    lower_central_series,
)

logger = setup_logger(__name__)


class RestRule(Enum):
    SINGLETONS = "singletons"
    ONE_CLASS = "one_class"


@dataclass(frozen=True)
class SigmaPartition:
    """
    A partition of all primes: explicitly listed classes plus a rule for the rest.

    Text syntax: classes separated by ``|``, primes comma separated, a trailing
    ``*`` makes every unlisted prime its own class and ``*1`` puts all unlisted
    primes into one class. ``*`` alone is the per-prime partition.
    """

    classes: Tuple[FrozenSet[int], ...] = ()
    rest_rule: RestRule = RestRule.SINGLETONS

    def __post_init__(self):
        seen: set = set()
        for cls in self.classes:
            if not cls:
                raise ContractViolationError("empty class in sigma-partition")
            for p in cls:
                if not isprime(p):
                    raise ContractViolationError(f"{p} is not prime")
                if p in seen:
                    raise ContractViolationError(f"prime {p} listed in two classes")
                seen.add(p)

    @classmethod
    def per_prime(cls) -> "SigmaPartition":
        return cls((), RestRule.SINGLETONS)

    @classmethod
    def one_class(cls) -> "SigmaPartition":
        return cls((), RestRule.ONE_CLASS)

    @classmethod
    def parse(cls, text: str) -> "SigmaPartition":
        parts = [part.strip() for part in text.strip().split('|')]
        if not parts or parts == ['']:
            raise ContractViolationError("empty sigma-partition")
        rest = RestRule.SINGLETONS
        if parts[-1] in ('*', '*1'):
            rest = RestRule.ONE_CLASS if parts[-1] == '*1' else RestRule.SINGLETONS
            parts = parts[:-1]
        classes = []
        for part in parts:
            if not part:
                raise ContractViolationError(f"empty class in sigma-partition {text!r}")
            if '*' in part:
                raise ContractViolationError(f"'*' may only appear as the last class in {text!r}")
            try:
                primes = frozenset(int(token) for token in part.split(','))
            except ValueError:
                raise ContractViolationError(f"invalid prime list {part!r} in sigma-partition") from None
            classes.append(primes)
        return cls(tuple(classes), rest)

    def spec(self) -> str:
        listed = [",".join(str(p) for p in sorted(cls)) for cls in self.classes]
        listed.append('*1' if self.rest_rule is RestRule.ONE_CLASS else '*')
        return "|".join(listed)

    def class_of(self, p: int) -> Hashable:
        for i, cls in enumerate(self.classes):
            if p in cls:
                return ("listed", i)
        if self.rest_rule is RestRule.ONE_CLASS:
            return ("rest",)
        return ("prime", p)

    def same_class(self, p: int, q: int) -> bool:
        return self.class_of(p) == self.class_of(q)

    def classes_meeting(self, n: int) -> Dict[Hashable, Tuple[int, ...]]:
        """Classes containing a prime divisor of n, mapped to those divisors."""
        result: Dict[Hashable, List[int]] = {}
        for p in primefactors(n):
            result.setdefault(self.class_of(p), []).append(int(p))
        return {key: tuple(primes) for key, primes in result.items()}

    def is_single_class_order(self, n: int) -> bool:
        """True iff n is the order of a sigma_i-group for one class sigma_i."""
        return len(self.classes_meeting(n)) <= 1

    def __str__(self) -> str:
        return self.spec()


def prime_part(n: int, primes: Iterable[int]) -> int:
    """The largest divisor of n whose prime divisors all lie in `primes`."""
    wanted = set(primes)
    part = 1
    for p in primefactors(n):
        if p in wanted:
            while n % p == 0:
                n //= p
                part *= p
    return part


def prime_power_base(n: int) -> Optional[int]:
    """p if n = p^k with k >= 1, else None."""
    if n < 2:
        return None
    if isprime(n):
        return n
    power = perfect_power(n)
    if power and isprime(power[0]):
        return int(power[0])
    if power:
        base = prime_power_base(int(power[0]))
        return base
    return None


class QuotientGroup:
    """
    G/N as the (regular) action of G on the right cosets of N.

    The quotient by the trivial subgroup is G itself. Points of the carrier are
    coset indices; coset 0 is N.
    """

    def __init__(self, G: PermutationGroup, N: PermutationGroup, carrier: PermutationGroup,
                 representatives: List[Permutation], lookup: Dict[bytes, int]):
        self.group = G
        self.kernel = N
        self.carrier = carrier
        self._representatives = representatives
        self._lookup = lookup

    @property
    def index(self) -> int:
        return len(self._representatives)

    def _is_identity_map(self) -> bool:
        return self.kernel.is_trivial()

    def coset_of(self, x: Permutation) -> int:
        if self._is_identity_map():
            raise ContractViolationError("coset indices are not used for the trivial kernel")
        return self._lookup[self.kernel.canonical_coset_rep(x).key]

    def project(self, x: Permutation) -> Permutation:
        """Image of an element of G in the carrier."""
        if self._is_identity_map():
            return x
        return Permutation([self.coset_of(r * x) for r in self._representatives])

    def image(self, H: PermutationGroup) -> PermutationGroup:
        """Image HN/N of a subgroup H of G."""
        return PermutationGroup(self.carrier.degree, [self.project(h) for h in H.generators])

    def lift(self, s: Permutation) -> Permutation:
        """An element of G mapping onto s."""
        if self._is_identity_map():
            return s
        return self._representatives[s(0)]

    def pull_back(self, S: PermutationGroup) -> PermutationGroup:
        """Full preimage of a subgroup of the carrier."""
        if S.degree != self.carrier.degree:
            raise ContractViolationError("pull_back argument is not a subgroup of the quotient carrier")
        if self._is_identity_map():
            return S
        return PermutationGroup(self.group.degree, self.kernel.generators + tuple(self.lift(s) for s in S.generators))


@dataclass
class CosetTable:
    """Right cosets H r_j of a subgroup, with the action of G's generators on their indices."""

    subgroup: PermutationGroup
    representatives: List[Permutation]
    lookup: Dict[bytes, int]
    images: List[List[int]]

    def index_of(self, x: Permutation) -> int:
        return self.lookup[self.subgroup.canonical_coset_rep(x).key]

    def action(self, x: Permutation) -> List[int]:
        """Coset indices j -> index of H r_j x."""
        return [self.index_of(r * x) for r in self.representatives]


def coset_enumeration(G: PermutationGroup, H: PermutationGroup, degree_cap: Optional[int] = None) -> CosetTable:
    """Enumerate the right cosets of H in G breadth first from H itself."""
    index = G.order() // H.order()
    limit = degree_cap if degree_cap is not None else Config.DEGREE_CAP
    if index > limit:
        raise ResourceLimitError("DEGREE_CAP", limit, index, f"cosets in {G.label()}")
    identity = G.identity()
    representatives = [identity]
    lookup = {H.canonical_coset_rep(identity).key: 0}
    images: List[List[int]] = [[] for _ in G.generators]
    for j in range(index):
        r = representatives[j]
        for slot, g in enumerate(G.generators):
            y = r * g
            key = H.canonical_coset_rep(y).key
            k = lookup.get(key)
            if k is None:
                k = len(representatives)
                lookup[key] = k
                representatives.append(y)
            images[slot].append(k)
    return CosetTable(H, representatives, lookup, images)


def quotient(G: PermutationGroup, N: PermutationGroup, degree_cap: Optional[int] = None) -> QuotientGroup:
    """Quotient G/N for N normal in G, by coset enumeration with canonical coset representatives."""
    if not is_normal(G, N):
        raise ContractViolationError(f"subgroup is not normal in {G.label()}")
    if N.is_trivial():
        return QuotientGroup(G, N, G, [], {})
    cosets = coset_enumeration(G, N, degree_cap)
    carrier = PermutationGroup(len(cosets.representatives), [Permutation(row) for row in cosets.images],
                               name=f"{G.label()}/N{N.order()}")
    return QuotientGroup(G, N, carrier, cosets.representatives, cosets.lookup)


def class_partition(G: PermutationGroup, cap: Optional[int] = None) -> List[Tuple[int, FrozenSet[int]]]:
    """Conjugacy classes as (representative index, index set), sorted by (size, representative)."""
    table = G.table(cap)

    def build() -> List[Tuple[int, FrozenSet[int]]]:
        maps = [table.conjugation(j) for j in table.generator_indices()]
        assigned = [False] * table.size
        classes = []
        for i in range(table.size):
            if assigned[i]:
                continue
            orbit = [i]
            assigned[i] = True
            for x in orbit:
                for conj in maps:
                    y = conj[x]
                    if not assigned[y]:
                        assigned[y] = True
                        orbit.append(y)
            classes.append((i, frozenset(orbit)))
        classes.sort(key=lambda item: (len(item[1]), item[0]))
        return classes

    return G.memo("class_partition", build)


def conjugacy_classes(G: PermutationGroup, cap: Optional[int] = None) -> List[Tuple[Permutation, int]]:
    table = G.table(cap)
    return [(table.element(rep), len(members)) for rep, members in class_partition(G, cap)]


def _class_closures(G: PermutationGroup) -> Dict[int, FrozenSet[int]]:
    """Normal closure of each class representative, as index sets."""
    table = G.table()

    def build() -> Dict[int, FrozenSet[int]]:
        return {rep: table.closure(sorted(members)) for rep, members in class_partition(G)}

    return G.memo("class_closures", build)


def _sorted_subsets(subsets: Iterable[FrozenSet[int]]) -> List[FrozenSet[int]]:
    return sorted(set(subsets), key=lambda s: (len(s), tuple(sorted(s))))


def minimal_normal_subsets(G: PermutationGroup) -> List[FrozenSet[int]]:
    def build() -> List[FrozenSet[int]]:
        closures = {c for rep, c in _class_closures(G).items() if rep != 0}
        minimal = [N for N in closures if not any(M < N for M in closures)]
        return _sorted_subsets(minimal)

    return G.memo("minimal_normal_subsets", build)


def minimal_normal_subgroups(G: PermutationGroup) -> List[PermutationGroup]:
    if G.is_trivial():
        return []
    table = G.table()
    return [table.group_of(N) for N in minimal_normal_subsets(G)]


def normal_subsets(G: PermutationGroup, class_cap: Optional[int] = None) -> List[FrozenSet[int]]:
    """All normal subgroups as index sets, by joining class closures breadth first."""
    limit = class_cap if class_cap is not None else Config.CLASS_CAP
    partition = class_partition(G)
    if len(partition) > limit:
        raise ResourceLimitError("CLASS_CAP", limit, len(partition), f"normal subgroups of {G.label()}")

    def build() -> List[FrozenSet[int]]:
        table = G.table()
        whole = frozenset(range(table.size))
        closures = _class_closures(G)
        generators = [(closures[rep], sorted(members)) for rep, members in partition if rep != 0]
        trivial = frozenset({0})
        found = {trivial}
        frontier = [trivial]
        while frontier:
            fresh = []
            for N in frontier:
                if N == whole:
                    continue
                for closure, members in generators:
                    if closure <= N:
                        continue
                    product = table.closure(members, start=N)
                    if product not in found:
                        found.add(product)
                        fresh.append(product)
            frontier = fresh
        return _sorted_subsets(found)

    return G.memo("normal_subsets", build)


def normal_subgroups(G: PermutationGroup, class_cap: Optional[int] = None) -> List[PermutationGroup]:
    table = G.table()
    return [table.group_of(N) for N in normal_subsets(G, class_cap)]


def socle(G: PermutationGroup) -> PermutationGroup:
    if G.is_trivial():
        return PermutationGroup(G.degree, [])
    table = G.table()

    def build() -> PermutationGroup:
        result: FrozenSet[int] = frozenset({0})
        for N in minimal_normal_subsets(G):
            result = table.closure(sorted(N), start=result)
        return table.group_of(result)

    return G.memo("socle", build)


@dataclass(frozen=True)
class ChiefFactor:
    """One chief factor: elementary abelian p^k, or T^k with T nonabelian simple."""

    order: int
    abelian: bool
    prime: Optional[int] = None
    component_order: Optional[int] = None
    multiplicity: int = 1

    @property
    def primes(self) -> Tuple[int, ...]:
        return tuple(int(p) for p in primefactors(self.order))

    def describe(self) -> str:
        if self.abelian:
            return f"{self.prime}^{self.multiplicity}"
        return f"T{self.component_order}^{self.multiplicity}"


@dataclass(frozen=True)
class ChiefSeries:
    subgroups: Tuple[PermutationGroup, ...]
    factors: Tuple[ChiefFactor, ...] = field(default=())

    @property
    def length(self) -> int:
        return len(self.factors)

    def factor_orders(self) -> List[int]:
        return [f.order for f in self.factors]


def classify_minimal_normal(K: PermutationGroup) -> ChiefFactor:
    """Classify a minimal normal subgroup K of some group, viewed as a group in its own right."""
    order = K.order()
    p = prime_power_base(order)
    if p is not None:
        k = 0
        n = order
        while n > 1:
            n //= p
            k += 1
        return ChiefFactor(order=order, abelian=True, prime=p, multiplicity=k)
    component = minimal_normal_subgroups(K)[0].order()
    k = 0
    n = order
    while n > 1:
        n //= component
        k += 1
    return ChiefFactor(order=order, abelian=False, component_order=component, multiplicity=k)


def chief_series(G: PermutationGroup) -> ChiefSeries:
    """Chief series through the smallest minimal normal subgroup of each successive quotient."""

    def build() -> ChiefSeries:
        current = PermutationGroup(G.degree, [])
        terms = [current]
        factors = []
        target = G.order()
        while current.order() < target:
            Q = quotient(G, current)
            K = minimal_normal_subgroups(Q.carrier)[0]
            factors.append(classify_minimal_normal(K))
            current = Q.pull_back(K)
            terms.append(current)
            logger.debug(f"Chief series of {G.label()}: factor {factors[-1].describe()}")
        return ChiefSeries(tuple(terms), tuple(factors))

    return G.memo("chief_series", build)


def composition_factor_orders(G: PermutationGroup) -> List[int]:
    """Orders of composition factors (with repetition), sorted."""
    orders: List[int] = []
    for factor in chief_series(G).factors:
        simple = factor.prime if factor.abelian else factor.component_order
        orders.extend([simple] * factor.multiplicity)
    return sorted(orders)


def has_unique_chief_series(G: PermutationGroup) -> bool:
    """True iff the normal subgroups form a chain."""
    subsets = normal_subsets(G)
    return all(a <= b for a, b in zip(subsets, subsets[1:]))


def is_soluble(G: PermutationGroup) -> bool:
    return G.memo("soluble", lambda: derived_series(G)[-1].is_trivial())


def is_nilpotent(G: PermutationGroup) -> bool:
    return G.memo("nilpotent", lambda: lower_central_series(G)[-1].is_trivial())


def is_p_soluble(G: PermutationGroup, p: int) -> bool:
    """Every chief factor is a p-group or a p'-group."""
    if is_soluble(G):
        return True
    return all(factor.abelian or factor.component_order % p != 0 for factor in chief_series(G).factors)


def is_sigma_soluble(G: PermutationGroup, sigma: SigmaPartition) -> bool:
    """Every chief factor is a sigma_i-group for a single class."""
    if is_soluble(G):
        return True
    return all(sigma.is_single_class_order(factor.order) for factor in chief_series(G).factors)


def is_sigma_nilpotent(G: PermutationGroup, sigma: SigmaPartition) -> bool:
    """For every class meeting |G|, O_{sigma_i}(G) has the full sigma_i-part of |G|."""
    from .radicals import pi_core

    order = G.order()
    meeting = sigma.classes_meeting(order)
    if len(meeting) <= 1:
        return True
    return all(pi_core(G, primes).order() == prime_part(order, primes) for primes in meeting.values())


def is_nonabelian_semisimple(G: PermutationGroup) -> bool:
    from .radicals import soluble_radical

    if G.is_trivial():
        return False
    return soluble_radical(G).is_trivial() and socle(G).order() == G.order()


def is_pi_group(G: PermutationGroup, primes: Iterable[int]) -> bool:
    order = G.order()
    return prime_part(order, primes) == order


@dataclass(frozen=True)
class PredicateReport:
    is_soluble: bool
    is_nilpotent: bool
    p_soluble: Dict[int, bool]
    sigma_soluble: bool
    sigma_nilpotent: bool
    is_nonabelian_semisimple: bool


def structural_predicates(G: PermutationGroup, sigma: SigmaPartition, primes: Sequence[int]) -> PredicateReport:
    return PredicateReport(
        is_soluble=is_soluble(G),
        is_nilpotent=is_nilpotent(G),
        p_soluble={int(p): is_p_soluble(G, p) for p in primes},
        sigma_soluble=is_sigma_soluble(G, sigma),
        sigma_nilpotent=is_sigma_nilpotent(G, sigma),
        is_nonabelian_semisimple=is_nonabelian_semisimple(G),
    )


def describe_subgroup(H: PermutationGroup) -> str:
    gens = " ".join(format_cycles(g) for g in H.generators) or "()"
    return f"order {H.order()}: {gens}"


"""Formations, residuals and the residual-based lengths."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Any, Callable, Dict, Iterable, List, Optional

from sympy import isprime

from ..utils.logger import setup_logger
from .errors import ContractViolationError
from .permcore import Permutation, PermutationGroup, commutator_subgroup, derived_subgroup, join, lower_central_series
from .radicals import INFINITE, Length, fitting_height, p_core, sigma_nilpotent_length
from .structure import SigmaPartition, is_nilpotent, is_sigma_nilpotent, is_soluble, normal_subsets, prime_part, quotient

logger = setup_logger(__name__)


@dataclass(frozen=True)
class FormationDescriptor:
    name: str
    member: Callable[[PermutationGroup], bool]
    parameters: Dict[str, Any] = field(default_factory=dict, compare=False)

    def __str__(self) -> str:
        return self.name


def nilpotent_formation() -> FormationDescriptor:
    return FormationDescriptor("N", is_nilpotent)


def sigma_nilpotent_formation(sigma: SigmaPartition) -> FormationDescriptor:
    return FormationDescriptor(f"Nsigma:{sigma.spec()}", lambda G: is_sigma_nilpotent(G, sigma), {"sigma": sigma})


def is_p_closed(G: PermutationGroup, p: int) -> bool:
    """G has a normal Sylow p-subgroup."""
    return p_core(G, p).order() == prime_part(G.order(), [p])


def p_closed_soluble(p: int) -> FormationDescriptor:
    return FormationDescriptor(f"PClosedSol:{p}", lambda G: is_soluble(G) and is_p_closed(G, p), {"p": p})


def p_closed_soluble_bounded(p: int, k: int) -> FormationDescriptor:
    """p-closed soluble groups of Fitting height at most k."""

    def member(G: PermutationGroup) -> bool:
        return is_soluble(G) and is_p_closed(G, p) and fitting_height(G) <= k

    return FormationDescriptor(f"PClosedSolH:{p}:{k}", member, {"p": p, "k": k})


def parse_formation(spec: str) -> FormationDescriptor:
    """Parse `N`, `Nsigma:<sigma>`, `PClosedSol:<p>` or `PClosedSolH:<p>:<k>`."""
    text = spec.strip()
    head, _, rest = text.partition(':')
    try:
        if head == "N" and not rest:
            return nilpotent_formation()
        if head == "Nsigma" and rest:
            return sigma_nilpotent_formation(SigmaPartition.parse(rest))
        if head == "PClosedSol" and rest:
            return p_closed_soluble(_prime(rest))
        if head == "PClosedSolH" and rest:
            p_text, _, k_text = rest.partition(':')
            k = int(k_text)
            if k < 0:
                raise ValueError
            return p_closed_soluble_bounded(_prime(p_text), k)
    except ValueError:
        pass
    raise ContractViolationError(f"unknown formation {spec!r}")


def _prime(text: str) -> int:
    p = int(text)
    if not isprime(p):
        raise ContractViolationError(f"{p} is not prime")
    return p


def formation_membership(G: PermutationGroup, formation: FormationDescriptor) -> bool:
    return formation.member(G)


def residual(G: PermutationGroup, formation: FormationDescriptor, general: bool = False) -> PermutationGroup:
    """
    The smallest normal subgroup with quotient in the formation.

    Nilpotent residuals use the lower central series unless `general` is set;
    everything else intersects the qualifying normal subgroups.
    """
    if formation.name == "N" and not general:
        return lower_central_series(G)[-1]
    return G.memo(("residual", formation.name), lambda: _residual_by_normal_subgroups(G, formation))


def _residual_by_normal_subgroups(G: PermutationGroup, formation: FormationDescriptor) -> PermutationGroup:
    table = G.table()
    candidates = normal_subsets(G)
    qualifying = [N for N in candidates if formation.member(quotient(G, table.group_of(N)).carrier)]
    result = frozenset.intersection(*qualifying)
    if result not in qualifying:
        raise ContractViolationError(f"{formation.name} is not closed under subdirect products on {G.label()}")
    logger.debug(f"{formation.name}-residual of {G.label()}: order {len(result)} from {len(qualifying)} qualifying")
    return table.group_of(result)


@dataclass(frozen=True)
class NLengths:
    n_frak: Length
    n_sigma: Length


def n_lengths(G: PermutationGroup, formation: FormationDescriptor, sigma: SigmaPartition,
              residual_group: Optional[PermutationGroup] = None) -> NLengths:
    """Fitting height and sigma-nilpotent length of the formation residual."""
    R = residual_group if residual_group is not None else residual(G, formation)
    return NLengths(n_frak=fitting_height(R), n_sigma=sigma_nilpotent_length(R, sigma))


# Residual series on stabilizer chains only. These are what the chain
# construction uses once its groups are too large for element tables.

def pi_part(x: Permutation, primes: Iterable[int]) -> Permutation:
    """The pi-part of x, the power of x whose order is the pi-part of |x|."""
    m = x.order()
    a = prime_part(m, primes)
    b = m // a
    if a == 1:
        return x ** 0
    return x ** (b * pow(b, -1, a))


def pi_generated_subgroup(G: PermutationGroup, primes: Iterable[int]) -> PermutationGroup:
    """
    The subgroup generated by the pi-elements of a soluble G.

    With L the join of G' and the pi-parts of the generators, G/L is an
    abelian pi'-group, so both groups have the same pi-generated subgroup;
    the descent stops once G/G' is a pi-group.
    """
    primes = tuple(primes)
    if not is_soluble(G):
        raise ContractViolationError(f"{G.label()} is not soluble")
    current = G
    while True:
        parts = tuple(pi_part(g, primes) for g in current.generators)
        L = PermutationGroup(G.degree, derived_subgroup(current).generators + parts)
        if L.order() == current.order():
            return current
        current = L


def sigma_nilpotent_residual(G: PermutationGroup, sigma: SigmaPartition) -> PermutationGroup:
    """Join of [X_i, X_j] over distinct classes, X_i generated by the sigma_i-elements of soluble G."""
    generated = [pi_generated_subgroup(G, primes) for primes in sigma.classes_meeting(G.order()).values()]
    R = PermutationGroup(G.degree, [])
    for X, Y in combinations(generated, 2):
        R = join(R, commutator_subgroup(G, X, Y))
    return R


def residual_series(G: PermutationGroup, step: Callable[[PermutationGroup], PermutationGroup]) -> List[PermutationGroup]:
    """G = R_0 > R_1 > ... with R_{j+1} = step(R_j), stopping at 1 or at a fixed point."""
    series = [G]
    while not series[-1].is_trivial():
        nxt = step(series[-1])
        if nxt.order() == series[-1].order():
            break
        series.append(nxt)
    return series


def nilpotent_residual_series(G: PermutationGroup) -> List[PermutationGroup]:
    return residual_series(G, lambda H: lower_central_series(H)[-1])


def sigma_nilpotent_residual_series(G: PermutationGroup, sigma: SigmaPartition) -> List[PermutationGroup]:
    return residual_series(G, lambda H: sigma_nilpotent_residual(H, sigma))


def series_length(series: List[PermutationGroup]) -> Length:
    return len(series) - 1 if series[-1].is_trivial() else INFINITE

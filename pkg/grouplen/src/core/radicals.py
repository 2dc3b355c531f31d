"""
Radicals and lengths.

`fitting_radical` is the generic engine: for a Fitting class X the X-radical is
generated by the elements whose normal closure lies in X. Named radicals,
the generalized Fitting subgroup, upper products of functorials, gamma-series
and the named lengths (h, h*, l_sigma, lambda_p) are built on it.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Callable, Dict, FrozenSet, Hashable, Iterable, List, Optional, Sequence, Tuple, Union

from ..config.settings import Config
from ..utils.logger import setup_logger
from .errors import ContractViolationError, ResourceLimitError
from .permcore import PermutationGroup, centralizer, is_subgroup, join
from .structure import (
    SigmaPartition,
    _class_closures,
    composition_factor_orders,
    is_nilpotent,
    is_nonabelian_semisimple,
    is_p_soluble,
    is_pi_group,
    is_sigma_nilpotent,
    is_soluble,
    quotient,
    socle,
)

logger = setup_logger(__name__)


class Infinite(Enum):
    INFINITE = "infinite"

    def __str__(self) -> str:
        return self.value


INFINITE = Infinite.INFINITE

Length = Union[int, Infinite]


def is_finite(length: Length) -> bool:
    return length is not INFINITE


def length_difference(a: Length, b: Length) -> Optional[int]:
    """a - b when both are finite, else None."""
    if a is INFINITE or b is INFINITE:
        return None
    return a - b


def format_length(length: Length) -> Union[int, str]:
    return INFINITE.value if length is INFINITE else length


@dataclass(frozen=True)
class FittingClassPredicate:
    """A Fitting class given by a membership test; `key` identifies it for memoization."""

    name: str
    member: Callable[[PermutationGroup], bool]
    key: Hashable = None

    @property
    def memo_key(self) -> Hashable:
        return ("class", self.key if self.key is not None else self.name)


def nilpotent_class() -> FittingClassPredicate:
    return FittingClassPredicate("nilpotent", is_nilpotent)


def soluble_class() -> FittingClassPredicate:
    return FittingClassPredicate("soluble", is_soluble)


def p_soluble_class(p: int) -> FittingClassPredicate:
    return FittingClassPredicate(f"{p}-soluble", lambda H: is_p_soluble(H, p))


def pi_group_class(primes: Iterable[int]) -> FittingClassPredicate:
    wanted = tuple(sorted(set(int(p) for p in primes)))
    return FittingClassPredicate("{" + ",".join(map(str, wanted)) + "}-groups",
                                 lambda H: is_pi_group(H, wanted), key=("pi", wanted))


def p_group_class(p: int) -> FittingClassPredicate:
    return pi_group_class([p])


def sigma_nilpotent_class(sigma: SigmaPartition) -> FittingClassPredicate:
    return FittingClassPredicate(f"sigma-nilpotent[{sigma.spec()}]", lambda H: is_sigma_nilpotent(H, sigma))


def composition_class(orders: Iterable[int]) -> FittingClassPredicate:
    """Groups all of whose composition factors have an order in `orders`."""
    allowed = frozenset(int(n) for n in orders)
    spec = ",".join(str(n) for n in sorted(allowed))
    return FittingClassPredicate(f"J[{spec}]", lambda H: set(composition_factor_orders(H)) <= allowed, key=("J", spec))


def fitting_radical(G: PermutationGroup, fitting_class: FittingClassPredicate, cap: Optional[int] = None) -> PermutationGroup:
    """The largest normal subgroup of G lying in the given Fitting class."""
    table = G.table(cap)

    def build() -> PermutationGroup:
        result: FrozenSet[int] = frozenset({0})
        for rep, closure in sorted(_class_closures(G).items()):
            if rep == 0 or closure <= result:
                continue
            candidate = G.memo(("closure_group", rep), lambda: table.group_of(closure))
            if fitting_class.member(candidate):
                result = table.closure(sorted(closure), start=result)
        return table.group_of(result, name=f"O_{fitting_class.name}")

    return G.memo(fitting_class.memo_key, build)


def fitting_subgroup(G: PermutationGroup) -> PermutationGroup:
    return fitting_radical(G, nilpotent_class())


def soluble_radical(G: PermutationGroup) -> PermutationGroup:
    if is_soluble(G):
        return G
    return fitting_radical(G, soluble_class())


def p_soluble_radical(G: PermutationGroup, p: int) -> PermutationGroup:
    if is_p_soluble(G, p):
        return G
    return fitting_radical(G, p_soluble_class(p))


def pi_core(G: PermutationGroup, primes: Iterable[int]) -> PermutationGroup:
    """O_pi(G): the largest normal pi-subgroup."""
    return fitting_radical(G, pi_group_class(primes))


def p_core(G: PermutationGroup, p: int) -> PermutationGroup:
    return fitting_radical(G, p_group_class(p))


def sigma_fitting(G: PermutationGroup, sigma: SigmaPartition) -> PermutationGroup:
    """F_sigma(G): the largest normal sigma-nilpotent subgroup."""
    return fitting_radical(G, sigma_nilpotent_class(sigma))


def composition_radical(G: PermutationGroup, orders: Iterable[int]) -> PermutationGroup:
    return fitting_radical(G, composition_class(orders))


def generalized_fitting(G: PermutationGroup) -> PermutationGroup:
    """F*(G) = F(G)E(G), the preimage of the socle of C_G(F)F/F."""

    def build() -> PermutationGroup:
        F = fitting_subgroup(G)
        C = centralizer(G, F)
        Q = quotient(G, F)
        H = Q.image(join(C, F))
        result = Q.pull_back(socle(H))
        logger.debug(f"F*({G.label()}): |F| = {F.order()}, |F*| = {result.order()}")
        return result

    return G.memo("generalized_fitting", build)


@dataclass(frozen=True)
class Functorial:
    """A characteristic-subgroup valued function on groups."""

    name: str
    evaluate: Callable[[PermutationGroup], PermutationGroup]
    key: Hashable = None

    @property
    def memo_key(self) -> Hashable:
        return ("functorial", self.key if self.key is not None else self.name)

    def __call__(self, G: PermutationGroup) -> PermutationGroup:
        return G.memo(self.memo_key, lambda: self.evaluate(G))

    def __str__(self) -> str:
        return self.name


def trivial_functorial() -> Functorial:
    return Functorial("1", lambda G: PermutationGroup(G.degree, []))


def fitting_functorial() -> Functorial:
    return Functorial("F", fitting_subgroup)


def generalized_fitting_functorial() -> Functorial:
    return Functorial("Fstar", generalized_fitting)


def sigma_fitting_functorial(sigma: SigmaPartition) -> Functorial:
    return Functorial("Fsigma", lambda G: sigma_fitting(G, sigma), key=("Fsigma", sigma.spec()))


def sigma_core_functorial(sigma: SigmaPartition, p: int) -> Functorial:
    """O_{sigma_i} for the sigma-class sigma_i containing p."""
    cls = sigma.class_of(p)

    def evaluate(G: PermutationGroup) -> PermutationGroup:
        primes = sigma.classes_meeting(G.order()).get(cls, ())
        return pi_core(G, primes)

    return Functorial(f"Osigma:{p}", evaluate, key=("Osigma", sigma.spec(), cls))


def p_core_functorial(p: int) -> Functorial:
    return Functorial(f"Op:{p}", lambda G: p_core(G, p))


def soluble_radical_functorial() -> Functorial:
    return Functorial("RadSol", soluble_radical)


def p_soluble_radical_functorial(p: int) -> Functorial:
    return Functorial(f"RadPSol:{p}", lambda G: p_soluble_radical(G, p))


def composition_radical_functorial(orders: Sequence[int]) -> Functorial:
    spec = ",".join(str(n) for n in sorted(set(orders)))
    return Functorial(f"OJ:{spec}", lambda G: composition_radical(G, orders))


def upper_product(outer: Functorial, inner: Functorial) -> Functorial:
    """outer applied first; inner evaluated on G/outer(G) and pulled back."""

    def evaluate(G: PermutationGroup) -> PermutationGroup:
        bottom = outer(G)
        Q = quotient(G, bottom)
        return Q.pull_back(inner(Q.carrier))

    return Functorial(f"{outer.name}*{inner.name}", evaluate, key=("upper", outer.memo_key, inner.memo_key))


def lambda_functorial(p: int) -> Functorial:
    rho = p_soluble_radical_functorial(p)
    return upper_product(upper_product(rho, generalized_fitting_functorial()), rho)


def soluble_radical_sandwich() -> Functorial:
    """RadSol * Fstar * RadSol."""
    rho = soluble_radical_functorial()
    return upper_product(upper_product(rho, generalized_fitting_functorial()), rho)


@dataclass(frozen=True)
class GammaSeries:
    terms: Tuple[PermutationGroup, ...]
    length: Length
    stalled_at: Optional[int] = None

    def orders(self) -> List[int]:
        return [T.order() for T in self.terms]


def gamma_series(G: PermutationGroup, gamma: Functorial, max_steps: Optional[int] = None) -> GammaSeries:
    """1 = T_0 <= T_1 <= ... with T_{i+1}/T_i = gamma(G/T_i)."""
    limit = max_steps if max_steps is not None else Config.GAMMA_MAX_STEPS
    if limit < 1:
        raise ContractViolationError("max_steps must be at least 1")

    def build() -> GammaSeries:
        target = G.order()
        current = PermutationGroup(G.degree, [])
        terms = [current]
        for _ in range(limit):
            if current.order() == target:
                break
            Q = quotient(G, current)
            nxt = Q.pull_back(gamma(Q.carrier))
            if nxt.order() == current.order():
                logger.debug(f"{gamma.name}-series of {G.label()} stalls at order {current.order()}")
                return GammaSeries(tuple(terms), INFINITE, stalled_at=len(terms) - 1)
            terms.append(nxt)
            current = nxt
        if current.order() != target:
            raise ResourceLimitError("GAMMA_MAX_STEPS", limit, detail=f"{gamma.name}-series of {G.label()}")
        return GammaSeries(tuple(terms), len(terms) - 1)

    return G.memo(("gamma_series", gamma.memo_key, limit), build)


def gamma_length(G: PermutationGroup, gamma: Functorial) -> Length:
    return gamma_series(G, gamma).length


def fitting_height(G: PermutationGroup) -> Length:
    if not is_soluble(G):
        return INFINITE
    return gamma_length(G, fitting_functorial())


def generalized_fitting_height(G: PermutationGroup) -> Length:
    return gamma_length(G, generalized_fitting_functorial())


def sigma_nilpotent_length(G: PermutationGroup, sigma: SigmaPartition) -> Length:
    return gamma_length(G, sigma_fitting_functorial(sigma))


def nonsoluble_length(G: PermutationGroup, p: int = 2) -> Length:
    """lambda_p(G): 0 for p-soluble G, else the length for RadPSol * Fstar * RadPSol."""
    if is_p_soluble(G, p):
        return 0
    return gamma_length(G, lambda_functorial(p))


@dataclass(frozen=True)
class NamedLengths:
    h: Length
    h_star: Length
    l_sigma: Length
    lambda_p: Dict[int, Length]
    lam: Length


def named_lengths(G: PermutationGroup, sigma: SigmaPartition, primes: Sequence[int]) -> NamedLengths:
    lambdas = {int(p): nonsoluble_length(G, p) for p in primes}
    lam = lambdas[2] if 2 in lambdas else nonsoluble_length(G, 2)
    return NamedLengths(
        h=fitting_height(G),
        h_star=generalized_fitting_height(G),
        l_sigma=sigma_nilpotent_length(G, sigma),
        lambda_p=lambdas,
        lam=lam,
    )


@dataclass(frozen=True)
class LambdaFactor:
    """A factor produced by an F* step of the lambda series."""

    order: int
    semisimple: bool
    components_divisible: bool


@dataclass(frozen=True)
class LambdaSeries:
    prime: int
    terms: Tuple[PermutationGroup, ...]
    factors: Tuple[LambdaFactor, ...]

    @property
    def length(self) -> int:
        return len(self.factors)

    @property
    def all_components_divisible(self) -> bool:
        return all(f.components_divisible for f in self.factors)


def lambda_series(G: PermutationGroup, p: int, max_steps: Optional[int] = None) -> LambdaSeries:
    """
    The refined series 1 <= rho <= F*-step <= rho <= ... for rho the p-soluble
    radical. Each F*-step factor is recorded as semisimple or not and whether
    its simple components all have order divisible by p.
    """
    limit = max_steps if max_steps is not None else Config.GAMMA_MAX_STEPS
    rho = p_soluble_radical_functorial(p)
    fstar = generalized_fitting_functorial()
    target = G.order()
    current = PermutationGroup(G.degree, [])
    terms = [current]
    factors: List[LambdaFactor] = []
    for _ in range(limit):
        Q = quotient(G, current)
        top = Q.pull_back(rho(Q.carrier))
        if top.order() != current.order():
            terms.append(top)
        if top.order() == target:
            return LambdaSeries(p, tuple(terms), tuple(factors))
        Q = quotient(G, top)
        K = fstar(Q.carrier)
        factors.append(LambdaFactor(
            order=K.order(),
            semisimple=is_nonabelian_semisimple(K),
            components_divisible=all(n % p == 0 for n in composition_factor_orders(K)),
        ))
        current = Q.pull_back(K)
        terms.append(current)
        if current.order() == target:
            return LambdaSeries(p, tuple(terms), tuple(factors))
    raise ResourceLimitError("GAMMA_MAX_STEPS", limit, detail=f"lambda_{p}-series of {G.label()}")


def fstar_contained(G: PermutationGroup, gamma: Functorial) -> Optional[bool]:
    """Whether F*(G) <= gamma(G); None when the gamma-length of G is infinite."""
    if not is_finite(gamma_length(G, gamma)):
        return None
    return is_subgroup(generalized_fitting(G), gamma(G))

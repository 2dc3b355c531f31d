"""
Iterated affine extensions whose maximal subgroup keeps residual length n.

G_1 is cyclic of order p. Each stage picks a prime p_i, a faithful irreducible
G_i-module V_i over F_{p_i} and sets G_{i+1} = V_i semidirect G_i. The
subgroup M_n generated by the translation parts is maximal in G_{n+1}, is the
residual of G_{n+1} for p-closed soluble groups, and has sigma-nilpotent
length n.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, List, Optional, Tuple

from sympy import isprime, primerange

from ..config.settings import Config
from ..utils.logger import setup_logger
from .errors import ChainVerificationError, ContractViolationError, ExistenceFailure
from .formations import (
    FormationDescriptor,
    n_lengths,
    nilpotent_residual_series,
    p_closed_soluble,
    p_closed_soluble_bounded,
    residual,
    series_length,
    sigma_nilpotent_residual_series,
)
from .modrep import GModule, affine_semidirect, faithful_irreducible
from .named_groups import cyclic_group
from .permcore import PermutationGroup, centralizer, is_normal, same_group
from .radicals import Length, length_difference, sigma_fitting, sigma_nilpotent_length
from .structure import (
    SigmaPartition,
    has_unique_chief_series,
    is_soluble,
    minimal_normal_subgroups,
    prime_power_base,
    quotient,
)
from .subgroups import is_maximal

logger = setup_logger(__name__)

COMPUTED = "computed"
CERTIFIED = "certified"


@dataclass(frozen=True)
class ChainFact:
    stage: int
    fact: str
    expected: Any
    observed: Any
    mode: str

    @property
    def holds(self) -> bool:
        return self.expected == self.observed


@dataclass
class ChainResult:
    sigma: SigmaPartition
    p: int
    n: int
    seed: int
    primes: Tuple[int, ...]
    groups: List[PermutationGroup]
    modules: List[GModule]
    maximal_subgroups: List[PermutationGroup]
    socles: List[PermutationGroup] = field(default_factory=list)
    facts: List[ChainFact] = field(default_factory=list)
    difference: Optional[int] = None

    @property
    def group(self) -> PermutationGroup:
        return self.groups[-1]

    @property
    def maximal(self) -> PermutationGroup:
        return self.maximal_subgroups[-1]

    @property
    def dimensions(self) -> Tuple[int, ...]:
        return tuple(V.dimension for V in self.modules)

    @property
    def stages(self) -> int:
        return len(self.modules)

    def block_sizes(self, stage: Optional[int] = None) -> List[int]:
        """Generator counts of G_{stage+1}: translations of V_stage, ..., V_1, then the cyclic generator."""
        stage = self.stages if stage is None else stage
        return list(reversed(self.dimensions[:stage])) + [1]


def _record(result: ChainResult, stage: int, fact: str, expected: Any, observed: Any, mode: str) -> None:
    entry = ChainFact(stage, fact, expected, observed, mode)
    result.facts.append(entry)
    if not entry.holds:
        raise ChainVerificationError(stage, fact, f"expected {expected!r}, observed {observed!r} ({mode})")
    logger.debug(f"Stage {stage}: {fact} = {observed!r} ({mode})")


def _direct(G: PermutationGroup) -> bool:
    return G.order() <= Config.CHAIN_DIRECT_CHECK_ORDER


def select_chain_prime(G: PermutationGroup, p: int, previous: int, sigma: SigmaPartition,
                       seed: Optional[int] = None) -> Tuple[int, GModule]:
    """Smallest admissible prime whose smallest faithful irreducible module fits the degree cap."""
    for q in primerange(2, Config.CHAIN_PRIME_BOUND + 1):
        if q == p or sigma.same_class(q, previous):
            continue
        try:
            V = faithful_irreducible(G, q, seed)
        except ExistenceFailure:
            logger.debug(f"No faithful irreducible {G.label()}-module over F_{q}")
            continue
        if q ** V.dimension > Config.DEGREE_CAP:
            logger.info(f"Skipping F_{q} for {G.label()}: {q}^{V.dimension} points exceed DEGREE_CAP")
            continue
        return q, V
    raise ExistenceFailure(f"no admissible prime up to {Config.CHAIN_PRIME_BOUND} for {G.label()}")


def _check_arguments(sigma: SigmaPartition, p: int, n: int) -> None:
    if not isprime(p):
        raise ContractViolationError(f"p must be prime, got {p}")
    if n < 1:
        raise ContractViolationError(f"n must be at least 1, got {n}")
    if all(sigma.same_class(q, p) for q in primerange(2, Config.CHAIN_PRIME_BOUND + 1)):
        raise ContractViolationError(f"sigma {sigma.spec()} has a single class on the primes up to {Config.CHAIN_PRIME_BOUND}")


def counterexample_chain(sigma: SigmaPartition, p: int, n: int, seed: Optional[int] = None) -> ChainResult:
    _check_arguments(sigma, p, n)
    seed = Config.SEED if seed is None else seed
    G = cyclic_group(p)
    G.name = "G1"
    result = ChainResult(sigma=sigma, p=p, n=n, seed=seed, primes=(p,), groups=[G], modules=[], maximal_subgroups=[], socles=[G])
    for i in range(1, n + 1):
        q, V = select_chain_prime(G, p, result.primes[-1], sigma, seed)
        extension = affine_semidirect(V)
        top = extension.group
        top.name = f"G{i + 1}"
        M = PermutationGroup(top.degree, top.generators[:-1], name=f"M{i}")
        result.primes += (q,)
        result.groups.append(top)
        result.modules.append(V)
        result.maximal_subgroups.append(M)
        logger.info(f"Stage {i}: F_{q}^{V.dimension} extension, |G{i + 1}| = {top.order()} on {top.degree} points")
        _verify_stage(result, i, extension.V_image)
        G = top
    _verify_top(result)
    return result


def _verify_stage(result: ChainResult, i: int, V_image: PermutationGroup) -> None:
    top, below, V = result.groups[i], result.groups[i - 1], result.modules[i - 1]
    _record(result, i, "order", below.order() * V.modulus ** V.dimension, top.order(), COMPUTED)
    _record(result, i, "primes_admissible", True,
            result.primes[i] != result.p and not result.sigma.same_class(result.primes[i], result.primes[i - 1]), COMPUTED)
    _record(result, i, "module_faithful", True, V.is_faithful(), COMPUTED)
    if _direct(top):
        minimal = minimal_normal_subgroups(top)
        _record(result, i, "unique_minimal_normal", True,
                len(minimal) == 1 and same_group(minimal[0], V_image), COMPUTED)
        _record(result, i, "fsigma_equals_v", True, same_group(sigma_fitting(top, result.sigma), V_image), COMPUTED)
    else:
        # an irreducible normal subgroup equal to its centralizer is the only minimal normal subgroup
        irreducible = V.certificate is not None or V.dimension == 1
        _record(result, i, "unique_minimal_normal", True,
                is_normal(top, V_image) and irreducible and same_group(centralizer(top, V_image), V_image), CERTIFIED)
        _record(result, i, "fsigma_equals_v", True, _sigma_class_free(result, i), CERTIFIED)
    result.socles.append(V_image)


def _sigma_class_free(result: ChainResult, i: int) -> bool:
    """
    G_i has no nontrivial normal subgroup inside the sigma-class of p_i.

    Its unique minimal normal subgroup is a q-group for a prime q outside that
    class, and every nontrivial normal subgroup contains it. Then O_sigma(G_{i+1})
    is V_i for the class of p_i and trivial for the other classes.
    """
    base = prime_power_base(result.socles[i - 1].order())
    return base is not None and not result.sigma.same_class(base, result.primes[i])


def _translation_part(result: ChainResult, stage: int, levels: int) -> PermutationGroup:
    """Subgroup of G_{stage+1} generated by the translations of V_stage, ..., V_{stage-levels+1}."""
    G = result.groups[stage]
    return PermutationGroup(G.degree, G.generators[:sum(result.block_sizes(stage)[:levels])])


def _residual_is_maximal(result: ChainResult, stage: int, formation: FormationDescriptor) -> bool:
    """
    M_stage is the formation residual of G_{stage+1}.

    The normal subgroups form a chain, so it is enough that the quotient by M
    lies in the formation and the quotient by the next chief term does not.
    """
    G, M = result.groups[stage], result.maximal_subgroups[stage - 1]
    K = _translation_part(result, stage, stage - 1)
    return formation.member(quotient(G, M).carrier) and not formation.member(quotient(G, K).carrier)


def _stage_lengths(result: ChainResult, stage: int) -> Tuple[Length, Length]:
    """n_sigma(G_{stage+1}) and n_sigma(M_stage) from residual series on stabilizer chains."""
    M = result.maximal_subgroups[stage - 1]
    if not _residual_is_maximal(result, stage, p_closed_soluble(result.p)):
        raise ChainVerificationError(stage, "residual_is_maximal", "cannot read n_sigma off M")
    top = series_length(sigma_nilpotent_residual_series(M, result.sigma))
    if not is_soluble(M) or M.order() % result.p == 0:
        raise ChainVerificationError(stage, "n_sigma_maximal", f"M{stage} is not a soluble {result.p}'-group")
    # a soluble p'-group is p-closed, so its residual is trivial
    return top, 0


def _verify_top(result: ChainResult) -> None:
    n, G, M = result.n, result.group, result.maximal
    formation = p_closed_soluble(result.p)
    _record(result, n, "maximal", True, is_maximal(G, M), COMPUTED)
    if _direct(G):
        _record(result, n, "unique_chief_series", True, has_unique_chief_series(G), COMPUTED)
        R = residual(G, formation)
        _record(result, n, "residual_is_maximal", True, same_group(R, M), COMPUTED)
        _record(result, n, "l_sigma_maximal", n, sigma_nilpotent_length(M, result.sigma), COMPUTED)
        top_lengths = n_lengths(G, formation, result.sigma, residual_group=R)
        low_lengths = n_lengths(M, formation, result.sigma)
        _record(result, n, "n_sigma_group", n, top_lengths.n_sigma, COMPUTED)
        _record(result, n, "n_sigma_maximal", 0, low_lengths.n_sigma, COMPUTED)
        result.difference = length_difference(top_lengths.n_sigma, low_lengths.n_sigma)
    else:
        _record(result, n, "unique_chief_series", True,
                all(f.holds for f in result.facts if f.fact == "unique_minimal_normal"), CERTIFIED)
        _record(result, n, "residual_is_maximal", True, _residual_is_maximal(result, n, formation), CERTIFIED)
        top, low = _stage_lengths(result, n)
        _record(result, n, "l_sigma_maximal", n, top, CERTIFIED)
        _record(result, n, "n_sigma_group", n, top, CERTIFIED)
        _record(result, n, "n_sigma_maximal", 0, low, CERTIFIED)
        result.difference = length_difference(top, low)
    _record(result, n, "difference", n, result.difference, COMPUTED if _direct(G) else CERTIFIED)


@dataclass(frozen=True)
class FinalRemarks:
    k: int
    n_frak_group: Length
    n_frak_maximal: Length
    difference: Optional[int]
    mode: str


def final_remarks_example(result: ChainResult, k: Optional[int] = None) -> FinalRemarks:
    """
    Residual Fitting heights for p-closed soluble groups of Fitting height at most k.

    G/M_n is cyclic of order p and G modulo the next chief term is not p-closed,
    so the residual of G is M_n. M_n is a p'-group, so its residual is the k-th
    term of its nilpotent residual series.
    """
    k = Config.PCLOSED_HEIGHT_BOUND if k is None else k
    if k < 1:
        raise ContractViolationError("height bound k must be positive")
    formation = p_closed_soluble_bounded(result.p, k)
    G, M = result.group, result.maximal
    if _direct(G):
        top = n_lengths(G, formation, result.sigma).n_frak
        low = n_lengths(M, formation, result.sigma).n_frak
        return FinalRemarks(k, top, low, length_difference(top, low), COMPUTED)
    if not _residual_is_maximal(result, result.stages, formation):
        raise ChainVerificationError(result.stages, "residual_is_maximal", f"for Fitting height at most {k}")
    series = nilpotent_residual_series(M)
    top = series_length(series)
    low = series_length(series[min(k, len(series) - 1):])
    return FinalRemarks(k, top, low, length_difference(top, low), CERTIFIED)


def stage_differences(result: ChainResult) -> List[Tuple[int, Optional[int], str]]:
    """(i, n_sigma(G_{i+1}) - n_sigma(M_i), mode) for every stage of the chain."""
    formation = p_closed_soluble(result.p)
    rows = []
    for i in range(1, result.stages + 1):
        G, M = result.groups[i], result.maximal_subgroups[i - 1]
        if i == result.stages and result.difference is not None:
            rows.append((i, result.difference, COMPUTED if _direct(G) else CERTIFIED))
        elif _direct(G):
            top = n_lengths(G, formation, result.sigma).n_sigma
            low = n_lengths(M, formation, result.sigma).n_sigma
            rows.append((i, length_difference(top, low), COMPUTED))
        else:
            top, low = _stage_lengths(result, i)
            rows.append((i, length_difference(top, low), CERTIFIED))
    return rows

"""
Verification suites over a corpus.

For every group within the caps and every conjugacy type of maximal
subgroups the length differences are checked against their bounds. Radical
axioms, the length inequalities for normal subgroups and brute-force oracles
run once per group. Cap violations turn into SKIPPED records that name the cap.
"""

from __future__ import annotations

import time
from collections import Counter, defaultdict
from concurrent.futures import ProcessPoolExecutor
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from ..config.settings import Config
from ..core.chain import counterexample_chain
from ..core.errors import ChainVerificationError, ContractViolationError, ExistenceFailure, GroupLenError, ResourceLimitError
from ..core.formations import (
    FormationDescriptor,
    n_lengths,
    nilpotent_formation,
    p_closed_soluble,
    p_closed_soluble_bounded,
    residual,
    sigma_nilpotent_formation,
)
from ..core.permcore import PermutationGroup, centralizer, intersection, is_subgroup, same_group
from ..core.radicals import (
    INFINITE,
    Functorial,
    Length,
    fitting_height,
    fstar_contained,
    gamma_length,
    length_difference,
    named_lengths,
    soluble_radical_sandwich,
)
from ..core.structure import (
    SigmaPartition,
    describe_subgroup,
    is_nilpotent,
    is_p_soluble,
    is_pi_group,
    is_sigma_nilpotent,
    is_sigma_soluble,
    is_soluble,
    normal_subsets,
    quotient,
)
from ..core.subgroups import conjugacy_types, maximal_subgroup_subsets
from ..utils.logger import setup_logger
from .corpus import GroupSpec
from .registry import parse_functorial
from .reports import CheckRecord, Verdict, VerificationReport, length_value, summarize

logger = setup_logger(__name__)

# Radicals of Q-closed Fitting classes of soluble groups
COMPOSITION_RADICALS = ("OJ:2", "OJ:2,3", "OJ:3,5")


def _as_number(length: Length) -> float:
    return float("inf") if length is INFINITE else float(length)


class GroupVerifier:
    """All checks for one corpus group; records come out in a fixed order."""

    def __init__(self, spec: GroupSpec, sigma: SigmaPartition, primes: Sequence[int]):
        self.spec = spec
        self.sigma = sigma
        self.primes = [int(p) for p in primes]
        self.records: List[CheckRecord] = []
        self.differences: Dict[str, Counter] = defaultdict(Counter)
        self.G: Optional[PermutationGroup] = None

    # bookkeeping

    def _record(self, check_id: str, passed: bool, values: Dict[str, Any], maximal: Optional[str] = None,
                class_size: Optional[int] = None, detail: Optional[str] = None, timing: Optional[float] = None) -> None:
        verdict = Verdict.PASS if passed else Verdict.FAIL
        if not passed:
            logger.error(f"{self.spec.name}: {check_id} FAILED {values}")
        self.records.append(CheckRecord(
            check_id=check_id, group=self.spec.name, maximal_subgroup=maximal, class_size=class_size,
            values=values, verdict=verdict, detail=detail,
            timing=timing if Config.RECORD_TIMING else None,
        ))

    def _guarded(self, check_id: str, run: Callable[[], None]) -> None:
        """Run a suite; a cap violation becomes one SKIPPED record carrying the cap."""
        try:
            run()
        except ResourceLimitError as e:
            logger.warning(f"{self.spec.name}: {check_id} skipped ({e})")
            self.records.append(CheckRecord(
                check_id=check_id, group=self.spec.name, verdict=Verdict.SKIPPED,
                cap=e.cap_name, detail=str(e),
            ))

    def _difference(self, check_id: str, stat: str, g_length: Length, m_length: Length,
                    allowed: Callable[[int], bool], maximal: str, class_size: int) -> None:
        d = length_difference(g_length, m_length)
        if d is None:
            return
        self.differences[stat][d] += 1
        values = {"G": length_value(g_length), "M": length_value(m_length), "difference": d}
        self._record(check_id, allowed(d), values, maximal, class_size)

    # suites

    def run(self) -> None:
        logger.info(f"Verifying {self.spec.name}")
        try:
            self.G = self.spec.to_group()
        except GroupLenError as e:
            self.records.append(CheckRecord(check_id="load", group=self.spec.name, verdict=Verdict.FAIL, detail=str(e)))
            return
        self._guarded("group", self._group_suite)
        self._guarded("axioms", self._axiom_suite)
        self._guarded("oracle", self._oracle_suite)
        self._guarded("maximal", self._maximal_suite)

    def _group_suite(self) -> None:
        G = self.G
        start = time.perf_counter()
        fstar = parse_functorial("Fstar")(G)
        self._record("fstar.self_centralizing", is_subgroup(centralizer(G, fstar), fstar),
                     {"fstar_order": fstar.order()}, timing=time.perf_counter() - start)
        if is_soluble(G) and not G.is_trivial():
            h = fitting_height(G)
            R = residual(G, nilpotent_formation())
            self._record("nlength.residual_height", fitting_height(R) == h - 1,
                         {"h": h, "h_residual": length_value(fitting_height(R))})
        for spec in COMPOSITION_RADICALS:
            gamma = parse_functorial(spec, self.sigma)
            contained = fstar_contained(G, gamma)
            self._record(f"composition.fstar_contained.{spec}", contained is not False,
                         {"h_gamma": length_value(gamma_length(G, gamma)), "fstar_contained": contained})

    def _radicals(self) -> Dict[str, Functorial]:
        names = ["F", "Fstar", "Fsigma", "RadSol"]
        names += [f"Op:{p}" for p in self.primes] + [f"RadPSol:{p}" for p in self.primes]
        names += list(COMPOSITION_RADICALS)
        return {name: parse_functorial(name, self.sigma) for name in names}

    def _axiom_suite(self) -> None:
        G = self.G
        table = G.table()
        normals = [table.group_of(N) for N in normal_subsets(G)]
        kurosh_amitsur = {"RadSol", *COMPOSITION_RADICALS}
        kurosh_amitsur |= {f"Op:{p}" for p in self.primes} | {f"RadPSol:{p}" for p in self.primes}
        quotients = {i: quotient(G, N) for i, N in enumerate(normals)}
        for name, gamma in self._radicals().items():
            top = gamma(G)
            p1 = [i for i, Q in quotients.items() if not is_subgroup(Q.image(top), gamma(Q.carrier))]
            p2 = [i for i, N in enumerate(normals) if not same_group(intersection(G, top, N), gamma(N))]
            self._record(f"axiom.P1.{name}", not p1, {"pairs": len(normals), "violations": p1})
            self._record(f"axiom.P2.{name}", not p2, {"pairs": len(normals), "violations": p2})
            if name in kurosh_amitsur:
                Q = quotient(G, top)
                self._record(f"axiom.P3.{name}", gamma(Q.carrier).is_trivial(), {"radical_order": top.order()})
                below = [i for i, N in enumerate(normals) if is_subgroup(N, top)]
                lifted = [i for i in below if not same_group(quotients[i].pull_back(gamma(quotients[i].carrier)), top)]
                self._record(f"radical.quotient_lift.{name}", not lifted, {"pairs": len(below), "violations": lifted})
        for name in ("F", "Fstar", "Fsigma"):
            gamma = parse_functorial(name, self.sigma)
            h = gamma_length(G, gamma)
            violations = []
            for i, N in enumerate(normals):
                h_n = gamma_length(N, gamma)
                h_q = gamma_length(quotients[i].carrier, gamma)
                low = max(_as_number(h_n), _as_number(h_q))
                if not low <= _as_number(h) <= _as_number(h_n) + _as_number(h_q):
                    violations.append(i)
            self._record(f"normal.length_bounds.{name}", not violations,
                         {"h": length_value(h), "pairs": len(normals), "violations": violations})

    def _oracle_suite(self) -> None:
        G = self.G
        table = G.table()
        normals = normal_subsets(G)
        classes: List[Tuple[str, Callable[[PermutationGroup], bool]]] = [
            ("F", is_nilpotent),
            ("Fsigma", lambda H: is_sigma_nilpotent(H, self.sigma)),
            ("RadSol", is_soluble),
        ]
        classes += [(f"Op:{p}", lambda H, p=p: is_pi_group(H, [p])) for p in self.primes]
        classes += [(f"RadPSol:{p}", lambda H, p=p: is_p_soluble(H, p)) for p in self.primes]
        for name, member in classes:
            qualifying = [N for N in normals if member(table.group_of(N))]
            largest = max(qualifying, key=len)
            engine = table.subset_of(parse_functorial(name, self.sigma)(G))
            unique = all(N <= largest for N in qualifying)
            self._record(f"oracle.{name}", unique and engine == largest,
                         {"engine_order": len(engine), "oracle_order": len(largest)})

    def _maximal_suite(self) -> None:
        G = self.G
        if G.is_trivial():
            self._record("maximal.vacuous", True, {"maximal_types": 0})
            return
        table = G.table()
        types = conjugacy_types(G, maximal_subgroup_subsets(G))
        soluble = is_soluble(G)
        sigma_soluble = is_sigma_soluble(G, self.sigma)
        lengths_g = named_lengths(G, self.sigma, self.primes)
        sandwich = soluble_radical_sandwich()
        composition = [parse_functorial(spec, self.sigma) for spec in COMPOSITION_RADICALS]
        k = Config.PCLOSED_HEIGHT_BOUND
        formations = {
            "nsigma": sigma_nilpotent_formation(self.sigma),
            "nfrak": nilpotent_formation(),
            "bounded": p_closed_soluble_bounded(2, k),
            "pclosed": p_closed_soluble(2),
        }
        cache: Dict[Tuple[str, int], Any] = {}

        def formation_lengths(H: PermutationGroup, key: str, descriptor: FormationDescriptor, slot: int):
            if (key, slot) not in cache:
                cache[(key, slot)] = n_lengths(H, descriptor, self.sigma)
            return cache[(key, slot)]

        for index, members in enumerate(types):
            start = time.perf_counter()
            M = table.group_of(members[0], name=f"{self.spec.name}.M{index}")
            label = describe_subgroup(M)
            size = len(members)
            lengths_m = named_lengths(M, self.sigma, self.primes)
            self._difference("maximal.h_star", "h_star", lengths_g.h_star, lengths_m.h_star, lambda d: d <= 2, label, size)
            for p in self.primes:
                self._difference(f"maximal.lambda_{p}", f"lambda_{p}", lengths_g.lambda_p[p], lengths_m.lambda_p[p],
                                 lambda d: d <= 1, label, size)
            self._difference("maximal.lambda", "lambda", lengths_g.lam, lengths_m.lam, lambda d: d <= 1, label, size)
            self._difference("maximal.soluble_radical_sandwich", "gamma_sandwich", gamma_length(G, sandwich),
                             gamma_length(M, sandwich), lambda d: d <= 1, label, size)
            for spec, gamma in zip(COMPOSITION_RADICALS, composition):
                self._difference(f"maximal.composition.{spec}", spec, gamma_length(G, gamma), gamma_length(M, gamma),
                                 lambda d: d <= 2, label, size)
            if soluble:
                self._difference("maximal.h", "h", lengths_g.h, lengths_m.h, lambda d: d in (0, 1, 2), label, size)
                nfrak_g = formation_lengths(G, "nfrak", formations["nfrak"], -1).n_frak
                nfrak_m = formation_lengths(M, "nfrak", formations["nfrak"], index).n_frak
                self._difference("maximal.n_nilpotent", "n_N", nfrak_g, nfrak_m, lambda d: d in (0, 1, 2), label, size)
                bounded_g = formation_lengths(G, "bounded", formations["bounded"], -1).n_frak
                bounded_m = formation_lengths(M, "bounded", formations["bounded"], index).n_frak
                self._difference("maximal.n_pclosed_bounded", f"n_pclosed_h{k}", bounded_g, bounded_m,
                                 lambda d: d <= k + 1, label, size)
                observed = length_difference(formation_lengths(G, "pclosed", formations["pclosed"], -1).n_sigma,
                                             formation_lengths(M, "pclosed", formations["pclosed"], index).n_sigma)
                if observed is not None:
                    self.differences["n_sigma_pclosed"][observed] += 1
            if sigma_soluble:
                self._difference("maximal.l_sigma", "l_sigma", lengths_g.l_sigma, lengths_m.l_sigma,
                                 lambda d: d in (0, 1, 2), label, size)
                self._difference("maximal.n_sigma_nilpotent", "n_sigma_Nsigma",
                                 formation_lengths(G, "nsigma", formations["nsigma"], -1).n_sigma,
                                 formation_lengths(M, "nsigma", formations["nsigma"], index).n_sigma,
                                 lambda d: d in (0, 1, 2), label, size)
            if Config.RECORD_TIMING:
                logger.debug(f"{self.spec.name} M{index}: {time.perf_counter() - start:.3f}s")


def _verify_group(spec: GroupSpec, sigma: SigmaPartition, primes: Sequence[int]) -> Tuple[List[CheckRecord], Dict[str, Counter]]:
    verifier = GroupVerifier(spec, sigma, primes)
    verifier.run()
    return verifier.records, verifier.differences


def _worker(payload: Tuple[Dict[str, Any], Dict[str, Any], str, List[int]]) -> Tuple[List[Dict[str, Any]], Dict[str, Dict[int, int]]]:
    """Process-pool entry point; arguments and results are plain data."""
    spec_data, settings, sigma_spec, primes = payload
    Config.apply_overrides(settings)
    records, differences = _verify_group(GroupSpec(**spec_data), SigmaPartition.parse(sigma_spec), primes)
    return [r.model_dump() for r in records], {name: dict(c) for name, c in differences.items()}


def _chain_witnesses(sigma: SigmaPartition, max_n: int) -> Tuple[List[CheckRecord], Dict[str, Counter]]:
    records: List[CheckRecord] = []
    differences: Dict[str, Counter] = defaultdict(Counter)
    for n in range(1, max_n + 1):
        check_id = f"chain.n{n}"
        try:
            chain = counterexample_chain(sigma, 2, n)
        except ResourceLimitError as e:
            records.append(CheckRecord(check_id=check_id, group=f"chain_n{n}", verdict=Verdict.SKIPPED,
                                       cap=e.cap_name, detail=str(e)))
            continue
        except ChainVerificationError as e:
            logger.error(f"Chain n = {n}: {e}")
            records.append(CheckRecord(check_id=check_id, group=f"chain_n{n}", verdict=Verdict.FAIL,
                                       values={"stage": e.stage, "fact": e.fact}, detail=str(e)))
            continue
        except (ContractViolationError, ExistenceFailure) as e:
            logger.error(f"Chain n = {n} could not be built: {e}")
            records.append(CheckRecord(check_id=check_id, group=f"chain_n{n}", verdict=Verdict.FAIL, detail=str(e)))
            continue
        differences["n_sigma_pclosed"][chain.difference] += 1
        records.append(CheckRecord(
            check_id=check_id, group=f"chain_n{n}", maximal_subgroup=f"M{n} order {chain.maximal.order()}",
            values={"primes": list(chain.primes), "order": chain.group.order(), "difference": chain.difference},
            verdict=Verdict.PASS if chain.difference == n else Verdict.FAIL,
        ))
    return records, differences


def verify(specs: Sequence[GroupSpec], sigma: Optional[SigmaPartition] = None, primes: Optional[Sequence[int]] = None,
           workers: Optional[int] = None, chain_witnesses: Optional[int] = None) -> VerificationReport:
    """Run every suite on every group; the report is assembled in corpus order."""
    sigma = sigma or SigmaPartition.parse(Config.DEFAULT_SIGMA)
    primes = [int(p) for p in (primes or Config.DEFAULT_PRIMES)]
    workers = workers if workers is not None else Config.VERIFY_WORKERS
    max_n = chain_witnesses if chain_witnesses is not None else Config.CHAIN_WITNESS_MAX_N

    records: List[CheckRecord] = []
    differences: Dict[str, Counter] = defaultdict(Counter)
    if workers > 1:
        settings = Config.snapshot()
        payloads = [(spec.model_dump(), settings, sigma.spec(), primes) for spec in specs]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for dumped, counts in pool.map(_worker, payloads):
                records.extend(CheckRecord(**r) for r in dumped)
                for name, counter in counts.items():
                    differences[name].update(counter)
    else:
        for spec in specs:
            group_records, counts = _verify_group(spec, sigma, primes)
            records.extend(group_records)
            for name, counter in counts.items():
                differences[name].update(counter)

    chain_records, chain_counts = _chain_witnesses(sigma, max_n)
    records.extend(chain_records)
    for name, counter in chain_counts.items():
        differences[name].update(counter)

    config = {key.lower(): value for key, value in sorted(Config.snapshot().items()) if key != "LOG_LEVEL"}
    config.update({"sigma": sigma.spec(), "primes": primes})
    report = VerificationReport(config=config, checks=records, summary=summarize(records, len(specs), differences))
    logger.info(f"Verification finished: {report.summary.passed} passed, {report.summary.failed} failed, "
                f"{report.summary.skipped} skipped")
    return report

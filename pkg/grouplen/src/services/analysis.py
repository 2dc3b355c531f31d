"""Analysis of a single group: structure, radicals, lengths and formation residuals."""

from __future__ import annotations

from dataclasses import asdict
from typing import Callable, Optional, Sequence, TypeVar, Union

from ..config.settings import Config
from ..core.errors import ResourceLimitError
from ..core.formations import n_lengths, parse_formation, residual
from ..core.permcore import PermutationGroup
from ..core.radicals import (
    fitting_subgroup,
    generalized_fitting,
    named_lengths,
    p_core,
    p_soluble_radical,
    sigma_fitting,
    soluble_radical,
)
from ..core.structure import SigmaPartition, chief_series, structural_predicates
from ..utils.logger import setup_logger
from .corpus import GroupSpec
from .reports import AnalysisReport, ChiefFactorSummary, FormationSummary, SubgroupSummary, length_value

logger = setup_logger(__name__)

T = TypeVar("T")


def _attempt(report: AnalysisReport, field: str, compute: Callable[[], T]) -> Optional[T]:
    """Run one part of the analysis; a cap violation marks the field SKIPPED instead."""
    try:
        return compute()
    except ResourceLimitError as e:
        logger.warning(f"{report.group}: {field} skipped ({e})")
        report.skipped[field] = e.cap_name
        return None


def analyze(target: Union[GroupSpec, PermutationGroup], sigma: Optional[SigmaPartition] = None,
            primes: Optional[Sequence[int]] = None, formations: Sequence[str] = ()) -> AnalysisReport:
    G = target.to_group() if isinstance(target, GroupSpec) else target
    sigma = sigma or SigmaPartition.parse(Config.DEFAULT_SIGMA)
    primes = [int(p) for p in (primes or Config.DEFAULT_PRIMES)]
    descriptors = [parse_formation(f) for f in formations]
    report = AnalysisReport(group=G.label(), degree=G.degree, order=G.order(), sigma=sigma.spec(), primes=primes)
    logger.info(f"Analyzing {G.label()} (order {report.order})")

    predicates = _attempt(report, "predicates", lambda: structural_predicates(G, sigma, primes))
    if predicates is not None:
        values = asdict(predicates)
        values["p_soluble"] = {str(p): v for p, v in values["p_soluble"].items()}
        report.predicates = values

    series = _attempt(report, "chief_series", lambda: chief_series(G))
    if series is not None:
        report.chief_series = [ChiefFactorSummary.of(f) for f in series.factors]

    radicals = {
        "F": lambda: fitting_subgroup(G),
        "Fstar": lambda: generalized_fitting(G),
        "Fsigma": lambda: sigma_fitting(G, sigma),
        "RadSol": lambda: soluble_radical(G),
    }
    for p in primes:
        radicals[f"Op:{p}"] = lambda p=p: p_core(G, p)
        radicals[f"RadPSol:{p}"] = lambda p=p: p_soluble_radical(G, p)
    for name, compute in radicals.items():
        H = _attempt(report, name, compute)
        if H is not None:
            report.subgroups[name] = SubgroupSummary.of(H)

    lengths = _attempt(report, "lengths", lambda: named_lengths(G, sigma, primes))
    if lengths is not None:
        report.lengths = {
            "h": length_value(lengths.h),
            "h_star": length_value(lengths.h_star),
            "l_sigma": length_value(lengths.l_sigma),
            "lambda": length_value(lengths.lam),
            **{f"lambda_{p}": length_value(v) for p, v in lengths.lambda_p.items()},
        }

    for descriptor in descriptors:
        summary = FormationSummary(formation=descriptor.name)
        try:
            R = residual(G, descriptor)
            values = n_lengths(G, descriptor, sigma, residual_group=R)
            summary.residual = SubgroupSummary.of(R)
            summary.n_frak = length_value(values.n_frak)
            summary.n_sigma = length_value(values.n_sigma)
        except ResourceLimitError as e:
            logger.warning(f"{report.group}: residual for {descriptor.name} skipped ({e})")
            summary.skipped = e.cap_name
        report.formations.append(summary)
    return report

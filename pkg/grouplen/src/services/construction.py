"""
Chain construction service: builds the counterexample chain and writes it out.

Output for `--n N` in the target directory:
- chain_n<N>.groups: the top group and its maximal subgroup in the group-file format
- chain_n<N>.json: provenance (primes, module dimensions, seed) and the verified facts
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import List, Optional, Tuple

from ..config.settings import Config
from ..core.chain import ChainResult, counterexample_chain, final_remarks_example, stage_differences
from ..core.structure import SigmaPartition
from ..utils.logger import setup_logger
from .corpus import format_corpus, spec_from_group
from .reports import ChainFactRecord, ChainProvenance

logger = setup_logger(__name__)


@dataclass
class ConstructionOutput:
    result: ChainResult
    provenance: ChainProvenance
    table: List[Tuple[int, int, str]] = field(default_factory=list)
    paths: List[Path] = field(default_factory=list)


class ChainConstructionService:
    """Builds a chain for (sigma, p, n, seed) and serializes it."""

    def __init__(self, sigma: SigmaPartition, p: int, n: int, seed: Optional[int] = None,
                 final_remarks_k: Optional[int] = None):
        self.sigma = sigma
        self.p = p
        self.n = n
        self.seed = Config.SEED if seed is None else seed
        self.final_remarks_k = final_remarks_k

    def construct(self) -> ConstructionOutput:
        logger.info(f"Constructing chain: sigma {self.sigma.spec()}, p = {self.p}, n = {self.n}, seed {self.seed}")
        result = counterexample_chain(self.sigma, self.p, self.n, self.seed)
        remarks = None
        if self.final_remarks_k is not None:
            remarks = asdict(final_remarks_example(result, self.final_remarks_k))
        provenance = ChainProvenance(
            sigma=self.sigma.spec(),
            p=self.p,
            n=self.n,
            seed=self.seed,
            primes=list(result.primes),
            dimensions=list(result.dimensions),
            group_orders=[G.order() for G in result.groups],
            degree=result.group.degree,
            maximal_order=result.maximal.order(),
            difference=result.difference,
            facts=[ChainFactRecord(**_fact_data(f)) for f in result.facts],
            final_remarks=remarks,
        )
        return ConstructionOutput(result, provenance, stage_differences(result))

    def write(self, output: ConstructionOutput, directory: Path) -> List[Path]:
        directory.mkdir(parents=True, exist_ok=True)
        stem = f"chain_n{self.n}"
        groups_path = directory / f"{stem}.groups"
        json_path = directory / f"{stem}.json"
        result = output.result
        specs = [
            spec_from_group(result.group, stem, tags=["soluble", "chain", f"primes={','.join(map(str, result.primes))}"]),
            spec_from_group(result.maximal, f"{stem}_M", tags=["soluble", "chain", "maximal"]),
        ]
        groups_path.write_text(format_corpus(specs), encoding='utf-8')
        json_path.write_text(output.provenance.to_json(), encoding='utf-8')
        output.paths = [groups_path, json_path]
        logger.info(f"Wrote {groups_path} and {json_path}")
        return output.paths


def _fact_data(fact) -> dict:
    data = asdict(fact)
    for key in ("expected", "observed"):
        value = data[key]
        if not isinstance(value, (bool, int, str, type(None))):
            data[key] = str(value)
    return data


def format_difference_table(table: List[Tuple[int, Optional[int], str]]) -> str:
    lines = ["stage  difference  mode", "-----  ----------  ---------"]
    lines += [f"{i:>5}  {str(d):>10}  {mode}" for i, d, mode in table]
    return "\n".join(lines)

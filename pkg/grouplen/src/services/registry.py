"""
Registry of functorial and formation names accepted on the command line and in reports.

Functorial strings join names with `*`; `A*B` applies A first and B on the
quotient by A, so `RadSol*Fstar*RadSol` is the soluble-radical sandwich.
"""

from __future__ import annotations

from typing import Callable, Dict, Optional

from sympy import isprime

from ..core.errors import ContractViolationError
from ..core.formations import FormationDescriptor, parse_formation
from ..core.radicals import (
    Functorial,
    composition_radical_functorial,
    fitting_functorial,
    generalized_fitting_functorial,
    p_core_functorial,
    p_soluble_radical_functorial,
    sigma_core_functorial,
    sigma_fitting_functorial,
    soluble_radical_functorial,
    trivial_functorial,
    upper_product,
)
from ..core.structure import SigmaPartition

Factory = Callable[[Optional[str], SigmaPartition], Functorial]


def _prime_argument(name: str, argument: Optional[str]) -> int:
    if argument is None or not argument.isdigit() or not isprime(int(argument)):
        raise ContractViolationError(f"{name} needs a prime argument, got {argument!r}")
    return int(argument)


def _no_argument(name: str, factory: Callable[[], Functorial]) -> Factory:
    def build(argument: Optional[str], sigma: SigmaPartition) -> Functorial:
        if argument is not None:
            raise ContractViolationError(f"{name} takes no argument")
        return factory()
    return build


def _sigma_fitting(argument: Optional[str], sigma: SigmaPartition) -> Functorial:
    if argument is not None:
        raise ContractViolationError("Fsigma takes no argument; pass sigma separately")
    return sigma_fitting_functorial(sigma)


def _composition_orders(argument: Optional[str], sigma: SigmaPartition) -> Functorial:
    if not argument:
        raise ContractViolationError("OJ needs a comma list of simple group orders")
    try:
        orders = [int(part) for part in argument.split(',')]
    except ValueError:
        raise ContractViolationError(f"OJ orders must be integers, got {argument!r}") from None
    if any(n < 2 for n in orders):
        raise ContractViolationError("simple group orders are at least 2")
    return composition_radical_functorial(orders)


available_functorials: Dict[str, Factory] = {
    "1": _no_argument("1", trivial_functorial),
    "F": _no_argument("F", fitting_functorial),
    "Fstar": _no_argument("Fstar", generalized_fitting_functorial),
    "Fsigma": _sigma_fitting,
    "Osigma": lambda argument, sigma: sigma_core_functorial(sigma, _prime_argument("Osigma", argument)),
    "Op": lambda argument, sigma: p_core_functorial(_prime_argument("Op", argument)),
    "RadSol": _no_argument("RadSol", soluble_radical_functorial),
    "RadPSol": lambda argument, sigma: p_soluble_radical_functorial(_prime_argument("RadPSol", argument)),
    "OJ": _composition_orders,
}

available_formations = {
    "N": "nilpotent groups",
    "Nsigma:<sigma>": "sigma-nilpotent groups",
    "PClosedSol:<p>": "soluble groups with a normal Sylow p-subgroup",
    "PClosedSolH:<p>:<k>": "p-closed soluble groups of Fitting height at most k",
}


def parse_functorial(text: str, sigma: Optional[SigmaPartition] = None) -> Functorial:
    """Build a functorial from `Name[:arg]` parts joined by `*`."""
    sigma = sigma or SigmaPartition.per_prime()
    parts = [part.strip() for part in text.split('*')]
    if not text.strip() or any(not part for part in parts):
        raise ContractViolationError(f"empty functorial name in {text!r}")
    result: Optional[Functorial] = None
    for part in parts:
        name, sep, argument = part.partition(':')
        factory = available_functorials.get(name)
        if factory is None:
            raise ContractViolationError(
                f"unknown functorial {name!r}; available: {', '.join(available_functorials)}")
        current = factory(argument if sep else None, sigma)
        result = current if result is None else upper_product(result, current)
    return result


def lookup_formation(text: str) -> FormationDescriptor:
    return parse_formation(text)

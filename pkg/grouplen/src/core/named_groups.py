"""Standard permutation groups used by tests, the corpus and the chain base case."""

from __future__ import annotations

from itertools import product
from typing import List, Sequence

import numpy as np
from sympy import isprime, primitive_root

from .errors import ContractViolationError
from .permcore import Permutation, PermutationGroup


def _cycle(degree: int, points: Sequence[int]) -> Permutation:
    return Permutation.from_cycles(degree, [list(points)])


def cyclic_group(n: int) -> PermutationGroup:
    if n < 1:
        raise ContractViolationError("cyclic group order must be positive")
    if n == 1:
        return PermutationGroup(1, [], name="C1")
    return PermutationGroup(n, [_cycle(n, range(n))], name=f"C{n}")


def symmetric_group(n: int) -> PermutationGroup:
    if n < 1:
        raise ContractViolationError("symmetric group degree must be positive")
    if n == 1:
        return PermutationGroup(1, [], name="S1")
    gens = [_cycle(n, range(n)), _cycle(n, [0, 1])]
    return PermutationGroup(n, gens, name=f"S{n}")


def alternating_group(n: int) -> PermutationGroup:
    if n < 1:
        raise ContractViolationError("alternating group degree must be positive")
    if n < 3:
        return PermutationGroup(n, [], name=f"A{n}")
    if n == 3:
        return PermutationGroup(3, [_cycle(3, [0, 1, 2])], name="A3")
    long_cycle = range(n) if n % 2 == 1 else range(1, n)
    return PermutationGroup(n, [_cycle(n, [0, 1, 2]), _cycle(n, long_cycle)], name=f"A{n}")


def dihedral_group(n: int) -> PermutationGroup:
    """Symmetries of a regular n-gon, order 2n."""
    if n < 1:
        raise ContractViolationError("dihedral group parameter must be positive")
    if n == 1:
        return PermutationGroup(2, [_cycle(2, [0, 1])], name="D2")
    if n == 2:
        return PermutationGroup(4, [Permutation.from_cycles(4, [[0, 1], [2, 3]]),
                                    Permutation.from_cycles(4, [[0, 2], [1, 3]])], name="D4")
    rotation = _cycle(n, range(n))
    reflection = Permutation([(-i) % n for i in range(n)])
    return PermutationGroup(n, [rotation, reflection], name=f"D{2 * n}")


def direct_product(*groups: PermutationGroup) -> PermutationGroup:
    """External direct product acting on the disjoint union of the point sets."""
    degree = sum(G.degree for G in groups)
    gens: List[Permutation] = []
    offset = 0
    for G in groups:
        for g in G.generators:
            images = list(range(degree))
            for i, image in enumerate(g.images):
                images[offset + i] = offset + image
            gens.append(Permutation(images))
        offset += G.degree
    name = "x".join(G.name or "?" for G in groups)
    return PermutationGroup(degree, gens, name=name)


def _matrices_on_vectors(p: int, matrices: Sequence[np.ndarray]) -> PermutationGroup:
    """2x2 matrices acting on the right of the p^2 - 1 nonzero row vectors of F_p^2."""
    vectors = [v for v in product(range(p), repeat=2) if any(v)]
    index = {v: i for i, v in enumerate(vectors)}
    array = np.array(vectors, dtype=np.int64)
    gens = []
    for matrix in matrices:
        images = (array @ matrix) % p
        gens.append(Permutation([index[tuple(int(x) for x in row)] for row in images]))
    return PermutationGroup(len(vectors), gens)


def special_linear_group(p: int) -> PermutationGroup:
    """SL(2, p) on the nonzero vectors of F_p^2."""
    if not isprime(p):
        raise ContractViolationError(f"{p} is not prime")
    G = _matrices_on_vectors(p, [np.array([[1, 1], [0, 1]]), np.array([[0, 1], [p - 1, 0]])])
    G.name = f"SL(2,{p})"
    return G


def general_linear_group(p: int) -> PermutationGroup:
    """GL(2, p) on the nonzero vectors of F_p^2."""
    if not isprime(p):
        raise ContractViolationError(f"{p} is not prime")
    omega = int(primitive_root(p)) if p > 2 else 1
    G = _matrices_on_vectors(p, [np.array([[1, 1], [0, 1]]), np.array([[0, 1], [p - 1, 0]]),
                                 np.array([[omega, 0], [0, 1]])])
    G.name = f"GL(2,{p})"
    return G

"""
Permutation arithmetic and the permutation-group kernel.

Points are 0-based internally and 1-based in cycle notation. Composition is
left to right: ``p * q`` applies ``p`` first, so ``(p * q)(x) == q(p(x))``.
Groups build their stabilizer chain (deterministic Schreier-Sims, base points
chosen as smallest moved points) on first use; memoized values are pure
functions of the generators, so a racing first access only repeats work.
"""

from __future__ import annotations

import re
from collections import deque
from math import lcm
from typing import Callable, Dict, Hashable, Iterable, List, Optional, Sequence, Tuple, TypeVar, Union

import numpy as np

from ..config.settings import Config
from ..utils.logger import setup_logger
from .errors import ContractViolationError, ResourceLimitError

logger = setup_logger(__name__)

POINT_DTYPE = np.int32

T = TypeVar("T")


class Permutation:
    """An immutable permutation of {0, ..., degree-1} stored as an image array."""

    __slots__ = ("_array", "_key", "_tuple")

    def __init__(self, images: Union[Sequence[int], np.ndarray]):
        array = np.array(images, dtype=POINT_DTYPE)
        if array.ndim != 1 or array.size == 0:
            raise ContractViolationError("permutation degree must be positive")
        if not np.array_equal(np.sort(array), np.arange(array.size, dtype=POINT_DTYPE)):
            raise ContractViolationError(f"images {list(images)} are not a bijection on 0..{array.size - 1}")
        array.setflags(write=False)
        self._array = array
        self._key: Optional[bytes] = None
        self._tuple: Optional[Tuple[int, ...]] = None

    @classmethod
    def _wrap(cls, array: np.ndarray) -> "Permutation":
        """Adopt an image array that is already known to be a bijection."""
        perm = cls.__new__(cls)
        array.setflags(write=False)
        perm._array = array
        perm._key = None
        perm._tuple = None
        return perm

    @classmethod
    def identity(cls, degree: int) -> "Permutation":
        if degree < 1:
            raise ContractViolationError("permutation degree must be positive")
        return cls._wrap(np.arange(degree, dtype=POINT_DTYPE))

    @classmethod
    def from_cycles(cls, degree: int, cycles: Iterable[Sequence[int]]) -> "Permutation":
        """Build from 0-based disjoint cycles."""
        images = list(range(degree))
        touched = set()
        for cycle in cycles:
            for point in cycle:
                if not 0 <= point < degree:
                    raise ContractViolationError(f"point {point} outside 0..{degree - 1}")
                if point in touched:
                    raise ContractViolationError(f"point {point} appears twice")
                touched.add(point)
            for a, b in zip(cycle, list(cycle[1:]) + [cycle[0]]):
                images[a] = b
        return cls(images)

    @property
    def degree(self) -> int:
        return int(self._array.size)

    @property
    def array(self) -> np.ndarray:
        """Read-only image array."""
        return self._array

    @property
    def images(self) -> Tuple[int, ...]:
        if self._tuple is None:
            self._tuple = tuple(int(x) for x in self._array)
        return self._tuple

    @property
    def key(self) -> bytes:
        if self._key is None:
            self._key = self._array.tobytes()
        return self._key

    def __call__(self, point: int) -> int:
        return int(self._array[point])

    def __mul__(self, other: "Permutation") -> "Permutation":
        if other.degree != self.degree:
            raise ContractViolationError(f"cannot compose degrees {self.degree} and {other.degree}")
        return Permutation._wrap(other._array[self._array])

    def inverse(self) -> "Permutation":
        inv = np.empty_like(self._array)
        inv[self._array] = np.arange(self._array.size, dtype=POINT_DTYPE)
        return Permutation._wrap(inv)

    def __pow__(self, exponent: int) -> "Permutation":
        base = self if exponent >= 0 else self.inverse()
        result = Permutation.identity(self.degree)
        power = base
        n = abs(exponent)
        while n:
            if n & 1:
                result = result * power
            power = power * power
            n >>= 1
        return result

    def conjugate(self, g: "Permutation") -> "Permutation":
        """Return g^-1 * self * g."""
        return g.inverse() * self * g

    def commutator(self, other: "Permutation") -> "Permutation":
        """Return [self, other] = self^-1 other^-1 self other."""
        return self.inverse() * other.inverse() * self * other

    def is_identity(self) -> bool:
        return bool(np.array_equal(self._array, np.arange(self._array.size, dtype=POINT_DTYPE)))

    def cycles(self) -> List[Tuple[int, ...]]:
        """Nontrivial cycles, each starting at its smallest point, ordered by that point."""
        seen = np.zeros(self.degree, dtype=bool)
        result = []
        for start in range(self.degree):
            if seen[start] or self._array[start] == start:
                continue
            cycle = [start]
            seen[start] = True
            point = int(self._array[start])
            while point != start:
                cycle.append(point)
                seen[point] = True
                point = int(self._array[point])
            result.append(tuple(cycle))
        return result

    def order(self) -> int:
        return lcm(*(len(c) for c in self.cycles())) if not self.is_identity() else 1

    def support(self) -> List[int]:
        return [int(x) for x in np.nonzero(self._array != np.arange(self.degree))[0]]

    def smallest_moved_point(self) -> Optional[int]:
        moved = np.nonzero(self._array != np.arange(self.degree))[0]
        return int(moved[0]) if moved.size else None

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Permutation):
            return NotImplemented
        return self.key == other.key and self.degree == other.degree

    def __hash__(self) -> int:
        return hash(self.key)

    def __lt__(self, other: "Permutation") -> bool:
        return self.images < other.images

    def __repr__(self) -> str:
        return f"Permutation({format_cycles(self)!r}, degree={self.degree})"


def compose(p: Permutation, q: Permutation) -> Permutation:
    """Apply p, then q."""
    return p * q


def inverse(p: Permutation) -> Permutation:
    return p.inverse()


def parse_cycles(text: str, degree: int) -> Permutation:
    """
    Parse 1-based cycle notation such as ``(1,2,3)(4,5)``; ``()`` is the identity.

    Points inside a cycle may be separated by commas or whitespace. Cycles are
    multiplied left to right, so non-disjoint products are accepted.

    Raises:
        ContractViolationError: with ``column`` set to the 1-based offending position.
    """
    if degree < 1:
        raise ContractViolationError("degree must be positive")
    result = Permutation.identity(degree)
    pos = 0
    while pos < len(text):
        char = text[pos]
        if char.isspace():
            pos += 1
            continue
        if char != '(':
            raise ContractViolationError(f"expected '(' but found {char!r}", column=pos + 1)
        close = text.find(')', pos)
        if close < 0:
            raise ContractViolationError("unclosed cycle", column=pos + 1)
        body = text[pos + 1:close]
        if '(' in body:
            raise ContractViolationError("nested '(' inside a cycle", column=pos + 2 + body.index('('))
        points: List[int] = []
        offset = pos + 1
        for match in re.finditer(r"[^,\s]+", body):
            token = match.group(0)
            column = offset + match.start() + 1
            if not token.isdigit():
                raise ContractViolationError(f"invalid point {token!r}", column=column)
            point = int(token)
            if not 1 <= point <= degree:
                raise ContractViolationError(f"point {point} outside 1..{degree}", column=column)
            if point - 1 in points:
                raise ContractViolationError("repeated point in cycle", column=column)
            points.append(point - 1)
        if len(points) > 1:
            result = result * Permutation.from_cycles(degree, [points])
        pos = close + 1
    return result


def format_cycles(p: Permutation) -> str:
    """1-based cycle notation; the identity prints as ``()``."""
    cycles = p.cycles()
    if not cycles:
        return "()"
    return "".join("(" + ",".join(str(x + 1) for x in cycle) + ")" for cycle in cycles)


class StabilizerChain:
    """Base, strong generators per level and basic-orbit transversals."""

    def __init__(self, degree: int, generators: Sequence[Permutation]):
        self.degree = degree
        self.base: List[int] = []
        self.strong: List[List[Permutation]] = []
        self.transversals: List[Dict[int, Permutation]] = []
        self.inverse_transversals: List[Dict[int, Permutation]] = []
        self._identity = Permutation.identity(degree)
        self._build([g for g in generators if not g.is_identity()])

    def _build(self, generators: List[Permutation]) -> None:
        if not generators:
            return
        for g in generators:
            if all(g(b) == b for b in self.base):
                self.base.append(g.smallest_moved_point())
        for level in range(len(self.base)):
            fixed = self.base[:level]
            self.strong.append([g for g in generators if all(g(b) == b for b in fixed)])
            self.transversals.append({})
            self.inverse_transversals.append({})
            self._rebuild_orbit(level)

        level = len(self.base) - 1
        while level >= 0:
            descended = self._schreier_pass(level)
            if descended is None:
                level -= 1
            else:
                level = descended
        logger.debug(f"Stabilizer chain: base {self.base}, orbit sizes {[len(t) for t in self.transversals]}")

    def _schreier_pass(self, level: int) -> Optional[int]:
        """Sift every Schreier generator of a level; return the level to resume at after a new strong generator."""
        transversal = self.transversals[level]
        inverses = self.inverse_transversals[level]
        for beta, u_beta in list(transversal.items()):
            for s in list(self.strong[level]):
                gamma = s(beta)
                h = Permutation._wrap(inverses[gamma].array[s.array[u_beta.array]])
                if h.is_identity():
                    continue
                residue, reached = self._sift(h, level + 1)
                if residue.is_identity():
                    continue
                if reached == len(self.base):
                    self.base.append(residue.smallest_moved_point())
                    self.strong.append([])
                    self.transversals.append({})
                    self.inverse_transversals.append({})
                for target in range(level + 1, reached + 1):
                    self.strong[target].append(residue)
                    self._rebuild_orbit(target)
                return reached
        return None

    def _rebuild_orbit(self, level: int) -> None:
        base_point = self.base[level]
        transversal: Dict[int, Permutation] = {base_point: self._identity}
        queue = [base_point]
        for point in queue:
            u = transversal[point]
            for s in self.strong[level]:
                image = s(point)
                if image not in transversal:
                    transversal[image] = u * s
                    queue.append(image)
        self.transversals[level] = transversal
        self.inverse_transversals[level] = {point: u.inverse() for point, u in transversal.items()}

    def _sift(self, g: Permutation, start: int = 0) -> Tuple[Permutation, int]:
        for level in range(start, len(self.base)):
            beta = g(self.base[level])
            inverse_u = self.inverse_transversals[level].get(beta)
            if inverse_u is None:
                return g, level
            g = Permutation._wrap(inverse_u.array[g.array])
        return g, len(self.base)

    def sift(self, g: Permutation) -> Tuple[Permutation, int]:
        """Return (residue, level reached); g is a member iff the residue is the identity."""
        return self._sift(g, 0)

    def order(self) -> int:
        result = 1
        for transversal in self.transversals:
            result *= len(transversal)
        return result

    def element_array(self) -> np.ndarray:
        """All elements as rows u_{k-1} * ... * u_0, unsorted."""
        rows = np.arange(self.degree, dtype=POINT_DTYPE)[None, :]
        for transversal in reversed(self.transversals):
            # row r followed by u: u.array[r]
            rows = np.concatenate([u.array[rows] for u in transversal.values()], axis=0)
        return rows

    def canonical_coset_rep(self, x: Permutation) -> Permutation:
        """Canonical element of the right coset H x, H the group of this chain."""
        g = x
        for level in range(len(self.base)):
            transversal = self.transversals[level]
            points = np.fromiter(transversal.keys(), dtype=np.int64, count=len(transversal))
            best = int(points[int(np.argmin(g.array[points]))])
            g = Permutation._wrap(g.array[transversal[best].array])
        return g


class PermutationGroup:
    """
    A finite group given by permutation generators of a common degree.

    Identity and repeated generators are dropped, so the trivial group has an
    empty generator sequence. Equality of groups is `same_group`, not ``==``.
    """

    def __init__(self, degree: int, generators: Iterable[Union[Permutation, Sequence[int]]] = (), name: Optional[str] = None):
        if degree < 1:
            raise ContractViolationError("group degree must be positive")
        gens: List[Permutation] = []
        seen = set()
        for g in generators:
            if not isinstance(g, Permutation):
                g = Permutation(g)
            if g.degree != degree:
                raise ContractViolationError(f"generator of degree {g.degree} in a group of degree {degree}")
            if g.is_identity() or g in seen:
                continue
            seen.add(g)
            gens.append(g)
        self._degree = degree
        self._generators: Tuple[Permutation, ...] = tuple(gens)
        self.name = name
        self._chain: Optional[StabilizerChain] = None
        self._table: Optional["ElementTable"] = None
        self._memo: Dict[Hashable, object] = {}

    @property
    def degree(self) -> int:
        return self._degree

    @property
    def generators(self) -> Tuple[Permutation, ...]:
        return self._generators

    @property
    def chain(self) -> StabilizerChain:
        if self._chain is None:
            self._chain = StabilizerChain(self._degree, self._generators)
        return self._chain

    def identity(self) -> Permutation:
        return Permutation.identity(self._degree)

    def order(self) -> int:
        return self.chain.order()

    def is_trivial(self) -> bool:
        return not self._generators

    def contains(self, x: Permutation) -> bool:
        if x.degree != self._degree:
            raise ContractViolationError(f"element of degree {x.degree} tested against a group of degree {self._degree}")
        residue, _ = self.chain.sift(x)
        return residue.is_identity()

    __contains__ = contains

    def canonical_coset_rep(self, x: Permutation) -> Permutation:
        return self.chain.canonical_coset_rep(x)

    def memo(self, key: Hashable, factory: Callable[[], T]) -> T:
        """Memoize a derived value on this (immutable) group."""
        if key not in self._memo:
            self._memo[key] = factory()
        return self._memo[key]  # type: ignore[return-value]

    def table(self, cap: Optional[int] = None) -> "ElementTable":
        limit = cap if cap is not None else Config.ELEMENT_CAP
        order = self.order()
        if order > limit:
            raise ResourceLimitError("ELEMENT_CAP", limit, order, f"group {self.label()}")
        if self._table is None:
            self._table = ElementTable(self)
        return self._table

    def label(self) -> str:
        return self.name or f"<degree {self._degree}, {len(self._generators)} generators>"

    def __repr__(self) -> str:
        gens = ", ".join(format_cycles(g) for g in self._generators)
        return f"PermutationGroup(degree={self._degree}, generators=[{gens}])"


Subgroup = PermutationGroup


class ElementTable:
    """
    Canonically ordered elements of a group (row 0 is the identity) with lazy
    right-multiplication and conjugation maps on element indices.

    Subsets of the group are handled as frozensets of indices.
    """

    def __init__(self, group: PermutationGroup):
        self.group = group
        rows = group.chain.element_array()
        order = np.lexsort(rows.T[::-1])
        self.array = np.ascontiguousarray(rows[order])
        self.array.setflags(write=False)
        self.size = int(self.array.shape[0])
        self._lookup: Dict[bytes, int] = {row.tobytes(): i for i, row in enumerate(self.array)}
        self._right: Dict[int, List[int]] = {}
        self._conjugation: Dict[int, List[int]] = {}
        self._inverse: Optional[List[int]] = None
        logger.debug(f"Element table for {group.label()}: {self.size} elements")

    def element(self, i: int) -> Permutation:
        return Permutation._wrap(self.array[i].copy())

    def elements(self) -> List[Permutation]:
        return [self.element(i) for i in range(self.size)]

    def index(self, x: Permutation) -> int:
        try:
            return self._lookup[x.array.tobytes()]
        except KeyError:
            raise ContractViolationError(f"{format_cycles(x)} is not an element of {self.group.label()}") from None

    def rows_to_indices(self, rows: np.ndarray) -> List[int]:
        lookup = self._lookup
        return [lookup[row.tobytes()] for row in rows]

    def right(self, j: int) -> List[int]:
        """k -> index of e_k * e_j."""
        column = self._right.get(j)
        if column is None:
            column = self.rows_to_indices(self.array[j][self.array])
            self._right[j] = column
        return column

    def mul(self, i: int, j: int) -> int:
        return self.right(j)[i]

    def conjugation(self, j: int) -> List[int]:
        """k -> index of e_j^-1 * e_k * e_j."""
        column = self._conjugation.get(j)
        if column is None:
            g = self.array[j]
            g_inv = np.empty_like(g)
            g_inv[g] = np.arange(g.size, dtype=g.dtype)
            column = self.rows_to_indices(g[self.array[:, g_inv]])
            self._conjugation[j] = column
        return column

    def inverses(self) -> List[int]:
        if self._inverse is None:
            inv = np.empty_like(self.array)
            rows = np.arange(self.size)[:, None]
            inv[rows, self.array] = np.arange(self.array.shape[1], dtype=self.array.dtype)[None, :]
            self._inverse = self.rows_to_indices(inv)
        return self._inverse

    def generator_indices(self) -> List[int]:
        return [self.index(g) for g in self.group.generators]

    def closure(self, generators: Iterable[int], start: Iterable[int] = (0,)) -> frozenset:
        """Subgroup generated by `start` (a subgroup or {identity}) and the given elements."""
        members = set(start)
        members.add(0)
        columns = [self.right(g) for g in dict.fromkeys(generators)]
        queue = list(members)
        for x in queue:
            for column in columns:
                y = column[x]
                if y not in members:
                    members.add(y)
                    queue.append(y)
        return frozenset(members)

    def subset_of(self, H: PermutationGroup) -> frozenset:
        """Index set of a subgroup H of this table's group."""
        return H.memo(("subset", self), lambda: self.closure(self.index(h) for h in H.generators))

    def cyclic(self, i: int) -> frozenset:
        members = [0]
        column = self.right(i)
        x = column[0]
        while x != 0:
            members.append(x)
            x = column[x]
        return frozenset(members)

    def group_of(self, subset: Iterable[int], name: Optional[str] = None) -> PermutationGroup:
        """A PermutationGroup for a subgroup given by indices, with a small greedy generating set."""
        target = frozenset(subset)
        gens: List[int] = []
        current = frozenset({0})
        for i in sorted(target):
            if len(current) == len(target):
                break
            if i not in current:
                gens.append(i)
                current = self.closure(gens, start=current)
        H = PermutationGroup(self.group.degree, [self.element(i) for i in gens], name=name)
        H._memo[("subset", self)] = target
        return H


def group_from_generators(degree: int, gens: Iterable[Union[Permutation, Sequence[int]]], name: Optional[str] = None) -> PermutationGroup:
    return PermutationGroup(degree, gens, name=name)


def membership(G: PermutationGroup, x: Permutation) -> bool:
    return G.contains(x)


def enumerate_elements(G: PermutationGroup, cap: Optional[int] = None) -> List[Permutation]:
    """All elements of G in canonical (lexicographic image) order."""
    return G.table(cap).elements()


def same_group(A: PermutationGroup, B: PermutationGroup) -> bool:
    """Mutual generator membership plus equal order."""
    if A.degree != B.degree or A.order() != B.order():
        return False
    return all(B.contains(a) for a in A.generators) and all(A.contains(b) for b in B.generators)


def is_subgroup(H: PermutationGroup, G: PermutationGroup) -> bool:
    return H.degree == G.degree and all(G.contains(h) for h in H.generators)


def is_normal(G: PermutationGroup, N: PermutationGroup) -> bool:
    """True iff N is a subgroup of G normalised by G's generators."""
    if not is_subgroup(N, G):
        return False
    return all(N.contains(n.conjugate(g)) for n in N.generators for g in G.generators)


def join(A: PermutationGroup, B: PermutationGroup) -> PermutationGroup:
    if A.degree != B.degree:
        raise ContractViolationError(f"cannot join groups of degrees {A.degree} and {B.degree}")
    return PermutationGroup(A.degree, A.generators + B.generators)


def normal_closure(G: PermutationGroup, S: Iterable[Permutation]) -> PermutationGroup:
    """Smallest normal subgroup of G containing S (stabilizer chains only, no enumeration)."""
    elements = list(S)
    for s in elements:
        if not G.contains(s):
            raise ContractViolationError(f"{format_cycles(s)} is not an element of {G.label()}")
    N = PermutationGroup(G.degree, elements)
    queue = list(N.generators)
    while queue:
        x = queue.pop(0)
        for g in G.generators:
            c = x.conjugate(g)
            if not N.contains(c):
                N = PermutationGroup(G.degree, N.generators + (c,))
                queue.append(c)
    return N


def commutator_subgroup(G: PermutationGroup, A: PermutationGroup, B: PermutationGroup) -> PermutationGroup:
    """[A, B] for A, B normal in G."""
    return normal_closure(G, [a.commutator(b) for a in A.generators for b in B.generators])


def derived_subgroup(G: PermutationGroup) -> PermutationGroup:
    return commutator_subgroup(G, G, G)


def derived_series(G: PermutationGroup) -> List[PermutationGroup]:
    """G = D_0 >= D_1 >= ... down to the perfect core."""
    series = [G]
    while True:
        current = series[-1]
        nxt = derived_subgroup(current)
        if nxt.order() == current.order():
            return series
        series.append(nxt)


def lower_central_series(G: PermutationGroup) -> List[PermutationGroup]:
    """G = L_1 >= [L_1, G] >= ... until it stabilises."""
    series = [G]
    while True:
        current = series[-1]
        nxt = commutator_subgroup(G, current, G)
        if nxt.order() == current.order():
            return series
        series.append(nxt)


def orbit_transversal(H: PermutationGroup, root: int = 0) -> Dict[int, Permutation]:
    """Point -> element of H taking `root` to it, by breadth-first search over the generators."""
    transversal = {root: H.identity()}
    queue = deque([root])
    while queue:
        x = queue.popleft()
        for g in H.generators:
            y = g(x)
            if y not in transversal:
                transversal[y] = transversal[x] * g
                queue.append(y)
    return transversal


def centralizer(G: PermutationGroup, H: PermutationGroup, cap: Optional[int] = None) -> PermutationGroup:
    """
    C_G(H). A transitive H is handled on the stabilizer chain alone; otherwise
    the elements of G are filtered (element cap applies).
    """
    if not is_subgroup(H, G):
        raise ContractViolationError(f"centralizer argument is not a subgroup of {G.label()}")
    transversal = orbit_transversal(H)
    if len(transversal) == G.degree:
        return _transitive_centralizer(G, H, transversal)
    table = G.table(cap)
    keep = np.ones(table.size, dtype=bool)
    rows = table.array
    for h in H.generators:
        keep &= np.all(h.array[rows] == rows[:, h.array], axis=1)
    return table.group_of(np.nonzero(keep)[0].tolist())


def _transitive_centralizer(G: PermutationGroup, H: PermutationGroup,
                            transversal: Dict[int, Permutation]) -> PermutationGroup:
    # a permutation commuting with transitive H is fixed by its image of point 0: c(t(0)) = t(c(0))
    moves = np.empty((G.degree, G.degree), dtype=POINT_DTYPE)
    for x, t in transversal.items():
        moves[x] = t.array
    points = np.arange(G.degree, dtype=POINT_DTYPE)
    C = PermutationGroup(G.degree, [])
    for b in range(G.degree):
        images = np.ascontiguousarray(moves[:, b])
        if not np.array_equal(np.sort(images), points):
            continue
        if not all(np.array_equal(h.array[images], images[h.array]) for h in H.generators):
            continue
        c = Permutation._wrap(images)
        if G.contains(c) and not C.contains(c):
            C = PermutationGroup(G.degree, C.generators + (c,))
    logger.debug(f"Centralizer of a transitive subgroup of {G.label()}: order {C.order()}")
    return C


def intersection(G: PermutationGroup, A: PermutationGroup, B: PermutationGroup) -> PermutationGroup:
    """A ∩ B for subgroups of G (element table of G)."""
    table = G.table()
    return table.group_of(table.subset_of(A) & table.subset_of(B))

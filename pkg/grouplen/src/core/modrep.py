"""
Modular representations over prime fields.

Modules are right modules: vectors are rows, and the matrix of a product gh is
M_g @ M_h. Module generators correspond one to one with the generators of
the acting permutation group, so submodules, quotients and algebra words
carry over between modules of the same group.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum
from functools import cached_property
from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from ..config.settings import Config
from ..utils.logger import setup_logger
from .errors import ContractViolationError, ExistenceFailure, MeatAxeFailure, ResourceLimitError
from .linalg import (
    PrimeFieldMatrix,
    charpoly,
    check_modulus,
    evaluate_polynomial,
    factor_polynomial,
    inverse,
    left_nullspace,
    matmul,
    nullspace,
    rank,
    reduce_rows,
    rref,
)
from .permcore import Permutation, PermutationGroup

logger = setup_logger(__name__)

# Above this many candidate kernel vectors the isomorphism test solves for the Hom space instead
ISOMORPHISM_ENUMERATION_LIMIT = 4096


@dataclass(frozen=True)
class MatrixRepresentation:
    """One invertible matrix over F_q per generator of `group`."""

    group: PermutationGroup
    field_modulus: int
    images: Tuple[PrimeFieldMatrix, ...]

    def __post_init__(self):
        check_modulus(self.field_modulus)
        if len(self.images) != len(self.group.generators):
            raise ContractViolationError(
                f"{len(self.images)} matrices for {len(self.group.generators)} group generators")
        dims = {m.shape for m in self.images}
        if len(dims) > 1 or any(r != c for r, c in dims):
            raise ContractViolationError("generator images must be square matrices of one size")

    @property
    def dimension(self) -> int:
        return self.images[0].rows if self.images else self._trivial_dimension

    _trivial_dimension: int = field(default=1, compare=False, repr=False)

    @cached_property
    def element_images(self) -> Dict[int, np.ndarray]:
        """Matrix of every group element (by element-table index), checking the homomorphism property."""
        table = self.group.table()
        q = self.field_modulus
        d = self.dimension
        images: Dict[int, np.ndarray] = {0: np.eye(d, dtype=np.int64)}
        columns = [table.right(j) for j in table.generator_indices()]
        matrices = [m.array for m in self.images]
        queue = [0]
        for x in queue:
            for column, A in zip(columns, matrices):
                y = column[x]
                image = matmul(images[x], A, q)
                known = images.get(y)
                if known is None:
                    images[y] = image
                    queue.append(y)
                elif not np.array_equal(known, image):
                    raise ContractViolationError("generator images do not define a homomorphism")
        return images

    def image_of(self, x: Permutation) -> PrimeFieldMatrix:
        return PrimeFieldMatrix(self.element_images[self.group.table().index(x)], self.field_modulus)

    def kernel(self) -> PermutationGroup:
        identity = np.eye(self.dimension, dtype=np.int64)
        members = [i for i, image in self.element_images.items() if np.array_equal(image, identity)]
        return self.group.table().group_of(members)

    def is_faithful(self) -> bool:
        return self.kernel().is_trivial()


@dataclass(frozen=True)
class AlgebraWord:
    """A group-algebra element: pool words (generators, then recorded products) with coefficients."""

    products: Tuple[Tuple[int, int], ...]
    coefficients: Tuple[int, ...]

    def evaluate(self, matrices: Sequence[np.ndarray], q: int, dimension: int) -> np.ndarray:
        pool = list(matrices)
        for a, b in self.products:
            pool.append(matmul(pool[a], pool[b], q))
        result = np.zeros((dimension, dimension), dtype=np.int64)
        for c, M in zip(self.coefficients, pool):
            if c:
                result = (result + c * M) % q
        return result


@dataclass(frozen=True)
class NortonCertificate:
    """f(X) has nullity deg f, the kernel vector spins to the module and so does a dual kernel vector."""

    word: AlgebraWord
    factor: Tuple[int, ...]
    vector: Tuple[int, ...]


@dataclass(frozen=True)
class GModule:
    representation: MatrixRepresentation
    certificate: Optional[NortonCertificate] = field(default=None, compare=False)

    @property
    def group(self) -> PermutationGroup:
        return self.representation.group

    @property
    def modulus(self) -> int:
        return self.representation.field_modulus

    @property
    def dimension(self) -> int:
        return self.representation.dimension

    @cached_property
    def matrices(self) -> Tuple[np.ndarray, ...]:
        return tuple(m.array for m in self.representation.images)

    def key(self) -> Tuple:
        return (self.dimension, tuple(m.key() for m in self.representation.images))

    def is_faithful(self) -> bool:
        return self.representation.is_faithful()

    def with_matrices(self, matrices: Sequence[np.ndarray], dimension: int) -> "GModule":
        return make_module(self.group, self.modulus, matrices, dimension)

    def submodule(self, basis: np.ndarray) -> "GModule":
        """Action on the row space of `basis` (reduced echelon rows), in that basis."""
        E, pivots = rref(basis, self.modulus)
        return self.with_matrices([matmul(E, A, self.modulus)[:, pivots] for A in self.matrices], len(pivots))

    def quotient(self, basis: np.ndarray) -> "GModule":
        """Action on the quotient by the row space of `basis`."""
        q = self.modulus
        E, pivots = rref(basis, q)
        rest = [c for c in range(self.dimension) if c not in set(pivots)]
        matrices = []
        for A in self.matrices:
            rows = A[rest]
            reduced = reduce_rows(rows, E, pivots, q)
            matrices.append(reduced[:, rest])
        return self.with_matrices(matrices, len(rest))

    def certified(self, certificate: Optional[NortonCertificate]) -> "GModule":
        return replace(self, certificate=certificate)


def make_module(group: PermutationGroup, q: int, matrices: Sequence[np.ndarray], dimension: int) -> GModule:
    images = tuple(PrimeFieldMatrix(np.asarray(A).reshape(dimension, dimension), q) for A in matrices)
    return GModule(MatrixRepresentation(group, q, images, _trivial_dimension=dimension))


def regular_module(G: PermutationGroup, q: int, cap: Optional[int] = None) -> GModule:
    """F_q G with generators acting by right multiplication on the element basis."""
    check_modulus(q)
    limit = cap if cap is not None else Config.REGULAR_MODULE_CAP
    order = G.order()
    if order > limit:
        raise ResourceLimitError("REGULAR_MODULE_CAP", limit, order, f"regular module of {G.label()}")
    table = G.table()
    matrices = []
    for j in table.generator_indices():
        A = np.zeros((order, order), dtype=np.int64)
        A[np.arange(order), table.right(j)] = 1
        matrices.append(A)
    return make_module(G, q, matrices, order)


def _spin(matrices: Sequence[np.ndarray], vectors: np.ndarray, q: int) -> Tuple[np.ndarray, List[int]]:
    """Echelon basis of the smallest invariant subspace containing the vectors, a layer at a time."""
    E, pivots = rref(np.atleast_2d(vectors), q)
    layer = E
    while layer.shape[0] and matrices:
        images = np.concatenate([matmul(layer, A, q) for A in matrices])
        residue = reduce_rows(images, E, pivots, q)
        residue = residue[residue.any(axis=1)]
        if not residue.shape[0]:
            break
        layer, _ = rref(residue, q)
        E, pivots = rref(np.concatenate([E, layer]), q)
    return E, pivots


def spin(module: GModule, vectors) -> np.ndarray:
    """Reduced echelon basis of the submodule generated by the given row vectors."""
    return _spin(module.matrices, np.asarray(vectors, dtype=np.int64) % module.modulus, module.modulus)[0]


def _spin_script(matrices: Sequence[np.ndarray], v: np.ndarray, q: int) -> Tuple[List[Tuple[int, int]], np.ndarray]:
    """Standard basis from v: each new vector is (earlier basis vector) times a generator."""
    basis = [np.asarray(v, dtype=np.int64) % q]
    E, pivots = rref(basis[0][None, :], q)
    script: List[Tuple[int, int]] = []
    i = 0
    while i < len(basis):
        for g, A in enumerate(matrices):
            w = matmul(basis[i][None, :], A, q)
            if reduce_rows(w, E, pivots, q).any():
                basis.append(w[0])
                script.append((i, g))
                E, pivots = rref(np.concatenate([E, w]), q)
        i += 1
    return script, np.array(basis, dtype=np.int64)


def _replay(script: Sequence[Tuple[int, int]], matrices: Sequence[np.ndarray], u: np.ndarray, q: int) -> np.ndarray:
    rows = [np.asarray(u, dtype=np.int64) % q]
    for i, g in script:
        rows.append(matmul(rows[i][None, :], matrices[g], q)[0])
    return np.array(rows, dtype=np.int64)


class Verdict(Enum):
    IRREDUCIBLE = "irreducible"
    REDUCIBLE = "reducible"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class NortonResult:
    verdict: Verdict
    submodule: Optional[np.ndarray] = None
    certificate: Optional[NortonCertificate] = None


def norton_test(module: GModule, element: Union[PrimeFieldMatrix, np.ndarray],
                word: Optional[AlgebraWord] = None) -> NortonResult:
    """
    Irreducibility test with a group-algebra element X.

    For each irreducible factor f of the characteristic polynomial of X, a
    kernel vector of f(X) is spun; a proper result is a submodule. Otherwise
    a kernel vector of f(X)^T is spun under the transposed generators and a
    proper result yields its annihilator. If both spins are full and f(X)
    has nullity deg f, the module is irreducible.
    """
    q = module.modulus
    d = module.dimension
    X = element.array if isinstance(element, PrimeFieldMatrix) else np.asarray(element, dtype=np.int64) % q
    transposed = [A.T for A in module.matrices]
    for f, _ in factor_polynomial(charpoly(X, q), q):
        fX = evaluate_polynomial(f, X, q)
        kernel = left_nullspace(fX, q)
        v = kernel[0]
        S, _ = _spin(module.matrices, v, q)
        if S.shape[0] < d:
            return NortonResult(Verdict.REDUCIBLE, submodule=S)
        w = nullspace(fX, q)[0]
        T, _ = _spin(transposed, w, q)
        if T.shape[0] < d:
            annihilator = left_nullspace(T.T, q)
            return NortonResult(Verdict.REDUCIBLE, submodule=rref(annihilator, q)[0])
        if kernel.shape[0] == len(f) - 1:
            certificate = None
            if word is not None:
                certificate = NortonCertificate(word, tuple(int(c) for c in f), tuple(int(x) for x in v))
            return NortonResult(Verdict.IRREDUCIBLE, certificate=certificate)
    return NortonResult(Verdict.INCONCLUSIVE)


class _WordPool:
    """Random group-algebra elements built from the generators and products of earlier pool words."""

    def __init__(self, matrices: Sequence[np.ndarray], q: int, dimension: int):
        self.q = q
        self.dimension = dimension
        self.matrices = list(matrices)
        self.products: List[Tuple[int, int]] = []
        self.generator_count = len(self.matrices)

    def grow(self, rng: np.random.Generator) -> None:
        if not self.matrices:
            return
        a, b = (int(i) for i in rng.integers(0, len(self.matrices), size=2))
        self.matrices.append(matmul(self.matrices[a], self.matrices[b], self.q))
        self.products.append((a, b))

    def random_element(self, rng: np.random.Generator) -> Tuple[np.ndarray, AlgebraWord]:
        coefficients = tuple(int(c) for c in rng.integers(0, self.q, size=len(self.matrices)))
        word = AlgebraWord(tuple(self.products), coefficients)
        X = np.zeros((self.dimension, self.dimension), dtype=np.int64)
        for c, M in zip(coefficients, self.matrices):
            if c:
                X = (X + c * M) % self.q
        return X, word


def _split(module: GModule, rng: np.random.Generator, retries: int) -> Union[GModule, Tuple[GModule, GModule]]:
    """Either the module with an irreducibility certificate, or (submodule, quotient)."""
    d = module.dimension
    if d == 1:
        return module
    pool = _WordPool(module.matrices, module.modulus, d)
    for attempt in range(retries):
        pool.grow(rng)
        X, word = pool.random_element(rng)
        result = norton_test(module, X, word)
        if result.verdict is Verdict.REDUCIBLE:
            sub = module.submodule(result.submodule)
            logger.debug(f"MeatAxe split {d} = {sub.dimension} + {d - sub.dimension} after {attempt + 1} tries")
            return sub, module.quotient(result.submodule)
        if result.verdict is Verdict.IRREDUCIBLE:
            logger.debug(f"MeatAxe certified a {d}-dimensional module irreducible after {attempt + 1} tries")
            return module.certified(result.certificate)
    raise MeatAxeFailure(retries, d)


def irreducibility_certificate(module: GModule, seed: Optional[int] = None, retries: Optional[int] = None) -> Optional[GModule]:
    """The module with a Norton certificate attached, or None if it splits."""
    rng = np.random.default_rng(Config.SEED if seed is None else seed)
    outcome = _split(module, rng, retries if retries is not None else Config.MEATAXE_RETRIES)
    return outcome if isinstance(outcome, GModule) else None


def is_irreducible(module: GModule, seed: Optional[int] = None) -> bool:
    return irreducibility_certificate(module, seed) is not None


def homomorphism_space(M1: GModule, M2: GModule) -> np.ndarray:
    """Rows are row-major vectorised phi with A1_g phi = phi A2_g for every generator."""
    q = M1.modulus
    d1, d2 = M1.dimension, M2.dimension
    if not M1.matrices:
        return np.eye(d1 * d2, dtype=np.int64)
    blocks = [np.kron(A1, np.eye(d2, dtype=np.int64)) - np.kron(np.eye(d1, dtype=np.int64), A2.T)
              for A1, A2 in zip(M1.matrices, M2.matrices)]
    return nullspace(np.concatenate(blocks) % q, q)


def _compatible(M1: GModule, M2: GModule) -> bool:
    return (M1.modulus == M2.modulus and M1.dimension == M2.dimension
            and len(M1.matrices) == len(M2.matrices))


def modules_isomorphic(M1: GModule, M2: GModule, method: str = "spin") -> bool:
    """
    Isomorphism test for an irreducible M1.

    The spin method replays the standard basis from the certificate vector on
    every kernel vector of f(X) in M2 (up to scalars) and checks the resulting
    intertwiner. The hom method looks for a nonzero homomorphism, which for
    irreducible modules of equal dimension is an isomorphism.
    """
    if not _compatible(M1, M2):
        return False
    q = M1.modulus
    if M1.dimension == 1:
        return all(np.array_equal(A, B) for A, B in zip(M1.matrices, M2.matrices))
    if method == "hom":
        return homomorphism_space(M1, M2).shape[0] > 0
    if method != "spin":
        raise ContractViolationError(f"unknown isomorphism method {method!r}")
    certified = M1 if M1.certificate is not None else irreducibility_certificate(M1)
    if certified is None:
        raise ContractViolationError("isomorphism test needs an irreducible first module")
    cert = certified.certificate
    degree = len(cert.factor) - 1
    X2 = cert.word.evaluate(M2.matrices, q, M2.dimension)
    kernel = left_nullspace(evaluate_polynomial(cert.factor, X2, q), q)
    if kernel.shape[0] != degree:
        return False
    if q ** degree > ISOMORPHISM_ENUMERATION_LIMIT:
        return homomorphism_space(M1, M2).shape[0] > 0
    script, B = _spin_script(M1.matrices, np.array(cert.vector), q)
    B_inverse = inverse(B, q)
    for coefficients in _projective_points(degree, q):
        u = matmul(np.array(coefficients, dtype=np.int64)[None, :], kernel, q)[0]
        C = _replay(script, M2.matrices, u, q)
        if rank(C, q) < M2.dimension:
            continue
        phi = matmul(B_inverse, C, q)
        if all(np.array_equal(matmul(A1, phi, q), matmul(phi, A2, q)) for A1, A2 in zip(M1.matrices, M2.matrices)):
            return True
    return False


def _projective_points(k: int, q: int):
    """Nonzero vectors of F_q^k whose first nonzero entry is 1."""
    for lead in range(k):
        for tail in product(range(q), repeat=k - lead - 1):
            yield (0,) * lead + (1,) + tail


def chop(module: GModule, seed: Optional[int] = None, cap: Optional[int] = None,
         retries: Optional[int] = None) -> List[Tuple[GModule, int]]:
    """Composition factors up to isomorphism with multiplicities, smallest dimension first."""
    limit = cap if cap is not None else Config.CHOP_CAP
    if module.dimension > limit:
        raise ResourceLimitError("CHOP_CAP", limit, module.dimension, "module dimension")
    rng = np.random.default_rng(Config.SEED if seed is None else seed)
    budget = retries if retries is not None else Config.MEATAXE_RETRIES
    pending = [module]
    irreducibles: List[GModule] = []
    while pending:
        outcome = _split(pending.pop(), rng, budget)
        if isinstance(outcome, GModule):
            irreducibles.append(outcome)
        else:
            sub, quo = outcome
            pending.extend([quo, sub])
    classes: List[List] = []
    for constituent in irreducibles:
        for entry in classes:
            if modules_isomorphic(entry[0], constituent):
                entry[1] += 1
                break
        else:
            classes.append([constituent, 1])
    classes.sort(key=lambda entry: entry[0].key())
    logger.debug(f"Chopped a {module.dimension}-dimensional module into "
                 f"{[(c.dimension, m) for c, m in classes]}")
    return [(constituent, multiplicity) for constituent, multiplicity in classes]


def faithful_irreducible(G: PermutationGroup, q: int, seed: Optional[int] = None) -> GModule:
    """The first faithful constituent of the regular module, by (dimension, matrix key)."""
    for constituent, _ in chop(regular_module(G, q), seed):
        if constituent.is_faithful():
            return constituent
    raise ExistenceFailure(f"{G.label()} has no faithful irreducible module over F_{q}")


@dataclass(frozen=True)
class AffineProduct:
    """V semidirect G acting on the vectors of V: translations first, then the linear maps."""

    group: PermutationGroup
    V_image: PermutationGroup
    complement_image: PermutationGroup
    module: GModule


def affine_semidirect(V: GModule, degree_cap: Optional[int] = None) -> AffineProduct:
    q, d = V.modulus, V.dimension
    size = q ** d
    limit = degree_cap if degree_cap is not None else Config.DEGREE_CAP
    if size > limit:
        raise ResourceLimitError("DEGREE_CAP", limit, size, f"affine group on F_{q}^{d}")
    vectors = np.array(np.unravel_index(np.arange(size), (q,) * d), dtype=np.int64).T
    weights = q ** np.arange(d - 1, -1, -1, dtype=np.int64)
    translations = []
    for j in range(d):
        shifted = vectors.copy()
        shifted[:, j] = (shifted[:, j] + 1) % q
        translations.append(Permutation(shifted @ weights))
    linear = [Permutation(matmul(vectors, A, q) @ weights) for A in V.matrices]
    group = PermutationGroup(size, translations + linear)
    return AffineProduct(
        group=group,
        V_image=PermutationGroup(size, translations),
        complement_image=PermutationGroup(size, linear),
        module=V,
    )

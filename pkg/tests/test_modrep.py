from itertools import product

import numpy as np
import pytest

from grouplen.src.core.errors import ContractViolationError, ExistenceFailure, MeatAxeFailure, ResourceLimitError
from grouplen.src.core.modrep import (
    Verdict,
    affine_semidirect,
    chop,
    faithful_irreducible,
    homomorphism_space,
    is_irreducible,
    make_module,
    modules_isomorphic,
    norton_test,
    regular_module,
    spin,
)
from grouplen.src.core.named_groups import cyclic_group, symmetric_group


def permutation_module(G, q):
    matrices = []
    for g in G.generators:
        P = np.zeros((G.degree, G.degree), dtype=np.int64)
        P[np.arange(G.degree), g.array] = 1
        matrices.append(P)
    return make_module(G, q, matrices, G.degree)


def trivial_module(G, q):
    return make_module(G, q, [np.eye(1, dtype=np.int64) for _ in G.generators], 1)


def irreducible_by_brute_force(module) -> bool:
    """Every nonzero vector generates the whole module."""
    q, d = module.modulus, module.dimension
    for v in product(range(q), repeat=d):
        if any(v) and spin(module, [v]).shape[0] < d:
            return False
    return True


class TestRepresentations:
    def test_homomorphism_is_checked(self, s3):
        bad = make_module(s3, 5, [np.array([[2]]), np.array([[1]])], 1)
        with pytest.raises(ContractViolationError, match="homomorphism"):
            bad.representation.element_images

    def test_sign_representation_kernel(self, s3):
        images = [np.array([[1]]) if g.order() == 3 else np.array([[4]]) for g in s3.generators]
        sign = make_module(s3, 5, images, 1)
        assert sign.representation.kernel().order() == 3
        assert not sign.is_faithful()

    def test_permutation_module_is_faithful(self, s3):
        P = permutation_module(s3, 5)
        assert P.is_faithful()
        transposition = next(g for g in s3.generators if g.order() == 2)
        assert P.representation.image_of(transposition).determinant() == 4

    def test_regular_module_cap(self):
        with pytest.raises(ResourceLimitError) as info:
            regular_module(symmetric_group(5), 5, cap=100)
        assert info.value.cap_name == "REGULAR_MODULE_CAP"


class TestSpinAndNorton:
    def test_spin_of_fixed_vector(self, s3):
        P = permutation_module(s3, 5)
        assert spin(P, [[1, 1, 1]]).shape[0] == 1
        assert spin(P, [[1, 0, 0]]).shape[0] == 3

    def test_norton_finds_augmentation_submodule(self, s3):
        P = permutation_module(s3, 5)
        transposition = next(A for A, g in zip(P.matrices, s3.generators) if g.order() == 2)
        result = norton_test(P, transposition)
        assert result.verdict is Verdict.REDUCIBLE
        assert result.submodule.shape[0] == 2
        assert (result.submodule.sum(axis=1) % 5 == 0).all()

    @pytest.mark.parametrize("group, q", [
        (symmetric_group(3), 5),
        (symmetric_group(3), 2),
        (cyclic_group(3), 2),
        (cyclic_group(3), 7),
        (symmetric_group(4), 3),
    ])
    def test_irreducibility_agrees_with_brute_force(self, group, q):
        P = permutation_module(group, q)
        assert is_irreducible(P) == irreducible_by_brute_force(P)
        for constituent, _ in chop(P):
            assert irreducible_by_brute_force(constituent)


class TestChop:
    def test_regular_module_of_s3_over_f5(self, s3):
        factors = chop(regular_module(s3, 5))
        assert [(V.dimension, m) for V, m in factors] == [(1, 1), (1, 1), (2, 2)]

    def test_regular_module_of_s3_over_f2(self, s3):
        factors = chop(regular_module(s3, 2))
        assert [(V.dimension, m) for V, m in factors] == [(1, 2), (2, 2)]

    def test_is_deterministic(self, s3):
        first = [V.key() for V, _ in chop(regular_module(s3, 5), seed=7)]
        second = [V.key() for V, _ in chop(regular_module(s3, 5), seed=7)]
        assert first == second

    def test_caps(self, s3):
        with pytest.raises(ResourceLimitError) as info:
            chop(regular_module(s3, 5), cap=2)
        assert info.value.cap_name == "CHOP_CAP"
        with pytest.raises(MeatAxeFailure):
            chop(regular_module(s3, 5), retries=0)


class TestIsomorphism:
    def test_one_dimensional_modules(self, s3):
        trivial, sign = [V for V, _ in chop(regular_module(s3, 5))[:2]]
        assert not modules_isomorphic(trivial, sign)
        assert modules_isomorphic(trivial, trivial_module(s3, 5))

    def test_two_dimensional_module(self, s3):
        V = chop(regular_module(s3, 5))[-1][0]
        W = chop(permutation_module(s3, 5))[-1][0]
        assert W.dimension == 2
        assert modules_isomorphic(V, W)
        assert modules_isomorphic(V, W, method="hom")

    def test_unknown_method(self, s3):
        V = chop(regular_module(s3, 5))[-1][0]
        with pytest.raises(ContractViolationError):
            modules_isomorphic(V, V, method="guess")

    def test_hom_space_into_trivial(self, s3):
        P = permutation_module(s3, 5)
        assert homomorphism_space(P, trivial_module(s3, 5)).shape[0] == 1
        assert homomorphism_space(P, P).shape[0] == 2


class TestFaithfulIrreducible:
    def test_c2_over_f3_is_the_sign(self, c2):
        V = faithful_irreducible(c2, 3)
        assert V.dimension == 1
        assert V.matrices[0].tolist() == [[2]]

    def test_s3_over_f5(self, s3):
        V = faithful_irreducible(s3, 5)
        assert V.dimension == 2
        assert V.is_faithful()

    def test_no_faithful_module_in_characteristic_dividing_a_normal_p_subgroup(self, c2):
        with pytest.raises(ExistenceFailure):
            faithful_irreducible(c2, 2)


class TestAffineSemidirect:
    def test_s3_from_c2(self, c2):
        product_group = affine_semidirect(faithful_irreducible(c2, 3))
        assert product_group.group.order() == 6
        assert product_group.group.degree == 3
        assert product_group.V_image.order() == 3

    def test_order_150(self, s3):
        product_group = affine_semidirect(faithful_irreducible(s3, 5))
        assert product_group.group.degree == 25
        assert product_group.group.order() == 150
        assert product_group.V_image.order() == 25
        assert product_group.complement_image.order() == 6

    def test_degree_cap(self, s3):
        with pytest.raises(ResourceLimitError) as info:
            affine_semidirect(faithful_irreducible(s3, 5), degree_cap=10)
        assert info.value.cap_name == "DEGREE_CAP"

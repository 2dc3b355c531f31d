import pytest

from grouplen.src.core.errors import ContractViolationError, ResourceLimitError
from grouplen.src.core.named_groups import cyclic_group, direct_product, symmetric_group
from grouplen.src.core.permcore import PermutationGroup, parse_cycles, same_group
from grouplen.src.core.structure import (
    RestRule,
    SigmaPartition,
    chief_series,
    composition_factor_orders,
    conjugacy_classes,
    has_unique_chief_series,
    is_nilpotent,
    is_nonabelian_semisimple,
    is_p_soluble,
    is_sigma_nilpotent,
    is_sigma_soluble,
    is_soluble,
    minimal_normal_subgroups,
    normal_subgroups,
    prime_power_base,
    quotient,
    socle,
    structural_predicates,
)


class TestSigmaPartition:
    def test_per_prime_default(self):
        sigma = SigmaPartition.parse("*")
        assert sigma.rest_rule is RestRule.SINGLETONS
        assert not sigma.same_class(2, 3)
        assert sigma.spec() == "*"

    def test_listed_classes(self):
        sigma = SigmaPartition.parse("2,3|5|*")
        assert sigma.same_class(2, 3)
        assert not sigma.same_class(3, 5)
        assert not sigma.same_class(7, 11)
        assert sigma.spec() == "2,3|5|*"

    def test_rest_in_one_class(self):
        sigma = SigmaPartition.parse("2|*1")
        assert sigma.same_class(3, 7)
        assert not sigma.same_class(2, 3)

    @pytest.mark.parametrize("text", ["", "2,4|*", "2|2,3|*", "*|2", "2||3"])
    def test_rejects_malformed(self, text):
        with pytest.raises(ContractViolationError):
            SigmaPartition.parse(text)

    def test_classes_meeting(self):
        sigma = SigmaPartition.parse("2,3|*")
        assert sorted(len(v) for v in sigma.classes_meeting(60).values()) == [1, 2]


def test_prime_power_base():
    assert prime_power_base(1) is None
    assert prime_power_base(7) == 7
    assert prime_power_base(64) == 2
    assert prime_power_base(12) is None
    assert prime_power_base(3 ** 5) == 3


class TestQuotients:
    def test_s4_modulo_klein_four_is_s3(self, s4):
        V = PermutationGroup(4, [parse_cycles("(1,2)(3,4)", 4), parse_cycles("(1,3)(2,4)", 4)])
        Q = quotient(s4, V)
        assert Q.index == 6
        assert Q.carrier.order() == 6
        assert not is_nilpotent(Q.carrier)

    def test_pull_back_of_whole_carrier(self, s4, a4):
        Q = quotient(s4, a4)
        assert same_group(Q.pull_back(Q.carrier), s4)
        assert Q.image(a4).is_trivial()

    def test_trivial_kernel_returns_group(self, s3):
        Q = quotient(s3, PermutationGroup(3, []))
        assert Q.carrier is s3

    def test_requires_normal_subgroup(self, s4):
        with pytest.raises(ContractViolationError):
            quotient(s4, PermutationGroup(4, [parse_cycles("(1,2)", 4)]))


class TestClassesAndNormalSubgroups:
    def test_class_sizes_of_s4(self, s4):
        assert sorted(size for _, size in conjugacy_classes(s4)) == [1, 3, 6, 6, 8]

    def test_normal_subgroups_of_s4(self, s4):
        assert [N.order() for N in normal_subgroups(s4)] == [1, 4, 12, 24]
        assert has_unique_chief_series(s4)

    def test_klein_four_has_many_normal_subgroups(self):
        V = PermutationGroup(4, [parse_cycles("(1,2)(3,4)", 4), parse_cycles("(1,3)(2,4)", 4)])
        assert len(normal_subgroups(V)) == 5
        assert not has_unique_chief_series(V)

    def test_class_cap(self):
        with pytest.raises(ResourceLimitError) as info:
            normal_subgroups(symmetric_group(5), class_cap=3)
        assert info.value.cap_name == "CLASS_CAP"

    def test_minimal_normal_subgroups(self, s4, a5_x_c2):
        assert [N.order() for N in minimal_normal_subgroups(s4)] == [4]
        assert sorted(N.order() for N in minimal_normal_subgroups(a5_x_c2)) == [2, 60]

    def test_socle(self, s4, a5_x_c2, trivial):
        assert socle(s4).order() == 4
        assert socle(a5_x_c2).order() == 120
        assert socle(trivial).is_trivial()


class TestChiefSeries:
    def test_s4(self, s4):
        series = chief_series(s4)
        assert series.factor_orders() == [4, 3, 2]
        assert [f.describe() for f in series.factors] == ["2^2", "3^1", "2^1"]

    def test_sl25_has_central_involution_below_a5(self, sl25):
        series = chief_series(sl25)
        assert series.factor_orders() == [2, 60]
        assert not series.factors[1].abelian
        assert series.factors[1].component_order == 60

    def test_composition_factors(self, s4, a5_x_c2):
        assert composition_factor_orders(s4) == [2, 2, 2, 3]
        assert composition_factor_orders(a5_x_c2) == [2, 60]

    def test_trivial_group_has_empty_series(self, trivial):
        assert chief_series(trivial).length == 0


class TestPredicates:
    def test_solubility(self, s4, a5, sl23):
        assert is_soluble(s4)
        assert is_soluble(sl23)
        assert not is_soluble(a5)

    def test_nilpotency(self, d8, s3):
        assert is_nilpotent(d8)
        assert not is_nilpotent(s3)

    def test_p_solubility_of_a5(self, a5):
        assert not is_p_soluble(a5, 2)
        assert not is_p_soluble(a5, 5)
        assert is_p_soluble(a5, 7)

    def test_sigma_nilpotent(self, s3):
        assert not is_sigma_nilpotent(s3, SigmaPartition.per_prime())
        assert is_sigma_nilpotent(s3, SigmaPartition.parse("2,3|*"))
        C6 = direct_product(cyclic_group(2), cyclic_group(3))
        assert is_sigma_nilpotent(C6, SigmaPartition.per_prime())

    def test_sigma_soluble(self, a5):
        assert not is_sigma_soluble(a5, SigmaPartition.per_prime())
        assert is_sigma_soluble(a5, SigmaPartition.parse("2,3,5|*"))

    def test_semisimple(self, a5, a5_x_c2, sl25):
        assert is_nonabelian_semisimple(a5)
        assert not is_nonabelian_semisimple(a5_x_c2)
        assert not is_nonabelian_semisimple(sl25)

    def test_report(self, a5, per_prime):
        report = structural_predicates(a5, per_prime, [2, 3, 5, 7])
        assert report.p_soluble == {2: False, 3: False, 5: False, 7: True}
        assert not report.sigma_soluble
        assert report.is_nonabelian_semisimple

import pytest

from grouplen.src.core.errors import ResourceLimitError
from grouplen.src.core.named_groups import symmetric_group
from grouplen.src.core.permcore import PermutationGroup, parse_cycles, same_group
from grouplen.src.core.radicals import (
    INFINITE,
    composition_radical,
    fitting_functorial,
    fitting_height,
    fitting_subgroup,
    format_length,
    fstar_contained,
    gamma_length,
    gamma_series,
    generalized_fitting,
    generalized_fitting_height,
    lambda_series,
    length_difference,
    named_lengths,
    nonsoluble_length,
    p_core,
    p_soluble_radical,
    sigma_core_functorial,
    sigma_fitting,
    sigma_nilpotent_length,
    soluble_radical,
    soluble_radical_sandwich,
)
from grouplen.src.core.structure import SigmaPartition, quotient


def test_infinite_serializes_as_word():
    assert format_length(INFINITE) == "infinite"
    assert str(INFINITE) == "infinite"
    assert format_length(3) == 3
    assert length_difference(INFINITE, 1) is None
    assert length_difference(3, 1) == 2


class TestNamedRadicals:
    def test_fitting_subgroups(self, s4, sl23, gl23, a5, sl25):
        assert fitting_subgroup(s4).order() == 4
        assert fitting_subgroup(sl23).order() == 8
        assert fitting_subgroup(gl23).order() == 8
        assert fitting_subgroup(a5).is_trivial()
        assert fitting_subgroup(sl25).order() == 2

    def test_generalized_fitting(self, s4, a5, sl25, a5_x_c2):
        assert generalized_fitting(s4).order() == 4
        assert same_group(generalized_fitting(a5), a5)
        assert same_group(generalized_fitting(sl25), sl25)
        assert generalized_fitting(a5_x_c2).order() == 120
        assert generalized_fitting(symmetric_group(5)).order() == 60

    def test_soluble_radicals(self, s4, sl25, a5_x_c2):
        assert same_group(soluble_radical(s4), s4)
        assert soluble_radical(sl25).order() == 2
        assert soluble_radical(a5_x_c2).order() == 2
        assert p_soluble_radical(sl25, 2).order() == 2
        assert same_group(p_soluble_radical(sl25, 7), sl25)

    def test_p_cores(self, s4):
        assert p_core(s4, 2).order() == 4
        assert p_core(s4, 3).is_trivial()

    def test_sigma_radicals(self, s4):
        assert sigma_fitting(s4, SigmaPartition.per_prime()).order() == 4
        assert same_group(sigma_fitting(s4, SigmaPartition.parse("2,3|*")), s4)
        core = sigma_core_functorial(SigmaPartition.parse("2,3|*"), 3)
        assert same_group(core(s4), s4)

    def test_composition_radical(self, s4, a5_x_c2):
        assert same_group(composition_radical(s4, [2, 3]), s4)
        assert composition_radical(a5_x_c2, [2]).order() == 2
        assert same_group(composition_radical(a5_x_c2, [2, 60]), a5_x_c2)

    def test_trivial_group(self, trivial):
        assert fitting_subgroup(trivial).is_trivial()
        assert generalized_fitting(trivial).is_trivial()


class TestLengths:
    def test_s4(self, s4, per_prime):
        lengths = named_lengths(s4, per_prime, [2, 3])
        assert (lengths.h, lengths.h_star, lengths.l_sigma) == (3, 3, 3)
        assert lengths.lambda_p == {2: 0, 3: 0}
        assert lengths.lam == 0

    def test_heights_of_linear_groups(self, sl23, gl23):
        assert fitting_height(sl23) == 2
        assert fitting_height(gl23) == 3

    def test_a5(self, a5, per_prime):
        lengths = named_lengths(a5, per_prime, [2, 3, 5, 7])
        assert lengths.h is INFINITE
        assert lengths.h_star == 1
        assert lengths.l_sigma is INFINITE
        assert lengths.lambda_p == {2: 1, 3: 1, 5: 1, 7: 0}

    def test_sl25(self, sl25):
        assert generalized_fitting_height(sl25) == 1
        assert nonsoluble_length(sl25, 2) == 1

    def test_s5(self):
        S5 = symmetric_group(5)
        assert generalized_fitting_height(S5) == 2
        assert nonsoluble_length(S5, 2) == 1

    def test_coarse_sigma_shortens_length(self, s4):
        assert sigma_nilpotent_length(s4, SigmaPartition.parse("2,3|*")) == 1

    def test_trivial_lengths_are_zero(self, trivial, per_prime):
        lengths = named_lengths(trivial, per_prime, [2])
        assert (lengths.h, lengths.h_star, lengths.l_sigma, lengths.lam) == (0, 0, 0, 0)


class TestGammaSeries:
    def test_fitting_series_of_s4(self, s4):
        series = gamma_series(s4, fitting_functorial())
        assert series.orders() == [1, 4, 12, 24]
        assert series.length == 3

    def test_stalled_series_is_infinite(self, a5):
        series = gamma_series(a5, fitting_functorial())
        assert series.length is INFINITE
        assert series.stalled_at == 0

    def test_step_cap(self, s4):
        with pytest.raises(ResourceLimitError) as info:
            gamma_series(s4, fitting_functorial(), max_steps=2)
        assert info.value.cap_name == "GAMMA_MAX_STEPS"

    def test_soluble_radical_sandwich(self, a5_x_c2):
        S5 = symmetric_group(5)
        assert gamma_length(S5, soluble_radical_sandwich()) == 1
        assert gamma_length(a5_x_c2, soluble_radical_sandwich()) == 1

    def test_lambda_series_records_semisimple_step(self, sl25):
        series = lambda_series(sl25, 2)
        assert series.length == 1
        assert series.factors[0].order == 60
        assert series.factors[0].semisimple
        assert series.all_components_divisible

    def test_fstar_containment(self, s4, a5):
        assert fstar_contained(s4, fitting_functorial()) is True
        assert fstar_contained(a5, fitting_functorial()) is None


def test_normal_length_bounds_on_s4(s4):
    V = PermutationGroup(4, [parse_cycles("(1,2)(3,4)", 4), parse_cycles("(1,3)(2,4)", 4)])
    h_normal = fitting_height(V)
    h_quotient = fitting_height(quotient(s4, V).carrier)
    assert (h_normal, h_quotient) == (1, 2)
    assert max(h_normal, h_quotient) <= fitting_height(s4) <= h_normal + h_quotient

import pytest

from grouplen.src.core.errors import ContractViolationError
from grouplen.src.core.formations import (
    formation_membership,
    is_p_closed,
    n_lengths,
    nilpotent_formation,
    nilpotent_residual_series,
    p_closed_soluble,
    p_closed_soluble_bounded,
    parse_formation,
    pi_generated_subgroup,
    pi_part,
    residual,
    series_length,
    sigma_nilpotent_residual,
    sigma_nilpotent_residual_series,
)
from grouplen.src.core.named_groups import cyclic_group, direct_product
from grouplen.src.core.permcore import parse_cycles
from grouplen.src.core.radicals import INFINITE, fitting_height, sigma_nilpotent_length
from grouplen.src.core.structure import SigmaPartition


class TestParse:
    @pytest.mark.parametrize("text, name", [
        ("N", "N"),
        ("Nsigma:2,3|*", "Nsigma:2,3|*"),
        ("PClosedSol:2", "PClosedSol:2"),
        (" PClosedSolH:3:2 ", "PClosedSolH:3:2"),
    ])
    def test_known_formations(self, text, name):
        assert parse_formation(text).name == name

    @pytest.mark.parametrize("text", ["X", "N:2", "PClosedSol:4", "PClosedSolH:2", "PClosedSolH:2:-1", "Nsigma:"])
    def test_unknown_formations(self, text):
        with pytest.raises(ContractViolationError):
            parse_formation(text)


def test_p_closed(s4, d8, s3):
    assert not is_p_closed(s4, 2)
    assert is_p_closed(d8, 2)
    assert is_p_closed(s3, 3)


def test_membership(d8, s4, gl23):
    bounded = p_closed_soluble_bounded(2, 1)
    assert formation_membership(d8, bounded)
    assert not formation_membership(s4, bounded)
    assert not formation_membership(gl23, p_closed_soluble(2))


class TestResiduals:
    def test_nilpotent_residual_of_s4(self, s4):
        assert residual(s4, nilpotent_formation()).order() == 12
        assert residual(s4, nilpotent_formation(), general=True).order() == 12

    def test_p_closed_residuals(self, s3, s4):
        assert residual(s3, p_closed_soluble(2)).order() == 3
        assert residual(s4, p_closed_soluble(2)).order() == 12
        assert residual(s4, p_closed_soluble(3)).order() == 4

    def test_residual_of_member_is_trivial(self, d8):
        assert residual(d8, p_closed_soluble(2)).is_trivial()

    def test_sigma_nilpotent_residual(self, s4):
        formation = parse_formation("Nsigma:2,3|*")
        assert residual(s4, formation).is_trivial()


class TestResidualLengths:
    def test_s4_nilpotent_residual(self, s4, per_prime):
        values = n_lengths(s4, nilpotent_formation(), per_prime)
        assert (values.n_frak, values.n_sigma) == (2, 2)

    def test_s3_p_closed_residual(self, s3, per_prime):
        values = n_lengths(s3, p_closed_soluble(2), per_prime)
        assert (values.n_frak, values.n_sigma) == (1, 1)

    def test_coarse_sigma(self, s4):
        values = n_lengths(s4, nilpotent_formation(), SigmaPartition.parse("2,3|*"))
        assert (values.n_frak, values.n_sigma) == (2, 1)


class TestResidualSeries:
    @pytest.mark.parametrize("fixture, height", [("s3", 2), ("s4", 3), ("d8", 1), ("sl23", 2), ("gl23", 3)])
    def test_nilpotent_series_gives_fitting_height(self, request, fixture, height):
        G = request.getfixturevalue(fixture)
        assert series_length(nilpotent_residual_series(G)) == height == fitting_height(G)

    @pytest.mark.parametrize("sigma_text", ["*", "2,3|*", "3|*1"])
    @pytest.mark.parametrize("fixture", ["s3", "s4", "d8", "sl23", "gl23"])
    def test_sigma_series_agrees_with_radicals(self, request, fixture, sigma_text):
        G = request.getfixturevalue(fixture)
        sigma = SigmaPartition.parse(sigma_text)
        assert series_length(sigma_nilpotent_residual_series(G, sigma)) == sigma_nilpotent_length(G, sigma)

    def test_three_primes(self, s3):
        G = direct_product(s3, cyclic_group(5))
        assert sigma_nilpotent_residual(G, SigmaPartition.parse("2,5|*")).order() == 3
        assert series_length(sigma_nilpotent_residual_series(G, SigmaPartition.parse("3,5|*"))) == 2
        assert sigma_nilpotent_residual(G, SigmaPartition.parse("2,3,5|*")).is_trivial()

    def test_pi_generated_subgroup(self, s4, s3):
        assert pi_generated_subgroup(s4, [3]).order() == 12
        assert pi_generated_subgroup(s4, [2]).order() == 24
        assert pi_generated_subgroup(s3, [3]).order() == 3

    def test_pi_generated_subgroup_needs_soluble(self, a5):
        with pytest.raises(ContractViolationError):
            pi_generated_subgroup(a5, [5])

    def test_pi_part(self):
        x = parse_cycles("(1,2,3,4,5,6)", 6)
        two, three = pi_part(x, [2]), pi_part(x, [3])
        assert (two.order(), three.order()) == (2, 3)
        assert two * three == x
        assert pi_part(x, [5]).is_identity()

    def test_infinite_when_a_term_is_perfect(self, a5):
        assert series_length(nilpotent_residual_series(a5)) is INFINITE

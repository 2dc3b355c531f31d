import pytest

from grouplen.src.config.settings import Config
from grouplen.src.core.chain import (
    CERTIFIED,
    COMPUTED,
    counterexample_chain,
    final_remarks_example,
    select_chain_prime,
    stage_differences,
)
from grouplen.src.core import chain as chain_module
from grouplen.src.core.errors import ChainVerificationError, ContractViolationError
from grouplen.src.core.formations import nilpotent_residual_series, series_length, sigma_nilpotent_residual_series
from grouplen.src.core.named_groups import cyclic_group
from grouplen.src.core.permcore import is_normal
from grouplen.src.core.structure import SigmaPartition
from grouplen.src.core.subgroups import is_maximal


def test_prime_selection_skips_p_and_previous_class(per_prime):
    q, V = select_chain_prime(cyclic_group(2), 2, 2, per_prime)
    assert q == 3
    assert V.dimension == 1


def test_prime_selection_respects_sigma():
    q, _ = select_chain_prime(cyclic_group(2), 2, 2, SigmaPartition.parse("2,3|*"))
    assert q == 5


class TestSmallChains:
    def test_n1_is_s3(self, per_prime):
        chain = counterexample_chain(per_prime, 2, 1)
        assert chain.primes == (2, 3)
        assert chain.group.order() == 6
        assert chain.maximal.order() == 3
        assert chain.difference == 1
        assert all(f.holds and f.mode == COMPUTED for f in chain.facts)

    def test_n2(self, per_prime):
        chain = counterexample_chain(per_prime, 2, 2)
        assert chain.primes == (2, 3, 5)
        assert chain.dimensions == (1, 2)
        assert chain.group.order() == 150
        assert chain.maximal.order() == 75
        assert chain.difference == 2
        assert chain.block_sizes() == [2, 1, 1]
        assert is_normal(chain.group, chain.maximal)
        assert is_maximal(chain.group, chain.maximal)

    def test_stage_table(self, per_prime):
        chain = counterexample_chain(per_prime, 2, 2)
        assert stage_differences(chain) == [(1, 1, COMPUTED), (2, 2, COMPUTED)]

    def test_fact_names(self, per_prime):
        facts = {f.fact for f in counterexample_chain(per_prime, 2, 1).facts}
        assert {"order", "module_faithful", "unique_minimal_normal", "fsigma_equals_v", "maximal",
                "residual_is_maximal", "l_sigma_maximal", "difference"} <= facts

    def test_odd_starting_prime(self, per_prime):
        chain = counterexample_chain(per_prime, 3, 1)
        assert chain.primes == (3, 2)
        assert chain.dimensions == (2,)
        assert chain.group.order() == 12
        assert chain.maximal.order() == 4
        assert chain.difference == 1


class TestArguments:
    def test_p_must_be_prime(self, per_prime):
        with pytest.raises(ContractViolationError):
            counterexample_chain(per_prime, 4, 1)

    def test_n_must_be_positive(self, per_prime):
        with pytest.raises(ContractViolationError):
            counterexample_chain(per_prime, 2, 0)

    def test_sigma_needs_two_classes(self):
        with pytest.raises(ContractViolationError):
            counterexample_chain(SigmaPartition.one_class(), 2, 1)


def test_final_remarks_on_small_chain(per_prime):
    remarks = final_remarks_example(counterexample_chain(per_prime, 2, 2), k=1)
    assert remarks.mode == COMPUTED
    assert (remarks.n_frak_group, remarks.n_frak_maximal, remarks.difference) == (2, 1, 1)


class TestChainAboveDirectOrder:
    """With a low direct-check order every stage past S3 runs on stabilizer chains."""

    @pytest.fixture
    def chain(self, per_prime):
        Config.apply_overrides({"chain_direct_check_order": 10})
        return counterexample_chain(per_prime, 2, 2)

    def test_facts_hold(self, chain):
        certified = {f.fact for f in chain.facts if f.mode == CERTIFIED}
        assert {"unique_minimal_normal", "fsigma_equals_v", "residual_is_maximal",
                "l_sigma_maximal", "n_sigma_group", "n_sigma_maximal", "difference"} <= certified
        assert all(f.holds for f in chain.facts)
        assert chain.difference == 2

    def test_lengths_come_from_the_groups(self, chain):
        observed = {f.fact: f.observed for f in chain.facts if f.stage == 2}
        assert observed["l_sigma_maximal"] == 2
        assert observed["n_sigma_maximal"] == 0

    def test_stage_table(self, chain):
        assert stage_differences(chain) == [(1, 1, COMPUTED), (2, 2, CERTIFIED)]

    def test_final_remarks_match_direct_computation(self, chain):
        remarks = final_remarks_example(chain, k=1)
        assert remarks.mode == CERTIFIED
        assert (remarks.n_frak_group, remarks.n_frak_maximal, remarks.difference) == (2, 1, 1)

    def test_results_ignore_the_requested_length(self, chain):
        chain.n = 7
        remarks = final_remarks_example(chain, k=1)
        assert (remarks.n_frak_group, remarks.n_frak_maximal) == (2, 1)
        assert stage_differences(chain)[-1] == (2, 2, CERTIFIED)

    def test_coarser_sigma(self):
        Config.apply_overrides({"chain_direct_check_order": 10})
        chain = counterexample_chain(SigmaPartition.parse("2,3|*"), 2, 2)
        assert chain.primes[:2] == (2, 5)
        assert chain.difference == 2
        assert stage_differences(chain)[-1][2] == CERTIFIED


def test_broken_residual_is_reported(per_prime, monkeypatch):
    Config.apply_overrides({"chain_direct_check_order": 10})
    monkeypatch.setattr(chain_module, "_residual_is_maximal", lambda result, stage, formation: False)
    with pytest.raises(ChainVerificationError) as info:
        counterexample_chain(per_prime, 2, 2)
    assert (info.value.stage, info.value.fact) == (2, "residual_is_maximal")


@pytest.mark.slow
class TestThreeStageChain:
    @pytest.fixture(scope="class")
    def chain(self):
        return counterexample_chain(SigmaPartition.per_prime(), 2, 3)

    def test_shape(self, chain):
        assert chain.primes == (2, 3, 5, 11)
        assert chain.dimensions == (1, 2, 3)
        assert chain.group.order() == 199650
        assert chain.group.degree == 1331
        assert chain.maximal.order() == 99825

    def test_residual_series_of_maximal(self, chain):
        series = nilpotent_residual_series(chain.maximal)
        assert [R.order() for R in series] == [99825, 33275, 1331, 1]
        assert series_length(series) == 3
        sigma_series = sigma_nilpotent_residual_series(chain.maximal, chain.sigma)
        assert [R.order() for R in sigma_series] == [99825, 33275, 1331, 1]

    def test_top_stage_is_certified(self, chain):
        top = [f for f in chain.facts if f.stage == 3]
        assert all(f.holds for f in top)
        assert {f.fact for f in top if f.mode == CERTIFIED} >= {"unique_minimal_normal", "fsigma_equals_v",
                                                                  "l_sigma_maximal", "difference"}
        assert chain.difference == 3

    def test_stage_table(self, chain):
        assert stage_differences(chain) == [(1, 1, COMPUTED), (2, 2, COMPUTED), (3, 3, CERTIFIED)]

    def test_final_remarks(self, chain):
        remarks = final_remarks_example(chain, k=Config.PCLOSED_HEIGHT_BOUND)
        assert remarks.mode == CERTIFIED
        assert (remarks.n_frak_group, remarks.n_frak_maximal, remarks.difference) == (3, 0, 3)
        assert final_remarks_example(chain, k=1).n_frak_maximal == 2

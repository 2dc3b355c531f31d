import pytest

from grouplen.src.config.settings import Config
from grouplen.src.core import chain as chain_module
from grouplen.src.core.permcore import PermutationGroup
from grouplen.src.core.structure import SigmaPartition
from grouplen.src.services.corpus import load_bundled_corpus, spec_from_group
from grouplen.src.services.reports import Verdict
from grouplen.src.services.verification import verify


def _ids(report, prefix):
    return [c for c in report.checks if c.check_id.startswith(prefix)]


def test_trivial_group_is_vacuous(trivial):
    report = verify([spec_from_group(trivial, "Trivial")], chain_witnesses=0)
    assert report.summary.failed == 0
    vacuous = _ids(report, "maximal.vacuous")
    assert len(vacuous) == 1 and vacuous[0].verdict is Verdict.PASS


def test_s4_passes_every_check(s4):
    report = verify([spec_from_group(s4, "S4")], chain_witnesses=0)
    assert report.failures == []
    assert report.summary.groups == 1
    assert report.summary.skipped == 0
    assert report.summary.differences["h"] == {"1": 2, "2": 1}
    h_checks = [c for c in report.checks if c.check_id == "maximal.h"]
    assert sorted(c.class_size for c in h_checks) == [1, 3, 4]
    assert max(c.values["difference"] for c in h_checks) == 2
    assert {"fstar.self_centralizing", "oracle.F", "axiom.P1.F"} <= {c.check_id for c in report.checks}


def test_report_config_and_order(s3, c2):
    report = verify([spec_from_group(s3, "S3"), spec_from_group(c2, "C2")], primes=[2, 3], chain_witnesses=0)
    assert report.config["sigma"] == "*"
    assert report.config["primes"] == [2, 3]
    assert "element_cap" in report.config
    groups = [c.group for c in report.checks]
    assert groups.index("C2") > max(i for i, g in enumerate(groups) if g == "S3")


def test_caps_become_skipped_records(s4):
    Config.apply_overrides({"subgroup_cap": 10})
    report = verify([spec_from_group(s4, "S4")], chain_witnesses=0)
    skipped = [c for c in report.checks if c.verdict is Verdict.SKIPPED]
    assert [(c.check_id, c.cap) for c in skipped] == [("maximal", "SUBGROUP_CAP")]
    assert report.summary.failed == 0


def test_chain_witness_record():
    report = verify([], chain_witnesses=1)
    (record,) = report.checks
    assert record.check_id == "chain.n1"
    assert record.verdict is Verdict.PASS
    assert record.values == {"primes": [2, 3], "order": 6, "difference": 1}
    assert report.summary.differences["n_sigma_pclosed"] == {"1": 1}


def test_failed_chain_fact_is_recorded_not_raised(monkeypatch):
    monkeypatch.setattr(chain_module, "sigma_fitting", lambda G, sigma: PermutationGroup(G.degree, []))
    report = verify([], chain_witnesses=1)
    (record,) = report.checks
    assert record.check_id == "chain.n1"
    assert record.verdict is Verdict.FAIL
    assert record.cap is None
    assert record.values == {"stage": 1, "fact": "fsigma_equals_v"}
    assert "chain stage 1: fsigma_equals_v failed" in record.detail
    assert report.summary.failed == 1


def test_unbuildable_chain_is_a_failure():
    report = verify([], sigma=SigmaPartition.one_class(), chain_witnesses=1)
    (record,) = report.checks
    assert record.verdict is Verdict.FAIL
    assert record.cap is None
    assert "single class" in record.detail


def test_timing_only_when_requested(s3):
    assert all(c.timing is None for c in verify([spec_from_group(s3, "S3")], chain_witnesses=0).checks)
    Config.apply_overrides({"record_timing": True})
    timed = verify([spec_from_group(s3, "S3")], chain_witnesses=0)
    assert timed.checks[0].timing is not None


@pytest.mark.slow
def test_worker_pool_matches_serial_run(s3, s4):
    specs = [spec_from_group(s3, "S3"), spec_from_group(s4, "S4")]
    serial = verify(specs, chain_witnesses=0)
    pooled = verify(specs, workers=2, chain_witnesses=0)
    assert [c.model_dump() for c in pooled.checks] == [c.model_dump() for c in serial.checks]


@pytest.mark.slow
def test_bundled_corpus_has_no_failures():
    report = verify(load_bundled_corpus())
    assert report.failures == []
    skipped = {c.group for c in report.checks if c.verdict is Verdict.SKIPPED}
    assert skipped <= {"S6"}

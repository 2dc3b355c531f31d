import pytest

from grouplen.src.core.errors import ContractViolationError, CorpusParseError
from grouplen.src.core.permcore import same_group
from grouplen.src.services.corpus import (
    BUNDLED_CORPUS,
    GroupSpec,
    format_corpus,
    load_bundled_corpus,
    load_corpus,
    parse_corpus,
    spec_from_group,
)

EXAMPLE = """\
# two small groups
group S3
degree 3
gen (1,2)
gen (1,2,3)
tag soluble
order 6
end

group C4
  degree 4
  gen (1,2,3,4)
end
"""


def parse_error(text: str) -> CorpusParseError:
    with pytest.raises(CorpusParseError) as info:
        parse_corpus(text)
    return info.value


class TestParse:
    def test_example(self):
        specs = parse_corpus(EXAMPLE)
        assert [s.name for s in specs] == ["S3", "C4"]
        assert specs[0].generators == ["(1,2)", "(1,2,3)"]
        assert specs[0].tags == ["soluble"]
        assert specs[0].order == 6
        assert specs[1].order is None
        assert specs[1].to_group().order() == 4

    def test_repeated_point_in_cycle(self):
        error = parse_error("group G\ndegree 3\ngen (1,2,1)\nend\n")
        assert error.line == 3
        assert error.column == 10
        assert "repeated point in cycle" in str(error)

    def test_unknown_keyword(self):
        error = parse_error("group G\ndegre 3\nend\n")
        assert (error.line, error.column) == (2, 1)
        assert "degree" in error.expected

    def test_generator_before_degree(self):
        error = parse_error("group G\ngen (1,2)\ndegree 2\nend\n")
        assert error.line == 2
        assert error.expected == ("degree",)

    def test_duplicate_names(self):
        error = parse_error("group G\ndegree 1\nend\ngroup G\ndegree 1\nend\n")
        assert (error.line, error.column) == (4, 7)

    def test_unclosed_group(self):
        error = parse_error("group G\ndegree 2\n")
        assert error.line == 1
        assert error.expected == ("end",)

    def test_missing_end_before_next_group(self):
        assert parse_error("group G\ndegree 2\ngroup H\n").line == 3

    def test_non_integer_degree(self):
        error = parse_error("group G\ndegree two\nend\n")
        assert (error.line, error.column) == (2, 8)

    def test_statement_outside_group(self):
        assert parse_error("degree 3\n").expected == ("group",)


class TestSpecs:
    def test_declared_order_is_checked(self):
        spec = GroupSpec(name="Wrong", degree=3, generators=["(1,2,3)"], order=6)
        with pytest.raises(ContractViolationError, match="declared order"):
            spec.to_group()

    def test_name_must_be_one_word(self):
        with pytest.raises(ValueError):
            GroupSpec(name="two words", degree=1)

    def test_formatted_text_parses_back(self, s4):
        text = format_corpus([spec_from_group(s4, "S4", tags=["soluble"])])
        (spec,) = parse_corpus(text)
        assert spec.order == 24
        assert same_group(spec.to_group(), s4)

    def test_load_corpus_from_file(self, tmp_path):
        path = tmp_path / "small.groups"
        path.write_text(EXAMPLE, encoding="utf-8")
        assert [s.name for s in load_corpus(path)] == ["S3", "C4"]


class TestBundledCorpus:
    def test_shape(self):
        specs = parse_corpus(BUNDLED_CORPUS.read_text(encoding="utf-8"))
        assert len(specs) >= 40
        assert all(s.order is not None and s.order <= 720 for s in specs)
        names = {s.name for s in specs}
        for expected in ("Trivial", "S3", "S4", "S5", "S6", "A4", "A5", "A6", "Q8", "SL(2,3)",
                         "GL(2,3)", "SL(2,5)", "Frobenius20", "A4xC3", "D8", "D20"):
            assert expected in names

    def test_declared_orders_hold(self):
        assert len(load_bundled_corpus()) >= 40

"""
Group files: a small line-oriented text format for permutation groups.

    # comment
    group S3
    degree 3
    gen (1,2)
    gen (1,2,3)
    tag soluble
    order 6
    end

Points are 1-based. `order` is optional and checked when the group is loaded.
"""

from __future__ import annotations

from pathlib import Path
from typing import List, Optional, Sequence, Union

from pydantic import BaseModel, Field, field_validator

from ..core.errors import ContractViolationError, CorpusParseError
from ..core.permcore import PermutationGroup, format_cycles, parse_cycles
from ..utils.logger import setup_logger

logger = setup_logger(__name__)

BUNDLED_CORPUS = Path(__file__).parent.parent / "resources" / "bundled_corpus.groups"

KEYWORDS = ("group", "degree", "gen", "tag", "order", "end")


class GroupSpec(BaseModel):
    name: str
    degree: int = Field(ge=1)
    generators: List[str] = Field(default_factory=list)
    tags: List[str] = Field(default_factory=list)
    order: Optional[int] = None
    line: int = Field(default=0, exclude=True)

    @field_validator("name")
    @classmethod
    def _name_is_word(cls, value: str) -> str:
        if not value or any(c.isspace() for c in value):
            raise ValueError("group name must be a single word")
        return value

    def to_group(self) -> PermutationGroup:
        G = PermutationGroup(self.degree, [parse_cycles(g, self.degree) for g in self.generators], name=self.name)
        if self.order is not None and G.order() != self.order:
            raise ContractViolationError(f"group {self.name}: declared order {self.order}, computed {G.order()}")
        return G

    def to_text(self) -> str:
        lines = [f"group {self.name}", f"degree {self.degree}"]
        lines += [f"gen {g}" for g in self.generators]
        lines += [f"tag {t}" for t in self.tags]
        if self.order is not None:
            lines.append(f"order {self.order}")
        lines.append("end")
        return "\n".join(lines)


def spec_from_group(G: PermutationGroup, name: str, tags: Sequence[str] = ()) -> GroupSpec:
    return GroupSpec(name=name, degree=G.degree, generators=[format_cycles(g) for g in G.generators],
                     tags=list(tags), order=G.order())


def _integer(text: str, line: int, column: int, what: str) -> int:
    if not text.isdigit():
        raise CorpusParseError(f"{what} must be a positive integer", line, column, expected=("integer",))
    return int(text)


def parse_corpus(text: str) -> List[GroupSpec]:
    """Parse a group file; every error carries its line and column."""
    specs: List[GroupSpec] = []
    names = set()
    current: Optional[dict] = None
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split('#', 1)[0].rstrip()
        stripped = line.lstrip()
        if not stripped:
            continue
        indent = len(line) - len(stripped) + 1
        keyword = stripped.split(None, 1)[0]
        after = stripped[len(keyword):]
        rest = after.strip()
        value_column = indent + len(keyword) + len(after) - len(after.lstrip())

        if keyword not in KEYWORDS:
            raise CorpusParseError(f"unknown keyword {keyword!r}", number, indent, expected=KEYWORDS)

        if current is None:
            if keyword != "group":
                raise CorpusParseError(f"{keyword!r} outside a group block", number, indent, expected=("group",))
            if not rest or ' ' in rest:
                raise CorpusParseError("group needs a single-word name", number, value_column, expected=("name",))
            if rest in names:
                raise CorpusParseError(f"duplicate group name {rest!r}", number, value_column)
            current = {"name": rest, "degree": None, "generators": [], "tags": [], "order": None, "line": number}
            continue

        if keyword == "group":
            raise CorpusParseError("missing 'end' before next group", number, indent, expected=("end",))
        if keyword == "degree":
            if current["degree"] is not None:
                raise CorpusParseError("degree given twice", number, indent)
            if current["generators"]:
                raise CorpusParseError("degree must precede generators", number, indent)
            current["degree"] = _integer(rest, number, value_column, "degree")
            if current["degree"] < 1:
                raise CorpusParseError("degree must be positive", number, value_column)
        elif keyword == "gen":
            if current["degree"] is None:
                raise CorpusParseError("generator before degree", number, indent, expected=("degree",))
            try:
                parse_cycles(rest, current["degree"])
            except ContractViolationError as e:
                column = value_column + (e.column - 1 if e.column else 0)
                raise CorpusParseError(str(e), number, column, expected=("cycle",)) from None
            current["generators"].append(rest)
        elif keyword == "tag":
            if not rest:
                raise CorpusParseError("empty tag", number, value_column, expected=("word",))
            current["tags"].append(rest)
        elif keyword == "order":
            current["order"] = _integer(rest, number, value_column, "order")
        elif keyword == "end":
            if rest:
                raise CorpusParseError("unexpected text after 'end'", number, value_column)
            if current["degree"] is None:
                raise CorpusParseError("group without degree", number, indent, expected=("degree",))
            specs.append(GroupSpec(**current))
            names.add(current["name"])
            current = None

    if current is not None:
        raise CorpusParseError(f"group {current['name']!r} is not closed", current["line"], 1, expected=("end",))
    return specs


def load_corpus(path: Union[str, Path], check_orders: bool = True) -> List[GroupSpec]:
    path = Path(path)
    specs = parse_corpus(path.read_text(encoding='utf-8'))
    if check_orders:
        for spec in specs:
            spec.to_group()
    logger.info(f"Loaded {len(specs)} groups from {path.name}")
    return specs


def load_bundled_corpus() -> List[GroupSpec]:
    return load_corpus(BUNDLED_CORPUS)


def format_corpus(specs: Sequence[GroupSpec]) -> str:
    return "\n\n".join(spec.to_text() for spec in specs) + "\n"

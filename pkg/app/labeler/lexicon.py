from functools import lru_cache
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, Field, model_validator

from app.common.config import config
from app.common.exceptions import DatasetParseError
from app.core.schema import Dimension, Subcategory

LEXICON_HEADER = "# Fine-grained keyword lexicon: one entry per line, '#' starts a comment."

# Section name -> (field name, dimension, polarity); order is the on-disk order.
SECTIONS: Dict[str, Tuple[str, Optional[Dimension], Optional[Subcategory]]] = {
    "severity.atypical": ("severity_atypical", Dimension.SEVERITY, Subcategory.ATYPICAL),
    "severity.typical": ("severity_typical", Dimension.SEVERITY, Subcategory.TYPICAL),
    "change.atypical": ("change_atypical", Dimension.CHANGE, Subcategory.ATYPICAL),
    "change.typical": ("change_typical", Dimension.CHANGE, Subcategory.TYPICAL),
    "suffixes": ("suffixes", None, None),
}


class Lexicon(BaseModel):
    """Keyword sets of the division rule.

    Severity entries match whole tokens only; change-in-time entries are
    stems that also match when followed by one of `suffixes` (the empty
    suffix is always implied).
    """

    severity_atypical: Tuple[str, ...] = Field(default=())
    severity_typical: Tuple[str, ...] = Field(default=())
    change_atypical: Tuple[str, ...] = Field(default=())
    change_typical: Tuple[str, ...] = Field(default=())
    suffixes: Tuple[str, ...] = Field(default=())

    class Config:
        frozen = True

    @model_validator(mode="after")
    def check_disjoint(self) -> "Lexicon":
        seen: Dict[str, str] = {}
        for section, (field, dimension, _) in SECTIONS.items():
            if dimension is None:
                continue
            for entry in getattr(self, field):
                if entry != entry.casefold() or not entry:
                    raise ValueError(f"Lexicon entry must be non-empty lower case: {entry!r}")
                if entry in seen:
                    raise ValueError(
                        f"Keyword '{entry}' appears in both [{seen[entry]}] and [{section}]"
                    )
                seen[entry] = section
        return self

    def entries(self, dimension: Dimension) -> List[Tuple[str, Subcategory]]:
        return [
            (entry, polarity)
            for field, dim, polarity in SECTIONS.values()
            if dim == dimension
            for entry in getattr(self, field)
        ]


def parse_lexicon(text: str) -> Lexicon:
    sections: Dict[str, List[str]] = {field: [] for field, _, _ in SECTIONS.values()}
    current: Optional[str] = None
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("[") and line.endswith("]"):
            name = line[1:-1].strip()
            if name not in SECTIONS:
                raise DatasetParseError(line_no, f"unknown lexicon section [{name}]")
            current = SECTIONS[name][0]
            continue
        if current is None:
            raise DatasetParseError(line_no, "entry appears before any section header")
        sections[current].append(line)
    try:
        return Lexicon(**{field: tuple(values) for field, values in sections.items()})
    except ValueError as e:
        raise DatasetParseError(0, str(e)) from e


def format_lexicon(lexicon: Lexicon) -> str:
    blocks = [LEXICON_HEADER]
    for section, (field, _, _) in SECTIONS.items():
        blocks.append("\n".join([f"[{section}]", *getattr(lexicon, field)]))
    return "\n\n".join(blocks) + "\n"


def load_lexicon(path: Path) -> Lexicon:
    return parse_lexicon(Path(path).read_text(encoding="utf-8"))


def save_lexicon(lexicon: Lexicon, path: Path) -> None:
    Path(path).write_text(format_lexicon(lexicon), encoding="utf-8")


@lru_cache(maxsize=1)
def default_lexicon() -> Lexicon:
    return load_lexicon(config.paths.lexicon)

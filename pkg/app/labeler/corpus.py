from functools import lru_cache
from pathlib import Path
from typing import Dict, List

from pydantic import BaseModel

from app.common.config import config, load_toml, parse_model
from app.core.schema import Dimension, Subcategory


class ReportExample(BaseModel):
    keyword: str
    dimension: Dimension
    text: str

    class Config:
        frozen = True


class ReportCorpus(BaseModel):
    """Example report sentences grouped by the subcategory they exemplify."""

    atypical: List[ReportExample]
    typical: List[ReportExample]

    def examples(self, subcategory: Subcategory) -> List[ReportExample]:
        return self.atypical if subcategory == Subcategory.ATYPICAL else self.typical

    def as_mapping(self) -> Dict[Subcategory, List[ReportExample]]:
        return {s: self.examples(s) for s in Subcategory}


def load_corpus(path: Path) -> ReportCorpus:
    return parse_model(ReportCorpus, load_toml(Path(path)), str(path))


@lru_cache(maxsize=1)
def default_corpus() -> ReportCorpus:
    return load_corpus(config.paths.report_corpus)

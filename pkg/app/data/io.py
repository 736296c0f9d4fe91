from pathlib import Path
from typing import Iterator, List, Sequence, Tuple, Union

from pydantic import ValidationError

from app.common.config import format_validation_error
from app.common.exceptions import DatasetParseError, InvalidDatasetError
from app.core.schema import CoarseLabel, Sample


def _numbered_lines(data: Union[str, bytes]) -> Iterator[Tuple[int, str]]:
    if isinstance(data, str):
        yield from enumerate(data.split("\n"), start=1)
        return
    for line_no, raw in enumerate(data.split(b"\n"), start=1):
        try:
            yield line_no, raw.decode("utf-8")
        except UnicodeDecodeError as e:
            raise DatasetParseError(line_no, f"invalid UTF-8 at byte {e.start}") from e


def parse_dataset(data: Union[str, bytes]) -> List[Sample]:
    """One JSON object per line; blank lines are skipped.

    Bytes are decoded as UTF-8 one line at a time.
    """
    samples = []
    for line_no, line in _numbered_lines(data):
        if not line.strip():
            continue
        try:
            sample = Sample.model_validate_json(line)
        except ValidationError as e:
            raise DatasetParseError(line_no, format_validation_error(e)) from e
        if sample.coarse == CoarseLabel.BLANK:
            raise DatasetParseError(
                line_no, f"sample {sample.id} has a blank label; filter blanks before writing"
            )
        samples.append(sample)
    return samples


def format_dataset(samples: Sequence[Sample]) -> str:
    lines = []
    for sample in samples:
        if sample.coarse == CoarseLabel.BLANK:
            raise InvalidDatasetError(f"Refusing to write blank-labeled sample {sample.id}")
        lines.append(sample.model_dump_json(exclude_none=True))
    return "".join(line + "\n" for line in lines)


def read_dataset(path: Path) -> List[Sample]:
    try:
        data = Path(path).read_bytes()
    except FileNotFoundError as e:
        raise InvalidDatasetError(f"Dataset not found: {path}") from e
    return parse_dataset(data)


def write_dataset(samples: Sequence[Sample], path: Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(format_dataset(samples), encoding="utf-8")

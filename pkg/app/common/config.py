import threading
import tomllib
from pathlib import Path
from typing import Any, Optional

from pydantic import BaseModel, Field, ValidationError

from app.common.exceptions import ConfigurationError


def get_project_root() -> Path:
    """Get the project root directory"""
    return Path(__file__).resolve().parent.parent.parent


PROJECT_ROOT = get_project_root()


class LoggingSettings(BaseModel):
    print_level: str = Field("INFO", description="Console log level")
    logfile_level: str = Field("DEBUG", description="Level for per-run log files")


class PathSettings(BaseModel):
    workspace_root: Path = Field(
        default_factory=lambda: PROJECT_ROOT / "workspace",
        description="Default output root when an experiment names none",
    )
    lexicon: Path = Field(
        default_factory=lambda: PROJECT_ROOT / "config" / "lexicon.txt",
        description="Keyword lexicon used by the report labeler",
    )
    report_corpus: Path = Field(
        default_factory=lambda: PROJECT_ROOT / "config" / "report_corpus.toml",
        description="Example report sentences per fine subcategory",
    )


class AppConfig(BaseModel):
    logging: LoggingSettings = Field(default_factory=LoggingSettings)
    paths: PathSettings = Field(default_factory=PathSettings)


def resolve_path(value: Path | str) -> Path:
    """Resolve relative paths against the project root."""
    path = Path(value)
    return path if path.is_absolute() else PROJECT_ROOT / path


def format_validation_error(error: ValidationError) -> str:
    """Render pydantic errors as `dotted.key.path: message` lines."""
    lines = []
    for item in error.errors():
        key_path = ".".join(str(part) for part in item["loc"]) or "<root>"
        lines.append(f"{key_path}: {item['msg']}")
    return "; ".join(lines)


def load_toml(path: Path) -> dict[str, Any]:
    """Read a TOML file, mapping decode failures to ConfigurationError."""
    try:
        with path.open("rb") as f:
            return tomllib.load(f)
    except FileNotFoundError as e:
        raise ConfigurationError(f"Config file not found: {path}") from e
    except tomllib.TOMLDecodeError as e:
        raise ConfigurationError(f"{path}: {e}") from e


def parse_model(model: type[BaseModel], data: dict[str, Any], source: str):
    """Validate `data` into `model`, naming the failing key path on error."""
    try:
        return model.model_validate(data)
    except ValidationError as e:
        raise ConfigurationError(f"{source}: {format_validation_error(e)}") from e


class Config:
    _instance = None
    _lock = threading.Lock()
    _initialized = False

    def __new__(cls):
        if cls._instance is None:
            with cls._lock:
                if cls._instance is None:
                    cls._instance = super().__new__(cls)
        return cls._instance

    def __init__(self):
        if not self._initialized:
            with self._lock:
                if not self._initialized:
                    self._config: Optional[AppConfig] = None
                    self._load_initial_config()
                    self._initialized = True

    @staticmethod
    def _get_config_path() -> Optional[Path]:
        root = PROJECT_ROOT
        config_path = root / "config" / "config.toml"
        if config_path.exists():
            return config_path
        example_path = root / "config" / "config.example.toml"
        if example_path.exists():
            return example_path
        return None

    def _load_initial_config(self):
        config_path = self._get_config_path()
        raw_config = load_toml(config_path) if config_path else {}

        paths = {
            k: resolve_path(v) for k, v in raw_config.get("paths", {}).items() if v
        }
        self._config = parse_model(
            AppConfig,
            {"logging": raw_config.get("logging", {}), "paths": paths},
            str(config_path or "defaults"),
        )

    @property
    def logging(self) -> LoggingSettings:
        return self._config.logging

    @property
    def paths(self) -> PathSettings:
        return self._config.paths


config = Config()

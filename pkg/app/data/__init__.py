from app.data.io import format_dataset, parse_dataset, read_dataset, write_dataset
from app.data.noise import flip_count, inject_noise
from app.data.synthetic import ClusterSpec, SynthConfig, generate, synthesize


__all__ = [
    "ClusterSpec",
    "SynthConfig",
    "generate",
    "synthesize",
    "inject_noise",
    "flip_count",
    "read_dataset",
    "write_dataset",
    "parse_dataset",
    "format_dataset",
]

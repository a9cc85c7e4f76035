from __future__ import annotations

from dataclasses import dataclass, fields, replace


@dataclass(frozen=True)
class Config:
    """Tunable parameters shared by the validation and certification pipeline."""

    precision_bits: int = 192
    max_precision: int = 1024
    tolerance: float = 1e-30
    exponent_bound: int = 10
    height_bound: int = 3
    word_bound: int = 3
    seed: int = 0
    max_words: int = 200_000
    max_scan: int = 2_000_000

    def updated(self, **kwargs) -> "Config":
        known = {f.name for f in fields(self)}
        return replace(self, **{k: v for k, v in kwargs.items() if k in known and v is not None})

    def as_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


DEFAULT_CONFIG = Config()

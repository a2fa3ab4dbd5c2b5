from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Optional

from .automorphisms import DEFAULT_AUT_CAP, DEFAULT_TIMEOUT

REPORT_FORMATS = ("json", "csv", "markdown")


@dataclass(frozen=True)
class RunConfig:
    max_order: int = 243
    aut_enumeration_cap: int = DEFAULT_AUT_CAP
    per_group_timeout_seconds: float = DEFAULT_TIMEOUT
    parallelism_degree: int = field(default_factory=lambda: os.cpu_count() or 1)
    cache_dir: Optional[str] = None
    report_format: str = "json"

    def __post_init__(self) -> None:
        for name in ("max_order", "aut_enumeration_cap", "per_group_timeout_seconds", "parallelism_degree"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.report_format not in REPORT_FORMATS:
            raise ValueError(f"report_format must be one of {REPORT_FORMATS}")

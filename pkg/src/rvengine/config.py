"""Engine configuration: paths, calendar, cleaning and kernel parameters.

Loaded from a TOML file shared by the CLI and the service:

    [paths]
    raw_root = "data/raw"
    store_root = "data/store"
    measures_root = "data/measures"
    calendar = "calendar.toml"      # optional, bundled table otherwise

    [cleaning]
    k = 60
    delta = 0.1
    gamma = 0.06

    [kernel]
    base_interval_s = 1
    noise_rv_interval_s = 120
    sparse_interval_s = 1200
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import tomli

from rvengine.calendars import HolidayCalendar, default_calendar
from rvengine.cleaning import CleaningParams
from rvengine.kernel import KernelConfig


@dataclass
class EngineConfig:
    raw_root: Path = Path("data/raw")
    store_root: Path = Path("data/store")
    measures_root: Path = Path("data/measures")
    calendar: HolidayCalendar = field(default_factory=default_calendar)
    cleaning: CleaningParams = field(default_factory=CleaningParams)
    kernel: KernelConfig = field(default_factory=KernelConfig)

    @classmethod
    def load(cls, path: str | Path | None) -> "EngineConfig":
        if path is None:
            return cls()
        base = Path(path).parent
        with open(path, "rb") as fh:
            raw = tomli.load(fh)
        paths = raw.get("paths", {})

        def _path(key, default):
            return (base / paths[key]).resolve() if key in paths else default

        calendar = default_calendar()
        if "calendar" in paths:
            calendar = HolidayCalendar.from_toml(base / paths["calendar"])
        cleaning = CleaningParams(**raw.get("cleaning", {}))
        kernel_kwargs = raw.get("kernel", {})
        if "sparse_interval_s" in kernel_kwargs and "sparse_offsets" not in kernel_kwargs:
            kernel_kwargs["sparse_offsets"] = (
                kernel_kwargs["sparse_interval_s"] // kernel_kwargs.get("base_interval_s", 1)
            )
        kernel = KernelConfig(**kernel_kwargs)
        return cls(
            raw_root=_path("raw_root", cls.raw_root),
            store_root=_path("store_root", cls.store_root),
            measures_root=_path("measures_root", cls.measures_root),
            calendar=calendar,
            cleaning=cleaning,
            kernel=kernel,
        )

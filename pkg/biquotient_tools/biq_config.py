from pathlib import Path
from typing import Any
from collections import deque
from collections.abc import Iterator

import json
import os

from .curvature import MetricConfig

SEED_VARIABLE = "BIQ_SEED"
CURVATURE_SPECS = ("N1", "N2", "N3", "N4", "N5", "N6", "N7", "N8")

DEFAULTS = {
    "seed": 42,
    "restarts": 64,
    "max_iterations": 5000,
    "relative_tolerance": 1e-14,
    "positivity_threshold": 1e-6,
    "zero_threshold": 1e-10,
    "cheeger_t": 1.0,
    "grid_n": 720,
    "polish": 8,
    "step": 0.1,
    "thetas": [0.5],
    "curvature_specs": list(CURVATURE_SPECS),
}


def setting_values(config: dict[str, Any], keyword: str) -> Iterator:
    """
    Yield the values of a setting from the top level of config and from its setting groups, shallowest first.

    Groups are nested dictionaries such as {"curvature": {"restarts": 16}}; they are searched breadth first,
    so a top level value comes before a grouped one. A found value is not searched further, and lists are
    values rather than groups, so a list setting such as "thetas" is yielded whole.
    """
    groups = deque([config])
    while groups:
        group = groups.popleft()
        for key, value in group.items():
            if key == keyword:
                yield value
            elif isinstance(value, dict):
                groups.append(value)


class BiqConfig:
    """
    Run settings for the classification, oracle and curvature pipeline, read from a json file or dictionary.

    Settings sit at the top level or in setting groups (for example a "curvature" group); the shallowest
    occurrence of a key wins and missing keys fall back to DEFAULTS. The seed can be overridden by the
    BIQ_SEED environment variable.

    Attributes
    ----------
    config : dict
        Dictionary representation of the configuration.
    config_path : Path | None
        Absolute filepath of the configuration file, if one was read.
    """
    config: dict[str, Any]
    config_path: Path | None

    def __init__(self, config_path: str | Path | None = None, config_dict: dict | None = None):
        if config_path is not None:
            config_path = Path(config_path).expanduser().absolute()
        if config_dict is None:
            config_dict = {}
            if config_path is not None:
                with open(config_path) as file_load:
                    config_dict = json.load(file_load)
        if "biquotients" in config_dict:
            config_dict = config_dict["biquotients"]
        self.config = config_dict
        self.config_path = config_path

    def __getitem__(self, keyword: str) -> tuple:
        """Enables config[keyword]: every value of the setting keyword, shallowest first."""
        return tuple(setting_values(self.config, keyword))

    def _setting(self, keyword: str) -> Any:
        values = self[keyword]
        return values[0] if values else DEFAULTS[keyword]

    def _positive(self, keyword: str, kind: type) -> Any:
        value = self._setting(keyword)
        try:
            value = kind(value)
        except (TypeError, ValueError):
            raise ValueError(f"Setting {keyword} must be a {kind.__name__}, got {value!r}.")
        if value <= 0:
            raise ValueError(f"Setting {keyword} must be positive, got {value}.")
        return value

    @property
    def title(self) -> str:
        return self.config.get("title", "")

    @property
    def seed(self) -> int:
        """Seed of the curvature restarts; BIQ_SEED takes precedence over the file."""
        value = os.environ.get(SEED_VARIABLE, self._setting("seed"))
        try:
            return int(value)
        except (TypeError, ValueError):
            raise ValueError(f"Setting seed must be an integer, got {value!r}.")

    @property
    def restarts(self) -> int:
        return self._positive("restarts", int)

    @property
    def max_iterations(self) -> int:
        return self._positive("max_iterations", int)

    @property
    def relative_tolerance(self) -> float:
        return self._positive("relative_tolerance", float)

    @property
    def positivity_threshold(self) -> float:
        return self._positive("positivity_threshold", float)

    @property
    def zero_threshold(self) -> float:
        return self._positive("zero_threshold", float)

    @property
    def cheeger_t(self) -> float:
        return self._positive("cheeger_t", float)

    @property
    def grid_n(self) -> int:
        value = self._positive("grid_n", int)
        if value < 8:
            raise ValueError(f"Setting grid_n must be at least 8, got {value}.")
        return value

    @property
    def polish(self) -> int:
        return int(self._setting("polish"))

    @property
    def step(self) -> float:
        return self._positive("step", float)

    @property
    def thetas(self) -> list[float]:
        """Angles (radians) scanned by the curvature check."""
        return [float(t) for t in self._setting("thetas")]

    @property
    def curvature_specs(self) -> list[str]:
        return list(self._setting("curvature_specs"))

    def metric(self) -> MetricConfig:
        return MetricConfig(
            t=self.cheeger_t,
            positivity_threshold=self.positivity_threshold,
            zero_threshold=self.zero_threshold,
            max_iterations=self.max_iterations,
            relative_tolerance=self.relative_tolerance,
            step=self.step,
            polish=self.polish,
        )

    def metadata(self) -> dict[str, Any]:
        """Settings recorded in a report bundle."""
        return {
            "seed": self.seed,
            "restarts": self.restarts,
            "cheeger_t": self.cheeger_t,
            "positivity_threshold": self.positivity_threshold,
            "zero_threshold": self.zero_threshold,
            "max_iterations": self.max_iterations,
            "relative_tolerance": self.relative_tolerance,
            "grid_n": self.grid_n,
            "polish": self.polish,
            "thetas": self.thetas,
        }

"""Service and pipeline configuration.

Config files are flat key=value text ('#' starts a comment). The same
keys are mirrored by CLI flags, which take precedence. The environment
variable PHONECAM_CONFIG overrides the default config file path.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field, fields, replace

from .imaging import DEFAULT_S_MIN
from .saliency import DEFAULT_POINT_COUNT, DEFAULT_SMOOTH_RADIUS, DEFAULT_SUPPRESS_RADIUS
from .segmentation import DEFAULT_BIN_COUNT

CONFIG_ENV_VAR = "PHONECAM_CONFIG"
DEFAULT_CONFIG_PATH = "phonecam.conf"


class ConfigError(Exception):
    """Malformed config file or invalid value."""


def _color(text: str) -> tuple[int, int, int]:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 3:
        raise ConfigError(f"expected R,G,B color, got {text!r}")
    rgb = tuple(int(p) for p in parts)
    if any(not 0 <= v <= 255 for v in rgb):
        raise ConfigError(f"color channels must be 0..255: {text!r}")
    return rgb


@dataclass(frozen=True)
class PipelineConfig:
    """Vision tunables, forwarded unchanged to every analysis."""

    bin_count: int = DEFAULT_BIN_COUNT
    s_min: float = DEFAULT_S_MIN
    smooth_radius: int = DEFAULT_SMOOTH_RADIUS
    suppress_radius: float = DEFAULT_SUPPRESS_RADIUS
    k: int = DEFAULT_POINT_COUNT
    box_color: tuple[int, int, int] = (255, 0, 0)
    marker_color: tuple[int, int, int] = (160, 32, 240)


@dataclass(frozen=True)
class ServiceConfig:
    """Everything the ingestion service needs to run."""

    prefix: str = "astro_"
    poll_interval: float = 10.0
    inbox_path: str = "inbox"
    publish_path: str = "published"
    http_bind: str = "127.0.0.1:8700"
    console_path: str = ""
    pipeline: PipelineConfig = field(default_factory=PipelineConfig)

    def __post_init__(self):
        if not self.prefix:
            raise ConfigError("prefix must be nonempty")
        if self.poll_interval < 1.0:
            raise ConfigError(f"poll_interval must be >= 1 s, got {self.poll_interval}")

    @property
    def host(self) -> str:
        return self.http_bind.rsplit(":", 1)[0]

    @property
    def port(self) -> int:
        try:
            return int(self.http_bind.rsplit(":", 1)[1])
        except (IndexError, ValueError) as exc:
            raise ConfigError(f"http_bind must be host:port, got {self.http_bind!r}") from exc


_PIPELINE_PARSERS = {
    "bin_count": int,
    "s_min": float,
    "smooth_radius": int,
    "suppress_radius": float,
    "k": int,
    "box_color": _color,
    "marker_color": _color,
}

_SERVICE_PARSERS = {
    "prefix": str,
    "poll_interval": float,
    "inbox_path": str,
    "publish_path": str,
    "http_bind": str,
    "console_path": str,
}


def parse_config(text: str) -> ServiceConfig:
    """Parse flat key=value config text into a ServiceConfig."""
    service_kwargs: dict = {}
    pipeline_kwargs: dict = {}
    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key=value, got {raw_line!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        try:
            if key in _SERVICE_PARSERS:
                service_kwargs[key] = _SERVICE_PARSERS[key](value)
            elif key in _PIPELINE_PARSERS:
                pipeline_kwargs[key] = _PIPELINE_PARSERS[key](value)
            else:
                raise ConfigError(f"line {lineno}: unknown key {key!r}")
        except ConfigError:
            raise
        except ValueError as exc:
            raise ConfigError(f"line {lineno}: bad value for {key}: {exc}") from exc
    return ServiceConfig(pipeline=PipelineConfig(**pipeline_kwargs), **service_kwargs)


def load_config(path: str | None = None) -> ServiceConfig:
    """Load config from path, $PHONECAM_CONFIG, or defaults (in that order).

    A missing default file just yields the built-in defaults; an
    explicitly named file must exist.
    """
    explicit = path is not None or CONFIG_ENV_VAR in os.environ
    resolved = path or os.environ.get(CONFIG_ENV_VAR) or DEFAULT_CONFIG_PATH
    if not os.path.exists(resolved):
        if explicit:
            raise ConfigError(f"config file not found: {resolved}")
        return ServiceConfig()
    with open(resolved, encoding="utf-8") as fh:
        return parse_config(fh.read())


def apply_overrides(cfg: ServiceConfig, **overrides) -> ServiceConfig:
    """Overlay CLI-flag values (None entries are ignored) onto a config."""
    pipeline_names = {f.name for f in fields(PipelineConfig)}
    service_updates = {}
    pipeline_updates = {}
    for key, value in overrides.items():
        if value is None:
            continue
        if key in pipeline_names:
            pipeline_updates[key] = value
        else:
            service_updates[key] = value
    if pipeline_updates:
        service_updates["pipeline"] = replace(cfg.pipeline, **pipeline_updates)
    return replace(cfg, **service_updates) if service_updates else cfg

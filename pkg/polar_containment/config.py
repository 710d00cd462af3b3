"""Configuration file parsing and validation."""
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Optional

import yaml

from .corpus import CorpusError, parse_corpus
from .locators import cube, polar, slab

CONFIG_FILENAME = "containment.yaml"
DEFAULT_SIZES = [8, 16, 32, 64, 128, 256, 512, 1024]
DEFAULT_LEVELS = [0, 1, 2, 3]


@dataclass
class ToleranceConfig:
    """Boundary band settings."""
    eps_rel: float = 1e-12


@dataclass
class PolarConfig:
    """Polar sector table settings."""
    m_cap: int = polar.M_CAP


@dataclass
class CubeConfig:
    """Cube cell table settings."""
    m_cap: int = cube.M_CAP


@dataclass
class SlabConfig:
    """Slab table settings."""
    m_cap: int = slab.M_CAP


@dataclass
class VerifyConfig:
    """Correctness sweep settings; an empty corpus means the built-in corpora."""
    queries: int = 10_000
    corpus: list[str] = field(default_factory=list)


@dataclass
class BenchConfig:
    """Benchmark settings."""
    queries: int = 100_000
    repetitions: int = 5
    sizes: list[int] = field(default_factory=lambda: list(DEFAULT_SIZES))
    levels: list[int] = field(default_factory=lambda: list(DEFAULT_LEVELS))


@dataclass
class AppConfig:
    """Application configuration."""
    seed: int = 1
    tolerance: ToleranceConfig = field(default_factory=ToleranceConfig)
    polar: PolarConfig = field(default_factory=PolarConfig)
    cube: CubeConfig = field(default_factory=CubeConfig)
    slab: SlabConfig = field(default_factory=SlabConfig)
    verify: VerifyConfig = field(default_factory=VerifyConfig)
    bench: BenchConfig = field(default_factory=BenchConfig)


class ConfigError(Exception):
    """Configuration error."""
    pass


def find_config_path() -> Optional[Path]:
    """Find config file path using priority order.

    Priority:
        1. Current directory containment.yaml
        2. ~/.config/polar-containment/config.yaml

    Returns:
        Path to config file if found, None otherwise
    """
    config_path = Path(CONFIG_FILENAME)
    if config_path.exists():
        return config_path

    config_path = Path.home() / ".config" / "polar-containment" / "config.yaml"
    if config_path.exists():
        return config_path

    return None


def _section(data: dict, name: str) -> dict:
    section = data.get(name) or {}
    if not isinstance(section, dict):
        raise ConfigError(f"'{name}' must be a dictionary")
    return section


def _positive_int(section: dict, key: str, default: int, where: str) -> int:
    value = section.get(key, default)
    if isinstance(value, bool) or not isinstance(value, int) or value < 1:
        raise ConfigError(f"{where}.{key} must be a positive integer, got {value!r}")
    return value


def _int_list(section: dict, key: str, default: list[int], where: str, minimum: int) -> list[int]:
    values = section.get(key, default)
    if not isinstance(values, list) or not values:
        raise ConfigError(f"{where}.{key} must be a non-empty list")
    for value in values:
        if isinstance(value, bool) or not isinstance(value, int) or value < minimum:
            raise ConfigError(f"{where}.{key} entries must be integers >= {minimum}, got {value!r}")
    return values


def parse_config(data: Any) -> AppConfig:
    """Validate a parsed YAML document into an AppConfig.

    Raises:
        ConfigError: If any value is missing its expected type or range
    """
    if data is None:
        return AppConfig()
    if not isinstance(data, dict):
        raise ConfigError("Config file must contain a YAML dictionary")

    seed = data.get("seed", 1)
    if isinstance(seed, bool) or not isinstance(seed, int) or seed < 0:
        raise ConfigError(f"seed must be a non-negative integer, got {seed!r}")

    eps_rel = _section(data, "tolerance").get("eps_rel", 1e-12)
    if isinstance(eps_rel, bool) or not isinstance(eps_rel, (int, float)) or not eps_rel > 0:
        raise ConfigError(
            f"tolerance.eps_rel must be a positive number, got {eps_rel!r}. "
            "Typical values are 1e-12 to 1e-9"
        )

    verify_data = _section(data, "verify")
    corpus = verify_data.get("corpus", [])
    if not isinstance(corpus, list):
        raise ConfigError("verify.corpus must be a list of corpus strings")
    for entry in corpus:
        try:
            parse_corpus(str(entry))
        except CorpusError as e:
            raise ConfigError(f"verify.corpus: {e}")

    bench_data = _section(data, "bench")
    return AppConfig(
        seed=seed,
        tolerance=ToleranceConfig(eps_rel=float(eps_rel)),
        polar=PolarConfig(
            m_cap=_positive_int(_section(data, "polar"), "m_cap", polar.M_CAP, "polar")
        ),
        cube=CubeConfig(m_cap=_positive_int(_section(data, "cube"), "m_cap", cube.M_CAP, "cube")),
        slab=SlabConfig(m_cap=_positive_int(_section(data, "slab"), "m_cap", slab.M_CAP, "slab")),
        verify=VerifyConfig(
            queries=_positive_int(verify_data, "queries", 10_000, "verify"),
            corpus=[str(entry) for entry in corpus],
        ),
        bench=BenchConfig(
            queries=_positive_int(bench_data, "queries", 100_000, "bench"),
            repetitions=_positive_int(bench_data, "repetitions", 5, "bench"),
            sizes=_int_list(bench_data, "sizes", DEFAULT_SIZES, "bench", minimum=3),
            levels=_int_list(bench_data, "levels", DEFAULT_LEVELS, "bench", minimum=0),
        ),
    )


def load_config(config_path: Optional[Path] = None) -> AppConfig:
    """Load and validate configuration from YAML file.

    Args:
        config_path: Path to a config file. If None, uses find_config_path() to search:
                    1. ./containment.yaml
                    2. ~/.config/polar-containment/config.yaml
                    Built-in defaults are used when neither exists.

    Returns:
        Validated AppConfig object

    Raises:
        ConfigError: If an explicit file is missing or any file is invalid
    """
    if config_path is None:
        config_path = find_config_path()
        if config_path is None:
            return AppConfig()

    if not config_path.exists():
        raise ConfigError(f"Config file not found: {config_path}")

    try:
        with open(config_path, "r") as f:
            data = yaml.safe_load(f)
    except yaml.YAMLError as e:
        raise ConfigError(f"Invalid YAML in config file: {e}")

    return parse_config(data)


def write_default_config(config_path: Optional[Path] = None) -> Path:
    """Write the default configuration to a new file.

    Args:
        config_path: Destination (defaults to ./containment.yaml)

    Returns:
        The path written

    Raises:
        ConfigError: If the file already exists
    """
    if config_path is None:
        config_path = Path(CONFIG_FILENAME)
    if config_path.exists():
        raise ConfigError(f"Config file already exists: {config_path}")

    config_path.parent.mkdir(parents=True, exist_ok=True)
    with open(config_path, "w") as f:
        yaml.dump(asdict(AppConfig()), f, default_flow_style=False, sort_keys=False)
    return config_path

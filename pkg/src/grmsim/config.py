"""Run configuration: a flat YAML file, validated up front.

Recognised keys::

    mode                    independent | dependency
    k_values                list of ints or "a..b" (inclusive)
    sigma_values            list of positive reals (independent mode only)
    profile                 small | medium | large, a linear spec mapping,
                            or a list of those (dependency mode only)
    items_values            list of ints
    sample_sizes            list of ints
    replications            int
    master_seed             unsigned 64-bit int
    predictor_coefficient   real
    predictor_noise_sd      positive real
    output_dir              path
    save_replications       bool; also write per-replication records

Precedence is command-line flags > file > defaults.
"""

from __future__ import annotations

import numbers
from dataclasses import dataclass, field
from pathlib import Path

import yaml

from .dependency import LINEAR, NAMED_PROFILES, DependencyProfile, named_profile
from .engine import PredictorSpec
from .errors import ConfigError

MODES = ("independent", "dependency")
QUICK_REPLICATIONS = 50
RESOLVED_CONFIG_NAME = "resolved_config.yaml"

DEFAULT_INDEPENDENT_K = list(range(2, 101))
DEFAULT_SIGMAS = [round(0.1 * i, 1) for i in range(1, 11)]
DEFAULT_ITEMS = [1, 3]
DEFAULT_SAMPLE_SIZES = [100, 500, 1000]
DEFAULT_REPLICATIONS = 500
DEFAULT_SEED = 20240601
DEFAULT_OUTPUT_DIR = "results"

KEYS = (
    "mode",
    "k_values",
    "sigma_values",
    "profile",
    "items_values",
    "sample_sizes",
    "replications",
    "master_seed",
    "predictor_coefficient",
    "predictor_noise_sd",
    "output_dir",
    "save_replications",
)
PROFILE_KEYS = {"kind", "name", "k_min", "k_max", "sigma_start", "sigma_end"}


@dataclass(frozen=True)
class RunConfig:
    mode: str
    k_values: tuple[int, ...] | None
    sigma_values: tuple[float, ...] | None
    profiles: tuple[DependencyProfile, ...]
    items_values: tuple[int, ...]
    sample_sizes: tuple[int, ...]
    replications: int
    master_seed: int
    predictor: PredictorSpec = field(default_factory=PredictorSpec)
    output_dir: str = DEFAULT_OUTPUT_DIR
    save_replications: bool = False

    def to_dict(self) -> dict:
        out = {
            "mode": self.mode,
            "k_values": list(self.k_values) if self.k_values is not None else None,
        }
        if self.mode == "independent":
            out["sigma_values"] = list(self.sigma_values)
        else:
            out["profile"] = [
                p.name if p.name in NAMED_PROFILES and p == named_profile(p.name) else p.to_dict()
                for p in self.profiles
            ]
        out.update(
            items_values=list(self.items_values),
            sample_sizes=list(self.sample_sizes),
            replications=self.replications,
            master_seed=self.master_seed,
            predictor_coefficient=self.predictor.coefficient,
            predictor_noise_sd=self.predictor.noise_sd,
            output_dir=self.output_dir,
            save_replications=self.save_replications,
        )
        return out


def _is_int(v) -> bool:
    return isinstance(v, numbers.Integral) and not isinstance(v, bool)


def _is_real(v) -> bool:
    return isinstance(v, numbers.Real) and not isinstance(v, bool)


def _int_list(raw, path: str, minimum: int) -> tuple[int, ...]:
    if isinstance(raw, str) and ".." in raw:
        lo, _, hi = raw.partition("..")
        try:
            lo, hi = int(lo), int(hi)
        except ValueError:
            raise ConfigError(path, f"cannot parse range {raw!r}") from None
        if hi < lo:
            raise ConfigError(path, f"empty range {raw!r}")
        raw = list(range(lo, hi + 1))
    if _is_int(raw):
        raw = [raw]
    if not isinstance(raw, (list, tuple)) or not raw:
        raise ConfigError(path, "expected a non-empty list")
    for i, v in enumerate(raw):
        if not _is_int(v):
            raise ConfigError(f"{path}[{i}]", f"expected an integer, got {v!r}")
        if v < minimum:
            raise ConfigError(f"{path}[{i}]", f"must be >= {minimum}, got {v}")
    if len(set(raw)) != len(raw):
        raise ConfigError(path, "contains duplicate values")
    return tuple(int(v) for v in raw)


def _sigma_list(raw, path: str) -> tuple[float, ...]:
    if _is_real(raw):
        raw = [raw]
    if not isinstance(raw, (list, tuple)) or not raw:
        raise ConfigError(path, "expected a non-empty list")
    for i, v in enumerate(raw):
        if not _is_real(v) or not v > 0 or v != v or v == float("inf"):
            raise ConfigError(f"{path}[{i}]", f"sigma must be a positive finite number, got {v!r}")
    if len(set(raw)) != len(raw):
        raise ConfigError(path, "contains duplicate values")
    return tuple(float(v) for v in raw)


def _profile(raw, path: str) -> DependencyProfile:
    if isinstance(raw, str):
        if raw not in NAMED_PROFILES:
            raise ConfigError(path, f"unknown profile {raw!r}; expected {sorted(NAMED_PROFILES)} or a mapping")
        return named_profile(raw)
    if not isinstance(raw, dict):
        raise ConfigError(path, "expected a profile name or mapping")
    unknown = set(raw) - PROFILE_KEYS
    if unknown:
        raise ConfigError(f"{path}.{sorted(unknown)[0]}", "unknown key")
    kind = raw.get("kind", LINEAR)
    if kind != LINEAR:
        raise ConfigError(f"{path}.kind", f"only linear dependency profiles are supported, got {kind!r}")
    for key in ("k_min", "k_max"):
        if not _is_int(raw.get(key)):
            raise ConfigError(f"{path}.{key}", "expected an integer")
    for key in ("sigma_start", "sigma_end"):
        if not _is_real(raw.get(key)):
            raise ConfigError(f"{path}.{key}", "expected a number")
    if raw["k_min"] < 2 or raw["k_max"] <= raw["k_min"]:
        raise ConfigError(path, "need 2 <= k_min < k_max")
    if not raw["sigma_start"] > 0:
        raise ConfigError(f"{path}.sigma_start", "must be positive")
    if not raw["sigma_end"] > raw["sigma_start"]:
        raise ConfigError(f"{path}.sigma_end", "profile must be increasing (sigma_end > sigma_start)")
    name = raw.get("name")
    if name is not None and not isinstance(name, str):
        raise ConfigError(f"{path}.name", "expected a string")
    return DependencyProfile.linear(
        raw["k_min"], raw["k_max"], raw["sigma_start"], raw["sigma_end"], name=name
    )


def _profiles(raw) -> tuple[DependencyProfile, ...]:
    if raw is None:
        return tuple(named_profile(n) for n in NAMED_PROFILES)
    if not isinstance(raw, list):
        return (_profile(raw, "profile"),)
    if not raw:
        raise ConfigError("profile", "expected at least one profile")
    profiles = tuple(_profile(p, f"profile[{i}]") for i, p in enumerate(raw))
    labels = [p.label for p in profiles]
    if len(set(labels)) != len(labels):
        raise ConfigError("profile", "profile labels must be unique")
    return profiles


def config_from_dict(data: dict | None) -> RunConfig:
    """Validate a raw mapping and fill in defaults."""
    data = {} if data is None else data
    if not isinstance(data, dict):
        raise ConfigError("", "config must be a mapping of keys to values")
    for key in data:
        if key not in KEYS:
            raise ConfigError(str(key), "unknown key")

    mode = data.get("mode", "independent")
    if mode not in MODES:
        raise ConfigError("mode", f"expected one of {MODES}, got {mode!r}")

    if mode == "independent":
        if data.get("profile") is not None:
            raise ConfigError("profile", "only valid in dependency mode")
        k_values = _int_list(data.get("k_values", DEFAULT_INDEPENDENT_K), "k_values", 2)
        sigma_values = _sigma_list(data.get("sigma_values", DEFAULT_SIGMAS), "sigma_values")
        profiles = ()
    else:
        if data.get("sigma_values") is not None:
            raise ConfigError("sigma_values", "not used in dependency mode; sigma comes from the profile")
        profiles = _profiles(data.get("profile"))
        sigma_values = None
        if data.get("k_values") is not None:
            k_values = _int_list(data["k_values"], "k_values", 2)
            for p in profiles:
                outside = [k for k in k_values if not p.k_min <= k <= p.k_max]
                if outside:
                    raise ConfigError(
                        "k_values", f"K={outside[0]} outside profile {p.label} range [{p.k_min}, {p.k_max}]"
                    )
        else:
            ranges = {(p.k_min, p.k_max) for p in profiles}
            # a shared range is echoed explicitly; mixed ranges stay per-profile
            k_values = tuple(profiles[0].k_values()) if len(ranges) == 1 else None

    items_values = _int_list(data.get("items_values", DEFAULT_ITEMS), "items_values", 1)
    sample_sizes = _int_list(data.get("sample_sizes", DEFAULT_SAMPLE_SIZES), "sample_sizes", 10)

    replications = data.get("replications", DEFAULT_REPLICATIONS)
    if not _is_int(replications) or replications < 1:
        raise ConfigError("replications", f"expected a positive integer, got {replications!r}")
    seed = data.get("master_seed", DEFAULT_SEED)
    if not _is_int(seed) or not 0 <= seed < 2**64:
        raise ConfigError("master_seed", f"expected an unsigned 64-bit integer, got {seed!r}")

    coef = data.get("predictor_coefficient", 0.5)
    noise = data.get("predictor_noise_sd", 0.2)
    if not _is_real(coef) or coef != coef:
        raise ConfigError("predictor_coefficient", "expected a number")
    if not _is_real(noise) or not noise > 0:
        raise ConfigError("predictor_noise_sd", "expected a positive number")

    output_dir = data.get("output_dir", DEFAULT_OUTPUT_DIR)
    if not isinstance(output_dir, str) or not output_dir:
        raise ConfigError("output_dir", "expected a path string")
    save = data.get("save_replications", False)
    if not isinstance(save, bool):
        raise ConfigError("save_replications", "expected true or false")

    return RunConfig(
        mode=mode,
        k_values=k_values,
        sigma_values=sigma_values,
        profiles=profiles,
        items_values=items_values,
        sample_sizes=sample_sizes,
        replications=int(replications),
        master_seed=int(seed),
        predictor=PredictorSpec(float(coef), float(noise)),
        output_dir=output_dir,
        save_replications=save,
    )


def load_config(path) -> RunConfig:
    text = Path(path).read_text(encoding="utf-8")
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError("", f"cannot parse {path}: {exc}") from None
    return config_from_dict(data)


def parse_config(path=None, *, seed=None, replications=None, out=None, quick=False) -> RunConfig:
    """Load ``path`` (or defaults) and apply command-line overrides."""
    config = load_config(path) if path is not None else config_from_dict({})
    raw = config.to_dict()
    if quick:
        raw["replications"] = QUICK_REPLICATIONS
    if replications is not None:
        raw["replications"] = replications
    if seed is not None:
        raw["master_seed"] = seed
    if out is not None:
        raw["output_dir"] = str(out)
    return config_from_dict(raw)


def dump_config(config: RunConfig) -> str:
    return yaml.safe_dump(config.to_dict(), sort_keys=False, default_flow_style=None)


def write_resolved_config(config: RunConfig, output_dir) -> Path:
    path = Path(output_dir) / RESOLVED_CONFIG_NAME
    path.write_text(dump_config(config), encoding="utf-8")
    return path


"""
Validation utilities for flat experiment configuration.

Config files and command-line overrides are flat `key=value` pairs; this
module checks the keys and folds them into the nested ExperimentConfig.
"""

from typing import Any, Dict, List, Mapping, Optional, Tuple

from pydantic import ValidationError

from .errors import ConfigError
from .types.experiment import ExperimentConfig

# Flat key -> field of GpfsoConfig.
GPFSO_KEYS = {
    "n_particles": "n_particles",
    "c_ess": "c_ess",
    "nu": "nu",
    "alpha": "alpha",
    "c_sigma": "c_sigma",
    "sigma_diag": "sigma_diag",
    "burn_in": "burn_in",
    "seed": "seed",
    "resampling": "resampling",
}

KERNEL_KEYS = {
    "kernel": "kind",
    "mix_weight": "mix_weight",
    "mix_variant": "mix_variant",
    "mix_nu": "mix_nu",
    "iota": "iota",
}

SCHEDULE_KEYS = {
    "schedule_a": "a",
    "schedule_b": "b",
    "t0": "t0",
    "rho": "rho",
}

EXPERIMENT_KEYS = [
    name for name in ExperimentConfig.model_fields if name != "gpfso"
]

LIST_KEYS = {"sigma_diag", "thresholds"}

# Keys whose empty value means "unset".
OPTIONAL_EMPTY = {
    "dim",
    "prior_shift",
    "prior_var",
    "record_stride",
    "slope_lo",
    "slope_hi",
    "data_seed",
    "dataset_size",
    "data_file",
    "mix_nu",
    "sigma_diag",
}


def known_keys() -> List[str]:
    return list(GPFSO_KEYS) + list(KERNEL_KEYS) + list(SCHEDULE_KEYS) + EXPERIMENT_KEYS


def is_valid_key(key: str) -> bool:
    """
    Check a flat config key.

    Args:
        key (str): Key as written in a config file or after `--`.

    Returns:
        bool: True if the key maps onto a config field.
    """
    return key in known_keys()


def validate_keys(keys: List[str]) -> Tuple[bool, List[str]]:
    """
    Validate a list of keys and return the unknown ones.

    Args:
        keys (List[str]): Keys to check.

    Returns:
        Tuple[bool, List[str]]: (all_valid, list_of_unknown_keys)
    """
    invalid = [k for k in keys if not is_valid_key(k)]
    return len(invalid) == 0, invalid


def parse_float_list(value: str) -> List[float]:
    """'0.1, 0.16' -> [0.1, 0.16]."""
    try:
        return [float(v) for v in value.replace(";", ",").split(",") if v.strip()]
    except ValueError as e:
        raise ConfigError(f"expected a comma-separated list of numbers, got {value!r}") from e


def get_key_groups() -> Dict[str, List[str]]:
    """Known keys, grouped by the config section they land in."""
    return {
        "optimizer": list(GPFSO_KEYS),
        "kernel": list(KERNEL_KEYS),
        "schedule": list(SCHEDULE_KEYS),
        "experiment": EXPERIMENT_KEYS,
    }


def format_validation_error(invalid_keys: List[str]) -> str:
    """
    Format an error message for unknown config keys.

    Args:
        invalid_keys (List[str]): Unknown keys.

    Returns:
        str: Formatted error message.
    """
    groups = get_key_groups()
    error_msg = f"Unknown config key(s): {', '.join(invalid_keys)}\n\n"
    error_msg += "Keys must be one of:\n"
    for name, keys in groups.items():
        error_msg += f"• {name}: {', '.join(keys)}\n"
    return error_msg.rstrip("\n")


def _clean(key: str, value: Any) -> Any:
    if not isinstance(value, str):
        return value
    value = value.strip()
    if value == "" and key in OPTIONAL_EMPTY:
        return None
    if key in LIST_KEYS:
        return parse_float_list(value)
    return value


def build_experiment_config(
    flat: Mapping[str, Any], base: Optional[ExperimentConfig] = None
) -> ExperimentConfig:
    """
    Fold flat key-value pairs into an ExperimentConfig.

    Values may be strings (pydantic coerces them) or already typed.

    Args:
        flat (Mapping[str, Any]): Flat settings; later sources should already
            have overridden earlier ones.
        base (ExperimentConfig, optional): Settings the pairs are applied on.

    Returns:
        ExperimentConfig: The validated config.

    Raises:
        ConfigError: On unknown keys or invalid values.
    """
    ok, invalid = validate_keys(list(flat))
    if not ok:
        raise ConfigError(format_validation_error(invalid))

    data = base.model_dump(mode="json") if base is not None else {}
    gpfso = dict(data.pop("gpfso", {}))
    kernel = dict(gpfso.pop("kernel", {}) or {})
    schedule = dict(gpfso.pop("schedule", {}) or {})

    for key, raw in flat.items():
        value = _clean(key, raw)
        if key in GPFSO_KEYS:
            gpfso[GPFSO_KEYS[key]] = value
        elif key in KERNEL_KEYS:
            kernel[KERNEL_KEYS[key]] = value
        elif key in SCHEDULE_KEYS:
            schedule[SCHEDULE_KEYS[key]] = value
        else:
            data[key] = value

    # A new alpha must flow into the schedule, and an inherited rho must stay below it.
    if "alpha" in flat:
        schedule.pop("alpha", None)
        rho = schedule.get("rho")
        if "rho" not in flat and rho is not None and float(rho) >= float(flat["alpha"]):
            schedule.pop("rho")
    if kernel:
        gpfso["kernel"] = kernel
    if schedule:
        gpfso["schedule"] = schedule
    data["gpfso"] = gpfso
    try:
        return ExperimentConfig.model_validate(data)
    except ValidationError as e:
        raise ConfigError(f"invalid configuration:\n{e}") from e

"""
Run configuration schema

YAML files are validated against pydantic models with unknown keys
rejected. Shared settings (seed, workers, out) resolve as
CLI flag > YAML > environment > default.
"""

import os
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

COMMANDS = ("sweep", "meanfield", "instability", "xeb", "collapse")
SIZED_COMMANDS = ("sweep", "instability", "xeb")

DEFAULT_SEED = 20240601
DEFAULT_WORKERS = 1


class StrictModel(BaseModel):
    model_config = ConfigDict(extra="forbid")


class TopologyConfig(StrictModel):
    """n stands in for the size list of a section that omits sizes"""
    kind: Literal["chain-1d-periodic", "all-to-all"] = "all-to-all"
    n: Optional[int] = Field(default=None, ge=2)


class DisorderConfig(StrictModel):
    p: float = Field(default=0.5, ge=0.0, le=1.0)
    q1: Optional[float] = Field(default=None, ge=0.0, lt=1.0)
    q2: Optional[float] = Field(default=None, ge=0.0, lt=1.0)
    mode: Optional[Literal["spacetime", "quenched"]] = None
    # root of the quenched-field streams; instability runs only
    seed: Optional[int] = None


class MitigationConfig(StrictModel):
    mode: Literal["zero-mean-field", "fixed"] = "zero-mean-field"
    q_a: Optional[float] = Field(default=None, ge=0.0, lt=1.0)

    @model_validator(mode="after")
    def _fixed_needs_rate(self):
        if self.mode == "fixed" and self.q_a is None:
            raise ValueError("mitigation.q_a is required when mitigation.mode is 'fixed'")
        return self


class SweepSection(StrictModel):
    engine: Literal["replica", "exact"] = "replica"
    sizes: Optional[List[int]] = Field(default=None, min_length=1)
    sigma_ratios: List[float] = Field(min_length=1)
    realizations: int = Field(ge=1)
    probe: Literal["I_ab", "mutual-information", "renyi2-probe", "sign-traces", "fidelities"]
    q_bar: float = Field(default=0.2, gt=0.0, lt=1.0)
    depth_rule: Literal["n", "fixed"] = "n"


class MeanFieldSection(StrictModel):
    J: float = Field(default=1.0, gt=0.0)
    delta1_values: List[float] = Field(min_length=1)
    gamma_bar: Optional[float] = Field(default=None, ge=0.0)
    t_end: float = Field(default=50.0, gt=0.0)
    dt: Optional[float] = Field(default=None, gt=0.0)
    threshold_J: List[float] = Field(default_factory=lambda: [1.0])


class InstabilitySection(StrictModel):
    sizes: Optional[List[int]] = Field(default=None, min_length=1)
    d_max: int = Field(ge=2)
    form: Literal["haar-on-A", "product-on-A"] = "product-on-A"
    repeats: int = Field(default=1, ge=1)
    rare_region: bool = True
    max_draws: int = Field(default=256, ge=1)


class FidelitySettingConfig(StrictModel):
    label: str
    sigma_ratio: float = Field(ge=0.0)
    mitigated: bool = True


class XebSection(StrictModel):
    sizes: Optional[List[int]] = Field(default=None, min_length=1)
    depths: List[int] = Field(min_length=1)
    settings: List[FidelitySettingConfig] = Field(min_length=1)
    realizations: int = Field(ge=1)
    q_bar: float = Field(default=0.1, gt=0.0, lt=1.0)


class CollapseScanConfig(StrictModel):
    sigma_min: float
    sigma_max: float
    sigma_step: float = Field(gt=0.0)
    mu_min: float = Field(gt=0.0)
    mu_max: float = Field(gt=0.0)
    mu_step: float = Field(gt=0.0)


class CollapseSection(StrictModel):
    input: str
    sigma_c: float = 0.65
    mu: float = Field(default=1.0, gt=0.0)
    y_exponent: Optional[float] = None
    scan: Optional[CollapseScanConfig] = None


class RunConfig(StrictModel):
    """Top-level schema; exactly the section matching the command is required"""
    command: Optional[Literal["sweep", "meanfield", "instability", "xeb", "collapse"]] = None
    seed: Optional[int] = None
    workers: Optional[int] = Field(default=None, ge=1)
    out: Optional[str] = None
    topology: TopologyConfig = Field(default_factory=TopologyConfig)
    depth: Optional[int] = Field(default=None, ge=0)
    disorder: DisorderConfig = Field(default_factory=DisorderConfig)
    mitigation: MitigationConfig = Field(default_factory=MitigationConfig)
    sweep: Optional[SweepSection] = None
    meanfield: Optional[MeanFieldSection] = None
    instability: Optional[InstabilitySection] = None
    xeb: Optional[XebSection] = None
    collapse: Optional[CollapseSection] = None

    def require(self, command: str) -> Any:
        """The section for a command; a missing section is reported as a missing key"""
        if self.command is not None and self.command != command:
            raise ConfigError(f"command: config is for '{self.command}', not '{command}'")
        section = getattr(self, command)
        if section is None:
            raise ConfigError(f"{command}: Field required")
        if command == "sweep" and section.depth_rule == "fixed" and self.depth is None:
            raise ConfigError("depth: Field required when sweep.depth_rule is 'fixed'")
        if command == "instability" and (self.disorder.q1 is None or self.disorder.q2 is None):
            raise ConfigError("disorder.q1 / disorder.q2: Field required for instability runs")
        if command != "instability" and self.disorder.seed is not None:
            raise ConfigError("disorder.seed: only instability runs draw quenched fields from it")
        if command in SIZED_COMMANDS:
            self._resolve_sizes(command, section)
        elif self.topology.n is not None:
            raise ConfigError(f"topology.n: '{command}' takes no system size")
        return section

    def _resolve_sizes(self, command: str, section: Any) -> None:
        """topology.n is shorthand for a one-element size list"""
        if section.sizes is not None and self.topology.n is not None and section.sizes != [self.topology.n]:
            raise ConfigError(f"topology.n: give either topology.n or {command}.sizes, not both")
        if section.sizes is None:
            if self.topology.n is None:
                raise ConfigError(f"{command}.sizes: Field required (or set topology.n)")
            section.sizes = [self.topology.n]


class ConfigError(ValueError):
    """Schema violation, reported with the dotted key path"""


def format_validation_error(error: ValidationError) -> str:
    lines = []
    for err in error.errors():
        key = ".".join(str(part) for part in err["loc"]) or "<root>"
        lines.append(f"{key}: {err['msg']}")
    return "; ".join(lines)


def parse_config(data: Optional[Dict[str, Any]]) -> RunConfig:
    try:
        return RunConfig.model_validate(data or {})
    except ValidationError as e:
        raise ConfigError(format_validation_error(e)) from e


def load_config(path: Path) -> RunConfig:
    try:
        with open(path) as f:
            data = yaml.safe_load(f)
    except yaml.YAMLError as e:
        raise ConfigError(f"Invalid YAML in {path}: {e}") from e
    if data is not None and not isinstance(data, dict):
        raise ConfigError(f"<root>: expected a mapping in {path}")
    return parse_config(data)


def resolve_setting(cli_value: Any, yaml_value: Any, env_var: str, default: Any, cast=int) -> Any:
    """CLI flag > YAML > environment > default"""
    if cli_value is not None:
        return cli_value
    if yaml_value is not None:
        return yaml_value
    env_value = os.getenv(env_var)
    if env_value:
        return cast(env_value)
    return default

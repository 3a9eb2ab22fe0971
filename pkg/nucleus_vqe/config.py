"""Run configuration files.

One YAML document may carry a section for every command plus a top-level
seed. Unknown keys anywhere are rejected.
"""

from __future__ import annotations

from pathlib import Path
from typing import List, Literal, Optional, Union

import structlog
import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator
from typing_extensions import Annotated

from nucleus_vqe import (
    APP_NAME,
    EncodingKind,
    GradientMode,
    Method,
    RadialPower,
    Scheme,
    SimulationMode,
)
from nucleus_vqe.errors import ConfigError
from nucleus_vqe.hamiltonian import (
    ExponentialPotential,
    HamiltonianSpec,
    NuclearSystem,
    PolynomialPotential,
)
from nucleus_vqe.optimizers import GDConfig, SPSAConfig
from nucleus_vqe.simulator import NoiseModel
from nucleus_vqe.systems import preset
from nucleus_vqe.vqe import StageConfig

log = structlog.get_logger(APP_NAME)


class Section(BaseModel):
    """Base for every configuration section."""

    model_config = ConfigDict(extra="forbid", frozen=True)


class SystemSection(Section):
    target_mass_number: int = Field(ge=1)
    hbar_omega: float = Field(gt=0)
    projectile_mass_number: int = Field(1, ge=1)


class ExponentialSection(Section):
    kind: Literal["exponential"]
    v0: float
    c: float = Field(ge=0)


class PolynomialSection(Section):
    kind: Literal["polynomial"]
    terms: List[float] = Field(min_length=1)


PotentialSection = Annotated[
    Union[ExponentialSection, PolynomialSection], Field(discriminator="kind")
]


class HamiltonianSection(Section):
    """Either a named preset or an explicit system and potential."""

    preset: Optional[str] = None
    system: Optional[SystemSection] = None
    potential: Optional[PotentialSection] = None
    basis_size: int = Field(4, ge=2)
    truncation: int = Field(2, ge=0)
    radial_power: Optional[RadialPower] = None

    @model_validator(mode="after")
    def _preset_or_explicit(self) -> HamiltonianSection:
        explicit = self.system is not None or self.potential is not None
        if self.preset is not None and explicit:
            raise ValueError("give either 'preset' or 'system' + 'potential', not both")
        if self.preset is None and (self.system is None or self.potential is None):
            raise ValueError("'system' and 'potential' are required without a 'preset'")
        return self

    def spec(
        self, basis_size: Optional[int] = None, truncation: Optional[int] = None
    ) -> HamiltonianSpec:
        """Build the Hamiltonian specification, optionally at another (N, K)."""
        size = self.basis_size if basis_size is None else basis_size
        order = self.truncation if truncation is None else truncation
        if self.preset is not None:
            return preset(self.preset, size, order, self.radial_power)
        assert self.system is not None and self.potential is not None
        potential: Union[ExponentialPotential, PolynomialPotential]
        if isinstance(self.potential, ExponentialSection):
            potential = ExponentialPotential(v0=self.potential.v0, c=self.potential.c)
        else:
            potential = PolynomialPotential(terms=tuple(self.potential.terms))
        return HamiltonianSpec(
            system=NuclearSystem(
                target_mass_number=self.system.target_mass_number,
                hbar_omega=self.system.hbar_omega,
                projectile_mass_number=self.system.projectile_mass_number,
            ),
            potential=potential,
            basis_size=size,
            truncation=order,
            radial_power=self.radial_power or RadialPower.padded,
        )


class SweepSection(Section):
    """Grid of (N, K) for `eigensolve`."""

    basis_sizes: List[Annotated[int, Field(ge=2)]] = Field(min_length=1)
    truncations: List[Annotated[int, Field(ge=0)]] = Field(min_length=1)


class EncodeSection(Section):
    encoding: EncodingKind = EncodingKind.gray
    qubit_order: Literal["left", "right"] = "left"
    decimals: int = Field(3, ge=0, le=12)


class CountsSection(Section):
    """Grid for `counts`; sizes are N, powers of two for the compact codes."""

    encodings: List[EncodingKind] = Field(
        default_factory=lambda: [EncodingKind.one_hot, EncodingKind.binary, EncodingKind.gray]
    )
    sizes: List[Annotated[int, Field(ge=2)]] = Field(default_factory=lambda: [4, 8, 16])
    truncations: Optional[List[Annotated[int, Field(ge=0)]]] = None


class GroupsSection(Section):
    encoding: EncodingKind = EncodingKind.gray
    scheme: Scheme = Scheme.dgc


class NoiseSection(Section):
    p1: float = Field(0.001, ge=0, le=1)
    p2: float = Field(0.01, ge=0, le=1)
    readout_eps: float = Field(0.02, ge=0, le=1)

    def model(self) -> NoiseModel:
        """The simulator noise model."""
        return NoiseModel(self.p1, self.p2, self.readout_eps)


class SPSASection(Section):
    a: Optional[float] = Field(None, gt=0)
    c: float = Field(0.1, gt=0)
    A: Optional[float] = Field(None, ge=0)
    alpha: float = 0.602
    gamma: float = 0.101
    target_step: float = Field(0.1, gt=0)
    calibration_pairs: int = Field(25, ge=1)

    def model(self) -> SPSAConfig:
        """The optimizer settings."""
        return SPSAConfig(**self.model_dump())


class GDSection(Section):
    lr_init: float = 0.005
    lr_min: float = 1e-5
    lr_max: float = 0.02
    window: int = Field(10, ge=2)
    up: float = Field(1.05, gt=0)
    down: float = Field(0.8, gt=0)
    gradient_mode: GradientMode = GradientMode.parameter_shift
    difference_step: float = Field(1e-3, gt=0)

    def model(self) -> GDConfig:
        """The optimizer settings."""
        return GDConfig(**self.model_dump())


class StageSection(Section):
    truncation: int = Field(ge=0)
    iterations: int = Field(ge=1)
    method: Method = Method.spsa
    mode: SimulationMode = SimulationMode.exact
    shots_per_group: int = Field(1000, ge=1)
    scheme: Scheme = Scheme.dgc

    def model(self) -> StageConfig:
        """The driver stage."""
        return StageConfig(**self.model_dump())


class VQESection(Section):
    encoding: EncodingKind = EncodingKind.gray
    layers: int = Field(4, ge=1)
    stages: List[StageSection] = Field(min_length=1)
    noise: NoiseSection = Field(default_factory=NoiseSection)
    spsa: SPSASection = Field(default_factory=SPSASection)
    gd: GDSection = Field(default_factory=GDSection)
    summary_last: int = Field(100, ge=1)
    initial_parameters: Optional[List[float]] = None


class TablesSection(Section):
    """Code, flip-sequence and operator tables for one encoding and N."""

    encoding: EncodingKind = EncodingKind.gray
    size: int = Field(4, ge=2)


class RunConfig(Section):
    """A whole configuration file."""

    seed: Optional[int] = None
    hamiltonian: Optional[HamiltonianSection] = None
    sweep: Optional[SweepSection] = None
    encode: Optional[EncodeSection] = None
    counts: Optional[CountsSection] = None
    groups: Optional[GroupsSection] = None
    vqe: Optional[VQESection] = None
    tables: Optional[TablesSection] = None

    def require(self, *names: str) -> None:
        """Raise ConfigError unless the named sections are present."""
        missing = [name for name in names if getattr(self, name) is None]
        if missing:
            raise ConfigError(f"Config is missing section(s): {', '.join(missing)}")


def parse_config(text: str, source: str = "<string>") -> RunConfig:
    """Validate a YAML document.

    Raises:
        ConfigError: Invalid YAML or schema violation.
    """
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as ex:
        raise ConfigError(f"{source}: invalid YAML: {ex}") from ex
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ConfigError(f"{source}: expected a mapping at the top level")
    try:
        return RunConfig.model_validate(data)
    except ValidationError as ex:
        raise ConfigError(f"{source}: {ex}") from ex


def load_config(path: Optional[Path]) -> RunConfig:
    """Read a config file; no path gives an empty config.

    Raises:
        ConfigError: Unreadable file, invalid YAML or schema violation.
    """
    if path is None:
        return RunConfig()
    try:
        text = Path(path).read_text()
    except OSError as ex:
        raise ConfigError(f"Unable to read config {path}: {ex}") from ex
    config = parse_config(text, str(path))
    log.debug("Loaded config", path=str(path))
    return config

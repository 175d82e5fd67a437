# ================================================================================================
# 📝 RUN CONFIG SCHEMA - Configuración JSON de un trabajo
# ================================================================================================
# One JSON document per job, discriminated on "model". Unknown fields are
# rejected everywhere.

import json
from pathlib import Path
from typing import Annotated, Dict, List, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, TypeAdapter, model_validator


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid")


# ================================================================================================
# 🕸️ MESH
# ================================================================================================

class IntervalMeshConfig(_Strict):
    """✅ Inline 1-D mesh: either a uniform element count or explicit node positions."""
    length: Optional[float] = Field(default=None, gt=0, description="Interval length (defaults to the model L)")
    n_elements: Optional[int] = Field(default=None, ge=1, description="Uniform mesh with this many elements")
    positions: Optional[List[float]] = Field(default=None, min_length=2, description="Node positions from 0 to L")

    @model_validator(mode="after")
    def exactly_one_layout(self) -> "IntervalMeshConfig":
        if (self.n_elements is None) == (self.positions is None):
            raise ValueError("set exactly one of n_elements or positions")
        return self


class MshMeshConfig(_Strict):
    """✅ Mesh read from a Gmsh MSH 2.2 file (relative paths are resolved against the config file)."""
    path: str = Field(..., min_length=1)


class UnitSquareMeshConfig(_Strict):
    """✅ Structured triangulation of the unit square; boundary lines in physical group 1."""
    unit_square: int = Field(..., ge=1, description="Cells per side")


class AdhesionMeshConfig(_Strict):
    refine: int = Field(default=1, ge=1, description="Elements between consecutive bond nodes")


# ================================================================================================
# 🧪 MODEL PARAMETERS
# ================================================================================================

class StringParamsConfig(_Strict):
    L: float = Field(default=1.0, gt=0, description="Length")
    sigma: float = Field(default=1.0, gt=0, description="Tension")
    f: Union[float, List[float]] = Field(default=0.0, description="Constant load or nodal values")
    u_left: float = 0.0
    u_right: float = 0.0


class BeamParamsConfig(_Strict):
    L: float = Field(default=1.0, gt=0)
    K_B: float = Field(default=1.0, gt=0, description="Bending stiffness")
    f: Union[float, List[float]] = 0.0
    clamp_u: float = 0.0
    clamp_slope: float = 0.0
    end_support: Optional[float] = Field(default=None, description="Prescribed deflection at x = L")


class MembraneParamsConfig(_Strict):
    sigma: float = Field(default=1.0, gt=0)
    f: Union[float, List[float]] = 0.0
    bc: Dict[int, float] = Field(..., min_length=1, description="Physical group tag -> prescribed value")


class AdhesionParamsConfig(_Strict):
    L: float = Field(default=1.0, gt=0)
    K_B: float = Field(default=1.0, gt=0)
    n_bonds: int = Field(default=6, ge=1)
    k: float = Field(default=5.0, gt=0, description="Bond stiffness")
    U: float = Field(default=1.0, gt=0, description="Broken-bond length constant")
    u_bar: float = Field(default=0.0, description="Prescribed end deflection")
    bond_positions: Optional[List[float]] = None

    @model_validator(mode="after")
    def positions_match_bonds(self) -> "AdhesionParamsConfig":
        if self.bond_positions is not None and len(self.bond_positions) != self.n_bonds:
            raise ValueError(f"bond_positions needs {self.n_bonds} entries")
        return self


# ================================================================================================
# 🌡️ ENSEMBLE / SWEEP / METHOD / OUTPUT
# ================================================================================================

class EnsembleConfig(_Strict):
    """Inverse temperature(s); ``beta_E0`` gives beta in units of 1/E0 (adhesion only)."""
    beta: Optional[Union[Annotated[float, Field(gt=0)], List[Annotated[float, Field(gt=0)]]]] = None
    beta_E0: Optional[Union[Annotated[float, Field(gt=0)], List[Annotated[float, Field(gt=0)]]]] = None

    @model_validator(mode="after")
    def exactly_one_beta(self) -> "EnsembleConfig":
        if (self.beta is None) == (self.beta_E0 is None):
            raise ValueError("set exactly one of beta or beta_E0")
        return self

    def values(self, E0: float = 1.0) -> List[float]:
        if self.beta is not None:
            raw = self.beta if isinstance(self.beta, list) else [self.beta]
            return [float(b) for b in raw]
        raw = self.beta_E0 if isinstance(self.beta_E0, list) else [self.beta_E0]
        return [float(b) / E0 for b in raw]


class LinspaceConfig(_Strict):
    start: float
    stop: float
    num: int = Field(..., ge=1)


class SweepConfig(_Strict):
    variable: Literal["u_bar", "beta"]
    values: Union[List[float], LinspaceConfig]

    def expanded(self) -> List[float]:
        if isinstance(self.values, LinspaceConfig):
            v = self.values
            if v.num == 1:
                return [v.start]
            step = (v.stop - v.start) / (v.num - 1)
            return [v.start + i * step for i in range(v.num)]
        return list(self.values)


class ChainSettings(_Strict):
    """✅ Metropolis settings for method = mcmc."""
    n_steps: int = Field(..., gt=0)
    burn_in: int = Field(default=0, ge=0)
    proposal_scale: float = Field(default=0.5, gt=0)
    seed: Optional[int] = Field(default=None, ge=0, lt=2**64, description="Defaults to FUNCINT_DEFAULT_SEED")
    thin: int = Field(default=1, ge=1)
    n_chains: int = Field(default=1, ge=1, description="Independent chains merged by inverse variance")
    precondition: bool = Field(default=True, description="Shape proposals with the exact covariance")

    @model_validator(mode="after")
    def keeps_samples(self) -> "ChainSettings":
        if self.burn_in >= self.n_steps:
            raise ValueError("burn_in must be smaller than n_steps")
        return self


class OutputConfig(_Strict):
    path: str = Field(..., min_length=1)
    format: Literal["csv", "json"] = "csv"
    dimensionless: bool = Field(default=False, description="Add (E0, U) scaled adhesion columns")


class _RunBase(_Strict):
    ensemble: EnsembleConfig
    sweep: Optional[SweepConfig] = None
    method: Literal["analytic", "mcmc"] = "analytic"
    chain: Optional[ChainSettings] = None
    output: OutputConfig

    @model_validator(mode="after")
    def check_method_and_sweep(self):
        if self.method == "mcmc" and self.chain is None:
            raise ValueError("method 'mcmc' needs a chain section")
        if self.method == "mcmc" and self.sweep is not None:
            raise ValueError("method 'mcmc' does not support sweeps")
        if self.ensemble.beta_E0 is not None and self.model != "adhesion":
            raise ValueError("beta_E0 is only defined for the adhesion model")
        if self.ensemble.beta_E0 is not None and self.sweep is not None and self.sweep.variable == "beta":
            raise ValueError("a beta sweep takes raw beta values; use ensemble.beta, not beta_E0")
        betas = self.ensemble.values()
        if self.sweep is not None and self.sweep.variable == "beta" and len(betas) > 1:
            raise ValueError("a beta sweep needs a single ensemble beta")
        if self.sweep is None and self.model != "adhesion" and len(betas) > 1:
            raise ValueError("field output needs a single beta; use a sweep for several")
        return self


class StringRunConfig(_RunBase):
    model: Literal["string"]
    parameters: StringParamsConfig = Field(default_factory=StringParamsConfig)
    mesh: Union[IntervalMeshConfig, MshMeshConfig]


class BeamRunConfig(_RunBase):
    model: Literal["beam"]
    parameters: BeamParamsConfig = Field(default_factory=BeamParamsConfig)
    mesh: Union[IntervalMeshConfig, MshMeshConfig]


class MembraneRunConfig(_RunBase):
    model: Literal["membrane2d"]
    parameters: MembraneParamsConfig
    mesh: Union[MshMeshConfig, UnitSquareMeshConfig]


class AdhesionRunConfig(_RunBase):
    model: Literal["adhesion"]
    parameters: AdhesionParamsConfig = Field(default_factory=AdhesionParamsConfig)
    mesh: AdhesionMeshConfig = Field(default_factory=AdhesionMeshConfig)


RunConfig = Annotated[
    Union[StringRunConfig, BeamRunConfig, MembraneRunConfig, AdhesionRunConfig],
    Field(discriminator="model"),
]

RUN_CONFIG_ADAPTER: TypeAdapter = TypeAdapter(RunConfig)


def parse_run_config(text: Union[str, bytes]) -> RunConfig:
    """
    Validate a JSON run configuration.

    Raises:
        pydantic.ValidationError: schema violation (field path in the message)
    """
    return RUN_CONFIG_ADAPTER.validate_json(text)


def load_run_config(path: Union[str, Path]) -> RunConfig:
    return parse_run_config(Path(path).read_bytes())


def run_config_schema() -> str:
    return json.dumps(RUN_CONFIG_ADAPTER.json_schema(), indent=2) + "\n"

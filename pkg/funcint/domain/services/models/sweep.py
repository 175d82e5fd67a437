# ================================================================================================
# 🔁 SWEEP - Barridos en ū o β con filas independientes
# ================================================================================================
# Rows run on a thread pool (numpy/scipy release the GIL inside LAPACK) and
# are returned in input order; the first failing row aborts the sweep.

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from enum import Enum
from typing import Dict, List, Optional, Sequence, Union

import numpy as np
import structlog

from ...entities.mesh import Mesh
from ...exceptions.funcint_exceptions import InvalidParameterException, InvalidSweepException
from ...value_objects.statistics import EnsembleSpec
from ..assembly import assemble_sensitivity
from ..gaussian import conjugate_force, moments
from .adhesion import AdhesionParams, evaluate_adhesion
from .beam import BeamParams, beam_dofmap, beam_mesh, build_beam, supported_end
from .membrane2d import MembraneParams, build_membrane
from .string import StringParams, build_string, right_end, string_dofmap, string_mesh

logger = structlog.get_logger(__name__)

ModelParams = Union[StringParams, BeamParams, MembraneParams, AdhesionParams]
Row = Dict[str, float]


class SweepVariable(str, Enum):
    U_BAR = "u_bar"
    BETA = "beta"


MODEL_NAMES = {
    StringParams: "string",
    BeamParams: "beam",
    MembraneParams: "membrane2d",
    AdhesionParams: "adhesion",
}


@dataclass(frozen=True)
class ModelSpec:
    """A model, its mesh and one inverse temperature: everything one row needs."""
    params: ModelParams
    beta: float
    mesh: Optional[Mesh] = None

    def __post_init__(self):
        if not self.beta > 0:
            raise InvalidParameterException("beta", self.beta, "must be positive")
        if self.mesh is None and not isinstance(self.params, (AdhesionParams, MembraneParams)):
            raise InvalidParameterException("mesh", None, f"{self.name} model needs a mesh")

    @property
    def name(self) -> str:
        return MODEL_NAMES[type(self.params)]

    @property
    def u_bar(self) -> Optional[float]:
        p = self.params
        if isinstance(p, StringParams):
            return p.u_right
        if isinstance(p, BeamParams):
            return p.end_support
        if isinstance(p, AdhesionParams):
            return p.u_bar
        return None

    def with_value(self, variable: SweepVariable, value: float) -> "ModelSpec":
        variable = SweepVariable(variable)
        if variable is SweepVariable.BETA:
            return replace(self, beta=float(value))
        p = self.params
        if isinstance(p, StringParams):
            return replace(self, params=replace(p, u_right=float(value)))
        if isinstance(p, BeamParams) and p.end_support is not None:
            return replace(self, params=replace(p, end_support=float(value)))
        if isinstance(p, AdhesionParams):
            return replace(self, params=p.with_u_bar(value))
        raise InvalidSweepException(self.name, variable.value)


def evaluate(spec: ModelSpec, dimensionless: bool = False) -> Row:
    """
    Observables of one model at one (u_bar, beta).

    Quadratic models report log_Z, min/mean energy, |<d>| and, when an end
    value is prescribed, the conjugate mean force there. Adhesion reports
    <f>, <xi> and log Z (plus (E0, U) scaled columns when ``dimensionless``).
    """
    p = spec.params
    if isinstance(p, AdhesionParams):
        result = evaluate_adhesion(p, spec.beta, spec.mesh)
        row = {
            "u_bar": result.u_bar,
            "beta": result.beta,
            "mean_force": result.mean_force,
            "mean_xi": result.mean_xi,
            "log_Z": result.log_Z,
        }
        if dimensionless:
            row.update(u_bar_nd=result.u_bar_nd, beta_E0=result.beta_E0, mean_force_nd=result.mean_force_nd)
        return row

    if isinstance(p, StringParams):
        form = build_string(p, spec.mesh)
        mesh = string_mesh(p, spec.mesh)
        dofmap = string_dofmap(p, mesh)
        wrt_material, wrt = p.sigma, right_end(p, mesh)
    elif isinstance(p, BeamParams):
        form = build_beam(p, spec.mesh)
        mesh = beam_mesh(p, spec.mesh)
        dofmap = beam_dofmap(p, mesh)
        wrt_material = p.K_B
        wrt = supported_end(p, mesh) if p.end_support is not None else None
    else:
        form = build_membrane(p)
        mesh, dofmap, wrt_material, wrt = p.mesh, None, p.sigma, None

    stats = moments(EnsembleSpec(spec.beta, form))
    row: Row = {}
    if wrt is not None:
        row["u_bar"] = float(spec.u_bar)
    row.update(
        beta=spec.beta,
        log_Z=stats.log_Z,
        min_energy=stats.min_energy,
        mean_energy=stats.mean_energy,
        mean_norm=float(np.linalg.norm(stats.mean)),
    )
    if wrt is not None:
        db, dc = assemble_sensitivity(mesh, dofmap, wrt_material, p.f, wrt)
        row["mean_force"] = conjugate_force(stats, db, dc)
    return row


def sweep(
    spec: ModelSpec,
    variable: Union[SweepVariable, str],
    values: Sequence[float],
    max_workers: Optional[int] = None,
    dimensionless: bool = False,
) -> List[Row]:
    """
    🔁 One row per value, in input order.

    Raises:
        InvalidSweepException: the model has no prescribed value to sweep
    """
    variable = SweepVariable(variable)
    if not len(values):
        return []
    specs = [spec.with_value(variable, v) for v in values]
    logger.info("sweep_started", model=spec.name, variable=variable.value, rows=len(specs))
    with ThreadPoolExecutor(max_workers=max_workers) as pool:
        rows = list(pool.map(lambda s: evaluate(s, dimensionless), specs))
    logger.info("sweep_finished", model=spec.name, rows=len(rows))
    return rows

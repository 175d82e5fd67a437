# ================================================================================================
# 🚀 RUNNER - Ejecuta un RunConfig y produce la tabla de resultados
# ================================================================================================

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import structlog

from ..core.config import Settings, get_settings
from ..domain.entities.mesh import DofMap, Mesh, build_interval_mesh, uniform_interval_mesh
from ..domain.entities.quadratic_form import QuadraticForm
from ..domain.exceptions.funcint_exceptions import InvalidParameterException
from ..domain.services.gaussian import moments, point_functional
from ..domain.services.models.adhesion import AdhesionParams, adhesion_mesh, sample_adhesion
from ..domain.services.models.beam import BeamParams, beam_dofmap, beam_mesh, build_beam
from ..domain.services.models.membrane2d import (
    MembraneParams,
    build_membrane,
    membrane_dofmap,
    unit_square_mesh,
)
from ..domain.services.models.string import StringParams, build_string, string_dofmap, string_mesh
from ..domain.services.models.sweep import ModelSpec, evaluate, sweep
from ..domain.services.sampler import merge_estimates, metropolis, spawn_seeds
from ..domain.value_objects.statistics import ChainConfig, EnsembleSpec, Estimate
from ..io.msh_reader import read_msh
from ..io.writers import write_table
from .config_schema import (
    AdhesionRunConfig,
    BeamRunConfig,
    ChainSettings,
    IntervalMeshConfig,
    MembraneRunConfig,
    MshMeshConfig,
    RunConfig,
    StringRunConfig,
    UnitSquareMeshConfig,
    load_run_config,
)

logger = structlog.get_logger(__name__)

Row = Dict[str, float]

FIELD_COLUMNS = ["x", "mean_u", "var_u"]
FIELD_COLUMNS_2D = ["x", "y", "mean_u", "var_u"]
MCMC_FIELD_COLUMNS = ["x", "mean_u", "mean_u_se", "var_u"]
MCMC_FIELD_COLUMNS_2D = ["x", "y", "mean_u", "mean_u_se", "var_u"]
ADHESION_COLUMNS = ["u_bar", "beta", "mean_force", "mean_xi", "log_Z"]
ADHESION_ND_COLUMNS = ["u_bar_nd", "beta_E0", "mean_force_nd"]
ADHESION_MCMC_COLUMNS = ["u_bar", "beta", "mean_xi", "mean_xi_se", "acceptance_rate"]


@dataclass
class RunResult:
    """📊 Table produced by one job plus the summary fields."""
    model: str
    n_dofs: int
    columns: List[str]
    rows: List[Row]
    output: Optional[Path] = None
    meta: Dict[str, object] = field(default_factory=dict)

    def summary(self) -> str:
        return f"model={self.model} dofs={self.n_dofs} rows={len(self.rows)} output={self.output}"


# ================================================================================================
# 🕸️ MESH RESOLUTION
# ================================================================================================

def interval_mesh_from_config(cfg: IntervalMeshConfig, default_length: Optional[float] = None) -> Mesh:
    length = cfg.length if cfg.length is not None else default_length
    if length is None:
        raise InvalidParameterException("mesh.length", None, "interval mesh needs a length")
    if default_length is not None and abs(length - default_length) > 1e-12 * default_length:
        raise InvalidParameterException("mesh.length", length, f"differs from model length {default_length}")
    if cfg.positions is not None:
        return build_interval_mesh(length, cfg.positions)
    return uniform_interval_mesh(length, cfg.n_elements)


def _resolve(path: str, base_dir: Optional[Path]) -> Path:
    p = Path(path)
    return p if p.is_absolute() or base_dir is None else base_dir / p


def resolve_mesh(
    cfg: Union[IntervalMeshConfig, MshMeshConfig, UnitSquareMeshConfig],
    default_length: Optional[float],
    base_dir: Optional[Path],
) -> Mesh:
    if isinstance(cfg, IntervalMeshConfig):
        return interval_mesh_from_config(cfg, default_length)
    if isinstance(cfg, UnitSquareMeshConfig):
        return unit_square_mesh(cfg.unit_square)
    return read_msh(_resolve(cfg.path, base_dir))


# ================================================================================================
# 🧪 MODEL CONSTRUCTION
# ================================================================================================

@dataclass(frozen=True)
class _Prepared:
    """Model built from config: the params, its (normalized) mesh, DOF map and form."""
    params: object
    mesh: Mesh
    dofmap: DofMap
    form: QuadraticForm


def _prepare_quadratic(config: RunConfig, base_dir: Optional[Path]) -> _Prepared:
    p = config.parameters
    if isinstance(config, StringRunConfig):
        params = StringParams(L=p.L, sigma=p.sigma, f=p.f, u_left=p.u_left, u_right=p.u_right)
        mesh = string_mesh(params, resolve_mesh(config.mesh, p.L, base_dir))
        return _Prepared(params, mesh, string_dofmap(params, mesh), build_string(params, mesh))
    if isinstance(config, BeamRunConfig):
        params = BeamParams(
            L=p.L, K_B=p.K_B, f=p.f, clamp_u=p.clamp_u, clamp_slope=p.clamp_slope, end_support=p.end_support
        )
        mesh = beam_mesh(params, resolve_mesh(config.mesh, p.L, base_dir))
        return _Prepared(params, mesh, beam_dofmap(params, mesh), build_beam(params, mesh))
    mesh = resolve_mesh(config.mesh, None, base_dir)
    params = MembraneParams(mesh=mesh, sigma=p.sigma, f=p.f, bc=dict(p.bc))
    return _Prepared(params, mesh, membrane_dofmap(params), build_membrane(params))


def _adhesion_params(config: AdhesionRunConfig) -> AdhesionParams:
    p = config.parameters
    return AdhesionParams(
        L=p.L,
        K_B=p.K_B,
        n_bonds=p.n_bonds,
        k=p.k,
        U=p.U,
        u_bar=p.u_bar,
        bond_positions=tuple(p.bond_positions) if p.bond_positions is not None else None,
    )


def _chain_config(chain: ChainSettings, seed: int) -> ChainConfig:
    return ChainConfig(
        n_steps=chain.n_steps,
        burn_in=chain.burn_in,
        proposal_scale=chain.proposal_scale,
        seed=seed,
        thin=chain.thin,
    )


def _chain_seeds(chain: ChainSettings, settings: Settings) -> List[int]:
    seed = chain.seed if chain.seed is not None else settings.DEFAULT_SEED
    return [seed] if chain.n_chains == 1 else spawn_seeds(seed, chain.n_chains)


def _run_chains(job, seeds: Sequence[int], settings: Settings) -> Estimate:
    if len(seeds) == 1:
        return job(seeds[0])
    with ThreadPoolExecutor(max_workers=min(len(seeds), settings.worker_count)) as pool:
        return merge_estimates(list(pool.map(job, seeds)))


# ================================================================================================
# 📋 TABLES
# ================================================================================================

def _node_order(mesh: Mesh) -> List[int]:
    if mesh.spatial_dim == 1:
        return [n.id for n in sorted(mesh.nodes, key=lambda n: n.coords[0])]
    return sorted(n.id for n in mesh.nodes)


def _field_rows_analytic(prep: _Prepared, beta: float, settings: Settings) -> Tuple[List[str], List[Row]]:
    stats = moments(EnsembleSpec(beta, prep.form))
    two_d = prep.mesh.spatial_dim == 2
    rows = []
    for node_id in _node_order(prep.mesh):
        coords = prep.mesh.node(node_id).coords
        a, a0 = point_functional(prep.mesh, prep.dofmap, coords, settings.POINT_TOLERANCE)
        row: Row = {"x": coords[0]}
        if two_d:
            row["y"] = coords[1]
        row["mean_u"] = float(a @ stats.mean + a0)
        row["var_u"] = stats.covariance_between(a, a)
        rows.append(row)
    return (FIELD_COLUMNS_2D if two_d else FIELD_COLUMNS), rows


def _field_rows_mcmc(
    prep: _Prepared, beta: float, chain: ChainSettings, settings: Settings
) -> Tuple[List[str], List[Row], Estimate]:
    stats = moments(EnsembleSpec(beta, prep.form))
    order = _node_order(prep.mesh)
    functionals = [
        point_functional(prep.mesh, prep.dofmap, prep.mesh.node(nid).coords, settings.POINT_TOLERANCE)
        for nid in order
    ]
    A = np.array([a for a, _ in functionals]).reshape(len(order), prep.form.n)
    a0 = np.array([c for _, c in functionals])
    factor = stats.sampling_factor() if chain.precondition else None

    def observable(d: np.ndarray) -> np.ndarray:
        u = A @ d + a0
        return np.concatenate((u, u * u))

    def job(seed: int) -> Estimate:
        cfg = _chain_config(chain, seed)
        return metropolis(prep.form.energy, beta, stats.mean, observable, cfg, proposal_factor=factor)

    estimate = _run_chains(job, _chain_seeds(chain, settings), settings)
    m = len(order)
    value, se = np.asarray(estimate.value), np.asarray(estimate.std_error)
    two_d = prep.mesh.spatial_dim == 2
    rows = []
    for i, node_id in enumerate(order):
        coords = prep.mesh.node(node_id).coords
        row: Row = {"x": coords[0]}
        if two_d:
            row["y"] = coords[1]
        row["mean_u"] = float(value[i])
        row["mean_u_se"] = float(se[i])
        row["var_u"] = max(0.0, float(value[m + i] - value[i] ** 2))
        rows.append(row)
    return (MCMC_FIELD_COLUMNS_2D if two_d else MCMC_FIELD_COLUMNS), rows, estimate


def _adhesion_table(
    config: AdhesionRunConfig, settings: Settings
) -> Tuple[List[str], List[Row], int]:
    params = _adhesion_params(config)
    mesh = adhesion_mesh(params, config.mesh.refine)
    betas = config.ensemble.values(params.E0)
    beam = params.beam()
    n_dofs = beam_dofmap(beam, beam_mesh(beam, mesh)).n_open
    dimensionless = config.output.dimensionless

    if config.method == "mcmc":
        chain = config.chain
        rows = []
        for beta in betas:
            def job(seed: int, beta: float = beta) -> Estimate:
                cfg = _chain_config(chain, seed)
                return sample_adhesion(params, beta, cfg, mesh, precondition=chain.precondition)

            est = _run_chains(job, _chain_seeds(chain, settings), settings)
            rows.append({
                "u_bar": params.u_bar,
                "beta": beta,
                "mean_xi": float(est.value),
                "mean_xi_se": float(est.std_error),
                "acceptance_rate": est.acceptance_rate,
            })
        return ADHESION_MCMC_COLUMNS, rows, n_dofs

    columns = ADHESION_COLUMNS + (ADHESION_ND_COLUMNS if dimensionless else [])
    rows = []
    for beta in betas:
        spec = ModelSpec(params, beta, mesh)
        if config.sweep is None:
            rows.append(evaluate(spec, dimensionless))
        else:
            rows.extend(sweep(spec, config.sweep.variable, config.sweep.expanded(),
                              settings.worker_count, dimensionless))
    return columns, rows, n_dofs


def execute(config: RunConfig, settings: Optional[Settings] = None, base_dir: Optional[Path] = None) -> RunResult:
    """
    Run one validated job and return its table (nothing is written).

    Raises:
        FuncIntException: model, mesh or numerical failure
    """
    settings = settings or get_settings()
    log = logger.bind(model=config.model, method=config.method)
    log.info("job_started")

    if isinstance(config, AdhesionRunConfig):
        columns, rows, n_dofs = _adhesion_table(config, settings)
        log.info("job_finished", rows=len(rows))
        return RunResult(config.model, n_dofs, columns, rows)

    prep = _prepare_quadratic(config, base_dir)
    betas = config.ensemble.values()
    meta: Dict[str, object] = {}

    if config.sweep is not None:
        spec = ModelSpec(prep.params, betas[0], None if isinstance(config, MembraneRunConfig) else prep.mesh)
        rows = sweep(spec, config.sweep.variable, config.sweep.expanded(), settings.worker_count)
        columns = list(rows[0]) if rows else list(evaluate(spec))
    elif config.method == "mcmc":
        columns, rows, estimate = _field_rows_mcmc(prep, betas[0], config.chain, settings)
        meta["acceptance_rate"] = estimate.acceptance_rate
    else:
        columns, rows = _field_rows_analytic(prep, betas[0], settings)

    log.info("job_finished", rows=len(rows), n_dofs=prep.form.n)
    return RunResult(config.model, prep.form.n, columns, rows, meta=meta)


def run(
    config_path: Union[str, Path],
    output: Optional[Union[str, Path]] = None,
    seed_override: Optional[int] = None,
    settings: Optional[Settings] = None,
) -> RunResult:
    """🚀 Load, execute and write one job; ``output`` and ``seed_override`` win over the file."""
    settings = settings or get_settings()
    config_path = Path(config_path)
    config = load_run_config(config_path)
    if seed_override is not None and config.method != "mcmc":
        logger.warning("seed_override_ignored", model=config.model, method=config.method, seed=seed_override)
    elif seed_override is not None and config.chain is not None:
        config = config.model_copy(update={"chain": config.chain.model_copy(update={"seed": seed_override})})

    result = execute(config, settings, base_dir=config_path.parent)
    target = Path(output) if output is not None else _resolve(config.output.path, config_path.parent)
    result.output = write_table(
        target,
        result.columns,
        result.rows,
        fmt=config.output.format,
        float_format=settings.csv_float_format,
        meta={"model": result.model, "n_dofs": result.n_dofs, **result.meta},
    )
    return result

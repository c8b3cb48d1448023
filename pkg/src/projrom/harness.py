"""End-to-end Burgers workflows: FOM runs, POD, ROM runs, comparison, timing.

These functions back the command-line interface and can be called directly.
"""

import time
from dataclasses import dataclass, field, replace

import numpy as np

from .burgers import BurgersFom, BurgersParams, BurgersSampleMesh
from .decoder import LinearDecoder, project_initial_condition
from .errors import ConfigError
from .fom import SteadyView
from .galerkin import GalerkinProblem, run_galerkin
from .hyper import (
    Collocation,
    Diagonal,
    Identity,
    ScaledCollocation,
    build_stencil_closure,
    control_volume_weights,
    select_sample_indices,
)
from .linalg import norm2, norm_inf
from .lspg import LspgProblem, advance_lspg, lspg_steady_solve
from .pod import SnapshotCollector, compute_pod_basis
from .solvers import GaussNewtonSettings
from .steppers import bdf2_coefficients, backward_euler_coefficients, integrate_explicit, integrate_implicit

EXPLICIT = ("forward-euler", "rk4")
IMPLICIT = ("bdf1", "bdf2")
METHODS = ("fom", "galerkin", "lspg", "lspg-steady")
WEIGHTINGS = ("identity", "diagonal", "collocation", "scaled-collocation")


def parse_weighting(text, sample_fraction=None):
    """Split ``"collocation:0.1"`` into ``("collocation", 0.1)``."""
    kind, _, frac = text.partition(":")
    if kind not in WEIGHTINGS:
        raise ConfigError(f"unknown weighting {text!r}; expected one of {', '.join(WEIGHTINGS)}")
    if kind in ("identity", "diagonal"):
        if frac:
            raise ConfigError(f"weighting {kind!r} takes no sample fraction")
        return kind, None
    fraction = float(frac) if frac else sample_fraction
    if fraction is None:
        raise ConfigError(f"weighting {kind!r} needs a sample fraction")
    if not 0.0 < fraction <= 1.0:
        raise ConfigError(f"sample fraction must lie in (0, 1], got {fraction}")
    return kind, fraction


@dataclass(frozen=True)
class RunConfig:
    num_cells: int = 1024
    alpha: float = 0.02
    beta: float = 0.02
    gamma: float = 5.0
    method: str = "fom"
    stepper: str = "rk4"
    dt: float = 5e-4
    num_steps: int = 4096
    rom_size: int = 32
    weighting: str = "identity"
    seed: int = 0
    settings: GaussNewtonSettings = field(default_factory=GaussNewtonSettings)
    jacobian: str = "sparse"
    stencil: tuple = (1, 0)

    def __post_init__(self):
        if self.method not in METHODS:
            raise ConfigError(f"unknown method {self.method!r}")
        if self.stepper not in EXPLICIT + IMPLICIT:
            raise ConfigError(f"unknown stepper {self.stepper!r}")
        if self.method == "galerkin" and self.stepper not in EXPLICIT:
            raise ConfigError(f"galerkin requires an explicit stepper, got {self.stepper!r}")
        if self.method == "lspg" and self.stepper not in IMPLICIT:
            raise ConfigError(f"lspg requires an implicit stepper, got {self.stepper!r}")
        if self.dt <= 0 or self.num_steps < 1:
            raise ConfigError("need dt > 0 and at least one step")
        if self.jacobian not in ("sparse", "dense"):
            raise ConfigError(f"unknown Jacobian representation {self.jacobian!r}")
        parse_weighting(self.weighting)

    @property
    def params(self):
        return BurgersParams(self.alpha, self.beta, self.gamma, self.num_cells)

    def fom(self):
        return BurgersFom(self.params, self.jacobian)

    def coefficients(self):
        return bdf2_coefficients() if self.stepper == "bdf2" else backward_euler_coefficients()

    def with_(self, **changes):
        return replace(self, **changes)


@dataclass
class FomRun:
    snapshots: object
    final_state: np.ndarray
    wall_ms: float
    newton_iterations: int


def run_fom(config, observe=True):
    """Integrate the Burgers FOM; every step is recorded when `observe` is set."""
    fom = config.fom()
    x0 = fom.initial_condition()
    collector = SnapshotCollector() if observe else None
    reports = []
    start = time.perf_counter()
    if config.stepper in EXPLICIT:
        xf = integrate_explicit(config.stepper, fom.velocity, x0, config.dt, config.num_steps, collector)
    else:
        xf = integrate_implicit(
            fom, config.coefficients(), x0, config.dt, config.num_steps, collector, config.settings, reports=reports
        )
    wall = (time.perf_counter() - start) * 1e3
    snaps = collector.finalize() if observe else None
    return FomRun(snaps, xf, wall, sum(r.iterations for r in reports))


def build_pod(snapshots, x_ref, p, rank_tol=1e-12):
    return compute_pod_basis(snapshots, x_ref, p, rank_tol)


@dataclass
class RomSetup:
    problem: object
    basis: np.ndarray
    x_ref: np.ndarray
    sample_indices: object = None
    z: int = 0


def _weighting_and_mesh(config, fom):
    """Weighting operator and sample mesh for the configured weighting."""
    kind, fraction = parse_weighting(config.weighting)
    n = config.num_cells
    if kind == "identity":
        return Identity(n), None, None
    d = control_volume_weights(n, config.params.domain_length, config.dt)
    if kind == "diagonal":
        return Diagonal(d), None, None
    idx = select_sample_indices(n, fraction, config.seed, forced=(0, n - 1))
    topo = build_stencil_closure(idx, n, *config.stencil)
    z = len(idx)
    W = Identity(z) if kind == "collocation" else Diagonal(d[topo.residual_cells])
    return W, BurgersSampleMesh(config.params, topo), idx


def setup_rom(config, basis):
    """Assemble the ROM problem for `config` on the given basis.

    Collocation weightings run on a sample mesh: the FOM only evaluates the
    sampled cells and the basis is restricted to their stencil closure.
    """
    basis = np.asarray(basis, dtype=float)
    fom = config.fom()
    if basis.shape[0] != fom.state_size:
        raise ConfigError(f"basis has {basis.shape[0]} rows, mesh has {fom.state_size} cells")
    x_ref = fom.initial_condition()
    W, mesh, idx = _weighting_and_mesh(config, fom)
    decoder = LinearDecoder(basis)
    system, ref, rows = fom, x_ref, None
    if mesh is not None:
        cells = mesh.topology.state_cells
        system, ref, rows = mesh, x_ref[cells], mesh.topology.residual_positions
        decoder = decoder.restrict(cells)
    if config.method == "galerkin":
        problem = GalerkinProblem(system, decoder, ref, W, rows)
    elif config.method == "lspg":
        problem = LspgProblem(system, decoder, ref, config.coefficients(), config.dt, W, rows)
    elif config.method == "lspg-steady":
        problem = (SteadyView(system), decoder, ref, W, rows)
    else:
        raise ConfigError(f"method {config.method!r} is not a ROM")
    return RomSetup(problem, basis, x_ref, idx, W.output_size)


@dataclass
class RomRun:
    trajectory: np.ndarray  # (p, steps + 1) reduced states
    final_state: np.ndarray  # reconstructed on the full mesh
    wall_ms: float
    gn_iterations: int
    z: int
    sample_indices: object = None
    reports: list = field(default_factory=list)

    @property
    def steps(self):
        return self.trajectory.shape[1] - 1


def run_rom(config, basis, setup=None):
    setup = setup or setup_rom(config, basis)
    p = setup.basis.shape[1]
    fom_x0 = np.ones(config.num_cells)
    xi0 = project_initial_condition(setup.basis, fom_x0, setup.x_ref)
    collector = SnapshotCollector()
    reports = []
    start = time.perf_counter()
    if config.method == "galerkin":
        xi = run_galerkin(setup.problem, xi0, config.stepper, config.dt, config.num_steps, collector)
    elif config.method == "lspg":
        xi = advance_lspg(setup.problem, xi0, config.num_steps, config.settings, collector, reports=reports)
    else:
        system, decoder, ref, W, rows = setup.problem
        xi, report = lspg_steady_solve(system, decoder, ref, W, xi0, config.settings, rows)
        reports.append(report)
        collector.observe(0, 0.0, xi0)
        collector.observe(1, 0.0, xi)
    wall = (time.perf_counter() - start) * 1e3
    traj = collector.finalize().values
    assert traj.shape[0] == p
    final = setup.x_ref + setup.basis @ xi
    return RomRun(traj, final, wall, sum(r.iterations for r in reports), setup.z, setup.sample_indices, reports)


def compare_states(fom_state, rom_state):
    """Relative l2 and l-infinity errors of `rom_state` against `fom_state`."""
    fom_state = np.asarray(fom_state, dtype=float)
    rom_state = np.asarray(rom_state, dtype=float)
    if fom_state.shape != rom_state.shape:
        raise ConfigError(f"state lengths differ: {fom_state.shape} vs {rom_state.shape}")
    diff = rom_state - fom_state
    return norm2(diff) / norm2(fom_state), norm_inf(diff) / norm_inf(fom_state)


def report_row(config, run, fom_state=None):
    rel_l2 = rel_linf = ""
    if fom_state is not None:
        rel_l2, rel_linf = compare_states(fom_state, run.final_state)
    return {
        "N": config.num_cells,
        "p": run.trajectory.shape[0],
        "method": config.method,
        "weighting": config.weighting,
        "z": run.z,
        "steps": run.steps,
        "gn_iters_total": run.gn_iterations,
        "wall_ms_total": run.wall_ms,
        "ms_per_iteration": run.wall_ms / max(run.steps, 1),
        "rel_l2": rel_l2,
        "rel_linf": rel_linf,
        "seed": config.seed,
    }


def geometric_mean(values):
    values = np.asarray(values, dtype=float)
    if values.size == 0 or np.any(values <= 0):
        raise ValueError("geometric mean needs positive values")
    return float(np.exp(np.mean(np.log(values))))


def bench(config, basis, replicas=10):
    """Time `replicas` ROM runs; returns a report row with the geometric-mean ms per step."""
    if replicas < 1:
        raise ConfigError("need at least one replica")
    setup = setup_rom(config, basis)
    runs = [run_rom(config, basis, setup) for _ in range(replicas)]
    row = report_row(config, runs[-1])
    row["ms_per_iteration"] = geometric_mean([r.wall_ms / r.steps for r in runs])
    row["wall_ms_total"] = sum(r.wall_ms for r in runs)
    row["replicas"] = replicas
    return row

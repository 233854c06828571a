"""
Ensemble propagation over disorder configurations and mixed-state analysis.

Each configuration X_i evolves as an independent pure state; the ensemble
density matrix is the uniform mixture ρ = (1/N_c) Σ |ψ_i⟩⟨ψ_i| and every
ensemble observable is the matching incoherent average.  Purity
tr[ρ²]/tr[ρ]² is evaluated through the N_c×N_c Gram matrix of state
overlaps, never through ρ itself: at 10⁴ grid points the dense matrix is
prohibitive, while the Gram route costs O(N_c²·n).  The dense construction
survives in the test suite as a small-scale oracle.

Configurations are split into contiguous index blocks; blocks may run in
separate worker processes, and each block propagates as one vectorized
batch.  Reductions always run in configuration-index order, so results are
bitwise independent of the worker count.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .model import (AtomParams, EnvironmentConfig, LaserParams,
                    PerturberParams, gradient_atom, gradient_env,
                    potential_atom, potential_env)
from .sampler import SeededRng, StructureParams, sample_configuration
from .tdse import (Grid, PropagationRecord, PropagatorPlan, absorber_mask,
                   ground_state, propagate)


class PropagationFailure(RuntimeError):
    """A configuration produced a non-finite state; carries its index."""

    def __init__(self, config_index: int):
        super().__init__(f"propagation failed for configuration {config_index}")
        self.config_index = config_index


@dataclass(frozen=True)
class MaskSpec:
    """Smooth spatial filter isolating the continuum part of the state.

    Rises 0→1 over a half-cosine ramp of width `width` centred at |x| = r0;
    identically 0 for |x| ≤ r0 - width/2, identically 1 beyond r0 + width/2.
    """

    r0: float = 5.0
    width: float = 2.0

    def __post_init__(self):
        if self.r0 <= 0 or self.width <= 0:
            raise ValueError("mask radius and width must be positive")
        if self.width / 2.0 >= self.r0:
            raise ValueError("mask ramp must not reach the origin")

    def values(self, x: np.ndarray) -> np.ndarray:
        r = np.abs(np.asarray(x, dtype=float))
        lo = self.r0 - 0.5 * self.width
        s = np.clip((r - lo) / self.width, 0.0, 1.0)
        return np.sin(0.5 * np.pi * s) ** 2


@dataclass(frozen=True)
class EnsembleSpec:
    """Everything needed to reproduce one ensemble run."""

    n_c: int = 1
    master_seed: int = 0
    structure: StructureParams = StructureParams()
    perturber: PerturberParams = PerturberParams()
    laser: LaserParams = LaserParams()
    atom: AtomParams = AtomParams()
    x_min: float = -400.0
    x_max: float = 400.0
    n_grid: int = 8192
    dt: float = 0.02
    record_stride: int = 4
    absorber_band: float = 0.1
    probe_times: tuple[float, ...] | None = None  # None: every T_L/8

    def __post_init__(self):
        if self.n_c < 1:
            raise ValueError("n_c must be >= 1")
        if self.probe_times is not None:
            end = self.laser.duration
            if any(t < 0 or t > end for t in self.probe_times):
                raise ValueError("probe_times must lie within the pulse")

    def grid(self) -> Grid:
        return Grid(self.x_min, self.x_max, self.n_grid)

    def resolved_probe_times(self) -> np.ndarray:
        if self.probe_times is not None:
            return np.asarray(self.probe_times, dtype=float)
        T = self.laser.period
        return np.arange(0.0, self.laser.duration + 0.25 * T / 8, T / 8)


@dataclass
class EnsembleRecord:
    """Aligned per-configuration series; configuration index is the last axis."""

    spec: EnsembleSpec
    configs: list[EnvironmentConfig]
    times: np.ndarray            # (n_t,)
    norm: np.ndarray             # (n_t, n_c)
    x_expect: np.ndarray         # (n_t, n_c)
    accel: np.ndarray            # (n_t, n_c)
    snapshot_times: np.ndarray   # (n_s,)
    snapshots: np.ndarray        # (n_s, n_c, n)
    ground_energy: float = 0.0

    @property
    def n_c(self) -> int:
        return len(self.configs)


def _propagate_block(spec: EnsembleSpec, configs: list[EnvironmentConfig],
                     psi0: np.ndarray, first_index: int) -> PropagationRecord:
    """Propagate a contiguous block of configurations as one batch."""
    grid = spec.grid()
    x = grid.x
    v_static = np.stack([potential_atom(x, spec.atom)
                         + potential_env(x, c, spec.perturber) for c in configs])
    g_static = np.stack([gradient_atom(x, spec.atom)
                         + gradient_env(x, c, spec.perturber) for c in configs])
    plan = PropagatorPlan(grid, spec.dt, v_static, spec.laser,
                          mask=absorber_mask(grid, spec.absorber_band))
    batch = np.tile(psi0, (len(configs), 1))
    rec = propagate(batch, plan, 0.0, spec.laser.duration, g_static,
                    record_stride=spec.record_stride,
                    probe_times=spec.resolved_probe_times())
    bad = ~np.isfinite(rec.norm[-1])
    if np.any(bad):
        raise PropagationFailure(first_index + int(np.argmax(bad)))
    return rec


def run_ensemble(spec: EnsembleSpec, workers: int = 1) -> EnsembleRecord:
    """Sample n_c configurations (streams 0..n_c-1) and propagate them all.

    The gas-phase ground state is prepared once and reused for every
    configuration: the buffer zone keeps the environment's overlap with the
    bound state negligible.  Results are assembled in configuration order.
    """
    configs = [sample_configuration(SeededRng(spec.master_seed, i), spec.structure)
               for i in range(spec.n_c)]
    grid = spec.grid()
    psi_g, e0 = ground_state(grid, lambda x: potential_atom(x, spec.atom))

    bounds = np.linspace(0, spec.n_c, min(workers, spec.n_c) + 1).astype(int)
    blocks = [(configs[a:b], int(a)) for a, b in zip(bounds[:-1], bounds[1:])
              if b > a]
    if len(blocks) == 1:
        parts = [_propagate_block(spec, blocks[0][0], psi_g.amplitudes, 0)]
    else:
        with ProcessPoolExecutor(max_workers=len(blocks)) as pool:
            parts = list(pool.map(_propagate_block,
                                  [spec] * len(blocks),
                                  [b[0] for b in blocks],
                                  [psi_g.amplitudes] * len(blocks),
                                  [b[1] for b in blocks]))

    return EnsembleRecord(
        spec=spec,
        configs=configs,
        times=parts[0].times,
        norm=np.concatenate([p.norm for p in parts], axis=1),
        x_expect=np.concatenate([p.x_expect for p in parts], axis=1),
        accel=np.concatenate([p.accel for p in parts], axis=1),
        snapshot_times=parts[0].snapshot_times,
        snapshots=np.concatenate([p.snapshots for p in parts], axis=1),
        ground_energy=e0,
    )


def ensemble_expectation(record: EnsembleRecord, observable: str) -> np.ndarray:
    """Unweighted mean over configurations of one recorded series."""
    series = getattr(record, observable)
    return series.mean(axis=1)


def merge_records(records: list[EnsembleRecord]) -> EnsembleRecord:
    """Concatenate ensemble records along the configuration axis.

    All records must share identical time axes and grids; mismatch is an
    error because incoherent averages are only defined time point by time
    point.
    """
    if not records:
        raise ValueError("nothing to merge")
    first = records[0]
    for r in records[1:]:
        if not (np.array_equal(r.times, first.times)
                and np.array_equal(r.snapshot_times, first.snapshot_times)):
            raise ValueError("records have misaligned time axes")
        if r.spec.grid() != first.spec.grid():
            raise ValueError("records live on different grids")
    return EnsembleRecord(
        spec=first.spec,
        configs=sum((r.configs for r in records), []),
        times=first.times,
        norm=np.concatenate([r.norm for r in records], axis=1),
        x_expect=np.concatenate([r.x_expect for r in records], axis=1),
        accel=np.concatenate([r.accel for r in records], axis=1),
        snapshot_times=first.snapshot_times,
        snapshots=np.concatenate([r.snapshots for r in records], axis=1),
        ground_energy=first.ground_energy,
    )


def apply_photoelectron_mask(psi: np.ndarray, mask: MaskSpec,
                             x: np.ndarray) -> np.ndarray:
    """Pointwise multiply by the mask; the result is an unnormalized state."""
    return psi * mask.values(x)


def purity(snapshots: np.ndarray, dx: float,
           mask_values: np.ndarray | None = None) -> float:
    """tr[ρ²]/tr[ρ]² of the uniform mixture of the given states.

    With Gram entries g_ij = ⟨ψ̃_i|ψ̃_j⟩ dx of the (optionally masked)
    states, the normalized purity is Σ_ij |g_ij|² / (Σ_i g_ii)²; the 1/N_c
    mixture weights cancel.  Raises if every masked state is zero.
    """
    a = np.atleast_2d(np.asarray(snapshots))
    if mask_values is not None:
        a = a * mask_values
    gram = (a.conj() @ a.T) * dx
    trace = float(np.trace(gram).real)
    if trace <= 0.0:
        raise ValueError("purity undefined: all states have zero mass")
    return float(np.sum(np.abs(gram) ** 2) / trace**2)


def purity_series(record: EnsembleRecord,
                  mask: MaskSpec | None = None) -> tuple[np.ndarray, np.ndarray,
                                                         np.ndarray]:
    """Purity at each probe time, for the full state and the masked state.

    Returns (times, P_total, P_masked); the masked series is all-ones when
    no mask is given.
    """
    grid = record.spec.grid()
    mvals = mask.values(grid.x) if mask is not None else None
    p_tot = np.empty(record.snapshot_times.size)
    p_ph = np.ones(record.snapshot_times.size)
    for k in range(record.snapshot_times.size):
        p_tot[k] = purity(record.snapshots[k], grid.dx)
        if mvals is not None:
            p_ph[k] = purity(record.snapshots[k], grid.dx, mvals)
    return record.snapshot_times, p_tot, p_ph


@dataclass
class SpatialMap:
    """2D field over labelled axes (time × position, or position × position)."""

    row_axis: np.ndarray
    col_axis: np.ndarray
    values: np.ndarray
    row_label: str = ""
    col_label: str = ""


def density_matrix_map(snapshots: np.ndarray, grid: Grid,
                       mask: MaskSpec | None = None,
                       x_range: tuple[float, float] | None = None,
                       stride: int = 1) -> SpatialMap:
    """|ρ(x, x')|² of the mixture on a strided subgrid.

    ρ(x, x') = (1/N_c) Σ_i ψ_i(x) ψ_i*(x'); the subgrid bounds memory, which
    would otherwise grow as the square of the grid size.
    """
    a = np.atleast_2d(np.asarray(snapshots))
    if x_range is None:
        x_range = (grid.x_min, grid.x_max)
    if x_range[0] < grid.x_min or x_range[1] > grid.x_max:
        raise ValueError("requested region extends outside the grid")
    sel = (grid.x >= x_range[0]) & (grid.x <= x_range[1])
    idx = np.flatnonzero(sel)[::stride]
    sub = a[:, idx]
    if mask is not None:
        sub = sub * mask.values(grid.x[idx])
    rho = (sub.T @ sub.conj()) / a.shape[0]
    return SpatialMap(grid.x[idx], grid.x[idx], np.abs(rho) ** 2, "x", "x'")


def probability_density_map(record: EnsembleRecord) -> SpatialMap:
    """Ensemble-averaged |ψ(x, t)|² over the stored snapshot times."""
    dens = np.mean(np.abs(record.snapshots) ** 2, axis=1)
    return SpatialMap(record.snapshot_times, record.spec.grid().x, dens, "t", "x")

"""
Grid propagation of a single conditioned state under

    i ∂_t ψ = [ p̂²/2 + V(x) + 𝒱(x) + x F(t) ] ψ

using a split-operator scheme: the kinetic factor is applied in momentum
representation (FFT), potential and field factors pointwise in position,
composed with the fourth-order coefficients from `splitting`.  The same
machinery run in imaginary time prepares the ground state.

All propagation routines accept either a single state of shape (n,) or a
batch of shape (m, n) and treat the last axis as the spatial grid; batching
keeps the FFT work vectorized when many disorder configurations propagate
side by side.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
import scipy.fft
import scipy.sparse
from scipy.sparse.linalg import eigsh

from .model import LaserParams, field_at
from .splitting import DRIFT_COEFFS, KICK_COEFFS, KICK_TIMES


class ConvergenceError(RuntimeError):
    """Iteration cap exceeded; carries the last estimate."""

    def __init__(self, message, last_value):
        super().__init__(message)
        self.last_value = last_value


@dataclass(frozen=True)
class Grid:
    """Uniform spatial grid with the matching FFT momentum grid."""

    x_min: float
    x_max: float
    n: int
    x: np.ndarray = field(init=False, repr=False, compare=False)
    p: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("grid needs at least 2 points")
        if self.x_max <= self.x_min:
            raise ValueError("x_max must exceed x_min")
        dx = (self.x_max - self.x_min) / self.n
        object.__setattr__(self, "x",
                           self.x_min + dx * np.arange(self.n))
        object.__setattr__(self, "p", 2.0 * np.pi * np.fft.fftfreq(self.n, d=dx))

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / self.n

    @property
    def p_max(self) -> float:
        """Nyquist momentum π/dx."""
        return np.pi / self.dx


@dataclass
class Wavefunction:
    """Complex amplitudes on a Grid, stamped with the current time."""

    amplitudes: np.ndarray
    grid: Grid
    time: float = 0.0

    def norm(self) -> float:
        """⟨ψ|ψ⟩ as the Riemann sum Σ|ψ|² dx."""
        return float(np.sum(np.abs(self.amplitudes) ** 2) * self.grid.dx)

    def copy(self) -> "Wavefunction":
        return Wavefunction(self.amplitudes.copy(), self.grid, self.time)


def state_norm(psi: np.ndarray, dx: float):
    """Σ|ψ|² dx along the last axis."""
    return np.sum(np.abs(psi) ** 2, axis=-1) * dx


def overlap(psi_a: np.ndarray, psi_b: np.ndarray, dx: float):
    """⟨ψ_a|ψ_b⟩ along the last axis."""
    return np.sum(np.conj(psi_a) * psi_b, axis=-1) * dx


def absorber_mask(grid: Grid, band_fraction: float = 0.1,
                  exponent: float = 0.125) -> np.ndarray:
    """Real mask, 1 in the interior, cos^exponent decay to 0 over each edge band."""
    if not 0.0 < band_fraction < 0.5:
        raise ValueError("band_fraction must lie in (0, 0.5)")
    width = band_fraction * (grid.x_max - grid.x_min)
    left = grid.x_min + width
    right = grid.x_max - width
    mask = np.ones(grid.n)
    s = np.zeros(grid.n)
    s = np.where(grid.x < left, (left - grid.x) / width, s)
    s = np.where(grid.x > right, (grid.x - right) / width, s)
    band = (s > 0) & (s < 1)
    mask[band] = np.cos(0.5 * np.pi * s[band]) ** exponent
    mask[s >= 1] = 0.0
    return mask


class PropagatorPlan:
    """Precomputed tables for stepping states on one grid.

    Holds the kinetic phase factors for every drift coefficient, the kick
    factors of the static potential for every kick coefficient, the laser,
    and the absorber mask (None disables absorption).  `static_potential`
    may be (n,) or (m, n) for a batch of environments sharing the grid.
    """

    def __init__(self, grid: Grid, dt: float, static_potential: np.ndarray,
                 laser: LaserParams, mask: np.ndarray | None = None,
                 fft_workers: int = 1):
        if dt == 0.0:
            raise ValueError("dt must be nonzero")
        self.grid = grid
        self.dt = dt
        self.laser = laser
        self.mask = mask
        self.fft_workers = fft_workers
        self.static_potential = np.asarray(static_potential, dtype=float)
        kin = -0.5j * dt * grid.p**2
        self.kinetic_factors = [np.exp(a * kin) for a in DRIFT_COEFFS]
        pot = -1j * dt * self.static_potential
        self.static_kick_factors = [np.exp(b * pot) for b in KICK_COEFFS]
        self.kick_times = KICK_TIMES * dt


def step(psi: np.ndarray, t: float, plan: PropagatorPlan,
         field_fn: Callable | None = None) -> np.ndarray:
    """Advance ψ(t) by one time step dt (no absorber).

    The field factor of kick k is evaluated at t plus the accumulated drift
    time, which keeps the composition fourth-order for the time-dependent
    coupling x·F(t).  Multiplications run in place on a fresh copy, so the
    input array is left untouched.
    """
    if field_fn is None:
        field_fn = field_at
    x = plan.grid.x
    dt = plan.dt
    w = plan.fft_workers
    psi_k = scipy.fft.fft(psi, axis=-1, workers=w)
    psi_k *= plan.kinetic_factors[0]
    psi = scipy.fft.ifft(psi_k, axis=-1, workers=w, overwrite_x=True)
    for k in range(6):
        f_t = field_fn(t + plan.kick_times[k], plan.laser)
        psi *= plan.static_kick_factors[k]
        psi *= np.exp((-1j * KICK_COEFFS[k] * dt * f_t) * x)
        psi_k = scipy.fft.fft(psi, axis=-1, workers=w, overwrite_x=True)
        psi_k *= plan.kinetic_factors[k + 1]
        psi = scipy.fft.ifft(psi_k, axis=-1, workers=w, overwrite_x=True)
    return psi


def apply_absorber(psi: np.ndarray, plan: PropagatorPlan) -> np.ndarray:
    """Multiply by the plan's absorbing mask (identity if the plan has none)."""
    if plan.mask is None:
        return psi
    return psi * plan.mask


@dataclass
class PropagationRecord:
    """Observables sampled along one propagation (leading axis = time)."""

    times: np.ndarray
    norm: np.ndarray          # ⟨ψ|ψ⟩
    x_expect: np.ndarray      # ⟨ψ|x̂|ψ⟩, not renormalized
    accel: np.ndarray         # -⟨ψ|V'+𝒱'|ψ⟩ - F(t)⟨ψ|ψ⟩, not renormalized
    snapshot_times: np.ndarray
    snapshots: np.ndarray     # (n_probe, ..., n) complex amplitudes
    extras: dict = field(default_factory=dict)


def propagate(psi0: np.ndarray, plan: PropagatorPlan, t_start: float,
              t_end: float, static_gradient: np.ndarray,
              record_stride: int = 4,
              probe_times: Sequence[float] = (),
              extra_recorders: dict[str, Callable] | None = None,
              field_fn: Callable | None = None) -> PropagationRecord:
    """March from t_start to t_end, recording every `record_stride` steps.

    Snapshots are stored at the step times closest to each requested probe
    time.  `static_gradient` is d/dx of the static potential, needed by the
    acceleration recorder; shapes follow `static_potential` in the plan.
    """
    if field_fn is None:
        field_fn = field_at
    dt = plan.dt
    n_steps = int(round((t_end - t_start) / dt))
    if n_steps < 0:
        raise ValueError("schedule runs against the sign of dt")
    if record_stride < 1:
        raise ValueError("record_stride must be >= 1")
    x = plan.grid.x
    dx = plan.grid.dx
    grad = np.asarray(static_gradient, dtype=float)
    extra_recorders = extra_recorders or {}

    probe_times = np.asarray(sorted(probe_times), dtype=float)
    probe_steps = np.unique(np.round((probe_times - t_start) / dt).astype(int)) \
        if probe_times.size else np.empty(0, dtype=int)
    probe_steps = probe_steps[(probe_steps >= 0) & (probe_steps <= n_steps)]

    psi = np.asarray(psi0, dtype=complex).copy()
    times, norms, xs, accels = [], [], [], []
    extras: dict[str, list] = {name: [] for name in extra_recorders}
    snap_times, snaps = [], []

    def record(t):
        dens = np.abs(psi) ** 2
        w = np.sum(dens, axis=-1) * dx
        times.append(t)
        norms.append(w)
        xs.append(np.sum(dens * x, axis=-1) * dx)
        accels.append(-np.sum(dens * grad, axis=-1) * dx
                      - field_fn(t, plan.laser) * w)
        for name, fn in extra_recorders.items():
            extras[name].append(fn(psi, t))

    probe_set = set(int(s) for s in probe_steps)
    record(t_start)
    if 0 in probe_set:
        snap_times.append(t_start)
        snaps.append(psi.copy())
    for k in range(1, n_steps + 1):
        t_prev = t_start + (k - 1) * dt
        psi = step(psi, t_prev, plan, field_fn)
        psi = apply_absorber(psi, plan)
        t_now = t_start + k * dt
        if k % record_stride == 0:
            record(t_now)
        if k in probe_set:
            snap_times.append(t_now)
            snaps.append(psi.copy())

    shape = psi.shape[:-1]
    return PropagationRecord(
        times=np.array(times),
        norm=np.array(norms).reshape(len(times), *shape),
        x_expect=np.array(xs).reshape(len(times), *shape),
        accel=np.array(accels).reshape(len(times), *shape),
        snapshot_times=np.array(snap_times),
        snapshots=(np.array(snaps) if snaps
                   else np.empty((0,) + psi.shape, dtype=complex)),
        extras={name: np.array(vals) for name, vals in extras.items()},
    )


def dipole_accel_instant(psi: np.ndarray, t: float, static_gradient: np.ndarray,
                         laser: LaserParams, dx: float,
                         field_fn: Callable | None = None):
    """Ehrenfest dipole acceleration -⟨V'+𝒱'⟩ - F(t), per unit of ⟨ψ|ψ⟩."""
    if field_fn is None:
        field_fn = field_at
    dens = np.abs(psi) ** 2
    w = np.sum(dens, axis=-1) * dx
    if np.any(w <= 0.0):
        raise ValueError("dipole acceleration undefined for a zero-norm state")
    raw = -np.sum(dens * np.asarray(static_gradient), axis=-1) * dx \
        - field_fn(t, laser) * w
    return raw / w


def kinetic_energy(psi: np.ndarray, grid: Grid):
    """⟨ψ|p̂²/2|ψ⟩ evaluated spectrally (per Parseval, dx/n weights)."""
    psi_k = np.fft.fft(psi, axis=-1)
    return np.sum(0.5 * grid.p**2 * np.abs(psi_k) ** 2, axis=-1) * grid.dx / grid.n


def rayleigh_energy(psi: np.ndarray, grid: Grid, potential: np.ndarray):
    """⟨ψ|H|ψ⟩ / ⟨ψ|ψ⟩ for the static Hamiltonian."""
    w = state_norm(psi, grid.dx)
    pot = np.sum(np.abs(psi) ** 2 * potential, axis=-1) * grid.dx
    return (kinetic_energy(psi, grid) + pot) / w


def ground_state(grid: Grid, potential: Callable | np.ndarray,
                 dtau_stages: Sequence[float] = (0.5, 0.1, 0.02, 0.005),
                 drift_tol: float = 1e-10,
                 max_iter: int = 20000) -> tuple[Wavefunction, float]:
    """Lowest eigenstate by imaginary-time split-operator propagation.

    The decay kernel is the Strang splitting e^{-dτV/2} e^{-dτT} e^{-dτV/2};
    in imaginary time every factor is a pure decay, so the iteration is
    stable on arbitrarily stiff grids (the fourth-order composition is not:
    its negative coefficients amplify roundoff through the potential kicks).
    Each stage runs its dτ until the Rayleigh energy drifts by less than
    `drift_tol` per step; shrinking dτ between stages removes the splitting
    bias, and the Rayleigh quotient is variational so the residual energy
    error is quadratic in the state error.
    """
    v = potential(grid.x) if callable(potential) else np.asarray(potential)
    if v.shape != (grid.n,):
        raise ValueError("potential shape does not match the grid")
    psi = np.exp(-grid.x**2 / 2.0).astype(complex)
    psi /= np.sqrt(state_norm(psi, grid.dx))
    energy = float(rayleigh_energy(psi, grid, v))
    total_iter = 0
    for dtau in dtau_stages:
        kin_decay = np.exp(-0.5 * dtau * grid.p**2)
        pot_half = np.exp(-0.5 * dtau * v)
        while True:
            psi = pot_half * np.fft.ifft(kin_decay * np.fft.fft(pot_half * psi))
            psi /= np.sqrt(state_norm(psi, grid.dx))
            new_energy = float(rayleigh_energy(psi, grid, v))
            drift = abs(new_energy - energy)
            energy = new_energy
            total_iter += 1
            if drift < drift_tol:
                break
            if total_iter >= max_iter:
                raise ConvergenceError(
                    f"imaginary-time iteration cap {max_iter} reached "
                    f"(last drift {drift:.3e})", energy)
    # fix the arbitrary global phase so the state is real and positive at its peak
    peak = np.argmax(np.abs(psi))
    psi = psi * np.exp(-1j * np.angle(psi[peak]))
    return Wavefunction(psi, grid, 0.0), energy


def fd_eigenstates(grid: Grid, potential: np.ndarray,
                   n_states: int = 1) -> tuple[np.ndarray, np.ndarray]:
    """Low eigenpairs from a 5-point finite-difference Hamiltonian.

    Independent of the FFT machinery; serves as a cross-check for
    `ground_state`.  Returns (energies, states) with states normalized so
    Σ|ψ|²dx = 1, columns ordered by energy.
    """
    n, dx = grid.n, grid.dx
    main = np.full(n, 5.0 / 2.0)
    off1 = np.full(n - 1, -4.0 / 3.0)
    off2 = np.full(n - 2, 1.0 / 12.0)
    lap = scipy.sparse.diags(
        [off2, off1, main, off1, off2], [-2, -1, 0, 1, 2]) / dx**2
    ham = 0.5 * lap + scipy.sparse.diags(np.asarray(potential))
    vals, vecs = eigsh(ham.tocsc(), k=n_states, which="SA")
    order = np.argsort(vals)
    vecs = vecs[:, order] / np.sqrt(dx)
    return vals[order], vecs.T

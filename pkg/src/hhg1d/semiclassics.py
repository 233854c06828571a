"""
Classical companion of the quantum engine: field-only recollision
trajectories and their return channels, the exact classical flow of the
driven soft-core atom, and Newton-based periodic-orbit finding with
linear stability.

All routines here use the constant-envelope field F_L sin(ω_L t); envelope
effects belong to the quantum engine.  Phase-space points are plain arrays
z = (x, p).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import AtomParams, LaserParams, ponderomotive_energy
from .splitting import DRIFT_COEFFS, KICK_COEFFS, KICK_TIMES

MESH_PER_CYCLE = 2000   # root-bracketing resolution for return finding
FLOW_STEP = 0.01        # default integration step (a.u.) of the exact flow


class OrbitError(RuntimeError):
    """Newton orbit search failed; carries the last residual."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


@dataclass
class SfaEvent:
    """One recollision: launch at t_i, optional momentum reversal at t_s,
    arrival at |x| = ell with laser-only kinetic energy e_r."""

    t_i: float
    t_r: float
    e_r: float
    ell: float = 0.0
    side: int = 0            # sign of x(t_r)
    t_s: float | None = None

    def __post_init__(self):
        if self.e_r < -1e-12:
            raise ValueError("return energy cannot be negative")
        if self.t_r < self.t_i:
            raise ValueError("return precedes ionization")


@dataclass
class PeriodicOrbit:
    """Fixed point of the one-period flow map with its linearization."""

    z_star: np.ndarray
    t0: float
    monodromy: np.ndarray
    classification: str      # "hyperbolic" | "elliptic" | "parabolic"
    residual: float


def sfa_position(t, t_i: float, laser: LaserParams):
    """Field-only trajectory launched from x = 0, p = 0 at t_i."""
    w, f = laser.omega_L, laser.F_L
    t = np.asarray(t, dtype=float)
    return (-(f / w) * np.cos(w * t_i) * (t - t_i)
            + (f / w**2) * (np.sin(w * t) - np.sin(w * t_i)))


def sfa_momentum(t, t_i: float, laser: LaserParams):
    """Momentum of the field-only trajectory, (F_L/ω)(cos ωt - cos ωt_i)."""
    w, f = laser.omega_L, laser.F_L
    t = np.asarray(t, dtype=float)
    return (f / w) * (np.cos(w * t) - np.cos(w * t_i))


def return_energy(t_r, t_i: float, laser: LaserParams):
    """Laser-only kinetic energy at arrival, 2U_p[cos ωt_r - cos ωt_i]²."""
    up = ponderomotive_energy(laser)
    w = laser.omega_L
    t_r = np.asarray(t_r, dtype=float)
    return 2.0 * up * (np.cos(w * t_r) - np.cos(w * t_i)) ** 2


def _bracket_roots(fn, t_lo: float, t_hi: float, n_mesh: int,
                   tol: float = 1e-10) -> np.ndarray:
    """All sign-change roots of fn on (t_lo, t_hi], by mesh + bisection.

    Bisection is vectorized over the brackets and runs until every
    interval is narrower than tol.
    """
    t = np.linspace(t_lo, t_hi, n_mesh + 1)
    v = fn(t)
    flip = np.flatnonzero(np.sign(v[:-1]) * np.sign(v[1:]) < 0)
    exact = np.flatnonzero(v[1:] == 0.0)
    lo, hi = t[flip], t[flip + 1]
    v_lo = v[flip]
    while lo.size and np.max(hi - lo) > tol:
        mid = 0.5 * (lo + hi)
        v_mid = fn(mid)
        left = np.sign(v_lo) * np.sign(v_mid) < 0
        hi = np.where(left, mid, hi)
        lo = np.where(left, lo, mid)
        v_lo = np.where(left, v_lo, v_mid)
    roots = 0.5 * (lo + hi)
    return np.sort(np.concatenate([roots, t[exact + 1]]))


def find_returns(t_i: float, ell: float, laser: LaserParams,
                 horizon: float = 1.5,
                 mesh_per_cycle: int = MESH_PER_CYCLE) -> list[SfaEvent]:
    """All arrivals |x(t_r)| = ell within `horizon` cycles after launch.

    Both sides ±ell are reported, labelled by `side`.  Empty when the
    trajectory never reaches the requested distance.
    """
    if ell < 0:
        raise ValueError("return distance must be nonnegative")
    T = laser.period
    n_mesh = int(round(mesh_per_cycle * horizon))
    t_lo = t_i + horizon * T / n_mesh
    t_hi = t_i + horizon * T
    events = []
    targets = [0.0] if ell == 0.0 else [ell, -ell]
    for target in targets:
        roots = _bracket_roots(lambda t: sfa_position(t, t_i, laser) - target,
                               t_lo, t_hi, n_mesh)
        for t_r in roots:
            events.append(SfaEvent(
                t_i=t_i, t_r=float(t_r),
                e_r=float(return_energy(t_r, t_i, laser)),
                ell=ell, side=int(np.sign(target))))
    events.sort(key=lambda e: e.t_r)
    return events


def max_return_energy(ell: float, laser: LaserParams, horizon: float = 1.5,
                      n_launch: int = 2000,
                      mesh_per_cycle: int = MESH_PER_CYCLE) -> float:
    """Maximum return energy at distance ell over launch phases in [0, T_L)."""
    best = 0.0
    T = laser.period
    for t_i in np.linspace(0.0, T, n_launch, endpoint=False):
        for ev in find_returns(t_i, ell, laser, horizon, mesh_per_cycle):
            if ev.e_r > best:
                best = ev.e_r
    return best


@dataclass
class BackscatterTrajectory:
    """Field-only path with one elastic momentum reversal p → -p at t_s."""

    t_i: float
    t_s: float
    laser: LaserParams

    def __post_init__(self):
        if self.t_s <= self.t_i:
            raise ValueError("reversal must follow ionization")
        self.x_s = float(sfa_position(self.t_s, self.t_i, self.laser))
        self.p_s = float(sfa_momentum(self.t_s, self.t_i, self.laser))

    def position(self, t):
        t = np.asarray(t, dtype=float)
        w, f = self.laser.omega_L, self.laser.F_L
        after = (self.x_s
                 + (-self.p_s - (f / w) * np.cos(w * self.t_s)) * (t - self.t_s)
                 + (f / w**2) * (np.sin(w * t) - np.sin(w * self.t_s)))
        return np.where(t < self.t_s, sfa_position(t, self.t_i, self.laser),
                        after)

    def momentum(self, t):
        t = np.asarray(t, dtype=float)
        w, f = self.laser.omega_L, self.laser.F_L
        after = -self.p_s + (f / w) * (np.cos(w * t) - np.cos(w * self.t_s))
        return np.where(t < self.t_s, sfa_momentum(t, self.t_i, self.laser),
                        after)

    def origin_returns(self, horizon: float = 1.5,
                       mesh_per_cycle: int = MESH_PER_CYCLE) -> list[SfaEvent]:
        """Arrivals at x = 0 after the reversal, with their kinetic energies."""
        T = self.laser.period
        n_mesh = int(round(mesh_per_cycle * horizon))
        t_lo = self.t_s + horizon * T / n_mesh
        roots = _bracket_roots(lambda t: self.position(t), t_lo,
                               self.t_s + horizon * T, n_mesh)
        return [SfaEvent(t_i=self.t_i, t_r=float(r),
                         e_r=float(0.5 * self.momentum(r) ** 2),
                         ell=0.0, side=0, t_s=self.t_s)
                for r in roots]


def backscatter_trajectory(t_i: float, t_s: float,
                           laser: LaserParams) -> BackscatterTrajectory:
    """Trajectory identical to the direct one up to t_s, then p(t_s) → -p(t_s)."""
    return BackscatterTrajectory(t_i=t_i, t_s=t_s, laser=laser)


def _flow_steps(t0: float, t1: float, h_target: float) -> tuple[int, float]:
    span = t1 - t0
    if span == 0.0:
        return 0, h_target
    n = max(1, int(np.ceil(abs(span) / h_target)))
    return n, span / n


_A = tuple(float(a) for a in DRIFT_COEFFS)
_B = tuple(float(b) for b in KICK_COEFFS)
_CT = tuple(float(c) for c in KICK_TIMES)


def classical_flow(z0, t0: float, t1: float, laser: LaserParams,
                   atom: AtomParams | None,
                   h_target: float = FLOW_STEP) -> np.ndarray:
    """Integrate ẋ = p, ṗ = -V'(x) - F_L sin(ωt) from t0 to t1.

    Same fourth-order drift-kick composition as the quantum engine; the
    kick time advances with the accumulated drift coefficients.  atom=None
    drops the soft-core force (field-only flow).
    """
    x, p = float(z0[0]), float(z0[1])
    n, h = _flow_steps(t0, t1, h_target)
    w, f = laser.omega_L, laser.F_L
    alpha = atom.softening if atom is not None else None
    sin = math.sin
    for k in range(n):
        t = t0 + k * h
        x += _A[0] * h * p
        for j in range(6):
            force = f * sin(w * (t + _CT[j] * h))
            if alpha is not None:
                force += x * (x * x + alpha) ** -1.5
            p -= _B[j] * h * force
            x += _A[j + 1] * h * p
    return np.array([x, p])


def monodromy(z0, t0: float, laser: LaserParams, atom: AtomParams | None,
              h_target: float = FLOW_STEP,
              period: float | None = None) -> tuple[np.ndarray, np.ndarray]:
    """One-period flow and its linearization around the trajectory.

    The tangent map is accumulated through the variational equations of the
    same composition (drift: δx += a h δp; kick: δp -= b h V''(x) δx), so it
    is the exact Jacobian of the discrete flow map.  Returns (z_T, M).
    """
    T = laser.period if period is None else period
    x, p = float(z0[0]), float(z0[1])
    m00, m01, m10, m11 = 1.0, 0.0, 0.0, 1.0
    n, h = _flow_steps(t0, t0 + T, h_target)
    w, f = laser.omega_L, laser.F_L
    alpha = atom.softening if atom is not None else None
    sin = math.sin
    for k in range(n):
        t = t0 + k * h
        x += _A[0] * h * p
        m00 += _A[0] * h * m10
        m01 += _A[0] * h * m11
        for j in range(6):
            force = f * sin(w * (t + _CT[j] * h))
            if alpha is not None:
                r2 = x * x + alpha
                force += x * r2**-1.5
                curv = _B[j] * h * (alpha - 2.0 * x * x) * r2**-2.5
                m10 -= curv * m00
                m11 -= curv * m01
            p -= _B[j] * h * force
            x += _A[j + 1] * h * p
            m00 += _A[j + 1] * h * m10
            m01 += _A[j + 1] * h * m11
    return np.array([x, p]), np.array([[m00, m01], [m10, m11]])


def classify(m: np.ndarray, tol: float = 1e-6) -> str:
    t = abs(np.trace(m))
    if t > 2.0 + tol:
        return "hyperbolic"
    if t < 2.0 - tol:
        return "elliptic"
    return "parabolic"


def quiver_guess(t0: float, laser: LaserParams) -> np.ndarray:
    """Zero-drift field-only orbit point, the standard seed for the search."""
    w, f = laser.omega_L, laser.F_L
    return np.array([-(f / w**2) * np.sin(w * t0), (f / w) * np.cos(w * t0)])


def _reversible_presearch(z, t0: float, laser: LaserParams, atom: AtomParams,
                          h_target: float) -> np.ndarray:
    """Pull a far-off guess onto the reversing-symmetry line.

    The field is even about its extremum phases, so with the even soft-core
    potential the flow is reversible about them: an orbit crossing such a
    phase with p = 0 and doing so again half a period later closes exactly.
    That reduces the search to a scalar root x* of
    g(x) = p[φ over T_L/2 from (x, 0)], solved by bracketing + bisection
    near the guess, and leaves only a polishing step for Newton.
    """
    T = laser.period
    w = laser.omega_L
    k = math.ceil((w * t0 - 0.5 * math.pi) / math.pi)
    t_star = (0.5 * math.pi + k * math.pi) / w
    x0 = float(classical_flow(z, t0, t_star, laser, atom, h_target)[0])

    def g(x):
        return float(classical_flow((x, 0.0), t_star, t_star + 0.5 * T, laser,
                                    atom, h_target)[1])

    root = None
    for half_width in (5.0, 10.0, 20.0, 40.0):
        xs = np.linspace(x0 - half_width, x0 + half_width, 17)
        vals = np.array([g(x) for x in xs])
        flips = np.flatnonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)
        if flips.size:
            # take the bracket closest to the guess
            i = flips[np.argmin(np.abs(0.5 * (xs[flips] + xs[flips + 1]) - x0))]
            lo, hi, g_lo = xs[i], xs[i + 1], vals[i]
            for _ in range(60):
                mid = 0.5 * (lo + hi)
                g_mid = g(mid)
                if g_lo * g_mid <= 0.0:
                    hi = mid
                else:
                    lo, g_lo = mid, g_mid
            root = 0.5 * (lo + hi)
            break
    if root is None:
        return np.asarray(z, dtype=float)
    return classical_flow((root, 0.0), t_star, t0, laser, atom, h_target)


def find_periodic_orbit(guess, t0: float, laser: LaserParams,
                        atom: AtomParams | None,
                        tol: float = 1e-10, max_iter: int = 50,
                        h_target: float = FLOW_STEP) -> PeriodicOrbit:
    """Newton search for a fixed point of the one-period flow map.

    Solves (M - I) δz = -(φ(z) - z) with the monodromy M from the
    variational equations; steps are capped and halved while they fail to
    reduce the residual.  A guess whose image misses by more than an a.u.
    is first pulled in along the reversing-symmetry line.  A Jacobian with
    |det(M - I)| ≈ 0 signals a non-isolated or parabolic fixed point and is
    reported as an error rather than solved through.
    """
    z = np.asarray(guess, dtype=float).copy()
    if atom is not None:
        g0 = classical_flow(z, t0, t0 + laser.period, laser, atom, h_target) - z
        if np.linalg.norm(g0) > 1.0:
            z = _reversible_presearch(z, t0, laser, atom, h_target)
    residual = np.inf
    for _ in range(max_iter):
        z_t, m = monodromy(z, t0, laser, atom, h_target)
        g = z_t - z
        residual = float(np.linalg.norm(g))
        jac_det = float(np.linalg.det(m - np.eye(2)))
        if residual < tol:
            if abs(jac_det) < 1e-9:
                raise OrbitError(
                    "fixed point is non-isolated or parabolic "
                    f"(|det(M-I)| = {abs(jac_det):.2e})", residual)
            return PeriodicOrbit(z_star=z, t0=t0, monodromy=m,
                                 classification=classify(m),
                                 residual=residual)
        if abs(jac_det) < 1e-9:
            raise OrbitError(
                "singular Jacobian: fixed point is non-isolated or parabolic",
                residual)
        delta = np.linalg.solve(m - np.eye(2), -g)
        cap = 0.25 * (1.0 + np.linalg.norm(z))
        if np.linalg.norm(delta) > cap:
            delta *= cap / np.linalg.norm(delta)
        lam = 1.0
        for _ in range(30):
            z_try = z + lam * delta
            g_try = classical_flow(z_try, t0, t0 + laser.period, laser, atom,
                                   h_target) - z_try
            if np.linalg.norm(g_try) < residual:
                break
            lam *= 0.5
        z = z + lam * delta
    raise OrbitError(f"Newton failed to reach {tol} in {max_iter} iterations",
                     residual)


def symmetry_partner(orbit: PeriodicOrbit, laser: LaserParams,
                     atom: AtomParams | None,
                     h_target: float = FLOW_STEP) -> PeriodicOrbit:
    """Orbit mapped through x → -x, p → -p, t0 → t0 + T_L/2.

    The even potential and the half-period antisymmetry of the field
    guarantee the image is again an orbit; it is verified by direct
    integration and the verification failure is an error.
    """
    t0 = orbit.t0 + 0.5 * laser.period
    z = -orbit.z_star
    z_t, m = monodromy(z, t0, laser, atom, h_target)
    residual = float(np.linalg.norm(z_t - z))
    if residual > 10.0 * max(orbit.residual, 1e-10):
        raise OrbitError(
            f"symmetry partner fails to close (residual {residual:.3e}); "
            "the assumed symmetries do not hold", residual)
    return PeriodicOrbit(z_star=z, t0=t0, monodromy=m,
                         classification=classify(m), residual=residual)


def overlay_orbit(orbit: PeriodicOrbit, laser: LaserParams,
                  atom: AtomParams | None, t_start: float, t_end: float,
                  n_per_period: int = 256,
                  h_target: float = FLOW_STEP) -> tuple[np.ndarray, np.ndarray]:
    """x(t) of the orbit extended periodically across [t_start, t_end].

    One period is integrated densely from the anchor; other times reuse it
    modulo T_L.  Intended for co-plotting with probability-density maps.
    """
    T = laser.period
    phases = np.linspace(0.0, T, n_per_period, endpoint=False)
    x_period = np.empty(n_per_period)
    z = orbit.z_star.copy()
    x_period[0] = z[0]
    for k in range(1, n_per_period):
        z = classical_flow(z, orbit.t0 + phases[k - 1], orbit.t0 + phases[k],
                           laser, atom, h_target)
        x_period[k] = z[0]
    times = np.arange(t_start, t_end, T / n_per_period)
    rel = np.mod(times - orbit.t0, T)
    idx = np.round(rel / (T / n_per_period)).astype(int) % n_per_period
    return times, x_period[idx]

"""Dissipative implicit Hamiltonian systems with constraint forces.

A system couples a pointwise LD structure (Pi, G) with a Hamiltonian H:

    xdot = Pi(x) grad H(x) + G(x) lambda,      0 = G(x)^T grad H(x).

The algebraic condition defines the consistency set chi_c; differentiating
it once (index reduction) yields the multiplier from the linear system
(J G) lambda = -J Pi grad H with J the Jacobian of the constraint residual
c(x) = G(x)^T grad H(x).  Integration is fixed-step RK4 with a Newton
projection along span G(x) back onto chi_c after every step; an independent
verification integrator uses an extrapolated Gragg modified-midpoint step at
half the step size, recording on the same time grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import (ConsistencyError, DegenerateMultiplierError, InputError,
                     LDKitError, StepFailureError)
from .fields import LDField, ScalarField
from .numdiff import central_gradient, central_jacobian
from .subspaces import DEFAULT_TOLERANCE, Tolerance, as_vector

__all__ = [
    "DEFAULT_PROJECTION_TOL",
    "DIHSystem",
    "IntegratorConfig",
    "Trajectory",
    "ConsistencyReport",
    "KernelForm",
    "EnergyAudit",
    "check_consistency",
    "multipliers",
    "rhs",
    "kernel_form",
    "energy_rate",
    "simulate",
    "oracle_simulate",
    "energy_audit",
    "audit_series",
]

DEFAULT_PROJECTION_TOL = 1e-10

# audit verdict cutoffs: a rate counts as nonpositive up to round-off, and a
# per-step energy increase up to the projection scale still counts as
# monotone decay
RATE_TOL = 1e-12
MONOTONE_TOL = 1e-10


@dataclass(frozen=True)
class DIHSystem:
    """A dissipative implicit Hamiltonian system on R^n.

    ``constraint_jacobian``, when given, must return the k×n Jacobian of
    x -> G(x)^T grad H(x); otherwise central differences are used.
    """

    n: int
    ld: LDField
    hamiltonian: ScalarField
    constraint_jacobian: Callable[[np.ndarray], np.ndarray] | None = None

    def __post_init__(self):
        if self.ld.n != self.n:
            raise InputError(
                f"structure dimension {self.ld.n} does not match n={self.n}")
        if self.hamiltonian.dim != self.n:
            raise InputError(
                f"Hamiltonian dimension {self.hamiltonian.dim} does not "
                f"match n={self.n}")

    @property
    def k(self) -> int:
        return self.ld.k


@dataclass(frozen=True)
class IntegratorConfig:
    """Fixed-step run configuration.

    The run covers floor(t_end / dt) steps of size dt; after each step the
    state is projected along span G(x) until the constraint residual is at
    most projection_tol.
    """

    dt: float
    t_end: float
    projection_tol: float = DEFAULT_PROJECTION_TOL
    max_projection_iters: int = 25

    def __post_init__(self):
        if not (self.dt > 0.0 and math.isfinite(self.dt)):
            raise InputError("dt must be positive and finite")
        if not (self.t_end >= 0.0 and math.isfinite(self.t_end)):
            raise InputError("t_end must be nonnegative and finite")
        if not (self.projection_tol > 0.0):
            raise InputError("projection_tol must be positive")
        if self.max_projection_iters < 1:
            raise InputError("max_projection_iters must be at least 1")

    @property
    def steps(self) -> int:
        return int(math.floor(self.t_end / self.dt + 1e-9))


@dataclass
class Trajectory:
    """Sampled run: row i holds the accepted state at times[i].

    multipliers has one row per sample (width k, possibly 0); residuals are
    max-norm constraint residuals |G^T grad H|; energies are H values and
    energy_rates the bracket values [H, H] = grad H^T sym(Pi) grad H.
    """

    times: np.ndarray
    states: np.ndarray
    multipliers: np.ndarray
    residuals: np.ndarray
    energies: np.ndarray
    energy_rates: np.ndarray

    @property
    def n(self) -> int:
        return self.states.shape[1]

    @property
    def k(self) -> int:
        return self.multipliers.shape[1]


@dataclass(frozen=True)
class ConsistencyReport:
    """Membership report for the consistency set chi_c."""

    point: np.ndarray
    in_chi_c: bool
    residual: float
    tol: float


@dataclass(frozen=True)
class KernelForm:
    """Constraint-eliminated reduced equations [K; 0] xdot = rhs.

    k_matrix has orthonormal rows spanning the left null space of G(x)
    (K G = 0); reduced_lhs stacks K over k zero rows, and reduced_rhs stacks
    K Pi grad H over the algebraic residual G^T grad H.
    """

    k_matrix: np.ndarray
    reduced_lhs: np.ndarray
    reduced_rhs: np.ndarray


@dataclass(frozen=True)
class EnergyAudit:
    """Energy bookkeeping of a trajectory.

    max_rate_deviation compares finite-difference dH/dt on the sample grid
    against the stored bracket values; the two verdict flags use the module
    cutoffs RATE_TOL and MONOTONE_TOL.
    """

    n_samples: int
    energy_drift: float
    max_rate: float
    rates_nonpositive: bool
    max_energy_increase: float
    energy_monotone: bool
    max_rate_deviation: float


class _ProjectionFailed(Exception):
    def __init__(self, residual: float):
        super().__init__(f"projection stalled at residual {residual:.3e}")
        self.residual = residual


class _Compiled:
    """Raw closures for the hot loop; shapes are validated once at the
    initial state through the checked field interfaces."""

    __slots__ = ("n", "k", "grad", "pi", "g", "jac", "hval")

    def __init__(self, sys: DIHSystem):
        self.n = sys.n
        self.k = sys.k
        ham = sys.hamiltonian
        self.hval = ham.value
        if ham.gradient is not None:
            self.grad = ham.gradient
        else:
            value = ham.value
            self.grad = lambda x: central_gradient(lambda p: float(value(p)), x)
        self.pi = sys.ld.pi.evaluate
        if self.k:
            self.g = sys.ld.forces.evaluate
        else:
            zero_g = np.zeros((sys.n, 0))
            self.g = lambda x: zero_g
        if sys.constraint_jacobian is not None:
            self.jac = sys.constraint_jacobian
        else:
            g_eval = self.g
            grad_eval = self.grad
            self.jac = lambda x: central_jacobian(
                lambda y: np.asarray(g_eval(y)).T @ grad_eval(y), x)


def _solve_constraint(a: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, float]:
    """Solve the k×k system a·z = b, min-norm least squares when singular.

    Returns (z, residual) with residual the max-norm of a·z - b.
    """
    if a.shape == (1, 1):
        av = a[0, 0]
        if av != 0.0:
            return b / av, 0.0
        return np.zeros(1), float(abs(b[0]))
    sol, *_ = np.linalg.lstsq(a, b, rcond=None)
    resid = float(np.abs(a @ sol - b).max(initial=0.0))
    return sol, resid


def _lambda_at(c: _Compiled, x: np.ndarray, grad: np.ndarray,
               g: np.ndarray, pi_grad: np.ndarray,
               tol: float) -> tuple[np.ndarray, float]:
    jac = np.asarray(c.jac(x), dtype=float)
    b = -(jac @ pi_grad)
    lam, resid = _solve_constraint(jac @ g, b)
    if resid > tol * max(1.0, float(np.abs(b).max(initial=0.0))):
        raise DegenerateMultiplierError(
            f"multiplier system is singular and inconsistent (least-squares "
            f"residual {resid:.3e})", ls_residual=resid)
    return lam, resid


def check_consistency(sys: DIHSystem, x,
                      projection_tol: float = DEFAULT_PROJECTION_TOL) -> ConsistencyReport:
    """Test membership of ``x`` in chi_c = {x : G(x)^T grad H(x) = 0}."""
    point = as_vector(x, sys.n, "state")
    if sys.k == 0:
        return ConsistencyReport(point, True, 0.0, projection_tol)
    g = sys.ld.forces(point)
    grad = sys.hamiltonian.grad(point)
    residual = float(np.abs(g.T @ grad).max(initial=0.0))
    return ConsistencyReport(point, residual <= projection_tol, residual,
                             projection_tol)


def _require_consistent(sys: DIHSystem, x, projection_tol: float) -> np.ndarray:
    report = check_consistency(sys, x, projection_tol)
    if not report.in_chi_c:
        raise ConsistencyError(
            f"state is not in the consistency set chi_c: constraint residual "
            f"|G^T grad H| = {report.residual:.3e} > {projection_tol:.1e}",
            residual=report.residual)
    return report.point


def multipliers(sys: DIHSystem, x,
                projection_tol: float = DEFAULT_PROJECTION_TOL) -> tuple[np.ndarray, float]:
    """Constraint multiplier at a consistent state.

    Solves (J G) lambda = -J Pi grad H with J the constraint-residual
    Jacobian; a singular system falls back to the min-norm least-squares
    solution and the second return value is its residual.
    """
    point = _require_consistent(sys, x, projection_tol)
    if sys.k == 0:
        return np.zeros(0), 0.0
    c = _Compiled(sys)
    grad = sys.hamiltonian.grad(point)
    g = sys.ld.forces(point)
    pi_grad = sys.ld.pi(point) @ grad
    return _lambda_at(c, point, grad, g, pi_grad, projection_tol)


def _rhs_raw(c: _Compiled, x: np.ndarray, tol: float) -> np.ndarray:
    grad = np.asarray(c.grad(x), dtype=float)
    pi_grad = np.asarray(c.pi(x), dtype=float) @ grad
    if c.k == 0:
        return pi_grad
    g = np.asarray(c.g(x), dtype=float)
    lam, _ = _lambda_at(c, x, grad, g, pi_grad, tol)
    return pi_grad + g @ lam


def rhs(sys: DIHSystem, x,
        projection_tol: float = DEFAULT_PROJECTION_TOL) -> np.ndarray:
    """Right-hand side Pi grad H + G lambda at a consistent state."""
    point = _require_consistent(sys, x, projection_tol)
    return _rhs_raw(_Compiled(sys), point, projection_tol)


def kernel_form(sys: DIHSystem, x,
                tol: Tolerance = DEFAULT_TOLERANCE) -> KernelForm:
    """Multiplier-free reduced form [K; 0] xdot = (K Pi grad H, G^T grad H).

    K spans the left null space of G(x); with k = 0 it is the identity.
    Raises RegularityError when G(x) drops rank.
    """
    point = as_vector(x, sys.n, "state")
    grad = sys.hamiltonian.grad(point)
    pi = sys.ld.pi(point)
    g = sys.ld.forces(point, tol)
    n, k = sys.n, sys.k
    if k == 0:
        kmat = np.eye(n)
    else:
        u, _, _ = np.linalg.svd(g, full_matrices=True)
        kmat = u[:, k:].T
    lhs = np.vstack([kmat, np.zeros((k, n))])
    rhs_vec = np.concatenate([kmat @ (pi @ grad), g.T @ grad])
    return KernelForm(kmat, lhs, rhs_vec)


def energy_rate(sys: DIHSystem, x) -> float:
    """The bracket value [H, H](x) = grad H^T sym(Pi) grad H."""
    point = as_vector(x, sys.n, "state")
    grad = sys.hamiltonian.grad(point)
    pi = sys.ld.pi(point)
    sym = 0.5 * (pi + pi.T)
    return float(grad @ (sym @ grad))


def _project(c: _Compiled, x: np.ndarray, tol: float,
             max_iters: int) -> np.ndarray:
    """Newton iteration along span G(x) onto the constraint set."""
    if c.k == 0:
        return x
    for _ in range(max_iters):
        g = np.asarray(c.g(x), dtype=float)
        cval = g.T @ np.asarray(c.grad(x), dtype=float)
        worst = float(np.abs(cval).max(initial=0.0))
        if worst <= tol:
            return x
        a = np.asarray(c.jac(x), dtype=float) @ g
        delta, _ = _solve_constraint(a, -cval)
        x = x + g @ delta
    g = np.asarray(c.g(x), dtype=float)
    cval = g.T @ np.asarray(c.grad(x), dtype=float)
    worst = float(np.abs(cval).max(initial=0.0))
    if worst <= tol:
        return x
    raise _ProjectionFailed(worst)


class _Recorder:
    def __init__(self, c: _Compiled, tol: float):
        self.c = c
        self.tol = tol
        self.times: list[float] = []
        self.states: list[np.ndarray] = []
        self.lams: list[np.ndarray] = []
        self.residuals: list[float] = []
        self.energies: list[float] = []
        self.rates: list[float] = []

    def record(self, t: float, x: np.ndarray) -> None:
        c = self.c
        grad = np.asarray(c.grad(x), dtype=float)
        pi = np.asarray(c.pi(x), dtype=float)
        pi_grad = pi @ grad
        if c.k:
            g = np.asarray(c.g(x), dtype=float)
            resid = float(np.abs(g.T @ grad).max(initial=0.0))
            lam, _ = _lambda_at(c, x, grad, g, pi_grad, self.tol)
        else:
            resid = 0.0
            lam = np.zeros(0)
        sym = 0.5 * (pi + pi.T)
        self.times.append(t)
        self.states.append(x)
        self.lams.append(lam)
        self.residuals.append(resid)
        self.energies.append(float(c.hval(x)))
        self.rates.append(float(grad @ (sym @ grad)))

    def build(self) -> Trajectory:
        return Trajectory(
            times=np.asarray(self.times),
            states=np.asarray(self.states).reshape(len(self.times), self.c.n),
            multipliers=np.asarray(self.lams).reshape(len(self.times), self.c.k),
            residuals=np.asarray(self.residuals),
            energies=np.asarray(self.energies),
            energy_rates=np.asarray(self.rates),
        )


def _run(sys: DIHSystem, x0, dt: float, steps: int, projection_tol: float,
         max_projection_iters: int,
         stepper: Callable[[Callable, np.ndarray, float], np.ndarray],
         substeps: int) -> Trajectory:
    """Drive a one-step map over the time grid, projecting and recording.

    ``substeps`` macro applications of ``stepper`` with size dt/substeps
    advance one grid interval; recording happens on the grid only.
    """
    x = _require_consistent(sys, x0, projection_tol)
    c = _Compiled(sys)
    rec = _Recorder(c, projection_tol)

    def f(y: np.ndarray) -> np.ndarray:
        return _rhs_raw(c, y, projection_tol)

    rec.record(0.0, x)
    h = dt / substeps
    for i in range(1, steps + 1):
        t_prev = (i - 1) * dt
        try:
            for _ in range(substeps):
                x_new = stepper(f, x, h)
                if not np.all(np.isfinite(x_new)):
                    raise _ProjectionFailed(float("inf"))
                x = _project(c, x_new, projection_tol, max_projection_iters)
            rec.record(i * dt, x)
        except (_ProjectionFailed, DegenerateMultiplierError, LDKitError,
                FloatingPointError) as exc:
            raise StepFailureError(
                f"step to t = {i * dt:.6g} failed: {exc}",
                time=t_prev, state=rec.states[-1],
                partial=rec.build()) from exc
    return rec.build()


def _rk4_step(f: Callable, x: np.ndarray, dt: float) -> np.ndarray:
    k1 = f(x)
    k2 = f(x + (0.5 * dt) * k1)
    k3 = f(x + (0.5 * dt) * k2)
    k4 = f(x + dt * k3)
    return x + (dt / 6.0) * (k1 + 2.0 * (k2 + k3) + k4)


def simulate(sys: DIHSystem, x0, config: IntegratorConfig) -> Trajectory:
    """Integrate with fixed-step RK4 plus post-step constraint projection.

    The initial state must lie in chi_c (ConsistencyError otherwise); a
    stalled projection, singular multiplier system, or non-finite state
    raises StepFailureError carrying the partial trajectory.
    """
    return _run(sys, x0, config.dt, config.steps, config.projection_tol,
                config.max_projection_iters, _rk4_step, substeps=1)


def _midpoint_chain(f: Callable, y0: np.ndarray, big_h: float, nsub: int,
                    f0: np.ndarray) -> np.ndarray:
    h = big_h / nsub
    z_prev = y0
    z = y0 + h * f0
    for _ in range(nsub - 1):
        z_prev, z = z, z_prev + (2.0 * h) * f(z)
    return 0.5 * (z + z_prev + h * f(z))


def _gbs_step(f: Callable, y: np.ndarray, h: float) -> np.ndarray:
    """One extrapolated Gragg modified-midpoint step of size h.

    Two smoothed modified-midpoint passes with 2 and 4 substeps are
    Richardson-extrapolated in the even h^2 error expansion, giving a
    4th-order one-step map built entirely from midpoint chains.
    """
    f0 = f(y)
    t1 = _midpoint_chain(f, y, h, 2, f0)
    t2 = _midpoint_chain(f, y, h, 4, f0)
    return t2 + (t2 - t1) / 3.0


def oracle_simulate(sys: DIHSystem, x0, dt: float, t_end: float,
                    projection_tol: float = DEFAULT_PROJECTION_TOL,
                    max_projection_iters: int = 25) -> Trajectory:
    """Independent verification run on the same grid as :func:`simulate`.

    Steps with the extrapolated Gragg modified-midpoint map at half the user
    step (two substeps per grid interval), applies the same projection rule,
    and records only on the dt grid, so trajectories compare row by row.
    """
    config = IntegratorConfig(dt=dt, t_end=t_end,
                              projection_tol=projection_tol,
                              max_projection_iters=max_projection_iters)
    return _run(sys, x0, config.dt, config.steps, config.projection_tol,
                config.max_projection_iters, _gbs_step, substeps=2)


def audit_series(times, energies, rates) -> EnergyAudit:
    """Audit an energy series against its stored bracket rates.

    Finite-difference dH/dt uses central differences in the interior and
    one-sided differences at the ends of the sample grid.
    """
    t = np.asarray(times, dtype=float)
    h = np.asarray(energies, dtype=float)
    r = np.asarray(rates, dtype=float)
    if t.ndim != 1 or t.shape != h.shape or t.shape != r.shape:
        raise InputError("times, energies and rates must be equal-length 1-d")
    if t.size == 0:
        raise InputError("audit needs at least one sample")
    if t.size < 2:
        deviation = 0.0
        max_increase = 0.0
    else:
        fd = np.gradient(h, t, edge_order=2 if t.size >= 3 else 1)
        deviation = float(np.abs(fd - r).max())
        max_increase = float(np.diff(h).max())
    max_rate = float(r.max())
    return EnergyAudit(
        n_samples=int(t.size),
        energy_drift=float(h[-1] - h[0]),
        max_rate=max_rate,
        rates_nonpositive=max_rate <= RATE_TOL,
        max_energy_increase=max(max_increase, 0.0),
        energy_monotone=max_increase <= MONOTONE_TOL,
        max_rate_deviation=deviation,
    )


def energy_audit(sys: DIHSystem, trajectory: Trajectory) -> EnergyAudit:
    """Audit a trajectory produced for ``sys``; see :func:`audit_series`."""
    return audit_series(trajectory.times, trajectory.energies,
                        trajectory.energy_rates)

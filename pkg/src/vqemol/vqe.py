"""Classical outer loop: quasi-Newton minimization of circuit energies.

The solver binds a parametric circuit to a Hamiltonian and walks the
parameter vector downhill with BFGS updates and a backtracking line
search.  Every energy evaluation is individually wall-clocked; the
timing columns reported by the benchmark driver (mean seconds per
evaluation, per accepted iteration, and to convergence) are sums of
those per-evaluation clocks, so they stay meaningful even when
evaluations would run concurrently.
"""

import dataclasses
import time

import numpy as np

from .backends import Statevector, apply, expval_direct, expval_sampled

_ARMIJO_C1 = 1e-4
_MIN_STEP = 1e-12
_CURVATURE_TOL = 1e-12


@dataclasses.dataclass(frozen=True)
class VqeConfig:
    """Optimizer settings.

    ``energy_tolerance`` stops the loop once the energy drop between
    accepted iterations falls below it.  ``gradient_step`` is the
    central-difference displacement per component.
    """

    energy_tolerance: float = 1e-6
    max_iterations: int = 200
    gradient_step: float = 1e-6
    initial_parameters: tuple = None

    def __post_init__(self):
        if not self.energy_tolerance > 0:
            raise ValueError("energy_tolerance must be positive")
        if not self.gradient_step > 0:
            raise ValueError("gradient_step must be positive")
        if self.max_iterations < 0:
            raise ValueError("max_iterations must be non-negative")
        if self.initial_parameters is not None:
            object.__setattr__(self, "initial_parameters",
                               tuple(float(x) for x in self.initial_parameters))


@dataclasses.dataclass(frozen=True)
class TraceRecord:
    """One accepted optimizer iteration.

    ``gradient_norm`` is the norm of the gradient that produced the
    step, measured at the iteration's starting point.  Each iteration
    costs 2 * n_parameters gradient evaluations plus ``n_line_search``
    trial energies; ``n_evaluations`` and ``elapsed_s`` are cumulative
    within the minimize call, with elapsed_s summing the per-evaluation
    wall clocks.
    """

    iteration: int
    energy: float
    gradient_norm: float
    n_line_search: int
    n_evaluations: int
    elapsed_s: float


@dataclasses.dataclass(frozen=True)
class VqeResult:
    energy: float
    parameters: tuple
    n_energy_iterations: int
    n_evaluations: int
    tts_1vp: float
    tts_iter: float
    tts_conv: float
    elapsed_s: float
    converged: bool
    stop_reason: str
    trace: tuple


class VqeSolver:
    """Energy, gradient, and minimization for one encoded problem.

    The solver owns the evaluation counters, so ``energy_at`` and
    ``gradient_at`` calls made directly by the caller show up in the
    same accounting as the ones issued by ``minimize``.
    """

    def __init__(self, hamiltonian, circuit, backend="statevector",
                 shots=1024, seed=0, max_qubits=None):
        if circuit.n_qubits != hamiltonian.n_qubits:
            raise ValueError("circuit register does not match the Hamiltonian")
        if backend not in ("statevector", "sampled"):
            raise ValueError(f"unknown backend {backend!r}")
        self.hamiltonian = hamiltonian
        self.circuit = circuit
        self.backend = backend
        self.shots = shots
        self.seed = seed
        self.max_qubits = max_qubits
        self.n_evaluations = 0
        self.eval_seconds = 0.0

    @property
    def n_parameters(self):
        return self.circuit.n_parameters

    @property
    def tts_1vp(self):
        """Mean wall-clock seconds per energy evaluation so far."""
        if self.n_evaluations == 0:
            return 0.0
        return self.eval_seconds / self.n_evaluations

    def energy_at(self, theta):
        """Energy of the circuit state at the given parameter vector."""
        theta = np.asarray(theta, dtype=float)
        if theta.shape != (self.n_parameters,):
            raise ValueError(
                f"expected {self.n_parameters} parameters, got {theta.shape}")
        start = time.perf_counter()
        bound = self.circuit.bind(theta)
        if self.backend == "statevector":
            kwargs = {}
            if self.max_qubits is not None:
                kwargs["max_qubits"] = self.max_qubits
            state = apply(bound, Statevector(bound.n_qubits, **kwargs))
            value = expval_direct(self.hamiltonian, state)
        else:
            # A fresh derived seed per evaluation: reproducible across
            # runs, independent across evaluations.
            estimate = expval_sampled(self.hamiltonian, bound, self.shots,
                                      seed=self.seed + self.n_evaluations)
            value = estimate.mean
        self.eval_seconds += time.perf_counter() - start
        self.n_evaluations += 1
        return value

    def gradient_at(self, theta, step=1e-6):
        """Central-difference gradient, 2 energy evaluations per component."""
        theta = np.asarray(theta, dtype=float)
        grad = np.empty(self.n_parameters)
        for k in range(self.n_parameters):
            shift = np.zeros(self.n_parameters)
            shift[k] = step
            grad[k] = (self.energy_at(theta + shift)
                       - self.energy_at(theta - shift)) / (2.0 * step)
        return grad

    def minimize(self, config=None):
        if config is None:
            config = VqeConfig()
        m = self.n_parameters
        if config.initial_parameters is not None:
            theta = np.asarray(config.initial_parameters, dtype=float)
            if theta.shape != (m,):
                raise ValueError(f"expected {m} initial parameters")
        else:
            theta = np.zeros(m)

        wall_start = time.perf_counter()
        evals_before = self.n_evaluations
        seconds_before = self.eval_seconds

        energy = self.energy_at(theta)
        self._require_finite(energy, theta)
        seconds_head = self.eval_seconds - seconds_before
        if m == 0:
            return self._result(energy, theta, 0, evals_before,
                                seconds_before, wall_start, seconds_head,
                                True, "no parameters", [])

        # Every started iteration costs exactly 2m gradient evaluations
        # plus its line-search trials, so the total evaluation count is
        # 1 + sum over iterations of (2m + trials).
        hessian_inv = np.eye(m)
        prev_theta = None
        prev_grad = None
        trace = []
        n_iter = 0
        converged = False
        stop_reason = "max iterations"

        for iteration in range(1, config.max_iterations + 1):
            grad = self.gradient_at(theta, config.gradient_step)
            if prev_grad is not None:
                delta_s = theta - prev_theta
                delta_y = grad - prev_grad
                curvature = float(delta_y @ delta_s)
                if curvature > _CURVATURE_TOL:
                    rho = 1.0 / curvature
                    outer = np.outer(delta_s, delta_y)
                    eye = np.eye(m)
                    hessian_inv = ((eye - rho * outer) @ hessian_inv
                                   @ (eye - rho * outer.T)
                                   + rho * np.outer(delta_s, delta_s))

            direction = -hessian_inv @ grad
            slope = float(direction @ grad)
            if slope >= 0.0 and np.any(grad):
                # Stale curvature model; fall back to steepest descent.
                hessian_inv = np.eye(m)
                direction = -grad
                slope = float(direction @ grad)
            if slope == 0.0:
                converged = True
                stop_reason = "zero gradient"
                break

            alpha = 1.0
            n_trials = 0
            accepted = None
            while alpha >= _MIN_STEP:
                candidate = theta + alpha * direction
                trial = self.energy_at(candidate)
                n_trials += 1
                self._require_finite(trial, candidate)
                if trial <= energy + _ARMIJO_C1 * alpha * slope:
                    accepted = (candidate, trial)
                    break
                alpha *= 0.5
            if accepted is None:
                stop_reason = "line search failed"
                break

            prev_theta, prev_grad = theta, grad
            drop = energy - accepted[1]
            theta, energy = accepted
            n_iter = iteration
            trace.append(TraceRecord(
                iteration, float(energy), float(np.linalg.norm(grad)),
                n_trials, self.n_evaluations - evals_before,
                self.eval_seconds - seconds_before))
            if abs(drop) < config.energy_tolerance:
                converged = True
                stop_reason = "converged"
                break

        return self._result(energy, theta, n_iter, evals_before,
                            seconds_before, wall_start, seconds_head,
                            converged, stop_reason, trace)

    def _result(self, energy, theta, n_iter, evals_before, seconds_before,
                wall_start, seconds_head, converged, stop_reason, trace):
        n_evals = self.n_evaluations - evals_before
        eval_seconds = self.eval_seconds - seconds_before
        tts_1vp = eval_seconds / n_evals if n_evals else 0.0
        # Head = initial energy + initial gradient, charged before the
        # first accepted iteration; the rest is split evenly.
        tts_iter = ((eval_seconds - seconds_head) / n_iter) if n_iter else 0.0
        return VqeResult(
            energy=float(energy),
            parameters=tuple(float(x) for x in np.atleast_1d(theta)),
            n_energy_iterations=n_iter,
            n_evaluations=n_evals,
            tts_1vp=tts_1vp,
            tts_iter=tts_iter,
            tts_conv=eval_seconds,
            elapsed_s=time.perf_counter() - wall_start,
            converged=converged,
            stop_reason=stop_reason,
            trace=tuple(trace),
        )

    @staticmethod
    def _require_finite(value, theta):
        if not np.isfinite(value):
            raise RuntimeError(
                "energy evaluation returned a non-finite value at "
                f"parameters {np.asarray(theta).tolist()}")

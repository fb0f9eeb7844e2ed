"""ADAPT-VQE against the exact simulator.

Each iteration measures every pool gradient at the current state, appends
the largest-gradient operator (ties break to the lowest pool index), then
re-optimizes ALL parameters from the warm start with the new angle at its
init value.  Termination is a tri-state status:

    converged       |E - e_ref| < eps_energy (needs a reference energy)
    gradient_stall  max |g_i| < eps_grad before adding the next operator
    iteration_cap   max_iters exhausted

The trace CSV format written here has one row per completed iteration and a
trailing '# status=...' comment, and is byte-reproducible for a given seed.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Tuple

import numpy as np
from scipy.optimize import minimize
from sklearn.base import BaseEstimator

from . import validation
from .hamiltonians import PauliSumHamiltonian, ground_energy
from .paulis import PauliString
from .pools import Pool
from .simulator import (Ansatz, ansatz_energy_gradient, basis_state,
                        expectation, pool_gradients, prepare_state)


@dataclass(frozen=True)
class AdaptConfig:
    eps_grad: float = 1e-8
    eps_energy: float = 1e-8
    max_iters: Optional[int] = None   # None -> 4 * 2^n
    gtol: float = 1e-10
    maxfun: int = 10_000
    memory: int = 10                  # L-BFGS history depth
    new_param_init: float = 0.0

    def resolved_max_iters(self, n_qubits: int) -> int:
        return self.max_iters if self.max_iters is not None else 4 << n_qubits


@dataclass(frozen=True)
class TraceRecord:
    iteration: int       # 1-based; equals the parameter count
    op: PauliString
    max_grad: float
    energy: float
    error: Optional[float]
    n_evals: int


@dataclass
class AdaptTrace:
    records: List[TraceRecord] = field(default_factory=list)
    status: Optional[str] = None
    e_ref: Optional[float] = None

    @property
    def energies(self) -> np.ndarray:
        return np.array([r.energy for r in self.records])

    @property
    def final_energy(self) -> Optional[float]:
        return self.records[-1].energy if self.records else None


TRACE_HEADER = "iter,op,max_grad,energy,error,params,evals"


def format_trace_record(r: TraceRecord) -> str:
    err = repr(float(r.error)) if r.error is not None else ""
    return (f"{r.iteration},{r.op},{repr(float(r.max_grad))},"
            f"{repr(float(r.energy))},{err},{r.iteration},{r.n_evals}")


def trace_to_csv(trace: AdaptTrace) -> str:
    lines = [TRACE_HEADER]
    lines += [format_trace_record(r) for r in trace.records]
    lines.append(f"# status={trace.status}")
    return "\n".join(lines) + "\n"


def read_trace_csv(path) -> AdaptTrace:
    from .paulis import parse_pauli

    trace = AdaptTrace()
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines or lines[0] != TRACE_HEADER:
        raise ValueError(f"{path}: not a trace CSV (bad header)")
    for line in lines[1:]:
        if line.startswith("#"):
            tagged = line[1:].strip()
            if tagged.startswith("status="):
                trace.status = tagged[len("status="):]
            continue
        if not line.strip():
            continue
        parts = line.split(",")
        if len(parts) != 7:
            raise ValueError(f"{path}: malformed trace row {line!r}")
        trace.records.append(TraceRecord(
            iteration=int(parts[0]), op=parse_pauli(parts[1]),
            max_grad=float(parts[2]), energy=float(parts[3]),
            error=float(parts[4]) if parts[4] else None,
            n_evals=int(parts[6])))
    return trace


def selection_tiebreak(gradients: np.ndarray) -> int:
    """Index of the largest |gradient|; exact ties go to the lowest index."""
    return int(np.argmax(np.abs(gradients)))


def vqe_minimize(h: PauliSumHamiltonian, ansatz: Ansatz,
                 config: AdaptConfig = AdaptConfig()
                 ) -> Tuple[Ansatz, float, int]:
    """L-BFGS-B over all angles with analytic adjoint gradients.

    Tracks the best iterate seen, so the returned energy never exceeds the
    energy at the initial point (the optimizer evaluates it first).
    """
    if len(ansatz) == 0:
        return ansatz, expectation(h, basis_state(ansatz.n_qubits,
                                                  ansatz.reference)), 1
    best = {"e": np.inf, "theta": None}
    nfev = 0

    def fun(theta):
        nonlocal nfev
        nfev += 1
        e, g = ansatz_energy_gradient(ansatz.with_thetas(theta), h)
        if e < best["e"]:
            best["e"] = e
            best["theta"] = np.array(theta, dtype=np.float64)
        return e, g

    minimize(fun, ansatz.thetas, jac=True, method="L-BFGS-B",
             options={"gtol": config.gtol, "maxfun": config.maxfun,
                      "maxcor": config.memory, "ftol": 1e-13})
    out = ansatz.with_thetas(best["theta"])
    return out, float(best["e"]), nfev


def run_adapt(h: PauliSumHamiltonian, pool, reference: int,
              config: AdaptConfig = AdaptConfig(),
              e_ref: Optional[float] = None,
              on_iteration: Optional[Callable] = None
              ) -> Tuple[Ansatz, AdaptTrace]:
    """Full ADAPT loop.  `pool` is a Pool or a sequence of odd PauliStrings;
    `on_iteration(record, gradients)` fires after each completed iteration
    (e.g. to stream the trace to disk)."""
    if isinstance(pool, Pool):
        ops = pool.operators
        if pool.check_level not in ("inseparable", "algebra"):
            warnings.warn("pool was not verified at inseparable level or above")
    else:
        ops = validation.as_operator_list(pool, h.n_qubits)
        warnings.warn("running with an unverified operator list")
    n = h.n_qubits
    reference = validation.as_occupation(reference, n)

    ansatz = Ansatz(n, reference)
    psi = basis_state(n, reference)
    trace = AdaptTrace(e_ref=e_ref)
    max_iters = config.resolved_max_iters(n)

    for it in range(1, max_iters + 1):
        grads = pool_gradients(h, psi, ops)
        gmax = float(np.max(np.abs(grads)))
        if gmax < config.eps_grad:
            trace.status = "gradient_stall"
            break
        pick = selection_tiebreak(grads)
        ansatz = ansatz.extended(ops[pick], config.new_param_init)
        ansatz, energy, nfev = vqe_minimize(h, ansatz, config)
        psi = prepare_state(ansatz)
        error = abs(energy - e_ref) if e_ref is not None else None
        record = TraceRecord(iteration=it, op=ops[pick], max_grad=gmax,
                             energy=energy, error=error, n_evals=nfev)
        trace.records.append(record)
        if on_iteration is not None:
            on_iteration(record, grads)
        if e_ref is not None and error < config.eps_energy:
            trace.status = "converged"
            break
    else:
        trace.status = "iteration_cap"
    return ansatz, trace


class AdaptVQE(BaseEstimator):
    """Estimator-style front end: configure once, `fit` a Hamiltonian, read
    the fitted energy/ansatz/trace, `transform` states through the circuit.

    Parameters mirror AdaptConfig; `e_ref` may be a float, None, or "exact"
    to diagonalize the Hamiltonian for the convergence target.
    """

    def __init__(self, pool=None, reference=0, e_ref="exact",
                 eps_grad=1e-8, eps_energy=1e-8, max_iters=None,
                 gtol=1e-10, maxfun=10_000, memory=10, new_param_init=0.0):
        self.pool = pool
        self.reference = reference
        self.e_ref = e_ref
        self.eps_grad = eps_grad
        self.eps_energy = eps_energy
        self.max_iters = max_iters
        self.gtol = gtol
        self.maxfun = maxfun
        self.memory = memory
        self.new_param_init = new_param_init

    def _config(self) -> AdaptConfig:
        return AdaptConfig(eps_grad=self.eps_grad, eps_energy=self.eps_energy,
                           max_iters=self.max_iters, gtol=self.gtol,
                           maxfun=self.maxfun, memory=self.memory,
                           new_param_init=self.new_param_init)

    def fit(self, hamiltonian: PauliSumHamiltonian, y=None):
        if self.pool is None:
            raise ValueError("set pool= before calling fit")
        e_ref = self.e_ref
        if isinstance(e_ref, str):
            if e_ref != "exact":
                raise ValueError(f"e_ref must be a float, None or 'exact', "
                                 f"got {e_ref!r}")
            e_ref = ground_energy(hamiltonian)
        ansatz, trace = run_adapt(hamiltonian, self.pool,
                                  self.reference, self._config(), e_ref=e_ref)
        self.ansatz_ = ansatz
        self.trace_ = trace
        self.status_ = trace.status
        self.energy_ = trace.final_energy
        self.e_ref_ = e_ref
        self.n_iterations_ = len(trace.records)
        return self

    def transform(self, states) -> np.ndarray:
        """Run state vectors through the fitted circuit (innermost rotation
        first), preserving shape (dim,) or (m, dim)."""
        if not hasattr(self, "ansatz_"):
            raise RuntimeError("call fit before transform")
        from .simulator import apply_rotation

        arr = validation.as_state_array(states, self.ansatz_.n_qubits)
        out = arr.copy()
        for p, t in zip(self.ansatz_.generators, self.ansatz_.thetas):
            out = apply_rotation(p, float(t), out)
        return out

    def predict(self, hamiltonian: PauliSumHamiltonian) -> float:
        """Energy of the fitted state under another (same-width) operator."""
        if not hasattr(self, "ansatz_"):
            raise RuntimeError("call fit before predict")
        return expectation(hamiltonian, prepare_state(self.ansatz_))

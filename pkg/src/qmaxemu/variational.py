"""Measurement statistics, expectation evaluation, and the classical outer loop.

Probabilities are computed from the stored amplitudes and renormalized, so
the state's power-of-two scale exponent cancels.  The expected cut weight
divides the cost table by two to undo the hardware's 2*cut convention.

The optimizer is a restarted Nelder-Mead simplex (derivative-free: the
fixed-point engine's objective is piecewise constant at ulp scale).
Parameters are folded into [0, domain) before evaluation; with the default
domain of pi this is exact for integer weights, where the objective is
pi-periodic in every coordinate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.optimize import minimize

from .diagonals import CostDiagonal, build_cost_diagonal
from .graph import WeightedGraph, assignment_from_index
from .pipeline import StateVector, QaoaParams
from .reference import decomposed_run_qaoa_f64

EngineFn = Callable[[WeightedGraph, QaoaParams], StateVector]


class ZeroStateError(ValueError):
    """All amplitudes are zero; probabilities are undefined."""


@dataclass
class ExpectationResult:
    f_p: float
    probs: np.ndarray
    best_bitstring: str
    best_cut: float


@dataclass(frozen=True)
class OptimizerConfig:
    method: str = "nelder-mead"
    restarts: int = 8
    max_evals: int = 2000  # total budget, split across restarts
    domain: float = math.pi
    xatol: float = 1e-4
    fatol: float = 1e-7


@dataclass
class OptimizationTrace:
    iterations: list[tuple[QaoaParams, float]] = field(default_factory=list)
    best_params: QaoaParams | None = None
    best_f_p: float = -math.inf
    evaluations: int = 0
    converged: bool = False


def probabilities(state: StateVector) -> np.ndarray:
    """p[l] = |amp_l|^2 / sum_k |amp_k|^2, in double precision at readout."""
    weights = np.abs(state.amps) ** 2
    total = float(weights.sum())
    if total == 0.0:
        raise ZeroStateError("state vector is identically zero")
    return weights / total


def expectation(state: StateVector, d: CostDiagonal) -> ExpectationResult:
    """Expected cut weight sum_l p[l] * entries[l]/2 plus the modal bitstring."""
    if len(state.amps) != len(d.entries):
        raise ValueError("state and cost diagonal lengths differ")
    probs = probabilities(state)
    cuts = d.entries * 0.5
    f_p = float(np.sum(probs * cuts))
    best = int(np.argmax(probs))  # ties resolve to the lowest index
    return ExpectationResult(
        f_p=f_p,
        probs=probs,
        best_bitstring=assignment_from_index(best, state.n),
        best_cut=float(cuts[best]),
    )


def make_objective(g: WeightedGraph, p: int, engine: EngineFn,
                   trace: OptimizationTrace, domain: float):
    """Negated-f_p objective over a flat [gamma..., beta...] vector."""
    diag = build_cost_diagonal(g, g.num_vertices)

    def objective(x: np.ndarray) -> float:
        folded = np.mod(x, domain)
        params = QaoaParams(p, tuple(folded[:p]), tuple(folded[p:]))
        f_p = expectation(engine(g, params), diag).f_p
        trace.iterations.append((params, f_p))
        trace.evaluations += 1
        if f_p > trace.best_f_p:
            trace.best_f_p = f_p
            trace.best_params = params
        return -f_p

    return objective


def optimize(g: WeightedGraph, p: int, engine: EngineFn,
             cfg: OptimizerConfig = OptimizerConfig(), seed: int = 0) -> OptimizationTrace:
    """Maximize f_p over the 2p parameters with restarted Nelder-Mead.

    Restart points are drawn once from a seeded generator and the restarts
    run in index order, so the trace is deterministic.  If no restart
    converges within its share of the budget, the best evaluation seen so
    far is still reported, with converged=False.
    """
    if p < 1:
        raise ValueError("layer count must be >= 1")
    if cfg.restarts < 1:
        raise ValueError("need at least one restart")
    trace = OptimizationTrace()
    objective = make_objective(g, p, engine, trace, cfg.domain)
    rng = np.random.default_rng(seed)
    starts = rng.uniform(0.0, cfg.domain, size=(cfg.restarts, 2 * p))
    per_restart = max(2 * p + 2, cfg.max_evals // max(1, cfg.restarts))
    for x0 in starts:
        res = minimize(objective, x0, method="Nelder-Mead",
                       options={"maxfev": per_restart, "xatol": cfg.xatol,
                                "fatol": cfg.fatol, "disp": False})
        trace.converged = trace.converged or bool(res.success)
    return trace


def grid_search_p1(g: WeightedGraph, resolution: int,
                   engine: EngineFn | None = None) -> tuple[float, float, float]:
    """Exhaustive p=1 maximum of f_p over a resolution x resolution lattice
    on [0, pi)^2.  Ties resolve to the lexicographically first lattice point."""
    if resolution < 8:
        raise ValueError("resolution must be >= 8")
    if engine is None:
        engine = lambda graph, params: decomposed_run_qaoa_f64(graph, params, fast=True)
    diag = build_cost_diagonal(g, g.num_vertices)
    step = math.pi / resolution
    best = (-math.inf, 0.0, 0.0)
    for i in range(resolution):
        for j in range(resolution):
            gamma, beta = i * step, j * step
            state = engine(g, QaoaParams(1, (gamma,), (beta,)))
            f_p = expectation(state, diag).f_p
            if f_p > best[0]:
                best = (f_p, gamma, beta)
    return best[1], best[2], best[0]

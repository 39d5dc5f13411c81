"""Double-precision reference engines.

Two independent routes to the same ansatz state:

  * dense: per-gate construction (diagonal two-qubit phase gates for the
    cost step, a Kronecker power of the 2x2 X-rotation for the mixer)
    applied by explicit N x N matrix-vector multiplication.  Deliberately
    shares no code with the decomposed dataflow.
  * decomposed: diagonal phase multiply followed by a +/-1 Walsh-Hadamard
    transform and a 1/2**n scale per layer -- the pipeline's dataflow in
    float64, with either the streamed O(N^2)-addition form or an in-place
    butterfly.

The dense cost step equals the diagonal-table construction only up to one
global phase per layer (exp(+i*gamma*sum(w))), so state comparisons go
through align_global_phase.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .diagonals import build_cost_diagonal, build_mixer_exponents, cost_angles, mixer_angles
from .graph import WeightedGraph
from .pipeline import StateVector, QaoaParams, _parity

DENSE_MAX_QUBITS = 12


@dataclass
class OpCounts:
    """Scalar complex multiply/add tallies accumulated while running."""

    mults: int = 0
    adds: int = 0


def _matvec(u: np.ndarray, v: np.ndarray, counts: OpCounts | None) -> np.ndarray:
    # Row-wise products summed by numpy's fixed pairwise reduction: no BLAS,
    # so results do not depend on the host thread count.
    if counts is not None:
        n = len(v)
        counts.mults += n * n
        counts.adds += n * (n - 1)
    return (u * v[np.newaxis, :]).sum(axis=1)


def dense_cost_unitary(g: WeightedGraph, gamma: float, n: int) -> np.ndarray:
    """Product over edges of two-qubit diagonal phase gates with angle -2*w*gamma.

    Each gate contributes exp(-i*theta/2) where the endpoint bits agree and
    exp(+i*theta/2) where they differ.
    """
    if n != g.num_vertices:
        raise ValueError("dense cost unitary expects one qubit per vertex")
    idx = np.arange(1 << n, dtype=np.int64)
    diag = np.ones(1 << n, dtype=np.complex128)
    for i, j, w in g.edges:
        theta = -2.0 * w * gamma
        differ = ((idx >> i) ^ (idx >> j)) & 1
        diag = diag * np.where(differ, np.exp(0.5j * theta), np.exp(-0.5j * theta))
    return np.diag(diag)


def dense_mixer_unitary(beta: float, n: int) -> np.ndarray:
    """n-fold Kronecker power of cos(beta)*I - i*sin(beta)*X."""
    if n < 1:
        raise ValueError("need at least one qubit")
    rx = np.array([[np.cos(beta), -1j * np.sin(beta)],
                   [-1j * np.sin(beta), np.cos(beta)]], dtype=np.complex128)
    u = rx
    for _ in range(n - 1):
        u = np.kron(u, rx)
    return u


def dense_run_qaoa(g: WeightedGraph, params: QaoaParams,
                   counts: OpCounts | None = None) -> StateVector:
    """Gate-product oracle: explicit matrix-vector products on the uniform state."""
    n = g.num_vertices
    if n > DENSE_MAX_QUBITS:
        raise ValueError(f"dense engine limited to {DENSE_MAX_QUBITS} qubits, got {n}")
    n_states = 1 << n
    v = np.full(n_states, 1.0 / np.sqrt(n_states), dtype=np.complex128)
    for k in range(params.p):
        v = _matvec(dense_cost_unitary(g, params.gamma[k], n), v, counts)
        v = _matvec(dense_mixer_unitary(params.beta[k], n), v, counts)
    return StateVector(amps=v, scale_exp=Fraction(0), n=n)


def fwht_inplace(v: np.ndarray) -> np.ndarray:
    """In-place +/-1 Walsh-Hadamard butterfly (natural order), O(N log N)."""
    h = 1
    n_states = len(v)
    while h < n_states:
        for start in range(0, n_states, 2 * h):
            a = v[start:start + h].copy()
            b = v[start + h:start + 2 * h].copy()
            v[start:start + h] = a + b
            v[start + h:start + 2 * h] = a - b
        h *= 2
    return v


def walsh_streamed(v: np.ndarray, counts: OpCounts | None = None) -> np.ndarray:
    """+/-1 Walsh-Hadamard transform accumulated in ascending stream order.

    Mirrors the pipeline's N_ADD dataflow: element c lands on all N slots
    with column-c signs before element c+1 is applied.
    """
    n_states = len(v)
    n = n_states.bit_length() - 1
    rows = np.arange(n_states, dtype=np.int64)
    out = np.zeros(n_states, dtype=np.complex128)
    for c in range(n_states):
        signs = 1 - 2 * _parity(rows & c)
        out = out + signs * v[c]
    if counts is not None:
        counts.adds += n_states * n_states
    return out


def decomposed_run_qaoa_f64(g: WeightedGraph, params: QaoaParams,
                            fast: bool = False,
                            counts: OpCounts | None = None) -> StateVector:
    """Pipeline dataflow in float64: phase multiply, +/-1 transform, 1/2**n scale.

    fast=True swaps the streamed transform for the butterfly; the two forms
    agree to rounding and the swap only changes the addition count.
    """
    n = g.num_vertices
    n_states = 1 << n
    diag = build_cost_diagonal(g, n)
    mixer = build_mixer_exponents(n)
    v = np.full(n_states, 1.0 / np.sqrt(n_states), dtype=np.complex128)
    scale = 1.0 / n_states
    for k in range(params.p):
        for angles in (cost_angles(diag, params.gamma[k]),
                       mixer_angles(mixer, params.beta[k])):
            v = np.exp(1j * angles) * v
            if counts is not None:
                counts.mults += n_states
            if fast:
                v = fwht_inplace(v)
                if counts is not None:
                    counts.adds += n_states * n
            else:
                v = walsh_streamed(v, counts)
        v = v * scale  # exact: a power-of-two factor
    return StateVector(amps=v, scale_exp=Fraction(0), n=n)


def align_global_phase(state: np.ndarray, reference: np.ndarray) -> np.ndarray:
    """Rotate `state` so its phase matches `reference` at the reference's
    largest-magnitude amplitude (ties broken towards the lowest index)."""
    idx = int(np.argmax(np.abs(reference)))
    if abs(state[idx]) == 0.0 or abs(reference[idx]) == 0.0:
        return state.copy()
    rot = reference[idx] * np.conj(state[idx])
    return state * (rot / abs(rot))

"""Cycle-accurate fixed-point model of the MaxCut accelerator pipeline.

Each half-layer is one elemental operation: stream the N diagonal elements
through CALCULATE_RAD -> NORMALIZE_RAD -> CORDIC(16) -> 1_MULT, one element
per clock in steady state, while N_ADD applies the streamed complex product
to all N accumulator slots in parallel with +/-1 column signs.  An operation
therefore takes N + PIPELINE_LATENCY clocks and costs N complex multiplies
plus N*N complex additions.

Amplitudes are stored as exact float64 images of the fixed-point words
(word widths <= 32 bits make the image lossless); the raw integer arrays are
reconstructed at operation entry.  The per-element stages are evaluated
data-parallel, which is value-identical to streaming because elements only
interact in N_ADD, where accumulation runs in ascending stream order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from . import fxp
from .diagonals import build_cost_diagonal, build_mixer_exponents, cost_angles, mixer_angles
from .fxp import FxContext, FxFormat
from .graph import WeightedGraph

# Stage depths: CALCULATE_RAD 1 + NORMALIZE_RAD 1 + CORDIC 16 + 1_MULT 1.
PIPELINE_LATENCY = 1 + 1 + fxp.CORDIC_STAGES + 1
# Constant overhead charged once per run (kept as a named knob for future
# cross-checks against an HDL model; the datapath itself needs none).
SETUP_CYCLES = 0
CLOCK_HZ = 100_000_000  # reported times are cycles / CLOCK_HZ, labeled derived

MAX_QUBITS = 24

_STAGE_NAMES = ("calculate_rad", "normalize_rad", "cordic", "mult", "n_add")

TraceWriter = Callable[[dict], None]


@dataclass
class StateVector:
    """N = 2**n amplitudes plus a power-of-two scale exponent.

    Physical amplitude l is amps[l] * 2**scale_exp; scale_exp is a Fraction
    because the uniform initial state at odd n leaves a residual half
    exponent (sqrt(2)) that is only applied at readout.
    """

    amps: np.ndarray  # complex128
    scale_exp: Fraction
    n: int

    def physical(self) -> np.ndarray:
        return self.amps * 2.0 ** float(self.scale_exp)

    def physical_norm(self) -> float:
        return float(np.sum(np.abs(self.amps) ** 2) * 4.0 ** float(self.scale_exp))


@dataclass(frozen=True)
class QaoaParams:
    """Layer count p and the per-layer cost/mixer parameters."""

    p: int
    gamma: tuple[float, ...]
    beta: tuple[float, ...]

    def __post_init__(self):
        if self.p < 1:
            raise ValueError("layer count must be >= 1")
        if len(self.gamma) != self.p or len(self.beta) != self.p:
            raise ValueError(f"gamma/beta must each have length p={self.p}")

    @staticmethod
    def from_lists(gamma, beta) -> "QaoaParams":
        return QaoaParams(len(gamma), tuple(float(g) for g in gamma),
                          tuple(float(b) for b in beta))


@dataclass(frozen=True)
class PipelineConfig:
    fmt: FxFormat = FxFormat()
    per_layer_shift: int | None = None  # None -> n bits (the exact 1/2**n factor)
    trace: bool = False

    def __post_init__(self):
        if self.per_layer_shift is not None and self.per_layer_shift < 0:
            raise ValueError("per_layer_shift must be >= 0")


@dataclass
class CycleReport:
    """Clock and operation accounting for one accelerator run."""

    cycles_total: int = 0
    cycles_per_op: list[int] = field(default_factory=list)
    mults: int = 0
    adds: int = 0
    overflow: bool = False

    def derived_seconds(self) -> float:
        return self.cycles_total / CLOCK_HZ


def hadamard_sign(row: int, col: int) -> int:
    """+/-1 entry of the natural-order Walsh-Hadamard sign matrix."""
    return 1 - 2 * ((row & col).bit_count() & 1)


def _parity(v: np.ndarray) -> np.ndarray:
    """Parity of the bit count, for values below 2**32."""
    v = v ^ (v >> 16)
    v ^= v >> 8
    v ^= v >> 4
    v ^= v >> 2
    v ^= v >> 1
    return v & 1


def hadamard_sign_column(col: int, n: int) -> np.ndarray:
    """Signs hadamard_sign(i, col) for all rows i, as an int64 vector."""
    rows = np.arange(1 << n, dtype=np.int64)
    return 1 - 2 * _parity(rows & col)


def init_uniform_state(n: int, fmt: FxFormat = FxFormat()) -> StateVector:
    """Equal-superposition start state with an exact power-of-two stored value.

    Stored amplitude is 2**-ceil(n/2); the residual scale (including the
    sqrt(2) for odd n) lives in scale_exp so the physical norm is exactly 1.
    """
    if not (1 <= n <= MAX_QUBITS):
        raise ValueError(f"qubit count {n} outside 1..{MAX_QUBITS}")
    half_up = (n + 1) // 2
    if fmt.frac_bits < half_up:
        raise ValueError(f"format {fmt.name} cannot store 2**-{half_up}")
    amps = np.full(1 << n, 2.0 ** -half_up, dtype=np.complex128)
    return StateVector(amps=amps, scale_exp=Fraction(half_up) - Fraction(n, 2), n=n)


def _raw_parts(state: StateVector, fmt: FxFormat, ctx: FxContext):
    re = fxp.vec_from_real(state.amps.real, fmt, ctx)
    im = fxp.vec_from_real(state.amps.imag, fmt, ctx)
    return re, im


def _amps_from_raw(re_raw: np.ndarray, im_raw: np.ndarray, fmt: FxFormat) -> np.ndarray:
    return fxp.vec_to_float(re_raw, fmt) + 1j * fxp.vec_to_float(im_raw, fmt)


def _emit_op_trace(write: TraceWriter, n_states: int, op_index: int,
                   layer: int, order: str, neg_cos: np.ndarray,
                   neg_sin: np.ndarray, overflow: bool):
    """One record per clock: stage occupancy by stream element index, the
    sign-adjustment bits travelling beside the element in 1_MULT, and the
    sticky overflow state of the operation."""
    total = n_states + PIPELINE_LATENCY
    for clock in range(total):
        def occupant(depth):
            c = clock - depth
            return c if 0 <= c < n_states else None
        # CORDIC holds the elements at stage depths 2 .. 1 + CORDIC_STAGES.
        cordic_occ = [c for c in range(max(0, clock - 1 - fxp.CORDIC_STAGES),
                                       min(n_states, clock - 1))]
        mult = occupant(2 + fxp.CORDIC_STAGES)
        write({
            "op": op_index,
            "layer": layer,
            "order": order,
            "clock": clock,
            "calculate_rad": occupant(0),
            "normalize_rad": occupant(1),
            "cordic": cordic_occ,
            "mult": mult,
            "n_add": occupant(PIPELINE_LATENCY),
            "neg_cos": bool(neg_cos[mult]) if mult is not None else None,
            "neg_sin": bool(neg_sin[mult]) if mult is not None else None,
            "overflow": overflow,
        })


def run_elemental_ansatz(state: StateVector, angles: np.ndarray, cfg: PipelineConfig,
                         ctx: FxContext | None = None,
                         trace_writer: TraceWriter | None = None,
                         op_index: int = 0, layer: int = 0,
                         order: str = "cost") -> tuple[StateVector, int]:
    """One streamed phase-and-transform pass: out = H1 . (diag(e^{i angles}) . in).

    Returns the new state and the clock count N + PIPELINE_LATENCY.  The
    result register starts zeroed and replaces the state at drain; saturation
    anywhere sets the sticky flag on ctx but the run continues.
    """
    n = state.n
    n_states = 1 << n
    angles = np.asarray(angles, dtype=np.float64)
    if angles.shape != (n_states,):
        raise ValueError(f"expected {n_states} angles, got {angles.shape}")
    if ctx is None:
        ctx = FxContext()
    fmt = cfg.fmt

    # Per-element stages (independent across the stream, so batch-evaluated):
    # CALCULATE_RAD quantizes the angle, NORMALIZE_RAD folds it, CORDIC turns
    # it into a unit phasor, 1_MULT forms the streamed complex product.
    rad = fxp.vec_from_real(angles, fmt, ctx)
    rad_q1, neg_cos, neg_sin = fxp.vec_normalize_rad(fxp.vec_reduce_mod_2pi(rad, fmt), fmt)
    cos_q1, sin_q1 = fxp.vec_cordic_sincos(rad_q1, fmt)
    cos_raw, sin_raw = fxp.vec_apply_flags(cos_q1, sin_q1, neg_cos, neg_sin, fmt, ctx)
    in_re, in_im = _raw_parts(state, fmt, ctx)
    mult_re = fxp.vec_add(fxp.vec_mul(in_re, cos_raw, fmt, ctx),
                          -fxp.vec_mul(in_im, sin_raw, fmt, ctx), fmt, ctx)
    mult_im = fxp.vec_add(fxp.vec_mul(in_re, sin_raw, fmt, ctx),
                          fxp.vec_mul(in_im, cos_raw, fmt, ctx), fmt, ctx)

    # N_ADD: accumulate in ascending stream order so saturation, if any,
    # happens at a reproducible point.
    res_re = np.zeros(n_states, dtype=np.int64)
    res_im = np.zeros(n_states, dtype=np.int64)
    for c in range(n_states):
        signs = hadamard_sign_column(c, n)
        res_re = fxp.vec_add(res_re, signs * mult_re[c], fmt, ctx)
        res_im = fxp.vec_add(res_im, signs * mult_im[c], fmt, ctx)

    cycles = n_states + PIPELINE_LATENCY
    if cfg.trace and trace_writer is not None:
        _emit_op_trace(trace_writer, n_states, op_index, layer, order,
                       neg_cos, neg_sin, ctx.overflow)
    out = StateVector(amps=_amps_from_raw(res_re, res_im, fmt),
                      scale_exp=state.scale_exp, n=n)
    return out, cycles


def run_layer(state: StateVector, d_cost_angles: np.ndarray, d_mixer_angles: np.ndarray,
              cfg: PipelineConfig, ctx: FxContext | None = None,
              trace_writer: TraceWriter | None = None,
              layer: int = 0) -> tuple[StateVector, int]:
    """Cost pass, mixer pass, then the end-of-layer arithmetic right shift.

    Shifting k bits while the two passes grow the state by exactly 2**n in
    norm changes scale_exp by k - n, so the default k = n keeps scale_exp
    fixed and realizes the layer's 1/2**n factor exactly.
    """
    if ctx is None:
        ctx = FxContext()
    state, c1 = run_elemental_ansatz(state, d_cost_angles, cfg, ctx, trace_writer,
                                     op_index=2 * layer, layer=layer, order="cost")
    state, c2 = run_elemental_ansatz(state, d_mixer_angles, cfg, ctx, trace_writer,
                                     op_index=2 * layer + 1, layer=layer, order="mixer")
    shift = cfg.per_layer_shift if cfg.per_layer_shift is not None else state.n
    if shift:
        re = fxp.vec_from_real(state.amps.real, cfg.fmt, ctx) >> shift
        im = fxp.vec_from_real(state.amps.imag, cfg.fmt, ctx) >> shift
        state = StateVector(amps=_amps_from_raw(re, im, cfg.fmt),
                            scale_exp=state.scale_exp, n=state.n)
    state.scale_exp = state.scale_exp + shift - state.n
    return state, c1 + c2


def run_qaoa(g: WeightedGraph, params: QaoaParams, cfg: PipelineConfig = PipelineConfig(),
             trace_writer: TraceWriter | None = None) -> tuple[StateVector, CycleReport]:
    """Full accelerator run: uniform init, then p layers of cost+mixer passes."""
    n = g.num_vertices
    if not (1 <= n <= MAX_QUBITS):
        raise ValueError(f"qubit count {n} outside 1..{MAX_QUBITS}")
    n_states = 1 << n
    ctx = FxContext()
    state = init_uniform_state(n, cfg.fmt)
    diag = build_cost_diagonal(g, n)
    mixer = build_mixer_exponents(n)
    report = CycleReport()
    for k in range(params.p):
        state, cycles = run_layer(state, cost_angles(diag, params.gamma[k]),
                                  mixer_angles(mixer, params.beta[k]),
                                  cfg, ctx, trace_writer, layer=k)
        per_op = n_states + PIPELINE_LATENCY
        report.cycles_per_op.extend([per_op, per_op])
        assert cycles == 2 * per_op
        report.mults += 2 * n_states
        report.adds += 2 * n_states * n_states
    report.cycles_total = sum(report.cycles_per_op) + SETUP_CYCLES
    report.overflow = ctx.overflow
    return state, report

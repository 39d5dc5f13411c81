"""Q-format signed fixed-point arithmetic and a 16-stage CORDIC sine/cosine.

Scalars are `Fx` values carrying a raw two's-complement integer plus a
format.  The same arithmetic is mirrored by `vec_*` kernels on int64 numpy
arrays so whole state vectors go through the identical bit-level datapath
without per-element Python overhead; a property test pins the two paths to
bit equality.  Word widths are capped at 32 bits so every intermediate
product fits in int64.

Policy (shared by both paths):
  * conversion and multiplication round to nearest, ties to even;
  * addition/subtraction on raw values is exact unless it saturates;
  * overflow saturates and raises a sticky flag on the `FxContext`
    threaded through the call (never wraps, never hidden global state).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

CORDIC_STAGES = 16


@dataclass(frozen=True)
class FxFormat:
    """qI.F format: word_bits total (I = word_bits - frac_bits, sign included)."""

    word_bits: int = 32
    frac_bits: int = 25

    def __post_init__(self):
        if self.word_bits > 32:
            raise ValueError("word widths above 32 bits are not supported")
        if not (2 <= self.frac_bits <= self.word_bits - 2):
            raise ValueError(
                f"need 2 <= frac_bits <= word_bits - 2, got q{self.word_bits}/{self.frac_bits}"
            )

    @property
    def max_raw(self) -> int:
        return (1 << (self.word_bits - 1)) - 1

    @property
    def min_raw(self) -> int:
        return -(1 << (self.word_bits - 1))

    @property
    def ulp(self) -> float:
        return 2.0 ** -self.frac_bits

    @property
    def name(self) -> str:
        return f"q{self.word_bits - self.frac_bits}.{self.frac_bits}"


@dataclass
class FxContext:
    """Sticky overflow carrier: once set it stays set for the whole run."""

    overflow: bool = False


@dataclass(frozen=True)
class Fx:
    """Signed fixed-point scalar: value = raw * 2**-frac_bits."""

    raw: int
    fmt: FxFormat

    def to_float(self) -> float:
        return self.raw * self.fmt.ulp

    def __repr__(self):
        return f"Fx({self.to_float():.9g} [{self.fmt.name}])"


@dataclass(frozen=True)
class CFx:
    """Complex fixed-point pair; both parts share one format."""

    re: Fx
    im: Fx

    def __post_init__(self):
        if self.re.fmt != self.im.fmt:
            raise ValueError("real and imaginary parts must share a format")

    def to_complex(self) -> complex:
        return complex(self.re.to_float(), self.im.to_float())


@dataclass(frozen=True)
class QuadrantFlags:
    """Sign adjustments recorded by first-quadrant angle normalization."""

    neg_cos: bool
    neg_sin: bool


def _check_fmt(a: Fx, b: Fx):
    if a.fmt != b.fmt:
        raise ValueError(f"format mismatch: {a.fmt.name} vs {b.fmt.name}")


def _saturate(raw: int, fmt: FxFormat, ctx: FxContext | None) -> int:
    if raw > fmt.max_raw:
        if ctx is not None:
            ctx.overflow = True
        return fmt.max_raw
    if raw < fmt.min_raw:
        if ctx is not None:
            ctx.overflow = True
        return fmt.min_raw
    return raw


def _rne_shift(value, shift: int):
    """Shift right with round-to-nearest-even; works on ints and int arrays."""
    q, r = divmod(value, 1 << shift)
    half = 1 << (shift - 1)
    return q + ((r > half) | ((r == half) & ((q & 1) == 1)))


def fx_from_real(x: float, fmt: FxFormat, ctx: FxContext | None = None) -> Fx:
    """Convert a real to fixed point, round-to-nearest-even, saturating."""
    if not math.isfinite(x):
        raise ValueError(f"cannot convert non-finite value {x!r}")
    # x * 2**f is an exact exponent shift in binary floating point.
    return Fx(_saturate(round(x * (1 << fmt.frac_bits)), fmt, ctx), fmt)


def fx_add(a: Fx, b: Fx, ctx: FxContext | None = None) -> Fx:
    _check_fmt(a, b)
    return Fx(_saturate(a.raw + b.raw, a.fmt, ctx), a.fmt)


def fx_sub(a: Fx, b: Fx, ctx: FxContext | None = None) -> Fx:
    _check_fmt(a, b)
    return Fx(_saturate(a.raw - b.raw, a.fmt, ctx), a.fmt)


def fx_neg(a: Fx, ctx: FxContext | None = None) -> Fx:
    return Fx(_saturate(-a.raw, a.fmt, ctx), a.fmt)


def fx_mul(a: Fx, b: Fx, ctx: FxContext | None = None) -> Fx:
    """Full-width product, right-shifted by frac_bits with RNE, saturating."""
    _check_fmt(a, b)
    raw = _rne_shift(a.raw * b.raw, a.fmt.frac_bits)
    return Fx(_saturate(int(raw), a.fmt, ctx), a.fmt)


def cfx_mul_phase(a: CFx, cos: Fx, sin: Fx, ctx: FxContext | None = None) -> CFx:
    """Multiply a complex amplitude by (cos + i sin), parts computed separately."""
    re = fx_sub(fx_mul(a.re, cos, ctx), fx_mul(a.im, sin, ctx), ctx)
    im = fx_add(fx_mul(a.re, sin, ctx), fx_mul(a.im, cos, ctx), ctx)
    return CFx(re, im)


# --------------------------------------------------------------------------
# Trigonometric constants per format
# --------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _trig_constants(fmt: FxFormat):
    """Raw angle constants, CORDIC arctangent table, and gain for a format."""
    if fmt.max_raw * fmt.ulp < 2.0 * math.pi:
        raise ValueError(f"format {fmt.name} cannot represent 2*pi")
    scale = 1 << fmt.frac_bits
    two_pi = round(2.0 * math.pi * scale)
    pi = round(math.pi * scale)
    half_pi = round(0.5 * math.pi * scale)
    three_half_pi = round(1.5 * math.pi * scale)
    atan = tuple(round(math.atan(2.0 ** -i) * scale) for i in range(CORDIC_STAGES))
    gain = 1.0
    for i in range(CORDIC_STAGES):
        gain /= math.sqrt(1.0 + 2.0 ** (-2 * i))
    k = round(gain * scale)
    return two_pi, pi, half_pi, three_half_pi, atan, k


def fx_two_pi(fmt: FxFormat) -> Fx:
    return Fx(_trig_constants(fmt)[0], fmt)


def fx_pi(fmt: FxFormat) -> Fx:
    return Fx(_trig_constants(fmt)[1], fmt)


def fx_half_pi(fmt: FxFormat) -> Fx:
    return Fx(_trig_constants(fmt)[2], fmt)


# --------------------------------------------------------------------------
# Scalar angle pipeline: reduce -> normalize -> CORDIC -> sign restore
# --------------------------------------------------------------------------

def reduce_mod_2pi(rad: Fx) -> Fx:
    """Reduce any angle into [0, 2*pi) against the fixed-point constant."""
    two_pi = _trig_constants(rad.fmt)[0]
    return Fx(rad.raw % two_pi, rad.fmt)


def normalize_rad(rad: Fx) -> tuple[Fx, QuadrantFlags]:
    """Fold an angle in [0, 2*pi) into the first quadrant.

    Branches: [0,pi/2) keeps the angle; [pi/2,pi) maps to pi-rad with
    neg_cos; [pi,3pi/2) maps to rad-pi with both flags; [3pi/2,2pi) maps to
    2pi-rad with neg_sin.
    """
    two_pi, pi, half_pi, three_half_pi, _, _ = _trig_constants(rad.fmt)
    r = rad.raw
    if not (0 <= r < two_pi):
        raise ValueError(f"angle {rad.to_float()} not reduced to [0, 2*pi)")
    if r < half_pi:
        return Fx(r, rad.fmt), QuadrantFlags(False, False)
    if r < pi:
        return Fx(pi - r, rad.fmt), QuadrantFlags(neg_cos=True, neg_sin=False)
    if r < three_half_pi:
        return Fx(r - pi, rad.fmt), QuadrantFlags(neg_cos=True, neg_sin=True)
    return Fx(two_pi - r, rad.fmt), QuadrantFlags(neg_cos=False, neg_sin=True)


def cordic_sincos(rad_q1: Fx) -> tuple[Fx, Fx]:
    """Rotation-mode CORDIC, exactly CORDIC_STAGES iterations.

    The x register starts at the gain constant K so no post-scaling multiply
    is needed.  Input must lie in [0, pi/2]; output error stays below 2**-14
    for the default q7.25 format.
    """
    fmt = rad_q1.fmt
    _, _, half_pi, _, atan, k = _trig_constants(fmt)
    if not (0 <= rad_q1.raw <= half_pi):
        raise ValueError(f"angle {rad_q1.to_float()} outside [0, pi/2]")
    x, y, z = k, 0, rad_q1.raw
    for i in range(CORDIC_STAGES):
        if z >= 0:
            x, y, z = x - (y >> i), y + (x >> i), z - atan[i]
        else:
            x, y, z = x + (y >> i), y - (x >> i), z + atan[i]
    return Fx(x, fmt), Fx(y, fmt)


def apply_flags(cos_q1: Fx, sin_q1: Fx, flags: QuadrantFlags,
                ctx: FxContext | None = None) -> tuple[Fx, Fx]:
    """Restore quadrant signs recorded by normalize_rad."""
    cos = fx_neg(cos_q1, ctx) if flags.neg_cos else cos_q1
    sin = fx_neg(sin_q1, ctx) if flags.neg_sin else sin_q1
    return cos, sin


def fx_sincos(rad: Fx, ctx: FxContext | None = None) -> tuple[Fx, Fx]:
    """Full path: reduce mod 2*pi, normalize, CORDIC, sign restore."""
    rad_q1, flags = normalize_rad(reduce_mod_2pi(rad))
    cos_q1, sin_q1 = cordic_sincos(rad_q1)
    return apply_flags(cos_q1, sin_q1, flags, ctx)


# --------------------------------------------------------------------------
# Vector kernels: identical bit-level behavior on int64 raw arrays
# --------------------------------------------------------------------------

def _vec_saturate(raw: np.ndarray, fmt: FxFormat, ctx: FxContext | None) -> np.ndarray:
    lo, hi = fmt.min_raw, fmt.max_raw
    if ctx is not None and ((raw > hi).any() or (raw < lo).any()):
        ctx.overflow = True
    return np.clip(raw, lo, hi)


def vec_from_real(x: np.ndarray, fmt: FxFormat, ctx: FxContext | None = None) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if not np.isfinite(x).all():
        raise ValueError("cannot convert non-finite values")
    scaled = np.rint(x * float(1 << fmt.frac_bits))  # rint ties to even
    lo, hi = float(fmt.min_raw), float(fmt.max_raw)
    if ctx is not None and ((scaled > hi).any() or (scaled < lo).any()):
        ctx.overflow = True
    return np.clip(scaled, lo, hi).astype(np.int64)


def vec_to_float(raw: np.ndarray, fmt: FxFormat) -> np.ndarray:
    # raw fits in <= 32 bits, so the float64 image is exact.
    return raw.astype(np.float64) * fmt.ulp


def vec_mul(a_raw: np.ndarray, b_raw: np.ndarray, fmt: FxFormat,
            ctx: FxContext | None = None) -> np.ndarray:
    prod = a_raw * b_raw  # |raw| < 2**31 so the int64 product is exact
    return _vec_saturate(_rne_shift(prod, fmt.frac_bits), fmt, ctx)


def vec_add(a_raw: np.ndarray, b_raw: np.ndarray, fmt: FxFormat,
            ctx: FxContext | None = None) -> np.ndarray:
    return _vec_saturate(a_raw + b_raw, fmt, ctx)


def vec_reduce_mod_2pi(raw: np.ndarray, fmt: FxFormat) -> np.ndarray:
    two_pi = _trig_constants(fmt)[0]
    return raw % two_pi


def vec_normalize_rad(raw: np.ndarray, fmt: FxFormat):
    """Vector twin of normalize_rad: returns (rad_q1, neg_cos, neg_sin)."""
    two_pi, pi, half_pi, three_half_pi, _, _ = _trig_constants(fmt)
    if ((raw < 0) | (raw >= two_pi)).any():
        raise ValueError("angles not reduced to [0, 2*pi)")
    q1 = raw < half_pi
    q2 = raw < pi
    q3 = raw < three_half_pi
    rad_q1 = np.select([q1, q2, q3], [raw, pi - raw, raw - pi], default=two_pi - raw)
    neg_cos = (~q1 & q2) | (~q2 & q3)
    neg_sin = ~q2
    return rad_q1, neg_cos, neg_sin


def vec_cordic_sincos(rad_q1: np.ndarray, fmt: FxFormat) -> tuple[np.ndarray, np.ndarray]:
    _, _, half_pi, _, atan, k = _trig_constants(fmt)
    if ((rad_q1 < 0) | (rad_q1 > half_pi)).any():
        raise ValueError("angles outside [0, pi/2]")
    x = np.full_like(rad_q1, k)
    y = np.zeros_like(rad_q1)
    z = rad_q1.copy()
    for i in range(CORDIC_STAGES):
        pos = z >= 0
        xs, ys = x >> i, y >> i  # arithmetic shifts, same as the scalar path
        x, y, z = (
            np.where(pos, x - ys, x + ys),
            np.where(pos, y + xs, y - xs),
            np.where(pos, z - atan[i], z + atan[i]),
        )
    return x, y


def vec_apply_flags(cos_raw, sin_raw, neg_cos, neg_sin, fmt: FxFormat,
                    ctx: FxContext | None = None):
    cos = _vec_saturate(np.where(neg_cos, -cos_raw, cos_raw), fmt, ctx)
    sin = _vec_saturate(np.where(neg_sin, -sin_raw, sin_raw), fmt, ctx)
    return cos, sin


def vec_sincos(raw: np.ndarray, fmt: FxFormat,
               ctx: FxContext | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Vector twin of fx_sincos on raw angle values."""
    rad_q1, neg_cos, neg_sin = vec_normalize_rad(vec_reduce_mod_2pi(raw, fmt), fmt)
    cos_q1, sin_q1 = vec_cordic_sincos(rad_q1, fmt)
    return vec_apply_flags(cos_q1, sin_q1, neg_cos, neg_sin, fmt, ctx)

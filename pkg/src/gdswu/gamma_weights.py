"""Gamma-distribution tap weights for the sliding window.

The weight at lag ``i`` is the gamma probability density evaluated at
``x_i = i + sample_offset`` (offset 0 by default, so the newest sample gets
the density at 0) and quantized to the weight format.  The shape parameter
is restricted to integers, which keeps the gamma function an exact
factorial.  Raw weights stay equal to the quantized density values — any
normalization is a filter-mode concern, not folded in here.
"""

from __future__ import annotations

import math
import operator
from dataclasses import dataclass

from .fixed_point import QFormat, ROUNDING_MODES, RoundingMode, round_scaled

# Shapes above this would still be exact in Python but land outside any
# sensible window parameterization; reject instead of approximating.
MAX_SHAPE = 20

DEFAULT_WEIGHT_FORMAT = QFormat(int_bits=1, frac_bits=7)


@dataclass(frozen=True)
class GammaParams:
    """Shape ``a`` (positive integer) and scale ``b`` (positive real)."""

    a: int
    b: float

    def __post_init__(self):
        a = operator.index(self.a)
        if not 1 <= a <= MAX_SHAPE:
            raise ValueError(f"shape a must be an integer in 1..{MAX_SHAPE}, got {self.a}")
        b = float(self.b)
        if not math.isfinite(b) or b <= 0:
            raise ValueError(f"scale b must be finite and > 0, got {self.b}")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)


def gamma_int(a: int) -> int:
    """Gamma(a) = (a-1)! for integer a >= 1, exact."""
    a = operator.index(a)
    if not 1 <= a <= MAX_SHAPE:
        raise ValueError(f"shape a must be an integer in 1..{MAX_SHAPE}, got {a}")
    return math.factorial(a - 1)


def gamma_pdf(x: float, params: GammaParams) -> float:
    """Gamma density x**(a-1) * exp(-x/b) / (b**a * (a-1)!) for x >= 0.

    At x = 0 with a = 1 the power term is taken as 1, so the density starts
    at 1/b.
    """
    if x < 0:
        raise ValueError(f"gamma density is defined for x >= 0, got {x}")
    a, b = params.a, params.b
    return x ** (a - 1) * math.exp(-x / b) / (b ** a * gamma_int(a))


@dataclass(frozen=True)
class WeightVector:
    """Quantized tap weights plus the ideal density values they came from.

    ``raw[i]`` is exactly ``rounding(ideal[i] * 2**frac_bits)`` and
    ``raw_sum`` is the exact integer sum of the raw weights.
    """

    taps: int
    raw: tuple[int, ...]
    ideal: tuple[float, ...]
    raw_sum: int
    qformat: QFormat
    params: GammaParams
    rounding: RoundingMode = "half-up"
    sample_offset: float = 0.0

    @property
    def max_raw_weight(self) -> int:
        return max(self.raw)

    def to_json_dict(self) -> dict:
        return {
            "a": self.params.a,
            "b": self.params.b,
            "taps": self.taps,
            "frac_bits": self.qformat.frac_bits,
            "rounding": self.rounding,
            "raw": list(self.raw),
            "ideal": list(self.ideal),
            "raw_sum": self.raw_sum,
        }


def build_weight_vector(
    params: GammaParams,
    taps: int,
    qformat: QFormat | int | None = None,
    rounding: RoundingMode = "half-up",
    sample_offset: float = 0.0,
) -> WeightVector:
    """Evaluate the gamma density at each lag and quantize to tap weights.

    ``qformat`` may be a full QFormat (raw weights must fit it), a bare int
    meaning frac_bits with the integer width auto-sized to fit, or None for
    the default Q1.7 weight format.  Construction fails if every weight
    quantizes to zero (the filter would be degenerate) or if a weight
    overflows an explicitly requested format.
    """
    taps = operator.index(taps)
    if taps < 1:
        raise ValueError(f"taps must be >= 1, got {taps}")
    if rounding not in ROUNDING_MODES:
        raise ValueError(f"unknown rounding mode {rounding!r}")
    offset = float(sample_offset)
    if not math.isfinite(offset) or offset < 0:
        raise ValueError(f"sample_offset must be finite and >= 0, got {sample_offset}")

    if qformat is None:
        qformat = DEFAULT_WEIGHT_FORMAT
    if isinstance(qformat, QFormat):
        frac_bits = qformat.frac_bits
        auto_size = False
    else:
        frac_bits = operator.index(qformat)
        qformat = None
        auto_size = True
    if frac_bits < 1:
        raise ValueError(f"weight format needs frac_bits >= 1, got {frac_bits}")

    ideal = tuple(gamma_pdf(i + offset, params) for i in range(taps))
    raw = tuple(round_scaled(v, frac_bits, rounding) for v in ideal)
    raw_sum = sum(raw)
    if raw_sum <= 0:
        raise ValueError(
            f"all {taps} weights quantized to zero at frac_bits={frac_bits}; "
            "increase frac_bits or change the distribution parameters"
        )
    if auto_size:
        qformat = QFormat(max(0, max(raw).bit_length() - frac_bits), frac_bits)
    elif max(raw) > qformat.max_raw:
        raise ValueError(
            f"weight {max(raw)} does not fit {qformat}; widen int_bits"
        )
    return WeightVector(
        taps=taps,
        raw=raw,
        ideal=ideal,
        raw_sum=raw_sum,
        qformat=qformat,
        params=params,
        rounding=rounding,
        sample_offset=offset,
    )

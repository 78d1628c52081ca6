"""The gamma-weighted sliding-window filter.

A ring buffer holds the last ``taps`` samples; each push evaluates the exact
weighted sum A = sum(raw_weight[i] * sample_at_lag_i) and emits one output:

- normalized-average mode: floor(A / raw_sum) — an exact convex combination,
  so a constant input c yields exactly c once the window is full.
- raw-accumulate mode: floor(A / 2**frac_bits), saturated to the sample
  format.  This is the unscaled accumulate reading of the datapath; a full
  0x7F step settles at floor(127 * raw_sum / 128) here, not at the seed.

Warm-up uses zero padding: the window starts all-zero like a hardware shift
register after reset, and there is no partial-sum renormalization.  Division
is integer floor division; the remainder is discarded.

A filter instance is single-writer: pushes are strictly ordered.  Distinct
instances are independent and may run on distinct threads freely.
"""

from __future__ import annotations

import operator
from dataclasses import dataclass
from typing import Iterable, Sequence

from .fixed_point import QFormat, RoundingMode, mac_exact
from .gamma_weights import GammaParams, WeightVector, build_weight_vector

MODE_NORMALIZED = "normalized-average"
MODE_RAW = "raw-accumulate"
MODES: tuple[str, ...] = (MODE_NORMALIZED, MODE_RAW)

DEFAULT_SAMPLE_FORMAT = QFormat(int_bits=7, frac_bits=0)


@dataclass(frozen=True)
class FilterConfig:
    """Window length, weights, sample format and output mode."""

    params: GammaParams
    taps: int
    sample_format: QFormat
    weights: WeightVector
    mode: str = MODE_NORMALIZED

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}, expected one of {MODES}")
        if self.weights.taps != self.taps:
            raise ValueError(
                f"weight vector has {self.weights.taps} taps, config says {self.taps}"
            )
        if self.weights.raw_sum <= 0:
            raise ValueError("degenerate weight vector: raw_sum must be > 0")


def make_config(
    a: int = 1,
    b: float = 10.0,
    taps: int = 16,
    frac_bits: int = 7,
    rounding: RoundingMode = "half-up",
    mode: str = MODE_NORMALIZED,
    sample_int_bits: int = 7,
    sample_offset: float = 0.0,
) -> FilterConfig:
    """Build a FilterConfig from scalar knobs (defaults: 16 taps, a=1, b=10,
    7 fractional weight bits, 7-bit samples)."""
    params = GammaParams(a, b)
    weights = build_weight_vector(
        params, taps, frac_bits, rounding=rounding, sample_offset=sample_offset
    )
    return FilterConfig(
        params=params,
        taps=taps,
        sample_format=QFormat(sample_int_bits, 0),
        weights=weights,
        mode=mode,
    )


class GammaWindowFilter:
    """Sliding-window filter over the most recent ``taps`` samples.

    Output depends only on the last ``taps`` pushed samples; eviction is
    strict FIFO, and lag i of the weight vector always addresses the i-th
    most recent sample.
    """

    def __init__(self, config: FilterConfig):
        self.config = config
        self._window = [0] * config.taps
        self._head = 0
        self._fill = 0

    @property
    def fill_count(self) -> int:
        """Number of real samples in the window, capped at ``taps``."""
        return self._fill

    def push(self, sample: int) -> int:
        """Insert one sample (raw value) and return the filter output."""
        sample = operator.index(sample)
        fmt = self.config.sample_format
        if not 0 <= sample <= fmt.max_raw:
            raise ValueError(f"sample {sample} out of range 0..{fmt.max_raw}")
        taps = self.config.taps
        self._head = (self._head + 1) % taps
        self._window[self._head] = sample
        if self._fill < taps:
            self._fill += 1
        ordered = [self._window[(self._head - i) % taps] for i in range(taps)]
        weights = self.config.weights
        acc = mac_exact(ordered, weights.raw)
        if self.config.mode == MODE_NORMALIZED:
            return acc // weights.raw_sum
        return min(acc >> weights.qformat.frac_bits, fmt.max_raw)

    def run(self, samples: Iterable[int]) -> list[int]:
        """Fold push over a stream; output length equals input length."""
        out = []
        for index, sample in enumerate(samples):
            try:
                out.append(self.push(sample))
            except ValueError as exc:
                raise ValueError(f"sample {index}: {exc}") from exc
        return out

    def reset(self) -> None:
        """Return to the freshly constructed state (window zeroed)."""
        self._window = [0] * self.config.taps
        self._head = 0
        self._fill = 0


def step_response(config: FilterConfig, seed: int, length: int) -> list[int]:
    """Outputs for a constant stream of ``seed`` from a zeroed filter.

    Non-negative weights and the growing coverage of the seed make the
    output monotone non-decreasing; it is steady after ``taps`` samples.
    """
    length = operator.index(length)
    if length < config.taps:
        raise ValueError(f"length must be >= taps ({config.taps}), got {length}")
    return GammaWindowFilter(config).run([seed] * length)


def impulse_response(config: FilterConfig, magnitude: int) -> list[int]:
    """Outputs for a single sample of ``magnitude`` followed by zeros.

    In normalized mode output[i] = floor(magnitude * raw[i] / raw_sum): the
    quantized, scaled weight curve, one entry per tap.
    """
    stream = [magnitude] + [0] * (config.taps - 1)
    return GammaWindowFilter(config).run(stream)

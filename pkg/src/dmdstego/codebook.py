"""Exhaustive pattern codebook: 65536 block patterns grouped by complex value.

Each of the 6561 coefficient vectors owns a group of 2**z patterns, where z
is its number of zero coefficients (each zero pair may be both-OFF or
both-ON).  Group sizes are therefore exact powers of two and every group
hides floor(log2(size)) = z bits of choice.  Patterns inside a group are
kept in ascending 16-bit code order, which puts the fewest-mirrors-ON
pattern first and the most-ON pattern last.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree

from .rng import SplitMix64
from .superpixel import (
    DEFAULT_ASSIGNMENT,
    PAIR_PHASORS,
    PAIRS,
    PATTERN_COUNT,
    PhaseAssignment,
    VALUE_COUNT,
)

STRATEGIES = ("random", "min", "max")


@dataclass(frozen=True)
class ValueGroup:
    """All block patterns sharing one complex value."""

    index: int                 # canonical coefficient-vector index, 0..6560
    coeffs: tuple[int, ...]
    value: complex
    patterns: np.ndarray       # uint16 codes, ascending
    capacity_bits: int


class Codebook:
    """Lookup tables over the full pattern space for one phase assignment."""

    def __init__(self, assignment, values, capacities, patterns_sorted,
                 group_starts, group_of_pattern, position_of_pattern, coeff_table):
        self.assignment = assignment
        self.values = values                        # (6561,) complex128
        self.capacities = capacities                # (6561,) int64
        self.patterns_sorted = patterns_sorted      # (65536,) uint16, grouped
        self.group_starts = group_starts            # (6562,) int64 prefix offsets
        self.group_of_pattern = group_of_pattern    # (65536,) int64
        self.position_of_pattern = position_of_pattern  # (65536,) int64
        self._coeff_table = coeff_table             # (6561, 8) int8
        self.group_sizes = np.diff(group_starts)
        self._tree = None

    def group(self, index: int) -> ValueGroup:
        if not 0 <= index < VALUE_COUNT:
            raise ValueError(f"group index {index} outside 0..6560")
        lo, hi = self.group_starts[index], self.group_starts[index + 1]
        return ValueGroup(
            index=index,
            coeffs=tuple(int(c) for c in self._coeff_table[index]),
            value=complex(self.values[index]),
            patterns=self.patterns_sorted[lo:hi],
            capacity_bits=int(self.capacities[index]),
        )

    def capacity_bits(self, index: int) -> int:
        if not 0 <= index < VALUE_COUNT:
            raise ValueError(f"group index {index} outside 0..6560")
        return int(self.capacities[index])

    def nearest_value(self, target: complex) -> int:
        """Index of the group value closest to `target` (exact linear scan).

        Ties resolve to the smallest canonical index; argmin returns the
        first minimum, which is exactly that.
        """
        if not np.isfinite(target):
            raise ValueError("quantization target must be finite")
        return int(np.argmin(np.abs(self.values - target)))

    def nearest_values(self, targets: np.ndarray) -> np.ndarray:
        """Vectorized nearest_value over an arbitrary-shape complex array.

        A kd-tree accelerates the search; any query whose two nearest values
        lie within 1e-9 of each other falls back to the linear scan so ties
        keep the smallest-canonical-index resolution.  The pairwise gap
        between distinct values is >= 0.019, so the fallback only ever fires
        for targets sitting essentially on a Voronoi boundary.
        """
        t = np.asarray(targets, dtype=np.complex128)
        if not np.all(np.isfinite(t)):
            raise ValueError("quantization targets must be finite")
        flat = t.ravel()
        if self._tree is None:
            self._tree = cKDTree(np.column_stack([self.values.real, self.values.imag]))
        dist, idx = self._tree.query(np.column_stack([flat.real, flat.imag]), k=2, workers=-1)
        out = idx[:, 0].astype(np.int64)
        near_tie = np.nonzero(dist[:, 1] - dist[:, 0] <= 1e-9)[0]
        for i in near_tie:
            out[i] = np.argmin(np.abs(self.values - flat[i]))
        return out.reshape(t.shape)

    def select_pattern(self, index: int, strategy: str, rng: SplitMix64 | None = None) -> int:
        """Pick one pattern code from a group: fewest ON, most ON, or keyed draw."""
        if strategy not in STRATEGIES:
            raise ValueError(f"strategy must be one of {STRATEGIES}")
        lo, hi = self.group_starts[index], self.group_starts[index + 1]
        if strategy == "min":
            return int(self.patterns_sorted[lo])
        if strategy == "max":
            return int(self.patterns_sorted[hi - 1])
        if rng is None:
            raise ValueError("random selection needs an rng")
        return int(self.patterns_sorted[lo + rng.below(int(hi - lo))])

    def pattern_index_in_group(self, code: int) -> tuple[int, int]:
        """Map a pattern code to (owning group index, position inside group)."""
        if not 0 <= code < PATTERN_COUNT:
            raise ValueError(f"pattern code {code} outside 0..65535")
        return int(self.group_of_pattern[code]), int(self.position_of_pattern[code])


def build_codebook(assignment: PhaseAssignment | None = None) -> Codebook:
    """Enumerate all 65536 patterns into their 6561 value groups.

    Fully vectorized; runs in well under a second so no cache is kept
    between runs.
    """
    assignment = assignment or DEFAULT_ASSIGNMENT

    codes = np.arange(PATTERN_COUNT, dtype=np.uint32)
    bits = ((codes[:, None] >> np.arange(16, dtype=np.uint32)) & 1).astype(np.int8)
    # Column j of on_by_pair is the ON state of phase j+1; +8 columns follow.
    order = assignment.bit_by_index[1:]          # bit position of each phase 1..16
    on_by_phase = bits[:, order]
    trits = on_by_phase[:, :PAIRS] - on_by_phase[:, PAIRS:]
    powers = 3 ** np.arange(PAIRS, dtype=np.int64)
    group_idx = ((trits.astype(np.int64) + 1) * powers).sum(axis=1)

    # Stable sort keeps ascending code order inside each group.
    order_by_group = np.argsort(group_idx, kind="stable")
    patterns_sorted = codes[order_by_group].astype(np.uint16)
    counts = np.bincount(group_idx, minlength=VALUE_COUNT)
    group_starts = np.zeros(VALUE_COUNT + 1, dtype=np.int64)
    np.cumsum(counts, out=group_starts[1:])

    position = np.empty(PATTERN_COUNT, dtype=np.int64)
    position[order_by_group] = np.arange(PATTERN_COUNT) - np.repeat(group_starts[:-1], counts)

    digits = np.arange(VALUE_COUNT, dtype=np.int64)
    coeff_table = np.empty((VALUE_COUNT, PAIRS), dtype=np.int8)
    for j in range(PAIRS):
        coeff_table[:, j] = digits % 3 - 1
        digits //= 3
    values = coeff_table.astype(np.float64) @ PAIR_PHASORS

    capacities = np.count_nonzero(coeff_table == 0, axis=1).astype(np.int64)

    return Codebook(
        assignment=assignment,
        values=values,
        capacities=capacities,
        patterns_sorted=patterns_sorted,
        group_starts=group_starts,
        group_of_pattern=group_idx,
        position_of_pattern=position,
        coeff_table=coeff_table,
    )

"""Mask patterns and partial observations over 4-digit PINs.

Positions are 1-based (d1 is the leftmost digit). A mask pattern says which
positions are unknown; an observation adds the digit values seen at the
remaining positions. Candidate completions are tuples over the missing
positions in ascending position order, and their canonical index is the
base-10 value of that tuple (lexicographic order).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

PIN_LENGTH = 4
POSITIONS = (1, 2, 3, 4)


@dataclass(frozen=True)
class MaskPattern:
    """A non-empty proper subset of PIN positions that are unknown."""

    missing: tuple[int, ...]

    def __post_init__(self) -> None:
        missing = tuple(sorted(self.missing))
        if len(set(missing)) != len(missing):
            raise ValueError(f"duplicate positions in mask: {self.missing}")
        if not missing or len(missing) >= PIN_LENGTH:
            raise ValueError("mask must leave between 1 and 3 positions missing")
        if any(p not in POSITIONS for p in missing):
            raise ValueError(f"positions must be in 1..4, got {self.missing}")
        object.__setattr__(self, "missing", missing)

    @property
    def observed(self) -> tuple[int, ...]:
        return tuple(p for p in POSITIONS if p not in self.missing)

    @property
    def num_missing(self) -> int:
        return len(self.missing)

    @property
    def candidate_space(self) -> int:
        return 10 ** len(self.missing)

    @property
    def label(self) -> str:
        """Human-readable name, e.g. 'd1d2|d3d4' (missing|observed)."""
        left = "".join(f"d{p}" for p in self.missing)
        right = "".join(f"d{p}" for p in self.observed)
        return f"{left}|{right}"


def all_patterns() -> list[MaskPattern]:
    """The 14 distinct patterns: 4 singles, 6 pairs, 4 triples."""
    out = []
    for m in (1, 2, 3):
        for combo in itertools.combinations(POSITIONS, m):
            out.append(MaskPattern(combo))
    return out


def parse_pattern(token: str) -> MaskPattern:
    """Parse a pattern token like 'd1', 'd2d4' or 'd1d2d3' (missing positions)."""
    token = token.strip().lower()
    positions = []
    rest = token
    while rest:
        if len(rest) < 2 or rest[0] != "d" or rest[1] not in "1234":
            raise ValueError(f"bad scenario token {token!r}: expected e.g. 'd1' or 'd1d3'")
        positions.append(int(rest[1]))
        rest = rest[2:]
    return MaskPattern(tuple(positions))


@dataclass(frozen=True)
class Observation:
    """Digit values at the observed positions of a mask pattern.

    ``values`` is aligned with ``pattern.observed`` (ascending positions).
    """

    pattern: MaskPattern
    values: tuple[int, ...]

    def __post_init__(self) -> None:
        values = tuple(int(v) for v in self.values)
        if len(values) != len(self.pattern.observed):
            raise ValueError(
                f"expected {len(self.pattern.observed)} observed values, got {len(values)}"
            )
        if any(not 0 <= v <= 9 for v in values):
            raise ValueError(f"observed values must be digits 0..9: {self.values}")
        object.__setattr__(self, "values", values)

    def value_at(self, position: int) -> int:
        return self.values[self.pattern.observed.index(position)]

    @property
    def mask_string(self) -> str:
        """Wildcard form, e.g. '?2?4' for pattern d1d3|d2d4 with d2=2, d4=4."""
        chars = []
        for p in POSITIONS:
            chars.append("?" if p in self.pattern.missing else str(self.value_at(p)))
        return "".join(chars)

    @classmethod
    def from_mask_string(cls, text: str) -> "Observation":
        """Parse a 4-char string over {0-9, '?'} with 1 to 3 '?' wildcards."""
        if len(text) != 4 or any(c != "?" and c not in "0123456789" for c in text):
            raise ValueError(f"observation must be 4 chars over 0-9 and '?': {text!r}")
        missing = tuple(i + 1 for i, c in enumerate(text) if c == "?")
        if not 1 <= len(missing) <= 3:
            raise ValueError(f"observation must have 1 to 3 '?' wildcards: {text!r}")
        pattern = MaskPattern(missing)
        values = tuple(int(text[p - 1]) for p in pattern.observed)
        return cls(pattern, values)


def observe(pattern: MaskPattern, digits: tuple[int, ...]) -> Observation:
    """Mask a full PIN down to the observation a pattern would reveal."""
    return Observation(pattern, tuple(digits[p - 1] for p in pattern.observed))


def truth(pattern: MaskPattern, digits: tuple[int, ...]) -> tuple[int, ...]:
    """The candidate tuple a scorer must recover for this PIN under a pattern."""
    return tuple(digits[p - 1] for p in pattern.missing)


def candidate_index(candidate: tuple[int, ...]) -> int:
    """Canonical (lexicographic) index of a candidate tuple."""
    idx = 0
    for d in candidate:
        idx = idx * 10 + d
    return idx


def candidate_from_index(index: int, num_missing: int) -> tuple[int, ...]:
    digits = []
    for _ in range(num_missing):
        index, d = divmod(index, 10)
        digits.append(d)
    return tuple(reversed(digits))


def complete(observation: Observation, candidate: tuple[int, ...]) -> tuple[int, ...]:
    """Assemble the full 4-digit PIN from an observation plus a candidate."""
    digits = [0] * PIN_LENGTH
    for p, v in zip(observation.pattern.observed, observation.values):
        digits[p - 1] = v
    for p, v in zip(observation.pattern.missing, candidate):
        digits[p - 1] = v
    return tuple(digits)

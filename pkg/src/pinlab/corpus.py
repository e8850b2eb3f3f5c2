"""PIN corpus ingestion: extraction from password dumps, splits, and files.

A corpus is an ordered multiset of 4-digit PINs. Duplicates and order carry
the behavioral signal, so nothing is deduplicated or sorted. PINs are stored
as integer codes 0..9999 (code 7 is the PIN "0007").
"""

from __future__ import annotations

import hashlib
import math
import re
from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np

from .errors import DataError

# Maximal runs of exactly four ASCII digits. \d is deliberately avoided:
# unicode digits (e.g. full-width) must not qualify.
_FOUR_DIGIT_RUN = re.compile(r"(?<![0-9])[0-9]{4}(?![0-9])")

_MASK64 = (1 << 64) - 1
_CORPUS_LINE = re.compile(r"^[0-9]{4}$")


def digits_to_code(digits: tuple[int, ...]) -> int:
    d1, d2, d3, d4 = digits
    return d1 * 1000 + d2 * 100 + d3 * 10 + d4


def code_to_digits(code: int) -> tuple[int, int, int, int]:
    return (code // 1000, code // 100 % 10, code // 10 % 10, code % 10)


class Corpus:
    """Ordered multiset of 4-digit PINs, backed by an immutable code array."""

    __slots__ = ("codes",)

    def __init__(self, codes: Iterable[int] | np.ndarray):
        arr = np.asarray(list(codes) if not isinstance(codes, np.ndarray) else codes,
                         dtype=np.int32)
        if arr.ndim != 1:
            raise ValueError("corpus codes must be a flat sequence")
        if arr.size and (arr.min() < 0 or arr.max() > 9999):
            raise ValueError("PIN codes must be in 0..9999")
        arr.flags.writeable = False
        self.codes = arr

    def __len__(self) -> int:
        return int(self.codes.size)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Corpus):
            return NotImplemented
        return np.array_equal(self.codes, other.codes)

    def __iter__(self) -> Iterator[tuple[int, int, int, int]]:
        return (code_to_digits(int(c)) for c in self.codes)

    def __repr__(self) -> str:
        return f"Corpus({len(self)} pins)"

    def digits_at(self, i: int) -> tuple[int, int, int, int]:
        return code_to_digits(int(self.codes[i]))

    def pin_strings(self) -> list[str]:
        return [f"{int(c):04d}" for c in self.codes]

    @classmethod
    def from_pins(cls, pins: Iterable[tuple[int, ...]]) -> "Corpus":
        return cls(digits_to_code(tuple(p)) for p in pins)


@dataclass(frozen=True)
class SplitConfig:
    train_fraction: float = 0.8
    seed: int = 39

    def __post_init__(self) -> None:
        if not 0 < self.train_fraction < 1:
            raise ValueError(f"train_fraction must be in (0,1): {self.train_fraction}")
        object.__setattr__(self, "seed", int(self.seed) & _MASK64)


@dataclass
class ExtractionStats:
    lines_read: int = 0
    lines_skipped: int = 0
    pins_extracted: int = 0


def extract_pins_with_stats(lines: Iterable[str | bytes]) -> tuple[Corpus, ExtractionStats]:
    """Scan lines for 4-digit runs; skip (and tally) undecodable byte lines."""
    stats = ExtractionStats()
    codes: list[int] = []
    for line in lines:
        stats.lines_read += 1
        if isinstance(line, bytes):
            try:
                line = line.decode("utf-8")
            except UnicodeDecodeError:
                stats.lines_skipped += 1
                continue
        for run in _FOUR_DIGIT_RUN.findall(line):
            codes.append(int(run))
    stats.pins_extracted = len(codes)
    return Corpus(codes), stats


def extract_pins(lines: Iterable[str | bytes]) -> Corpus:
    """Every maximal run of exactly four ASCII digits, in scan order."""
    corpus, _ = extract_pins_with_stats(lines)
    return corpus


def _splitmix64(seed: int) -> Iterator[int]:
    state = seed & _MASK64
    while True:
        state = (state + 0x9E3779B97F4A7C15) & _MASK64
        z = state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        yield z ^ (z >> 31)


def shuffled_indices(n: int, seed: int) -> np.ndarray:
    """Fisher-Yates permutation of range(n) driven by SplitMix64.

    Platform-independent by construction: the stream is pure 64-bit integer
    arithmetic and the swap index is ``r % (i + 1)``.
    """
    idx = list(range(n))
    rng = _splitmix64(seed)
    for i in range(n - 1, 0, -1):
        j = next(rng) % (i + 1)
        idx[i], idx[j] = idx[j], idx[i]
    return np.asarray(idx, dtype=np.int64)


def split_corpus(corpus: Corpus, config: SplitConfig = SplitConfig()) -> tuple[Corpus, Corpus]:
    """Deterministic shuffle-split; train gets floor(train_fraction * N) records."""
    n = len(corpus)
    if n == 0:
        raise DataError("empty corpus")
    perm = shuffled_indices(n, config.seed)
    k = math.floor(config.train_fraction * n)
    return Corpus(corpus.codes[perm[:k]]), Corpus(corpus.codes[perm[k:]])


def save_corpus(corpus: Corpus, path) -> None:
    """One 4-digit ASCII string per line, LF-terminated, UTF-8."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for s in corpus.pin_strings():
            fh.write(s + "\n")


def load_corpus(path) -> Corpus:
    codes: list[int] = []
    with open(path, "r", encoding="utf-8", newline="\n") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw[:-1] if raw.endswith("\n") else raw
            if not _CORPUS_LINE.match(line):
                raise DataError(f"{path}: line {lineno}: expected exactly 4 ASCII digits, got {line!r}")
            codes.append(int(line))
    return Corpus(codes)


def corpus_fingerprint(corpus: Corpus) -> str:
    """64-bit content hash (hex) of the canonical serialized form."""
    h = hashlib.blake2b(digest_size=8)
    for s in corpus.pin_strings():
        h.update(s.encode("ascii"))
        h.update(b"\n")
    return h.hexdigest()

"""Run-length words over the alphabet {1,2,3} and block structures on them.

Words are immutable and always canonical: no empty runs, no two adjacent
runs with the same symbol.  Run lengths are plain Python ints, so blocks of
size ~10^9 (and far beyond) cost a single run.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Union

SYMBOLS = (1, 2, 3)

# Expanding a word to individual symbols is only allowed below this length.
EXPANSION_LIMIT = 10**5

# Refuse to materialize block sizes above this many bits (paper-mode sizes
# are doubly exponential in r; beyond r=10 they stop being representable).
_MAX_SIZE_BITS = 1 << 26


@dataclass(frozen=True)
class Word:
    """A word over {1,2,3} as a tuple of (symbol, length) runs."""

    runs: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        prev = None
        for sym, length in self.runs:
            if sym not in SYMBOLS:
                raise ValueError(f"bad symbol {sym!r} in word")
            if length < 1:
                raise ValueError(f"non-positive run length {length}")
            if sym == prev:
                raise ValueError("adjacent runs share a symbol; word not canonical")
            prev = sym

    @property
    def length(self) -> int:
        return sum(length for _, length in self.runs)

    def symbol_at(self, i: int) -> int:
        """Symbol at 1-based position i, in time proportional to the run count."""
        if i < 1:
            raise IndexError(f"position {i} out of range")
        offset = 0
        for sym, length in self.runs:
            offset += length
            if i <= offset:
                return sym
        raise IndexError(f"position {i} out of range (length {offset})")

    def expand(self) -> list[int]:
        """The word as a symbol list; only for lengths <= EXPANSION_LIMIT."""
        n = self.length
        if n > EXPANSION_LIMIT:
            raise ValueError(f"word of length {n} is too long to expand")
        out: list[int] = []
        for sym, length in self.runs:
            out.extend([sym] * length)
        return out

    def __str__(self) -> str:
        return encode_runs(self)


EMPTY = Word()


def make_word(pairs: Iterable[tuple[int, int]]) -> Word:
    """Build a canonical Word from (symbol, length) pairs, merging and dropping as needed."""
    runs: list[tuple[int, int]] = []
    for sym, length in pairs:
        if sym not in SYMBOLS:
            raise ValueError(f"bad symbol {sym!r}")
        if length < 0:
            raise ValueError(f"negative run length {length}")
        if length == 0:
            continue
        if runs and runs[-1][0] == sym:
            runs[-1] = (sym, runs[-1][1] + length)
        else:
            runs.append((sym, length))
    return Word(tuple(runs))


def word_from_symbols(symbols: Iterable[int]) -> Word:
    return make_word((sym, 1) for sym in symbols)


def words_equal(u: Word, v: Word) -> bool:
    return u == v


def word_length(w: Word) -> int:
    return w.length


def word_symbol_at(w: Word, i: int) -> int:
    return w.symbol_at(i)


def encode_runs(w: Word) -> str:
    """Canonical text form: comma-separated `<symbol>x<length>` runs; empty word -> ''."""
    return ",".join(f"{sym}x{length}" for sym, length in w.runs)


def parse_word(text: str) -> Word:
    """Parse either the run encoding (`1x64,2x2`) or an expanded base-3 string (`112`)."""
    text = text.strip()
    if not text:
        return EMPTY
    if "x" in text:
        pairs = []
        for token in text.split(","):
            head, _, tail = token.partition("x")
            try:
                sym, length = int(head), int(tail)
            except ValueError:
                raise ValueError(f"bad run token {token!r}") from None
            pairs.append((sym, length))
        return make_word(pairs)
    if len(text) > EXPANSION_LIMIT:
        raise ValueError("expanded form only accepted up to length 10^5")
    if not set(text) <= {"1", "2", "3"}:
        raise ValueError(f"bad expanded word {text[:40]!r}")
    return word_from_symbols(int(ch) for ch in text)


# --- block fills -----------------------------------------------------------


@dataclass(frozen=True)
class Cut:
    """Fill a block with p ones followed by (size - p) twos."""

    p: int


@dataclass(frozen=True)
class Tri:
    """Fill a block with p1 ones, (p2 - p1) copies of a, then (size - p2) twos."""

    p1: int
    p2: int
    a: int


BlockFill = Union[Cut, Tri]


def _fill_runs(size: int, fill: BlockFill) -> list[tuple[int, int]]:
    if isinstance(fill, Cut):
        if not 0 <= fill.p <= size:
            raise ValueError(f"Cut({fill.p}) out of range for block size {size}")
        return [(1, fill.p), (2, size - fill.p)]
    if isinstance(fill, Tri):
        if not 0 <= fill.p1 < fill.p2 <= size:
            raise ValueError(f"Tri({fill.p1},{fill.p2}) out of range for block size {size}")
        if fill.a not in SYMBOLS:
            raise ValueError(f"bad fill symbol {fill.a!r}")
        return [(1, fill.p1), (fill.a, fill.p2 - fill.p1), (2, size - fill.p2)]
    raise TypeError(f"not a block fill: {fill!r}")


def assemble(prefix: Word, blocks: Iterable[tuple[int, BlockFill]]) -> Word:
    """Concatenate prefix with each block realized left to right."""
    pairs = list(prefix.runs)
    for size, fill in blocks:
        pairs.extend(_fill_runs(size, fill))
    return make_word(pairs)


def extend_cut(w: Word, q: int, block_size: int) -> Word:
    """Append one block of q ones followed by (block_size - q) twos."""
    return assemble(w, [(block_size, Cut(q))])


# --- block structures ------------------------------------------------------


MODES = ("paper", "minimal", "custom")


@dataclass(frozen=True)
class BlockStructure:
    """Partition of [n] into t consecutive blocks of sizes n_1..n_t."""

    r: int
    t: int
    sizes: tuple[int, ...]
    prefix: tuple[int, ...]  # s_0 = 0, s_j = n_1 + ... + n_j
    mode: str

    @property
    def n(self) -> int:
        return self.prefix[-1]

    def level_of_length(self, length: int) -> int:
        """The level j with s_j == length; rejects lengths off block boundaries."""
        for j, s in enumerate(self.prefix):
            if s == length:
                return j
            if s > length:
                break
        raise ValueError(f"length {length} is not a block boundary")


def colour_space_size(bs: BlockStructure, j: int) -> int:
    """Exact number of composite colours the level-j scan can see.

    Unordered cut pairs from {0..n_k} for every block k >= j+2, times r
    oracle colours per letter-vector over the trailing t-j-1 blocks.
    """
    if not 0 <= j <= bs.t - 1:
        raise ValueError(f"level {j} out of range for t={bs.t}")
    pairs = math.prod(math.comb(bs.sizes[k - 1] + 1, 2) for k in range(j + 2, bs.t + 1))
    return pairs * bs.r ** (3 ** (bs.t - j - 1))


def _guard_bits(value_bits: int) -> None:
    if value_bits > _MAX_SIZE_BITS:
        raise ValueError("block sizes too large to materialize; reduce r")


def block_structure(r: int, mode: str = "paper", sizes: Iterable[int] | None = None) -> BlockStructure:
    """Build the t = r block structure for the requested mode.

    paper:   n_j = r^(6^(t-j)).
    minimal: n_t = r and, going down, each n_j is exactly the colour-space
             size of the level below it, so every pigeonhole must collide.
    custom:  caller-supplied sizes; collisions are then not guaranteed.
    """
    if r < 1:
        raise ValueError("r must be >= 1")
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    t = r
    if mode == "paper":
        out = []
        for j in range(1, t + 1):
            exponent = 6 ** (t - j)
            _guard_bits(exponent * max(r.bit_length(), 1))
            out.append(r**exponent)
        size_list = out
    elif mode == "minimal":
        size_list = [0] * t
        size_list[t - 1] = r
        for j in range(t - 1, 0, -1):
            pairs = math.prod(math.comb(size_list[k] + 1, 2) for k in range(j, t))
            n_j = pairs * r ** (3 ** (t - j))
            _guard_bits(n_j.bit_length())
            size_list[j - 1] = n_j
    else:
        if sizes is None:
            raise ValueError("custom mode requires sizes")
        size_list = [int(s) for s in sizes]
        if len(size_list) != t:
            raise ValueError(f"custom mode needs exactly t = r = {t} sizes, got {len(size_list)}")
        if any(s < 1 for s in size_list):
            raise ValueError("custom sizes must be positive")

    prefix = [0]
    for s in size_list:
        prefix.append(prefix[-1] + s)
    bs = BlockStructure(r=r, t=t, sizes=tuple(size_list), prefix=tuple(prefix), mode=mode)

    if mode != "custom":
        for j in range(t):
            if bs.sizes[j] < colour_space_size(bs, j):
                raise AssertionError(
                    f"mode {mode}: n_{j+1} = {bs.sizes[j]} below colour space at level {j}"
                )
    return bs

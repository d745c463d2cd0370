"""Level-by-level pigeonhole search for a monochromatic combinatorial line.

Working down from the deepest block, each level scans cut positions q and
assigns every scanned word a composite colour: the cut pairs the deeper
levels committed to, plus the oracle colours of all letter extensions.  The
first repeated composite colour fixes that level's cut pair.  After level 0
the r+1 probe words force one more collision, which yields the line.

The scan stops at the first repeat, so collisions typically arrive
birthday-fast, long before the guaranteed pigeonhole bound.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import product
from typing import Callable, Iterable

from .certificates import (
    STAR,
    Certificate,
    ChainStep,
    LineSpec,
    active_intervals,
    make_template,
    point_of_line,
    validate_line,
)
from .errors import BudgetExceededError, NoCollisionError
from .oracles import ColourOracle, MemoOracle, OracleStats
from .words import EMPTY, BlockStructure, Cut, Tri, Word, assemble, extend_cut, words_equal

DEFAULT_BUDGET = 10**8

PairTable = dict[int, tuple[int, int]]

ProgressHook = Callable[[int, "LevelOutcome", int], None]


def letter_vectors(length: int):
    """All letter vectors of the given length, most-significant first, 1 < 2 < 3."""
    return product((1, 2, 3), repeat=length)


def freeze_pairs(pairs: PairTable) -> tuple[tuple[int, int, int], ...]:
    return tuple((k, lo, hi) for k, (lo, hi) in sorted(pairs.items()))


@dataclass(frozen=True)
class CompositeColour:
    """Hashable value whose repeats drive each level's pigeonhole."""

    pairs: tuple[tuple[int, int, int], ...]
    colours: tuple[int, ...]


@dataclass
class LevelOutcome:
    collision: tuple[int, int]
    pairs: PairTable  # cut pairs for every block below this level
    colour: CompositeColour


def structure_from_sizes(r: int, mode: str, sizes: Iterable[int]) -> BlockStructure:
    """Raw block structure from stored sizes, without mode recomputation."""
    size_list = tuple(int(s) for s in sizes)
    prefix = [0]
    for s in size_list:
        prefix.append(prefix[-1] + s)
    return BlockStructure(r=r, t=len(size_list), sizes=size_list, prefix=tuple(prefix), mode=mode)


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise AssertionError(message)


def _check_pairs(pairs: PairTable, bs: BlockStructure, low: int) -> None:
    expected = set(range(low + 1, bs.t + 1))
    if set(pairs) != expected:
        raise ValueError(f"pair table covers blocks {sorted(pairs)}, expected {sorted(expected)}")
    for k in expected:
        lo, hi = pairs[k]
        if not 0 <= lo < hi <= bs.sizes[k - 1]:
            raise ValueError(f"pair ({lo},{hi}) out of range for block {k}")


def extend_with_letters(w: Word, bs: BlockStructure, pairs: PairTable, letters: tuple[int, ...]) -> Word:
    """Fill every block below the word's level with its cut pair and one letter each."""
    boundary = bs.t - len(letters)  # word must end at s_boundary
    if boundary < 0:
        raise ValueError(f"{len(letters)} letters for t={bs.t}")
    if w.length != bs.prefix[boundary]:
        raise ValueError(f"word length {w.length}, expected {bs.prefix[boundary]}")
    _check_pairs(pairs, bs, boundary)
    blocks = []
    for k, letter in zip(range(boundary + 1, bs.t + 1), letters):
        lo, hi = pairs[k]
        blocks.append((bs.sizes[k - 1], Tri(lo, hi, letter)))
    return assemble(w, blocks)


def pivot_word(
    bs: BlockStructure,
    prefix: Word,
    pairs: PairTable,
    level: int,
    side: int,
    letters: tuple[int, ...],
) -> Word:
    """Word cut at `side` of the pair in the pivot block, letter-filled beyond it.

    Blocks between the prefix and the pivot level are cut at their pair's
    upper position; the pivot block is cut at the lower (side=1) or upper
    (side=2) position; deeper blocks carry one letter each.  level == j
    (no pivot block, all letters) is allowed and makes `side` irrelevant.
    """
    j = bs.level_of_length(prefix.length)
    if not j <= level <= bs.t:
        raise ValueError(f"pivot level {level} out of range ({j}..{bs.t})")
    if side not in (1, 2):
        raise ValueError(f"side must be 1 or 2, got {side}")
    if len(letters) != bs.t - level:
        raise ValueError(f"{len(letters)} letters for pivot level {level} with t={bs.t}")
    _check_pairs(pairs, bs, j)
    blocks = []
    for k in range(j + 1, bs.t + 1):
        lo, hi = pairs[k]
        if k < level:
            fill: Cut | Tri = Cut(hi)
        elif k == level:
            fill = Cut(lo if side == 1 else hi)
        else:
            fill = Tri(lo, hi, letters[k - level - 1])
        blocks.append((bs.sizes[k - 1], fill))
    return assemble(prefix, blocks)


class LineSearch:
    """One search run: a block structure, a memoized oracle, and a budget."""

    def __init__(
        self,
        bs: BlockStructure,
        oracle: ColourOracle,
        budget: int = DEFAULT_BUDGET,
        seed: int = 0,
        progress: ProgressHook | None = None,
    ):
        self.bs = bs
        self.oracle = oracle if isinstance(oracle, MemoOracle) else MemoOracle(oracle)
        self.budget = budget
        self.rng = random.Random(seed)
        self.progress = progress
        self._memo: dict[tuple[int, tuple], LevelOutcome] = {}

    def _eval(self, word: Word) -> int:
        colour = self.oracle.evaluate(word)
        if self.oracle.stats.unique_evaluations > self.budget:
            raise BudgetExceededError(
                f"budget of {self.budget} unique oracle evaluations exceeded"
            )
        return colour

    def composite_colour(self, j: int, w: Word) -> tuple[CompositeColour, PairTable]:
        """Composite colour of a word ending at s_{j+1}, plus the deeper pair table."""
        if not 0 <= j <= self.bs.t - 1:
            raise ValueError(f"level {j} out of range")
        if j + 1 == self.bs.t:
            deeper: PairTable = {}
        else:
            deeper = self.solve_level(j + 1, w).pairs
        colours = tuple(
            self._eval(extend_with_letters(w, self.bs, deeper, letters))
            for letters in letter_vectors(self.bs.t - j - 1)
        )
        return CompositeColour(freeze_pairs(deeper), colours), deeper

    def solve_level(self, j: int, w: Word) -> LevelOutcome:
        """Scan q ascending until two cut extensions share a composite colour."""
        if not 0 <= j < self.bs.t:
            raise ValueError(f"level {j} out of range")
        if w.length != self.bs.prefix[j]:
            raise ValueError(f"word length {w.length}, expected {self.bs.prefix[j]}")
        key = (j, w.runs)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        size = self.bs.sizes[j]
        first_seen: dict[CompositeColour, int] = {}
        for q in range(size + 1):
            colour, _ = self.composite_colour(j, extend_cut(w, q, size))
            q1 = first_seen.get(colour)
            if q1 is not None:
                outcome = self._collision_outcome(j, w, q1, q, colour)
                self._memo[key] = outcome
                if self.progress is not None:
                    self.progress(j, outcome, q + 1)
                return outcome
            first_seen[colour] = q
        raise NoCollisionError(
            f"level {j}: no repeated composite colour among q = 0..{size}"
        )

    def _collision_outcome(
        self, j: int, w: Word, q1: int, q2: int, colour: CompositeColour
    ) -> LevelOutcome:
        size = self.bs.sizes[j]
        word1 = extend_cut(w, q1, size)
        word2 = extend_cut(w, q2, size)
        colour1, deeper1 = self.composite_colour(j, word1)
        colour2, deeper2 = self.composite_colour(j, word2)
        _require(colour1 == colour and colour2 == colour, f"level {j}: collision does not recompute")
        _require(deeper1 == deeper2, f"level {j}: inherited pair tables differ at collision")
        pairs = dict(deeper1)
        pairs[j + 1] = (q1, q2)
        self._check_identification(j, w, pairs, word2, deeper1)
        return LevelOutcome(collision=(q1, q2), pairs=pairs, colour=colour)

    def _check_identification(
        self, j: int, w: Word, pairs: PairTable, upper: Word, deeper: PairTable
    ) -> None:
        # Pivot words described from this level must literally equal the same
        # words described from the upper collision word one level down.
        for level in range(j + 2, self.bs.t + 1):
            tail = self.bs.t - level
            if 3**tail <= 9:
                vectors = list(letter_vectors(tail))
            else:
                vectors = [
                    tuple(self.rng.choice((1, 2, 3)) for _ in range(tail)) for _ in range(3)
                ]
            for letters in vectors:
                for side in (1, 2):
                    here = pivot_word(self.bs, w, pairs, level, side, letters)
                    there = pivot_word(self.bs, upper, deeper, level, side, letters)
                    _require(
                        words_equal(here, there),
                        f"level {j}: identification fails at pivot {level}, letters {letters}",
                    )

    def find_line(self) -> Certificate:
        """Run the full search and package the result as a certificate."""
        _require(self.bs.t == self.bs.r, "block count must equal colour count")
        r = self.bs.r
        pairs = self.solve_level(0, EMPTY).pairs
        first_seen: dict[int, int] = {}
        collision = None
        for q in range(r + 1):
            probe = pivot_word(self.bs, EMPTY, pairs, 0, 1, (1,) * q + (3,) * (r - q))
            colour = self._eval(probe)
            if colour in first_seen:
                collision = (first_seen[colour], q)
                shared = colour
                break
            first_seen[colour] = q
        if collision is None:
            # r+1 range-checked colours cannot all differ; defensive only.
            raise NoCollisionError("no repeated colour among the probe words")
        q1, q2 = collision

        chain = build_chain(self.bs, pairs, q1, q2)
        line = line_from_collision(self.bs, pairs, q1, q2)
        probe_hi = pivot_word(self.bs, EMPTY, pairs, 0, 1, (1,) * q2 + (3,) * (r - q2))
        probe_lo = pivot_word(self.bs, EMPTY, pairs, 0, 1, (1,) * q1 + (3,) * (r - q1))
        _require(words_equal(point_of_line(line, 1), probe_hi), "line point 1 is not the upper probe")
        _require(words_equal(point_of_line(line, 2), chain[-1].end), "line point 2 is not the chain end")
        _require(words_equal(point_of_line(line, 3), probe_lo), "line point 3 is not the lower probe")

        stats = self.oracle.stats
        return Certificate(
            r=r,
            mode=self.bs.mode,
            block_sizes=self.bs.sizes,
            pair_table=pairs,
            final_collision=(q1, q2),
            chain=chain,
            line=line,
            shared_colour=shared,
            oracle_spec=self.oracle.description,
            stats=OracleStats(stats.unique_evaluations, stats.total_requests),
        )


def build_chain(bs: BlockStructure, pairs: PairTable, q1: int, q2: int) -> list[ChainStep]:
    """The alternating identify/conclude chain from probe q2 down to the closing word."""
    if not 0 <= q1 < q2 <= bs.r:
        raise ValueError(f"bad collision ({q1},{q2}) for r={bs.r}")
    _check_pairs(pairs, bs, 0)
    threes = bs.r - q2
    current = pivot_word(bs, EMPTY, pairs, 0, 1, (1,) * q2 + (3,) * threes)
    steps: list[ChainStep] = []
    for level in range(q2, q1, -1):
        letters = (2,) * (q2 - level) + (3,) * threes
        upper = pivot_word(bs, EMPTY, pairs, level, 2, letters)
        _require(words_equal(current, upper), f"identification fails entering pivot {level}")
        steps.append(ChainStep("identify", current, upper))
        lower = pivot_word(bs, EMPTY, pairs, level, 1, letters)
        steps.append(
            ChainStep("conclude", upper, lower, ell=level, letters=letters, i_from=2, i_to=1)
        )
        current = lower
    closing = pivot_word(
        bs, EMPTY, pairs, 0, 1, (1,) * q1 + (2,) * (q2 - q1) + (3,) * threes
    )
    _require(words_equal(current, closing), "identification fails at the closing word")
    steps.append(ChainStep("identify", current, closing))
    return steps


def line_from_collision(bs: BlockStructure, pairs: PairTable, q1: int, q2: int) -> LineSpec:
    """The monochromatic line determined by the pair table and the final collision.

    Wildcards sit between each pair's cuts in blocks q1+1..q2; blocks at or
    below q1 are cut at the upper position, blocks above q2 carry threes.
    """
    if not 0 <= q1 < q2 <= bs.r:
        raise ValueError(f"bad collision ({q1},{q2}) for r={bs.r}")
    _check_pairs(pairs, bs, 0)
    tokens: list[tuple[int, int]] = []
    for k in range(1, bs.t + 1):
        lo, hi = pairs[k]
        size = bs.sizes[k - 1]
        if k <= q1:
            tokens += [(1, hi), (2, size - hi)]
        elif k <= q2:
            tokens += [(1, lo), (STAR, hi - lo), (2, size - hi)]
        else:
            tokens += [(1, lo), (3, hi - lo), (2, size - hi)]
    template = make_template(tokens)
    line = LineSpec(n=bs.n, active=active_intervals(template), template=template)
    validate_line(line)
    return line


def conclusion_violations(
    bs: BlockStructure,
    oracle: ColourOracle,
    pairs: PairTable,
    prefix: Word = EMPTY,
    levels: Iterable[int] | None = None,
    samples: int = 3,
    rng: random.Random | None = None,
    exhaustive_limit: int = 81,
) -> list[tuple[int, tuple[int, ...], int, int]]:
    """Check the two-sided colour equality at each pivot level.

    Enumerates all letter vectors when there are at most `exhaustive_limit`,
    otherwise draws `samples` random ones.  Returns every (level, letters,
    colour1, colour2) where the two pivot words disagree; empty means clean.
    """
    j = bs.level_of_length(prefix.length)
    if levels is None:
        levels = range(j + 1, bs.t + 1)
    if rng is None:
        rng = random.Random(0)
    violations = []
    for level in levels:
        tail = bs.t - level
        if 3**tail <= exhaustive_limit:
            vectors = list(letter_vectors(tail))
        else:
            vectors = [tuple(rng.choice((1, 2, 3)) for _ in range(tail)) for _ in range(samples)]
        for letters in vectors:
            c1 = oracle.evaluate(pivot_word(bs, prefix, pairs, level, 1, letters))
            c2 = oracle.evaluate(pivot_word(bs, prefix, pairs, level, 2, letters))
            if c1 != c2:
                violations.append((level, letters, c1, c2))
    return violations


def solve_level(
    bs: BlockStructure,
    oracle: ColourOracle,
    j: int,
    w: Word,
    budget: int = DEFAULT_BUDGET,
    seed: int = 0,
) -> LevelOutcome:
    return LineSearch(bs, oracle, budget=budget, seed=seed).solve_level(j, w)


def find_line(
    bs: BlockStructure,
    oracle: ColourOracle,
    budget: int = DEFAULT_BUDGET,
    seed: int = 0,
    progress: ProgressHook | None = None,
) -> Certificate:
    return LineSearch(bs, oracle, budget=budget, seed=seed, progress=progress).find_line()

"""Small-scale exhaustive machinery: line enumeration, colouring scans, and
backtracking searches for line-free colourings.

Everything here is independent of the run-length solver and serves as its
ground truth: a line the solver returns can be checked against a full table,
and the witness searches pin down small Hales-Jewett numbers exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterator

from .errors import BudgetExceededError
from .oracles import point_index

STAR = 0

LinePattern = tuple[int, ...]  # positions over {1..m} with STAR wildcards

DEFAULT_PATTERN_CAP = 10**7
DEFAULT_POINT_CAP = 10**6
DEFAULT_NODE_BUDGET = 10**7


def _patterns(m: int, n: int) -> Iterator[LinePattern]:
    # token order 1 < 2 < ... < m < STAR fixes the enumeration order
    for template in product((*range(1, m + 1), STAR), repeat=n):
        if STAR in template:
            yield template


def enumerate_lines(m: int, n: int, cap: int = DEFAULT_PATTERN_CAP) -> Iterator[LinePattern]:
    """All (m+1)^n - m^n line patterns of [m]^n, lexicographic, stars last."""
    if m < 2:
        raise ValueError("need m >= 2")
    if n < 1:
        raise ValueError("need n >= 1")
    if (m + 1) ** n > cap:
        raise ValueError(f"(m+1)^n = {(m + 1) ** n} exceeds the cap {cap}")
    return _patterns(m, n)


def pattern_points(pattern: LinePattern, m: int) -> list[tuple[int, ...]]:
    """The m points of a line pattern, in increasing symbol order."""
    return [tuple(x if tok == STAR else tok for tok in pattern) for x in range(1, m + 1)]


def pattern_to_text(pattern: LinePattern) -> str:
    return "".join("*" if tok == STAR else str(tok) for tok in pattern)


def find_mono_line_naive(
    colours: list[int], m: int, n: int, r: int, cap: int = DEFAULT_PATTERN_CAP
) -> tuple[LinePattern, int] | None:
    """First (lexicographic) monochromatic line of a fully tabulated colouring."""
    if len(colours) != m**n:
        raise ValueError(f"table has {len(colours)} entries, expected {m ** n}")
    if any(not 0 <= c < r for c in colours):
        raise ValueError(f"table contains colours outside 0..{r - 1}")
    for pattern in enumerate_lines(m, n, cap):
        points = pattern_points(pattern, m)
        first = colours[point_index(list(points[0]), m)]
        if all(colours[point_index(list(p), m)] == first for p in points[1:]):
            return pattern, first
    return None


@dataclass
class WitnessResult:
    status: str  # "found" | "none" | "budget"
    table: list[int] | None
    nodes: int


def hj_lower_witness(
    m: int,
    n: int,
    r: int,
    node_budget: int = DEFAULT_NODE_BUDGET,
    point_cap: int = DEFAULT_POINT_CAP,
) -> WitnessResult:
    """Depth-first search for a line-free r-colouring of [m]^n.

    Points are coloured in lexicographic order, colours tried 0..r-1, and a
    branch is pruned as soon as some fully-assigned line goes monochromatic.
    "none" means the whole space was exhausted, so no witness exists.
    """
    total = m**n
    if total > point_cap:
        raise ValueError(f"m^n = {total} exceeds the point cap {point_cap}")

    # a line's points increase with the substituted symbol, so each line is
    # fully assigned exactly when its last point gets a colour
    by_last: list[list[tuple[int, ...]]] = [[] for _ in range(total)]
    for pattern in _patterns(m, n):
        idx = tuple(point_index(list(p), m) for p in pattern_points(pattern, m))
        by_last[idx[-1]].append(idx)

    assign = [-1] * total
    nodes = 0
    i = 0
    while True:
        if i == total:
            return WitnessResult("found", assign.copy(), nodes)
        chosen = -1
        for c in range(assign[i] + 1, r):
            nodes += 1
            if nodes > node_budget:
                return WitnessResult("budget", None, nodes)
            mono = False
            for line in by_last[i]:
                if assign[line[0]] == c and all(assign[p] == c for p in line[1:-1]):
                    mono = True
                    break
            if not mono:
                chosen = c
                break
        if chosen >= 0:
            assign[i] = chosen
            i += 1
        else:
            assign[i] = -1
            i -= 1
            if i < 0:
                return WitnessResult("none", None, nodes)


def hj_number_exact(
    m: int,
    r: int,
    n_max: int,
    node_budget: int = DEFAULT_NODE_BUDGET,
    point_cap: int = DEFAULT_POINT_CAP,
) -> int | None:
    """Smallest n whose witness search proves none exists; None if n_max is too small."""
    for n in range(1, n_max + 1):
        result = hj_lower_witness(m, n, r, node_budget=node_budget, point_cap=point_cap)
        if result.status == "none":
            return n
        if result.status == "budget":
            raise BudgetExceededError(
                f"witness search for [{m}]^{n} with r={r} exhausted {node_budget} nodes"
            )
    return None

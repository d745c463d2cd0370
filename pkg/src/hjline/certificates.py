"""Self-contained proof objects: the line, the chain, and replay metadata.

A certificate records everything needed to re-check a run against its
oracle without re-running the search: block sizes, the cut-pair table, the
final collision, the colour-equality chain, and the line itself.  JSON is
the single serialization format and its field names are a stable contract.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable

from .oracles import ColourOracle, MemoOracle, OracleStats, make_oracle
from .words import MODES, SYMBOLS, Word, block_structure, encode_runs, make_word, parse_word, words_equal

STAR = 0  # wildcard token in line templates

SCHEMA_VERSION = 1


def make_template(pairs: Iterable[tuple[int, int]]) -> tuple[tuple[int, int], ...]:
    """Canonicalize (token, length) runs over {1,2,3,STAR}."""
    runs: list[tuple[int, int]] = []
    for tok, length in pairs:
        if tok != STAR and tok not in SYMBOLS:
            raise ValueError(f"bad template token {tok!r}")
        if length < 0:
            raise ValueError(f"negative run length {length}")
        if length == 0:
            continue
        if runs and runs[-1][0] == tok:
            runs[-1] = (tok, runs[-1][1] + length)
        else:
            runs.append((tok, length))
    return tuple(runs)


def encode_template(template: tuple[tuple[int, int], ...]) -> str:
    return ",".join(f"{'*' if tok == STAR else tok}x{length}" for tok, length in template)


def parse_template(text: str) -> tuple[tuple[int, int], ...]:
    text = text.strip()
    if not text:
        return ()
    pairs = []
    for token in text.split(","):
        head, _, tail = token.partition("x")
        tok = STAR if head == "*" else int(head)
        pairs.append((tok, int(tail)))
    return make_template(pairs)


def active_intervals(template: tuple[tuple[int, int], ...]) -> tuple[tuple[int, int], ...]:
    """1-based closed intervals covered by STAR runs."""
    out = []
    pos = 0
    for tok, length in template:
        if tok == STAR:
            out.append((pos + 1, pos + length))
        pos += length
    return tuple(out)


@dataclass(frozen=True)
class LineSpec:
    """A combinatorial line: fixed coordinates plus the wildcard set.

    `template` is the run form of the whole word with STAR marking wildcard
    positions; `active` lists the same positions as intervals.  Decoded
    certificates may carry inconsistent fields; verification catches that.
    """

    n: int
    active: tuple[tuple[int, int], ...]
    template: tuple[tuple[int, int], ...]


def validate_line(line: LineSpec) -> None:
    total = sum(length for _, length in line.template)
    if total != line.n:
        raise ValueError(f"template covers {total} positions, n = {line.n}")
    if make_template(line.template) != line.template:
        raise ValueError("template is not canonical")
    derived = active_intervals(line.template)
    if not derived:
        raise ValueError("line has an empty active set")
    if derived != line.active:
        raise ValueError(f"active intervals {line.active} do not match template {derived}")


def point_of_line(line: LineSpec, x: int) -> Word:
    """The line's point with every wildcard set to symbol x."""
    if x not in SYMBOLS:
        raise ValueError(f"bad symbol {x!r}")
    return make_word((x if tok == STAR else tok, length) for tok, length in line.template)


@dataclass
class LineVerification:
    colour: int | None
    mismatches: list[tuple[int, int, int, int]]  # (x1, x2, colour1, colour2)

    @property
    def ok(self) -> bool:
        return not self.mismatches


def verify_line(line: LineSpec, oracle: ColourOracle) -> LineVerification:
    """Evaluate the three points; report the shared colour or what differs."""
    colours = {x: oracle.evaluate(point_of_line(line, x)) for x in SYMBOLS}
    mismatches = [
        (x1, x2, colours[x1], colours[x2])
        for x1 in SYMBOLS
        for x2 in SYMBOLS
        if x1 < x2 and colours[x1] != colours[x2]
    ]
    return LineVerification(colour=colours[1] if not mismatches else None, mismatches=mismatches)


@dataclass(frozen=True)
class ChainStep:
    """One link of the colour-equality chain.

    `identify` steps connect two descriptions of the same word; `conclude`
    steps connect the two cut variants at the recorded pivot level, whose
    colours agree by construction of the pair table.
    """

    kind: str  # "identify" | "conclude"
    start: Word
    end: Word
    ell: int | None = None
    letters: tuple[int, ...] | None = None
    i_from: int | None = None
    i_to: int | None = None


@dataclass
class Certificate:
    r: int
    mode: str
    block_sizes: tuple[int, ...]
    pair_table: dict[int, tuple[int, int]]
    final_collision: tuple[int, int]
    chain: list[ChainStep]
    line: LineSpec
    shared_colour: int
    oracle_spec: str
    stats: OracleStats = field(default_factory=OracleStats)


# --- JSON codec -------------------------------------------------------------


def encode_certificate(cert: Certificate) -> dict:
    return {
        "version": SCHEMA_VERSION,
        "r": cert.r,
        "mode": cert.mode,
        "block_sizes": [str(s) for s in cert.block_sizes],
        "pair_table": [[k, lo, hi] for k, (lo, hi) in sorted(cert.pair_table.items())],
        "final_collision": list(cert.final_collision),
        "chain": [
            {
                "kind": step.kind,
                "from": encode_runs(step.start),
                "to": encode_runs(step.end),
                "ell": step.ell,
                "letters": list(step.letters) if step.letters is not None else None,
                "i_from": step.i_from,
                "i_to": step.i_to,
            }
            for step in cert.chain
        ],
        "line": {
            "n": cert.line.n,
            "active": [[lo, hi] for lo, hi in cert.line.active],
            "fixed": encode_template(cert.line.template),
        },
        "shared_colour": cert.shared_colour,
        "oracle": cert.oracle_spec,
        "stats": {
            "unique": cert.stats.unique_evaluations,
            "total": cert.stats.total_requests,
        },
    }


def decode_certificate(data: dict) -> Certificate:
    if data.get("version") != SCHEMA_VERSION:
        raise ValueError(f"unsupported certificate version {data.get('version')!r}")
    line_data = data["line"]
    return Certificate(
        r=int(data["r"]),
        mode=data["mode"],
        block_sizes=tuple(int(s) for s in data["block_sizes"]),
        pair_table={int(k): (int(lo), int(hi)) for k, lo, hi in data["pair_table"]},
        final_collision=(int(data["final_collision"][0]), int(data["final_collision"][1])),
        chain=[
            ChainStep(
                kind=step["kind"],
                start=parse_word(step["from"]),
                end=parse_word(step["to"]),
                ell=step["ell"],
                letters=tuple(step["letters"]) if step["letters"] is not None else None,
                i_from=step["i_from"],
                i_to=step["i_to"],
            )
            for step in data["chain"]
        ],
        line=LineSpec(
            n=int(line_data["n"]),
            active=tuple((int(lo), int(hi)) for lo, hi in line_data["active"]),
            template=parse_template(line_data["fixed"]),
        ),
        shared_colour=int(data["shared_colour"]),
        oracle_spec=data["oracle"],
        stats=OracleStats(
            unique_evaluations=int(data["stats"]["unique"]),
            total_requests=int(data["stats"]["total"]),
        ),
    )


def certificate_to_json(cert: Certificate) -> str:
    return json.dumps(encode_certificate(cert), indent=2) + "\n"


def save_certificate(cert: Certificate, path: str) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write(certificate_to_json(cert))


def load_certificate(path: str) -> Certificate:
    with open(path, "r", encoding="ascii") as fh:
        return decode_certificate(json.load(fh))


# --- verification -----------------------------------------------------------


@dataclass
class CheckResult:
    name: str
    status: str  # "pass" | "fail" | "skip"
    detail: str


@dataclass
class VerificationReport:
    checks: list[CheckResult]

    @property
    def ok(self) -> bool:
        return all(check.status != "fail" for check in self.checks)

    def failed(self) -> list[str]:
        return [check.name for check in self.checks if check.status == "fail"]


def verify_certificate(
    cert: Certificate,
    oracle: ColourOracle | None = None,
    spec_override: str | None = None,
) -> VerificationReport:
    """Re-check every claim a certificate makes, one named result per check.

    With an `exec:` oracle only the word-identity and line checks run; the
    rest are reported as skipped since the process is not replayable.
    """
    from . import solver  # deferred: solver builds on this module's types

    spec = spec_override or cert.oracle_spec
    owns_oracle = oracle is None
    if oracle is None:
        oracle = make_oracle(spec, cert.r)
    memo = oracle if isinstance(oracle, MemoOracle) else MemoOracle(oracle)
    replayable = not spec.startswith("exec:")

    bs = solver.structure_from_sizes(cert.r, cert.mode, cert.block_sizes)
    q1, q2 = cert.final_collision
    threes = cert.r - q2

    def check_structure() -> tuple[bool, str]:
        if cert.mode not in MODES:
            return False, f"unknown mode {cert.mode!r}"
        if cert.r < 1:
            return False, f"bad colour count r={cert.r}"
        if len(cert.block_sizes) != cert.r:
            return False, f"{len(cert.block_sizes)} block sizes for t={cert.r}"
        if any(s < 1 for s in cert.block_sizes):
            return False, "non-positive block size"
        if cert.mode != "custom":
            expected = block_structure(cert.r, cert.mode).sizes
            if expected != cert.block_sizes:
                return False, f"{cert.mode} mode sizes should be {expected}"
        if cert.line.n != sum(cert.block_sizes):
            return False, f"line.n={cert.line.n} but blocks sum to {sum(cert.block_sizes)}"
        return True, f"mode={cert.mode}, n={cert.line.n}"

    def check_pair_bounds() -> tuple[bool, str]:
        expected_keys = set(range(1, cert.r + 1))
        if set(cert.pair_table) != expected_keys:
            return False, f"pair table covers {sorted(cert.pair_table)}, expected {sorted(expected_keys)}"
        for k, (lo, hi) in sorted(cert.pair_table.items()):
            if not 0 <= lo < hi <= cert.block_sizes[k - 1]:
                return False, f"pair ({lo},{hi}) out of range for block {k} of size {cert.block_sizes[k-1]}"
        return True, f"{len(cert.pair_table)} pairs in range"

    def check_chain_identify() -> tuple[bool, str]:
        if not cert.chain:
            return False, "empty chain"
        for idx in range(1, len(cert.chain)):
            if not words_equal(cert.chain[idx].start, cert.chain[idx - 1].end):
                return False, f"chain breaks between steps {idx-1} and {idx}"
        for idx, step in enumerate(cert.chain):
            if step.kind == "identify" and not words_equal(step.start, step.end):
                return False, f"identify step {idx} connects different words"
            if step.kind not in ("identify", "conclude"):
                return False, f"step {idx} has unknown kind {step.kind!r}"
        return True, f"{len(cert.chain)} steps contiguous, identifications exact"

    def check_chain_conclude() -> tuple[bool, str]:
        count = 0
        for idx, step in enumerate(cert.chain):
            if step.kind != "conclude":
                continue
            count += 1
            if step.ell is None or step.letters is None:
                return False, f"conclude step {idx} lacks its pivot level or letters"
            hi_word = solver.pivot_word(bs, Word(), cert.pair_table, step.ell, 2, step.letters)
            lo_word = solver.pivot_word(bs, Word(), cert.pair_table, step.ell, 1, step.letters)
            if not words_equal(step.start, hi_word) or not words_equal(step.end, lo_word):
                return False, f"conclude step {idx} words do not match the pair table"
            c_start = memo.evaluate(step.start)
            c_end = memo.evaluate(step.end)
            if c_start != c_end:
                return False, f"conclude step {idx} colours differ: {c_start} vs {c_end}"
        return True, f"{count} conclusion steps colour-equal"

    def check_endpoint_colours() -> tuple[bool, str]:
        probe_hi = solver.pivot_word(bs, Word(), cert.pair_table, 0, 1, (1,) * q2 + (3,) * threes)
        probe_lo = solver.pivot_word(bs, Word(), cert.pair_table, 0, 1, (1,) * q1 + (3,) * (cert.r - q1))
        closing = solver.pivot_word(
            bs, Word(), cert.pair_table, 0, 1, (1,) * q1 + (2,) * (q2 - q1) + (3,) * threes
        )
        if not words_equal(cert.chain[0].start, probe_hi):
            return False, "chain does not start at the collision's upper probe word"
        if not words_equal(cert.chain[-1].end, closing):
            return False, "chain does not end at the twos-filled closing word"
        for label, word in (("start", probe_hi), ("end", closing), ("lower probe", probe_lo)):
            colour = memo.evaluate(word)
            if colour != cert.shared_colour:
                return False, f"{label} word has colour {colour}, certificate says {cert.shared_colour}"
        return True, f"all endpoints have colour {cert.shared_colour}"

    def check_line_monochromatic() -> tuple[bool, str]:
        validate_line(cert.line)
        result = verify_line(cert.line, memo)
        if not result.ok:
            x1, x2, c1, c2 = result.mismatches[0]
            return False, f"points x={x1} and x={x2} have colours {c1} vs {c2}"
        return True, f"three points share colour {result.colour}"

    def check_line_recomputation() -> tuple[bool, str]:
        recomputed = solver.line_from_collision(bs, cert.pair_table, q1, q2)
        if recomputed != cert.line:
            return False, "stored line differs from recomputation"
        return True, "line matches its recomputation"

    plan = [
        ("structure", check_structure, replayable),
        ("pair_bounds", check_pair_bounds, replayable),
        ("chain_identify", check_chain_identify, True),
        ("chain_conclude", check_chain_conclude, replayable),
        ("endpoint_colours", check_endpoint_colours, replayable),
        ("line_monochromatic", check_line_monochromatic, True),
        ("line_recomputation", check_line_recomputation, replayable),
    ]

    checks: list[CheckResult] = []
    try:
        for name, fn, enabled in plan:
            if not enabled:
                checks.append(CheckResult(name, "skip", "exec oracles are not replayable"))
                continue
            try:
                ok, detail = fn()
            except Exception as exc:  # any defect surfaces as a named failure
                ok, detail = False, f"{type(exc).__name__}: {exc}"
            checks.append(CheckResult(name, "pass" if ok else "fail", detail))
    finally:
        if owns_oracle:
            memo.close()
    return VerificationReport(checks=checks)

"""Colouring oracles over [3]^n, plus memoization and call counting.

An oracle maps a Word to a colour id in {0, ..., r-1} and must be
deterministic for the lifetime of a run.  Oracles are created from spec
strings (`const:c`, `count`, `hash:seed`, `table:path`, `exec:cmd`) so a
certificate can name the colouring it was produced against.
"""

from __future__ import annotations

import os
import queue
import shlex
import subprocess
import threading
from dataclasses import dataclass

from .errors import OracleProcessError, OracleRangeError, OracleSpecError
from .words import Word, encode_runs

DEFAULT_TIMEOUT_MS = 10_000
TABLE_POINT_CAP = 10**6

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3
_U64 = (1 << 64) - 1


def fnv1a64(data: bytes) -> int:
    """FNV-1a 64-bit; pinned so hash-oracle colours reproduce everywhere."""
    h = _FNV_OFFSET
    for b in data:
        h = ((h ^ b) * _FNV_PRIME) & _U64
    return h


@dataclass
class OracleStats:
    unique_evaluations: int = 0
    total_requests: int = 0


class ColourOracle:
    """Base oracle: deterministic Word -> colour id below r."""

    def __init__(self, r: int, description: str):
        if r < 1:
            raise OracleSpecError("oracle needs r >= 1")
        self.r = r
        self.description = description

    def evaluate(self, word: Word) -> int:
        raise NotImplementedError

    def close(self) -> None:
        pass

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


class ConstOracle(ColourOracle):
    def __init__(self, colour: int, r: int):
        super().__init__(r, f"const:{colour}")
        if not 0 <= colour < r:
            raise OracleSpecError(f"constant colour {colour} not below r={r}")
        self.colour = colour

    def evaluate(self, word: Word) -> int:
        return self.colour


class CountOracle(ColourOracle):
    """Colour = (#ones + 2 * #threes) mod r, computed from runs."""

    def __init__(self, r: int):
        super().__init__(r, "count")

    def evaluate(self, word: Word) -> int:
        total = 0
        for sym, length in word.runs:
            if sym == 1:
                total += length
            elif sym == 3:
                total += 2 * length
        return total % self.r


class HashOracle(ColourOracle):
    """FNV-1a 64 over (8-byte big-endian seed || canonical run encoding), mod r."""

    def __init__(self, seed: int, r: int):
        super().__init__(r, f"hash:{seed}")
        if seed < 0:
            raise OracleSpecError("hash seed must be non-negative")
        self._prefix = (seed & _U64).to_bytes(8, "big")

    def evaluate(self, word: Word) -> int:
        return fnv1a64(self._prefix + encode_runs(word).encode("ascii")) % self.r


def point_index(symbols: list[int], m: int) -> int:
    """Flat index of a cube point, most-significant coordinate first."""
    idx = 0
    for sym in symbols:
        idx = idx * m + (sym - 1)
    return idx


class TableOracle(ColourOracle):
    """Explicit colour table for small cubes, loaded from a text file."""

    def __init__(self, path: str, r: int):
        super().__init__(r, f"table:{path}")
        try:
            with open(path, "r", encoding="ascii") as fh:
                lines = fh.read().split()
        except OSError as exc:
            raise OracleSpecError(f"cannot read table file {path}: {exc}") from None
        if len(lines) < 3:
            raise OracleSpecError(f"table file {path} is truncated")
        try:
            m, n, file_r = int(lines[0]), int(lines[1]), int(lines[2])
            colours = [int(tok) for tok in lines[3:]]
        except ValueError:
            raise OracleSpecError(f"table file {path} has non-integer entries") from None
        if m < 2 or n < 1:
            raise OracleSpecError(f"table file {path} has bad header m={m} n={n}")
        if m**n > TABLE_POINT_CAP:
            raise OracleSpecError(f"table file {path} exceeds the {TABLE_POINT_CAP}-point cap")
        if file_r != r:
            raise OracleSpecError(f"table file {path} declares r={file_r}, expected {r}")
        if len(colours) != m**n:
            raise OracleSpecError(
                f"table file {path} has {len(colours)} entries, expected {m**n}"
            )
        if any(not 0 <= c < r for c in colours):
            raise OracleSpecError(f"table file {path} contains colours outside 0..{r-1}")
        self.m = m
        self.n = n
        self.colours = colours

    def evaluate(self, word: Word) -> int:
        if word.length != self.n:
            raise OracleRangeError(
                f"table oracle is for dimension {self.n}, got word of length {word.length}"
            )
        symbols = word.expand()
        if any(sym > self.m for sym in symbols):
            raise OracleRangeError(f"table oracle alphabet is [{self.m}]")
        return self.colours[point_index(symbols, self.m)]


def write_table(path: str, m: int, n: int, r: int, colours: list[int]) -> None:
    """Write a colour table in the format TableOracle reads."""
    if len(colours) != m**n:
        raise ValueError(f"need {m**n} colours, got {len(colours)}")
    with open(path, "w", encoding="ascii") as fh:
        fh.write(f"{m} {n} {r}\n")
        for c in colours:
            fh.write(f"{c}\n")


class ExecOracle(ColourOracle):
    """Oracle backed by a child process speaking the line protocol.

    Child: print `HJ-ORACLE 1 <r>` on startup, then answer each
    `EVAL <run-encoding>` line with a single colour line.  Requests are
    serialized over the pipe; HJLINE_ORACLE_TIMEOUT_MS bounds each wait.
    """

    def __init__(self, command: str, r: int):
        super().__init__(r, f"exec:{command}")
        timeout_ms = int(os.environ.get("HJLINE_ORACLE_TIMEOUT_MS", DEFAULT_TIMEOUT_MS))
        self._timeout = timeout_ms / 1000.0
        try:
            self._proc = subprocess.Popen(
                shlex.split(command),
                stdin=subprocess.PIPE,
                stdout=subprocess.PIPE,
                text=True,
                bufsize=1,
            )
        except OSError as exc:
            raise OracleProcessError(f"cannot start oracle process: {exc}") from None
        self._lines: queue.Queue[str | None] = queue.Queue()
        self._reader = threading.Thread(target=self._pump, daemon=True)
        self._reader.start()
        try:
            self._handshake()
        except Exception:
            self.close()
            raise

    def _pump(self) -> None:
        assert self._proc.stdout is not None
        for line in self._proc.stdout:
            self._lines.put(line.rstrip("\n"))
        self._lines.put(None)

    def _read_line(self) -> str:
        try:
            line = self._lines.get(timeout=self._timeout)
        except queue.Empty:
            self.close()
            raise OracleProcessError(
                f"oracle process did not reply within {self._timeout:.3f}s"
            ) from None
        if line is None:
            raise OracleProcessError("oracle process closed its output stream")
        return line

    def _handshake(self) -> None:
        parts = self._read_line().split()
        if len(parts) != 3 or parts[0] != "HJ-ORACLE" or parts[1] != "1" or not parts[2].isdigit():
            raise OracleProcessError(f"bad oracle handshake {' '.join(parts)!r}")
        if int(parts[2]) != self.r:
            raise OracleProcessError(
                f"oracle process colours with r={parts[2]}, expected {self.r}"
            )

    def evaluate(self, word: Word) -> int:
        if self._proc.poll() is not None:
            raise OracleProcessError("oracle process has exited")
        assert self._proc.stdin is not None
        try:
            self._proc.stdin.write(f"EVAL {encode_runs(word)}\n")
            self._proc.stdin.flush()
        except (BrokenPipeError, ValueError) as exc:
            raise OracleProcessError(f"cannot write to oracle process: {exc}") from None
        reply = self._read_line()
        try:
            colour = int(reply)
        except ValueError:
            raise OracleRangeError(f"oracle replied {reply!r}, expected a colour") from None
        if not 0 <= colour < self.r:
            raise OracleRangeError(f"oracle replied colour {colour}, expected < {self.r}")
        return colour

    def close(self) -> None:
        proc = getattr(self, "_proc", None)
        if proc is None or proc.poll() is not None:
            return
        if proc.stdin is not None:
            try:
                proc.stdin.close()
            except OSError:
                pass
        try:
            proc.wait(timeout=2)
        except subprocess.TimeoutExpired:
            proc.kill()
            proc.wait()


class MemoOracle(ColourOracle):
    """Wrapper adding memoization (by canonical run encoding) and call counts.

    Also range-checks the wrapped oracle, so anything downstream can rely on
    colours being below r.  Single-threaded, like the solver that drives it.
    """

    def __init__(self, inner: ColourOracle):
        super().__init__(inner.r, inner.description)
        self.inner = inner
        self._memo: dict[str, int] = {}
        self.stats = OracleStats()

    def evaluate(self, word: Word) -> int:
        key = encode_runs(word)
        self.stats.total_requests += 1
        cached = self._memo.get(key)
        if cached is not None:
            return cached
        colour = self.inner.evaluate(word)
        if not 0 <= colour < self.r:
            raise OracleRangeError(
                f"oracle {self.description!r} returned {colour}, expected < {self.r}"
            )
        self.stats.unique_evaluations += 1
        self._memo[key] = colour
        return colour

    def close(self) -> None:
        self.inner.close()


def with_memo_and_counting(oracle: ColourOracle) -> MemoOracle:
    return MemoOracle(oracle)


def make_oracle(spec: str, r: int) -> ColourOracle:
    """Build an oracle from its spec string."""
    scheme, _, arg = spec.partition(":")
    if scheme == "const":
        try:
            colour = int(arg)
        except ValueError:
            raise OracleSpecError(f"bad const colour {arg!r}") from None
        return ConstOracle(colour, r)
    if scheme == "count":
        if arg:
            raise OracleSpecError("count oracle takes no argument")
        return CountOracle(r)
    if scheme == "hash":
        try:
            seed = int(arg)
        except ValueError:
            raise OracleSpecError(f"bad hash seed {arg!r}") from None
        return HashOracle(seed, r)
    if scheme == "table":
        if not arg:
            raise OracleSpecError("table oracle needs a file path")
        return TableOracle(arg, r)
    if scheme == "exec":
        if not arg:
            raise OracleSpecError("exec oracle needs a command")
        return ExecOracle(arg, r)
    raise OracleSpecError(f"unknown oracle spec {spec!r}")

import random

import pytest

from hjline.words import Word, make_word

CHILD_ORACLE = r"""
import sys
import time

mode = sys.argv[1] if len(sys.argv) > 1 else "ones"
r = int(sys.argv[2]) if len(sys.argv) > 2 else 2

if mode == "bad-handshake":
    print("HELLO", flush=True)
else:
    print(f"HJ-ORACLE 1 {r}", flush=True)

for line in sys.stdin:
    parts = line.split(None, 1)
    if not parts or parts[0] != "EVAL":
        break
    enc = parts[1].strip() if len(parts) > 1 else ""
    ones = sum(int(tok[2:]) for tok in enc.split(",") if tok and tok[0] == "1")
    if mode == "ones":
        print(ones % r, flush=True)
    elif mode == "out-of-range":
        print(99, flush=True)
    elif mode == "garbage":
        print("purple", flush=True)
    elif mode == "slow":
        time.sleep(5)
        print(ones % r, flush=True)
    elif mode == "die":
        sys.exit(3)
"""


@pytest.fixture(scope="session")
def child_oracle_script(tmp_path_factory):
    path = tmp_path_factory.mktemp("oracle") / "child.py"
    path.write_text(CHILD_ORACLE)
    return str(path)


def random_word(rng: random.Random, max_runs: int = 8, max_run_len: int = 50) -> Word:
    pairs = [
        (rng.choice((1, 2, 3)), rng.randint(1, max_run_len))
        for _ in range(rng.randint(0, max_runs))
    ]
    return make_word(pairs)


def random_huge_word(rng: random.Random, max_runs: int = 8) -> Word:
    pairs = [
        (rng.choice((1, 2, 3)), rng.randint(1, 10**12))
        for _ in range(rng.randint(0, max_runs))
    ]
    return make_word(pairs)

"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with `pytest -s tests/test_acceptance.py -v` to see the lines.
"""

import copy
import sys
import time

from test_certificates import MUTATIONS

from hjline.bruteforce import enumerate_lines, hj_lower_witness, hj_number_exact
from hjline.certificates import certificate_to_json, verify_certificate
from hjline.oracles import MemoOracle, make_oracle, write_table
from hjline.solver import conclusion_violations, find_line
from hjline.words import block_structure

HASH_SEEDS = range(100)


def report(num: int, title: str, ok: bool, detail: str) -> bool:
    print(f"ACCEPTANCE {num} ({title}): {'PASS' if ok else 'FAIL'} — {detail}")
    return ok


def run_and_check(bs, spec, unique_cap, time_cap=1.0):
    oracle = make_oracle(spec, bs.r)
    start = time.perf_counter()
    cert = find_line(bs, oracle)
    elapsed = time.perf_counter() - start
    problems = []
    if not verify_certificate(cert).ok:
        problems.append(f"{spec}: certificate failed verification")
    if cert.stats.unique_evaluations > unique_cap:
        problems.append(f"{spec}: {cert.stats.unique_evaluations} unique evaluations > {unique_cap}")
    if elapsed >= time_cap:
        problems.append(f"{spec}: took {elapsed:.3f}s")
    return cert, problems


class TestAcceptance:
    def test_1_end_to_end_r2_paper(self):
        bs = block_structure(2, "paper")
        problems = []
        worst = 0
        for spec in ["const:0", "count"] + [f"hash:{s}" for s in HASH_SEEDS]:
            cert, issues = run_and_check(bs, spec, unique_cap=500)
            problems += issues
            worst = max(worst, cert.stats.unique_evaluations)
        ok = not problems
        assert report(1, "r=2 paper, 102 oracles", ok,
                      f"max unique evaluations {worst} (cap 500)" if ok else "; ".join(problems))

    def test_2_end_to_end_r2_minimal(self):
        bs = block_structure(2, "minimal")
        problems = []
        worst = 0
        for spec in ["const:0", "count"] + [f"hash:{s}" for s in HASH_SEEDS]:
            cert, issues = run_and_check(bs, spec, unique_cap=200)
            problems += issues
            worst = max(worst, cert.stats.unique_evaluations)
        ok = not problems
        assert report(2, "r=2 minimal, 102 oracles", ok,
                      f"max unique evaluations {worst} (cap 200)" if ok else "; ".join(problems))

    def test_3_r1_every_oracle_family(self, tmp_path, child_oracle_script):
        table_path = tmp_path / "r1.table"
        write_table(str(table_path), 3, 1, 1, [0, 0, 0])
        specs = [
            "const:0",
            "count",
            "hash:5",
            f"table:{table_path}",
            f"exec:{sys.executable} {child_oracle_script} ones 1",
        ]
        bs = block_structure(1, "paper")
        problems = []
        for spec in specs:
            oracle = make_oracle(spec, 1)
            try:
                cert = find_line(bs, oracle)
            finally:
                oracle.close()
            if cert.line.active != ((1, 1),):
                problems.append(f"{spec}: active set {cert.line.active}")
            if cert.line.n != 1:
                problems.append(f"{spec}: n={cert.line.n}")
        ok = not problems
        assert report(3, "r=1 boundary, all oracle families", ok,
                      f"{len(specs)} families, I = [1,1]" if ok else "; ".join(problems))

    def test_4_statistical_r3_minimal(self):
        bs = block_structure(3, "minimal")
        assert bs.sizes[0] > 1.5 * 10**9
        successes = 0
        problems = []
        max_unique = 0
        start = time.perf_counter()
        for seed in range(1, 11):
            try:
                cert = find_line(bs, make_oracle(f"hash:{seed}", 3), budget=10**8)
            except Exception as exc:
                problems.append(f"hash:{seed}: {type(exc).__name__}")
                continue
            successes += 1
            max_unique = max(max_unique, cert.stats.unique_evaluations)
            rep = verify_certificate(cert)
            if not rep.ok:
                problems.append(f"hash:{seed}: verification failed {rep.failed()}")
        elapsed = time.perf_counter() - start
        ok = successes >= 8 and not any("verification" in p for p in problems)
        assert report(4, "r=3 minimal, 10 hash seeds", ok,
                      f"{successes}/10 succeeded, max unique {max_unique}, {elapsed:.1f}s"
                      if ok else "; ".join(problems))

    def test_5_conclusion_property_suite(self):
        violations = []
        runs = 0
        for mode in ("paper", "minimal"):
            bs = block_structure(2, mode)
            for spec in ["const:0", "count"] + [f"hash:{s}" for s in HASH_SEEDS]:
                oracle = MemoOracle(make_oracle(spec, 2))
                cert = find_line(bs, oracle)
                found = conclusion_violations(bs, oracle, cert.pair_table)
                if found:
                    violations.append((mode, spec, found))
                runs += 1
        ok = not violations
        assert report(5, "conclusion property, exhaustive", ok,
                      f"{runs} runs, 0 violations" if ok else f"violations: {violations[:3]}")

    def test_6_bruteforce_ground_truth(self):
        start = time.perf_counter()
        problems = []
        for m in (2, 3):
            for n in range(1, 7):
                count = sum(1 for _ in enumerate_lines(m, n))
                if count != (m + 1) ** n - m**n:
                    problems.append(f"count({m},{n}) = {count}")
        if hj_number_exact(2, 2, 3) != 2:
            problems.append("HJ(2,2) != 2")
        if hj_number_exact(3, 1, 2) != 1:
            problems.append("HJ(3,1) != 1")
        witness = hj_lower_witness(3, 3, 2, node_budget=10**7)
        if witness.status != "found":
            problems.append(f"[3]^3 witness search: {witness.status}")
        elapsed = time.perf_counter() - start
        ok = not problems and elapsed < 60
        assert report(6, "brute-force ground truth", ok,
                      f"witness in {witness.nodes} nodes, {elapsed:.1f}s total"
                      if ok else "; ".join(problems) or f"too slow: {elapsed:.1f}s")

    def test_7_mutation_suite(self):
        bs = block_structure(2, "minimal")
        cert = find_line(bs, make_oracle("hash:7", 2))
        problems = []
        for name, mutator, expected in MUTATIONS:
            rep = verify_certificate(mutator(copy.deepcopy(cert)))
            if rep.ok:
                problems.append(f"{name}: accepted")
            elif not set(rep.failed()) & expected:
                problems.append(f"{name}: failed {rep.failed()}, expected one of {expected}")
        ok = not problems and len(MUTATIONS) >= 10
        assert report(7, f"{len(MUTATIONS)} certificate mutations", ok,
                      "each rejected by the expected check" if ok else "; ".join(problems))

    def test_8_determinism(self):
        problems = []
        for mode in ("paper", "minimal"):
            bs = block_structure(2, mode)
            for spec in ("hash:7", "count"):
                first = certificate_to_json(find_line(bs, make_oracle(spec, 2), seed=3))
                second = certificate_to_json(find_line(bs, make_oracle(spec, 2), seed=3))
                if first != second:
                    problems.append(f"{mode}/{spec}: certificates differ")
        w1 = hj_lower_witness(3, 3, 2)
        w2 = hj_lower_witness(3, 3, 2)
        if (w1.table, w1.nodes) != (w2.table, w2.nodes):
            problems.append("witness search not deterministic")
        ok = not problems
        assert report(8, "byte-identical reruns", ok,
                      "certificates and searches reproduce" if ok else "; ".join(problems))

import sys

import pytest

from hjline.errors import OracleProcessError, OracleRangeError
from hjline.oracles import make_oracle
from hjline.solver import find_line
from hjline.words import block_structure, parse_word, word_from_symbols


def spec_for(script: str, mode: str, r: int) -> str:
    return f"exec:{sys.executable} {script} {mode} {r}"


class TestExecProtocol:
    def test_evaluate_matches_child_logic(self, child_oracle_script):
        with make_oracle(spec_for(child_oracle_script, "ones", 2), 2) as oracle:
            assert oracle.evaluate(word_from_symbols([1, 1, 2])) == 0
            assert oracle.evaluate(parse_word("1x3,2x2")) == 1
            assert oracle.evaluate(parse_word("")) == 0

    def test_huge_words_transmit_as_runs(self, child_oracle_script):
        with make_oracle(spec_for(child_oracle_script, "ones", 2), 2) as oracle:
            assert oracle.evaluate(parse_word("1x1000000001,2x7")) == 1

    def test_bad_handshake(self, child_oracle_script):
        with pytest.raises(OracleProcessError):
            make_oracle(spec_for(child_oracle_script, "bad-handshake", 2), 2)

    def test_r_mismatch(self, child_oracle_script):
        with pytest.raises(OracleProcessError):
            make_oracle(spec_for(child_oracle_script, "ones", 3), 2)

    def test_out_of_range_reply(self, child_oracle_script):
        with make_oracle(spec_for(child_oracle_script, "out-of-range", 2), 2) as oracle:
            with pytest.raises(OracleRangeError):
                oracle.evaluate(word_from_symbols([1]))

    def test_garbage_reply(self, child_oracle_script):
        with make_oracle(spec_for(child_oracle_script, "garbage", 2), 2) as oracle:
            with pytest.raises(OracleRangeError):
                oracle.evaluate(word_from_symbols([1]))

    def test_timeout(self, child_oracle_script, monkeypatch):
        monkeypatch.setenv("HJLINE_ORACLE_TIMEOUT_MS", "300")
        with make_oracle(spec_for(child_oracle_script, "slow", 2), 2) as oracle:
            with pytest.raises(OracleProcessError):
                oracle.evaluate(word_from_symbols([1]))

    def test_dead_process(self, child_oracle_script):
        oracle = make_oracle(spec_for(child_oracle_script, "die", 2), 2)
        with pytest.raises((OracleProcessError, OracleRangeError)):
            oracle.evaluate(word_from_symbols([1]))
            oracle.evaluate(word_from_symbols([2]))
        oracle.close()

    def test_missing_command(self):
        with pytest.raises(OracleProcessError):
            make_oracle("exec:/no/such/binary-hopefully", 2)


class TestExecSolve:
    def test_find_line_over_pipe(self, child_oracle_script):
        bs = block_structure(2, "minimal")
        with make_oracle(spec_for(child_oracle_script, "ones", 2), 2) as oracle:
            cert = find_line(bs, oracle)
        assert cert.oracle_spec.startswith("exec:")
        assert cert.stats.unique_evaluations <= 200

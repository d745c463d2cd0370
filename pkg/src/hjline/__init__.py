"""Monochromatic combinatorial line finder for r-colourings of [3]^n.

The cube dimension comes from a block structure whose sizes guarantee (or,
in custom mode, merely permit) the pigeonhole collisions the search needs.
Runs produce JSON certificates that verify independently of the search.
"""

from .bruteforce import (
    WitnessResult,
    enumerate_lines,
    find_mono_line_naive,
    hj_lower_witness,
    hj_number_exact,
    pattern_points,
    pattern_to_text,
)
from .certificates import (
    Certificate,
    ChainStep,
    CheckResult,
    LineSpec,
    LineVerification,
    VerificationReport,
    certificate_to_json,
    decode_certificate,
    encode_certificate,
    load_certificate,
    point_of_line,
    save_certificate,
    validate_line,
    verify_certificate,
    verify_line,
)
from .errors import (
    BudgetExceededError,
    NoCollisionError,
    OracleError,
    OracleProcessError,
    OracleRangeError,
    OracleSpecError,
)
from .oracles import (
    ColourOracle,
    MemoOracle,
    OracleStats,
    make_oracle,
    with_memo_and_counting,
    write_table,
)
from .solver import (
    DEFAULT_BUDGET,
    CompositeColour,
    LevelOutcome,
    LineSearch,
    build_chain,
    conclusion_violations,
    extend_with_letters,
    find_line,
    line_from_collision,
    pivot_word,
    solve_level,
)
from .words import (
    BlockStructure,
    Cut,
    Tri,
    Word,
    assemble,
    block_structure,
    colour_space_size,
    encode_runs,
    extend_cut,
    make_word,
    parse_word,
    word_from_symbols,
    words_equal,
)

__version__ = "0.1.0"

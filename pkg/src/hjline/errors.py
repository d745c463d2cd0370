"""Exception types shared across the package."""


class NoCollisionError(Exception):
    """A pigeonhole scan exhausted all candidates without finding a repeat.

    Only reachable in custom mode (undersized blocks) or with a broken oracle.
    """


class BudgetExceededError(Exception):
    """An evaluation or search-node budget was exhausted before completion."""


class OracleError(Exception):
    """Base class for oracle construction and evaluation failures."""


class OracleSpecError(OracleError):
    """The oracle spec string or its backing file is invalid."""


class OracleProcessError(OracleError):
    """An external oracle process failed to handshake, reply in time, or stay alive."""


class OracleRangeError(OracleError):
    """An oracle returned a colour outside {0, ..., r-1} or an unparseable reply."""

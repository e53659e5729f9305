# errors.py
from typing import List, Optional


class RedlabError(Exception):
    """Base class for every domain error; `code` is the stable error kind."""

    code = "invalid-input"

    def __init__(self, message: str):
        super().__init__(message)
        self.message = message


class InvalidInputError(RedlabError):
    code = "invalid-input"


class OracleBoundExceededError(RedlabError):
    code = "oracle-bound-exceeded"


class NotSuccessiveError(RedlabError):
    code = "not-successive"


class NotDisjointError(RedlabError):
    code = "not-disjoint"


class InvalidExponentsError(RedlabError):
    code = "invalid-exponents"


class DescriptorOnlyError(RedlabError):
    code = "descriptor-only"


class InvalidPointError(RedlabError):
    code = "invalid-point"


class DomainMismatchError(RedlabError):
    code = "domain-mismatch"


class TypeMismatchError(RedlabError):
    code = "type-mismatch"


class ScheduleMismatchError(RedlabError):
    code = "schedule-mismatch"


class ValueOutsideIntervalError(RedlabError):
    code = "value-outside-P"


class UnknownNodeError(RedlabError):
    code = "unknown-node"


class StrictCycleError(RedlabError):
    code = "strict-cycle"


class InfeasibleScheduleError(RedlabError):
    code = "infeasible"

    def __init__(self, message: str, clause: Optional[str] = None):
        super().__init__(message)
        self.clause = clause


class ScheduleInvalidError(RedlabError):
    code = "schedule-invalid"

    def __init__(self, message: str, clauses: Optional[List[str]] = None):
        super().__init__(message)
        self.clauses = clauses or []

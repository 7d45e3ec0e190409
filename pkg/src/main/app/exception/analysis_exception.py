# SPDX-License-Identifier: MIT
"""Analysis exception for the symbolic layers."""

from typing import Any

from fastlib.exception import ErrorDetail
from fastlib.exception.base import BaseException


class AnalysisErrorCode:
    """Symbolic analysis error codes."""

    EXPANSION_OVERFLOW = ErrorDetail(
        code=2001, message="Expansion exceeds the configured node limit"
    )
    SAMPLING_FAILURE = ErrorDetail(
        code=2002, message="No valid sample point found"
    )
    DOMAIN_ERROR = ErrorDetail(code=2003, message="Evaluation outside the domain")
    UNBOUND_SYMBOL = ErrorDetail(code=2004, message="Unbound symbol")
    JET_ORDER_OVERFLOW = ErrorDetail(
        code=2005, message="Jet order exceeds the configured maximum"
    )
    ORDER_OUT_OF_RANGE = ErrorDetail(
        code=2006, message="Prolongation order out of range"
    )
    SEPARATION_FAILURE = ErrorDetail(
        code=2007, message="Substituted ansatz does not separate"
    )
    UNBOUND_PARAMETER = ErrorDetail(
        code=2008, message="Candidate contains an unbound parameter"
    )
    INVALID_FAMILY = ErrorDetail(code=2009, message="Invalid family parameters")


class AnalysisException(BaseException):
    def __init__(
        self,
        code: AnalysisErrorCode,
        message: str | None = None,
        details: Any | None = None,
    ):
        super().__init__(code=code, message=message, details=details)
        self.code = code
        self.message = message or code.message
        self.details = details

# SPDX-License-Identifier: MIT
"""Parse exception for the expression grammar."""

from fastlib.exception import ErrorDetail
from fastlib.exception.base import BaseException


class ParseErrorCode:
    """Expression grammar error codes."""

    SYNTAX_ERROR = ErrorDetail(code=1001, message="Syntax error")
    UNKNOWN_SYMBOL = ErrorDetail(code=1002, message="Unknown symbol class")
    USAGE_ERROR = ErrorDetail(code=1003, message="Invalid command usage")


class ExprParseException(BaseException):
    def __init__(
        self,
        code: ParseErrorCode,
        message: str | None = None,
        position: int | None = None,
    ):
        details = None if position is None else {"position": position}
        super().__init__(code=code, message=message, details=details)
        self.code = code
        self.message = message or code.message
        self.details = details
        self.position = position

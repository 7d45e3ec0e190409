# SPDX-License-Identifier: MIT
"""Numeric exception for integrators, quadrature and special functions."""

from typing import Any

from fastlib.exception import ErrorDetail
from fastlib.exception.base import BaseException


class NumericErrorCode:
    """Numerical back-end error codes."""

    STEP_UNDERFLOW = ErrorDetail(code=3001, message="Step size underflow")
    INVALID_INITIAL_DATA = ErrorDetail(code=3002, message="Invalid initial data")
    DOMAIN_VIOLATION = ErrorDetail(code=3003, message="Integrand is not positive")
    QUADRATURE_NONCONVERGENCE = ErrorDetail(
        code=3004, message="Quadrature did not converge"
    )
    POLE_PROXIMITY = ErrorDetail(code=3005, message="Too close to a lattice pole")
    BLOW_UP = ErrorDetail(code=3006, message="Solution blows up inside the range")
    OUT_OF_SPAN = ErrorDetail(code=3007, message="Point outside the sampled span")
    INTEGRAND_POLE = ErrorDetail(
        code=3008, message="Integration path crosses a zero of h'"
    )


class NumericException(BaseException):
    code: NumericErrorCode
    message: str | None = None
    details: Any | None = None

    def __init__(
        self,
        code: NumericErrorCode,
        message: str | None = None,
        details: Any | None = None,
    ):
        super().__init__(code=code, message=message, details=details)
        self.code = code
        self.message = message or code.message
        self.details = details

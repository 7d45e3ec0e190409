"""Export exception symbols"""

from src.main.app.exception.analysis_exception import (
    AnalysisErrorCode,
    AnalysisException,
)
from src.main.app.exception.numeric_exception import (
    NumericErrorCode,
    NumericException,
)
from src.main.app.exception.parse_exception import (
    ExprParseException,
    ParseErrorCode,
)

__all__ = [
    "AnalysisErrorCode",
    "AnalysisException",
    "ExprParseException",
    "NumericErrorCode",
    "NumericException",
    "ParseErrorCode",
]

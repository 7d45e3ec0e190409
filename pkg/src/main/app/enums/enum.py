# SPDX-License-Identifier: MIT
"""Project enumeration information"""

from enum import Enum


class FamilyTag(str, Enum):
    """Functional forms of f(u)"""

    ARBITRARY = "arbitrary"
    POWER = "power"
    LOG = "log"
    EXP = "exp"
    QUADRATIC = "quadratic"


class Method(str, Enum):
    """Symmetry method"""

    CLASSICAL = "classical"
    NONCLASSICAL = "nonclassical"


class ReductionKind(str, Enum):
    TRAVELLING_WAVE = "travelling_wave"
    SCALING = "scaling"


class FieldNormalization(str, Enum):
    """How the nonclassical infinitesimals for quadratic f are written"""

    PRINTED = "printed"
    COVARIANT = "covariant"


class ExitCodeEnum(Enum):
    """CLI exit codes"""

    SUCCESS = (0, "all checks passed")
    USAGE_ERROR = (1, "usage or parse error")
    CHECK_FAILED = (2, "at least one check failed")

    def __init__(self, code, description):
        self.code = code
        self.description = description

    @classmethod
    def from_verdict(cls, passed: bool) -> "ExitCodeEnum":
        return cls.SUCCESS if passed else cls.CHECK_FAILED

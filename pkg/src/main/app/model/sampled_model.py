# SPDX-License-Identifier: MIT
"""Sampled function data model"""

from __future__ import annotations

import dataclasses
import io
from collections.abc import Callable
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from src.main.app.core.ode import OdeSystem
from src.main.app.exception import NumericErrorCode, NumericException

_SPAN_SLACK = 1e-12


@dataclass
class SampledFunction:
    """
    A function known on a grid together with an interpolant.

    ``values`` holds the state (h, h', ..., h^(m-1)) at each grid node and
    ``derivatives`` its derivative. Between nodes the state comes from
    ``interpolant``; higher derivatives come from ``system`` when present.
    """

    grid: np.ndarray
    values: np.ndarray
    derivatives: np.ndarray
    interpolant: Callable[[float], np.ndarray]
    system: OdeSystem | None = None
    var_name: str = "z"
    factor: float = 1.0
    meta: dict[str, Any] = field(default_factory=dict)

    @property
    def span(self) -> tuple[float, float]:
        return float(self.grid[0]), float(self.grid[-1])

    def _check_span(self, s: float) -> None:
        lo, hi = self.span
        width = max(1.0, abs(hi - lo))
        if s < lo - _SPAN_SLACK * width or s > hi + _SPAN_SLACK * width:
            raise NumericException(
                NumericErrorCode.OUT_OF_SPAN,
                f"{self.var_name}={s} outside [{lo}, {hi}]",
                details={"point": s, "span": [lo, hi]},
            )

    def _raw_state(self, s: float) -> np.ndarray:
        self._check_span(s)
        index = int(np.searchsorted(self.grid, s))
        for candidate in (index - 1, index):
            if 0 <= candidate < len(self.grid) and self.grid[candidate] == s:
                return np.asarray(self.values[candidate], dtype=float)
        return np.asarray(self.interpolant(s), dtype=float).reshape(-1)

    def state(self, s: float) -> np.ndarray:
        return self.factor * self._raw_state(s)

    def __call__(self, s: float) -> float:
        return float(self.state(s)[0])

    def jet(self, s: float, upto: int) -> list[float]:
        """h, h', ..., h^(upto) at s."""
        raw = self._raw_state(s)
        if upto < len(raw):
            values = list(raw[: upto + 1])
        elif self.system is not None:
            values = self.system.extend(s, raw, upto)
        else:
            raise NumericException(
                NumericErrorCode.OUT_OF_SPAN, f"Derivative {upto} is not available"
            )
        return [self.factor * float(v) for v in values]

    def scaled(self, factor: float) -> SampledFunction:
        return dataclasses.replace(self, factor=self.factor * factor)

    def to_text(self) -> str:
        """Columnar text: one row per node, the variable first, then the state."""
        names = [self.var_name] + [
            "h" + "'" * k for k in range(self.values.shape[1])
        ]
        header = [" ".join(names)]
        header += [f"{key} = {value}" for key, value in sorted(self.meta.items())]
        table = np.column_stack([self.grid, self.factor * self.values])
        buffer = io.StringIO()
        np.savetxt(buffer, table, fmt="%.17g", header="\n".join(header))
        return buffer.getvalue()

    def write(self, path: str | Path) -> Path:
        target = Path(path)
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(self.to_text(), encoding="utf-8")
        return target

# SPDX-License-Identifier: MIT
"""Central finite-difference stencils with one Richardson step"""

from collections.abc import Callable

Fn = Callable[[float], float]


def first_derivative(fn: Fn, s: float, h: float) -> float:
    return (-fn(s + 2 * h) + 8 * fn(s + h) - 8 * fn(s - h) + fn(s - 2 * h)) / (12 * h)


def second_derivative(fn: Fn, s: float, h: float) -> float:
    return (
        -fn(s + 2 * h) + 16 * fn(s + h) - 30 * fn(s) + 16 * fn(s - h) - fn(s - 2 * h)
    ) / (12 * h**2)


def fourth_derivative(fn: Fn, s: float, h: float) -> float:
    return (
        -fn(s + 3 * h)
        + 12 * fn(s + 2 * h)
        - 39 * fn(s + h)
        + 56 * fn(s)
        - 39 * fn(s - h)
        + 12 * fn(s - 2 * h)
        - fn(s - 3 * h)
    ) / (6 * h**4)


def richardson(stencil: Callable[[Fn, float, float], float], fn: Fn, s: float, h: float) -> float:
    """Combine steps h and h/2 of a fourth-order stencil."""
    return (16 * stencil(fn, s, h / 2) - stencil(fn, s, h)) / 15


def derivative(
    stencil: Callable[[Fn, float, float], float],
    fn: Fn,
    s: float,
    h: float,
    refine: bool = True,
) -> float:
    return richardson(stencil, fn, s, h) if refine else stencil(fn, s, h)

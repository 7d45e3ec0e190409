# SPDX-License-Identifier: MIT
"""
Symbolic expression kernel.

Expressions are sympy trees over exact rationals. Symbols fall in four classes:
independent variables (x, t, z), jet variables of u (u, u_x, u_xt, ...), jet
variables of an ODE unknown in z (h, h_z, h_zz, ... and the same for g), and
parameters (everything else). Unknown functions (f, g, h, p, q, r) are sympy
undefined functions.
"""

from __future__ import annotations

import math
import random
import re
from collections.abc import Callable, Iterable, Mapping
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any

import sympy
from fastlib.logging import logger
from sympy.core.function import AppliedUndef, UndefinedFunction

from src.main.app.config import get_expr_config
from src.main.app.exception import (
    AnalysisErrorCode,
    AnalysisException,
    ExprParseException,
    ParseErrorCode,
)

Expr = sympy.Expr

VARIABLE_NAMES = ("x", "t", "z")
UNKNOWN_FUNCTION_NAMES = ("f", "g", "h", "p", "q", "r")
ODE_UNKNOWN_NAMES = ("h", "g")

_JET_RE = re.compile(r"^u(?:_([xt]+))?$")
_ODE_JET_RE = re.compile(r"^([hg])(?:_(z+))?$")
_IDENT_RE = re.compile(r"^[A-Za-z][A-Za-z0-9_]*$")


def symbol(name: str) -> sympy.Symbol:
    return sympy.Symbol(name)


x, t, u, z = sympy.symbols("x t u z")


def jet_name(i: int, j: int) -> str:
    if i == 0 and j == 0:
        return "u"
    return "u_" + "x" * i + "t" * j


@lru_cache(maxsize=None)
def jet_symbol(i: int, j: int) -> sympy.Symbol:
    """Symbol for the derivative of u taken i times in x and j times in t."""
    return symbol(jet_name(i, j))


def jet_index(s: Any) -> tuple[int, int] | None:
    if not isinstance(s, sympy.Symbol):
        return None
    m = _JET_RE.match(s.name)
    if m is None:
        return None
    letters = m.group(1) or ""
    if s.name != jet_name(letters.count("x"), letters.count("t")):
        return None
    return letters.count("x"), letters.count("t")


def jet_order(s: Any) -> int:
    index = jet_index(s)
    return -1 if index is None else sum(index)


def jets_of(e: Expr, min_order: int = 0) -> list[sympy.Symbol]:
    found = [s for s in e.free_symbols if jet_order(s) >= min_order]
    return sorted(found, key=lambda s: (jet_order(s), s.name))


@lru_cache(maxsize=None)
def ode_jet_symbol(k: int, name: str = "h") -> sympy.Symbol:
    """Symbol for the k-th z-derivative of the ODE unknown ``name``."""
    return symbol(name if k == 0 else f"{name}_" + "z" * k)


def ode_jet_index(s: Any) -> tuple[str, int] | None:
    if not isinstance(s, sympy.Symbol):
        return None
    m = _ODE_JET_RE.match(s.name)
    if m is None:
        return None
    return m.group(1), len(m.group(2) or "")


def ode_jets(k_max: int, name: str = "h") -> tuple[sympy.Symbol, ...]:
    return tuple(ode_jet_symbol(k, name) for k in range(k_max + 1))


def symbol_class(name: str) -> str:
    """Classify an identifier; raises on malformed jet names."""
    if not _IDENT_RE.match(name):
        raise ExprParseException(
            ParseErrorCode.UNKNOWN_SYMBOL, f"Invalid identifier: {name!r}"
        )
    if name in VARIABLE_NAMES:
        return "variable"
    if name == "u" or name.startswith("u_"):
        m = _JET_RE.match(name)
        if m is None:
            raise ExprParseException(
                ParseErrorCode.UNKNOWN_SYMBOL, f"Malformed jet variable: {name!r}"
            )
        return "jet"
    if name in ODE_UNKNOWN_NAMES or name[:2] in ("h_", "g_"):
        if _ODE_JET_RE.match(name) is None:
            raise ExprParseException(
                ParseErrorCode.UNKNOWN_SYMBOL, f"Malformed ODE jet variable: {name!r}"
            )
        return "ode_jet"
    return "parameter"


def canonical_symbol(name: str) -> sympy.Symbol:
    """Symbol for ``name`` with jet letters put in (x..., t...) order."""
    if symbol_class(name) == "jet":
        letters = _JET_RE.match(name).group(1) or ""
        return jet_symbol(letters.count("x"), letters.count("t"))
    return symbol(name)


def unknown_function(name: str) -> UndefinedFunction:
    return sympy.Function(name)


F = unknown_function("f")


def is_parameter(s: Any) -> bool:
    return (
        isinstance(s, sympy.Symbol)
        and s.name not in VARIABLE_NAMES
        and jet_index(s) is None
        and ode_jet_index(s) is None
    )


def parameters_of(e: Expr) -> list[sympy.Symbol]:
    return sorted((s for s in e.free_symbols if is_parameter(s)), key=lambda s: s.name)


def unknown_functions_of(e: Expr) -> list[UndefinedFunction]:
    funcs = {a.func for a in e.atoms(AppliedUndef)}
    return sorted(funcs, key=lambda fn: fn.__name__)


def _arities(e: Expr) -> dict[UndefinedFunction, int]:
    applied = sorted(e.atoms(AppliedUndef), key=lambda a: a.func.__name__)
    return {a.func: len(a.args) for a in applied}


@dataclass(frozen=True)
class Binding:
    """Symbols and unknown functions mapped to expressions or finite reals."""

    values: Mapping[Any, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        resolved: dict[Any, Any] = {}
        seen: set[str] = set()
        for key, value in dict(self.values).items():
            if isinstance(key, str):
                if key in UNKNOWN_FUNCTION_NAMES and isinstance(value, sympy.Lambda):
                    key = unknown_function(key)
                else:
                    key = canonical_symbol(key)
            name = key.__name__ if isinstance(key, UndefinedFunction) else str(key)
            if name in seen:
                raise AnalysisException(
                    AnalysisErrorCode.UNBOUND_SYMBOL,
                    f"Symbol {name} is bound more than once",
                )
            seen.add(name)
            if isinstance(value, (int, float)) and not isinstance(value, bool):
                if not math.isfinite(value):
                    raise AnalysisException(
                        AnalysisErrorCode.DOMAIN_ERROR,
                        f"Binding for {name} is not finite",
                    )
            resolved[key] = value
        object.__setattr__(self, "values", resolved)

    @classmethod
    def of(cls, binding: Binding | Mapping[Any, Any] | None) -> Binding:
        if binding is None:
            return cls({})
        if isinstance(binding, Binding):
            return binding
        return cls(binding)

    def symbols(self) -> dict[sympy.Symbol, Any]:
        return {k: v for k, v in self.values.items() if isinstance(k, sympy.Symbol)}

    def functions(self) -> dict[UndefinedFunction, sympy.Lambda]:
        return {
            k: v for k, v in self.values.items() if isinstance(k, UndefinedFunction)
        }


def diff(e: Expr, v: sympy.Symbol | str) -> Expr:
    """Exact partial derivative; jet variables are independent coordinates."""
    if isinstance(v, str):
        v = canonical_symbol(v)
    return sympy.diff(sympy.sympify(e), v)


def instantiate_functions(
    e: Expr, functions: Mapping[UndefinedFunction, sympy.Lambda]
) -> Expr:
    """Replace applications of unknown functions (and their derivatives)."""
    if not functions:
        return e
    targets = dict(functions)

    def is_target(node: Any) -> bool:
        return isinstance(node, AppliedUndef) and node.func in targets

    replaced = e.replace(is_target, lambda node: targets[node.func](*node.args))
    return replaced.doit()


def substitute(e: Expr, binding: Binding | Mapping[Any, Any] | None) -> Expr:
    """Simultaneous, non-recursive replacement; unbound symbols are unchanged."""
    b = Binding.of(binding)
    e = sympy.sympify(e)
    e = instantiate_functions(e, b.functions())
    mapping = {k: sympy.sympify(v) for k, v in b.symbols().items()}
    return e.xreplace(mapping) if mapping else e


def node_count(e: Expr) -> int:
    return sum(1 for _ in sympy.preorder_traversal(e))


def normalize(e: Expr, node_limit: int | None = None) -> Expr:
    """
    Canonical multinomial form.

    Products are expanded and rational coefficients merged; powers with
    non-integer or symbolic exponents and exp/log applications are atoms.
    """
    limit = node_limit or get_expr_config().node_limit
    result = sympy.expand(
        sympy.sympify(e), power_exp=False, power_base=False, log=False
    )
    size = node_count(result)
    if size > limit:
        raise AnalysisException(
            AnalysisErrorCode.EXPANSION_OVERFLOW,
            details={"nodes": size, "limit": limit},
        )
    return result


@lru_cache(maxsize=1024)
def _compiled(e: Expr, args: tuple[sympy.Symbol, ...]) -> Callable[..., Any]:
    return sympy.lambdify(args, e, modules="math")


def _as_real(value: Any, where: str) -> float:
    if isinstance(value, complex):
        if value.imag != 0:
            raise AnalysisException(
                AnalysisErrorCode.DOMAIN_ERROR, f"Complex value at {where}"
            )
        value = value.real
    value = float(value)
    if not math.isfinite(value):
        raise AnalysisException(
            AnalysisErrorCode.DOMAIN_ERROR, f"Non-finite value at {where}"
        )
    return value


def evaluate(e: Expr, binding: Binding | Mapping[Any, Any]) -> float:
    """IEEE double evaluation of ``e`` under ``binding``."""
    b = Binding.of(binding)
    e = instantiate_functions(sympy.sympify(e), b.functions())
    numeric: dict[sympy.Symbol, float] = {}
    symbolic: dict[sympy.Symbol, Expr] = {}
    for key, value in b.symbols().items():
        if isinstance(value, (int, float)):
            numeric[key] = float(value)
        else:
            symbolic[key] = sympy.sympify(value)
    if symbolic:
        e = e.xreplace(symbolic)
    if e.atoms(AppliedUndef):
        names = sorted(str(a.func) for a in e.atoms(AppliedUndef))
        raise AnalysisException(
            AnalysisErrorCode.UNBOUND_SYMBOL, f"Unbound functions: {names}"
        )
    missing = sorted(str(s) for s in e.free_symbols if s not in numeric)
    if missing:
        raise AnalysisException(
            AnalysisErrorCode.UNBOUND_SYMBOL, f"Unbound symbols: {missing}"
        )
    args = tuple(sorted(e.free_symbols, key=lambda s: s.name))
    try:
        value = _compiled(e, args)(*(numeric[s] for s in args))
    except (ValueError, ZeroDivisionError, OverflowError) as exc:
        raise AnalysisException(AnalysisErrorCode.DOMAIN_ERROR, str(exc)) from exc
    return _as_real(value, str(e))


def random_function(rng: random.Random, arity: int) -> sympy.Lambda:
    """A smooth random function used to stand in for an unknown function."""
    args = tuple(sympy.Dummy(f"s{i}") for i in range(arity))

    def coeff() -> sympy.Rational:
        return sympy.Rational(rng.choice([-1, 1]) * rng.randint(1, 9), rng.randint(1, 5))

    body = coeff()
    for a in args:
        body += coeff() * a + coeff() * a**2
    linear = sum((coeff() / 4 * a for a in args), sympy.Integer(0))
    body += coeff() * sympy.exp(linear)
    if arity > 1:
        body += coeff() * args[0] * args[-1]
    return sympy.Lambda(args, body)


@dataclass
class EquivalenceResult:
    equivalent: bool
    exact: bool
    max_deviation: float = 0.0
    points: list[dict[str, float]] = field(default_factory=list)
    failing_point: dict[str, float] | None = None
    seed: int = 0
    tol: float = 0.0


def sample_point(
    symbols: Iterable[sympy.Symbol],
    rng: random.Random,
    boxes: Mapping[str, tuple[float, float]] | None = None,
) -> dict[sympy.Symbol, float]:
    cfg = get_expr_config()
    boxes = boxes or {}
    point = {}
    for s in symbols:
        lo, hi = boxes.get(s.name, (cfg.sample_low, cfg.sample_high))
        point[s] = rng.uniform(lo, hi)
    return point


def equiv_check(
    e1: Expr,
    e2: Expr,
    trials: int | None = None,
    tol: float | None = None,
    seed: int | None = None,
    boxes: Mapping[str, tuple[float, float]] | None = None,
    derived: Mapping[sympy.Symbol, Callable[[dict[sympy.Symbol, float]], float]]
    | None = None,
    exact_first: bool = True,
    sample_also: Iterable[sympy.Symbol] = (),
) -> EquivalenceResult:
    """
    Randomized equivalence of two expressions.

    Exact equality after normalization short-circuits. Otherwise both sides are
    evaluated at ``trials`` random points; unknown functions are replaced by
    seeded random smooth functions and ``derived`` symbols are computed from the
    sampled ones.
    """
    cfg = get_expr_config()
    trials = cfg.equiv_trials if trials is None else trials
    tol = cfg.equiv_tol if tol is None else tol
    seed = cfg.seed if seed is None else seed
    if trials < 1:
        raise ValueError("trials must be at least 1")
    e1, e2 = sympy.sympify(e1), sympy.sympify(e2)

    if exact_first:
        try:
            if normalize(e1 - e2) == 0:
                return EquivalenceResult(True, True, seed=seed, tol=tol)
        except AnalysisException as exc:
            logger.debug(f"Exact comparison skipped: {exc}")

    rng = random.Random(seed)
    functions = {
        fn: random_function(rng, arity) for fn, arity in _arities(e1 + e2).items()
    }
    e1 = instantiate_functions(e1, functions)
    e2 = instantiate_functions(e2, functions)

    derived = dict(derived or {})
    free = sorted((e1.free_symbols | e2.free_symbols), key=lambda s: s.name)
    sampled = [s for s in free if s not in derived]
    sampled += sorted(set(sample_also) - set(sampled), key=lambda s: s.name)
    args = tuple(free)
    f1, f2 = _compiled(e1, args), _compiled(e2, args)

    result = EquivalenceResult(True, False, seed=seed, tol=tol)
    attempts = 0
    while len(result.points) < trials:
        attempts += 1
        if attempts > cfg.max_sampling_attempts + trials:
            raise AnalysisException(
                AnalysisErrorCode.SAMPLING_FAILURE,
                details={"valid_points": len(result.points), "attempts": attempts},
            )
        point = sample_point(sampled, rng, boxes)
        try:
            for s, fn in derived.items():
                point[s] = fn(point)
            values = [point[s] for s in args]
            v1 = _as_real(f1(*values), "lhs")
            v2 = _as_real(f2(*values), "rhs")
        except (ValueError, ZeroDivisionError, OverflowError, AnalysisException):
            continue
        named = {s.name: point[s] for s in args}
        result.points.append(named)
        deviation = abs(v1 - v2) / (1.0 + abs(v1) + abs(v2))
        result.max_deviation = max(result.max_deviation, deviation)
        if deviation > tol and result.equivalent:
            result.equivalent = False
            result.failing_point = named
    return result


def equiv(
    e1: Expr,
    e2: Expr,
    trials: int | None = None,
    tol: float | None = None,
    seed: int | None = None,
) -> bool:
    return equiv_check(e1, e2, trials=trials, tol=tol, seed=seed).equivalent


def substitute_unknowns(
    e: Expr,
    functions: Mapping[UndefinedFunction, Expr],
    partial: Callable[[Expr, sympy.Symbol], Expr] = sympy.diff,
) -> Expr:
    """
    Replace unknown functions of (x, t, u) and their partial derivatives.

    Derivatives are taken with ``partial`` so a candidate may carry symbols
    standing for functions of t.
    """
    cache: dict[tuple[Any, ...], Expr] = {}

    def derivative_of(fn: UndefinedFunction, variables: tuple[sympy.Symbol, ...]) -> Expr:
        key = (fn, variables)
        if key not in cache:
            if not variables:
                cache[key] = sympy.sympify(functions[fn])
            else:
                cache[key] = partial(derivative_of(fn, variables[:-1]), variables[-1])
        return cache[key]

    mapping: dict[Expr, Expr] = {}
    for d in e.atoms(sympy.Derivative):
        inner = d.expr
        if isinstance(inner, AppliedUndef) and inner.func in functions:
            variables = tuple(v for v, n in d.variable_count for _ in range(int(n)))
            mapping[d] = derivative_of(inner.func, variables)
    for a in e.atoms(AppliedUndef):
        if a.func in functions:
            mapping[a] = derivative_of(a.func, ())
    return e.xreplace(mapping)

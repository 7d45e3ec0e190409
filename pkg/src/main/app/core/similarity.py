# SPDX-License-Identifier: MIT
"""Chain rule for ansatze u = U(x, t, h(z(x, t)))."""

from __future__ import annotations

import sympy

from src.main.app.core.expr import Expr, ode_jets, t, x, z
from src.main.app.model.equation_model import FSpec

H = ode_jets(10)


def chain_partial(e: Expr, var: sympy.Symbol, invariant: Expr, jets=H) -> Expr:
    """∂/∂var of an expression in (x, t, h, h_z, ...) where h depends on z(x, t)."""
    dz = sympy.diff(invariant, var)
    result = sympy.diff(e, var)
    for k in range(len(jets) - 1):
        if e.has(jets[k]):
            result += jets[k + 1] * dz * sympy.diff(e, jets[k])
    return result


def z_derivative(e: Expr, jets=H, var: sympy.Symbol = z) -> Expr:
    """D_z = ∂z + Σ h_{k+1} ∂/∂h_k."""
    result = sympy.diff(e, var)
    for k in range(len(jets) - 1):
        if e.has(jets[k]):
            result += jets[k + 1] * sympy.diff(e, jets[k])
    return result


def z_derivative_n(e: Expr, n: int, jets=H, var: sympy.Symbol = z) -> Expr:
    for _ in range(n):
        e = z_derivative(e, jets, var)
    return e


def ansatz_derivatives(invariant: Expr, ansatz: Expr) -> dict[str, Expr]:
    """u and the derivatives entering the equation, as functions of (x, t, h, ...)."""

    def dx(e: Expr) -> Expr:
        return chain_partial(e, x, invariant)

    def dt(e: Expr) -> Expr:
        return chain_partial(e, t, invariant)

    u_x = dx(ansatz)
    u_xx = dx(u_x)
    u_t = dt(ansatz)
    return {
        "u": ansatz,
        "u_x": u_x,
        "u_xx": u_xx,
        "u_t": u_t,
        "u_tt": dt(u_t),
        "u_xxxx": dx(dx(u_xx)),
    }


def equation_on_ansatz(invariant: Expr, ansatz: Expr, f: FSpec) -> Expr:
    """u_tt - u_xx + (f(u) + u_xx)_xx with u given by the ansatz."""
    d = ansatz_derivatives(invariant, ansatz)
    inner = f.applied(ansatz) + d["u_xx"]
    second = chain_partial(chain_partial(inner, x, invariant), x, invariant)
    return d["u_tt"] - d["u_xx"] + second

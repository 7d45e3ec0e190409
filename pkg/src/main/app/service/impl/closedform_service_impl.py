# SPDX-License-Identifier: MIT
"""Closed-form solution service implementation"""

from __future__ import annotations

import dataclasses
import math

import numpy as np
import sympy
from fastlib.logging import logger
from scipy.integrate import quad
from scipy.optimize import brentq

from src.main.app.config import get_numeric_config
from src.main.app.core.expr import Expr, t, u, x
from src.main.app.core.integrate import integrate
from src.main.app.core.ode import OdeSystem
from src.main.app.enums.enum import FieldNormalization
from src.main.app.exception import NumericErrorCode, NumericException
from src.main.app.model.closedform_model import (
    HT,
    HT_T,
    IT,
    TIME_JETS,
    NonclassicalAnsatz,
    NonclassicalFields,
    QuadratureSolution,
    WeierstrassParams,
)
from src.main.app.model.field_model import TimeJets
from src.main.app.model.sampled_model import SampledFunction
from src.main.app.schema.report_schema import CheckRow, Report
from src.main.app.service.closedform_service import ClosedFormService

_PATH_SAMPLES = 33
_PROFILE_RESIDUAL_TOL = 1e-6


def _quad(fn, lo: float, hi: float, what: str) -> float:
    cfg = get_numeric_config()
    value, _, *rest = quad(
        fn, lo, hi, epsabs=1e-14, epsrel=cfg.quad_rel_tol, limit=200, full_output=1
    )
    if len(rest) > 1:
        raise NumericException(
            NumericErrorCode.QUADRATURE_NONCONVERGENCE, f"{what}: {rest[1]}"
        )
    return value


def _laurent_coefficients(wp: WeierstrassParams, terms: int) -> list[float]:
    c = [0.0] * (terms + 1)
    c[2] = wp.g2 / 20
    if terms >= 3:
        c[3] = wp.g3 / 28
    for k in range(4, terms + 1):
        c[k] = 3 / ((2 * k + 1) * (k - 3)) * sum(c[m] * c[k - m] for m in range(2, k - 1))
    return c


def _time_profile_system(k3: float) -> OdeSystem:
    h0, _, h2 = TIME_JETS[:3]
    ode = h2 - sympy.Rational(3, 2) * sympy.sympify(k3) * h0**2
    return OdeSystem(ode, var=t, jets=TIME_JETS)


def _exact_profile(fn, t_span, system, meta) -> SampledFunction:
    grid = np.linspace(t_span[0], t_span[1], 201)
    values = np.array([fn(s) for s in grid])
    derivatives = np.array([system.rhs(s, y) for s, y in zip(grid, values)])
    return SampledFunction(
        grid=grid,
        values=values,
        derivatives=derivatives,
        interpolant=fn,
        system=system,
        var_name="t",
        meta=meta,
    )


class ClosedFormServiceImpl(ClosedFormService):
    def quadrature_relation(self, qs: QuadratureSolution, h: float) -> float:
        if h == qs.h_ref:
            return -qs.k4
        path = np.linspace(min(qs.h_ref, h), max(qs.h_ref, h), _PATH_SAMPLES)
        values = qs.integrand(path)
        if not np.all(np.isfinite(values)) or np.any(values <= 0):
            worst = int(np.nanargmin(np.where(np.isfinite(values), values, -np.inf)))
            raise NumericException(
                NumericErrorCode.DOMAIN_VIOLATION,
                f"integrand is {values[worst]} at h={path[worst]}",
                details={"h": float(path[worst])},
            )
        integral = _quad(
            lambda s: float(qs.integrand(s)) ** -0.5, qs.h_ref, h, "quadrature"
        )
        return -qs.k4 + qs.sign * qs.prefactor * integral

    def invert_quadrature(
        self, qs: QuadratureSolution, z: float, bracket: tuple[float, float]
    ) -> float:
        lo, hi = bracket
        z_lo, z_hi = self.quadrature_relation(qs, lo), self.quadrature_relation(qs, hi)
        if (z_lo - z) * (z_hi - z) > 0:
            raise NumericException(
                NumericErrorCode.OUT_OF_SPAN,
                f"z={z} is not between {z_lo} and {z_hi}",
                details={"bracket": [lo, hi]},
            )
        return brentq(lambda h: self.quadrature_relation(qs, h) - z, lo, hi, xtol=1e-12)

    def check_quadrature(
        self, qs: QuadratureSolution, h_end: float, *, points: int = 21
    ) -> Report:
        """Integrate h'' = -k2 - d (a h + b)^n from the reference point and compare."""
        if self.quadrature_relation(qs, h_end) < -qs.k4:
            qs = dataclasses.replace(qs, sign=-qs.sign)
        z_end = self.quadrature_relation(qs, h_end)

        def rhs(_s, y):
            return np.array([y[1], qs.second_derivative(y[0])])

        profile = integrate(rhs, [qs.h_ref, qs.slope(qs.h_ref)], (-qs.k4, z_end), tol=1e-11)
        tol = 1e-6
        rows = []
        for index, h in enumerate(np.linspace(qs.h_ref, h_end, points)):
            z_value = self.quadrature_relation(qs, float(h))
            deviation = abs(profile(z_value) - h)
            rows.append(
                CheckRow(
                    index=index,
                    label=f"h={h:.6g}",
                    status="numeric" if deviation <= tol else "failed",
                    residual=deviation,
                    detail=f"z={z_value:.12g}",
                )
            )
        report = Report.from_rows("quadrature against the profile ODE", rows, tol)
        logger.info(f"Quadrature check n={qs.n}: max deviation {report.max_residual:.3e}")
        return report

    def weierstrass(self, z: float, wp: WeierstrassParams) -> tuple[float, float]:
        """Laurent series near the origin, then repeated argument doubling."""
        cfg = get_numeric_config()
        eps = cfg.pole_eps
        if abs(z) < eps:
            raise NumericException(NumericErrorCode.POLE_PROXIMITY, f"z={z}")
        doublings = max(0, math.ceil(math.log2(abs(z) / cfg.weierstrass_radius)))
        s = z / 2**doublings
        c = _laurent_coefficients(wp, cfg.weierstrass_terms)
        orders = range(2, len(c))
        value = s**-2 + sum(c[k] * s ** (2 * k - 2) for k in orders)
        slope = -2 * s**-3 + sum((2 * k - 2) * c[k] * s ** (2 * k - 3) for k in orders)
        for _ in range(doublings):
            if abs(slope) <= eps * max(1.0, abs(value)) ** 1.5:
                raise NumericException(
                    NumericErrorCode.POLE_PROXIMITY, f"z={z} is close to a lattice point"
                )
            lam = (6 * value**2 - wp.g2 / 2) / slope
            doubled = lam**2 / 4 - 2 * value
            slope = -lam * (doubled - value) - slope
            value = doubled
        if abs(value) > eps**-2:
            raise NumericException(
                NumericErrorCode.POLE_PROXIMITY, f"z={z} is close to a lattice point"
            )
        return value, slope

    def weierstrass_params(self, qs: QuadratureSolution) -> WeierstrassParams:
        """
        Invariants for the cubic case n = 2, where w = a h + b is -6 / (a d)
        times a shifted P with these invariants.
        """
        if qs.n != 2:
            raise NumericException(
                NumericErrorCode.DOMAIN_VIOLATION, f"Weierstrass form needs n = 2, got {qs.n}"
            )
        a, b, d = qs.a, qs.b, qs.d
        return WeierstrassParams(
            g2=-(a**2) * d * qs.k2 / 3,
            g3=a**3 * d**2 * (a * qs.k3 - b * qs.k2) / 18,
        )

    def weierstrass_ode_check(
        self, wp: WeierstrassParams, z0: float, z1: float, *, points: int = 50
    ) -> Report:
        start = self.weierstrass(z0, wp)

        def rhs(_s, y):
            return np.array([y[1], 6 * y[0] ** 2 - wp.g2 / 2])

        numeric = integrate(rhs, start, (z0, z1), tol=1e-12, var_name="z")
        tol = 1e-7
        rows = []
        for index, s in enumerate(np.linspace(z0, z1, points)):
            value, _ = self.weierstrass(float(s), wp)
            deviation = abs(numeric(float(s)) - value) / (1 + abs(value))
            rows.append(
                CheckRow(
                    index=index,
                    label=f"z={s:.6g}",
                    status="numeric" if deviation <= tol else "failed",
                    residual=deviation,
                )
            )
        return Report.from_rows(
            f"P against P'' = 6 P^2 - g2/2 (g2={wp.g2}, g3={wp.g3})", rows, tol
        )

    def solve_h(
        self,
        k3: float,
        k4: float,
        t_span: tuple[float, float],
        h0: float,
        *,
        branch: int = 1,
        tol: float | None = None,
    ) -> SampledFunction:
        """
        Solve h'^2 = k3 h^3 + k4 with h(t_span[0]) = h0 and sign(h') = branch.

        k3 = 0 and k4 = 0 are returned in closed form; otherwise the
        consequence h'' = (3/2) k3 h^2 is integrated, which carries the solution
        through zeros of h'.
        """
        if branch not in (1, -1):
            raise NumericException(
                NumericErrorCode.INVALID_INITIAL_DATA, "branch must be +1 or -1"
            )
        t0, t1 = t_span
        if not t1 > t0:
            raise NumericException(NumericErrorCode.INVALID_INITIAL_DATA, f"t_span={t_span}")
        square = k3 * h0**3 + k4
        if square < 0:
            raise NumericException(
                NumericErrorCode.INVALID_INITIAL_DATA,
                f"k3 h0^3 + k4 = {square} is negative",
                details={"k3": k3, "k4": k4, "h0": h0},
            )
        system = _time_profile_system(k3)
        meta = {"k3": k3, "k4": k4, "t0": t0, "h0": h0, "branch": branch}

        if k3 == 0:
            slope = branch * math.sqrt(k4)
            logger.debug(f"Linear time profile with slope {slope}")
            return _exact_profile(
                lambda s: np.array([h0 + slope * (s - t0), slope]), t_span, system, meta
            )
        if k4 == 0:
            if h0 == 0:
                return _exact_profile(lambda s: np.zeros(2), t_span, system, meta)
            offset = -branch * math.copysign(1.0, k3) * 2 / math.sqrt(k3 * h0)
            pole = t0 - offset
            if t0 <= pole <= t1:
                raise NumericException(
                    NumericErrorCode.BLOW_UP,
                    f"h has a pole at t={pole}",
                    details={"at": pole},
                )

            def profile(s):
                shift = s - pole
                return np.array([4 / (k3 * shift**2), -8 / (k3 * shift**3)])

            return _exact_profile(profile, t_span, system, {**meta, "pole": pole})

        sampled = integrate(
            system,
            [h0, branch * math.sqrt(square)],
            t_span,
            tol=tol or 1e-12,
            var_name="t",
            meta=meta,
        )
        logger.debug(f"Integrated time profile k3={k3}, k4={k4} on {t_span}")
        return sampled

    def nonclassical_fields(
        self,
        na: NonclassicalAnsatz,
        normalization: FieldNormalization = FieldNormalization.COVARIANT,
    ) -> NonclassicalFields:
        profile = na.profile
        self._check_profile(na)
        k1, k2, k3 = (sympy.sympify(v) for v in (na.k1, na.k2, na.k3))
        b, d = sympy.sympify(na.b), sympy.sympify(na.d)

        rules: dict[sympy.Symbol, Expr] = {
            HT: HT_T,
            HT_T: sympy.Rational(3, 2) * k3 * HT**2,
            IT: HT / HT_T**2,
        }

        def dt(e: Expr) -> Expr:
            return sum((rule * sympy.diff(e, s) for s, rule in rules.items()), sympy.Integer(0))

        p1 = HT_T / (2 * HT)
        p2 = k1 * p1 * IT + k2 * p1
        dp1, dp2 = dt(p1), dt(p2)
        quadratic = p1 * (dp1 + 2 * p1**2)
        linear = p1 * dp2 + p2 * dp1 + 4 * p1**2 * p2
        constant = p2 * dp2 + 2 * p1 * p2**2

        if normalization == FieldNormalization.PRINTED:
            p = -d * (p1 * x + p2)
            r = quadratic * x**2 + linear * x + 2 * d * p1 * u + constant + (1 - b) * p1
        else:
            p = p1 * x + p2
            r = -(quadratic * x**2 + linear * x + constant + (b - 1) * p1) / d - 2 * p1 * u

        t_base = profile.span[0] if na.t_base is None else na.t_base
        uses_integral = na.k1 != 0

        def values(t_value: float) -> dict[sympy.Symbol, float]:
            h, dh = profile.state(t_value)
            integral = self._profile_integral(profile, t_base, t_value) if uses_integral else 0.0
            return {HT: float(h), HT_T: float(dh), IT: integral}

        jets = TimeJets(
            symbols=(HT, HT_T, IT), rules=rules, values=values, t_range=profile.span
        )
        logger.info(f"Nonclassical fields ({normalization.value}) for b={na.b}, d={na.d}")
        return NonclassicalFields(p=p, r=r, time_jets=jets, normalization=normalization)

    @staticmethod
    def _check_profile(na: NonclassicalAnsatz) -> None:
        profile = na.profile
        h = profile.factor * profile.values[:, 0]
        dh = profile.factor * profile.values[:, 1]
        if np.any(h == 0):
            raise NumericException(NumericErrorCode.DOMAIN_VIOLATION, "h vanishes on the grid")
        scale = 1 + np.abs(na.k3 * h**3) + abs(na.k4)
        residual = np.max(np.abs(dh**2 - na.k3 * h**3 - na.k4) / scale)
        if residual > _PROFILE_RESIDUAL_TOL:
            raise NumericException(
                NumericErrorCode.INVALID_INITIAL_DATA,
                f"h'^2 - k3 h^3 - k4 reaches {residual:.3e}",
            )

    @staticmethod
    def _profile_integral(profile: SampledFunction, t_base: float, t_value: float) -> float:
        if t_value == t_base:
            return 0.0
        eps = get_numeric_config().pole_eps
        path = np.linspace(min(t_base, t_value), max(t_base, t_value), _PATH_SAMPLES)
        slopes = np.array([profile.state(s)[1] for s in path])
        if np.min(np.abs(slopes)) < eps or np.any(np.sign(slopes) != np.sign(slopes[0])):
            raise NumericException(
                NumericErrorCode.INTEGRAND_POLE,
                f"h' vanishes between t={t_base} and t={t_value}",
            )

        def integrand(s: float) -> float:
            h, dh = profile.state(s)
            return float(h / dh**2)

        return _quad(integrand, t_base, t_value, "integral of h / h'^2")

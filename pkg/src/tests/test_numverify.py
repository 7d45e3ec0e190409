# SPDX-License-Identifier: MIT
import io
import math

import numpy as np
import pytest

from src.main.app.core.parser import parse
from src.main.app.exception import (
    AnalysisErrorCode,
    AnalysisException,
    NumericErrorCode,
    NumericException,
)
from src.main.app.model.equation_model import FSpec
from src.main.app.model.family_model import FFamily
from src.main.app.utils.finite_difference import (
    derivative,
    first_derivative,
    fourth_derivative,
    second_derivative,
)

BOUSSINESQ = FSpec(parse("u^2/2 + u"))
SPEED = 0.8


def _soliton(x: float, t: float, amplitude: float = 3 * (1 - SPEED**2)) -> float:
    width = math.sqrt(1 - SPEED**2) / 2
    return amplitude / math.cosh(width * (x - SPEED * t)) ** 2


def _grid(xs, ts):
    return [(float(a), float(b)) for a in xs for b in ts]


def test_stencils_are_exact_on_polynomials():
    def quartic(s):
        return 3 * s**4 - s**2 + 2

    def quintic(s):
        return s**5 + 2 * s**4

    s = 0.7
    assert first_derivative(quartic, s, 0.05) == pytest.approx(12 * s**3 - 2 * s, abs=1e-10)
    assert second_derivative(quintic, s, 0.05) == pytest.approx(
        20 * s**3 + 24 * s**2, abs=1e-10
    )
    assert fourth_derivative(quintic, s, 0.1) == pytest.approx(120 * s + 48, abs=1e-9)


def test_richardson_improves_accuracy():
    coarse = abs(derivative(first_derivative, math.sin, 0.4, 0.1, refine=False) - math.cos(0.4))
    refined = abs(derivative(first_derivative, math.sin, 0.4, 0.1) - math.cos(0.4))
    assert refined < coarse / 10


def test_harmonic_oscillator(numverify):
    solution = numverify.integrate_ode(
        lambda _s, y: np.array([y[1], -y[0]]), [1.0, 0.0], (0.0, 2 * math.pi), tol=1e-10
    )
    assert np.max(np.abs(solution.values[:, 0] - np.cos(solution.grid))) < 1e-8
    assert solution(1.234) == pytest.approx(math.cos(1.234), abs=1e-8)
    assert solution.state(1.234)[1] == pytest.approx(-math.sin(1.234), abs=1e-8)


def test_integration_blow_up(numverify):
    with pytest.raises(NumericException) as exc:
        numverify.integrate_ode(lambda _s, y: np.array([y[0] ** 2]), [1.0], (0.0, 2.0))
    assert exc.value.code == NumericErrorCode.BLOW_UP
    assert exc.value.details["at"] == pytest.approx(1.0, abs=1e-6)


def test_integration_rejects_non_finite_data(numverify):
    with pytest.raises(NumericException) as exc:
        numverify.integrate_ode(lambda _s, y: y, [float("nan")], (0.0, 1.0))
    assert exc.value.code == NumericErrorCode.INVALID_INITIAL_DATA


def test_sampled_function_span(numverify):
    solution = numverify.integrate_ode(lambda _s, y: -y, [1.0], (0.0, 1.0))
    with pytest.raises(NumericException) as exc:
        solution(1.5)
    assert exc.value.code == NumericErrorCode.OUT_OF_SPAN


def test_columnar_text(numverify, tmp_path):
    solution = numverify.integrate_ode(
        lambda _s, y: np.array([y[1], -y[0]]), [1.0, 0.0], (0.0, 1.0), tol=1e-10
    )
    text = solution.to_text()
    assert text.splitlines()[0] == "# z h h'"
    table = np.loadtxt(io.StringIO(text))
    assert table.shape == (201, 3)
    assert np.array_equal(table[:, 0], solution.grid)
    target = solution.write(tmp_path / "out" / "profile.txt")
    assert target.read_text(encoding="utf-8") == text


def test_soliton_residual(numverify):
    points = _grid(np.linspace(-2, 2, 5), [0.0, 0.5, 1.0])
    report = numverify.pde_residual(_soliton, parse("u^2/2"), points)
    assert report.passed
    assert len(report.rows) == 15
    assert report.notes[0].startswith("steps:")


def test_linear_residual(numverify):
    points = _grid([0.3, 1.1], [0.2, 0.9])
    report = numverify.pde_residual(lambda x, t: math.sin(x) * math.cos(t), parse("u"), points)
    assert report.passed


def test_perturbed_soliton_fails(numverify):
    points = _grid(np.linspace(-2, 2, 5), [0.0, 0.5, 1.0])
    report = numverify.pde_residual(
        lambda x, t: _soliton(x, t, 1.01 * 3 * (1 - SPEED**2)), parse("u^2/2"), points
    )
    assert not report.passed
    assert report.max_residual > 1e-4
    assert report.sample_points


def test_residual_in_threads(numverify):
    points = _grid(np.linspace(-2, 2, 5), [0.0, 0.5, 1.0])
    serial = numverify.pde_residual(_soliton, parse("u^2/2"), points)
    threaded = numverify.pde_residual(_soliton, parse("u^2/2"), points, max_workers=4)
    assert serial.to_json() == threaded.to_json()


def test_residual_needs_concrete_f(numverify):
    with pytest.raises(AnalysisException) as exc:
        numverify.pde_residual(_soliton, parse("a*u^2"), [(0.0, 0.0)])
    assert exc.value.code == AnalysisErrorCode.UNBOUND_PARAMETER
    with pytest.raises(AnalysisException) as exc:
        numverify.pde_residual(_soliton, FSpec(), [(0.0, 0.0)])
    assert exc.value.code == AnalysisErrorCode.UNBOUND_SYMBOL


def _wave(reducer, numverify):
    reduction = reducer.travelling_wave(1, BOUSSINESQ)
    system = reducer.ode_system(reduction, {"k1": 0, "k2": 0}, integrated=True)
    return reduction, numverify.integrate_ode(system, [0.5, 0.0], (0.0, 3.0))


def test_travelling_wave_round_trip(reducer, numverify):
    reduction, h = _wave(reducer, numverify)
    grid = _grid(np.linspace(1.5, 2.5, 5), np.linspace(0.0, 1.0, 5))
    report = numverify.verify_reduction(reduction, h, grid)
    assert report.passed
    assert report.label == "travelling_wave reduction residual"


def test_perturbed_travelling_wave_fails(reducer, numverify):
    reduction, h = _wave(reducer, numverify)
    grid = _grid(np.linspace(1.5, 2.5, 5), np.linspace(0.0, 1.0, 5))
    report = numverify.verify_reduction(reduction, h.scaled(1.01), grid)
    assert not report.passed
    assert report.max_residual > 1e-4


def test_reduction_grid_outside_span(reducer, numverify):
    reduction, h = _wave(reducer, numverify)
    with pytest.raises(NumericException) as exc:
        numverify.verify_reduction(reduction, h, [(5.0, 0.0)])
    assert exc.value.code == NumericErrorCode.OUT_OF_SPAN


def test_scaling_round_trip(reducer, numverify):
    reduction = reducer.scaling(FFamily.power(d=1, a=2, b=1, n=2))
    system = reducer.ode_system(reduction, {})
    h = numverify.integrate_ode(system, [0.5, 0.1, 0.0, 0.0], (0.5, 1.5), tol=1e-11)
    grid = _grid(np.linspace(0.6, 1.0, 5), np.linspace(1.0, 1.2, 4))
    report = numverify.verify_reduction(reduction, h, grid)
    assert report.passed
    assert report.notes == ["derivatives: symbolic jets"]


def test_reduction_unknown_method(reducer, numverify):
    reduction, h = _wave(reducer, numverify)
    with pytest.raises(ValueError):
        numverify.verify_reduction(reduction, h, [(2.0, 0.5)], method="spectral")


def test_surface_condition_of_travelling_wave(numverify):
    points = _grid([0.2, 0.9], [0.1, 0.6])
    report = numverify.verify_surface_condition(
        lambda x, t: 0.7,
        lambda x, t, u: 0.0,
        lambda x, t: math.sin(x - 0.7 * t),
        points,
    )
    assert report.passed


def test_surface_condition_detects_wrong_speed(numverify):
    report = numverify.verify_surface_condition(
        lambda x, t: 0.7,
        lambda x, t, u: 0.0,
        lambda x, t: math.sin(x - 0.6 * t),
        [(0.2, 0.1)],
    )
    assert not report.passed


def test_invariant_solution_by_characteristics(numverify):
    def p(x, t):
        return x / (2 * t)

    def r(x, t, u):
        return -u / t

    solution = numverify.build_invariant_solution(p, r, lambda s: math.exp(-(s**2)), 1.0)
    assert solution(0.8, 1.5) == pytest.approx(math.exp(-0.64 / 1.5) / 1.5, rel=1e-8)
    assert solution(0.8, 1.0) == pytest.approx(math.exp(-0.64))
    report = numverify.verify_surface_condition(p, r, solution, [(0.8, 1.5)], tol=1e-6)
    assert report.passed


@pytest.mark.parametrize(
    "family",
    [
        FFamily.power(d=1, a=1, b=1, n=3),
        FFamily.power(d=1, a=1, b=1, n=-1),
        FFamily.log(d=1, a=1, b=1),
        FFamily.exp(d=1, a=1, b=0),
    ],
    ids=["cubic", "inverse", "log", "exp"],
)
def test_scaling_round_trip_for_families(reducer, numverify, family):
    reduction = reducer.scaling(family)
    system = reducer.ode_system(reduction, {})
    h = numverify.integrate_ode(system, [0.5, 0.1, 0.0, 0.0], (0.5, 1.5), tol=1e-11)
    grid = _grid(np.linspace(0.6, 1.0, 5), np.linspace(1.0, 1.2, 4))
    report = numverify.verify_reduction(reduction, h, grid)
    assert report.passed
    assert report.max_residual <= 1e-5

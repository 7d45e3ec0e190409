# SPDX-License-Identifier: MIT
import pytest
import sympy

from src.main.app.core.expr import normalize, symbol, t, u, unknown_function, x, z
from src.main.app.core.parser import parse
from src.main.app.core.similarity import H, z_derivative_n
from src.main.app.enums.enum import FamilyTag, ReductionKind
from src.main.app.exception import AnalysisErrorCode, AnalysisException
from src.main.app.model.equation_model import FSpec
from src.main.app.model.family_model import FFamily

BOUSSINESQ = FSpec(parse("u^2/2 + u"))


def test_travelling_wave_ode(reducer):
    reduction = reducer.travelling_wave(1, BOUSSINESQ)
    assert reduction.kind == ReductionKind.TRAVELLING_WAVE
    assert reduction.invariant == x - t
    expected = H[4] + H[0] * H[2] + H[1] ** 2 + H[2]
    assert normalize(reduction.ode - expected) == 0
    assert reduction.separation_factor == 1


def test_travelling_wave_integrated_form(reducer):
    speed = symbol("c")
    reduction = reducer.travelling_wave(speed, BOUSSINESQ)
    assert normalize(z_derivative_n(reduction.integrated, 2) - reduction.ode) == 0


def test_derive_ode_for_another_nonlinearity(reducer):
    reduction = reducer.travelling_wave(1)
    ode = reducer.derive_ode(reduction, BOUSSINESQ)
    assert normalize(ode - reducer.travelling_wave(1, BOUSSINESQ).ode) == 0


def test_derive_ode_reproduces_scaling_ode(reducer):
    reduction = reducer.scaling(FFamily.power(d=2, a=3, b=1, n=3))
    assert normalize(reducer.derive_ode(reduction, reduction.f) - reduction.ode) == 0


def test_ansatz_applied(reducer):
    reduction = reducer.travelling_wave(symbol("c"))
    h = unknown_function("h")
    assert reduction.ansatz_applied() == h(x - symbol("c") * t)


def test_scaling_reduction_is_free_of_x_and_t(reducer):
    reduction = reducer.scaling(FFamily.quadratic(d=sympy.Rational(1, 2), b=1))
    assert reduction.kind == ReductionKind.SCALING
    assert not reduction.ode.has(x, t)
    assert reduction.ode.has(z)
    assert sympy.diff(reduction.ode, H[4]) == 1
    assert reduction.separation_factor.has(t)


def test_scaling_needs_unit_linear_coefficient(reducer):
    with pytest.raises(AnalysisException) as exc:
        reducer.scaling(FFamily.power(n=2, k=2))
    assert exc.value.code == AnalysisErrorCode.SEPARATION_FAILURE


def test_scaling_rejects_arbitrary_family(reducer):
    family = FFamily(FamilyTag.ARBITRARY, source=u**3 + u * sympy.exp(u))
    with pytest.raises(AnalysisException) as exc:
        reducer.scaling(family)
    assert exc.value.code == AnalysisErrorCode.INVALID_FAMILY


@pytest.mark.parametrize(
    "params",
    [
        {"d": 2, "a": 3, "b": 1, "n": 3, "c": 0},
        {"d": sympy.Rational(1, 2), "a": 1, "b": 0, "n": 2, "c": 1},
        {"d": -1, "a": 2, "b": sympy.Rational(1, 2), "n": -1, "c": 0},
    ],
)
def test_power_reduced_equation_matches(reducer, params):
    report = reducer.check_table3(1, params)
    assert report.passed
    assert len(report.notes) == 2


def test_log_reduced_equation_matches(reducer):
    report = reducer.check_table3(2, {"d": 2, "a": 2, "b": 1, "c": 0})
    assert report.passed


def test_exp_reduced_equation_mismatch_is_reported(reducer):
    report = reducer.check_table3(3, {"d": 2, "a": 1, "b": 0, "c": 0})
    assert not report.passed
    assert report.rows[0].status == "failed"
    assert report.sample_points


def test_table3_index_out_of_range(reducer):
    with pytest.raises(ValueError):
        reducer.table3_ode(4)


@pytest.mark.parametrize("n", [2, 3, -1])
def test_first_integrals(reducer, n):
    candidate, multiplier = reducer.first_integral(n)
    report = reducer.check_first_integral(reducer.table3_ode(1, {"n": n}), candidate, multiplier)
    assert report.passed


def test_first_integral_detects_wrong_multiplier(reducer):
    candidate, _ = reducer.first_integral(2)
    ode = reducer.table3_ode(1, {"n": 2})
    assert not reducer.check_first_integral(ode, candidate, sympy.Integer(1)).passed


def test_first_integral_unknown_exponent(reducer):
    with pytest.raises(AnalysisException) as exc:
        reducer.first_integral(5)
    assert exc.value.code == AnalysisErrorCode.INVALID_FAMILY


def test_ode_system_of_integrated_wave(reducer):
    reduction = reducer.travelling_wave(1, BOUSSINESQ)
    system = reducer.ode_system(reduction, {"k1": 0, "k2": 0}, integrated=True)
    assert system.order == 2
    assert list(system.rhs(0.0, [0.5, 0.0])) == pytest.approx([0.0, -0.625])
    assert system.extend(0.0, [0.5, 0.0], 3) == pytest.approx([0.5, 0.0, -0.625, 0.0])


def test_ode_system_needs_bound_parameters(reducer):
    reduction = reducer.travelling_wave(symbol("c"), BOUSSINESQ)
    with pytest.raises(AnalysisException) as exc:
        reducer.ode_system(reduction, {})
    assert exc.value.code == AnalysisErrorCode.UNBOUND_PARAMETER

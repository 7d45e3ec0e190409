# SPDX-License-Identifier: MIT
import random

import pytest
import sympy

from src.main.app.core.expr import jet_symbol, normalize, t, u, x
from src.main.app.core.jet import (
    apply_prolonged,
    parse_generator,
    prolong,
    render_generator,
    total_derivative,
    total_derivative_n,
)
from src.main.app.exception import (
    AnalysisErrorCode,
    AnalysisException,
    ExprParseException,
)
from src.main.app.model.field_model import VectorField

U_X, U_T = jet_symbol(1, 0), jet_symbol(0, 1)
U_XX, U_TT = jet_symbol(2, 0), jet_symbol(0, 2)


def test_total_derivative_chain_rule():
    assert total_derivative(u**2, "x") == 2 * u * U_X
    assert total_derivative(U_X, "t") == jet_symbol(1, 1)
    assert total_derivative(x * t * u, "t") == x * u + x * t * U_T
    assert total_derivative_n(u, nx=2, nt=1) == jet_symbol(2, 1)


def test_total_derivative_order_limit():
    with pytest.raises(AnalysisException) as exc:
        total_derivative(jet_symbol(6, 0), "x")
    assert exc.value.code == AnalysisErrorCode.JET_ORDER_OVERFLOW


def test_prolongation_methods_agree():
    field = VectorField(x * u, t**2 + u, u**2 + x)
    recursive = prolong(field, 3, method="recursive")
    characteristic = prolong(field, 3, method="characteristic")
    assert set(recursive.eta) == set(characteristic.eta)
    for J, value in recursive.eta.items():
        assert normalize(value - characteristic.eta[J]) == 0, J


def test_prolongation_of_translation_vanishes():
    prolonged = prolong(VectorField.translation_x(), 4)
    assert all(value == 0 for value in prolonged.eta.values())


def test_prolongation_of_scaling():
    prolonged = prolong(VectorField(x, 2 * t, -2 * u), 2)
    assert prolonged.eta[(2, 0)] == -4 * U_XX
    assert prolonged.eta[(0, 2)] == -6 * U_TT
    assert prolonged.eta[(1, 0)] == -3 * U_X


def test_prolong_order_out_of_range():
    with pytest.raises(AnalysisException) as exc:
        prolong(VectorField.translation_t(), 5)
    assert exc.value.code == AnalysisErrorCode.ORDER_OUT_OF_RANGE


def test_apply_prolonged_on_linear_equation():
    equation = U_TT - U_XX + jet_symbol(4, 0)
    fields = (VectorField.translation_x(), VectorField.translation_t(), VectorField(0, 0, u))
    for field in fields:
        assert apply_prolonged(prolong(field, 4), equation) == sympy.expand(
            field.r / u * equation if field.r != 0 else 0
        )


def test_apply_prolonged_needs_order():
    with pytest.raises(AnalysisException) as exc:
        apply_prolonged(prolong(VectorField.translation_x(), 2), jet_symbol(4, 0))
    assert exc.value.code == AnalysisErrorCode.ORDER_OUT_OF_RANGE


def test_parse_generator():
    field = parse_generator("x*dx + 2*t*dt - 2*(u + 1)*du")
    assert field == VectorField(x, 2 * t, -2 * u - 2)
    assert parse_generator(render_generator(field)) == field


def test_parse_generator_rejects_nonlinear_text():
    with pytest.raises(ExprParseException):
        parse_generator("dx*dt + du")


def test_vector_field_rejects_jets():
    with pytest.raises(AnalysisException):
        VectorField(U_X, 1, 0)


def _random_field(rng: random.Random) -> VectorField:
    def component():
        return sum(
            rng.randint(-3, 3)
            * x ** rng.randint(0, 2)
            * t ** rng.randint(0, 1)
            * u ** rng.randint(0, 2)
            for _ in range(3)
        )

    return VectorField(component(), component(), component())


def test_total_derivatives_commute():
    rng = random.Random(5)
    for _ in range(10):
        e = sum(
            rng.randint(-3, 3) * x ** rng.randint(0, 2) * u ** rng.randint(0, 2) * s
            for s in (1, U_X, U_T, U_X * U_T)
        )
        xt = total_derivative(total_derivative(e, "x"), "t")
        tx = total_derivative(total_derivative(e, "t"), "x")
        assert normalize(xt - tx) == 0


def test_prolongation_is_linear_in_field():
    rng = random.Random(17)
    first, second = _random_field(rng), _random_field(rng)
    combined = VectorField(
        first.p + 3 * second.p, first.q + 3 * second.q, first.r + 3 * second.r
    )
    lhs = prolong(combined, 3)
    rhs_first, rhs_second = prolong(first, 3), prolong(second, 3)
    for J, value in lhs.eta.items():
        assert normalize(value - rhs_first.eta[J] - 3 * rhs_second.eta[J]) == 0, J


@pytest.mark.parametrize("seed", range(20))
def test_prolongation_methods_agree_on_random_fields(seed):
    field = _random_field(random.Random(seed))
    recursive = prolong(field, 4, method="recursive")
    characteristic = prolong(field, 4, method="characteristic")
    assert set(recursive.eta) == set(characteristic.eta)
    for J, value in recursive.eta.items():
        assert normalize(value - characteristic.eta[J]) == 0, J

# SPDX-License-Identifier: MIT
from src.main.app.config import (
    get_expr_config,
    get_jet_config,
    get_numeric_config,
    load_config,
    override_config,
)


def test_sections_come_from_resource_files():
    assert get_expr_config().equiv_trials == 20
    assert get_jet_config().max_order == 6
    assert get_numeric_config().nonclassical_tol == 1e-8


def test_override_layers_on_loaded_section():
    override_config("expr", equiv_tol=1e-6, seed=7)
    expr = get_expr_config()
    assert (expr.equiv_tol, expr.seed) == (1e-6, 7)
    assert expr.sample_low == 0.3
    assert get_numeric_config().residual_tol == 1e-5


def test_reload_clears_overrides():
    override_config("numeric", residual_tol=1.0)
    load_config("test")
    assert get_numeric_config().residual_tol == 1e-5

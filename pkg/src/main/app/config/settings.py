# SPDX-License-Identifier: MIT
"""
Configuration sections for the symmetry toolkit.
"""

from dataclasses import dataclass

from fastlib.config import BaseConfig, config_class


@config_class("expr")
@dataclass
class ExprConfig(BaseConfig):
    """
    Expression kernel settings.

    Attributes:
        node_limit: Largest expanded expression (in tree nodes) normalize accepts
        sample_low: Lower edge of the default sampling box for every symbol
        sample_high: Upper edge of the default sampling box
        equiv_trials: Random points used by randomized equivalence
        equiv_tol: Relative tolerance of randomized equivalence
        seed: Default RNG seed, recorded in every report
        max_sampling_attempts: Attempts before a sampling failure is raised
    """

    node_limit: int = 200_000
    sample_low: float = 0.3
    sample_high: float = 2.1
    equiv_trials: int = 20
    equiv_tol: float = 1e-10
    seed: int = 19980101
    max_sampling_attempts: int = 200


@config_class("jet")
@dataclass
class JetConfig(BaseConfig):
    max_order: int = 6


@config_class("numeric")
@dataclass
class NumericConfig(BaseConfig):
    """Tolerances and step sizes of the numerical back-end."""

    ode_tol: float = 1e-9
    fd_step: float = 1e-3
    fd_step_fourth: float = 2e-2
    richardson: bool = True
    residual_tol: float = 1e-5
    surface_tol: float = 1e-7
    nonclassical_tol: float = 1e-8
    quad_rel_tol: float = 1e-10
    pole_eps: float = 1e-6
    blow_up_threshold: float = 1e8
    weierstrass_terms: int = 24
    weierstrass_radius: float = 0.25

# SPDX-License-Identifier: MIT
"""
Configuration sections and their loading.

Sections are read by fastlib's ``ConfigManager`` from ``config.yml`` overlaid with
``config-{env}.yml``. Values given on the command line (seed, tolerances) are kept
as overrides on top of the loaded sections.
"""

from __future__ import annotations

import dataclasses
import os
from typing import Any

from fastlib.config import ConfigManager
from fastlib.constants import CONFIG_FILE, ENV

from src.main.app.config import settings
from src.main.app.config.settings import ExprConfig, JetConfig, NumericConfig

_overrides: dict[str, dict[str, Any]] = {}


def load_config(env: str, config_file: str | None = None) -> None:
    os.environ[ENV] = env
    if config_file:
        os.environ[CONFIG_FILE] = config_file
    ConfigManager.register_custom_configs(settings)
    ConfigManager.initialize_global_config()
    _overrides.clear()


def override_config(name: str, **values: Any) -> None:
    _overrides.setdefault(name, {}).update(values)


def _section(name: str):
    config = ConfigManager.get_config_instance(name)
    values = _overrides.get(name)
    return dataclasses.replace(config, **values) if values else config


def get_expr_config() -> ExprConfig:
    return _section("expr")


def get_jet_config() -> JetConfig:
    return _section("jet")


def get_numeric_config() -> NumericConfig:
    return _section("numeric")


def get_log_config():
    return ConfigManager.get_config_instance("log")


__all__ = [
    "ExprConfig",
    "JetConfig",
    "NumericConfig",
    "get_expr_config",
    "get_jet_config",
    "get_log_config",
    "get_numeric_config",
    "load_config",
    "override_config",
]

# SPDX-License-Identifier: MIT
"""Symmetry analysis toolkit for the generalized Boussinesq equation."""

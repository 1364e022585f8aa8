"""Exact linear symmetry groups of finite group orbits."""

from __future__ import annotations

__version__ = "0.1.0"

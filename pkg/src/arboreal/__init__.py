"""Canonical arboreal models indexed by signed rooted trees, in exact arithmetic."""

from __future__ import annotations

from .poly import NotDivisible, Polynomial, parse_poly

__all__ = ["Polynomial", "NotDivisible", "parse_poly"]
__version__ = "0.1.0"

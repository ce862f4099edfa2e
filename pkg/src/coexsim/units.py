"""Decibel/linear conversion helpers."""

from __future__ import annotations

import math


def db_to_linear(value_db: float) -> float:
    """Convert a dB power ratio to a linear power ratio."""
    return 10.0 ** (value_db / 10.0)


def linear_to_db(value: float) -> float:
    """Convert a linear power ratio to dB. Rejects non-positive input."""
    if value <= 0.0:
        raise ValueError(f"cannot express non-positive ratio {value!r} in dB")
    return 10.0 * math.log10(value)

"""Exact half-integer bookkeeping via doubled integers.

Angular-momentum labels (j, m, s) take integer and half-integer values.  All
combinatorics in this package stores them as doubled integers so that label
arithmetic and equality are exact; conversion to floats happens only at the
numeric boundary (halves are exactly representable in binary floating point).
"""

from __future__ import annotations


def twice(x: float) -> int:
    """Doubled integer of a half-integer value; rejects anything else."""
    t = round(2 * float(x))
    if abs(2 * float(x) - t) > 1e-9:
        raise ValueError(f"not a half-integer: {x!r}")
    return int(t)


def half(t: int) -> float:
    """Value of a doubled integer (exact in float64)."""
    return t / 2.0


def format_half(t: int) -> str:
    """Doubled integer as an exact string: 4 -> '2', 3 -> '3/2', -1 -> '-1/2'."""
    return str(t // 2) if t % 2 == 0 else f"{t}/2"


def parse_half(text: str) -> float:
    """Parse an exact half-integer string such as '2', '-1/2' or '3/2'."""
    text = text.strip()
    if "/" in text:
        num_str, den_str = text.split("/", 1)
        if den_str.strip() != "2":
            raise ValueError(f"half-integer denominators must be 2: {text!r}")
        return int(num_str) / 2.0
    # Accept plain decimals too, as long as they are exact halves.
    value = float(text)
    return half(twice(value))

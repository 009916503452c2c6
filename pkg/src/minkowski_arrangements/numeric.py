"""Scalar handling and the run-wide numeric mode.

Two modes exist. In rational mode scalars are ``int`` or ``fractions.Fraction``
and every comparison is exact. In float mode scalars are ``float`` and every
comparison carries one absolute tolerance.
"""
from __future__ import annotations

import contextlib
import contextvars
import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence, Union

import numpy as np

Scalar = Union[int, Fraction, float]
Vector = tuple

RATIONAL = "rational"
FLOAT = "float"
DEFAULT_TOLERANCE = 1e-9


@dataclass(frozen=True)
class NumericMode:
    kind: str = RATIONAL
    tolerance: float = DEFAULT_TOLERANCE

    def __post_init__(self):
        if self.kind not in (RATIONAL, FLOAT):
            raise ValueError(f"unknown numeric mode {self.kind!r}")
        if self.tolerance < 0:
            raise ValueError("tolerance must be non-negative")

    @property
    def exact(self) -> bool:
        return self.kind == RATIONAL

    @property
    def eps(self):
        return 0 if self.exact else self.tolerance

    # comparisons: ``le``/``ge`` are forgiving by eps, ``lt``/``gt`` demand a margin of eps

    def le(self, a, b) -> bool:
        return a <= b if self.exact else a <= b + self.tolerance

    def ge(self, a, b) -> bool:
        return self.le(b, a)

    def lt(self, a, b) -> bool:
        return a < b if self.exact else a < b - self.tolerance

    def gt(self, a, b) -> bool:
        return self.lt(b, a)

    def eq(self, a, b) -> bool:
        return a == b if self.exact else abs(a - b) <= self.tolerance

    def scalar(self, value) -> Scalar:
        return to_scalar(value, self)

    def vector(self, values: Iterable) -> Vector:
        return tuple(to_scalar(v, self) for v in values)


_MODE: contextvars.ContextVar[NumericMode] = contextvars.ContextVar(
    "numeric_mode", default=NumericMode()
)


def get_mode() -> NumericMode:
    return _MODE.get()


def set_mode(mode: NumericMode) -> None:
    _MODE.set(mode)


@contextlib.contextmanager
def numeric_mode(kind: str = RATIONAL, tolerance: float = DEFAULT_TOLERANCE):
    """Temporarily switch the numeric mode for the current context."""
    token = _MODE.set(NumericMode(kind, tolerance))
    try:
        yield _MODE.get()
    finally:
        _MODE.reset(token)


def _normalize(q: Fraction):
    return q.numerator if q.denominator == 1 else q


def to_scalar(value, mode: NumericMode | None = None) -> Scalar:
    """Coerce ``value`` into the scalar type of ``mode``.

    Strings are read as ``"num/den"`` or decimal literals. Floats enter
    rational mode as their exact binary value.
    """
    mode = mode or get_mode()
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, str):
        text = value.strip()
        if text.lower() in ("inf", "+inf", "infinity"):
            value = math.inf
        else:
            value = Fraction(text)
    if mode.exact:
        if isinstance(value, int):
            return value
        if isinstance(value, Rational):
            return _normalize(Fraction(value))
        if isinstance(value, float):
            if not math.isfinite(value):
                raise ValueError("non-finite value in rational mode")
            return _normalize(Fraction(value))
        return _normalize(Fraction(value))
    return float(value)


def exact(value) -> Scalar:
    """Exact rational image of any finite scalar (floats by their binary value)."""
    if isinstance(value, int):
        return value
    return _normalize(Fraction(value))


def dot(a: Sequence, b: Sequence):
    return sum(x * y for x, y in zip(a, b))


def sub(a: Sequence, b: Sequence) -> Vector:
    return tuple(x - y for x, y in zip(a, b))


def add(a: Sequence, b: Sequence) -> Vector:
    return tuple(x + y for x, y in zip(a, b))


def scale(t, a: Sequence) -> Vector:
    return tuple(t * x for x in a)


def div(a, b):
    """Division that stays exact on ints."""
    if isinstance(a, int) and isinstance(b, int):
        return _normalize(Fraction(a, b))
    q = a / b
    return _normalize(q) if isinstance(q, Fraction) else q


def sign(x) -> int:
    return (x > 0) - (x < 0)


def serialize(value):
    """JSON form of a scalar: rationals as strings, floats as numbers."""
    if isinstance(value, np.generic):
        value = value.item()
    if isinstance(value, bool):
        return value
    if isinstance(value, int):
        return value
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, float):
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return value
    if isinstance(value, (list, tuple)):
        return [serialize(v) for v in value]
    return value


def gt_root_of_two(value, N: int, mode: NumericMode | None = None) -> bool:
    """Decide ``value > 2 ** (1 / N)``; exact when ``value`` is rational."""
    mode = mode or get_mode()
    if mode.exact:
        if value <= 0:
            return False
        return Fraction(value) ** N > 2
    return value > 2.0 ** (1.0 / N) + mode.tolerance


def lt_root_of_two(value, N: int, mode: NumericMode | None = None) -> bool:
    """Decide ``value < 2 ** (1 / N)``; exact when ``value`` is rational."""
    mode = mode or get_mode()
    if mode.exact:
        if value <= 0:
            return True
        return Fraction(value) ** N < 2
    return value < 2.0 ** (1.0 / N) - mode.tolerance


def root_of_two_lower(N: int) -> Fraction:
    """A rational ``s`` with ``s ** N <= 2`` and ``2 ** (1/N) - s < 1e-15``."""
    s = Fraction(2.0 ** (1.0 / N)).limit_denominator(10**16)
    while s**N > 2:
        s -= Fraction(1, 10**16)
    return s

"""Coordinate-wise activation maps and their derivatives."""

from __future__ import annotations

import enum
import math
from array import array
from typing import Iterable

from . import _backend
from .matrix import ColumnVector, ShapeError


class ActivationKind(enum.Enum):
    IDENTITY = "identity"
    SIGMOID = "sigmoid"
    TANH = "tanh"
    RELU = "relu"
    ONE = "one"  # constant 1, the formal bias neuron

    @classmethod
    def parse(cls, name: str | ActivationKind) -> ActivationKind:
        if isinstance(name, cls):
            return name
        try:
            return cls(name.lower())
        except ValueError:
            choices = ", ".join(k.value for k in cls)
            raise ValueError(f"unknown activation {name!r} (choose from {choices})") from None

    @property
    def smooth(self) -> bool:
        return self is not ActivationKind.RELU

    def __call__(self, t: float) -> float:
        return scalar_apply(self, t)

    def derivative(self, t: float) -> float:
        return scalar_derivative(self, t)


_CODES = {
    ActivationKind.IDENTITY: 0,
    ActivationKind.SIGMOID: 1,
    ActivationKind.TANH: 2,
    ActivationKind.RELU: 3,
    ActivationKind.ONE: 4,
}


def scalar_apply(kind: ActivationKind, t: float) -> float:
    return _backend.kernels.act_apply(array("b", [_CODES[kind]]), array("d", [t]))[0]


def scalar_derivative(kind: ActivationKind, t: float) -> float:
    return _backend.kernels.act_deriv(array("b", [_CODES[kind]]), array("d", [t]))[0]


class ActivationColumn:
    """One activation kind per coordinate, applied coordinate-wise."""

    __slots__ = ("kinds", "_codes")

    def __init__(self, kinds: Iterable[ActivationKind | str]):
        self.kinds = tuple(ActivationKind.parse(k) for k in kinds)
        if not self.kinds:
            raise ShapeError("activation column must be non-empty")
        self._codes = array("b", [_CODES[k] for k in self.kinds])

    @classmethod
    def uniform(cls, kind: ActivationKind | str, n: int) -> ActivationColumn:
        return cls([ActivationKind.parse(kind)] * n)

    def __len__(self):
        return len(self.kinds)

    def __eq__(self, other):
        return isinstance(other, ActivationColumn) and self.kinds == other.kinds

    def __hash__(self):
        return hash(self.kinds)

    def __repr__(self):
        return f"ActivationColumn({[k.value for k in self.kinds]})"


def _check(col: ActivationColumn, y: ColumnVector) -> None:
    if len(col.kinds) != len(y._data):
        raise ShapeError(f"activation column of length {len(col)} applied to vector of dim {y.dim}")


def apply(col: ActivationColumn, y: ColumnVector) -> ColumnVector:
    _check(col, y)
    return ColumnVector._wrap(_backend.kernels.act_apply(col._codes, y._data))


def derivative(col: ActivationColumn, y: ColumnVector) -> ColumnVector:
    _check(col, y)
    return ColumnVector._wrap(_backend.kernels.act_deriv(col._codes, y._data))


def reference_apply(kind: ActivationKind, t: float) -> float:
    """Textbook formula, independent of the kernels. Used by tests and oracles."""
    if kind is ActivationKind.IDENTITY:
        return t
    if kind is ActivationKind.SIGMOID:
        return 1.0 / (1.0 + math.exp(-t))
    if kind is ActivationKind.TANH:
        return math.tanh(t)
    if kind is ActivationKind.RELU:
        return max(0.0, t)
    return 1.0


def reference_derivative(kind: ActivationKind, t: float) -> float:
    if kind is ActivationKind.IDENTITY:
        return 1.0
    if kind is ActivationKind.SIGMOID:
        s = 1.0 / (1.0 + math.exp(-t))
        return s * (1.0 - s)
    if kind is ActivationKind.TANH:
        return 1.0 - math.tanh(t) ** 2
    if kind is ActivationKind.RELU:
        return 1.0 if t > 0.0 else 0.0
    return 0.0

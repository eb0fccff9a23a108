"""Cost functions J(f(x), y) and their gradients with respect to the output."""

from __future__ import annotations

import enum
import math

from .matrix import ColumnVector, ShapeError, as_vector


class LossKind(enum.Enum):
    PAPER_IDENTITY = "paper-identity"  # J = sum_i (f(x)_i - y_i)
    SQUARED_ERROR = "squared-error"  # J = 0.5 * ||f(x) - y||^2

    @classmethod
    def parse(cls, name: str | LossKind) -> LossKind:
        if isinstance(name, cls):
            return name
        try:
            return cls(name.lower())
        except ValueError:
            choices = ", ".join(k.value for k in cls)
            raise ValueError(f"unknown loss {name!r} (choose from {choices})") from None


def _pair(output, target):
    output, target = as_vector(output), as_vector(target)
    if output.dim != target.dim:
        raise ShapeError(f"output dim {output.dim} != target dim {target.dim}")
    return output, target


def loss_value(kind: LossKind, output, target) -> float:
    output, target = _pair(output, target)
    if kind is LossKind.PAPER_IDENTITY:
        return math.fsum(o - t for o, t in zip(output, target))
    return 0.5 * math.fsum((o - t) * (o - t) for o, t in zip(output, target))


def loss_grad(kind: LossKind, output, target) -> ColumnVector:
    """``dJ/dX^L``, the seed of the backward pass."""
    output, target = _pair(output, target)
    if kind is LossKind.PAPER_IDENTITY:
        return ColumnVector.ones(output.dim)
    return ColumnVector([o - t for o, t in zip(output, target)])

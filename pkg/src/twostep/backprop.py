"""Backward passes.

:func:`two_step_backward` mirrors the forward pair ``Y^h = W^h X^{h-1}``,
``X^h = sigma(Y^h)`` with the backward pair::

    delta_down^h = delta_up^h (*) sigma'(Y^h)
    delta_up^{h-1} = (W^h)^T delta_down^h        # W^h_sharp in augmented mode
    dJ/dW^h = delta_down^h (X^{h-1})^T

:func:`classical_backward` is the single-delta recursion, kept on a separate
code path so the two can check each other.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from . import activation as act
from .matrix import (
    ColumnVector,
    Matrix,
    ShapeError,
    as_vector,
    axpy,
    drop_last_column,
    hadamard,
    matmul,
    matvec,
    outer,
    rmatvec,
    transpose,
)
from . import loss as _loss
from .network import ForwardTrace, Network, forward, output


@dataclass(frozen=True)
class DeltaSet:
    """``delta_up`` is ordered L..0 and ``delta_down`` L..1."""

    delta_up: tuple[ColumnVector, ...]
    delta_down: tuple[ColumnVector, ...]

    @property
    def depth(self) -> int:
        return len(self.delta_down)

    def up(self, h: int) -> ColumnVector:
        return self.delta_up[self.depth - h]

    def down(self, h: int) -> ColumnVector:
        return self.delta_down[self.depth - h]


@dataclass(frozen=True)
class GradientSet:
    """``dJ/dW^h`` for h = 1..L, each shaped like ``W^h``."""

    grads: tuple[Matrix, ...]

    def __len__(self):
        return len(self.grads)

    def __iter__(self) -> Iterator[Matrix]:
        return iter(self.grads)

    def __getitem__(self, i: int) -> Matrix:
        return self.grads[i]

    def layer(self, h: int) -> Matrix:
        return self.grads[h - 1]


def _check(net: Network, trace: ForwardTrace, loss_grad: ColumnVector) -> ColumnVector:
    loss_grad = as_vector(loss_grad)
    if trace.depth != net.spec.depth:
        raise ShapeError(f"trace has {trace.depth} layers, network has {net.spec.depth}")
    n_out = net.spec.sizes[-1]
    if loss_grad.dim != n_out:
        raise ShapeError(f"loss gradient has dim {loss_grad.dim}, output layer has {n_out}")
    return loss_grad


def two_step_backward(net: Network, trace: ForwardTrace, loss_grad) -> tuple[DeltaSet, GradientSet]:
    up = _check(net, trace, loss_grad)
    spec = net.spec
    augmented = spec.augmented
    ups, downs, grads = [up], [], []
    for h in range(spec.depth, 0, -1):
        down = hadamard(up, act.derivative(spec._columns[h - 1], trace.preactivations[h - 1]))
        grads.append(outer(down, trace.X(h - 1)))
        w = net.weights[h - 1]
        if augmented:
            w = drop_last_column(w)
        up = rmatvec(w, down)
        downs.append(down)
        ups.append(up)
    grads.reverse()
    return DeltaSet(tuple(ups), tuple(downs)), GradientSet(tuple(grads))


def classical_backward(net: Network, trace: ForwardTrace, loss_grad) -> GradientSet:
    """Single-delta recursion ``delta^h = (W^{h+1})^T delta^{h+1} (*) sigma'(Y^h)``.

    In augmented mode the full transpose is used and the bias neuron's
    constant activation (derivative 0) is carried through, then dropped;
    no column of ``W`` is removed.
    """
    seed = _check(net, trace, loss_grad)
    spec = net.spec
    L = spec.depth
    delta = hadamard(seed, act.derivative(spec.activation_column(L), trace.Y(L)))
    grads = [None] * L
    for h in range(L, 0, -1):
        grads[h - 1] = _col_times_row(delta, trace.X(h - 1))
        if h == 1:
            break
        back = matvec(transpose(net.weight(h)), delta)
        y_prev = trace.Y(h - 1)
        if spec.augmented:
            # the formal neuron's preactivation is irrelevant: its derivative is 0
            y_prev = y_prev.append(0.0)
        delta = hadamard(back, act.derivative(spec.full_activation_column(h - 1), y_prev))
        if spec.augmented:
            delta = delta.drop_last()
    return GradientSet(tuple(grads))


def _col_times_row(u: ColumnVector, v: ColumnVector) -> Matrix:
    """``u v^T`` via an explicit n x 1 by 1 x m product."""
    return matmul(u.as_matrix(), transpose(v.as_matrix()))


def apply_gradients(net: Network, grads: GradientSet, lr: float) -> Network:
    """Gradient-descent step ``W^h <- W^h - lr * dJ/dW^h``."""
    if len(grads) != net.spec.depth:
        raise ShapeError(f"{len(grads)} gradients for a network of depth {net.spec.depth}")
    return net._replace_unchecked(tuple(axpy(-lr, g, w) for g, w in zip(grads, net.weights)))


def gradients(net: Network, x, target, kind) -> GradientSet:
    """Forward, loss seed and two-step backward for one sample."""
    trace = forward(net, x)
    return two_step_backward(net, trace, _loss.loss_grad(kind, output(trace), target))[1]

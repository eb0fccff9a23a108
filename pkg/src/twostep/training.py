"""Per-sample gradient descent over a dataset."""

from __future__ import annotations

import csv
import math
import random
from dataclasses import dataclass
from typing import Sequence

from .backprop import apply_gradients, two_step_backward
from .loss import LossKind, loss_grad, loss_value
from .matrix import ColumnVector, as_vector
from .network import Network, NetworkSpec, forward, init_network, output


class TrainingError(RuntimeError):
    pass


class DatasetError(ValueError):
    pass


@dataclass(frozen=True)
class TrainConfig:
    spec: NetworkSpec
    loss: LossKind = LossKind.SQUARED_ERROR
    learning_rate: float = 0.1
    epochs: int = 100
    seed: int = 0
    init_scale: float = 1.0
    shuffle: bool = True

    def __post_init__(self):
        object.__setattr__(self, "loss", LossKind.parse(self.loss))
        if not self.learning_rate >= 0:
            raise ValueError(f"learning_rate must be non-negative, got {self.learning_rate}")
        if self.epochs < 1:
            raise ValueError(f"epochs must be >= 1, got {self.epochs}")


@dataclass(frozen=True)
class Dataset:
    inputs: tuple[ColumnVector, ...]
    targets: tuple[ColumnVector, ...]

    def __post_init__(self):
        inputs = tuple(as_vector(x) for x in self.inputs)
        targets = tuple(as_vector(y) for y in self.targets)
        if not inputs:
            raise DatasetError("dataset is empty")
        if len(inputs) != len(targets):
            raise DatasetError(f"{len(inputs)} inputs but {len(targets)} targets")
        object.__setattr__(self, "inputs", inputs)
        object.__setattr__(self, "targets", targets)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[float]], n_inputs: int) -> Dataset:
        return cls(tuple(r[:n_inputs] for r in rows), tuple(r[n_inputs:] for r in rows))

    def __len__(self):
        return len(self.inputs)

    def check(self, spec: NetworkSpec) -> None:
        n_in, n_out = spec.sizes[0], spec.sizes[-1]
        for k, (x, y) in enumerate(zip(self.inputs, self.targets)):
            if x.dim != n_in or y.dim != n_out:
                raise DatasetError(f"sample {k}: got {x.dim} inputs / {y.dim} targets, "
                                   f"{spec} needs {n_in} / {n_out}")


def _is_number(cell: str) -> bool:
    try:
        float(cell)
    except ValueError:
        return False
    return True


def read_csv(path, n_inputs: int, n_outputs: int) -> Dataset:
    """One sample per row: ``n_inputs`` input columns then ``n_outputs`` targets.

    A first row that is not entirely numeric is treated as a header.
    """
    with open(path, newline="", encoding="utf-8") as fh:
        rows = [r for r in csv.reader(fh) if r and any(c.strip() for c in r)]
    if rows and not all(_is_number(c) for c in rows[0]):
        rows = rows[1:]
    width = n_inputs + n_outputs
    parsed = []
    for lineno, r in enumerate(rows, start=1):
        if len(r) != width:
            raise DatasetError(f"{path}: data row {lineno} has {len(r)} columns, expected {width}")
        try:
            parsed.append([float(c) for c in r])
        except ValueError as exc:
            raise DatasetError(f"{path}: data row {lineno}: {exc}") from None
    if not parsed:
        raise DatasetError(f"{path}: no data rows")
    return Dataset.from_rows(parsed, n_inputs)


def mean_loss(net: Network, data: Dataset, kind: LossKind) -> float:
    return math.fsum(loss_value(kind, output(forward(net, x)), y)
                     for x, y in zip(data.inputs, data.targets)) / len(data)


def train(config: TrainConfig, data: Dataset, net: Network | None = None) -> tuple[Network, list[float]]:
    """Run SGD with batch size 1; returns the final network and per-epoch mean loss.

    The recorded loss of an epoch is the mean of per-sample losses seen
    during that epoch, each measured before its update.
    """
    data.check(config.spec)
    if net is None:
        net = init_network(config.spec, config.seed, config.init_scale)
    order_rng = random.Random(config.seed ^ 0x5DEECE66D)
    order = list(range(len(data)))
    lr = config.learning_rate
    history = []
    for epoch in range(1, config.epochs + 1):
        if config.shuffle:
            order_rng.shuffle(order)
        total = []
        for k in order:
            trace = forward(net, data.inputs[k])
            out = output(trace)
            value = loss_value(config.loss, out, data.targets[k])
            if not math.isfinite(value):
                raise TrainingError(f"non-finite loss {value} at epoch {epoch}, sample {k}")
            total.append(value)
            _, grads = two_step_backward(net, trace, loss_grad(config.loss, out, data.targets[k]))
            net = apply_gradients(net, grads, lr)
        history.append(math.fsum(total) / len(total))
    return net, history

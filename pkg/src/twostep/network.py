"""Fully connected feedforward networks A[N_0, ..., N_L] and the forward pass.

Bias convention (``BiasMode.AUGMENTED``): the input and every hidden
activation vector carry a trailing constant 1, so ``W^h`` has shape
``N_h x (N_{h-1} + 1)`` and its last column is the bias. Preactivations
``Y^h`` hold only the ``N_h`` genuine neurons; the output ``X^L`` is never
augmented.
"""

from __future__ import annotations

import enum
import json
import os
import random
import tempfile
from dataclasses import dataclass, field
from typing import Sequence

from . import activation as act
from .activation import ActivationColumn, ActivationKind
from .matrix import ColumnVector, Matrix, ShapeError, as_vector, matvec


class BiasMode(enum.Enum):
    AUGMENTED = "augmented"
    NONE = "none"

    @classmethod
    def parse(cls, name: str | BiasMode) -> BiasMode:
        if isinstance(name, cls):
            return name
        try:
            return cls(name.lower())
        except ValueError:
            raise ValueError(f"unknown bias mode {name!r} (choose augmented or none)") from None


class ModelFormatError(ValueError):
    """A model file is malformed or inconsistent with its architecture."""


@dataclass(frozen=True)
class NetworkSpec:
    sizes: tuple[int, ...]
    hidden_activation: ActivationKind = ActivationKind.SIGMOID
    output_activation: ActivationKind = ActivationKind.IDENTITY
    bias_mode: BiasMode = BiasMode.AUGMENTED
    # optional per-coordinate activations, one column per layer 1..L; overrides
    # hidden_activation / output_activation
    columns: tuple[ActivationColumn, ...] | None = None
    _columns: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        sizes = tuple(int(n) for n in self.sizes)
        if len(sizes) < 2:
            raise ValueError(f"need at least input and output layer sizes, got {list(sizes)}")
        if any(n < 1 for n in sizes):
            raise ValueError(f"layer sizes must be positive, got {list(sizes)}")
        object.__setattr__(self, "sizes", sizes)
        object.__setattr__(self, "hidden_activation", ActivationKind.parse(self.hidden_activation))
        object.__setattr__(self, "output_activation", ActivationKind.parse(self.output_activation))
        object.__setattr__(self, "bias_mode", BiasMode.parse(self.bias_mode))
        L = len(sizes) - 1
        if self.columns is None:
            columns = tuple(
                ActivationColumn.uniform(self.output_activation if h == L else self.hidden_activation, sizes[h])
                for h in range(1, L + 1)
            )
        else:
            columns = tuple(c if isinstance(c, ActivationColumn) else ActivationColumn(c) for c in self.columns)
            if len(columns) != L:
                raise ValueError(f"need {L} activation columns, got {len(columns)}")
            for h, c in enumerate(columns, start=1):
                if len(c) != sizes[h]:
                    raise ValueError(f"activation column {h} has length {len(c)}, layer has {sizes[h]} neurons")
            object.__setattr__(self, "columns", columns)
        object.__setattr__(self, "_columns", columns)

    @property
    def depth(self) -> int:
        return len(self.sizes) - 1

    @property
    def augmented(self) -> bool:
        return self.bias_mode is BiasMode.AUGMENTED

    def weight_shape(self, h: int) -> tuple[int, int]:
        """Shape of ``W^h`` for ``1 <= h <= L``."""
        fan_in = self.sizes[h - 1] + (1 if self.augmented else 0)
        return (self.sizes[h], fan_in)

    def activation_column(self, h: int) -> ActivationColumn:
        """Activations of the genuine neurons of layer ``h``."""
        return self._columns[h - 1]

    def full_activation_column(self, h: int) -> ActivationColumn:
        """Like :meth:`activation_column` but including the formal bias neuron."""
        col = self.activation_column(h)
        if self.augmented and h < self.depth:
            return ActivationColumn(col.kinds + (ActivationKind.ONE,))
        return col

    def __str__(self):
        return "A[" + ",".join(map(str, self.sizes)) + "]"


@dataclass(frozen=True)
class Network:
    spec: NetworkSpec
    weights: tuple[Matrix, ...]

    def __post_init__(self):
        weights = tuple(self.weights)
        if len(weights) != self.spec.depth:
            raise ShapeError(f"{self.spec} needs {self.spec.depth} weight matrices, got {len(weights)}")
        for h, w in enumerate(weights, start=1):
            if w.shape != self.spec.weight_shape(h):
                raise ShapeError(f"W^{h} has shape {w.shape}, expected {self.spec.weight_shape(h)}")
        object.__setattr__(self, "weights", weights)

    def weight(self, h: int) -> Matrix:
        """``W^h`` with 1-based layer index."""
        return self.weights[h - 1]

    def with_weights(self, weights: Sequence[Matrix]) -> Network:
        return Network(self.spec, tuple(weights))

    def _replace_unchecked(self, weights: tuple[Matrix, ...]) -> Network:
        # caller guarantees shapes are unchanged
        net = object.__new__(Network)
        object.__setattr__(net, "spec", self.spec)
        object.__setattr__(net, "weights", weights)
        return net


@dataclass(frozen=True)
class ForwardTrace:
    """Cached values of one forward pass.

    ``preactivations[h-1]`` is ``Y^h`` and ``activations[h-1]`` is ``X^h``.
    """

    x0: ColumnVector
    preactivations: tuple[ColumnVector, ...]
    activations: tuple[ColumnVector, ...]

    @property
    def depth(self) -> int:
        return len(self.preactivations)

    def X(self, h: int) -> ColumnVector:
        return self.x0 if h == 0 else self.activations[h - 1]

    def Y(self, h: int) -> ColumnVector:
        return self.preactivations[h - 1]


def init_network(spec: NetworkSpec, seed: int = 0, scale: float = 1.0) -> Network:
    """Weights i.i.d. uniform on ``[-scale, scale]``, deterministic in ``seed``."""
    if scale < 0:
        raise ValueError(f"scale must be non-negative, got {scale}")
    rng = random.Random(seed)
    weights = []
    for h in range(1, spec.depth + 1):
        rows, cols = spec.weight_shape(h)
        weights.append(Matrix.from_flat(rows, cols, [rng.uniform(-scale, scale) for _ in range(rows * cols)]))
    return Network(spec, tuple(weights))


def forward(net: Network, x) -> ForwardTrace:
    spec = net.spec
    x = as_vector(x)
    if x.dim != spec.sizes[0]:
        raise ShapeError(f"input has dim {x.dim}, network {spec} expects {spec.sizes[0]}")
    if spec.augmented:
        x = x.append(1.0)
    ys, xs = [], []
    prev = x
    augmented, L = spec.augmented, spec.depth
    for h, (w, col) in enumerate(zip(net.weights, spec._columns), start=1):
        y = matvec(w, prev)
        out = act.apply(col, y)
        if augmented and h < L:
            out = out.append(1.0)
        ys.append(y)
        xs.append(out)
        prev = out
    return ForwardTrace(x, tuple(ys), tuple(xs))


def output(trace: ForwardTrace) -> ColumnVector:
    return trace.activations[-1]


def predict(net: Network, x) -> ColumnVector:
    return output(forward(net, x))


# -- model files -------------------------------------------------------------


def to_dict(net: Network) -> dict:
    spec = net.spec
    doc = {
        "sizes": list(spec.sizes),
        "bias_mode": spec.bias_mode.value,
        "hidden_activation": spec.hidden_activation.value,
        "output_activation": spec.output_activation.value,
        "weights": [w.tolist() for w in net.weights],
    }
    if spec.columns is not None:
        doc["activation_columns"] = [[k.value for k in c.kinds] for c in spec.columns]
    return doc


def from_dict(doc: dict) -> Network:
    try:
        spec = NetworkSpec(
            sizes=tuple(doc["sizes"]),
            hidden_activation=doc["hidden_activation"],
            output_activation=doc["output_activation"],
            bias_mode=doc["bias_mode"],
            columns=doc.get("activation_columns"),
        )
        weights = tuple(Matrix(w) for w in doc["weights"])
        return Network(spec, weights)
    except KeyError as exc:
        raise ModelFormatError(f"missing field {exc.args[0]!r}") from None
    except (TypeError, ValueError) as exc:
        raise ModelFormatError(str(exc)) from None


def dumps(net: Network) -> str:
    return json.dumps(to_dict(net), indent=2) + "\n"


def loads(text: str) -> Network:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelFormatError(f"not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise ModelFormatError("model file must hold a JSON object")
    return from_dict(doc)


def save_model(net: Network, path: str | os.PathLike) -> None:
    """Write the model atomically (temp file in the same directory, then rename)."""
    path = os.fspath(path)
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(prefix=".model-", suffix=".tmp", dir=directory)
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(dumps(net))
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def load_model(path: str | os.PathLike) -> Network:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())

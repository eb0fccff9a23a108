"""Independent gradient oracles and gradient comparison reports.

* :func:`finite_difference_gradients` perturbs each weight and reruns the
  full forward pass, by default in high-precision decimal arithmetic with
  its own scalar forward code.
* :func:`closed_form_a111` / :func:`closed_form_a121` are hand-derived
  gradients of ``J = f(x) - y`` for the two smallest augmented networks,
  written with scalar arithmetic only.
"""

from __future__ import annotations

import decimal
import json
from dataclasses import dataclass, field
from decimal import Decimal

from .activation import ActivationKind, reference_apply, reference_derivative
from .backprop import GradientSet
from .loss import LossKind, loss_value
from .matrix import Matrix, ShapeError, as_vector
from .network import Network, forward, output

REL_FLOOR = 1e-12
FD_TOL = 1e-5
ANALYTIC_TOL = 1e-12


def _dec_activation(kind: ActivationKind, t: Decimal) -> Decimal:
    if kind is ActivationKind.IDENTITY:
        return t
    if kind is ActivationKind.SIGMOID:
        return 1 / (1 + (-t).exp())
    if kind is ActivationKind.TANH:
        e = (-2 * abs(t)).exp()
        return (1 - e) / (1 + e) * (1 if t >= 0 else -1)
    if kind is ActivationKind.RELU:
        return t if t > 0 else Decimal(0)
    return Decimal(1)


def _dec_cost(net: Network, weights, kind: LossKind, x, y) -> Decimal:
    # scalar forward pass over nested lists of Decimal weights
    spec = net.spec
    prev = [Decimal(v) for v in x]
    for h in range(1, spec.depth + 1):
        if spec.augmented:
            prev.append(Decimal(1))
        kinds = spec.activation_column(h).kinds
        prev = [_dec_activation(k, sum((wij * p for wij, p in zip(row, prev)), Decimal(0)))
                for k, row in zip(kinds, weights[h - 1])]
    diffs = [o - Decimal(t) for o, t in zip(prev, y)]
    if kind is LossKind.PAPER_IDENTITY:
        return sum(diffs, Decimal(0))
    return sum((d * d for d in diffs), Decimal(0)) / 2


def finite_difference_gradients(net: Network, kind: LossKind, x, y, eps: float = 1e-6,
                                digits: int | None = 40) -> GradientSet:
    """Central differences ``(J(w + eps) - J(w - eps)) / (2 eps)`` for every weight.

    With ``digits`` set, J is evaluated in decimal arithmetic at that precision
    by a scalar forward pass independent of the kernels, so the only error left
    is the O(eps^2) truncation. ``digits=None`` uses the package's own
    double-precision forward pass; its rounding noise is about
    ``1e-16 * |J| / eps``, which swamps gradients smaller than ~1e-6.

    Each evaluation perturbs a copy; ``net`` itself is never modified.
    """
    if eps <= 0:
        raise ValueError(f"eps must be positive, got {eps}")
    kind = LossKind.parse(kind)
    x, y = as_vector(x), as_vector(y)
    if digits is None:
        return _fd_double(net, kind, x, y, eps)
    if x.dim != net.spec.sizes[0] or y.dim != net.spec.sizes[-1]:
        raise ShapeError(f"sample dims {x.dim}/{y.dim} do not fit {net.spec}")
    ctx = decimal.Context(prec=digits)
    with decimal.localcontext(ctx):
        step = Decimal(eps)
        weights = [[[Decimal(w[i, j]) for j in range(w.cols)] for i in range(w.rows)] for w in net.weights]
        grads = []
        for h, w in enumerate(net.weights):
            vals = []
            for i in range(w.rows):
                for j in range(w.cols):
                    w0 = weights[h][i][j]
                    weights[h][i][j] = w0 + step
                    plus = _dec_cost(net, weights, kind, x, y)
                    weights[h][i][j] = w0 - step
                    minus = _dec_cost(net, weights, kind, x, y)
                    weights[h][i][j] = w0
                    vals.append(float((plus - minus) / (2 * step)))
            grads.append(Matrix.from_flat(w.rows, w.cols, vals))
    return GradientSet(tuple(grads))


def _fd_double(net, kind, x, y, eps):
    def cost(weights):
        return loss_value(kind, output(forward(net.with_weights(weights), x)), y)

    grads = []
    weights = list(net.weights)
    for h, w in enumerate(weights):
        vals = []
        for i in range(w.rows):
            for j in range(w.cols):
                w0 = w[i, j]
                weights[h] = w.replace(i, j, w0 + eps)
                plus = cost(weights)
                weights[h] = w.replace(i, j, w0 - eps)
                minus = cost(weights)
                vals.append((plus - minus) / (2.0 * eps))
        weights[h] = w
        grads.append(Matrix.from_flat(w.rows, w.cols, vals))
    return GradientSet(tuple(grads))


def _require_smooth(act: ActivationKind) -> ActivationKind:
    act = ActivationKind.parse(act)
    if act not in (ActivationKind.IDENTITY, ActivationKind.SIGMOID, ActivationKind.TANH):
        raise ValueError(f"closed forms need a differentiable activation, got {act.value}")
    return act


def closed_form_a111(w1: Matrix, w2: Matrix, x: float, act) -> tuple[Matrix, Matrix]:
    """Gradients of ``J = f(x) - y`` for A[1,1,1] with bias augmentation.

    Returns ``(dJ/dW^1, dJ/dW^2)``, both 1x2.
    """
    act = _require_smooth(act)
    if w1.shape != (1, 2) or w2.shape != (1, 2):
        raise ShapeError(f"A[1,1,1] needs 1x2 weights, got {w1.shape} and {w2.shape}")
    s, ds = (lambda t: reference_apply(act, t)), (lambda t: reference_derivative(act, t))
    a11, a12 = w1[0, 0], w1[0, 1]
    b1, b2 = w2[0, 0], w2[0, 1]
    w = a11 * x + a12
    top = ds(b1 * s(w) + b2)
    dw2 = Matrix([[top * s(w), top]])
    dw1 = Matrix([[top * ds(w) * b1 * x, top * ds(w) * b1]])
    return dw1, dw2


def closed_form_a121(w1: Matrix, w2: Matrix, x: float, act) -> tuple[Matrix, Matrix]:
    """Gradients of ``J = f(x) - y`` for A[1,2,1] with bias augmentation.

    Returns ``(dJ/dW^1, dJ/dW^2)`` of shapes 2x2 and 1x3.
    """
    act = _require_smooth(act)
    if w1.shape != (2, 2) or w2.shape != (1, 3):
        raise ShapeError(f"A[1,2,1] needs 2x2 and 1x3 weights, got {w1.shape} and {w2.shape}")
    s, ds = (lambda t: reference_apply(act, t)), (lambda t: reference_derivative(act, t))
    u = w1[0, 0] * x + w1[0, 1]
    v = w1[1, 0] * x + w1[1, 1]
    b1, b2, b3 = w2[0, 0], w2[0, 1], w2[0, 2]
    top = ds(b1 * s(u) + b2 * s(v) + b3)
    dw2 = Matrix([[top * s(u), top * s(v), top]])
    dw1 = Matrix([
        [b1 * x * ds(u) * top, b1 * ds(u) * top],
        [b2 * x * ds(v) * top, b2 * ds(v) * top],
    ])
    return dw1, dw2


@dataclass(frozen=True)
class LayerError:
    layer: int
    max_abs: float
    max_rel: float
    at: tuple[int, int]
    passed: bool

    def record(self) -> dict:
        return {"layer": self.layer, "max_abs": self.max_abs, "max_rel": self.max_rel,
                "at": list(self.at), "pass": self.passed}


@dataclass(frozen=True)
class GradCheckReport:
    layers: tuple[LayerError, ...]
    tol: float
    labels: tuple[str, str] = field(default=("a", "b"))

    @property
    def max_abs(self) -> float:
        return max(e.max_abs for e in self.layers)

    @property
    def max_rel(self) -> float:
        return max(e.max_rel for e in self.layers)

    @property
    def at(self) -> tuple[int, int, int]:
        """``(layer, row, col)`` of the worst relative error."""
        worst = max(self.layers, key=lambda e: e.max_rel)
        return (worst.layer,) + worst.at

    @property
    def passed(self) -> bool:
        return self.max_rel <= self.tol

    def records(self) -> list[dict]:
        return [e.record() for e in self.layers]

    def to_json(self) -> str:
        doc = {"compare": list(self.labels), "tol": self.tol, "max_rel": self.max_rel,
               "at": list(self.at), "pass": self.passed, "layers": self.records()}
        return json.dumps(doc, indent=2)

    def table(self) -> str:
        lines = [f"compare {self.labels[0]} vs {self.labels[1]} (tol {self.tol:.1e})",
                 f"{'layer':>5}  {'max_abs':>12}  {'max_rel':>12}  {'at':>8}  result"]
        for e in self.layers:
            at = f"({e.at[0]},{e.at[1]})"
            lines.append(f"{e.layer:>5}  {e.max_abs:12.4e}  {e.max_rel:12.4e}  {at:>8}  "
                         f"{'pass' if e.passed else 'FAIL'}")
        verdict = "PASS" if self.passed else "FAIL"
        lines.append(f"overall: {verdict}  max_rel={self.max_rel:.4e} at layer {self.at[0]} {self.at[1:]}")
        return "\n".join(lines)


def relative_error(a: float, b: float) -> float:
    return abs(a - b) / max(abs(a), abs(b), REL_FLOOR)


def compare_gradients(a: GradientSet, b: GradientSet, tol: float = FD_TOL,
                      labels: tuple[str, str] = ("a", "b")) -> GradCheckReport:
    if len(a) != len(b):
        raise ShapeError(f"gradient sets have {len(a)} and {len(b)} layers")
    layers = []
    for h, (ga, gb) in enumerate(zip(a, b), start=1):
        if ga.shape != gb.shape:
            raise ShapeError(f"layer {h}: shapes {ga.shape} and {gb.shape}")
        max_abs = max_rel = 0.0
        at = (0, 0)
        for i in range(ga.rows):
            for j in range(ga.cols):
                p, q = ga[i, j], gb[i, j]
                rel = relative_error(p, q)
                max_abs = max(max_abs, abs(p - q))
                if rel > max_rel:
                    max_rel, at = rel, (i, j)
        layers.append(LayerError(h, max_abs, max_rel, at, max_rel <= tol))
    return GradCheckReport(tuple(layers), tol, tuple(labels))

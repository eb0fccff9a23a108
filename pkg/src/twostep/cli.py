"""Command line interface: train, gradcheck, compare-rules, forward, dump-trace.

Exit codes: 0 success, 1 failed check or training failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import sys

from .activation import ActivationKind
from .backprop import classical_backward, two_step_backward
from .loss import LossKind, loss_grad, loss_value
from .matrix import ColumnVector, ShapeError
from .network import BiasMode, ModelFormatError, NetworkSpec, forward, load_model, output, save_model
from .training import DatasetError, TrainConfig, TrainingError, read_csv, train
from .verification import ANALYTIC_TOL, FD_TOL, compare_gradients, finite_difference_gradients

ACTIVATIONS = [k.value for k in ActivationKind]
LOSSES = [k.value for k in LossKind]


def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _arch(text: str) -> tuple[int, ...]:
    try:
        sizes = tuple(int(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated layer sizes, got {text!r}") from None
    if len(sizes) < 2 or min(sizes) < 1:
        raise argparse.ArgumentTypeError(f"need at least two positive layer sizes, got {text!r}")
    return sizes


def _positive(text: str) -> float:
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {text}")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="twostep", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="train a network with per-sample gradient descent")
    p.add_argument("--arch", type=_arch, required=True, help='layer sizes, e.g. "1,2,1"')
    p.add_argument("--bias", choices=[m.value for m in BiasMode], default="augmented")
    p.add_argument("--hidden-act", choices=ACTIVATIONS, default="sigmoid")
    p.add_argument("--output-act", choices=ACTIVATIONS, default="identity")
    p.add_argument("--loss", choices=LOSSES, default="squared-error")
    p.add_argument("--lr", type=_positive, default=0.1)
    p.add_argument("--epochs", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--init-scale", type=float, default=1.0)
    p.add_argument("--no-shuffle", action="store_true")
    p.add_argument("--data", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--log-every", type=int, default=0, help="print the mean loss every N epochs")

    p = sub.add_parser("gradcheck", help="two-step gradients vs central finite differences")
    p.add_argument("--model", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--loss", choices=LOSSES, default="squared-error")
    p.add_argument("--eps", type=_positive, default=1e-6)
    p.add_argument("--tol", type=_positive, default=FD_TOL)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("compare-rules", help="two-step rule vs classical backprop")
    p.add_argument("--model", required=True)
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--data")
    src.add_argument("--input", type=_floats)
    p.add_argument("--target", type=_floats)
    p.add_argument("--loss", choices=LOSSES, default="squared-error")
    p.add_argument("--tol", type=_positive, default=ANALYTIC_TOL)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("forward", help="print the network output for one input")
    p.add_argument("--model", required=True)
    p.add_argument("--input", type=_floats, required=True)

    p = sub.add_parser("dump-trace", help="print every forward and backward quantity for one sample")
    p.add_argument("--model", required=True)
    p.add_argument("--input", type=_floats, required=True)
    p.add_argument("--target", type=_floats)
    p.add_argument("--loss", choices=LOSSES, default="paper-identity")
    return parser


def _samples(net, args):
    n_in, n_out = net.spec.sizes[0], net.spec.sizes[-1]
    if getattr(args, "data", None):
        data = read_csv(args.data, n_in, n_out)
        return list(zip(data.inputs, data.targets))
    target = args.target if args.target is not None else [0.0] * n_out
    return [(ColumnVector(args.input), ColumnVector(target))]


def _worst(reports):
    return max(reports, key=lambda r: r.max_rel)


def cmd_train(args) -> int:
    spec = NetworkSpec(args.arch, args.hidden_act, args.output_act, args.bias)
    config = TrainConfig(spec, LossKind.parse(args.loss), args.lr, args.epochs, args.seed,
                         args.init_scale, not args.no_shuffle)
    data = read_csv(args.data, spec.sizes[0], spec.sizes[-1])
    net, history = train(config, data)
    if args.log_every > 0:
        for epoch, value in enumerate(history, start=1):
            if epoch % args.log_every == 0 or epoch == 1:
                print(f"epoch {epoch:>6}  mean loss {value:.6e}")
    save_model(net, args.out)
    print(f"trained {spec} for {config.epochs} epochs on {len(data)} samples; "
          f"final mean loss {history[-1]:.6e}; model written to {args.out}")
    return 0


def cmd_gradcheck(args) -> int:
    net = load_model(args.model)
    kind = LossKind.parse(args.loss)
    reports = []
    for x, y in _samples(net, args):
        trace = forward(net, x)
        _, analytic = two_step_backward(net, trace, loss_grad(kind, output(trace), y))
        numeric = finite_difference_gradients(net, kind, x, y, args.eps)
        reports.append(compare_gradients(analytic, numeric, args.tol, ("two-step", "finite-diff")))
    worst = _worst(reports)
    print(worst.to_json() if args.json else worst.table())
    print(f"{sum(r.passed for r in reports)}/{len(reports)} samples within tolerance")
    return 0 if all(r.passed for r in reports) else 1


def cmd_compare_rules(args) -> int:
    net = load_model(args.model)
    kind = LossKind.parse(args.loss)
    reports = []
    for x, y in _samples(net, args):
        trace = forward(net, x)
        seed = loss_grad(kind, output(trace), y)
        _, two_step = two_step_backward(net, trace, seed)
        classical = classical_backward(net, trace, seed)
        reports.append(compare_gradients(two_step, classical, args.tol, ("two-step", "classical")))
    worst = _worst(reports)
    print(worst.to_json() if args.json else worst.table())
    return 0 if worst.passed else 1


def cmd_forward(args) -> int:
    net = load_model(args.model)
    result = output(forward(net, args.input))
    print(",".join(f"{v:.15g}" for v in result))
    return 0


def _vec(v) -> str:
    return "[" + ", ".join(repr(x) for x in v) + "]"


def _mat(m) -> str:
    return "[" + ", ".join(_vec(r) for r in m.tolist()) + "]"


def format_trace(net, trace, deltas, grads, loss_name, loss_val) -> str:
    """Fixed text layout: forward quantities left to right, then backward right to left."""
    spec = net.spec
    L = spec.depth
    lines = [
        f"network {spec} bias={spec.bias_mode.value} hidden={spec.hidden_activation.value} "
        f"output={spec.output_activation.value}",
        "forward",
        f"  X^0 = {_vec(trace.X(0))}",
    ]
    for h in range(1, L + 1):
        lines.append(f"  Y^{h} = {_vec(trace.Y(h))}")
        lines.append(f"  X^{h} = {_vec(trace.X(h))}")
    lines.append(f"loss {loss_name} J = {loss_val!r}")
    lines.append("backward")
    for h in range(L, 0, -1):
        lines.append(f"  delta_up^{h} = {_vec(deltas.up(h))}")
        lines.append(f"  delta_down^{h} = {_vec(deltas.down(h))}")
        lines.append(f"  delta_W^{h} = {_mat(grads.layer(h))}")
    lines.append(f"  delta_up^0 = {_vec(deltas.up(0))}")
    return "\n".join(lines)


def cmd_dump_trace(args) -> int:
    net = load_model(args.model)
    kind = LossKind.parse(args.loss)
    (x, y), = _samples(net, args)
    trace = forward(net, x)
    out = output(trace)
    deltas, grads = two_step_backward(net, trace, loss_grad(kind, out, y))
    print(format_trace(net, trace, deltas, grads, kind.value, loss_value(kind, out, y)))
    return 0


COMMANDS = {
    "train": cmd_train,
    "gradcheck": cmd_gradcheck,
    "compare-rules": cmd_compare_rules,
    "forward": cmd_forward,
    "dump-trace": cmd_dump_trace,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except TrainingError as exc:
        print(f"twostep: {exc}", file=sys.stderr)
        return 1
    except (OSError, ModelFormatError, DatasetError, ShapeError, ValueError) as exc:
        print(f"twostep {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

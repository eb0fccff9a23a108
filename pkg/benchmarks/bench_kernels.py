"""Compare the compiled and pure-Python kernel backends.

    python3 benchmarks/bench_kernels.py [--repeat N]

Times the raw kernels at a few sizes, then one full forward/backward/update
step and one XOR training epoch. Each number is the best of ``--repeat``
runs, in microseconds per call.
"""

import argparse
import random
import timeit

from twostep import _backend
from twostep.backprop import apply_gradients, two_step_backward
from twostep.loss import LossKind, loss_grad
from twostep.matrix import ColumnVector, Matrix, matmul, matvec, outer, rmatvec
from twostep.network import NetworkSpec, forward, init_network, output
from twostep.training import Dataset, TrainConfig, train


def _matrix(rng, r, c):
    return Matrix.from_flat(r, c, [rng.uniform(-1, 1) for _ in range(r * c)])


def _vector(rng, n):
    return ColumnVector([rng.uniform(-1, 1) for _ in range(n)])


def cases():
    rng = random.Random(0)
    out = []
    for n in (8, 64):
        a, b = _matrix(rng, n, n), _matrix(rng, n, n)
        x, u = _vector(rng, n), _vector(rng, n)
        out += [
            (f"matvec {n}x{n}", lambda a=a, x=x: matvec(a, x)),
            (f"rmatvec {n}x{n}", lambda a=a, u=u: rmatvec(a, u)),
            (f"outer {n}", lambda u=u, x=x: outer(u, x)),
            (f"matmul {n}x{n}", lambda a=a, b=b: matmul(a, b)),
        ]

    for sizes in ((2, 2, 1), (16, 32, 32, 4)):
        spec = NetworkSpec(sizes, "tanh", "identity")
        net = init_network(spec, 1)
        x, y = _vector(rng, sizes[0]), _vector(rng, sizes[-1])

        def step(net=net, x=x, y=y):
            trace = forward(net, x)
            _, grads = two_step_backward(net, trace, loss_grad(LossKind.SQUARED_ERROR, output(trace), y))
            return apply_gradients(net, grads, 0.01)

        out.append((f"sgd step {spec}", step))

    xor = Dataset.from_rows([[0, 0, 0], [0, 1, 1], [1, 0, 1], [1, 1, 0]], 2)
    cfg = TrainConfig(NetworkSpec((2, 2, 1), "tanh", "identity"), epochs=1)
    out.append(("xor epoch", lambda: train(cfg, xor)))
    return out


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    backends = _backend.available()
    results = {}
    for name in backends:
        _backend.set_backend(name)
        for label, fn in cases():
            number = max(1, int(0.05 / max(timeit.timeit(fn, number=1), 1e-7)))
            best = min(timeit.repeat(fn, number=number, repeat=args.repeat)) / number
            results.setdefault(label, {})[name] = best * 1e6

    header = f"{'case':<32}" + "".join(f"{b + ' us':>14}" for b in backends)
    if len(backends) == 2:
        header += f"{'speedup':>10}"
    print(header)
    for label, row in results.items():
        line = f"{label:<32}" + "".join(f"{row[b]:14.2f}" for b in backends)
        if len(backends) == 2:
            line += f"{row['python'] / row['cython']:9.1f}x"
        print(line)


if __name__ == "__main__":
    main()

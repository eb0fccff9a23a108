import random

import pytest

from twostep import _backend
from twostep.matrix import ColumnVector, Matrix


@pytest.fixture(params=_backend.available())
def kernel_backend(request):
    """Run the test once per available kernel backend."""
    previous = _backend.name
    _backend.set_backend(request.param)
    yield request.param
    _backend.set_backend(previous)


@pytest.fixture
def rng():
    return random.Random(20240611)


def random_matrix(rng, rows, cols, lo=-1.0, hi=1.0):
    return Matrix.from_flat(rows, cols, [rng.uniform(lo, hi) for _ in range(rows * cols)])


def random_vector(rng, n, lo=-1.0, hi=1.0):
    return ColumnVector([rng.uniform(lo, hi) for _ in range(n)])


def fold_bias(net):
    """Rewrite an augmented network as a no-bias network with explicit constant-1 neurons.

    Every hidden layer gains one formal neuron whose activation is the constant 1
    and whose incoming weights are zero; the input gains a trailing coordinate that
    the caller must set to 1.
    """
    from twostep.activation import ActivationColumn, ActivationKind
    from twostep.network import Network, NetworkSpec

    spec = net.spec
    L = spec.depth
    sizes = [n + 1 for n in spec.sizes[:-1]] + [spec.sizes[-1]]
    columns, weights = [], []
    for h in range(1, L + 1):
        col = spec.activation_column(h)
        w = net.weight(h)
        if h < L:
            col = ActivationColumn(col.kinds + (ActivationKind.ONE,))
            w = Matrix(w.tolist() + [[0.0] * w.cols])
        columns.append(col)
        weights.append(w)
    folded = NetworkSpec(tuple(sizes), spec.hidden_activation, spec.output_activation, "none", tuple(columns))
    return Network(folded, tuple(weights))


def random_spec(rng, *, kinds=("identity", "sigmoid", "tanh"), modes=("augmented", "none"), max_depth=4, max_width=5):
    from twostep.network import NetworkSpec

    depth = rng.randint(1, max_depth)
    sizes = tuple(rng.randint(1, max_width) for _ in range(depth + 1))
    return NetworkSpec(sizes, rng.choice(kinds), rng.choice(kinds), rng.choice(modes))

"""Feedforward networks trained with the two-step backward rule.

The backward pass mirrors the forward pair ``Y = W X``, ``X = sigma(Y)``
with ``delta_down = delta_up * sigma'(Y)``, ``delta_up = W^T delta_down``.
"""

from . import _backend
from .activation import ActivationColumn, ActivationKind
from .backprop import (
    DeltaSet,
    GradientSet,
    apply_gradients,
    classical_backward,
    gradients,
    two_step_backward,
)
from .loss import LossKind, loss_grad, loss_value
from .matrix import (
    ColumnVector,
    Matrix,
    ShapeError,
    axpy,
    drop_last_column,
    hadamard,
    matmul,
    matvec,
    outer,
    rmatvec,
    transpose,
)
from .network import (
    BiasMode,
    ForwardTrace,
    Network,
    NetworkSpec,
    forward,
    init_network,
    load_model,
    output,
    save_model,
)
from .training import Dataset, TrainConfig, read_csv, train
from .verification import (
    GradCheckReport,
    closed_form_a111,
    closed_form_a121,
    compare_gradients,
    finite_difference_gradients,
)

__version__ = "0.1.0"


def backend() -> str:
    """Name of the active kernel backend ("cython" or "python")."""
    return _backend.name

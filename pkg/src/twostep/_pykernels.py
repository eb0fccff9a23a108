"""Pure-Python kernels over flat row-major ``array('d')`` buffers.

Mirror of ``_ckernels.pyx``. Both backends accumulate in the same order so
their results are bit-identical; keep it that way when editing either file.
"""

import math
from array import array

IDENTITY, SIGMOID, TANH, RELU, ONE = 0, 1, 2, 3, 4


def matmul(a, a_rows, a_cols, b, b_cols):
    out = array("d", bytes(8 * a_rows * b_cols))
    for i in range(a_rows):
        arow = i * a_cols
        orow = i * b_cols
        for j in range(b_cols):
            acc = 0.0
            for k in range(a_cols):
                acc += a[arow + k] * b[k * b_cols + j]
            out[orow + j] = acc
    return out


def matvec(w, rows, cols, x):
    out = array("d", bytes(8 * rows))
    for i in range(rows):
        base = i * cols
        acc = 0.0
        for j in range(cols):
            acc += w[base + j] * x[j]
        out[i] = acc
    return out


def rmatvec(w, rows, cols, u):
    # W^T u without materializing the transpose
    out = array("d", bytes(8 * cols))
    for j in range(cols):
        acc = 0.0
        for i in range(rows):
            acc += w[i * cols + j] * u[i]
        out[j] = acc
    return out


def transpose(a, rows, cols):
    out = array("d", bytes(8 * rows * cols))
    for i in range(rows):
        for j in range(cols):
            out[j * rows + i] = a[i * cols + j]
    return out


def hadamard(a, b):
    return array("d", [p * q for p, q in zip(a, b)])


def outer(u, v):
    out = array("d")
    for p in u:
        out.extend([p * q for q in v])
    return out


def axpy(alpha, a, b):
    return array("d", [alpha * p + q for p, q in zip(a, b)])


def drop_last_column(w, rows, cols):
    out = array("d")
    for i in range(rows):
        out.extend(w[i * cols:(i + 1) * cols - 1])
    return out


def _sigmoid(t):
    if t >= 0.0:
        return 1.0 / (1.0 + math.exp(-t))
    e = math.exp(t)
    return e / (1.0 + e)


def _apply(code, t):
    if code == IDENTITY:
        return t
    if code == SIGMOID:
        return _sigmoid(t)
    if code == TANH:
        return math.tanh(t)
    if code == RELU:
        return t if t > 0.0 else 0.0
    return 1.0


def _deriv(code, t):
    if code == IDENTITY:
        return 1.0
    if code == SIGMOID:
        s = _sigmoid(t)
        return s * (1.0 - s)
    if code == TANH:
        th = math.tanh(t)
        return 1.0 - th * th
    if code == RELU:
        return 1.0 if t > 0.0 else 0.0
    return 0.0


def act_apply(codes, y):
    return array("d", [_apply(c, t) for c, t in zip(codes, y)])


def act_deriv(codes, y):
    return array("d", [_deriv(c, t) for c, t in zip(codes, y)])

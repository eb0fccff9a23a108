# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels over flat row-major ``array('d')`` buffers.

Same contract and summation order as ``_pykernels``.
"""

from cpython cimport array
from libc.math cimport exp, tanh
import array as _array

cdef array.array _DOUBLE = _array.array("d")

DEF IDENTITY = 0
DEF SIGMOID = 1
DEF TANH = 2
DEF RELU = 3


cdef inline array.array _new(Py_ssize_t n):
    return array.clone(_DOUBLE, n, zero=True)


def matmul(const double[::1] a, Py_ssize_t a_rows, Py_ssize_t a_cols,
           const double[::1] b, Py_ssize_t b_cols):
    cdef array.array out = _new(a_rows * b_cols)
    cdef double* o = out.data.as_doubles
    cdef Py_ssize_t i, j, k
    cdef double acc
    for i in range(a_rows):
        for j in range(b_cols):
            acc = 0.0
            for k in range(a_cols):
                acc += a[i * a_cols + k] * b[k * b_cols + j]
            o[i * b_cols + j] = acc
    return out


def matvec(const double[::1] w, Py_ssize_t rows, Py_ssize_t cols,
           const double[::1] x):
    cdef array.array out = _new(rows)
    cdef double* o = out.data.as_doubles
    cdef Py_ssize_t i, j
    cdef double acc
    for i in range(rows):
        acc = 0.0
        for j in range(cols):
            acc += w[i * cols + j] * x[j]
        o[i] = acc
    return out


def rmatvec(const double[::1] w, Py_ssize_t rows, Py_ssize_t cols,
            const double[::1] u):
    cdef array.array out = _new(cols)
    cdef double* o = out.data.as_doubles
    cdef Py_ssize_t i, j
    cdef double acc
    for j in range(cols):
        acc = 0.0
        for i in range(rows):
            acc += w[i * cols + j] * u[i]
        o[j] = acc
    return out


def transpose(const double[::1] a, Py_ssize_t rows, Py_ssize_t cols):
    cdef array.array out = _new(rows * cols)
    cdef double* o = out.data.as_doubles
    cdef Py_ssize_t i, j
    for i in range(rows):
        for j in range(cols):
            o[j * rows + i] = a[i * cols + j]
    return out


def hadamard(const double[::1] a, const double[::1] b):
    cdef Py_ssize_t n = a.shape[0], i
    cdef array.array out = _new(n)
    cdef double* o = out.data.as_doubles
    for i in range(n):
        o[i] = a[i] * b[i]
    return out


def outer(const double[::1] u, const double[::1] v):
    cdef Py_ssize_t m = u.shape[0], n = v.shape[0], i, j
    cdef array.array out = _new(m * n)
    cdef double* o = out.data.as_doubles
    for i in range(m):
        for j in range(n):
            o[i * n + j] = u[i] * v[j]
    return out


def axpy(double alpha, const double[::1] a, const double[::1] b):
    cdef Py_ssize_t n = a.shape[0], i
    cdef array.array out = _new(n)
    cdef double* o = out.data.as_doubles
    for i in range(n):
        o[i] = alpha * a[i] + b[i]
    return out


def drop_last_column(const double[::1] w, Py_ssize_t rows, Py_ssize_t cols):
    cdef Py_ssize_t keep = cols - 1, i, j
    cdef array.array out = _new(rows * keep)
    cdef double* o = out.data.as_doubles
    for i in range(rows):
        for j in range(keep):
            o[i * keep + j] = w[i * cols + j]
    return out


cdef inline double _sigmoid(double t) nogil:
    cdef double e
    if t >= 0.0:
        return 1.0 / (1.0 + exp(-t))
    e = exp(t)
    return e / (1.0 + e)


cdef inline double _apply(signed char code, double t) nogil:
    if code == IDENTITY:
        return t
    if code == SIGMOID:
        return _sigmoid(t)
    if code == TANH:
        return tanh(t)
    if code == RELU:
        return t if t > 0.0 else 0.0
    return 1.0


cdef inline double _deriv(signed char code, double t) nogil:
    cdef double s
    if code == IDENTITY:
        return 1.0
    if code == SIGMOID:
        s = _sigmoid(t)
        return s * (1.0 - s)
    if code == TANH:
        s = tanh(t)
        return 1.0 - s * s
    if code == RELU:
        return 1.0 if t > 0.0 else 0.0
    return 0.0


def act_apply(const signed char[::1] codes, const double[::1] y):
    cdef Py_ssize_t n = y.shape[0], i
    cdef array.array out = _new(n)
    cdef double* o = out.data.as_doubles
    for i in range(n):
        o[i] = _apply(codes[i], y[i])
    return out


def act_deriv(const signed char[::1] codes, const double[::1] y):
    cdef Py_ssize_t n = y.shape[0], i
    cdef array.array out = _new(n)
    cdef double* o = out.data.as_doubles
    for i in range(n):
        o[i] = _deriv(codes[i], y[i])
    return out

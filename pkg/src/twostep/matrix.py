"""Dense double-precision matrices and column vectors.

Values are immutable and stored row-major in flat ``array('d')`` buffers.
No broadcasting: every shape mismatch raises :class:`ShapeError`.
"""

from __future__ import annotations

import math
from array import array
from typing import Iterable, Sequence

from . import _backend


class ShapeError(ValueError):
    """Operand shapes are incompatible."""


def _finite_buffer(values: Iterable[float]) -> array:
    buf = array("d", values)
    for v in buf:
        if not math.isfinite(v):
            raise ValueError(f"non-finite entry {v!r}")
    return buf


class Matrix:
    """A ``rows x cols`` real matrix."""

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, rows: Sequence[Sequence[float]]):
        rows = [list(r) for r in rows]
        if not rows or not rows[0]:
            raise ShapeError("matrix needs at least one row and one column")
        ncols = len(rows[0])
        for i, r in enumerate(rows):
            if len(r) != ncols:
                raise ShapeError(f"row {i} has {len(r)} entries, expected {ncols}")
        self.rows = len(rows)
        self.cols = ncols
        self._data = _finite_buffer(v for r in rows for v in r)

    @classmethod
    def _wrap(cls, rows: int, cols: int, data: array) -> Matrix:
        m = cls.__new__(cls)
        m.rows, m.cols, m._data = rows, cols, data
        return m

    @classmethod
    def from_flat(cls, rows: int, cols: int, data: Iterable[float]) -> Matrix:
        if rows < 1 or cols < 1:
            raise ShapeError(f"invalid shape {rows}x{cols}")
        buf = _finite_buffer(data)
        if len(buf) != rows * cols:
            raise ShapeError(f"{len(buf)} values cannot fill a {rows}x{cols} matrix")
        return cls._wrap(rows, cols, buf)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> Matrix:
        return cls.from_flat(rows, cols, [0.0] * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> Matrix:
        return cls.from_flat(n, n, [1.0 if i == j else 0.0 for i in range(n) for j in range(n)])

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def data(self) -> array:
        """A copy of the flat row-major buffer."""
        return array("d", self._data)

    def __getitem__(self, ij: tuple[int, int]) -> float:
        i, j = ij
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(f"index {ij} out of range for shape {self.shape}")
        return self._data[i * self.cols + j]

    def row(self, i: int) -> list[float]:
        return list(self._data[i * self.cols:(i + 1) * self.cols])

    def column(self, j: int) -> ColumnVector:
        return ColumnVector._wrap(array("d", self._data[j::self.cols]))

    def tolist(self) -> list[list[float]]:
        return [self.row(i) for i in range(self.rows)]

    def replace(self, i: int, j: int, value: float) -> Matrix:
        """Copy of this matrix with entry ``(i, j)`` set to ``value``."""
        self[i, j]
        data = array("d", self._data)
        data[i * self.cols + j] = value
        return Matrix._wrap(self.rows, self.cols, data)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self._data == other._data

    def __hash__(self):
        return hash((self.rows, self.cols, self._data.tobytes()))

    def __repr__(self):
        return f"Matrix({self.tolist()!r})"


class ColumnVector:
    """A real column vector of dimension ``dim``."""

    __slots__ = ("_data",)

    def __init__(self, values: Iterable[float]):
        buf = _finite_buffer(values)
        if len(buf) < 1:
            raise ShapeError("column vector needs dimension >= 1")
        self._data = buf

    @classmethod
    def _wrap(cls, data: array) -> ColumnVector:
        v = cls.__new__(cls)
        v._data = data
        return v

    @classmethod
    def zeros(cls, n: int) -> ColumnVector:
        return cls([0.0] * n)

    @classmethod
    def ones(cls, n: int) -> ColumnVector:
        return cls([1.0] * n)

    @property
    def dim(self) -> int:
        return len(self._data)

    @property
    def data(self) -> array:
        return array("d", self._data)

    def __len__(self):
        return len(self._data)

    def __getitem__(self, i):
        return self._data[i]

    def __iter__(self):
        return iter(self._data)

    def tolist(self) -> list[float]:
        return list(self._data)

    def append(self, value: float) -> ColumnVector:
        """Copy of this vector with ``value`` appended as a new last coordinate."""
        data = array("d", self._data)
        data.append(value)
        return ColumnVector._wrap(data)

    def drop_last(self) -> ColumnVector:
        if self.dim < 2:
            raise ShapeError("cannot drop the only coordinate")
        return ColumnVector._wrap(self._data[:-1])

    def as_matrix(self) -> Matrix:
        """The vector as a ``dim x 1`` matrix."""
        return Matrix._wrap(self.dim, 1, array("d", self._data))

    def __eq__(self, other):
        if not isinstance(other, ColumnVector):
            return NotImplemented
        return self._data == other._data

    def __hash__(self):
        return hash(self._data.tobytes())

    def __repr__(self):
        return f"ColumnVector({self.tolist()!r})"


def as_vector(x) -> ColumnVector:
    return x if isinstance(x, ColumnVector) else ColumnVector(x)


def matmul(a: Matrix, b: Matrix) -> Matrix:
    if a.cols != b.rows:
        raise ShapeError(f"matmul: {a.rows}x{a.cols} @ {b.rows}x{b.cols}")
    data = _backend.kernels.matmul(a._data, a.rows, a.cols, b._data, b.cols)
    return Matrix._wrap(a.rows, b.cols, data)


def matvec(w: Matrix, x: ColumnVector) -> ColumnVector:
    if w.cols != len(x._data):
        raise ShapeError(f"matvec: {w.rows}x{w.cols} @ vector of dim {x.dim}")
    return ColumnVector._wrap(_backend.kernels.matvec(w._data, w.rows, w.cols, x._data))


def rmatvec(w: Matrix, u: ColumnVector) -> ColumnVector:
    """``transpose(w) @ u`` without building the transpose."""
    if w.rows != len(u._data):
        raise ShapeError(f"rmatvec: ({w.rows}x{w.cols})^T @ vector of dim {u.dim}")
    return ColumnVector._wrap(_backend.kernels.rmatvec(w._data, w.rows, w.cols, u._data))


def transpose(a: Matrix) -> Matrix:
    return Matrix._wrap(a.cols, a.rows, _backend.kernels.transpose(a._data, a.rows, a.cols))


def hadamard(a: ColumnVector, b: ColumnVector) -> ColumnVector:
    if len(a._data) != len(b._data):
        raise ShapeError(f"hadamard: dims {a.dim} and {b.dim}")
    return ColumnVector._wrap(_backend.kernels.hadamard(a._data, b._data))


def outer(u: ColumnVector, v: ColumnVector) -> Matrix:
    return Matrix._wrap(u.dim, v.dim, _backend.kernels.outer(u._data, v._data))


def drop_last_column(w: Matrix) -> Matrix:
    """Return ``w`` without its last column (the bias column)."""
    if w.cols < 2:
        raise ShapeError(f"drop_last_column needs at least 2 columns, got {w.rows}x{w.cols}")
    data = _backend.kernels.drop_last_column(w._data, w.rows, w.cols)
    return Matrix._wrap(w.rows, w.cols - 1, data)


def axpy(alpha: float, a: Matrix, b: Matrix) -> Matrix:
    """``alpha * a + b``."""
    if a.shape != b.shape:
        raise ShapeError(f"axpy: shapes {a.rows}x{a.cols} and {b.rows}x{b.cols}")
    return Matrix._wrap(a.rows, a.cols, _backend.kernels.axpy(float(alpha), a._data, b._data))


def vaxpy(alpha: float, a: ColumnVector, b: ColumnVector) -> ColumnVector:
    """Vector form of :func:`axpy`."""
    if a.dim != b.dim:
        raise ShapeError(f"vaxpy: dims {a.dim} and {b.dim}")
    return ColumnVector._wrap(_backend.kernels.axpy(float(alpha), a._data, b._data))


def dot(a: ColumnVector, b: ColumnVector) -> float:
    if a.dim != b.dim:
        raise ShapeError(f"dot: dims {a.dim} and {b.dim}")
    return math.fsum(p * q for p, q in zip(a._data, b._data))

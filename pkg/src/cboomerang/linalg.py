"""Exact matrix arithmetic over F_q (small dense matrices as nested lists)."""

from __future__ import annotations

import numpy as np


class SingularMatrixError(ValueError):
    pass


def mat_vec(field, A, v):
    """A v for v of shape (..., n); returns the same shape."""
    A = np.asarray(A, dtype=np.int64)
    v = np.asarray(v, dtype=np.int64)
    out = np.zeros(v.shape[:-1] + (A.shape[0],), dtype=np.int64)
    for i in range(A.shape[0]):
        acc = np.zeros(v.shape[:-1], dtype=np.int64)
        for j in range(A.shape[1]):
            if A[i, j]:
                acc = field.add(acc, field.mul(np.int64(A[i, j]), v[..., j]))
        out[..., i] = acc
    return out


def mat_inv(field, A):
    """Gauss-Jordan inverse; raises SingularMatrixError."""
    A = [[int(x) for x in row] for row in A]
    n = len(A)
    if any(len(row) != n for row in A):
        raise ValueError("matrix must be square")
    M = [row + [1 if i == j else 0 for j in range(n)] for i, row in enumerate(A)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if M[r][col]), None)
        if pivot is None:
            raise SingularMatrixError("matrix is singular over the field")
        M[col], M[pivot] = M[pivot], M[col]
        s = field.inv(M[col][col])
        M[col] = [field.mul(s, x) for x in M[col]]
        for r in range(n):
            if r != col and M[r][col]:
                f = M[r][col]
                M[r] = [field.sub(x, field.mul(f, y)) for x, y in zip(M[r], M[col])]
    return [row[n:] for row in M]


def is_invertible(field, A):
    try:
        mat_inv(field, A)
    except SingularMatrixError:
        return False
    return True


def identity(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]

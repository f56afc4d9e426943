"""F_q^n with flat integer indexing, and tabulated maps F_q^n -> F_q^n.

A vector (x_1, ..., x_n) has flat index sum(x_i * q**(n - i)), so ascending
flat order is lexicographic order with x_1 most significant.  For n = 1 the
flat index is the element encoding itself.
"""

from __future__ import annotations

import numpy as np

from .errors import NotBijectiveError
from .field import check_cap


class VectorSpace:
    def __init__(self, field, n=1):
        self.field = field
        self.n = int(n)
        self.size = field.q**self.n
        self._place = field.q ** np.arange(self.n - 1, -1, -1, dtype=np.int64)

    def __repr__(self):
        return f"VectorSpace({self.field!r}, n={self.n})"

    def __eq__(self, other):
        return isinstance(other, VectorSpace) and (self.field, self.n) == (other.field, other.n)

    def indices(self, cap=None):
        check_cap(self.size, cap, "vector space enumeration")
        return np.arange(self.size, dtype=np.int64)

    def decode(self, idx):
        """Flat indices -> coordinate arrays of shape (..., n)."""
        idx = np.asarray(idx, dtype=np.int64)
        return (idx[..., None] // self._place) % self.field.q

    def encode(self, vecs):
        vecs = np.asarray(vecs, dtype=np.int64)
        if vecs.shape[-1] != self.n:
            raise ValueError(f"expected vectors of length {self.n}")
        return (vecs * self._place).sum(axis=-1)

    def index(self, v):
        """Flat index of a single vector given as an int (n = 1) or a sequence."""
        if isinstance(v, (int, np.integer)):
            if self.n != 1:
                raise ValueError("scalar difference given for a vector space of dimension > 1")
            return int(self.field._check(v))
        v = [int(self.field._check(x)) for x in v]
        if len(v) != self.n:
            raise ValueError(f"expected a vector of length {self.n}")
        return int(self.encode(np.array(v)))

    def vector(self, idx):
        return tuple(int(x) for x in self.decode(idx))

    def _lift(self, op, *args):
        if self.n == 1:
            return op(*(np.asarray(a, dtype=np.int64) for a in args))
        return self.encode(op(*(self.decode(a) for a in args)))

    def add(self, u, v):
        return self._lift(self.field.add, u, v)

    def sub(self, u, v):
        return self._lift(self.field.sub, u, v)

    def scale(self, c, u):
        c = np.int64(c)
        if self.n == 1:
            return self.field.mul(c, np.asarray(u, dtype=np.int64))
        return self.encode(self.field.mul(c, self.decode(u)))


class FieldMap:
    """A map F_q^n -> F_q^n stored as a lookup table over flat indices."""

    def __init__(self, space, values, name=None):
        self.space = space
        self.values = np.asarray(values, dtype=np.int64)
        if self.values.shape != (space.size,):
            raise ValueError("table size does not match the vector space")
        self.name = name or "F"
        self._inverse = None

    @classmethod
    def from_callable(cls, field, func, n=1, name=None, cap=None):
        """Tabulate ``func``; it receives coordinates (N,) for n = 1, else (N, n)."""
        space = VectorSpace(field, n)
        idx = space.indices(cap)
        if n == 1:
            vals = np.asarray(func(idx), dtype=np.int64)
        else:
            vals = space.encode(np.asarray(func(space.decode(idx)), dtype=np.int64))
        return cls(space, vals, name)

    @property
    def field(self):
        return self.space.field

    def __call__(self, idx):
        return self.values[np.asarray(idx, dtype=np.int64)]

    def __repr__(self):
        return f"FieldMap({self.name} on {self.space!r})"

    def is_bijective(self):
        return len(np.unique(self.values)) == self.space.size

    def inverse(self):
        if self._inverse is None:
            if not self.is_bijective():
                raise NotBijectiveError(f"{self.name} is not a bijection")
            inv = np.empty_like(self.values)
            inv[self.values] = np.arange(self.space.size, dtype=np.int64)
            self._inverse = FieldMap(self.space, inv, f"{self.name}^-1")
        return self._inverse


def monomial_map(field, d, cap=None):
    return FieldMap.from_callable(field, lambda x: field.pow(x, d), name=f"x^{d}", cap=cap)

"""Univariate/multivariate polynomials over F_q and the permutation-monomial witnesses."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import FieldError, HypothesisError


@dataclass(frozen=True)
class UniPoly:
    """Polynomial with ascending coefficients (canonical element encodings)."""

    coeffs: tuple = ()

    def __post_init__(self):
        c = [int(v) for v in self.coeffs]
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    @property
    def degree(self):
        return len(self.coeffs) - 1  # -1 for the zero polynomial

    def is_zero(self):
        return not self.coeffs

    @classmethod
    def monomial(cls, d, coeff=1):
        return cls((0,) * d + (coeff,))

    def to_json(self):
        return list(self.coeffs)

    def __call__(self, field, x):
        return poly_eval(field, self, x)


def poly_eval(field, f, x):
    """Horner evaluation; works on scalars and arrays."""
    if isinstance(x, (int, np.integer)):
        acc = 0
        for c in reversed(f.coeffs):
            acc = field.add(field.mul(acc, int(x)), c)
        return acc
    x = np.asarray(x, dtype=np.int64)
    acc = np.zeros_like(x)
    for c in reversed(f.coeffs):
        acc = field.add(field.mul(acc, x), np.int64(c))
    return acc


def poly_add(field, f, g):
    n = max(len(f.coeffs), len(g.coeffs))
    a = f.coeffs + (0,) * (n - len(f.coeffs))
    b = g.coeffs + (0,) * (n - len(g.coeffs))
    return UniPoly(tuple(field.add(x, y) for x, y in zip(a, b)))


def poly_sub(field, f, g):
    return poly_add(field, f, UniPoly(tuple(field.neg(c) for c in g.coeffs)))


def poly_mul(field, f, g):
    if f.is_zero() or g.is_zero():
        return UniPoly()
    out = [0] * (len(f.coeffs) + len(g.coeffs) - 1)
    for i, a in enumerate(f.coeffs):
        for j, b in enumerate(g.coeffs):
            out[i + j] = field.add(out[i + j], field.mul(a, b))
    return UniPoly(tuple(out))


def divide(field, f, g):
    """Euclidean division f = quot * g + rem with deg rem < deg g."""
    if g.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    rem = list(f.coeffs)
    dg = g.degree
    inv_lead = field.inv(g.coeffs[-1])
    quot = [0] * max(len(rem) - dg, 0)
    while len(rem) - 1 >= dg and rem:
        shift = len(rem) - 1 - dg
        coef = field.mul(rem[-1], inv_lead)
        quot[shift] = coef
        for i, gi in enumerate(g.coeffs):
            rem[shift + i] = field.sub(rem[shift + i], field.mul(coef, gi))
        while rem and rem[-1] == 0:
            rem.pop()
    return UniPoly(tuple(quot)), UniPoly(tuple(rem))


def roots(field, f, cap=None):
    """All roots of f in F_q by exhaustive evaluation."""
    xs = field.elements(cap)
    return [int(x) for x in xs[poly_eval(field, f, xs) == 0]]


class MultiPoly:
    """Sparse multivariate polynomial {exponent tuple: coefficient}.

    Only evaluation is supported; the variables are positional.
    """

    def __init__(self, terms, nvars):
        self.nvars = int(nvars)
        clean = {}
        for exps, coeff in dict(terms).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != self.nvars:
                raise ValueError(f"exponent vector {exps} does not match {self.nvars} variables")
            if int(coeff):
                clean[exps] = int(coeff)
        self.terms = dict(sorted(clean.items()))

    @classmethod
    def constant(cls, c, nvars):
        return cls({(0,) * nvars: c}, nvars)

    def is_zero(self):
        return not self.terms

    def is_constant(self):
        return all(not any(e) for e in self.terms)

    def eval(self, field, xs):
        """Evaluate at points of shape (..., nvars)."""
        xs = np.asarray(xs, dtype=np.int64)
        out = np.zeros(xs.shape[:-1], dtype=np.int64)
        for exps, coeff in self.terms.items():
            term = np.full(xs.shape[:-1], coeff, dtype=np.int64)
            for k, e in enumerate(exps):
                if e:
                    term = field.mul(term, field.pow(xs[..., k], e))
            out = field.add(out, term)
        return out

    def to_json(self):
        return {"terms": [[list(e), c] for e, c in self.terms.items()]}

    @classmethod
    def from_json(cls, obj, nvars):
        if obj is None:
            return None
        if "const" in obj:
            return cls.constant(obj["const"], nvars)
        return cls({tuple(e): c for e, c in obj["terms"]}, nvars)

    def __repr__(self):
        return f"MultiPoly({self.terms}, nvars={self.nvars})"


# -- permutation monomials -----------------------------------------------------

@dataclass(frozen=True)
class MonomialSpec:
    d: int
    is_permutation: bool
    char_divides: bool
    inverse_exponent: int | None


def make_monomial_spec(field, d):
    d = int(d)
    if d <= 0:
        raise ValueError(f"exponent must be positive, got {d}")
    order = field.q - 1
    perm = math.gcd(d, order) == 1
    inv = None
    if perm:
        # q = 2: the multiplicative group is trivial and every exponent acts as 1
        inv = pow(d, -1, order) if order > 1 else 1
    return MonomialSpec(d, perm, d % field.p == 0, inv)


def is_bijection(field, f, cap=None):
    """Whether the vectorized map f permutes F_q."""
    xs = field.elements(cap)
    return len(np.unique(np.asarray(f(xs)))) == field.q


def reduce_p_power_exponent(field, D):
    """Split D = d * p**i with p not dividing d."""
    D = int(D)
    if D < 1:
        raise ValueError("exponent must be positive")
    i = 0
    while D % field.p == 0:
        D //= field.p
        i += 1
    return D, i


def _require_valid(field, m):
    if not m.is_permutation:
        raise HypothesisError(f"x^{m.d} is not a permutation of F_{field.q}")
    if m.char_divides:
        raise HypothesisError(f"characteristic {field.p} divides {m.d}")
    if m.d <= 1:
        raise HypothesisError("exponent must exceed 1")


def factor_witness(field, m, a):
    """Factor x^d - a = (x - b) g(x) and check g is root free over F_q.

    Returns ``(b, g, g_rootfree)``.
    """
    _require_valid(field, m)
    if a == 0:
        raise FieldError("a must be nonzero")
    b = field.pow(a, m.inverse_exponent)
    target = poly_sub(field, UniPoly.monomial(m.d), UniPoly((a,)))
    g, rem = divide(field, target, UniPoly((field.neg(b), 1)))
    if not rem.is_zero():
        raise ArithmeticError("x - b does not divide x^d - a")  # b^d != a
    return b, g, not roots(field, g)


def eisenstein_witness(field, m, a, b):
    """Check the Eisenstein data certifying z^d - a x^d - b irreducible.

    The constant coefficient in z, a x^d + b, must factor as (x - r) g(x)
    where r is the unique root of x^d = -b/a and g(r) != 0, so that
    x - r divides it exactly once.
    """
    _require_valid(field, m)
    if a == 0 or b == 0:
        raise FieldError("a and b must be nonzero")
    r = field.pow(field.neg(field.div(b, a)), m.inverse_exponent)
    const = UniPoly((b,) + (0,) * (m.d - 1) + (a,))
    g, rem = divide(field, const, UniPoly((field.neg(r), 1)))
    if not rem.is_zero():
        return False
    return poly_eval(field, g, r) != 0 and not roots(field, g)

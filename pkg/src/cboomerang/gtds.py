"""Generalized triangular dynamical systems (GTDS) and GTDS-based ciphers.

A GTDS on F_q^n has branches

    f_i(x) = p_i(x_i) * g_i(x_{i+1}, ..., x_n) + h_i(x_{i+1}, ..., x_n),  i < n
    f_n(x) = p_n(x_n)

with univariate permutations p_i and zero-free g_i, which makes it
invertible by back substitution from the last branch.  Branch indices in
messages and reports are 1-based; arrays are 0-based.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field

import jsonschema
import numpy as np

from .errors import HypothesisError
from .field import GF, check_cap
from .linalg import identity, is_invertible, mat_inv, mat_vec
from .polynomial import MultiPoly, UniPoly, make_monomial_spec, poly_eval
from .space import FieldMap, VectorSpace
from .uniformity import _check_c

_POLY = {
    "oneOf": [
        {"type": "null"},
        {"type": "object", "required": ["const"], "properties": {"const": {"type": "integer"}}},
        {
            "type": "object",
            "required": ["terms"],
            "properties": {
                "terms": {
                    "type": "array",
                    "items": {
                        "type": "array",
                        "minItems": 2,
                        "maxItems": 2,
                        "prefixItems": [
                            {"type": "array", "items": {"type": "integer", "minimum": 0}},
                            {"type": "integer"},
                        ],
                    },
                }
            },
        },
    ]
}

_VEC_LIST = {"type": "array", "items": {"type": "array", "items": {"type": "integer", "minimum": 0}}}

SPEC_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["field", "branches"],
    "properties": {
        "field": {
            "type": "object",
            "required": ["p"],
            "properties": {
                "p": {"type": "integer", "minimum": 2},
                "n": {"type": "integer", "minimum": 1},
                "modulus": {"type": "array", "items": {"type": "integer", "minimum": 0}},
            },
        },
        "branches": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "required": ["p"],
                "properties": {
                    "p": {
                        "oneOf": [
                            {"type": "object", "required": ["monomial"],
                             "properties": {"monomial": {"type": "integer", "minimum": 1}}},
                            {"type": "object", "required": ["poly"],
                             "properties": {"poly": {"type": "array", "items": {"type": "integer", "minimum": 0}}}},
                        ]
                    },
                    "g": _POLY,
                    "h": _POLY,
                },
            },
        },
        "matrix": _VEC_LIST,
        "constants": _VEC_LIST,
        "keys": _VEC_LIST,
    },
}


def _reduced_degree(e, q):
    """Degree of x^e as a function on F_q (exponents taken mod x^q - x)."""
    return 0 if e == 0 else (e - 1) % (q - 1) + 1


@dataclass
class Branch:
    p: object  # int monomial exponent or UniPoly
    g: MultiPoly | None = None
    h: MultiPoly | None = None

    @property
    def is_monomial(self):
        return isinstance(self.p, int)


class GTDS:
    def __init__(self, field, branches):
        self.field = field
        self.branches = list(branches)
        self.n = len(self.branches)
        self.space = VectorSpace(field, self.n)
        self._p_inverse = {}

    # -- construction / serialization ---------------------------------------

    @classmethod
    def spn(cls, field, exponents):
        """Parallel monomial layer (x_1^d_1, ..., x_n^d_n)."""
        return cls(field, [Branch(int(d)) for d in exponents])

    @classmethod
    def from_json(cls, obj):
        jsonschema.validate(obj, SPEC_SCHEMA)
        field = GF.from_json(obj["field"])
        n = len(obj["branches"])
        branches = []
        for i, b in enumerate(obj["branches"]):
            p = b["p"]
            perm = int(p["monomial"]) if "monomial" in p else UniPoly(tuple(p["poly"]))
            nv = n - i - 1
            branches.append(Branch(perm, MultiPoly.from_json(b.get("g"), nv), MultiPoly.from_json(b.get("h"), nv)))
        return cls(field, branches)

    def to_json(self):
        out = []
        for b in self.branches:
            p = {"monomial": b.p} if b.is_monomial else {"poly": b.p.to_json()}
            out.append({"p": p, "g": b.g.to_json() if b.g else None, "h": b.h.to_json() if b.h else None})
        return {"field": self.field.to_json(), "branches": out}

    # -- branch helpers -------------------------------------------------------

    def p_eval(self, i, x):
        b = self.branches[i]
        if b.is_monomial:
            return self.field.pow(np.asarray(x, dtype=np.int64), b.p)
        return poly_eval(self.field, b.p, np.asarray(x, dtype=np.int64))

    def p_inverse_eval(self, i, y):
        b = self.branches[i]
        y = np.asarray(y, dtype=np.int64)
        if b.is_monomial:
            m = make_monomial_spec(self.field, b.p)
            return self.field.pow(y, m.inverse_exponent)
        if i not in self._p_inverse:
            vals = self.p_eval(i, self.field.elements())
            inv = np.empty_like(vals)
            inv[vals] = np.arange(self.field.q, dtype=np.int64)
            self._p_inverse[i] = inv
        return self._p_inverse[i][y]

    def degree(self, i):
        b = self.branches[i]
        if b.is_monomial:
            return _reduced_degree(b.p, self.field.q)
        return max((_reduced_degree(e, self.field.q) for e, c in enumerate(b.p.coeffs) if c), default=-1)

    def _g(self, i, tail):
        g = self.branches[i].g
        if g is None:
            return np.ones(tail.shape[:-1], dtype=np.int64)
        return g.eval(self.field, tail)

    def _h(self, i, tail):
        h = self.branches[i].h
        if h is None:
            return np.zeros(tail.shape[:-1], dtype=np.int64)
        return h.eval(self.field, tail)

    def has_zero_h(self):
        return all(b.h is None or b.h.is_zero() for b in self.branches)

    # -- validation -----------------------------------------------------------

    def validate(self, cap=None):
        """List of human-readable violations; empty iff the GTDS is valid."""
        F = self.field
        issues = []
        xs = F.elements(cap)
        for i, b in enumerate(self.branches):
            label = i + 1
            if len(np.unique(self.p_eval(i, xs))) != F.q:
                issues.append(f"p_{label} not a permutation")
            nv = self.n - i - 1
            for name, poly in (("g", b.g), ("h", b.h)):
                if poly is not None and poly.nvars != nv:
                    issues.append(f"{name}_{label} must depend on exactly x_{label + 1}..x_{self.n}")
            if i == self.n - 1:
                if b.g is not None or b.h is not None:
                    issues.append(f"branch {label} is the last branch and takes no g or h")
                continue
            if b.g is not None and b.g.nvars == nv:
                check_cap(F.q**nv, cap, f"zero scan of g_{label}")
                tail_space = VectorSpace(F, nv)
                pts = tail_space.decode(tail_space.indices())
                vals = b.g.eval(F, pts)
                zeros = np.flatnonzero(vals == 0)
                if zeros.size:
                    at = ", ".join(f"x_{label + 1 + k} = {int(v)}" for k, v in enumerate(pts[zeros[0]]))
                    issues.append(f"g_{label} has zero at {at}")
        return issues

    def is_valid(self):
        return not self.validate()

    # -- evaluation -----------------------------------------------------------

    def eval(self, x):
        """Apply the GTDS to vectors of shape (..., n)."""
        x = np.asarray(x, dtype=np.int64)
        out = np.empty_like(x)
        for i in range(self.n):
            pi = self.p_eval(i, x[..., i])
            if i == self.n - 1:
                out[..., i] = pi
            else:
                tail = x[..., i + 1:]
                out[..., i] = self.field.add(self.field.mul(pi, self._g(i, tail)), self._h(i, tail))
        return out

    def invert(self, y):
        """Back substitution: x_n = p_n^-1(y_n), then x_i = p_i^-1((y_i - h_i) / g_i)."""
        y = np.asarray(y, dtype=np.int64)
        x = np.empty_like(y)
        F = self.field
        for i in range(self.n - 1, -1, -1):
            if i == self.n - 1:
                x[..., i] = self.p_inverse_eval(i, y[..., i])
                continue
            tail = x[..., i + 1:]
            num = F.sub(y[..., i], self._h(i, tail))
            x[..., i] = self.p_inverse_eval(i, F.div(num, self._g(i, tail)))
        return x

    def __call__(self, x):
        return self.eval(x)

    def as_map(self, cap=None):
        return FieldMap.from_callable(self.field, self.eval, self.n, name="GTDS", cap=cap)

    # -- hypotheses -----------------------------------------------------------

    def p_has_small_differential(self, i):
        """delta(p_i) < q, i.e. p_i(x + a) - p_i(x) is non-constant for every a != 0."""
        F = self.field
        xs = F.elements()
        base = self.p_eval(i, xs)
        for a in range(1, F.q):
            diff = F.sub(self.p_eval(i, F.add(xs, np.int64(a))), base)
            if np.all(diff == diff[0]):
                return False
        return True

    def monomial_exponents(self):
        """Exponents d_i after checking the c-BCT bound hypotheses."""
        F = self.field
        if not self.has_zero_h():
            bad = [i + 1 for i, b in enumerate(self.branches) if not (b.h is None or b.h.is_zero())]
            raise HypothesisError(f"h_{bad[0]} is nonzero; the c-BCT bound needs h_i = 0 for all i")
        out = []
        for i, b in enumerate(self.branches):
            if not b.is_monomial:
                raise HypothesisError(f"p_{i + 1} is not a monomial")
            m = make_monomial_spec(F, b.p)
            if not m.is_permutation:
                raise HypothesisError(f"p_{i + 1} = x^{b.p} with gcd({b.p}, {F.q - 1}) != 1")
            if m.char_divides:
                raise HypothesisError(f"p_{i + 1} = x^{b.p} has exponent divisible by {F.p}")
            out.append(self.degree(i))
        return out


# -- bounds -------------------------------------------------------------------

def _vec(gtds, v):
    v = [int(gtds.field._check(x)) for x in v]
    if len(v) != gtds.n:
        raise ValueError(f"expected a vector of length {gtds.n}")
    return v


def hadamard_weight(a, b):
    """wt(a * b): positions where both coordinates are nonzero."""
    if len(a) != len(b):
        raise ValueError("vectors must have equal length")
    return sum(1 for x, y in zip(a, b) if x and y)


def hamming_weight(v):
    return sum(1 for x in v if x)


def _ddt_hypotheses(gtds, c):
    c = _check_c(gtds.field, c)
    if c == 1:
        raise HypothesisError("the GTDS c-DDT bound needs c not in {0, 1}")
    for i in range(gtds.n):
        if not gtds.p_has_small_differential(i):
            raise HypothesisError(f"delta(p_{i + 1}) = q; the bound needs delta(p_i) < q")
    return c


def ddt_bound(gtds, c, dx):
    """deg(p_n) * prod_{i<n} (deg p_i if dx_i != 0 else q)."""
    _ddt_hypotheses(gtds, c)
    dx = _vec(gtds, dx)
    bound = gtds.degree(gtds.n - 1)
    for i in range(gtds.n - 1):
        bound *= gtds.degree(i) if dx[i] else gtds.field.q
    return bound


def corollary_ddt_bound(gtds, c, dx, d_max):
    """d * q^(n-1-w) * d^w with w the weight of dx restricted to the first n-1 branches."""
    _ddt_hypotheses(gtds, c)
    dx = _vec(gtds, dx)
    if not all(1 < gtds.degree(i) <= d_max for i in range(gtds.n)):
        raise HypothesisError(f"every p_i must have 1 < degree <= {d_max}")
    w = hamming_weight(dx[:-1])
    return d_max * gtds.field.q ** (gtds.n - 1 - w) * d_max**w


def bct_bound(gtds, c, a, b, as_printed=False):
    """Product bound on the c-BCT entry of an h = 0 monomial GTDS.

    Last branch: q if d_n = 1 and c = 1, 1 if d_n = 1 and c != 1,
    q if a_n b_n = 0, d_n^2 otherwise.  Other branches: q if d_i = 1 or
    a_i b_i = 0, d_i^2 otherwise.

    With d_n = 1, c = -1 and a_n = 0 the last branch is the identity's
    boomerang system with c^2 = 1 and has q solutions, so that case gets
    the factor q unless ``as_printed`` asks for the bare product above.
    """
    F = gtds.field
    c = _check_c(F, c)
    ds = gtds.monomial_exponents()
    a, b = _vec(gtds, a), _vec(gtds, b)
    q = F.q
    n = gtds.n
    dn = ds[-1]
    if dn == 1:
        if c == 1 or (not as_printed and a[-1] == 0 and F.mul(c, c) == 1):
            last = q
        else:
            last = 1
    elif a[-1] == 0 or b[-1] == 0:
        last = q
    else:
        last = dn * dn
    bound = last
    for i in range(n - 1):
        if ds[i] == 1 or a[i] == 0 or b[i] == 0:
            bound *= q
        else:
            bound *= ds[i] ** 2
    return bound


def corollary_bct_bound(gtds, c, a, b, d_max):
    """q^(n - w) * d^(2w) with w = wt(a * b), for 1 < d_i <= d_max."""
    _check_c(gtds.field, c)
    ds = gtds.monomial_exponents()
    if not all(1 < d <= d_max for d in ds):
        raise HypothesisError(f"every d_i must satisfy 1 < d_i <= {d_max}")
    w = hadamard_weight(_vec(gtds, a), _vec(gtds, b))
    return gtds.field.q ** (gtds.n - w) * d_max ** (2 * w)


def corollary_bct_probability(gtds, c, a, b, d_max):
    return corollary_bct_bound(gtds, c, a, b, d_max) / gtds.field.q**gtds.n


# -- rounds and ciphers ------------------------------------------------------

@dataclass
class RoundSpec:
    """x -> A F(x) + constant + key."""

    gtds: GTDS
    matrix: list = None
    constant: list = None
    key: list = None
    _inv: list = dc_field(default=None, repr=False)

    def __post_init__(self):
        n = self.gtds.n
        F = self.gtds.field
        self.matrix = identity(n) if self.matrix is None else [[int(x) for x in r] for r in self.matrix]
        self.constant = [0] * n if self.constant is None else [int(x) for x in self.constant]
        self.key = [0] * n if self.key is None else [int(x) for x in self.key]
        if len(self.matrix) != n or len(self.constant) != n or len(self.key) != n:
            raise ValueError(f"round data must have dimension {n}")
        self._inv = mat_inv(F, self.matrix)

    @property
    def matrix_inverse(self):
        return self._inv

    def offset(self):
        F = self.gtds.field
        return [F.add(x, y) for x, y in zip(self.constant, self.key)]


def round_eval(r, x):
    F = r.gtds.field
    y = mat_vec(F, r.matrix, r.gtds.eval(x))
    return F.add(y, np.asarray(r.offset(), dtype=np.int64))


def round_invert(r, y):
    F = r.gtds.field
    y = F.sub(np.asarray(y, dtype=np.int64), np.asarray(r.offset(), dtype=np.int64))
    return r.gtds.invert(mat_vec(F, r.matrix_inverse, y))


def cipher_eval(rounds, k0, x):
    F = rounds[0].gtds.field
    state = F.add(np.asarray(x, dtype=np.int64), np.asarray(k0, dtype=np.int64))
    for r in rounds:
        state = round_eval(r, state)
    return state


def cipher_invert(rounds, k0, y):
    F = rounds[0].gtds.field
    state = np.asarray(y, dtype=np.int64)
    for r in reversed(rounds):
        state = round_invert(r, state)
    return F.sub(state, np.asarray(k0, dtype=np.int64))


def rounds_from_json(obj, gtds):
    """RoundSpec list from the optional matrix/constants/keys entries.

    ``keys`` lists k_0, ..., k_r; the number of rounds is len(constants),
    or one round when only a matrix is given.  Returns ``(rounds, k0)``.
    """
    n = gtds.n
    matrix = obj.get("matrix")
    constants = obj.get("constants") or [[0] * n]
    keys = obj.get("keys") or [[0] * n] * (len(constants) + 1)
    if len(keys) != len(constants) + 1:
        raise ValueError("keys must list k_0 followed by one key per round")
    rounds = [RoundSpec(gtds, matrix, c, k) for c, k in zip(constants, keys[1:])]
    return rounds, list(keys[0])


def two_round_targets(r_i, r_next, c, b):
    """Right-hand sides (b1, b2) of the reduced two-round system.

    F(z) - c F(x) = A^-1 (b + c c_i - c_{i+1} + c k_i - k_{i+1})
    c F(z + a) - F(x + a) = A^-1 (c b + c_i - c c_{i+1} + k_i - c k_{i+1})
    """
    F = r_i.gtds.field
    if r_i.matrix != r_next.matrix:
        raise ValueError("the reduction needs the same matrix in both rounds")
    c = np.int64(c)
    b = np.asarray(b, dtype=np.int64)
    ci, cn = np.asarray(r_i.constant), np.asarray(r_next.constant)
    ki, kn = np.asarray(r_i.key), np.asarray(r_next.key)
    rhs1 = F.add(F.add(b, F.mul(c, ci)), F.sub(F.mul(c, ki), F.add(cn, kn)))
    rhs2 = F.add(F.add(F.mul(c, b), F.add(ci, ki)), F.neg(F.mul(c, F.add(cn, kn))))
    Ainv = r_i.matrix_inverse
    return [int(v) for v in mat_vec(F, Ainv, rhs1)], [int(v) for v in mat_vec(F, Ainv, rhs2)]


def two_round_bct_entry(r_i, r_next, c, a, b, cap=None):
    """#{x : R_{i+1}^-1(c^-1 R_i(x + a) + b) - R_{i+1}^-1(c R_i(x) + b) = a}."""
    if r_i.gtds.to_json() != r_next.gtds.to_json():
        raise ValueError("both rounds must share the same GTDS")
    F = r_i.gtds.field
    c = _check_c(F, c)
    sp = r_i.gtds.space
    xs = sp.decode(sp.indices(cap))
    a = np.asarray(_vec(r_i.gtds, a), dtype=np.int64)
    b = np.asarray(_vec(r_i.gtds, b), dtype=np.int64)
    c_inv = np.int64(F.inv(c))
    left = round_invert(r_next, F.add(F.mul(c_inv, round_eval(r_i, F.add(xs, a))), b))
    right = round_invert(r_next, F.add(F.mul(np.int64(c), round_eval(r_i, xs)), b))
    return int(np.count_nonzero(np.all(F.sub(left, right) == a, axis=-1)))


def two_round_bct_row(r_i, r_next, c, a, cap=None):
    """two_round_bct_entry for one a and every b, indexed by flat b."""
    if r_i.gtds.to_json() != r_next.gtds.to_json():
        raise ValueError("both rounds must share the same GTDS")
    F = r_i.gtds.field
    c = _check_c(F, c)
    sp = r_i.gtds.space
    check_cap(sp.size**2, cap, "two-round row scan")
    xs = sp.decode(sp.indices())
    bs = sp.decode(sp.indices())[:, None, :]
    a = np.asarray(_vec(r_i.gtds, a), dtype=np.int64)
    c_inv = np.int64(F.inv(c))
    up = F.mul(c_inv, round_eval(r_i, F.add(xs, a)))[None, :, :]
    down = F.mul(np.int64(c), round_eval(r_i, xs))[None, :, :]
    left = round_invert(r_next, F.add(up, bs))
    right = round_invert(r_next, F.add(down, bs))
    return np.count_nonzero(np.all(F.sub(left, right) == a, axis=-1), axis=1)


def pair_system_count(gtds_map, c, a, b1, b2, cap=None):
    """#{(x, z) : F(z) - c F(x) = b1 and c F(z + a) - F(x + a) = b2} over F_q^n x F_q^n."""
    sp = gtds_map.space
    c = _check_c(sp.field, c)
    check_cap(sp.size**2, cap, "pair system scan")
    a, b1, b2 = sp.index(a), sp.index(b1), sp.index(b2)
    xs = sp.indices()[:, None]
    zs = sp.indices()[None, :]
    eq1 = sp.sub(gtds_map(zs), sp.scale(c, gtds_map(xs))) == b1
    eq2 = sp.sub(sp.scale(c, gtds_map(sp.add(zs, a))), gtds_map(sp.add(xs, a))) == b2
    return int(np.count_nonzero(eq1 & eq2))


def pair_system_row(gtds_map, c, a, cap=None):
    """pair_system_count for one a and every (b1, b2), as an array indexed [b1, b2]."""
    sp = gtds_map.space
    c = _check_c(sp.field, c)
    check_cap(sp.size**2, cap, "pair system scan")
    a = sp.index(a)
    v = gtds_map.values
    va = gtds_map(sp.add(sp.indices(), a))
    e1 = sp.sub(v[None, :], sp.scale(c, v)[:, None])
    e2 = sp.sub(sp.scale(c, va)[None, :], va[:, None])
    counts = np.bincount((e1 * sp.size + e2).ravel(), minlength=sp.size**2)
    return counts.reshape(sp.size, sp.size)


def make_hades(field, n, d, r_f, r_p, matrices, constants, keys=None):
    """R_f o R_p o R_f: r_f full rounds, r_p partial rounds, r_f full rounds.

    ``matrices`` is one n x n matrix or one per round; ``constants`` and
    ``keys`` hold one vector per round.
    """
    m = make_monomial_spec(field, d)
    if not m.is_permutation:
        raise HypothesisError(f"x^{d} is not a permutation of F_{field.q}")
    total = 2 * r_f + r_p
    if matrices and isinstance(matrices[0][0], (int, np.integer)):
        matrices = [matrices] * total
    if len(matrices) != total or len(constants) != total:
        raise ValueError(f"need {total} matrices and constants")
    keys = keys or [[0] * n] * total
    full = GTDS.spn(field, [d] * n)
    partial = GTDS.spn(field, [d] + [1] * (n - 1))
    layers = [full] * r_f + [partial] * r_p + [full] * r_f
    return [RoundSpec(g, A, cst, k) for g, A, cst, k in zip(layers, matrices, constants, keys)]


def random_invertible_matrix(field, n, rng):
    while True:
        A = [[rng.randrange(field.q) for _ in range(n)] for _ in range(n)]
        if is_invertible(field, A):
            return A


def full_layer_hypotheses_hold(gtds):
    """Whether the c-BCT corollary applies (monomials, h = 0, every d_i > 1)."""
    try:
        ds = gtds.monomial_exponents()
    except HypothesisError:
        return False
    return all(d > 1 for d in ds) and math.prod(ds) > 0

"""Exact c-differential and c-boomerang tables by exhaustive enumeration.

Conventions for a map F on V = F_q^n and c in F_q^*:

* DDT entry at (dx, dy): #{x : F(x + dx) - c F(x) = dy}.
* BCT entry at (a, b), pairs form: #{(x, y) : F(x + y) - c F(x) = b and
  c F(x + y + a) - F(x + a) = c b}.
* BCT entry, permutation form (bijective F only):
  #{x : F^-1(c^-1 F(x + a) + b) - F^-1(c F(x) + b) = a}.

Whole rows are computed at once: with z = x + y the pairs form is a scan of
the |V| x |V| grid of (x, z), and the entries for every b fall out of one
bincount.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import partial

import numpy as np

from .errors import HypothesisError
from .field import check_cap
from .parallel import chunks, pmap
from .space import FieldMap

SCHEMA_VERSION = 1
ARGMAX_LIMIT = 16


@dataclass
class UniformityReport:
    kind: str
    c: int
    max_entry: int
    argmax: list
    bound: int | None = None
    bound_satisfied: bool | None = None
    meta: dict = dc_field(default_factory=dict)
    elapsed_ms: float | None = None

    def __post_init__(self):
        if self.bound is not None:
            self.bound_satisfied = bool(self.max_entry <= self.bound)

    def to_dict(self):
        out = {
            "schema_version": SCHEMA_VERSION,
            "kind": self.kind,
            "c": self.c,
            "max_entry": self.max_entry,
            "argmax": self.argmax,
            "bound": self.bound,
            "bound_satisfied": self.bound_satisfied,
        }
        out.update(self.meta)
        if self.elapsed_ms is not None:
            out["elapsed_ms"] = self.elapsed_ms
        return out


def _check_c(field, c):
    c = field._check(c)
    if c == 0:
        raise ValueError("c must be nonzero")
    return c


# -- c-DDT ------------------------------------------------------------------

def ddt_entry(F, c, dx, dy, cap=None):
    sp = F.space
    c = _check_c(sp.field, c)
    dx, dy = sp.index(dx), sp.index(dy)
    xs = sp.indices(cap)
    lhs = sp.sub(F(sp.add(xs, dx)), sp.scale(c, F(xs)))
    return int(np.count_nonzero(lhs == dy))


def ddt_row(F, c, dx, cap=None):
    """Entries for one input difference, indexed by dy."""
    sp = F.space
    xs = sp.indices(cap)
    lhs = sp.sub(F(sp.add(xs, dx)), sp.scale(c, F(xs)))
    return np.bincount(lhs, minlength=sp.size)


def ddt_table(F, c, cap=None):
    sp = F.space
    c = _check_c(sp.field, c)
    check_cap(sp.size**2, cap, "c-DDT table")
    return np.stack([ddt_row(F, c, dx) for dx in range(sp.size)])


def _report(F, kind, c, table, mask, limit, bound=None, meta=None):
    masked = np.where(mask, table, -1)
    top = int(masked.max()) if mask.any() else 0
    hits = np.argwhere(masked == top)[:limit] if mask.any() else []
    fmt = (lambda i: int(i)) if F.space.n == 1 else (lambda i: list(F.space.vector(i)))
    argmax = [[fmt(a), fmt(b)] for a, b in hits]
    return UniformityReport(kind, int(c), top, argmax, bound=bound, meta=dict(meta or {}))


def differential_uniformity(F, c, argmax_limit=ARGMAX_LIMIT, bound=None, cap=None, meta=None):
    """Max c-DDT entry; dx = 0 is excluded exactly when c = 1."""
    table = ddt_table(F, c, cap)
    mask = np.ones_like(table, dtype=bool)
    if c == 1:
        mask[0, :] = False
    rep = _report(F, "DDT", c, table, mask, argmax_limit, bound, meta)
    return rep


# -- c-BCT ------------------------------------------------------------------

def _bct_grids(F, c):
    sp = F.space
    v = F.values
    # first[x, z] = F(z) - c F(x); shifted[x, z] = c F(z) - F(x)
    first = sp.sub(v[None, :], sp.scale(c, v)[:, None])
    shifted = sp.sub(sp.scale(c, v)[None, :], v[:, None])
    return first, sp.scale(c, first), shifted


def _bct_rows_pairs(F, c, a_list):
    sp = F.space
    first, target, shifted = _bct_grids(F, c)
    idx = np.arange(sp.size, dtype=np.int64)
    rows = []
    for a in a_list:
        sh = sp.add(idx, a)
        second = shifted[np.ix_(sh, sh)]
        rows.append(np.bincount(first[second == target], minlength=sp.size))
    return np.stack(rows)


def bct_row(F, c, a, cap=None):
    """Pairs-form entries for one a, indexed by b."""
    check_cap(F.space.size**2, cap, "c-BCT pair scan")
    return _bct_rows_pairs(F, _check_c(F.field, c), [F.space.index(a)])[0]


def bct_entry_pairs(F, c, a, b, cap=None):
    sp = F.space
    c = _check_c(sp.field, c)
    check_cap(sp.size**2, cap, "c-BCT pair scan")
    a, b = sp.index(a), sp.index(b)
    xs = sp.indices()[:, None]
    ys = sp.indices()[None, :]
    z = sp.add(xs, ys)
    eq1 = sp.sub(F(z), sp.scale(c, F(xs))) == b
    eq2 = sp.sub(sp.scale(c, F(sp.add(z, a))), F(sp.add(xs, a))) == sp.scale(c, b)
    return int(np.count_nonzero(eq1 & eq2))


def _bct_rows_perm(F, c, a_list):
    sp = F.space
    inv = F.inverse()
    c_inv = sp.field.inv(int(c))
    xs = np.arange(sp.size, dtype=np.int64)
    bs = xs[:, None]
    rows = []
    for a in a_list:
        left = inv(sp.add(sp.scale(c_inv, F(sp.add(xs, a)))[None, :], bs))
        right = inv(sp.add(sp.scale(c, F(xs))[None, :], bs))
        rows.append(np.count_nonzero(sp.sub(left, right) == a, axis=1))
    return np.stack(rows)


def bct_entry_perm(F, c, a, b, cap=None):
    """Permutation-form entry; raises NotBijectiveError for non-bijective F."""
    sp = F.space
    c = _check_c(sp.field, c)
    a, b = sp.index(a), sp.index(b)
    inv = F.inverse()
    xs = sp.indices(cap)
    left = inv(sp.add(sp.scale(sp.field.inv(c), F(sp.add(xs, a))), b))
    right = inv(sp.add(sp.scale(c, F(xs)), b))
    return int(np.count_nonzero(sp.sub(left, right) == a))


def bct_table(F, c, form="pairs", workers=1, cap=None):
    """Full |V| x |V| c-BCT, rows a, columns b."""
    sp = F.space
    c = _check_c(sp.field, c)
    check_cap(sp.size**2, cap, "c-BCT pair scan" if form == "pairs" else "c-BCT table")
    if form == "pairs":
        worker = partial(_bct_rows_pairs, F, c)
    elif form == "perm":
        F.inverse()
        worker = partial(_bct_rows_perm, F, c)
    else:
        raise ValueError(f"unknown form {form!r}")
    parts = pmap(worker, chunks(range(sp.size), workers), workers)
    return np.concatenate(parts)


def boomerang_uniformity(F, c, argmax_limit=ARGMAX_LIMIT, bound=None, workers=1, cap=None,
                         meta=None, table=None):
    """Max c-BCT entry over a != 0 and b != 0 (as whole vectors)."""
    if table is None:
        table = bct_table(F, c, workers=workers, cap=cap)
    mask = np.ones_like(table, dtype=bool)
    mask[0, :] = False
    mask[:, 0] = False
    rep = _report(F, "BCT", c, table, mask, argmax_limit, bound, meta)
    return rep


# -- closed forms -----------------------------------------------------------

def special_case_expected(kind, field, c):
    """BCT entry of a permutation monomial x^d with a = 0 or b = 0.

    ``a_zero``: 1 if c^2 != 1 else q.  ``b_zero``: 1 if c^2 != 1, q if
    c = 1, 0 if c = -1 (odd characteristic).
    """
    c = _check_c(field, c)
    square_one = field.mul(c, c) == 1
    if kind == "a_zero":
        return field.q if square_one else 1
    if kind == "b_zero":
        if not square_one:
            return 1
        return field.q if c == 1 else 0
    raise ValueError(f"unknown special case {kind!r}")


def linearized_entry_expected(field, c, a):
    """c-BCT entry of a linearized permutation polynomial at (a, b), any b.

    1 if c^2 != 1, q if c = 1; for c = -1 in odd characteristic the entry
    is q when a = 0 and 0 otherwise.
    """
    c = _check_c(field, c)
    if field.mul(c, c) != 1:
        return 1
    if c == 1 or a == 0:
        return field.q
    return 0


def ddt_inverse_relation_check(field, m, c, dx, dy, cap=None):
    """Compare the c-DDT of x^(1/d) at (dx, dy) with the c^-d DDT of x^d.

    The claimed identity is
    delta_{x^(1/d), c}(dx, dy) = delta_{x^d, c^-d}(c^-1 dy, c^-d dx).
    """
    if not m.is_permutation:
        raise HypothesisError(f"x^{m.d} is not a permutation")
    c = _check_c(field, c)
    from .space import monomial_map
    fwd = monomial_map(field, m.d, cap)
    inv = monomial_map(field, m.inverse_exponent, cap)
    c_md = field.pow(field.inv(c), m.d)
    lhs = ddt_entry(inv, c, dx, dy)
    rhs = ddt_entry(fwd, c_md, field.mul(field.inv(c), dy), field.mul(c_md, dx))
    return lhs == rhs


# -- output -----------------------------------------------------------------

def table_rows(F, table, skip_zero_a=True, skip_zero_b=True):
    """(a, b, entry) rows in ascending order for CSV dumps."""
    sp = F.space
    fmt = (lambda i: str(i)) if sp.n == 1 else (lambda i: " ".join(map(str, sp.vector(i))))
    for a in range(sp.size):
        if skip_zero_a and a == 0:
            continue
        for b in range(sp.size):
            if skip_zero_b and b == 0:
                continue
            yield fmt(a), fmt(b), int(table[a, b])


def as_map(field, F, n=1, name=None):
    return F if isinstance(F, FieldMap) else FieldMap.from_callable(field, F, n, name)

"""Additive characters, the sums S_{alpha,beta} and a character-sum c-BCT oracle.

For a in F_q^* the c-BCT entry of x^d at (a, a^d b) equals

    (N1 + N2) / q - 1 + q^-2 * sum_{alpha beta != 0}
        chi(-b (alpha + beta)) S_{alpha,beta} S_{-alpha c, -beta / c}

with S_{alpha,beta} = sum_x chi(alpha x^d) chi(beta (x + 1)^d),
N1 = #{(x, z) : z^d - c x^d = b} and N2 = #{(x, z) : z^d - c^-1 x^d = b}.
The terms with alpha = 0 or beta = 0 collapse into N1 and N2 by
orthogonality; for a permutation monomial N1 = N2 = q and the constant
part is exactly 1.
"""

from __future__ import annotations

import numpy as np

from .errors import FieldError
from .field import check_cap

CHARSUM_CAP = 2**11


def chi1(field, x):
    """Fundamental additive character exp(2 pi i Tr(x) / p)."""
    if isinstance(x, (int, np.integer)):
        return complex(np.exp(2j * np.pi * field.trace(x) / field.p))
    return np.exp(2j * np.pi * field.trace(x) / field.p)


def weil_sum(field, d, alpha, beta, cap=None):
    check_cap(field.q, cap, "character sum")
    xs = field.elements()
    arg = field.add(field.mul(np.int64(alpha), field.pow(xs, d)),
                    field.mul(np.int64(beta), field.pow(field.add(xs, 1), d)))
    return complex(chi1(field, arg).sum())


def weil_sum_table(field, d, cap=None):
    """Matrix S[alpha, beta] over all of F_q x F_q."""
    check_cap(field.q, CHARSUM_CAP if cap is None else cap, "character sum table")
    xs = field.elements()
    u = field.pow(xs, d)
    v = field.pow(field.add(xs, 1), d)
    out = np.empty((field.q, field.q), dtype=complex)
    for alpha in range(field.q):
        au = field.mul(np.int64(alpha), u)
        # rows beta, terms x
        args = field.add(au[None, :], field.mul(xs[:, None], v[None, :]))
        out[alpha] = chi1(field, args).sum(axis=1)
    return out


def _two_variable_count(field, d, c, b):
    xd = field.pow(field.elements(), d)
    lhs = field.sub(xd[:, None], field.mul(np.int64(c), xd)[None, :])
    return int(np.count_nonzero(lhs == b))


def bct_entry_charsum(field, m, c, a, b, table=None, return_complex=False):
    """Character-sum value of the c-BCT entry of x^d at (a, a^d b).

    ``a`` only has to be nonzero; the value does not depend on it.
    ``table`` may carry a precomputed :func:`weil_sum_table`.
    """
    if a == 0:
        raise FieldError("a must be nonzero")
    if c == 0:
        raise FieldError("c must be nonzero")
    q = field.q
    S = weil_sum_table(field, m.d) if table is None else table
    c_inv = field.inv(c)
    nz = np.arange(1, q, dtype=np.int64)
    al, be = nz[:, None], nz[None, :]
    twist = chi1(field, field.mul(field.neg(np.int64(b)), field.add(al, be)))
    partner = S[field.neg(field.mul(al, np.int64(c))), field.neg(field.mul(be, np.int64(c_inv)))]
    main = (twist * S[al, be] * partner).sum() / q**2
    n1 = _two_variable_count(field, m.d, c, b)
    n2 = _two_variable_count(field, m.d, c_inv, b)
    value = (n1 + n2) / q - 1 + main
    return complex(value) if return_complex else float(value.real)

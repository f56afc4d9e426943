"""The generalized boomerang system for x^d and exhaustive d^2 bound checks.

The system with parameters (d, c1, ..., c5) is

    z^d - c1 x^d = c2
    (z + 1)^d - c3 (x + c4)^d = c5

and for c1..c5 all nonzero, d > 1, gcd(d, q - 1) = 1 and p not dividing d
it has at most d^2 solutions over the algebraic closure.  Every c-BCT entry
of x^d or x^(1/d) with a, b != 0 is the solution count of such a system.
"""

from __future__ import annotations

import random
import time
from dataclasses import astuple, dataclass

import numpy as np

from .errors import FieldError, HypothesisError
from .field import check_cap
from .parallel import pmap
from .polynomial import make_monomial_spec, reduce_p_power_exponent
from .space import monomial_map
from .uniformity import UniformityReport, bct_entry_pairs, boomerang_uniformity


@dataclass(frozen=True)
class BoomerangSystemParams:
    d: int
    c1: int
    c2: int
    c3: int
    c4: int
    c5: int

    @property
    def coefficients(self):
        return astuple(self)[1:]

    def all_nonzero(self):
        return all(self.coefficients)


def _nonzero(*vals):
    if any(v == 0 for v in vals):
        raise FieldError("a, b and c must all be nonzero")


def from_boomerang(field, m, c, a, b):
    """Parameters whose solution count equals the c-BCT entry of x^d at (a, b).

    Divide by a^d and substitute z = (x + y)/a, x = x/a.
    """
    _nonzero(c, a, b)
    ratio = field.div(b, field.pow(a, m.d))
    return BoomerangSystemParams(m.d, c, ratio, field.inv(c), 1, ratio)


def from_inverse_boomerang(field, m, c, a, b):
    """Parameters whose solution count equals the c-BCT entry of x^(1/d) at (a, b).

    The inverse relation rewrites that entry as a system in exponent d
    with c^-d scalings and a shift b/c; dividing by b^d and substituting
    z = (x + y)/b, x = x/b gives c1 = c^-d, c2 = c^-d a/b^d, c3 = c^d,
    c4 = c^-1, c5 = a/b^d.
    """
    _nonzero(c, a, b)
    if not m.is_permutation:
        raise HypothesisError(f"x^{m.d} is not a permutation")
    c_d = field.pow(c, m.d)
    c_md = field.inv(c_d)
    ratio = field.div(a, field.pow(b, m.d))
    return BoomerangSystemParams(m.d, c_md, field.mul(c_md, ratio), c_d, field.inv(c), ratio)


def count_solutions(field, params, cap=None):
    """Exhaustive count of (z, x) in F_q^2 solving the system."""
    check_cap(field.q**2, cap, "boomerang system scan")
    d = params.d
    xs = field.elements()
    zd = field.pow(xs, d)
    z1d = field.pow(field.add(xs, 1), d)
    x_part1 = field.mul(np.int64(params.c1), zd)
    x_part2 = field.mul(np.int64(params.c3), field.pow(field.add(xs, np.int64(params.c4)), d))
    # rows z, columns x
    eq1 = field.sub(zd[:, None], x_part1[None, :]) == params.c2
    eq2 = field.sub(z1d[:, None], x_part2[None, :]) == params.c5
    return int(np.count_nonzero(eq1 & eq2))


def check_bound_exponent(field, d):
    """Reduce an exponent D = d p^i and confirm d meets the d^2 bound's hypotheses.

    Returns ``(d, i)``; raises HypothesisError otherwise.
    """
    base, i = reduce_p_power_exponent(field, d)
    m = make_monomial_spec(field, base)
    if base <= 1:
        raise HypothesisError(f"exponent {d} reduces to d = {base}, which is not > 1")
    if not m.is_permutation:
        raise HypothesisError(f"exponent {d} reduces to d = {base}; gcd({base}, {field.q - 1}) != 1")
    if not make_monomial_spec(field, d).is_permutation:
        raise HypothesisError(f"x^{d} is not a permutation of F_{field.q}")
    return base, i


def frobenius_twist(field, D, c, b):
    """Map (c, b) for x^D, D = d p^i, to the (c', b') of the equivalent x^d entry.

    Raising both boomerang equations to the p^(n-i) power turns x^D into x^d
    and applies the Frobenius to the constants.
    """
    d, i = reduce_p_power_exponent(field, D)
    e = field.p ** ((field.n - i) % field.n) if field.n > 1 else 1
    return d, field.pow(c, e), field.pow(b, e)


def _sweep_cell(field, d, c, inverse, ab_pairs, include_timing):
    start = time.perf_counter()
    base, i = check_bound_exponent(field, d)
    m = make_monomial_spec(field, d)
    exponent = m.inverse_exponent if inverse else d
    fmap = monomial_map(field, exponent)
    meta = {
        "field": field.to_json(),
        "map": f"x^{exponent}",
        "exponent": d,
        "inverse": inverse,
        "reduced_d": base,
        "p_power": i,
        "bound_formula": "d^2",
        "hypotheses": {
            "d_gt_1": base > 1,
            "gcd_d_q_minus_1": True,
            "p_not_dividing_d": True,
            "c_nonzero": c != 0,
        },
    }
    bound = base * base
    if ab_pairs is None:
        rep = boomerang_uniformity(fmap, c, bound=bound, meta=meta)
    else:
        entries = [bct_entry_pairs(fmap, c, a, b) for a, b in ab_pairs]
        top = max(entries) if entries else 0
        argmax = [[a, b] for (a, b), e in zip(ab_pairs, entries) if e == top][:16]
        meta["sampled_pairs"] = len(ab_pairs)
        rep = UniformityReport("BCT", c, top, argmax, bound=bound, meta=meta)
    if include_timing:
        rep.elapsed_ms = round((time.perf_counter() - start) * 1e3, 3)
    return rep


def _run_cell(args):
    return _sweep_cell(*args)


def verify_bound_sweep(field, d_list, c_values=None, inverse=False, ab_sample=None, seed=0,
                       workers=1, include_timing=False):
    """One BCT report per (d, c) cell with bound d^2; reports come back in cell order.

    ``ab_sample`` of None scans every nonzero (a, b); an integer draws that
    many pairs from a PRNG seeded with ``seed``.
    """
    for d in d_list:
        check_bound_exponent(field, d)
    if c_values is None:
        c_values = range(1, field.q)
    c_values = [int(c) for c in c_values]
    if any(c == 0 or c >= field.q for c in c_values):
        raise FieldError("c values must be nonzero field elements")
    pairs = None
    if ab_sample is not None:
        rng = random.Random(seed)
        pairs = [(rng.randrange(1, field.q), rng.randrange(1, field.q)) for _ in range(int(ab_sample))]
    cells = [(field, int(d), c, inverse, pairs, include_timing) for d in d_list for c in c_values]
    reports = pmap(_run_cell, cells, workers)
    if pairs is not None:
        for r in reports:
            r.meta["seed"] = seed
    return reports


def valid_bound_exponents(field, lo=2, hi=None):
    """Exponents d in [lo, hi] with gcd(d, q - 1) = 1 and p not dividing d."""
    hi = field.q - 2 if hi is None else hi
    out = []
    for d in range(lo, hi + 1):
        m = make_monomial_spec(field, d)
        if m.is_permutation and not m.char_divides and d > 1:
            out.append(d)
    return out


def sweep_free_params(field, d, samples, seed=0, cap=None):
    """Counts for random systems with every c_i nonzero (c4 free as well).

    Returns a list of ``(params, count)``.
    """
    check_bound_exponent(field, d)
    rng = random.Random(seed)
    out = []
    for _ in range(samples):
        cs = [rng.randrange(1, field.q) for _ in range(5)]
        params = BoomerangSystemParams(d, *cs)
        out.append((params, count_solutions(field, params, cap)))
    return out


def reachable_param_counts(field, d):
    """Counts for every (c1, c2, c1^-1, 1, c2) with c1, c2 nonzero.

    These are exactly the systems reachable from c-BCT entries of x^d.
    """
    check_bound_exponent(field, d)
    out = {}
    for c1 in range(1, field.q):
        c3 = field.inv(c1)
        for c2 in range(1, field.q):
            out[(c1, c2)] = count_solutions(field, BoomerangSystemParams(d, c1, c2, c3, 1, c2))
    return out

"""Finite fields F_q, q = p^n, with canonical integer encodings.

An element of F_{p^n} is encoded as the integer sum(c_i * p**i) where
c_0 + c_1 x + ... + c_{n-1} x^{n-1} is its residue modulo the field's
modulus polynomial.  For prime fields the encoding is the residue itself.

Every arithmetic method accepts either Python integers (exact scalar path)
or integer numpy arrays (table-driven vectorized path).  The array path
builds log/antilog tables on first use and is therefore restricted to
fields within the enumeration cap.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

from .errors import EnumerationCapError, FieldError

DEFAULT_CAP = 2**20
HARD_CAP = 2**26


def check_cap(size, cap=None, what="enumeration"):
    cap = DEFAULT_CAP if cap is None else cap
    if size > cap:
        raise EnumerationCapError(size, cap, what)


def is_prime(n):
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    r = math.isqrt(n)
    f = 3
    while f <= r:
        if n % f == 0:
            return False
        f += 2
    return True


# -- dense polynomial helpers over F_p (ascending coefficient lists) --------

def _ptrim(f):
    f = list(f)
    while f and f[-1] == 0:
        f.pop()
    return f


def _pmod(f, g, p):
    f = _ptrim(f)
    g = _ptrim(g)
    inv_lead = pow(g[-1], -1, p)
    dg = len(g) - 1
    while len(f) - 1 >= dg and f:
        coef = f[-1] * inv_lead % p
        shift = len(f) - 1 - dg
        for i, gi in enumerate(g):
            f[shift + i] = (f[shift + i] - coef * gi) % p
        f = _ptrim(f)
    return f


def _pmul(f, g, p):
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, fi in enumerate(f):
        if fi:
            for j, gj in enumerate(g):
                out[i + j] = (out[i + j] + fi * gj) % p
    return _ptrim(out)


def _psub(f, g, p):
    n = max(len(f), len(g))
    f = list(f) + [0] * (n - len(f))
    g = list(g) + [0] * (n - len(g))
    return _ptrim([(a - b) % p for a, b in zip(f, g)])


def _pgcd(f, g, p):
    f, g = _ptrim(f), _ptrim(g)
    while g:
        f, g = g, _pmod(f, g, p)
    return f


def _ppowmod(base, e, mod, p):
    result = [1]
    base = _pmod(base, mod, p)
    while e:
        if e & 1:
            result = _pmod(_pmul(result, base, p), mod, p)
        base = _pmod(_pmul(base, base, p), mod, p)
        e >>= 1
    return result


def _prime_factors(n):
    out, f = [], 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


def is_irreducible(f, p):
    """Rabin's irreducibility test for a polynomial over F_p."""
    f = _ptrim(f)
    n = len(f) - 1
    if n < 1:
        return False
    if n == 1:
        return True
    x = [0, 1]
    for r in _prime_factors(n):
        h = _psub(_ppowmod(x, p ** (n // r), f, p), x, p)
        g = _pgcd(f, h, p)
        if len(g) > 1:
            return False
    return not _psub(_ppowmod(x, p**n, f, p), x, p)


def smallest_irreducible(p, n):
    """Lexicographically smallest monic irreducible of degree n (ascending tuples)."""
    for low in itertools.product(range(p), repeat=n):
        f = list(low) + [1]
        if is_irreducible(f, p):
            return tuple(f)
    raise FieldError(f"no irreducible polynomial of degree {n} over F_{p}")  # unreachable


class GF:
    """The finite field F_{p^n}.

    Parameters
    ----------
    p : int
        Prime characteristic.
    n : int
        Extension degree.
    modulus : sequence of int, optional
        Monic irreducible polynomial of degree n over F_p, ascending
        coefficients.  Selected deterministically when omitted.
    """

    def __init__(self, p, n=1, modulus=None):
        p, n = int(p), int(n)
        if not is_prime(p):
            raise FieldError(f"characteristic {p} is not prime")
        if n < 1:
            raise FieldError(f"extension degree must be >= 1, got {n}")
        self.p = p
        self.n = n
        self.q = p**n
        if n == 1:
            if modulus is not None and len(_ptrim(modulus)) not in (0, 2):
                raise FieldError("a prime field takes no modulus of degree != 1")
            self.modulus = None
        elif modulus is None:
            self.modulus = smallest_irreducible(p, n)
        else:
            mod = [int(c) % p for c in modulus]
            if len(_ptrim(mod)) != n + 1 or len(mod) != n + 1:
                raise FieldError(f"modulus must have degree {n}")
            if mod[-1] != 1:
                raise FieldError("modulus must be monic")
            if not is_irreducible(mod, p):
                raise FieldError(f"modulus {mod} is reducible over F_{p}")
            self.modulus = tuple(mod)
        self._exp = None
        self._log = None
        self._trace_table = None
        self._pow_p = p ** np.arange(n, dtype=np.int64)

    # -- identity / serialization -------------------------------------------

    def __repr__(self):
        if self.n == 1:
            return f"GF({self.p})"
        return f"GF({self.p}^{self.n}, modulus={list(self.modulus)})"

    def __eq__(self, other):
        return isinstance(other, GF) and (self.p, self.n, self.modulus) == (other.p, other.n, other.modulus)

    def __hash__(self):
        return hash((self.p, self.n, self.modulus))

    def __getstate__(self):
        # tables are rebuilt lazily in worker processes
        state = self.__dict__.copy()
        state["_exp"] = state["_log"] = state["_trace_table"] = None
        return state

    def to_json(self):
        out = {"p": self.p, "n": self.n}
        if self.modulus:
            out["modulus"] = list(self.modulus)
        return out

    @classmethod
    def from_json(cls, obj):
        n = int(obj.get("n", 1))
        mod = obj.get("modulus")
        return cls(int(obj["p"]), n, mod if n > 1 else None)

    # -- encoding -------------------------------------------------------------

    def decode(self, a):
        """Coefficient tuple (ascending) of an encoded element."""
        a = self._check(a)
        out = []
        for _ in range(self.n):
            a, r = divmod(a, self.p)
            out.append(r)
        return tuple(out)

    def encode(self, coeffs):
        coeffs = [int(c) % self.p for c in coeffs]
        if len(coeffs) > self.n:
            if self.n == 1:
                raise FieldError("prime field elements have a single coefficient")
            coeffs = _pmod(coeffs, list(self.modulus), self.p)
        return sum(c * self.p**i for i, c in enumerate(coeffs))

    def elements(self, cap=None):
        """All q elements in ascending encoding order."""
        check_cap(self.q, cap, "field enumeration")
        return np.arange(self.q, dtype=np.int64)

    def _check(self, a):
        a = int(a)
        if not 0 <= a < self.q:
            raise FieldError(f"{a} is not an element encoding of {self}")
        return a

    def _check_array(self, a):
        a = np.asarray(a, dtype=np.int64)
        if a.size and (a.min() < 0 or a.max() >= self.q):
            raise FieldError(f"array contains values outside [0, {self.q})")
        return a

    # -- scalar helpers (exact, table free) -------------------------------

    def _smul_poly(self, a, b):
        f = _pmul(list(self.decode(a)), list(self.decode(b)), self.p)
        f = _pmod(f, list(self.modulus), self.p)
        return sum(c * self.p**i for i, c in enumerate(f))

    def _sadd(self, a, b):
        if self.n == 1:
            return (a + b) % self.p
        da, db = self.decode(a), self.decode(b)
        return sum(((x + y) % self.p) * self.p**i for i, (x, y) in enumerate(zip(da, db)))

    def _sneg(self, a):
        if self.n == 1:
            return -a % self.p
        return sum((-x % self.p) * self.p**i for i, x in enumerate(self.decode(a)))

    def _smul(self, a, b):
        if self.n == 1:
            return a * b % self.p
        if a == 0 or b == 0:
            return 0
        if self._exp is not None:
            return int(self._exp[(self._log[a] + self._log[b]) % (self.q - 1)])
        return self._smul_poly(a, b)

    def _spow(self, a, e):
        if self.n == 1:
            return pow(a, e, self.p)
        if e == 0:
            return 1
        if a == 0:
            return 0
        e %= self.q - 1
        result, base = 1, a
        while e:
            if e & 1:
                result = self._smul(result, base)
            base = self._smul(base, base)
            e >>= 1
        return result

    # -- tables -------------------------------------------------------------

    def _tables(self):
        if self._exp is None:
            check_cap(self.q, HARD_CAP, "log table construction")
            g = self.primitive_element()
            exp = np.empty(self.q - 1, dtype=np.int64)
            log = np.zeros(self.q, dtype=np.int64)
            x = 1
            for k in range(self.q - 1):
                exp[k] = x
                log[x] = k
                x = self._smul(x, g) if self.n == 1 else self._smul_poly(x, g)
            self._exp, self._log = exp, log
        return self._exp, self._log

    def primitive_element(self):
        """Smallest encoding generating the multiplicative group."""
        if self.q == 2:
            return 1
        factors = _prime_factors(self.q - 1)
        for g in range(2, self.q):
            if all(self._spow(g, (self.q - 1) // r) != 1 for r in factors):
                return g
        raise FieldError("no primitive element found")  # unreachable

    # -- public arithmetic --------------------------------------------------

    @staticmethod
    def _is_scalar(*xs):
        return all(isinstance(x, (int, np.integer)) for x in xs)

    def add(self, a, b):
        if self._is_scalar(a, b):
            return self._sadd(self._check(a), self._check(b))
        a, b = self._check_array(a), self._check_array(b)
        if self.n == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        out = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
        for pk in self._pow_p:
            out += ((a // pk + b // pk) % self.p) * pk
        return out

    def neg(self, a):
        if self._is_scalar(a):
            return self._sneg(self._check(a))
        a = self._check_array(a)
        if self.n == 1:
            return -a % self.p
        if self.p == 2:
            return a.copy()
        out = np.zeros_like(a)
        for pk in self._pow_p:
            out += (-(a // pk) % self.p) * pk
        return out

    def sub(self, a, b):
        if self._is_scalar(a, b):
            return self._sadd(self._check(a), self._sneg(self._check(b)))
        a, b = self._check_array(a), self._check_array(b)
        if self.n == 1:
            return (a - b) % self.p
        if self.p == 2:
            return a ^ b
        out = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
        for pk in self._pow_p:
            out += ((a // pk - b // pk) % self.p) * pk
        return out

    def mul(self, a, b):
        if self._is_scalar(a, b):
            return self._smul(self._check(a), self._check(b))
        a, b = self._check_array(a), self._check_array(b)
        if self.n == 1:
            return a * b % self.p
        exp, log = self._tables()
        out = exp[(log[a] + log[b]) % (self.q - 1)]
        return np.where((a == 0) | (b == 0), 0, out)

    def inv(self, a):
        if self._is_scalar(a):
            a = self._check(a)
            if a == 0:
                raise ZeroDivisionError(f"0 has no inverse in {self}")
            if self.n == 1:
                return pow(a, -1, self.p)
            return self._spow(a, self.q - 2)
        a = self._check_array(a)
        if np.any(a == 0):
            raise ZeroDivisionError(f"0 has no inverse in {self}")
        exp, log = self._tables()
        return exp[(-log[a]) % (self.q - 1)]

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, e):
        """a**e with the convention 0**0 = 1; e must be non-negative."""
        e = int(e)
        if e < 0:
            raise FieldError("negative exponent; use inv() explicitly")
        if self._is_scalar(a):
            return self._spow(self._check(a), e)
        a = self._check_array(a)
        if e == 0:
            return np.ones_like(a)
        exp, log = self._tables()
        out = exp[(log[a] * (e % (self.q - 1))) % (self.q - 1)]
        return np.where(a == 0, 0, out)

    def trace(self, a):
        """Absolute trace Tr_{F_q/F_p}(a), returned as a residue in [0, p)."""
        if self._is_scalar(a):
            a = self._check(a)
            acc, t = 0, a
            for _ in range(self.n):
                acc = self._sadd(acc, t)
                t = self._spow(t, self.p)
            if acc >= self.p:
                raise FieldError("trace left the prime subfield")  # unreachable for a valid field
            return acc
        a = self._check_array(a)
        if self.n == 1:
            return a.copy()
        if self._trace_table is None:
            check_cap(self.q, None, "trace table")
            acc = np.zeros(self.q, dtype=np.int64)
            t = np.arange(self.q, dtype=np.int64)
            for _ in range(self.n):
                acc = self.add(acc, t)
                t = self.pow(t, self.p)
            self._trace_table = acc
        return self._trace_table[a]

    @property
    def minus_one(self):
        return self._sneg(1)


def make_field(p, n=1, modulus=None):
    return GF(p, n, modulus)

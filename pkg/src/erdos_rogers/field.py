"""Arithmetic in GF(q^2) for prime powers q = p^m.

GF(q^2) is represented directly as GF(p^(2m)) = GF(p)[x] / (f), where f is
the lexicographically smallest monic irreducible polynomial of degree 2m.
An element is stored as an integer in ``[0, p^(2m))`` whose base-p digits are
its coefficient vector, least significant digit = constant term.  All
operations accept Python ints or integer numpy arrays.
"""
from __future__ import annotations

from functools import lru_cache
from itertools import product

import numpy as np

from .errors import DivisionByZero, NotPrimePower, UnsupportedFieldSize

MAX_Q = 64


def prime_power(q: int) -> tuple[int, int]:
    """Return ``(p, m)`` with ``q == p**m``, or raise NotPrimePower."""
    q = int(q)
    if q < 2:
        raise NotPrimePower(q)
    p = next(d for d in range(2, q + 1) if q % d == 0)
    m, r = 0, q
    while r % p == 0:
        r //= p
        m += 1
    if r != 1:
        raise NotPrimePower(q)
    return p, m


# -- polynomials over GF(p), little-endian coefficient lists -----------------

def _trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def poly_mod(a, b, p):
    """Remainder of a modulo b over GF(p); b must have nonzero leading coefficient."""
    a = _trim(a)
    b = _trim(b)
    inv_lead = pow(b[-1], p - 2, p)
    while len(a) >= len(b):
        c = a[-1] * inv_lead % p
        shift = len(a) - len(b)
        for i, bi in enumerate(b):
            a[shift + i] = (a[shift + i] - c * bi) % p
        a = _trim(a)
    return a


def poly_mulmod(a, b, mod, p):
    out = [0] * (len(a) + len(b))
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return poly_mod(out, mod, p)


def is_irreducible(f, p) -> bool:
    """Trial division by every monic polynomial of degree 1..deg(f)//2."""
    f = _trim(f)
    deg = len(f) - 1
    for d in range(1, deg // 2 + 1):
        for low in product(range(p), repeat=d):
            if not poly_mod(f, list(low) + [1], p):
                return False
    return True


def smallest_irreducible(p: int, degree: int) -> tuple[int, ...]:
    """Lexicographically smallest monic irreducible polynomial of the given degree.

    Candidates are ordered by the integer whose base-p digits are the
    non-leading coefficients, so higher-degree coefficients are compared first.
    """
    for code in range(p ** degree):
        low = [(code // p ** i) % p for i in range(degree)]
        f = low + [1]
        if is_irreducible(f, p):
            return tuple(f)
    raise AssertionError("no irreducible polynomial found")  # unreachable


class FieldSpec:
    """GF(q^2) with q = p^m.  Immutable after construction."""

    def __init__(self, p: int, m: int, modulus):
        self.p = p
        self.m = m
        self.q = p ** m
        self.degree = 2 * m
        self.order = self.q ** 2
        self.modulus = tuple(modulus)
        if len(self.modulus) != self.degree + 1 or self.modulus[-1] != 1:
            raise ValueError("modulus must be monic of degree 2m")
        self._powers = np.array([p ** i for i in range(self.degree)], dtype=np.int64)
        idx = np.arange(self.order, dtype=np.int64)
        self._digits = (idx[:, None] // self._powers[None, :]) % p
        self._neg = (((p - self._digits) % p) @ self._powers).astype(np.int64)
        self._add_table = None
        if self.order <= 1024:
            d = self._digits
            s = (d[:, None, :] + d[None, :, :]) % p
            self._add_table = (s @ self._powers).astype(np.int64)
        self._build_log_tables()

    def _build_log_tables(self):
        n = self.order - 1
        for g in range(2, self.order):
            exp = np.empty(n, dtype=np.int64)
            x = 1
            ok = True
            for i in range(n):
                exp[i] = x
                x = self._mul_poly(x, g)
                if x == 1 and i < n - 1:
                    ok = False
                    break
            if ok:
                break
        self.generator = g
        self._exp = np.concatenate([exp, exp])
        self._log = np.full(self.order, -1, dtype=np.int64)
        self._log[exp] = np.arange(n)
        self._inv = np.zeros(self.order, dtype=np.int64)
        self._inv[1:] = self._exp[(n - self._log[1:]) % n]

    def _mul_poly(self, a: int, b: int) -> int:
        return self.element(poly_mulmod(self.coeffs(a), self.coeffs(b), self.modulus, self.p))

    # -- representation ---------------------------------------------------

    def element(self, coeffs) -> int:
        coeffs = list(coeffs)
        if len(coeffs) > self.degree or any(not 0 <= c < self.p for c in coeffs):
            raise ValueError(f"invalid coefficient vector {coeffs!r} for GF({self.order})")
        return sum(int(c) * self.p ** i for i, c in enumerate(coeffs))

    def coeffs(self, x: int) -> tuple[int, ...]:
        return tuple(int(c) for c in self._digits[int(x)])

    def elements(self) -> np.ndarray:
        return np.arange(self.order, dtype=np.int64)

    def subfield(self) -> np.ndarray:
        """The q elements fixed by t -> t^q."""
        e = self.elements()
        return e[self.pow(e, self.q) == e]

    def __repr__(self):
        return f"FieldSpec(p={self.p}, m={self.m}, modulus={self.modulus})"

    # -- arithmetic ---------------------------------------------------------

    @staticmethod
    def _out(res, *args):
        if all(np.ndim(a) == 0 for a in args):
            return int(res)
        return res

    def add(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.p == 2:
            res = a ^ b
        elif self._add_table is not None:
            res = self._add_table[a, b]
        else:
            res = ((self._digits[a] + self._digits[b]) % self.p) @ self._powers
        return self._out(res, a, b)

    def neg(self, a):
        a = np.asarray(a, dtype=np.int64)
        return self._out(self._neg[a], a)

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        la, lb = self._log[a], self._log[b]
        res = np.where((la < 0) | (lb < 0), 0, self._exp[np.maximum(la, 0) + np.maximum(lb, 0)])
        return self._out(res, a, b)

    def inv(self, a):
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise DivisionByZero("inverse of zero in GF(%d)" % self.order)
        return self._out(self._inv[a], a)

    def pow(self, a, e: int):
        a = np.asarray(a, dtype=np.int64)
        e = int(e)
        n = self.order - 1
        la = self._log[a]
        if e == 0:
            res = np.ones_like(a)
        elif e < 0:
            if np.any(a == 0):
                raise DivisionByZero("negative power of zero")
            res = self._exp[(la * e) % n]
        else:
            res = np.where(la < 0, 0, self._exp[(np.maximum(la, 0) * (e % n)) % n])
        return self._out(res, a)

    def norm(self, a):
        """The norm onto GF(q): a -> a^(q+1)."""
        return self.pow(a, self.q + 1)


@lru_cache(maxsize=None)
def field_create(q: int) -> FieldSpec:
    """GF(q^2) for a prime power ``q`` (2 <= q <= 64)."""
    p, m = prime_power(q)
    if q > MAX_Q:
        raise UnsupportedFieldSize(f"q={q} exceeds the supported maximum {MAX_Q}")
    return FieldSpec(p, m, smallest_irreducible(p, 2 * m))

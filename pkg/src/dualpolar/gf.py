"""Finite field arithmetic GF(p^m) in the polynomial basis.

Elements are encoded as integers in [0, p^m): the code of a polynomial
c_0 + c_1 x + ... + c_{m-1} x^{m-1} is sum(c_i * p^i).  The modulus is the
lexicographically smallest monic irreducible of degree m over GF(p), which
makes every field deterministic.  For orders up to 256 full multiplication
and inversion tables are precomputed, since polar-space enumeration performs
a very large number of form evaluations.
"""

from __future__ import annotations

import itertools

import numpy as np

_TABLE_LIMIT = 256


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def _poly_mulmod(a, b, modulus, p):
    """Multiply coefficient tuples mod (modulus, p)."""
    res = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                res[i + j] = (res[i + j] + x * y) % p
    # reduce by the monic modulus
    m = len(modulus) - 1
    for i in range(len(res) - 1, m - 1, -1):
        c = res[i]
        if c:
            res[i] = 0
            for j in range(m):
                res[i - m + j] = (res[i - m + j] - c * modulus[j]) % p
    res = res[:m] + [0] * max(0, m - len(res))
    return tuple(res[:m])


def _poly_divides(d, f, p):
    """Does monic d divide f over GF(p)?"""
    f = list(f)
    while len(f) >= len(d):
        if f[-1] == 0:
            f.pop()
            continue
        c = f[-1]
        off = len(f) - len(d)
        for i, x in enumerate(d):
            f[off + i] = (f[off + i] - c * x) % p
        f.pop()
    return all(x == 0 for x in f)


def _is_irreducible(poly, p):
    """Trial division by all monic polynomials of degree <= deg/2."""
    deg = len(poly) - 1
    if deg == 1:
        return True
    if poly[0] == 0:
        return False
    for d in range(1, deg // 2 + 1):
        for tail in itertools.product(range(p), repeat=d):
            cand = list(tail) + [1]
            if _poly_divides(cand, poly, p):
                return False
    return True


def smallest_irreducible(p: int, m: int) -> tuple[int, ...]:
    """Lexicographically smallest monic irreducible of degree m over GF(p).

    Candidates x^m + c_{m-1}x^{m-1} + ... + c_0 are ordered by the tuple
    (c_0, ..., c_{m-1}).
    """
    for tail in itertools.product(range(p), repeat=m):
        cand = list(tail) + [1]
        if _is_irreducible(cand, p):
            return tuple(cand)
    raise RuntimeError("no irreducible polynomial found")  # unreachable


class FieldSpec:
    """GF(p^m) with precomputed operation tables for small orders."""

    def __init__(self, p: int, m: int):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        if m < 1:
            raise ValueError("extension degree must be >= 1")
        self.p = p
        self.m = m
        self.order = p ** m
        self.modulus = smallest_irreducible(p, m)
        if self.order <= _TABLE_LIMIT:
            self._build_tables()
        else:
            self.mul_table = None

    # element <-> coefficient vector

    def coeffs(self, x: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.m):
            x, r = divmod(x, self.p)
            out.append(r)
        return tuple(out)

    def encode(self, coeffs) -> int:
        x = 0
        for c in reversed(list(coeffs)):
            x = x * self.p + (c % self.p)
        return x

    def _build_tables(self):
        n, p = self.order, self.p
        add = np.zeros((n, n), dtype=np.int16)
        mul = np.zeros((n, n), dtype=np.int16)
        cs = [self.coeffs(i) for i in range(n)]
        for a in range(n):
            for b in range(a, n):
                s = self.encode((x + y) % p for x, y in zip(cs[a], cs[b]))
                add[a, b] = add[b, a] = s
                m = self.encode(_poly_mulmod(cs[a], cs[b], self.modulus, p))
                mul[a, b] = mul[b, a] = m
        self.add_table = add
        self.mul_table = mul
        neg = np.zeros(n, dtype=np.int16)
        inv = np.zeros(n, dtype=np.int16)
        for a in range(n):
            neg[a] = self.encode((-x) % p for x in cs[a])
            for b in range(1, n):
                if mul[a, b] == 1:
                    inv[a] = b
        self.neg_table = neg
        self.inv_table = inv

    # field operations on codes

    def add(self, a: int, b: int) -> int:
        if self.mul_table is not None:
            return int(self.add_table[a, b])
        return self.encode(
            (x + y) % self.p for x, y in zip(self.coeffs(a), self.coeffs(b))
        )

    def neg(self, a: int) -> int:
        if self.mul_table is not None:
            return int(self.neg_table[a])
        return self.encode((-x) % self.p for x in self.coeffs(a))

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.mul_table is not None:
            return int(self.mul_table[a, b])
        return self.encode(
            _poly_mulmod(self.coeffs(a), self.coeffs(b), self.modulus, self.p)
        )

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero field element")
        if self.mul_table is not None:
            return int(self.inv_table[a])
        return self.pow(a, self.order - 2)

    def pow(self, a: int, n: int) -> int:
        if a == 0:
            return 0 if n else 1
        n %= self.order - 1
        out = 1
        base = a
        while n:
            if n & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            n >>= 1
        return out

    def frobenius(self, x: int) -> int:
        """Conjugation x -> x^(p^(m/2)); requires even extension degree."""
        if self.m % 2:
            raise ValueError("frobenius conjugation needs even degree")
        return self.pow(x, self.p ** (self.m // 2))

    def elements(self):
        return range(self.order)

    def __repr__(self):
        return f"FieldSpec(GF({self.p}^{self.m}), modulus={self.modulus})"


_CACHE: dict[tuple[int, int], FieldSpec] = {}


def build_field(p: int, m: int) -> FieldSpec:
    key = (p, m)
    if key not in _CACHE:
        _CACHE[key] = FieldSpec(p, m)
    return _CACHE[key]


def field_of_order(n: int) -> FieldSpec:
    """GF(n) for a prime power n."""
    for p in range(2, n + 1):
        if is_prime(p) and n % p == 0:
            m = 0
            x = n
            while x % p == 0:
                x //= p
                m += 1
            if x != 1:
                break
            return build_field(p, m)
    raise ValueError(f"{n} is not a prime power")


def frobenius(spec: FieldSpec, x: int) -> int:
    return spec.frobenius(x)

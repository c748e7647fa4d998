"""Vectorized exact integer Gaussian elimination.

Row reduction over Q is done on integer matrices (numpy int64, upgraded to
Python-int object arrays when entries threaten to overflow).  Rows are kept
primitive (gcd 1, positive pivot) after every update, which both bounds
coefficient growth and makes the reduced form canonical: dividing each row
by its pivot yields the unique leading-1 RREF of the row space.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

_INT64_SAFE = 2 ** 62


def as_int_array(rows, dtype=np.int64) -> np.ndarray:
    a = np.array(rows, dtype=object)
    if a.ndim == 1:
        a = a.reshape(1, -1)
    try:
        return a.astype(dtype)
    except OverflowError:
        return a


def _to_object(a: np.ndarray) -> np.ndarray:
    if a.dtype == object:
        return a
    return a.astype(object)


def _maybe_downcast(a: np.ndarray) -> np.ndarray:
    if a.dtype != object or a.size == 0:
        return a
    m = max(abs(int(v)) for v in a.flat)
    if m < _INT64_SAFE:
        return a.astype(np.int64)
    return a


def _max_abs(a: np.ndarray) -> int:
    if a.size == 0:
        return 0
    if a.dtype == object:
        return max(abs(int(v)) for v in a.flat)
    return int(np.abs(a).max())


def _gcd_rows(a: np.ndarray) -> np.ndarray:
    """Componentwise gcd along rows; zero rows give gcd 1."""
    if a.dtype != object:
        g = np.gcd.reduce(np.abs(a), axis=1)
        return np.where(g == 0, 1, g)
    import math

    out = np.empty(a.shape[0], dtype=object)
    for i in range(a.shape[0]):
        g = 0
        for v in a[i]:
            if v:
                g = math.gcd(g, v if v > 0 else -v)
                if g == 1:
                    break
        out[i] = g if g else 1
    return out


def _int_rref_exact(mat: np.ndarray) -> tuple[np.ndarray, tuple[int, ...]]:
    """Fraction-free Gauss-Jordan row reduction of an integer matrix.

    Uses the one-step fraction-free update
        row_i <- (piv * row_i - col_i * row_piv) / previous_pivot,
    whose divisions are exact and keep every entry a minor of the input, so
    coefficients stay polynomially small without intermediate gcds.

    Returns (R, pivots) where R holds the nonzero rows, each primitive with
    positive leading entry, zeros above and below every pivot.  Row i of the
    rational RREF is R[i] / R[i, pivots[i]].
    """
    a = mat.copy()
    if a.ndim != 2:
        raise ValueError("expected a 2-d array")
    nrows, ncols = a.shape
    pivots: list[int] = []
    r = 0
    prev = 1
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        p = r + int(nz[0])
        if p != r:
            a[[r, p]] = a[[p, r]]
        piv = int(a[r, c])
        col = a[:, c].copy()
        col[r] = 0
        if a.dtype != object:
            bound = abs(piv) * _max_abs(a) + _max_abs(col) * _max_abs(a[r])
            if bound >= _INT64_SAFE:
                a = _to_object(a)
                col = _to_object(col)
        others = np.ones(nrows, dtype=bool)
        others[r] = False
        sub = a[others] * piv - np.outer(col[others], a[r])
        sub //= prev
        a[others] = sub
        prev = piv
        pivots.append(c)
        r += 1
    a = a[:r]
    if r:
        g = _gcd_rows(a)
        a = a // g[:, None]
        for i in range(r):
            if a[i, pivots[i]] < 0:
                a[i] = -a[i]
    a = _maybe_downcast(a)
    return a, tuple(pivots)


def int_rank(mat: np.ndarray) -> int:
    return len(int_rref(mat)[1])


def int_kernel(mat: np.ndarray) -> np.ndarray:
    """Primitive-row canonical basis of the right null space over Q.

    The result rows, divided by their leading entries, form the RREF basis
    of {v : mat @ v = 0}.
    """
    red, pivots = int_rref(mat)
    ncols = mat.shape[1]
    free = [c for c in range(ncols) if c not in set(pivots)]
    if not free:
        return np.zeros((0, ncols), dtype=np.int64)
    import math

    rows = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -Fraction(int(red[i, f]), int(red[i, pivots[i]]))
        den = 1
        for x in v:
            den = den * x.denominator // math.gcd(den, x.denominator)
        rows.append([int(x * den) for x in v])
    basis = as_int_array(rows)
    red2, _ = int_rref(basis)
    return red2


def int_inverse(mat: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Exact inverse of a nonsingular integer matrix.

    Returns (num, den_col) with inverse[i, j] = num[i, j] / den_col[i]; the
    scaling is per row of the inverse.
    """
    n = mat.shape[0]
    if mat.shape[1] != n:
        raise ValueError("matrix must be square")
    if mat.dtype == object:
        eye = np.zeros((n, n), dtype=object)
        for i in range(n):
            eye[i, i] = 1
    else:
        eye = np.eye(n, dtype=mat.dtype)
    aug = np.concatenate([mat, eye], axis=1)
    red, pivots = int_rref(aug)
    if list(pivots) != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    num = red[:, n:]
    den = np.array([red[i, i] for i in range(n)], dtype=red.dtype)
    return num, den


def int_solve_upper_rank(mat: np.ndarray, rhs: np.ndarray) -> np.ndarray | None:
    """Solve mat @ x = rhs exactly over Q; None when inconsistent.

    Returns a Fraction object array (one solution; free variables set to 0).
    """
    nrows, ncols = mat.shape
    aug = np.concatenate([mat, rhs.reshape(nrows, -1)], axis=1)
    red, pivots = int_rref(aug)
    k = rhs.reshape(nrows, -1).shape[1]
    sol = np.empty((ncols, k), dtype=object)
    sol[:] = Fraction(0)
    for i, pc in enumerate(pivots):
        if pc >= ncols:
            return None
        for j in range(k):
            sol[pc, j] = Fraction(int(red[i, ncols + j]), int(red[i, pc]))
    return sol


# ---------------------------------------------------------------------------
# Modular row reduction with exact certification
#
# For large matrices the canonical RREF is computed modulo word-sized primes,
# lifted by CRT, and the free-column entries recovered by rational
# reconstruction.  The candidate is then certified exactly:
#
#   * the mod-p elimination exhibits a pivot minor that is nonzero mod p,
#     hence nonzero over Z, so rank(M) >= #pivots;
#   * the exact residual check M = M[:, pivots] @ R proves that the row
#     space of M lies inside the candidate row space, so rank(M) <= #pivots.
#
# Together these force equality of the row spaces, and an RREF-shaped basis
# of a space is unique, so the verified candidate IS the canonical RREF.
# On any failure more primes are added, and ultimately the fraction-free
# elimination is used, so the result is always exact.


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _prime_list(count: int = 40) -> list[int]:
    out = []
    p = 2 ** 30 - 35  # largest prime below 2^30
    while len(out) < count:
        if _is_prime(p):
            out.append(p)
        p -= 2
    return out


_PRIMES = _prime_list()
_MODULAR_CANDIDATE_TRIES = 40
_MODULAR_MIN_SIZE = 5000


def _mod_rref(mat: np.ndarray, p: int) -> tuple[np.ndarray, tuple[int, ...]]:
    """Plain Gauss-Jordan over GF(p), vectorized."""
    a = (mat % p).astype(np.int64)
    nrows, ncols = a.shape
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        q = r + int(nz[0])
        if q != r:
            a[[r, q]] = a[[q, r]]
        inv = pow(int(a[r, c]), p - 2, p)
        a[r] = (a[r] * inv) % p
        col = a[:, c].copy()
        col[r] = 0
        mask = col != 0
        if mask.any():
            a[mask] = (a[mask] - np.outer(col[mask], a[r])) % p
        pivots.append(c)
        r += 1
    return a[:r], tuple(pivots)


def _crt_combine(res1: np.ndarray, mod1: int, res2: np.ndarray,
                 mod2: int) -> np.ndarray:
    inv = pow(mod1 % mod2, mod2 - 2, mod2)
    diff = (res2 - (res1 % mod2)) % mod2
    t = (diff * inv) % mod2
    return res1 + t * mod1


def _rat_reconstruct(x: int, modulus: int, bound: int):
    """p/q with x = p/q mod modulus and |p|, q <= bound, or None."""
    import math

    r0, r1 = modulus, x % modulus
    s0, s1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > bound:
        return None
    num, den = (r1, s1) if s1 > 0 else (-r1, -s1)
    if math.gcd(abs(num) if num else den, den) != 1:
        g = math.gcd(abs(num), den)
        if g == 0:
            return None
        num //= g
        den //= g
    if (num - den * x) % modulus:
        return None
    return num, den


def _int_rref_modular(mat: np.ndarray):
    """Certified modular RREF; None when reconstruction keeps failing."""
    import math

    nrows, ncols = mat.shape
    acc = None  # (pivots, residues (object array), modulus, prime count)
    for p in _PRIMES[:_MODULAR_CANDIDATE_TRIES]:
        red, pivots = _mod_rref(mat, p)
        if acc is not None and pivots != acc[0]:
            # pivot disagreement: restart with the richer structure (more
            # pivots can only mean less rank drop)
            if len(pivots) <= len(acc[0]):
                continue
            acc = None
        if acc is None:
            acc = (pivots, red.astype(object), p, 1)
        else:
            acc = (pivots, _crt_combine(acc[1], acc[2], red.astype(object), p),
                   acc[2] * p, acc[3] + 1)
        pivots, residues, modulus, nprimes = acc
        if nprimes > 4 and nprimes % 4:
            continue  # reconstruction attempts on a sparse schedule
        bound = math.isqrt(modulus // 2)
        k = len(pivots)
        free = [c for c in range(ncols) if c not in set(pivots)]
        rows = np.zeros((k, ncols), dtype=object)
        dens = []
        ok = True
        for i in range(k):
            den_lcm = 1
            entries = {}
            for c in free:
                pq = _rat_reconstruct(int(residues[i, c]), modulus, bound)
                if pq is None:
                    ok = False
                    break
                entries[c] = pq
                den_lcm = den_lcm * pq[1] // math.gcd(den_lcm, pq[1])
            if not ok:
                break
            rows[i, pivots[i]] = den_lcm
            for c, (num, den) in entries.items():
                rows[i, c] = num * (den_lcm // den)
            dens.append(den_lcm)
        if not ok:
            continue
        if _verify_rref_candidate(mat, rows, pivots):
            return _maybe_downcast(rows), pivots
    return None


def _verify_rref_candidate(mat, rows, pivots) -> bool:
    """Exact check that mat's row space lies in the candidate row space."""
    import math

    k = len(pivots)
    if k == 0:
        return not np.any(mat)
    dens = np.array([rows[i, pivots[i]] for i in range(k)], dtype=object)
    big = 1
    for d in dens:
        big = big * int(d) // math.gcd(big, int(d))
    coords = mat[:, list(pivots)]
    scaled_rows = (big // dens)[:, None] * rows
    # integer matmul with an overflow guard; fall back to object dtype
    m1 = _max_abs(coords)
    m2 = _max_abs(scaled_rows if scaled_rows.dtype != object
                  else _maybe_downcast(scaled_rows))
    if (mat.dtype != object and k * m1 * m2 < _INT64_SAFE
            and _max_abs(mat) * big < _INT64_SAFE):
        sr = _maybe_downcast(scaled_rows)
        if sr.dtype != object:
            lhs = mat * np.int64(big)
            rhs = coords.astype(np.int64) @ sr
            return bool((lhs == rhs).all())
    lhs = mat.astype(object) * big
    rhs = np.dot(coords.astype(object), scaled_rows.astype(object))
    return bool((lhs == rhs).all())


def int_rref(mat: np.ndarray) -> tuple[np.ndarray, tuple[int, ...]]:
    """Canonical integer-row RREF; modular fast path, exact fallback."""
    if mat.ndim != 2:
        raise ValueError("expected a 2-d array")
    if mat.size >= _MODULAR_MIN_SIZE and mat.shape[0] > 1:
        got = _int_rref_modular(mat)
        if got is not None:
            return got
    return _int_rref_exact(mat)

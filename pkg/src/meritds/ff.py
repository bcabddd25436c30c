"""Finite fields GF(p) and GF(p^k) with a pinned generator and full log tables.

Elements are plain integers in ``[0, q)``.  For a prime field the integer is
the residue; for an extension field it encodes the coefficient vector of a
polynomial in ``x`` modulo the reduction polynomial, ``sum(c_i * p**i)``.
Multiplicative characters are plain integers ``j`` modulo ``q - 1`` standing
for ``chi = xi**j`` with ``xi(theta) = exp(2*pi*i / (q - 1))``.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources

import numpy as np

from .errors import BadDegree, NoGenerator, NotPrime, NotSubfield, TooLarge

DEFAULT_CAP = 1 << 24

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for n < 3.3e24."""
    if n < 2:
        return False
    for b in _MR_BASES:
        if n % b == 0:
            return n == b
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def factorize(n: int) -> dict[int, int]:
    """Trial-division factorization; meant for group orders below ~1e12."""
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def prime_power(q: int) -> tuple[int, int]:
    """Split q = p**k; raise NotPrime if q is not a prime power."""
    if q < 2:
        raise NotPrime(f"{q} is not a prime power")
    fac = factorize(q)
    if len(fac) != 1:
        raise NotPrime(f"{q} is not a prime power")
    ((p, k),) = fac.items()
    return p, k


def primitive_root(p: int) -> int:
    """Smallest positive primitive root modulo the prime p."""
    if p == 2:
        return 1
    cofactors = [(p - 1) // ell for ell in factorize(p - 1)]
    for g in range(2, p):
        if all(pow(g, c, p) != 1 for c in cofactors):
            return g
    raise NoGenerator(f"no primitive root found for {p}")


# -- polynomials over GF(p), coefficient lists low -> high ------------------


def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a: list[int], f: list[int], p: int) -> list[int]:
    a = _trim([c % p for c in a])
    df = len(f) - 1
    inv_lead = pow(f[-1], -1, p)
    while len(a) - 1 >= df:
        coef = a[-1] * inv_lead % p
        shift = len(a) - 1 - df
        for i, c in enumerate(f):
            a[shift + i] = (a[shift + i] - coef * c) % p
        _trim(a)
    return a


def _poly_mulmod(a: list[int], b: list[int], f: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _poly_mod(out, f, p)


def _poly_powmod(a: list[int], e: int, f: list[int], p: int) -> list[int]:
    result = [1]
    base = _poly_mod(list(a), f, p)
    while e:
        if e & 1:
            result = _poly_mulmod(result, base, f, p)
        base = _poly_mulmod(base, base, f, p)
        e >>= 1
    return result


def _poly_sub(a: list[int], b: list[int], p: int) -> list[int]:
    n = max(len(a), len(b))
    a = a + [0] * (n - len(a))
    b = b + [0] * (n - len(b))
    return _trim([(x - y) % p for x, y in zip(a, b)])


def _poly_gcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _poly_mod(a, b, p)
    return a


def has_root(f: list[int], p: int) -> bool:
    """True iff f has a root in GF(p), via gcd(f, x**p - x)."""
    h = _poly_sub(_poly_powmod([0, 1], p, f, p), [0, 1], p)
    return len(_poly_gcd(f, h, p)) != 1


def is_irreducible(f: list[int], p: int) -> bool:
    """Rabin's test for a monic polynomial of degree k over GF(p)."""
    k = len(f) - 1
    if k < 1:
        return False
    if k <= 3:
        return not has_root(f, p)
    x = [0, 1]
    if _poly_sub(_poly_powmod(x, p**k, f, p), x, p):
        return False
    for r in factorize(k):
        h = _poly_sub(_poly_powmod(x, p ** (k // r), f, p), x, p)
        if len(_poly_gcd(f, h, p)) != 1:
            return False
    return True


def _has_full_order(g: list[int], f: list[int], p: int, order: int) -> bool:
    return all(_poly_powmod(g, order // ell, f, p) != [1] for ell in factorize(order))


def is_primitive_poly(f: list[int], p: int) -> bool:
    k = len(f) - 1
    return is_irreducible(f, p) and _has_full_order([0, 1], f, p, p**k - 1)


def find_primitive_poly(p: int, k: int) -> list[int]:
    """Smallest monic primitive polynomial of degree k, ordered by the index
    of its lower coefficients read as a base-p number."""
    # the norm (-1)**k * f[0] of a primitive element generates GF(p)^*
    cofactors = [(p - 1) // ell for ell in factorize(p - 1)] if p > 2 else []
    for low in range(1, p**k):
        f = [(low // p**i) % p for i in range(k)] + [1]
        norm = f[0] * (-1) ** k % p
        if norm == 0 or any(pow(norm, c, p) == 1 for c in cofactors):
            continue
        if is_primitive_poly(f, p):
            return f
    raise NoGenerator(f"no primitive polynomial of degree {k} over GF({p})")


@lru_cache(maxsize=1)
def reduction_table() -> dict[tuple[int, int], tuple[int, ...]]:
    raw = json.loads(resources.files("meritds.data").joinpath("reduction_polys.json").read_text())
    return {(int(e["p"]), int(e["k"])): tuple(e["poly"]) for e in raw["polys"]}


# -- field context -----------------------------------------------------------


@dataclass(frozen=True, eq=False)
class FieldCtx:
    """GF(q) with a fixed multiplicative generator and complete log tables.

    ``exp[u]`` is the index of ``theta**u`` for ``0 <= u < q-1``;
    ``log[x]`` is the exponent of the nonzero element x, and ``log[0] == -1``.
    """

    p: int
    k: int
    poly: tuple[int, ...] | None
    generator: int
    exp: np.ndarray = field(repr=False)
    log: np.ndarray = field(repr=False)

    @property
    def q(self) -> int:
        return self.p**self.k

    @property
    def order(self) -> int:
        """Order of the multiplicative group."""
        return self.p**self.k - 1

    @property
    def one(self) -> int:
        return 1

    # scalar arithmetic
    def add(self, x: int, y: int) -> int:
        return int(self.add_arr(np.asarray(x), np.asarray(y)))

    def neg(self, x: int) -> int:
        return int(self.neg_arr(np.asarray(x)))

    def sub(self, x: int, y: int) -> int:
        return self.add(x, self.neg(y))

    def mul(self, x: int, y: int) -> int:
        if x == 0 or y == 0:
            return 0
        return int(self.exp[(self.log[x] + self.log[y]) % self.order])

    def inv(self, x: int) -> int:
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        return int(self.exp[(-self.log[x]) % self.order])

    def power(self, x: int, e: int) -> int:
        if x == 0:
            if e < 0:
                raise ZeroDivisionError("negative power of zero")
            return 1 if e == 0 else 0
        return int(self.exp[(int(self.log[x]) * e) % self.order])

    # vectorized arithmetic on index arrays
    def _digits(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=np.int64)
        return np.stack([(x // self.p**i) % self.p for i in range(self.k)], axis=-1)

    def _undigits(self, d: np.ndarray) -> np.ndarray:
        weights = np.array([self.p**i for i in range(self.k)], dtype=np.int64)
        return (d % self.p) @ weights

    def add_arr(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=np.int64)
        y = np.asarray(y, dtype=np.int64)
        if self.k == 1:
            return (x + y) % self.p
        if self.p == 2:
            return x ^ y
        return self._undigits(self._digits(x) + self._digits(y))

    def neg_arr(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=np.int64)
        if self.p == 2:
            return x
        if self.k == 1:
            return (-x) % self.p
        return self._undigits(-self._digits(x))

    def mul_arr(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=np.int64)
        y = np.asarray(y, dtype=np.int64)
        zero = (x == 0) | (y == 0)
        e = (self.log[x] + self.log[y]) % self.order
        return np.where(zero, 0, self.exp[e])

    def subfield_orders(self) -> list[int]:
        return [self.p**d for d in range(1, self.k + 1) if self.k % d == 0]

    def check_subfield(self, sub_order: int) -> int:
        """Return d with sub_order == p**d and d | k, else raise NotSubfield."""
        for d in range(1, self.k + 1):
            if self.p**d == sub_order:
                if self.k % d:
                    break
                return d
        raise NotSubfield(f"GF({sub_order}) is not a subfield of GF({self.q})")

    def subfield_generator_exponent(self, sub_order: int) -> int:
        """Exponent e such that theta**e generates GF(sub_order)^*."""
        self.check_subfield(sub_order)
        return self.order // (sub_order - 1)


def _freeze(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


def _build_log(exp: np.ndarray, q: int) -> np.ndarray:
    log = np.full(q, -1, dtype=np.int64)
    log[exp] = np.arange(q - 1, dtype=np.int64)
    return log


def make_prime_field(p: int) -> FieldCtx:
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if p > DEFAULT_CAP * 64:
        raise TooLarge(f"GF({p}) exceeds the log-table cap")
    g = primitive_root(p)
    n = p - 1
    exp = np.empty(n, dtype=np.int64)
    exp[0] = 1
    filled = 1
    while filled < n:
        # exp[L:2L] = exp[0:L] * g**L
        step = min(filled, n - filled)
        exp[filled : filled + step] = exp[:step] * pow(g, filled, p) % p
        filled += step
    log = _build_log(exp, p)
    if np.any(log[1:] < 0):
        raise NoGenerator(f"{g} does not generate GF({p})^*")
    return FieldCtx(p, 1, None, g, _freeze(exp), _freeze(log))


def _mult_matrix(g: list[int], f: list[int], p: int) -> np.ndarray:
    """Matrix over GF(p) of y -> g*y in the polynomial basis (column i = g*x^i)."""
    k = len(f) - 1
    m = np.zeros((k, k), dtype=np.int64)
    for i in range(k):
        col = _poly_mulmod(g, [0] * i + [1], f, p)
        m[: len(col), i] = col
    return m


def _matpow_mod(m: np.ndarray, e: int, p: int) -> np.ndarray:
    result = np.eye(m.shape[0], dtype=np.int64)
    base = m.copy()
    while e:
        if e & 1:
            result = result @ base % p
        base = base @ base % p
        e >>= 1
    return result


def make_ext_field(p: int, k: int, cap: int = DEFAULT_CAP) -> FieldCtx:
    if k < 2:
        raise BadDegree(f"extension degree must be >= 2, got {k}")
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    q = p**k
    if q > cap:
        raise TooLarge(f"GF({p}^{k}) has {q} elements, cap is {cap}")
    try:
        f = list(reduction_table()[(p, k)])
    except KeyError:
        f = find_primitive_poly(p, k)
    if not is_irreducible(f, p):
        raise NoGenerator(f"pinned polynomial {f} is reducible over GF({p})")
    n = q - 1
    cofactors = [n // ell for ell in factorize(n)]
    gen = None
    # indices below p are constants of GF(p), whose order divides p - 1 < n
    for idx in range(p, q):
        g = _trim([(idx // p**i) % p for i in range(k)])
        if all(_poly_powmod(g, c, f, p) != [1] for c in cofactors):
            gen = idx
            break
    if gen is None:
        raise NoGenerator(f"no generator found for GF({q})")
    gpoly = _trim([(gen // p**i) % p for i in range(k)])
    mg = _mult_matrix(gpoly, f, p)
    weights = np.array([p**i for i in range(k)], dtype=np.int64)
    exp = np.empty(n, dtype=np.int64)
    exp[0] = 1
    filled = 1
    chunk = 1 << 20
    while filled < n:
        step = min(filled, n - filled)
        jump_mat = _matpow_mod(mg, filled, p)
        if p == 2:
            cols = jump_mat.T @ weights  # image of each basis vector, as an index
            acc = np.zeros(step, dtype=np.int64)
            for i in range(k):
                acc ^= np.where((exp[:step] >> i) & 1, cols[i], 0)
            exp[filled : filled + step] = acc
            filled += step
            continue
        jump = jump_mat.T.astype(np.float64)
        for lo in range(0, step, chunk):
            hi = min(step, lo + chunk)
            digits = np.stack([(exp[lo:hi] // w) % p for w in weights], axis=1)
            # float BLAS is exact here: every partial sum stays below k * p**2 < 2**53
            moved = (digits.astype(np.float64) @ jump).astype(np.int64) % p
            exp[filled + lo : filled + hi] = moved @ weights
        filled += step
    log = _build_log(exp, q)
    if np.any(log[1:] < 0):
        raise NoGenerator(f"element {gen} does not generate GF({q})^*")
    return FieldCtx(p, k, tuple(f), gen, _freeze(exp), _freeze(log))


def make_field(q: int, cap: int = DEFAULT_CAP) -> FieldCtx:
    """GF(q) for any prime power q."""
    p, k = prime_power(q)
    return make_prime_field(p) if k == 1 else make_ext_field(p, k, cap)


# -- trace and characters ----------------------------------------------------


def frobenius_sum(ctx: FieldCtx, x: np.ndarray, base: int, terms: int) -> np.ndarray:
    """sum_{i < terms} x**(base**i), vectorized over an index array."""
    x = np.asarray(x, dtype=np.int64)
    nz = x != 0
    lx = np.where(nz, ctx.log[x], 0)
    acc = np.zeros_like(x)
    e = 1
    for _ in range(terms):
        term = np.where(nz, ctx.exp[(lx * e) % ctx.order], 0)
        acc = ctx.add_arr(acc, term)
        e = e * base % ctx.order
    return acc


def trace(ctx: FieldCtx, sub_order: int, x):
    """Relative trace Tr_{q, sub_order}; accepts an int or an index array."""
    d = ctx.check_subfield(sub_order)
    out = frobenius_sum(ctx, np.asarray(x), sub_order, ctx.k // d)
    return int(out) if np.ndim(out) == 0 else out


def char_eval(ctx: FieldCtx, chi: int, x: int) -> complex:
    """Value of xi**chi at x, with chi(0) = 1 for the trivial character, else 0."""
    j = chi % ctx.order
    if x == 0:
        return 1.0 + 0j if j == 0 else 0j
    return cmath.exp(2j * math.pi * j * int(ctx.log[x]) / ctx.order)


def char_values(ctx: FieldCtx, chi: int) -> np.ndarray:
    """Vector of xi**chi over all q elements (same zero convention)."""
    j = chi % ctx.order
    out = np.empty(ctx.q, dtype=np.complex128)
    out[1:] = np.exp(2j * np.pi * ((j * ctx.log[1:]) % ctx.order) / ctx.order)
    out[0] = 1.0 if j == 0 else 0.0
    return out

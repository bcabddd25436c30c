"""Difference sets and almost difference sets over finite fields.

A :class:`SubsetOfGroup` lives in a cyclic group of order n and stores its
membership as a boolean vector indexed by exponent (subsets of GF(q)^*, read
along powers of the pinned generator theta) or by residue (subsets of the
additive group of GF(p), generator 1).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .errors import (
    BadB,
    BadModulus,
    BadS,
    EvenCharacteristic,
    MeritError,
    NeitherIsDiffSet,
    NotHallPrime,
    NotSubfield,
    TooLarge,
)
from .ff import FieldCtx, is_prime, make_field, make_prime_field, trace
from .seq import periodic_correlation

MULTIPLICATIVE = "multiplicative"
ADDITIVE = "additive"

PAIRWISE_MAX_N = 1 << 12
DIFF_CHECK_CAP = 1 << 20
MAX_INNER_DEPTH = 3


@dataclass(frozen=True, eq=False)
class SubsetOfGroup:
    kind: str
    n: int
    generator: int
    members: np.ndarray = field(repr=False)
    family: str = "custom"
    params: dict = field(default_factory=dict)

    @property
    def k(self) -> int:
        return int(self.members.sum())

    def indices(self) -> np.ndarray:
        return np.flatnonzero(self.members)

    def same_members(self, other: SubsetOfGroup) -> bool:
        return self.n == other.n and bool(np.array_equal(self.members, other.members))

    def to_json(self) -> str:
        return json.dumps(
            {
                "family": self.family,
                "params": self.params,
                "kind": self.kind,
                "n": self.n,
                "generator": self.generator,
                "members": [int(i) for i in self.indices()],
            },
            sort_keys=True,
        )

    @classmethod
    def from_json(cls, text: str) -> SubsetOfGroup:
        d = json.loads(text)
        members = np.zeros(d["n"], dtype=bool)
        members[d["members"]] = True
        return cls(d.get("kind", MULTIPLICATIVE), d["n"], d["generator"], _frozen(members), d["family"], d.get("params", {}))


def _frozen(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class DiffSetCheck:
    n: int
    k: int
    lambda_min: int
    lambda_max: int

    @property
    def is_difference_set(self) -> bool:
        return self.lambda_min == self.lambda_max

    @property
    def lam(self) -> int | None:
        return self.lambda_min if self.is_difference_set else None

    @property
    def is_hadamard(self) -> bool:
        """(4h-1, 2h-1, h-1) or its complement (4h-1, 2h, h)."""
        if not self.is_difference_set or (self.n + 1) % 4:
            return False
        h = (self.n + 1) // 4
        return (self.k, self.lam) in ((2 * h - 1, h - 1), (2 * h, h))

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "lambda_min": self.lambda_min,
            "lambda_max": self.lambda_max,
            "is_difference_set": self.is_difference_set,
            "is_hadamard": self.is_hadamard,
        }


# -- number theory helpers -----------------------------------------------------


def represent(p: int, c: int) -> tuple[int, int] | None:
    """Nonnegative (x, y) with y >= 1 and p = x^2 + c*y^2, smallest y first."""
    y = 1
    while c * y * y <= p:
        rest = p - c * y * y
        x = math.isqrt(rest)
        if x * x == rest:
            return x, y
        y += 1
    return None


def class_shift_orbit(S, m: int) -> list[frozenset[int]]:
    return [frozenset((s + h) % m for s in S) for h in range(m)]


def count_antipodal_pairs(S, m: int) -> int:
    """N = #{(s, s') in S x S : s - s' = m/2 (mod m)}."""
    return sum(1 for s in S for t in S if (s - t) % m == m // 2)


def cyclotomic_nu(p: int, m: int, S) -> float:
    """nu = 1 if (p-1)/m is even, else (4N/m - 1)^2."""
    if ((p - 1) // m) % 2 == 0:
        return 1.0
    return (4 * count_antipodal_pairs(S, m) / m - 1) ** 2


def cyclotomic_nu_spectral(p: int, m: int, S) -> float:
    """Same nu from (sum_j (-1)^{j(p-1)/m} |(2/m) sum_s e^{2 pi i j s/m}|^2)^2."""
    h = (p - 1) // m
    total = 0.0
    for j in range(1, m):
        k = 2 / m * sum(np.exp(2j * np.pi * j * s / m) for s in S)
        total += (-1) ** (j * h) * abs(k) ** 2
    return total**2


def is_paley_type(S, m: int = 6) -> bool:
    """True if some multiplicative translate of the union is C0+C2+C4 or C0+C1+C2."""
    targets = {frozenset({0, 2, 4}), frozenset({0, 1, 2})}
    return any(shifted in targets for shifted in class_shift_orbit(S, m))


# -- constructions ---------------------------------------------------------------


def _require_prime_field(ctx: FieldCtx) -> None:
    if ctx.k != 1:
        raise BadModulus(f"cyclotomic constructions need a prime field, got GF({ctx.q})")


def build_cyclotomic(ctx: FieldCtx, m: int, S, family: str = "cyclotomic") -> SubsetOfGroup:
    """Union of the cyclotomic classes C_s, s in S, of order m in GF(p)."""
    _require_prime_field(ctx)
    p = ctx.p
    if m < 2 or m % 2 or (p - 1) % m:
        raise BadModulus(f"need even m with p = 1 (mod m); got p={p}, m={m}")
    S = sorted({int(s) for s in S})
    if len(S) != m // 2 or any(not 0 <= s < m for s in S):
        raise BadS(f"S must be {m // 2} distinct classes in [0, {m}), got {S}")
    members = np.zeros(p, dtype=bool)
    members[1:] = np.isin(ctx.log[1:] % m, S)
    params = {"p": p, "m": m, "S": S, "omega": ctx.generator, "nu": cyclotomic_nu(p, m, S)}
    return SubsetOfGroup(ADDITIVE, p, 1, _frozen(members), family, params)


def build_paley(ctx: FieldCtx) -> SubsetOfGroup:
    """Nonzero squares of GF(p)."""
    return build_cyclotomic(ctx, 2, [0], family="paley")


def build_hall(ctx: FieldCtx) -> SubsetOfGroup:
    """Hall (p, (p-1)/2, (p-3)/4) difference set for p = x^2 + 27, (p-1)/6 odd.

    Primes x^2 + 27y^2 with |y| > 1 are rejected: the representation is unique,
    and for them neither candidate union is a difference set (p = 307 = 8^2 + 27*3^2).
    """
    _require_prime_field(ctx)
    p = ctx.p
    rep = represent(p, 27)
    if rep is None or rep[1] != 1 or (p - 1) % 6 or ((p - 1) // 6) % 2 == 0:
        raise NotHallPrime(f"{p} is not of the form x^2 + 27 with (p-1)/6 odd")
    for S in ([0, 1, 3], [0, 1, 4]):
        D = build_cyclotomic(ctx, 6, S, family="hall")
        if diff_check(D).is_difference_set:
            D.params["xy"] = list(rep)
            return D
    raise NeitherIsDiffSet(f"neither C0+C1+C3 nor C0+C1+C4 is a difference set for p={p}")


def build_sidelnikov(ctx: FieldCtx) -> SubsetOfGroup:
    """{x in GF(q)^* : x + 1 is zero or a square}, indexed by log x."""
    if ctx.p == 2:
        raise EvenCharacteristic(f"Sidelnikov sets need odd q, got {ctx.q}")
    x = ctx.exp
    y = ctx.add_arr(x, np.ones_like(x))
    members = (y == 0) | ((ctx.log[y] % 2 == 0) & (y != 0))
    return SubsetOfGroup(MULTIPLICATIVE, ctx.order, ctx.generator, _frozen(members), "sidelnikov", {"q": ctx.q})


def trivial_inner() -> SubsetOfGroup:
    """B = {1} in GF(2)^*."""
    return SubsetOfGroup(MULTIPLICATIVE, 1, 1, _frozen(np.ones(1, dtype=bool)), "trivial", {"s": 2})


def build_gmw(ctx: FieldCtx, s: int, B: SubsetOfGroup, family: str = "gmw") -> SubsetOfGroup:
    """{ab : Tr_{q,s}(a) = 1, b in B}; B's index e stands for beta**e with
    beta = theta**((q-1)/(s-1)) generating GF(s)^*."""
    if ctx.p != 2:
        raise NotSubfield(f"GMW sets need q a power of two, got {ctx.q}")
    if s >= ctx.q:
        raise NotSubfield(f"GF({s}) is not a proper subfield of GF({ctx.q})")
    step = ctx.subfield_generator_exponent(s)
    if B.n != s - 1 or B.k != s // 2:
        raise BadB(f"B must be an (s/2)-subset of a group of order {s - 1}; got n={B.n}, |B|={B.k}")
    if s > 2 and not diff_check(B).is_difference_set:
        raise BadB("B is not a difference set in GF(s)^*")
    tr = trace(ctx, s, ctx.exp)
    a_exps = np.flatnonzero(tr == 1)
    members = np.zeros(ctx.order, dtype=bool)
    for e in B.indices():
        members[(a_exps + int(e) * step) % ctx.order] = True
    params = {"q": ctx.q, "s": s, "inner": B.family, "inner_params": B.params}
    return SubsetOfGroup(MULTIPLICATIVE, ctx.order, ctx.generator, _frozen(members), family, params)


def build_singer(ctx: FieldCtx) -> SubsetOfGroup:
    """Trace-one set of GF(2^k), the GMW construction with s = 2."""
    D = build_gmw(ctx, 2, trivial_inner(), family="singer")
    return D


def complement(D: SubsetOfGroup, family: str | None = None) -> SubsetOfGroup:
    return SubsetOfGroup(D.kind, D.n, D.generator, _frozen(~D.members), family or f"{D.family}-complement", dict(D.params))


def build_inner(spec: str, s: int, depth: int = 0) -> SubsetOfGroup:
    """Difference set B of size s/2 in a cyclic group of order s - 1.

    spec is one of ``trivial``, ``singer``, ``paley``, ``hall`` or
    ``gmw:<s2>:<spec>`` for a nested GMW set in GF(s).  Paley and Hall sets
    (which need s - 1 prime) enter through their complements so that |B| = s/2.
    """
    if depth >= MAX_INNER_DEPTH:
        raise BadB(f"inner set nesting deeper than {MAX_INNER_DEPTH}")
    name, _, rest = spec.partition(":")
    if name == "trivial":
        if s != 2:
            raise BadB("the trivial inner set only exists for s = 2")
        return trivial_inner()
    if s == 2:
        raise BadB(f"s = 2 only admits the trivial inner set, not {spec!r}")
    if name == "singer":
        return build_singer(make_field(s))
    if name in ("paley", "hall"):
        if not is_prime(s - 1):
            raise BadB(f"{name} inner set needs s - 1 prime, got {s - 1}")
        ctx = make_prime_field(s - 1)
        try:
            inner = build_paley(ctx) if name == "paley" else build_hall(ctx)
        except MeritError as exc:
            raise BadB(f"{name} inner set unavailable for s={s}: {exc}") from exc
        return complement(inner, family=name)
    if name == "gmw":
        s2_text, _, sub = rest.partition(":")
        if not s2_text or not sub:
            raise BadB(f"nested spec must read gmw:<s>:<inner>, got {spec!r}")
        s2 = int(s2_text)
        return build_gmw(make_field(s), s2, build_inner(sub, s2, depth + 1))
    raise BadB(f"unknown inner set {spec!r}")


# -- checks ------------------------------------------------------------------------


def difference_counts(D: SubsetOfGroup, method: str = "auto") -> np.ndarray:
    """count[g] = #{(d, d') in D x D : d - d' = g} (exponent differences for
    multiplicative groups).  Index 0 holds |D|."""
    n = D.n
    if method == "auto":
        method = "pairs" if n <= PAIRWISE_MAX_N else "convolution"
    if method == "pairs":
        idx = D.indices()
        counts = np.zeros(n, dtype=np.int64)
        for lo in range(0, len(idx), 256):
            block = (idx[lo : lo + 256, None] - idx[None, :]) % n
            counts += np.bincount(block.ravel(), minlength=n)
        return counts
    if method == "convolution":
        return periodic_correlation(D.members.astype(np.int64), method="fft")
    raise ValueError(f"unknown method {method!r}")


def diff_check(D: SubsetOfGroup, method: str = "auto") -> DiffSetCheck:
    if D.n > DIFF_CHECK_CAP or (method == "pairs" and D.n > 1 << 16):
        raise TooLarge(f"group order {D.n} too large for diff_check")
    counts = difference_counts(D, method)
    rest = counts[1:]
    if len(rest) == 0:
        return DiffSetCheck(D.n, D.k, 0, 0)
    return DiffSetCheck(D.n, D.k, int(rest.min()), int(rest.max()))


def character_values(D: SubsetOfGroup) -> np.ndarray:
    """chi_j(D) = sum_{u in D} exp(2 pi i j u / n) for j = 0..n-1."""
    return D.n * np.fft.ifft(D.members.astype(np.float64))


def char_value_check(D: SubsetOfGroup) -> float:
    """max over nontrivial characters of | |chi(D)|^2 - k(n-k)/(n-1) |."""
    n, k = D.n, D.k
    if n < 2:
        return 0.0
    vals = character_values(D)[1:]
    target = k * (n - k) / (n - 1)
    return float(np.max(np.abs(np.abs(vals) ** 2 - target)))


def intersection_sizes(D: SubsetOfGroup) -> np.ndarray:
    """|(D + u) cap D| for every u (additive) or |uD cap D| (multiplicative)."""
    return difference_counts(D)


def hall_primes(limit: int, start: int = 2) -> list[int]:
    """Primes p in [start, limit] with p = x^2 + 27 and (p-1)/6 odd."""
    out = []
    for p in range(max(start, 7), limit + 1):
        if (p - 1) % 6 == 0 and ((p - 1) // 6) % 2 == 1 and is_prime(p) and (represent(p, 27) or (0, 0))[1] == 1:
            out.append(p)
    return out


def all_class_unions(m: int) -> list[list[int]]:
    """Every m/2-subset of classes containing 0 (the rest follow by translation)."""
    return [[0, *rest] for rest in combinations(range(1, m), m // 2 - 1)]

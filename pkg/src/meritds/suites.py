"""Batch checks behind ``meritds verify``.

Each suite returns a list of Check records; a suite passes when every record does.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import asdict, dataclass, field

import numpy as np

from . import charsums, ff, sets, spectral
from .errors import MeritError
from .seq import realize

REL_TOL = 1e-9
KATZ_SLACK = 1e-6
SUITE_SEED = 20240229  # fixed so the random character tuples are reproducible
JACOBI_TABLE_CAP = 1 << 10


@dataclass
class Check:
    name: str
    passed: bool
    detail: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return asdict(self)


def prime_powers(limit: int, start: int = 2) -> list[int]:
    out = []
    for q in range(max(start, 2), limit + 1):
        try:
            ff.prime_power(q)
        except MeritError:
            continue
        out.append(q)
    return out


def _minus_one_sign(ctx: ff.FieldCtx, j: int) -> int:
    """chi(-1) for chi = xi**j; -1 is theta**((q-1)/2) in odd characteristic."""
    if ctx.p == 2:
        return 1
    return -1 if j % 2 else 1


# -- character sums ----------------------------------------------------------------


def gauss_checks(ctx: ff.FieldCtx, table: charsums.GaussTable) -> Check:
    q, n = ctx.q, ctx.order
    G = table.values
    err_trivial = abs(G[0] + 1)
    err_abs = float(np.max(np.abs(np.abs(G[1:]) - math.sqrt(q)))) if n > 1 else 0.0
    j = np.arange(1, n)
    signs = np.where((ctx.p != 2) & (j % 2 == 1), -1.0, 1.0)
    err_conj = float(np.max(np.abs(G[j] * G[(-j) % n] - signs * q))) if n > 1 else 0.0
    ok = err_trivial <= REL_TOL and err_abs <= REL_TOL * math.sqrt(q) and err_conj <= REL_TOL * q
    return Check(f"gauss q={q}", ok, {"trivial": err_trivial, "modulus": err_abs, "conjugate_product": err_conj})


def jacobi_checks(ctx: ff.FieldCtx, table: charsums.GaussTable) -> Check:
    """Five Jacobi identities over every character pair.

    The product rule J(psi,chi) J(conj psi, chi psi) = psi(-1) q is checked
    where psi chi is nontrivial too; otherwise the second factor vanishes.
    """
    q, n = ctx.q, ctx.order
    J = charsums.jacobi_table(ctx)
    G = table.values
    a = np.arange(n)[:, None]
    b = np.arange(n)[None, :]
    s = (a + b) % n
    psi_triv, chi_triv, prod_triv = a == 0, b == 0, s == 0
    both = ~psi_triv & ~chi_triv
    err = {}
    err["trivial_pair"] = abs(J[0, 0] - q)
    one = psi_triv ^ chi_triv
    err["one_trivial"] = float(np.max(np.abs(J[one]))) if one.any() else 0.0
    mask = both & prod_triv
    err["inverse_pair"] = float(np.max(np.abs(np.abs(J[mask]) - 1))) if mask.any() else 0.0
    mask = both & ~prod_triv
    err["generic_modulus"] = float(np.max(np.abs(np.abs(J[mask]) - math.sqrt(q)))) if mask.any() else 0.0
    rhs = G[a] * G[b] * np.conj(G[s])
    err["gauss_product"] = float(np.max(np.abs(J * q - rhs)[both])) if both.any() else 0.0
    psi_bar = (-a) % n
    second = J[np.broadcast_to(psi_bar, s.shape), s]
    sign = np.where((ctx.p != 2) & (a % 2 == 1), -1.0, 1.0)
    mask = both & ~prod_triv
    err["product_rule"] = float(np.max(np.abs(J * second - sign * q)[mask])) if mask.any() else 0.0
    tol = {
        "trivial_pair": REL_TOL * q,
        "one_trivial": REL_TOL * q,
        "inverse_pair": REL_TOL * q,
        "generic_modulus": REL_TOL * math.sqrt(q) * q,
        "gauss_product": REL_TOL * q**1.5,
        "product_rule": REL_TOL * q,
    }
    ok = all(err[k] <= tol[k] for k in err)
    return Check(f"jacobi q={q}", ok, err)


def jacobi_direct_spot(ctx: ff.FieldCtx, pairs) -> Check:
    """The 2-D DFT table against the defining sum at a few pairs."""
    J = charsums.jacobi_table(ctx)
    worst = max(abs(charsums.jacobi(ctx, a, b) - J[a, b]) for a, b in pairs)
    return Check(f"jacobi-direct q={ctx.q}", worst <= REL_TOL * ctx.q, {"max_err": worst})


def eisenstein_checks(ctx: ff.FieldCtx, table: charsums.GaussTable) -> list[Check]:
    out = []
    for s in ctx.subfield_orders():
        if s >= ctx.q:
            continue
        worst = 0.0
        for chi in range(1, ctx.order):
            direct = charsums.eisenstein(ctx, s, chi)
            closed = charsums.eisenstein_from_gauss(ctx, s, chi, table)
            worst = max(worst, abs(direct - closed))
        out.append(Check(f"eisenstein q={ctx.q} s={s}", worst <= REL_TOL * ctx.q, {"max_err": worst}))
    return out


def random_katz_tuples(fields: list[int], count: int, seed: int = SUITE_SEED) -> list[tuple[int, list[int], list[int]]]:
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        q = int(rng.choice(fields))
        n = q - 1
        r = int(rng.integers(1, 5))
        s = int(rng.integers(1, 5))
        alphas = [int(x) for x in rng.integers(0, n, r)]
        betas = [int(x) for x in rng.integers(0, n, s)]
        if Counter(alphas) == Counter(betas):
            continue
        out.append((q, alphas, betas))
    return out


def katz_checks(tuples, tables: dict[int, charsums.GaussTable]) -> Check:
    worst_ratio, failures = 0.0, []
    for q, alphas, betas in tuples:
        lhs, bound = charsums.katz_check(tables[q], alphas, betas)
        worst_ratio = max(worst_ratio, lhs / bound)
        if lhs > bound + KATZ_SLACK:
            failures.append([q, alphas, betas, lhs, bound])
    return Check(f"katz {len(tuples)} tuples", not failures, {"max_ratio": worst_ratio, "failures": failures})


def charsums_suite(qmax: int = 256, katz_tuples: int = 200) -> list[Check]:
    checks = []
    tables = {}
    for q in prime_powers(qmax, 3):
        ctx = ff.make_field(q)
        table = charsums.gauss_table(ctx)
        tables[q] = table
        checks.append(gauss_checks(ctx, table))
        if q <= JACOBI_TABLE_CAP:
            checks.append(jacobi_checks(ctx, table))
            n = ctx.order
            checks.append(jacobi_direct_spot(ctx, [(0, 0), (1, n - 1), (1, 1 % n), (n // 2, n // 3)]))
        checks.extend(eisenstein_checks(ctx, table))
    katz_fields = [q for q in tables if q <= charsums.KATZ_CAP]
    if katz_tuples and katz_fields:
        checks.append(katz_checks(random_katz_tuples(katz_fields, katz_tuples), tables))
    return checks


# -- difference sets -------------------------------------------------------------


def gmw_instances(qmax: int) -> list[tuple[int, int, str]]:
    """(q, s, inner) for q = 2^k <= qmax, every proper subfield s, Singer or trivial inner set."""
    out = []
    k = 2
    while 1 << k <= qmax:
        for d in range(1, k):
            if k % d == 0:
                s = 1 << d
                out.append((1 << k, s, "trivial" if s == 2 else "singer"))
        k += 1
    return out


def gmw_check(q: int, s: int, inner: str) -> Check:
    D = sets.build_gmw(ff.make_field(q), s, sets.build_inner(inner, s))
    c = sets.diff_check(D)
    ok = c.is_difference_set and (c.n, c.k, c.lam) == (q - 1, q // 2, q // 4)
    dev = sets.char_value_check(D)
    return Check(f"gmw q={q} s={s} inner={inner}", ok and dev < 1e-6 * q, {**c.as_dict(), "char_dev": dev})


def hall_check(p: int) -> Check:
    D = sets.build_hall(ff.make_prime_field(p))
    c = sets.diff_check(D)
    return Check(f"hall p={p}", c.is_hadamard, c.as_dict())


def paley_check(p: int) -> Check:
    D = sets.build_paley(ff.make_prime_field(p))
    c = sets.diff_check(D)
    return Check(f"paley p={p}", c.is_hadamard, c.as_dict())


def sidelnikov_check(q: int) -> Check:
    D = sets.build_sidelnikov(ff.make_field(q))
    c = sets.diff_check(D)
    ok = D.k == (q - 1) // 2 and c.lambda_max - c.lambda_min >= 1
    return Check(f"sidelnikov q={q}", ok, c.as_dict())


def sets_suite(gmw_qmax: int = 1 << 10, hall_max: int = 500, sidelnikov_max: int = 256, paley_max: int = 200) -> list[Check]:
    checks = [gmw_check(*inst) for inst in gmw_instances(gmw_qmax)]
    checks += [hall_check(p) for p in sets.hall_primes(hall_max)]
    checks += [paley_check(p) for p in range(7, paley_max + 1) if p % 4 == 3 and ff.is_prime(p)]
    # q = 3 gives the one-point set {-1} in a group of order 2, trivially a difference set
    checks += [sidelnikov_check(q) for q in prime_powers(sidelnikov_max, 5) if q % 2]
    return checks


# -- tables ------------------------------------------------------------------------


def table_primes(m: int, limit: int) -> list[int]:
    c = 4 if m == 4 else 27
    return [p for p in range(5, limit + 1) if (p - 1) % m == 0 and ff.is_prime(p) and sets.represent(p, c)]


def tables_suite(m: int | None = None, primes: list[int] | None = None, limit: int = 500) -> list[Check]:
    checks = []
    for mm in ([m] if m else [4, 6]):
        for p in primes if primes else table_primes(mm, limit):
            try:
                res = spectral.table_check(p, mm)
            except MeritError as exc:
                checks.append(Check(f"table m={mm} p={p}", False, {"error": type(exc).__name__}))
                continue
            checks.append(
                Check(
                    f"table m={mm} p={p}",
                    res.passed,
                    {"x": res.x, "y": res.y, "parity": res.parity, "sign": res.sign},
                )
            )
    return checks


# -- spectral ------------------------------------------------------------------------

DEFAULT_SPECTRAL = [("gmw", 16), ("gmw", 64), ("sidelnikov", 27), ("paley", 13), ("hall", 31)]


def spectral_instance(family: str, size: int, m: int = 2, S=None):
    if family == "singer":
        D = sets.build_singer(ff.make_field(size))
    elif family == "gmw":
        ctx = ff.make_field(size)
        s = max(s for s in ctx.subfield_orders() if s < size)
        D = sets.build_gmw(ctx, s, sets.build_inner("singer" if s > 2 else "trivial", s))
    elif family == "sidelnikov":
        D = sets.build_sidelnikov(ff.make_field(size))
    elif family == "paley":
        D = sets.build_paley(ff.make_prime_field(size))
    elif family == "hall":
        D = sets.build_hall(ff.make_prime_field(size))
    elif family == "cyclotomic":
        D = sets.build_cyclotomic(ff.make_prime_field(size), m, S if S is not None else list(range(m // 2)))
    else:
        raise ValueError(f"no spectral instance for family {family!r}")
    return realize(D, 0, D.n)


def spectral_check(family: str, size: int, m: int = 2, S=None, threads: int = 1) -> Check:
    rep = spectral.lf_deviation(spectral_instance(family, size, m, S), threads=threads)
    detail = {
        "n": rep.n,
        "model": rep.model,
        "nu": rep.nu,
        "max_dev": rep.max_dev,
        "argmax": list(rep.argmax),
        "bound": rep.bound,
        "condition_value": rep.condition_value,
    }
    return Check(f"spectral {family} {size}", bool(rep.within_bound), detail)


def spectral_suite(instances=None, threads: int = 1) -> list[Check]:
    return [spectral_check(f, q, threads=threads) for f, q in (instances or DEFAULT_SPECTRAL)]

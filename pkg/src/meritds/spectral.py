"""Four-fold spectral correlation L_f, its model comparisons, and R_u profiles.

L_f(a,b,c) = n^-3 sum_k f(e_k) f(e_{k+a}) conj(f(e_{k+b})) conj(f(e_{k+c}))
with e_k = exp(2 pi i k / n).
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np

from .errors import NotAdditive, TooLarge, WrongForm, WrongParity
from .seq import LittlewoodSeq
from .sets import ADDITIVE, SubsetOfGroup, difference_counts, represent

LF_CAP = 512
LF_FULL_CAP = 128

GMW_FAMILIES = ("gmw", "singer")
CYCLOTOMIC_FAMILIES = ("paley", "hall", "cyclotomic")


@dataclass(frozen=True)
class SpectralReport:
    family: str
    n: int
    model: str
    nu: float
    max_dev: float
    argmax: tuple[int, int, int]
    bound: float | None
    condition_value: float
    excluded_origin: bool
    max_imag: float = 0.0

    @property
    def within_bound(self) -> bool | None:
        if self.bound is None:
            return None
        return self.max_dev <= self.bound + 1e-6

    def to_json(self) -> str:
        d = {
            "family": self.family,
            "n": self.n,
            "model": self.model,
            "nu": self.nu,
            "max_dev": self.max_dev,
            "argmax": list(self.argmax),
            "bound": self.bound,
            "condition_value": self.condition_value,
        }
        return json.dumps(d, sort_keys=True)


def root_values(seq: LittlewoodSeq | np.ndarray) -> np.ndarray:
    """f(e_k) for k = 0..n-1, where n is the sequence length."""
    a = np.asarray(seq.coeffs if isinstance(seq, LittlewoodSeq) else seq, dtype=np.float64)
    return len(a) * np.fft.ifft(a)


def lf_value(seq, a: int, b: int, c: int) -> complex:
    """One entry of L_f by the defining sum (reference for the block path)."""
    F = root_values(seq)
    n = len(F)
    k = np.arange(n)
    s = F * F[(k + a) % n] * np.conj(F[(k + b) % n]) * np.conj(F[(k + c) % n])
    return complex(s.sum() / n**3)


def _circulant(F: np.ndarray) -> np.ndarray:
    """C[b, k] = F[(k + b) % n]."""
    n = len(F)
    return F[(np.arange(n)[:, None] + np.arange(n)[None, :]) % n]


def lf_block(F: np.ndarray, a: int, fft_g: np.ndarray | None = None, circ: np.ndarray | None = None) -> np.ndarray:
    """Matrix L[b, c] = L_f(a, b, c) for one value of a.

    The sum over k of W[b,k] conj(F[k+c]) with W[b,k] = F[k] F[k+a] conj(F[k+b])
    is a cyclic cross-correlation in k, done along rows by FFT.
    """
    n = len(F)
    if fft_g is None:
        fft_g = np.fft.fft(np.conj(F))
    if circ is None:
        circ = _circulant(F)
    P = F * np.roll(F, -a)
    conj_w = np.conj(P)[None, :] * circ
    corr = np.fft.ifft(fft_g[None, :] * np.conj(np.fft.fft(conj_w, axis=1)), axis=1)
    return corr / n**3


def lf_full(seq) -> np.ndarray:
    """Complete tensor L[a, b, c] (complex), for n <= LF_FULL_CAP."""
    F = root_values(seq)
    n = len(F)
    if n > LF_FULL_CAP:
        raise TooLarge(f"full L_f tensor limited to n <= {LF_FULL_CAP}; use lf_deviation")
    fft_g = np.fft.fft(np.conj(F))
    circ = _circulant(F)
    return np.stack([lf_block(F, a, fft_g, circ) for a in range(n)])


def ijk(n: int, a: int, b: int, c: int) -> tuple[int, int, int | None]:
    a, b, c = a % n, b % n, c % n
    I = int((c == a and b == 0) or (b == a and c == 0))
    J = int(a == 0 and b == c and b != 0)
    if n % 2:
        return I, J, None
    h = n // 2
    K = int(a == h and b == (c + h) % n and b * c != 0)
    return I, J, K


def model_block(n: int, a: int, model: str, nu: float) -> np.ndarray:
    """Model values over (b, c) for fixed a: I + nu*J or I + K."""
    b = np.arange(n)[:, None]
    c = np.arange(n)[None, :]
    I = ((c == a) & (b == 0)) | ((b == a) & (c == 0))
    out = I.astype(np.float64)
    if model == "I+nuJ":
        if a == 0 and nu:
            out = out + nu * ((b == c) & (b != 0))
    elif model == "I+K":
        if n % 2:
            raise ValueError("the K model needs even n")
        h = n // 2
        if a == h:
            out = out + ((b == (c + h) % n) & (b * c != 0))
    else:
        raise ValueError(f"unknown model {model!r}")
    return out


def family_bound(family: str, n: int, params: dict) -> float | None:
    """Deviation bound for the family, or None when no bound applies."""
    if family in GMW_FAMILIES:
        q = n + 1
        return 2 * q**2.5 / (q - 1) ** 3
    if family == "sidelnikov":
        q = n + 1
        return 23 * q**2.5 / (q - 1) ** 3
    if family in CYCLOTOMIC_FAMILIES:
        m = params.get("m", 2)
        return 18 * (m - 1) ** 4 / math.sqrt(n)
    return None


def default_model(family: str, params: dict) -> tuple[str, float, bool]:
    """(model, nu, exclude_origin) used for a family when not given explicitly."""
    if family == "sidelnikov":
        return "I+K", 0.0, False
    if family in CYCLOTOMIC_FAMILIES:
        return "I+nuJ", float(params.get("nu", 1.0)), True
    return "I+nuJ", 0.0, False


TIE_TOL = 1e-12


def coefficient_stabilizer(coeffs) -> np.ndarray:
    """Units u mod n with a[u*j mod n] == a[j] for every j.

    For such u, f(e_{uk}) = f(e_k), hence L_f(ua, ub, uc) = L_f(a, b, c).
    """
    a = np.asarray(coeffs.coeffs if isinstance(coeffs, LittlewoodSeq) else coeffs)
    n = len(a)
    j = np.arange(n)
    units = [u for u in range(1, max(n, 2)) if math.gcd(u, n) == 1 and np.array_equal(a[(u * j) % n], a)]
    return np.array(units or [1], dtype=np.int64)


def _orbit_min(triples: np.ndarray, units: np.ndarray, n: int) -> tuple[int, int, int]:
    """Lexicographically smallest image of the given triples under the units."""
    images = (units[:, None, None] * triples[None, :, :]) % n
    flat = images.reshape(-1, 3)
    order = np.lexsort((flat[:, 2], flat[:, 1], flat[:, 0]))
    return tuple(int(x) for x in flat[order[0]])


def lf_deviation(
    seq: LittlewoodSeq,
    model: str | None = None,
    nu: float | None = None,
    exclude_origin: bool | None = None,
    threads: int = 1,
    symmetry: bool = True,
) -> SpectralReport:
    """max over (a,b,c) of |L_f - model|.

    With ``symmetry`` only one a per orbit of the coefficient stabilizer is
    scanned; the models and the origin exclusion are invariant under it, so
    the maximum is unchanged.  The reported argmax is the lexicographically
    smallest triple among the orbits of the entries within TIE_TOL of the
    maximum, whatever the thread count.
    """
    F = root_values(seq)
    n = len(F)
    if n > LF_CAP:
        raise TooLarge(f"L_f scan limited to n <= {LF_CAP}")
    fam_model, fam_nu, fam_excl = default_model(seq.family, seq.params)
    model = model or fam_model
    nu = fam_nu if nu is None else nu
    exclude_origin = fam_excl if exclude_origin is None else exclude_origin
    units = coefficient_stabilizer(seq) if symmetry else np.array([1], dtype=np.int64)
    reps = np.unique(np.min((units[:, None] * np.arange(n)[None, :]) % n, axis=0))
    fft_g = np.fft.fft(np.conj(F))
    circ = _circulant(F)

    def one(a: int) -> tuple[float, np.ndarray, float]:
        L = lf_block(F, a, fft_g, circ)
        dev = np.abs(L - model_block(n, a, model, nu))
        if exclude_origin and a == 0:
            dev[0, 0] = -1.0
        top = float(dev.max())
        near = np.argwhere(dev >= top - TIE_TOL)
        return top, near, dev[near[:, 0], near[:, 1]], float(np.max(np.abs(L.imag)))

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(one, (int(a) for a in reps)))
    else:
        results = [one(int(a)) for a in reps]
    best = max(r[0] for r in results)
    max_imag = max(r[3] for r in results)
    winners = np.concatenate(
        [
            np.column_stack([np.full(int(keep.sum()), a), bc[keep]])
            for a, (_, bc, vals, _) in zip(reps, results)
            for keep in [vals >= best - TIE_TOL]
        ]
    )
    arg = _orbit_min(winners.astype(np.int64), units, n)
    bound = family_bound(seq.family, n, seq.params)
    return SpectralReport(
        seq.family, n, model, nu, best, arg, bound, math.log(n) ** 3 * best, exclude_origin, max_imag
    )


# -- periodic autocorrelation profile over GF(p) ---------------------------------


@dataclass(frozen=True)
class PeriodicAcfReport:
    p: int
    m: int
    class_values: list[int]
    constant_on_classes: bool
    condition_sum: Fraction
    scaled: float
    intersections: np.ndarray = field(repr=False)

    def as_dict(self) -> dict:
        d = asdict(self)
        d.pop("intersections")
        d["condition_sum"] = str(self.condition_sum)
        return d


def periodic_profile(D: SubsetOfGroup, omega_log: np.ndarray | None = None) -> PeriodicAcfReport:
    """R_u = 4|(D+u) cap D| - (p-2), grouped by cyclotomic class of u.

    ``omega_log`` is the discrete-log table of GF(p) w.r.t. the primitive root
    that defined D's classes; it is rebuilt from the stored root if omitted.
    """
    if D.kind != ADDITIVE:
        raise NotAdditive("periodic_profile needs a subset of the additive group of GF(p)")
    p = D.n
    m = int(D.params.get("m", 2))
    if omega_log is None:
        omega_log = _log_table(p, int(D.params.get("omega", 0)) or None)
    X = difference_counts(D)
    R = 4 * X - (p - 2)
    cls = omega_log[1:] % m
    vals = R[1:]
    class_values, constant = [], True
    for s in range(m):
        here = vals[cls == s]
        class_values.append(int(here[0]))
        constant &= bool(np.all(here == here[0]))
    total = sum(int(v) ** 2 for v in (4 * X[1:] - p))
    cond = Fraction(total, 16)
    scaled = math.log(p) ** 3 / p**2 * float(cond)
    return PeriodicAcfReport(p, m, class_values, constant, cond, scaled, X)


def _log_table(p: int, omega: int | None) -> np.ndarray:
    from .ff import make_prime_field

    ctx = make_prime_field(p)
    if omega is not None and omega != ctx.generator:
        raise ValueError(f"set was built with primitive root {omega}, pinned root is {ctx.generator}")
    return ctx.log


# -- cyclotomic tables: the numbers 4|(D+u) cap D| - (p-2) by class ---------------------

TABLE_4 = {
    "even": {(0, 1): lambda y: [-3 + 2 * y, -3 - 2 * y, 1 + 2 * y, 1 - 2 * y]},
    "odd": {(0, 1): lambda y: [-1 - 2 * y, -1 + 2 * y, -1 - 2 * y, -1 + 2 * y]},
}

TABLE_6 = {
    "odd": {
        (0, 1, 2): lambda y: [-1 + 8 * y, -1, -1 - 8 * y, -1 + 8 * y, -1, -1 - 8 * y],
        (0, 1, 3): lambda y: [-3 + 2 * y, -1, 1 - 2 * y, -3 + 2 * y, -1, 1 - 2 * y],
        (0, 2, 3): lambda y: [-3 - 2 * y, 1 + 2 * y, -1, -3 - 2 * y, 1 + 2 * y, -1],
    },
    "even": {
        (0, 1, 2): lambda y: [-3 + 8 * y, -3, -3 - 8 * y, 1 + 8 * y, 1, 1 - 8 * y],
        (0, 1, 3): lambda y: [-3 + 6 * y, -3 - 4 * y, 1 + 2 * y, -3 - 2 * y, 1 + 4 * y, 1 - 6 * y],
        (0, 2, 3): lambda y: [-3 + 2 * y, 1 - 2 * y, -3 + 4 * y, -3 - 6 * y, 1 + 6 * y, 1 - 4 * y],
    },
}


@dataclass(frozen=True)
class TableCheck:
    p: int
    m: int
    x: int
    y: int
    parity: str
    sign: int | None
    rows: list[dict]

    @property
    def passed(self) -> bool:
        return self.sign is not None


def table_check(p: int, m: int, parity: str | None = None) -> TableCheck:
    """Compare measured class values with the closed forms in y, trying y and -y.

    A single sign has to fit every set listed for the table, since the sign of
    y is tied to the choice of primitive root.
    """
    from .ff import make_prime_field
    from .sets import build_cyclotomic

    if m == 4:
        rep, table = represent(p, 4), TABLE_4
    elif m == 6:
        rep, table = represent(p, 27), TABLE_6
    else:
        raise ValueError("tables exist for m = 4 and m = 6 only")
    if rep is None or (p - 1) % m:
        raise WrongForm(f"{p} is not of the form required for order {m}")
    actual = "even" if ((p - 1) // m) % 2 == 0 else "odd"
    if parity is not None and parity != actual:
        raise WrongParity(f"(p-1)/{m} is {actual} for p={p}, requested {parity}")
    x, y = rep
    ctx = make_prime_field(p)
    measured = {}
    for S in table[actual]:
        D = build_cyclotomic(ctx, m, S)
        measured[S] = periodic_profile(D, ctx.log).class_values
    sign = None
    for sgn in (1, -1):
        if all(measured[S] == f(sgn * y) for S, f in table[actual].items()):
            sign = sgn
            break
    rows = [
        {"S": list(S), "measured": measured[S], "expected_plus": f(y), "expected_minus": f(-y)}
        for S, f in table[actual].items()
    ]
    return TableCheck(p, m, x, y, actual, sign, rows)

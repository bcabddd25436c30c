"""Littlewood sequences f_{r,t}, exact aperiodic autocorrelations and merit factors."""

from __future__ import annotations

import csv
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import TYPE_CHECKING, Iterable, Sequence

import numpy as np

from .errors import DegenerateDenominator, PrecisionLoss

if TYPE_CHECKING:
    from .sets import SubsetOfGroup

DIRECT_MAX_T = 1 << 13
ROUNDING_SLACK = 0.25


@dataclass(frozen=True, eq=False)
class LittlewoodSeq:
    """A +-1 coefficient vector with the data needed to rebuild it."""

    coeffs: np.ndarray
    family: str = "custom"
    n: int | None = None
    r: int = 0
    params: dict = field(default_factory=dict)

    @property
    def t(self) -> int:
        return len(self.coeffs)

    def __len__(self) -> int:
        return len(self.coeffs)

    def provenance(self) -> dict:
        return {"family": self.family, "n": self.n, "r": self.r, "t": self.t, "params": self.params}

    def to_pm(self) -> str:
        return "".join("+" if c > 0 else "-" for c in self.coeffs)


@dataclass(frozen=True, eq=False)
class MeritReport:
    t: int
    sum_sq_acf: int
    merit_factor: float
    acf: np.ndarray | None = field(default=None, repr=False)


def from_coeffs(coeffs: Iterable[int], **provenance) -> LittlewoodSeq:
    arr = np.asarray(list(coeffs) if not isinstance(coeffs, np.ndarray) else coeffs, dtype=np.int8)
    if arr.ndim != 1 or not np.all((arr == 1) | (arr == -1)):
        raise ValueError("coefficients must be a 1-D sequence of +1/-1")
    return LittlewoodSeq(arr, **provenance)


def realize(D: SubsetOfGroup, r: int, t: int) -> LittlewoodSeq:
    """Coefficients 1_D(g^(j+r)) for j < t, indices taken modulo the group order."""
    if t < 1:
        raise ValueError("t must be at least 1")
    idx = (np.arange(t, dtype=np.int64) + r) % D.n
    coeffs = np.where(D.members[idx], 1, -1).astype(np.int8)
    return LittlewoodSeq(coeffs, family=D.family, n=D.n, r=r % D.n, params=dict(D.params))


def _as_int_array(seq) -> np.ndarray:
    coeffs = seq.coeffs if isinstance(seq, LittlewoodSeq) else seq
    return np.asarray(coeffs, dtype=np.int64)


def acf(seq) -> np.ndarray:
    """Exact aperiodic autocorrelations c_1..c_{t-1} by direct summation."""
    a = _as_int_array(seq)
    t = len(a)
    if t < 2:
        return np.zeros(0, dtype=np.int64)
    return np.correlate(a, a, mode="full")[t:].astype(np.int64)


def _fft_len(t: int) -> int:
    return 1 << (2 * t - 1).bit_length()


def acf_fft(seq) -> np.ndarray:
    """Same quantity as :func:`acf` through a zero-padded real FFT.

    Raises PrecisionLoss if any raw value is further than 0.25 from an integer.
    """
    a = _as_int_array(seq)
    t = len(a)
    if t < 2:
        raise ValueError("acf_fft needs t >= 2")
    size = _fft_len(t)
    spec = np.fft.rfft(a.astype(np.float64), size)
    raw = np.fft.irfft(spec * np.conj(spec), size)[1:t]
    rounded = np.rint(raw)
    residual = float(np.max(np.abs(raw - rounded))) if len(raw) else 0.0
    if residual > ROUNDING_SLACK:
        raise PrecisionLoss(f"FFT rounding residual {residual:.3g} at t={t}")
    return rounded.astype(np.int64)


def acf_fft_residual(seq) -> float:
    """Largest distance of the raw FFT autocorrelation from the integers."""
    a = _as_int_array(seq)
    t = len(a)
    size = _fft_len(t)
    spec = np.fft.rfft(a.astype(np.float64), size)
    raw = np.fft.irfft(spec * np.conj(spec), size)[1:t]
    return float(np.max(np.abs(raw - np.rint(raw)))) if len(raw) else 0.0


def periodic_correlation(bits: np.ndarray, method: str = "auto") -> np.ndarray:
    """Exact cyclic correlation sum_x b[x] b[x+g] of an integer vector, all g.

    ``method`` is "direct", "fft" or "auto" (direct up to DIRECT_MAX_T).
    """
    b = np.asarray(bits, dtype=np.int64)
    n = len(b)
    if method == "direct" or (method == "auto" and n <= DIRECT_MAX_T):
        out = np.array([int(np.dot(b, np.roll(b, -g))) for g in range(n)], dtype=np.int64)
        return out
    spec = np.fft.rfft(b.astype(np.float64))
    raw = np.fft.irfft(spec * np.conj(spec), n)
    rounded = np.rint(raw)
    if np.max(np.abs(raw - rounded)) > ROUNDING_SLACK:
        raise PrecisionLoss(f"cyclic correlation rounding failed at n={n}")
    return rounded.astype(np.int64)


def sum_of_squares(c: np.ndarray) -> int:
    """Exact sum of squares; switches to Python ints when int64 could overflow."""
    c = np.asarray(c, dtype=np.int64)
    if len(c) < 2_000_000:
        return int(np.dot(c, c))
    return sum(int(x) * int(x) for x in c)


def merit_factor(seq, keep_acf: bool = False) -> MeritReport:
    """F = t^2 / (2 sum_{u>=1} c_u^2) with the denominator in exact integers."""
    a = _as_int_array(seq)
    t = len(a)
    if t <= DIRECT_MAX_T:
        c = acf(a)
    else:
        try:
            c = acf_fft(a)
        except PrecisionLoss:
            c = acf(a)
    energy = sum_of_squares(c)
    if energy == 0:
        raise DegenerateDenominator(f"all off-peak autocorrelations vanish (t={t})")
    return MeritReport(t, energy, t * t / (2 * energy), c if keep_acf else None)


# -- sweeps --------------------------------------------------------------------


def round_half_up(x: float) -> int:
    return math.floor(x + 0.5)


@dataclass(frozen=True)
class SweepRow:
    R: float
    T: float
    r: int
    t: int
    F: float | None


def _sweep_cell(D: SubsetOfGroup, R: float, T: float) -> SweepRow:
    r = round_half_up(R * D.n)
    t = max(1, round_half_up(T * D.n))
    try:
        F = merit_factor(realize(D, r, t)).merit_factor
    except DegenerateDenominator:
        F = None
    return SweepRow(R, T, r, t, F)


def sweep(D: SubsetOfGroup, R_grid: Sequence[float], T_grid: Sequence[float], threads: int = 1) -> list[SweepRow]:
    """Exact merit factors over the product grid, rows in (R, T) input order."""
    if not R_grid or not T_grid:
        raise ValueError("sweep grids must be nonempty")
    if any(T <= 0 for T in T_grid):
        raise ValueError("T grid entries must be positive")
    cells = [(R, T) for R in R_grid for T in T_grid]
    if threads <= 1:
        return [_sweep_cell(D, R, T) for R, T in cells]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda c: _sweep_cell(D, *c), cells))


# -- file formats ----------------------------------------------------------------


def format_float(x: float | None) -> str:
    if x is None:
        return ""
    return f"{x:.12g}"


def write_sweep_csv(rows: Sequence[SweepRow], path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["R", "T", "r", "t", "F"])
        for row in rows:
            w.writerow([format_float(row.R), format_float(row.T), row.r, row.t, format_float(row.F)])


def sidecar_path(path) -> Path:
    path = Path(path)
    return path.with_name(path.name + ".json")


def write_sequence(seq: LittlewoodSeq, path) -> Path:
    """Write the +/- line file and its JSON provenance sidecar; return the sidecar path."""
    path = Path(path)
    path.write_text(seq.to_pm() + "\n")
    side = sidecar_path(path)
    side.write_text(json.dumps(seq.provenance(), sort_keys=True, indent=2) + "\n")
    return side


def parse_pm(text: str) -> np.ndarray:
    line = text.strip()
    if not line or set(line) - {"+", "-"}:
        raise ValueError("sequence line must consist of '+' and '-' only")
    return np.array([1 if ch == "+" else -1 for ch in line], dtype=np.int8)


def read_sequence(path) -> LittlewoodSeq:
    path = Path(path)
    coeffs = parse_pm(path.read_text())
    side = sidecar_path(path)
    if side.exists():
        prov = json.loads(side.read_text())
        if prov.get("t") not in (None, len(coeffs)):
            raise ValueError(f"sidecar says t={prov['t']} but file has {len(coeffs)} symbols")
        return LittlewoodSeq(coeffs, prov.get("family", "custom"), prov.get("n"), prov.get("r", 0), prov.get("params", {}))
    return LittlewoodSeq(coeffs)

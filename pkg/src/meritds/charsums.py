"""Gauss, Jacobi and Eisenstein sums over a FieldCtx, plus the Katz bound check.

Characters are integers j standing for xi**j (see :mod:`meritds.ff`).
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .errors import NotSubfield, PermutedMultisets, TooLarge, TrivialChar
from .ff import FieldCtx, char_values, frobenius_sum, trace

GAUSS_CAP = 1 << 20
KATZ_CAP = 1 << 12


@dataclass(frozen=True, eq=False)
class GaussTable:
    """Canonical Gauss sums G(xi**j) for every j in [0, q-1)."""

    ctx: FieldCtx = field(repr=False)
    values: np.ndarray = field(repr=False)

    def __getitem__(self, j: int) -> complex:
        return complex(self.values[j % self.ctx.order])

    def __len__(self) -> int:
        return len(self.values)


def additive_character(ctx: FieldCtx) -> np.ndarray:
    """exp(2 pi i Tr_{q,p}(y) / p) for every element index y."""
    tr = trace(ctx, ctx.p, np.arange(ctx.q))
    return np.exp(2j * np.pi * np.asarray(tr) / ctx.p)


def gauss_table(ctx: FieldCtx) -> GaussTable:
    """All q-1 Gauss sums by one DFT over the exponent domain.

    G(xi**j) = sum_u exp(2 pi i j u/(q-1)) * psi(theta**u), i.e. (q-1) times the
    inverse DFT of the additive character read along powers of theta.
    """
    if ctx.q > GAUSS_CAP:
        raise TooLarge(f"Gauss table for GF({ctx.q}) exceeds cap {GAUSS_CAP}")
    psi = additive_character(ctx)
    along_powers = psi[ctx.exp]
    values = ctx.order * np.fft.ifft(along_powers)
    values.flags.writeable = False
    return GaussTable(ctx, values)


def gauss_direct(ctx: FieldCtx, chi: int) -> complex:
    """Single Gauss sum by the defining sum; oracle for gauss_table."""
    psi = additive_character(ctx)
    return complex(np.sum(char_values(ctx, chi)[1:] * psi[1:]))


def jacobi(ctx: FieldCtx, psi: int, chi: int) -> complex:
    """J(psi, chi) = sum over all y of psi(y) chi(1 - y), summed directly."""
    y = np.arange(ctx.q)
    one_minus_y = ctx.add_arr(np.ones_like(y), ctx.neg_arr(y))
    return complex(np.sum(char_values(ctx, psi)[y] * char_values(ctx, chi)[one_minus_y]))


def jacobi_from_gauss(table: GaussTable, psi: int, chi: int) -> complex:
    """J(psi, chi) = G(psi) G(chi) conj(G(psi chi)) / q, valid for nontrivial psi, chi."""
    n = table.ctx.order
    if psi % n == 0 or chi % n == 0:
        raise TrivialChar("Gauss-sum route needs nontrivial psi and chi")
    return table[psi] * table[chi] * np.conj(table[psi + chi]) / table.ctx.q


def jacobi_table(ctx: FieldCtx) -> np.ndarray:
    """Matrix J[a, b] = J(xi**a, xi**b) for all character pairs, via a 2-D DFT.

    Each y outside {0, 1} contributes one point (log y, log(1-y)); the zero
    convention adds the y = 0 and y = 1 terms on the trivial row and column.
    """
    n = ctx.order
    y = np.arange(2, ctx.q)
    one_minus_y = ctx.add_arr(np.ones_like(y), ctx.neg_arr(y))
    counts = np.zeros((n, n))
    np.add.at(counts, (ctx.log[y], ctx.log[one_minus_y]), 1.0)
    table = n * n * np.fft.ifft2(counts)
    table[0, :] += 1.0  # y = 0: psi(0) = 1 only for trivial psi, chi(1) = 1
    table[:, 0] += 1.0  # y = 1: chi(0) = 1 only for trivial chi
    return table


def restricted_gauss(ctx: FieldCtx, sub_order: int, chi: int) -> complex:
    """Canonical Gauss sum over GF(sub_order) of the restriction of xi**chi."""
    d = ctx.check_subfield(sub_order)
    step = ctx.subfield_generator_exponent(sub_order)
    exps = np.arange(sub_order - 1) * step
    elems = ctx.exp[exps]
    tr = frobenius_sum(ctx, elems, ctx.p, d)
    psi = np.exp(2j * np.pi * tr / ctx.p)
    vals = np.exp(2j * np.pi * ((chi * exps) % ctx.order) / ctx.order)
    return complex(np.sum(vals * psi))


def restriction_is_trivial(ctx: FieldCtx, sub_order: int, chi: int) -> bool:
    return chi % (sub_order - 1) == 0


def eisenstein(ctx: FieldCtx, sub_order: int, chi: int) -> complex:
    """E(chi): sum of chi(a) over the hyperplane Tr_{q,s}(a) = 1."""
    if sub_order >= ctx.q:
        raise NotSubfield(f"GF({sub_order}) is not a proper subfield of GF({ctx.q})")
    ctx.check_subfield(sub_order)
    if chi % ctx.order == 0:
        raise TrivialChar("Eisenstein sum needs a nontrivial character")
    tr = trace(ctx, sub_order, np.arange(ctx.q))
    hyperplane = np.flatnonzero(tr == 1)
    return complex(np.sum(char_values(ctx, chi)[hyperplane]))


def eisenstein_from_gauss(ctx: FieldCtx, sub_order: int, chi: int, table: GaussTable | None = None) -> complex:
    """Closed form G(chi)/G(chi*) or -G(chi)/s, chi* the restriction to GF(s)."""
    g = table[chi] if table is not None else gauss_direct(ctx, chi)
    if restriction_is_trivial(ctx, sub_order, chi):
        return -g / sub_order
    return g / restricted_gauss(ctx, sub_order, chi)


def katz_check(table: GaussTable, alphas: list[int], betas: list[int]) -> tuple[float, float]:
    """|sum_chi prod G(chi alpha_i) prod conj G(chi beta_j)| and max(r,s) q^((r+s+1)/2)."""
    ctx = table.ctx
    n = ctx.order
    if ctx.q > KATZ_CAP:
        raise TooLarge(f"Katz check limited to q <= {KATZ_CAP}")
    if len(alphas) + len(betas) > 8:
        raise TooLarge("at most 8 characters in total")
    if Counter(a % n for a in alphas) == Counter(b % n for b in betas):
        raise PermutedMultisets("alphas are a permutation of betas; the bound does not apply")
    chis = np.arange(n)
    prod = np.ones(n, dtype=np.complex128)
    for a in alphas:
        prod *= table.values[(chis + a) % n]
    for b in betas:
        prod *= np.conj(table.values[(chis + b) % n])
    lhs = float(abs(prod.sum()))
    bound = max(len(alphas), len(betas)) * ctx.q ** ((len(alphas) + len(betas) + 1) / 2)
    return lhs, bound

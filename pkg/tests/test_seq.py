import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from meritds import ff, sets, seq
from meritds.errors import DegenerateDenominator

pm_lists = st.lists(st.sampled_from([-1, 1]), min_size=2, max_size=300)


def acf_oracle(a):
    t = len(a)
    return [sum(a[j] * a[j + u] for j in range(t - u)) for u in range(1, t)]


def test_acf_small_examples():
    assert seq.acf([1, 1, -1]).tolist() == [0, -1]
    assert seq.acf_fft([1, 1, -1]).tolist() == [0, -1]
    assert seq.acf(np.ones(9)).tolist() == list(range(8, 0, -1))


def test_merit_small_examples():
    assert seq.merit_factor([1, 1, -1]).merit_factor == 4.5
    assert seq.merit_factor([1, 1]).merit_factor == 2.0
    with pytest.raises(DegenerateDenominator):
        seq.merit_factor([1])


def test_barker_13():
    barker = [1, 1, 1, 1, 1, -1, -1, 1, 1, -1, 1, -1, 1]
    rep = seq.merit_factor(barker)
    assert rep.sum_sq_acf == 6
    assert rep.merit_factor == pytest.approx(169 / 12)


@settings(max_examples=100, deadline=None)
@given(pm_lists)
def test_acf_matches_oracle(a):
    assert seq.acf(a).tolist() == acf_oracle(a)


@settings(max_examples=100, deadline=None)
@given(pm_lists)
def test_negation_and_reversal_keep_energy(a):
    arr = np.array(a)
    e = seq.sum_of_squares(seq.acf(arr))
    assert seq.acf(-arr).tolist() == seq.acf(arr).tolist()
    assert seq.sum_of_squares(seq.acf(arr[::-1])) == e


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 4096), st.integers(0, 2**32 - 1))
def test_fft_path_equals_direct(t, seed):
    a = np.random.default_rng(seed).choice([-1, 1], t)
    assert np.array_equal(seq.acf_fft(a), seq.acf(a))


def test_fft_residual_at_two_to_twenty():
    a = np.random.default_rng(7).choice([-1, 1], 1 << 20)
    assert seq.acf_fft_residual(a) < 0.25
    c = seq.acf_fft(a)
    assert len(c) == (1 << 20) - 1


def test_large_merit_uses_fft_and_matches_direct():
    a = np.random.default_rng(3).choice([-1, 1], 20000)
    direct = seq.sum_of_squares(seq.acf(a))
    assert seq.merit_factor(a).sum_sq_acf == direct


@pytest.mark.parametrize("p", [11, 101, 499, 1019])
def test_quartic_norm_quadrature(p):
    D = sets.build_paley(ff.make_prime_field(p))
    for r in (0, p // 4, p // 3):
        f = seq.realize(D, r, p)
        t = len(f)
        values = np.fft.fft(f.coeffs.astype(float), 8 * t)
        l4 = np.mean(np.abs(values) ** 4)
        F_quad = t * t / (l4 - t * t)
        assert F_quad == pytest.approx(seq.merit_factor(f).merit_factor, rel=1e-6)


def test_realize_paley_7():
    D = sets.build_paley(ff.make_prime_field(7))
    assert seq.realize(D, 0, 7).coeffs.tolist() == [-1, 1, 1, -1, 1, -1, -1]


def test_realize_periodicity_and_extension():
    D = sets.build_singer(ff.make_field(16))
    base = seq.realize(D, 0, 15).coeffs
    assert np.array_equal(seq.realize(D, 15, 15).coeffs, base)
    assert int((base == 1).sum()) == 8
    ext = seq.realize(D, 0, 30).coeffs
    assert np.array_equal(ext, np.concatenate([base, base]))


def test_realize_multiplicative_definition():
    ctx = ff.make_field(27)
    D = sets.build_sidelnikov(ctx)
    members = set(ctx.exp[D.indices()].tolist())
    f = seq.realize(D, 5, 40)
    for j, c in enumerate(f.coeffs):
        x = ctx.power(ctx.generator, j + 5)
        assert c == (1 if x in members else -1)


def test_round_half_up():
    assert seq.round_half_up(2.5) == 3
    assert seq.round_half_up(3.5) == 4
    assert seq.round_half_up(0.49999) == 0


def test_sweep_order_and_rounding():
    D = sets.build_paley(ff.make_prime_field(7))
    rows = seq.sweep(D, [0], [1])
    assert len(rows) == 1 and (rows[0].r, rows[0].t) == (0, 7)
    assert rows[0].F == seq.merit_factor(seq.realize(D, 0, 7)).merit_factor
    rows = seq.sweep(D, [0.0, 0.5], [0.5, 1.0])
    assert [(r.R, r.T) for r in rows] == [(0.0, 0.5), (0.0, 1.0), (0.5, 0.5), (0.5, 1.0)]
    assert rows[0].t == 4 and rows[2].r == 4


def test_sweep_periodic_extension():
    D = sets.build_singer(ff.make_field(16))
    (row,) = seq.sweep(D, [0], [2])
    assert row.t == 30


def test_sweep_degenerate_cell_is_null():
    D = sets.build_paley(ff.make_prime_field(7))
    rows = seq.sweep(D, [0], [0.1])
    assert rows[0].t == 1 and rows[0].F is None


def test_sweep_threads_deterministic():
    D = sets.build_paley(ff.make_prime_field(1019))
    grid_R = [i / 20 for i in range(10)]
    grid_T = [0.5, 1.0, 1.5]
    one = seq.sweep(D, grid_R, grid_T, threads=1)
    many = seq.sweep(D, grid_R, grid_T, threads=6)
    assert one == many


def test_sweep_rejects_empty():
    D = sets.build_paley(ff.make_prime_field(7))
    with pytest.raises(ValueError):
        seq.sweep(D, [], [1])


def test_sequence_file_roundtrip(tmp_path):
    D = sets.build_hall(ff.make_prime_field(31))
    f = seq.realize(D, 3, 20)
    path = tmp_path / "hall.txt"
    side = seq.write_sequence(f, path)
    assert path.read_text() == f.to_pm() + "\n"
    prov = json.loads(side.read_text())
    assert prov["family"] == "hall" and prov["t"] == 20 and prov["r"] == 3
    back = seq.read_sequence(path)
    assert np.array_equal(back.coeffs, f.coeffs) and back.n == 31


def test_sweep_csv(tmp_path):
    D = sets.build_paley(ff.make_prime_field(13))
    out = tmp_path / "s.csv"
    seq.write_sweep_csv(seq.sweep(D, [0.25], [1]), out)
    lines = out.read_text().splitlines()
    assert lines[0] == "R,T,r,t,F"
    assert lines[1].startswith("0.25,1,3,13,")


def test_parse_pm_rejects_junk():
    with pytest.raises(ValueError):
        seq.parse_pm("+-x")
    with pytest.raises(ValueError):
        seq.from_coeffs([1, 0, -1])

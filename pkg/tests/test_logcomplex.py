import cmath
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from semidecay import logcomplex as lc
from semidecay.logcomplex import LogComplex

finite_lm = st.floats(-600, 600)
phases = st.floats(-math.pi, math.pi)
lcs = st.builds(LogComplex, finite_lm, phases)


def test_unit_times_minus_one():
    r = lc.mul(LogComplex(0.0, 0.0), LogComplex(0.0, math.pi))
    assert r.log_mag == 0.0 and r.phase == pytest.approx(math.pi)


def test_zero_absorbs():
    assert lc.mul(lc.from_cartesian(2 - 3j), lc.ZERO).is_zero
    assert lc.ZERO.phase == 0.0


def test_cartesian_product_example():
    r = lc.to_cartesian(lc.mul(lc.from_cartesian(3 + 4j), lc.from_cartesian(1 - 2j)))
    assert abs(r - (11 - 2j)) <= 1e-14 * abs(11 - 2j)


def test_phase_wrapped_to_half_open_interval():
    assert LogComplex(0.0, -math.pi).phase == math.pi
    assert LogComplex(0.0, 3 * math.pi).phase == pytest.approx(math.pi)
    assert -math.pi < LogComplex(1.0, 100.0).phase <= math.pi


def test_nan_rejected():
    with pytest.raises(ValueError):
        LogComplex(float("nan"), 0.0)


def test_singleton_sum_exact():
    z = LogComplex(12.5, -0.3)
    assert lc.lsum([z]) == z


def test_opposites_cancel():
    u = lc.from_cartesian(1.234 + 5.678j)
    r = lc.lsum([u, -u])
    assert r.is_zero or math.exp(r.log_mag - u.log_mag) <= 1e-15


def test_roots_of_unity_sum_vanishes():
    terms = [lc.exp_c(2j * math.pi * s / 7) for s in range(1, 8)]
    r = lc.lsum(terms)
    assert r.is_zero or math.exp(r.log_mag) <= 1e-14


def test_pow_int_i_fourth():
    r = lc.pow_int(lc.from_cartesian(1j), 4)
    assert r.log_mag == pytest.approx(0.0, abs=1e-15)
    assert abs(r.phase) <= 1e-15


def test_exp_c_no_underflow():
    r = lc.exp_c(-700.0)
    assert r.log_mag == -700.0 and not r.is_zero


def test_lgamma_log_ten():
    assert lc.lgamma_log(10) == pytest.approx(math.log(3628800), rel=1e-15)
    assert lc.lgamma_log(10) == pytest.approx(15.1044, abs=1e-4)
    with pytest.raises(ValueError):
        lc.lgamma_log(-1)


def test_to_cartesian_range_errors():
    with pytest.raises(lc.LogOverflowError):
        lc.to_cartesian(LogComplex(1000.0, 0.0))
    with pytest.raises(lc.LogUnderflowError):
        lc.to_cartesian(LogComplex(-1000.0, 0.0))


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        lc.div(lc.ONE, lc.ZERO)


@settings(max_examples=300, deadline=None)
@given(st.complex_numbers(min_magnitude=1e-300, max_magnitude=1e300, allow_nan=False,
                          allow_infinity=False))
def test_round_trip(z):
    back = lc.to_cartesian(lc.from_cartesian(z))
    assert abs(back - z) <= 1e-13 * abs(z)


@settings(max_examples=300, deadline=None)
@given(st.floats(-300, 300), phases, st.floats(-300, 300), phases)
def test_mul_matches_cartesian(l1, p1, l2, p2):
    a, b = LogComplex(l1, p1), LogComplex(l2, p2)
    za, zb = lc.to_cartesian(a), lc.to_cartesian(b)
    prod = za * zb
    if prod == 0 or not cmath.isfinite(prod) or abs(prod) < 1e-290:
        return
    assert abs(lc.to_cartesian(lc.mul(a, b)) - prod) <= 1e-12 * abs(prod)


@settings(max_examples=200, deadline=None)
@given(lcs, lcs)
def test_mul_log_domain_exact(a, b):
    r = lc.mul(a, b)
    assert r.log_mag == a.log_mag + b.log_mag
    assert abs(lc.wrap(r.phase - (a.phase + b.phase))) <= 1e-15


@settings(max_examples=200, deadline=None)
@given(lcs, st.integers(-50, 50))
def test_pow_int_phase(a, n):
    r = lc.pow_int(a, n)
    mp_phase = mpmath.mpf(a.phase) * n
    expected = float(mpmath.atan2(mpmath.sin(mp_phase), mpmath.cos(mp_phase)))
    assert abs(lc.wrap(r.phase - expected)) <= 1e-12


@settings(max_examples=100, deadline=None)
@given(st.lists(st.tuples(st.floats(-5, 5), phases), min_size=2, max_size=30), st.randoms())
def test_sum_permutation_insensitive(items, rnd):
    terms = [LogComplex(a, p) for a, p in items]
    mp_sum = mpmath.fsum(mpmath.exp(a) * mpmath.expj(p) for a, p in items)
    mass = sum(math.exp(a) for a, _ in items)
    if abs(mp_sum) == 0 or mass / float(abs(mp_sum)) > 1e3:
        return
    shuffled = terms[:]
    rnd.shuffle(shuffled)
    r1, r2 = lc.lsum(terms), lc.lsum(shuffled)
    assert abs(math.exp(r1.log_mag - r2.log_mag) - 1) <= 1e-12
    assert abs(lc.to_cartesian(r1) - complex(mp_sum)) <= 1e-12 * float(abs(mp_sum))


def test_sum_survives_huge_moduli():
    # 1e400 + 1e400 i - 1e400: cartesian floats overflow, the log domain does not
    a = LogComplex(400 * math.log(10), 0.0)
    b = LogComplex(400 * math.log(10), math.pi / 2)
    r = lc.lsum([a, b, -a])
    assert r.log_mag == pytest.approx(400 * math.log(10), rel=1e-15)
    assert r.phase == pytest.approx(math.pi / 2, abs=1e-15)


def test_sum_rows_matches_scalar(backend):
    rng = np.random.default_rng(4)
    lm = rng.uniform(-50, 50, (6, 9))
    ph = rng.uniform(-3, 3, (6, 9))
    rl, rp = lc.sum_rows(lm, ph)
    for i in range(6):
        s = lc.sum_arrays(lm[i], ph[i])
        assert rl[i] == pytest.approx(s.log_mag, abs=1e-13)
        assert abs(lc.wrap(rp[i] - s.phase)) <= 1e-13


@pytest.mark.parametrize("n,t", [(0, 3.0), (1, 0.5), (10, 10.0), (15, 40.0), (16, 16.0),
                                 (200, 150.0), (5000, 5100.0), (100000, 1.0)])
def test_log_poisson_against_mpmath(n, t):
    mp = mpmath.mpf(t) ** n * mpmath.exp(-t) / mpmath.factorial(n)
    assert lc.log_poisson(n, t) == pytest.approx(float(mpmath.log(mp)), rel=1e-13, abs=1e-12)


def test_log_poisson_at_zero():
    assert lc.log_poisson(3, 0.0) == float("-inf")
    assert lc.log_poisson(0, 0.0) == 0.0


@pytest.mark.parametrize("z", [1e-12 + 0j, 1e-9j, 0.3 - 2j, 2.0 + 1.0j, 50 + 3j, 700 + 0.1j,
                               5000 + 1j, -3 + 1j, -800 + 2j, 1e-8 + 2 * math.pi * 1j])
def test_log_expm1_against_mpmath(z):
    lm, ph = lc.log_expm1(np.array([z]))
    ref = mpmath.expm1(mpmath.mpc(z.real, z.imag))
    assert lm[0] == pytest.approx(float(mpmath.log(abs(ref))), rel=1e-12, abs=1e-12)
    assert abs(lc.wrap(ph[0] - float(mpmath.arg(ref)))) <= 1e-9

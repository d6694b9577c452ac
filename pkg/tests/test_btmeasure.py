import math

import numpy as np
import pytest
from scipy import integrate

from oracles import cauchy as mp_cauchy
from oracles import laplace as mp_laplace
from oracles import rel_err
from semidecay import btmeasure as bt
from semidecay import logcomplex as lc
from semidecay import rates as rt
from semidecay.omega import contains_many


@pytest.fixture(scope="module")
def mu9():
    return bt.build(1, 1, 10, 0.4)


def _k2_measure(H=10.0):
    p = bt.BTParams(1.0, 1.0, H, 0.4, 1.0, 0.1, 2, False)
    return bt.build_from_params(p)


# ------------------------------------------------------------- construction

def test_parameters_h10(mu9):
    p = mu9.params
    assert p.k == round(0.4 * 10 * math.log(10)) == 9
    assert p.A == pytest.approx(2 * 9 * math.log(9), rel=1e-15)
    assert p.A == pytest.approx(39.550, abs=5e-4)
    assert p.log_tau == pytest.approx(8 * math.log(p.A) - 0.5 * math.log(9), rel=1e-15)
    assert p.w == complex(-1, 10)


@pytest.mark.parametrize("ab,psi,ks", [((1, 1), 0.4, [9, 24, 59, 140]),
                                       ((2, 2), 0.8, [184, 959, 4722, 22436]),
                                       ((1, 0.75), 0.2, [5, 12, 30, 70])])
def test_ladder_k(ab, psi, ks):
    got = [bt.build(*ab, H, psi).k for H in (10, 20, 40, 80)]
    assert got == ks


def test_total_mass_vanishes(mu9):
    m = bt.total_mass(mu9)
    assert m.is_zero or m.log_mag - mu9.params.log_tau <= math.log(1e-12)


def test_atoms_outside_omega(mu9):
    assert not contains_many(mu9.params.region, mu9.locations).any()


def test_small_H_names_constraint_1():
    with pytest.raises(bt.ConstraintError) as exc:
        bt.build(1, 1, 2, 0.4)
    assert exc.value.constraint == "constraint (1)"
    assert "constraint (1)" in str(exc.value)
    fixed = exc.value.suggested_H
    assert fixed > 2
    bt.build(1, 1, fixed, 0.4)


@pytest.mark.parametrize("args,name", [((1, 0.5, 10, 0.1), "beta > alpha/2"),
                                       ((1, 1, 10, 0.6), "0 < psi < beta - alpha/2"),
                                       ((1, 1, 0.5, 0.4), "H > max(Q, 1)")])
def test_other_constraints(args, name):
    with pytest.raises(bt.ConstraintError) as exc:
        bt.build(*args)
    assert exc.value.constraint == name


def test_bracket_is_reported_not_enforced(mu9):
    assert mu9.params.bracket_ok is False
    assert bt.build(1, 1, 40, 0.4).params.bracket_ok is True
    with pytest.raises(bt.ConstraintError):
        bt.build(1, 1, 10, 0.4, strict_bracket=True)


def test_smallest_valid_H_is_admissible():
    for args in [(1, 1, 0.4, 1.0), (2, 2, 0.8, 1.0), (1, 0.75, 0.2, 1.0), (1, 1, 0.4, 200.0)]:
        H = bt.smallest_valid_H(*args)
        bt.build(args[0], args[1], H, args[2], Q=args[3])


def test_build_deterministic():
    a, b = bt.build(1, 1, 20, 0.4), bt.build(1, 1, 20, 0.4)
    assert np.array_equal(a.locations, b.locations)
    assert np.array_equal(a.weight_log_mag, b.weight_log_mag)


# ------------------------------------------------------------ root identity

def test_roots_identity_k2():
    l1, r1, l2, r2 = bt.roots_identity_check(2, 2.0)
    assert l1 == pytest.approx(2 / 3, rel=1e-15) and r1 == pytest.approx(2 / 3, rel=1e-15)
    assert l2 == pytest.approx(4 / 3, rel=1e-15) and r2 == pytest.approx(4 / 3, rel=1e-15)


def test_roots_identity_k7():
    l1, r1, l2, r2 = bt.roots_identity_check(7, 0.5j)
    assert abs(l1 - r1) <= 1e-10 * abs(r1)
    assert abs(l2 - r2) <= 1e-10 * abs(r2)


def test_roots_identity_far_field():
    x = 1e6 * np.exp(0.3j)
    l1, _, _, _ = bt.roots_identity_check(5, x)
    assert abs(l1 * x - 5) <= 1e-4 * 5 or abs(l1) <= 1e-20


def test_roots_identity_rejects_root():
    with pytest.raises(ValueError):
        bt.roots_identity_check(6, np.exp(2j * np.pi / 6))


# ----------------------------------------------------------------- Cauchy

def test_cauchy_at_zero(mu9):
    assert bt.cauchy_closed(mu9, 0j).is_zero


@pytest.mark.parametrize("H,ab,psi", [(10, (1, 1), 0.4), (20, (1, 1), 0.4), (40, (1, 1), 0.4),
                                      (10, (2, 2), 0.8), (20, (1, 0.75), 0.2)])
def test_cauchy_closed_against_mpmath(H, ab, psi):
    mu = bt.build(*ab, H, psi)
    region = mu.params.region
    ys = np.array([0.0, 1.0, H - 2, H - 0.1, H, H + 0.5, 3 * H, 1e3])
    zs = [region.edge(y) + 1e-9 + 1j * y for y in ys] + [0.7 + 1j * H, 3 - 2j, 1e-3 + 1e4j]
    lm, ph = bt.cauchy_closed_many(mu, zs)
    for z, a, b in zip(zs, lm, ph):
        assert rel_err(a, b, mp_cauchy(mu.k, H, z)) <= 1e-11


def test_cauchy_closed_off_omega_against_mpmath(mu9):
    # the closed form is valid everywhere except at the atoms
    w, A = mu9.params.w, mu9.params.A
    for z in (w + 0.5 / A, w + 3j / A, w - 2.0, -5 + 1j):
        lm, ph = bt.cauchy_closed_many(mu9, [z])
        assert rel_err(lm[0], ph[0], mp_cauchy(9, 10, z)) <= 1e-11


def test_cauchy_k2_brute_equals_closed():
    mu = _k2_measure()
    for z in (0.3 + 2j, -0.01 + 10j, 4 - 1j, 0.5 + 9.7j):
        a = bt.cauchy_closed(mu, z)
        b = bt.cauchy_brute(mu, z)
        assert abs(lc.to_cartesian(a) - lc.to_cartesian(b)) <= 1e-12 * abs(lc.to_cartesian(b))


def test_cauchy_brute_near_atoms_agrees(mu9):
    rng = np.random.default_rng(11)
    p = mu9.params
    z = p.w + np.exp(rng.uniform(-1, 1.5, 100)) / p.A * np.exp(1j * rng.uniform(0, 2 * np.pi, 100))
    a = bt.cauchy_closed_many(mu9, z)
    lm, ph, cond = bt.cauchy_brute_many(mu9, z, return_cond=True)
    ok = cond * np.finfo(float).eps <= 1e-6
    assert ok.sum() >= 50
    err = np.abs(np.exp(a[0] - lm + 1j * (a[1] - ph)) - 1)
    assert np.all(err[ok] <= 1e-4)


def test_cauchy_conjugate_symmetry(mu9):
    conj = mu9.conjugate()
    for z in (0.2 + 9j, 1 + 3j, -0.5 + 10.1j):
        a = bt.cauchy_brute(mu9, z)
        b = bt.cauchy_brute(conj, z.conjugate())
        assert b.log_mag == pytest.approx(a.log_mag, abs=1e-12)
        assert abs(lc.wrap(b.phase + a.phase)) <= 1e-12


def test_cauchy_far_field_and_decay(mu9):
    region = mu9.params.region
    vals = []
    for r in (1e3, 2e3):
        z = region.edge(r) + 1e-12 + 1j * r
        v = bt.cauchy_closed(mu9, z)
        vals.append(v.log_mag)
        assert abs(v) * abs(z) <= 1e-12
    slope = (vals[1] - vals[0]) / math.log(2)
    assert slope == pytest.approx(1 - 9, rel=0.01)


def test_cauchy_pole_and_collision(mu9):
    atom = complex(mu9.locations[3])
    with pytest.raises(bt.PoleProximityError):
        bt.cauchy_closed(mu9, atom)
    with pytest.raises(bt.AtomCollisionError):
        bt.cauchy_brute(mu9, atom)


# -------------------------------------------------------- Laplace and N

@pytest.mark.parametrize("H,ab,psi", [(10, (1, 1), 0.4), (40, (1, 1), 0.4), (10, (2, 2), 0.8),
                                      (10, (1, 0.75), 0.2)])
def test_laplace_and_n_against_mpmath(H, ab, psi):
    mu = bt.build(*ab, H, psi)
    k, A = mu.k, mu.params.A
    ts = [1e-3, 0.5, 1.0, k / 2, float(k), 2.0 * k, A / 2, A]
    lm, ph = bt.laplace_series_many(mu, ts)
    nl, nph = bt.n_transform_many(mu, ts)
    for t, a, b, c, d in zip(ts, lm, ph, nl, nph):
        assert rel_err(a, b, mp_laplace(k, H, t)) <= 1e-11
        assert rel_err(c, d, mp_laplace(k, H, t, weighted=True)) <= 1e-11


def test_laplace_beyond_A(mu9):
    A = mu9.params.A
    for t in (2 * A, 10 * A, 30 * A):
        v = bt.laplace(mu9, t)
        assert rel_err(v.log_mag, v.phase, mp_laplace(9, 10, t)) <= 1e-9


def test_laplace_series_guard(mu9):
    with pytest.raises(bt.SeriesDivergenceError):
        bt.laplace_series_many(mu9, [50 * mu9.params.A], max_terms=5)


def test_laplace_at_zero(mu9):
    assert bt.laplace(mu9, 0.0).is_zero
    assert bt.n_transform(mu9, 0.0).is_zero


def test_laplace_k2_at_zero():
    mu = _k2_measure()
    v = lc.to_cartesian(bt.laplace(mu, 0.0))
    assert v == pytest.approx(math.sqrt(2) / complex(-1, 10), rel=1e-14)


def test_laplace_series_vs_brute_guarded(mu9):
    t = np.linspace(0, mu9.params.A, 100)
    a = bt.laplace_series_many(mu9, t)
    lm, ph, cond = bt.laplace_brute_many(mu9, t, return_cond=True)
    ok = cond * np.finfo(float).eps <= 1e-6
    assert ok.sum() >= 40
    err = np.abs(np.exp(a[0] - lm + 1j * (a[1] - ph)) - 1)
    assert np.all(err[ok] <= 1e-4)


def test_negative_time_rejected(mu9):
    with pytest.raises(ValueError):
        bt.laplace(mu9, -1.0)


@pytest.mark.parametrize("H", [10, 20, 40])
def test_n_derivative_central_difference(H):
    mu = bt.build(1, 1, H, 0.4)
    for t in (2.0, float(mu.k), 2.0 * mu.k):
        h = 1e-5 * t
        n1 = lc.to_cartesian(bt.n_transform(mu, t + h))
        n0 = lc.to_cartesian(bt.n_transform(mu, t - h))
        lap = lc.to_cartesian(bt.laplace(mu, t))
        assert abs((n1 - n0) / (2 * h) - lap) <= 1e-3 * abs(lap)


@pytest.mark.filterwarnings("ignore::scipy.integrate.IntegrationWarning")
def test_n_is_integral_of_laplace(mu9):
    def f(s, part):
        v = lc.to_cartesian(bt.laplace(mu9, s))
        return v.real if part == 0 else v.imag

    for t in (5.0, 9.0, 30.0):
        re = integrate.quad(f, 0, t, args=(0,), epsabs=0, epsrel=1e-10, limit=400)[0]
        im = integrate.quad(f, 0, t, args=(1,), epsabs=0, epsrel=1e-10, limit=400)[0]
        n = lc.to_cartesian(bt.n_transform(mu9, t))
        assert abs(complex(re, im) - n) <= 1e-6 * abs(n)


# ------------------------------------------------------------ certificates

def test_certificates_h10(mu9):
    certs = bt.certify_bounds(mu9)
    assert [c.bound_id for c in certs] == list(bt.BOUND_IDS)
    assert all(c.passed for c in certs)
    d = certs[0].to_dict()
    assert set(d) >= {"bound_id", "B_empirical", "worst_point", "grid", "pass"}
    assert set(d["worst_point"]) == {"z"} and set(d["worst_point"]["z"]) == {"re", "im"}
    assert set(certs[1].to_dict()["worst_point"]) == {"t"}


def test_x4_strictly_positive(mu9):
    assert abs(bt.laplace(mu9, 9.0)) > 0


def test_certificate_fails_loudly_with_tiny_cap(mu9):
    certs = bt.certify_bounds(mu9, b_cap=1e-3)
    assert not all(c.passed for c in certs)


def test_certificate_infeasible_small_eps():
    mu = bt.build(1, 1, 10, 0.4, Q=1.0, eps=1e-6)
    x3 = bt.certify_bounds(mu)[1]
    # |L| near t = Q exceeds a tiny eps on [0, Q]: no B can help
    assert x3.infeasible_points > 0 and not x3.passed


def test_certify_rejects_grid_outside_omega(mu9):
    g = bt.default_grids(mu9)
    bad = bt.CertGrids(np.append(g.z, -5 + 0j), g.t, g.z_spec, g.t_spec)
    with pytest.raises(ValueError):
        bt.certify_bounds(mu9, bad)


def test_sharpness_pairing(mu9):
    certs = {c.bound_id: c for c in bt.certify_bounds(mu9)}
    nk = abs(bt.n_transform(mu9, 9.0))
    assert 9 / math.log(9) * nk >= 1 / certs["X6"].B_empirical * (1 - 1e-12)
    # the X5 certificate must dominate |N| on (Q, 2k) up to the eps slack
    t = np.linspace(1.05, 17.95, 400)
    nt = bt.abs_of(bt.n_transform_many(mu9, t)[0])
    env = np.log(t) / t
    assert np.all(nt <= certs["X5"].B_empirical * env + 0.1 / (t + 1) + 1e-12)


# ------------------------------------------------------- X_alpha quantities

def test_xalpha_norm_definition_and_stability(mu9):
    t = bt.default_grids(mu9).t
    peak = float(bt.abs_of(bt.laplace_many(mu9, t)[0]).max())
    x1 = bt.xalpha_norm(mu9)
    assert x1 >= peak
    x2 = bt.xalpha_norm(mu9, z_grid=bt.omega0_grid(mu9, n_heights=8000, n_window=4001, n_cols=17))
    assert abs(x2 - x1) <= 0.02 * x1


def test_normalised_sharpness_over_ladder():
    cs = []
    for H in (10, 20, 40, 80):
        mu = bt.build(1, 1, H, 0.4)
        k = mu.k
        cs.append(bt.orbit_lower_bound(mu) / bt.xalpha_norm(mu) / (math.log(k) / k))
    assert min(cs) > 0
    assert max(cs) / min(cs) < 4

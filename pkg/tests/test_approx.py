import gmpy2
import pytest

from lanfa import Rational, mpf
from lanfa.approx import (
    chebyshev_grid,
    chebyshev_interpolant,
    chebyshev_points,
    discrete_best_poly,
    pade_exp,
    remez_best_poly,
    sup_error,
    zolotarev_sqrt,
)
from lanfa.bounds import inv_minimax_exact


def test_remez_degree0_inv(ctx):
    # best constant for 1/x on [1,2] is 3/4 with error 1/4
    best = remez_best_poly(lambda x: 1 / x, (mpf(1), mpf(2)), 0)
    assert abs(best.poly(mpf("1.3")) - mpf(3) / 4) < mpf("1e-10")
    assert abs(best.error - mpf("0.25")) < mpf("1e-10")
    assert len(best.alt_points) == 2


def test_remez_matches_closed_form(ctx):
    # closed form for min-max error of 1/x by polynomials on [a,b]
    interval = (mpf(1), mpf(100))
    for degree in (1, 3, 6):
        best = remez_best_poly(lambda x: 1 / x, interval, degree)
        exact = inv_minimax_exact(interval, degree + 1)
        assert abs(best.error - exact) < mpf("1e-20") * exact + mpf("1e-40")


def test_chebyshev_interpolant_exact_on_polynomials(ctx):
    interval = (mpf(-2), mpf(5))
    f = lambda x: 3 + x - 2 * x**2 + x**3
    p = chebyshev_interpolant(f, interval, 3)
    for x in chebyshev_grid(interval, 37):
        assert abs(p(x) - f(x)) < mpf("1e-60")


def test_chebyshev_points_count_and_range(ctx):
    pts = chebyshev_points((mpf(0), mpf(1)), 8)
    assert len(pts) == 8
    assert all(0 < p < 1 for p in pts)


def test_discrete_best_poly_oracle(ctx):
    # best degree-1 fit to x^2 on {0,1,2}: 2x - 1/2, leveled error 1/2
    best = discrete_best_poly(lambda x: x * x, [mpf(0), mpf(1), mpf(2)], 1)
    coeffs = best.poly.monomial_coeffs()
    assert abs(coeffs[0] + mpf("0.5")) < mpf("1e-40")
    assert abs(coeffs[1] - 2) < mpf("1e-40")
    assert abs(best.error - mpf("0.5")) < mpf("1e-40")


def test_pade_exp_m1(ctx):
    # [1/1] approximant of exp: (2+x)/(2-x) scaled to monic denominator
    r = pade_exp(1)
    assert r.poles == (mpf(2),)
    assert r.numer == (mpf(-2), mpf(-1))


def test_pade_exp_taylor_matching(ctx):
    # [m/m] matches exp to order 2m+1 near zero: halving the step shrinks
    # the defect by ~2^(2m+1)
    h = mpf("1e-3")
    for m in (2, 5):
        r = pade_exp(m)
        e1 = abs(r.eval(h) - gmpy2.exp(h))
        e2 = abs(r.eval(h / 2) - gmpy2.exp(h / 2))
        order = gmpy2.log2(e1 / e2)
        assert abs(order - (2 * m + 1)) < mpf("0.05")


def test_pade_negated_poles_left_half_plane(ctx):
    pass

    r = pade_exp(5).compose_negate()
    for p in r.poles:
        assert p < 0
    for re, im in r.cpole_pairs:
        assert re < 0


def test_zolotarev_errors_decrease(ctx):
    interval = (mpf(1), mpf(100))
    target = lambda x: gmpy2.sqrt(x)
    expected = {3: 4.96e-2, 5: 2.35e-4, 7: 1.11e-6, 9: 5.24e-9, 13: 1.23e-13}
    prev = mpf(1)
    for deg, mag in expected.items():
        r = zolotarev_sqrt(interval, deg)
        err = sup_error(target, Rational(r), interval)
        assert 0.9 * mag < float(err) < 1.1 * mag
        assert err < prev
        prev = err


def test_zolotarev_poles_negative(ctx):
    r = zolotarev_sqrt((mpf(1), mpf(100)), 7)
    assert len(r.poles) == 6
    assert all(p < 0 for p in r.poles)
    assert r.cpole_pairs == ()


def test_zolotarev_error_equioscillates_in_sign(ctx):
    interval = (mpf(1), mpf(100))
    r = zolotarev_sqrt(interval, 5)
    grid = chebyshev_grid(interval, 4000)
    errs = [gmpy2.sqrt(x) - r.eval(x) for x in grid]
    signs = 0
    prev = 0
    for e in errs:
        s = 1 if e > 0 else (-1 if e < 0 else 0)
        if s != 0 and s != prev:
            if prev != 0:
                signs += 1
            prev = s
    # the error attains 2n alternation points (n=5), hence 2n-1 sign changes
    assert signs >= 2 * 5 - 1


def test_sup_error_basic(ctx):
    e = sup_error(lambda x: x, lambda x: mpf(0), (mpf(-2), mpf(3)), grid=500)
    assert abs(e - 3) < mpf("1e-3")

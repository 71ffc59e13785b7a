import gmpy2
import pytest

from lanfa import (
    FAILED,
    InvPower,
    Polynomial,
    RationalFunction,
    Sqrt,
    cg_residuals,
    indefinite_theorem_check,
    inv_minimax_exact,
    kappa_shift,
    lanczos_fa_series,
    lanczos_or_bound,
    lanczos_or_error_series,
    minres_residuals,
    mpf,
    optimal_error_series,
    rational_bound,
    triangle_bound,
    triangle_bound_series,
    uniform_bound,
    verify_cg_minres_relation,
)
from lanfa.approx import zolotarev_sqrt

from conftest import make_instance, uniform_instance


def test_kappa_shift_values(ctx):
    inst = uniform_instance(10, 1, 100)
    assert abs(kappa_shift(inst, mpf(0)) - 100) < mpf("1e-60")
    # shift at -1: (100+1)/(1+1) = 50.5
    assert abs(kappa_shift(inst, mpf(-1)) - mpf("50.5")) < mpf("1e-60")
    # shift at 200: (200-1)/(200-100) = 1.99
    assert abs(kappa_shift(inst, mpf(200)) - mpf("1.99")) < mpf("1e-60")


def test_rational_bound_frozen_prefactor(ctx):
    # r = 1/((x+1)(x+2)) on spectrum uniform(10, 1, 10):
    # kappa(-1) = 11/2, kappa(-2) = 12/3 = 4, prefactor = 2 * 5.5 * 4 = 44
    inst = uniform_instance(10, 1, 10)
    r = RationalFunction((mpf(1),), (mpf(-1), mpf(-2)))
    rep = rational_bound(inst, r, 4)
    assert abs(rep.prefactor - 44) < mpf("1e-60")
    assert abs(rep.gamma - mpf("5.5")) < mpf("1e-60")
    assert abs(rep.eta - 2) < mpf("1e-60")
    assert rep.k == 4


def test_rational_bound_dominates_error(ctx, prec):
    inst = uniform_instance(10, 1, 10)
    r = RationalFunction((mpf(1),), (mpf(-1), mpf(-2)))
    from lanfa.funcs import Rational

    errs = lanczos_fa_series(inst, Rational(r), 9)
    for k in range(2, 10):
        rep = rational_bound(inst, r, k)
        e = errs[k - 1]
        assert not isinstance(e, str)
        assert e <= rep.bound * (1 + 10 * prec.tol)


def test_uniform_bound_tiny_for_polynomials(ctx, prec):
    inst = uniform_instance(8, 1, 5)
    f = Polynomial((mpf(2), mpf(-1), mpf(3)))
    # interpolation degree k-1 >= 2 reproduces the polynomial
    assert uniform_bound(inst, f, 4) < 100 * prec.tol


def test_inv_minimax_closed_form(ctx):
    # [1, 2], k=1: t = 1 - 2/(1+sqrt(2)), E = 8 t^2 / ((t^2-1)^2 * 1) = 1/4
    e = inv_minimax_exact((mpf(1), mpf(2)), 1)
    assert abs(e - mpf("0.25")) < mpf("1e-60")
    # decreasing in k
    prev = mpf(1)
    for k in range(1, 8):
        v = inv_minimax_exact((mpf(1), mpf(100)), k)
        assert v < prev
        prev = v


def test_triangle_singleton_matches_rational_bound(ctx):
    inst = uniform_instance(10, 1, 10)
    r = RationalFunction((mpf(1),), (mpf(-1), mpf(-2)))
    from lanfa.funcs import Rational

    k = 5
    rep = rational_bound(inst, r, k)
    tb, choice = triangle_bound(inst, Rational(r), k, [r])
    assert choice == 0
    # the candidate reproduces the target exactly, so the sup term vanishes
    # (up to grid rounding) and the bound reduces to the rational one
    assert abs(tb - rep.bound) <= mpf("1e-30") * rep.bound


def test_triangle_bound_dominates_sqrt_error(ctx, prec):
    inst = uniform_instance(12, 1, 50)
    cands = [zolotarev_sqrt((inst.lam_min, inst.lam_max), d) for d in (3, 5, 7)]
    k_max = 10
    series = triangle_bound_series(inst, Sqrt(), k_max, cands)
    errs = lanczos_fa_series(inst, Sqrt(), k_max)
    nb = inst.norm_b()
    for k in range(1, k_max + 1):
        b, choice = series[k - 1]
        e = errs[k - 1]
        if isinstance(b, str) or isinstance(e, str):
            continue
        assert e <= b * (1 + 10 * prec.tol)


def test_minres_residual_oracle(ctx, prec):
    # lam=[1,2], b=ones: minres residuals sqrt(2), 1/sqrt(5), ~0
    inst = make_instance([1, 2], [1, 1])
    res = minres_residuals(inst, 2)
    assert abs(res[0] - gmpy2.sqrt(mpf(2))) < mpf("1e-70")
    assert abs(res[1] - 1 / gmpy2.sqrt(mpf(5))) < mpf("1e-70")
    assert res[2] < 10 * prec.tol


def test_minres_indefinite_k0(ctx):
    inst = make_instance([-1, 1], [1, 1])
    res = minres_residuals(inst, 1)
    assert abs(res[0] - gmpy2.sqrt(mpf(2))) < mpf("1e-70")


def test_cg_residual_oracle(ctx):
    # lam=[1,2], b=ones, k=1: residual sqrt(2)/3
    inst = make_instance([1, 2], [1, 1])
    res = cg_residuals(inst, 1)
    assert abs(res[0] - gmpy2.sqrt(mpf(2)) / 3) < mpf("1e-70")


def test_cg_minres_relation(ctx, prec):
    inst = uniform_instance(20, 1, 40)
    worst = verify_cg_minres_relation(inst, 15)
    assert worst <= 100 * prec.tol


def test_indefinite_theorem(ctx, prec):
    lam = sorted([mpf(i) for i in range(1, 6)] + [-mpf(i) for i in range(1, 6)])
    inst = make_instance(lam, [1] * 10)
    for k in range(1, 11):
        rep = indefinite_theorem_check(inst, k)
        assert rep.lhs <= rep.rhs * (1 + 100 * prec.tol) + prec.tol * inst.norm_b()
        assert 0 <= rep.k_star <= k


def test_lanczos_or_bound_dominates(ctx, prec):
    inst = uniform_instance(12, 1, 30)
    r = RationalFunction((mpf(1),), (mpf(0), mpf(0)))
    errs = lanczos_or_error_series(inst, r, 8)
    for k in (2, 4, 6, 8):
        b = lanczos_or_bound(inst, r, k)
        e = errs[k - 1]
        if isinstance(b, str) or isinstance(e, str):
            continue
        assert e <= b * (1 + 10 * prec.tol)

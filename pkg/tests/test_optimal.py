import random

import gmpy2
import pytest

from lanfa import (
    EXACT,
    FAILED,
    AbsRational,
    DomainError,
    InvPower,
    Polynomial,
    PowerOfA,
    Rational,
    RationalFunction,
    ShiftedA,
    TwoNorm,
    exact_apply,
    krylov_optimal,
    lanczos,
    lanczos_or,
    mpf,
    optimal_error_series,
    optimality_ratio,
    optimality_ratio_series,
    verify_error_decomposition,
    verify_shifted_projection,
)
from lanfa.optimal import weight_values
from lanfa.xlinalg import norm2, sub, weighted_dot

from conftest import make_instance, uniform_instance


def test_two_norm_projection_k1(ctx):
    # lam=[1,2], ones b, f=1/x: projection coefficient (b'f(A)b)/(b'b) = 3/4
    inst = make_instance([1, 2], [1, 1])
    out = krylov_optimal(inst, InvPower(1), 1, TwoNorm())
    tq = mpf(3) / 4
    assert abs(out[0] - tq) < mpf("1e-70")
    assert abs(out[1] - tq) < mpf("1e-70")


def test_shifted_weight_matches_lanczos_k1(ctx):
    # A-weighted optimum of 1/x at k=1 equals the Lanczos iterate [2/3, 2/3]
    inst = make_instance([1, 2], [1, 1])
    out = krylov_optimal(inst, InvPower(1), 1, ShiftedA(mpf(0), 1))
    tt = 2 / mpf(3)
    assert abs(out[0] - tt) < mpf("1e-70")
    assert abs(out[1] - tt) < mpf("1e-70")


def test_weight_positivity_validated(ctx):
    inst = make_instance([1, 2], [1, 1])
    with pytest.raises(DomainError):
        weight_values(ShiftedA(mpf("1.5"), 1), inst)  # shift inside the spectrum


def test_optimal_at_grade_is_exact(ctx, prec):
    inst = uniform_instance(6, 1, 12)
    target = exact_apply(inst, InvPower(1))
    out = krylov_optimal(inst, InvPower(1), 6, PowerOfA(2))
    assert norm2(sub(target, out)) < 100 * prec.tol * norm2(target)


def test_weighted_orthogonality_invariant(ctx, prec):
    inst = uniform_instance(9, 1, 11)
    g = weight_values(PowerOfA(2), inst)
    target = exact_apply(inst, InvPower(1))
    k = 4
    dec = lanczos(inst, k)
    out = krylov_optimal(inst, InvPower(1), k, PowerOfA(2), dec)
    resid = sub(target, out)
    tnorm = norm2(target)
    for j in range(k):
        assert abs(weighted_dot(resid, dec.Q[j], g)) < 100 * prec.tol * tnorm


def test_optimal_error_monotone(ctx):
    inst = uniform_instance(10, 1, 25)
    _, terrs = optimal_error_series(inst, InvPower(1), 10)
    for a, b in zip(terrs, terrs[1:]):
        assert b <= a * (1 + mpf("1e-60"))


def test_optimality_ratio_k1(ctx):
    # lam=[1,2], ones b, f=1/x, k=1: ratio = sqrt(10)/3
    inst = make_instance([1, 2], [1, 1])
    ratio = optimality_ratio(inst, InvPower(1), 1, "lanczos_fa")
    assert abs(ratio - gmpy2.sqrt(mpf(10)) / 3) < mpf("1e-70")


def test_ratio_sentinels(ctx):
    inst = uniform_instance(5, 1, 5)
    # polynomial of degree < k converges exactly: EXACT sentinel
    f = Polynomial((mpf(1), mpf(1)))
    ratios = optimality_ratio_series(inst, f, 3)
    assert ratios[2] is EXACT
    # pole at a Ritz value: FAILED sentinel
    insti = make_instance([-1, 1], [1, 1])
    ratios2 = optimality_ratio_series(insti, InvPower(1), 2)
    assert ratios2[0] is FAILED


def test_cg_ratio_below_sqrt_kappa(ctx, prec):
    inst = uniform_instance(12, 1, 30)
    ratios = optimality_ratio_series(inst, InvPower(1), 12)
    cap = gmpy2.sqrt(inst.kappa())
    for r in ratios:
        if isinstance(r, str):
            continue
        assert r <= cap + prec.tol
        assert r >= 1 - prec.tol


def test_lanczos_or_reduced_dimension_oracle(ctx):
    # q=2, r=1/x^2, k=2 on lam=[1,2], ones b: one-dimensional projection in
    # the A^{-2}-weighted inner product, coefficient computed by hand:
    # c = (sum w_i^2 lam_i^{-2} lam_i^{-2}) / (sum w_i^2 lam_i^{-2}) = (1+1/16)/(1+1/4)
    inst = make_instance([1, 2], [1, 1])
    r = RationalFunction((mpf(1),), (mpf(0), mpf(0)))
    out = lanczos_or(inst, r, 2)
    c = (1 + 1 / mpf(16)) / (1 + 1 / mpf(4))
    assert abs(out[0] - c) < mpf("1e-70")
    assert abs(out[1] - c) < mpf("1e-70")
    assert float(c) == 0.85


def test_lanczos_or_no_reduction_for_q1(ctx, prec):
    inst = uniform_instance(6, 1, 9)
    r = RationalFunction((mpf(1),), (mpf(0),))
    a = lanczos_or(inst, r, 3)
    b = krylov_optimal(inst, Rational(r), 3, AbsRational(r))
    assert norm2(sub(a, b)) < 100 * prec.tol


def test_shifted_projection_identity(ctx, prec):
    rng = random.Random(777)
    for _ in range(5):
        d = rng.randint(4, 14)
        inst = uniform_instance(d, 1, 1 + 9 * rng.random())
        q = rng.randint(1, 3)
        poles = tuple(sorted(-mpf(0.1 + 2 * rng.random()) for _ in range(q)))
        r = RationalFunction((mpf(1),), poles)
        k = rng.randint(1, min(d, 6))
        j = rng.randint(1, q)
        scale = max(norm2(exact_apply(inst, Rational(r))), mpf(1))
        dev = verify_shifted_projection(inst, r, j, k)
        assert dev <= 10 * prec.tol * scale


def test_error_decomposition_identity(ctx, prec):
    rng = random.Random(778)
    for _ in range(5):
        d = rng.randint(4, 14)
        inst = uniform_instance(d, 1, 1 + 9 * rng.random())
        q = rng.randint(1, 4)
        poles = tuple(sorted(-mpf(0.1 + 2 * rng.random()) for _ in range(q)))
        r = RationalFunction((mpf(1),), poles)
        k = rng.randint(max(1, q), min(d, 7))
        scale = max(norm2(exact_apply(inst, Rational(r))), mpf(1))
        dev = verify_error_decomposition(inst, r, k)
        assert dev <= 10 * q * prec.tol * scale

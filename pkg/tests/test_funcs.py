import gmpy2
import pytest

from lanfa import (
    DomainError,
    ExpScaled,
    InvPower,
    InvSqrt,
    ParameterError,
    Polynomial,
    Rational,
    RationalFunction,
    Sign,
    Sqrt,
    eval_scalar,
    format_function,
    mpf,
    parse_function,
)
from lanfa.funcs import as_rational, horner, is_continuous_on


def test_horner(ctx):
    # 1 + 2x + 3x^2 at x=2 -> 17
    assert horner((mpf(1), mpf(2), mpf(3)), mpf(2)) == 17


def test_rational_eval(ctx):
    # (1 + x) / ((x+2)(x+3)) at x=1 -> 2/12 = 1/6
    r = RationalFunction((mpf(1), mpf(1)), (mpf(-2), mpf(-3)))
    assert abs(r.eval(mpf(1)) - 1 / mpf(6)) < mpf("1e-70")
    assert r.q == 2
    assert r.denom_degree == 2
    assert r.numer_degree == 1


def test_rational_pole_eval_raises(ctx):
    r = RationalFunction((mpf(1),), (mpf(-2),))
    with pytest.raises(DomainError):
        r.eval(mpf(-2))


def test_rational_partial(ctx):
    r = RationalFunction((mpf(1),), (mpf(-1), mpf(-2)))
    r1 = r.partial(1)
    assert r1.poles == (mpf(-1),)
    assert r.partial(0).poles == ()
    with pytest.raises(ParameterError):
        r.partial(3)


def test_denom_range_eval(ctx):
    r = RationalFunction((mpf(1),), (mpf(1), mpf(2), mpf(3)))
    # product (x - z) over poles 1..3 (0-indexed slice [1,3)) at x=5: (5-2)(5-3)=6
    assert r.denom_range_eval(mpf(5), 1, 3) == 6


def test_compose_negate(ctx):
    # r(x) = 1/(x-2) -> r(-x) = 1/(-x-2) = -1/(x+2)
    r = RationalFunction((mpf(1),), (mpf(2),))
    rn = r.compose_negate()
    x = mpf("0.3")
    assert abs(rn.eval(x) - r.eval(-x)) < mpf("1e-70")
    assert rn.poles == (mpf(-2),)


def test_complex_pole_pairs(ctx):
    # denominator (x^2 + 1): pair (0, 1)
    r = RationalFunction((mpf(1),), (), ((mpf(0), mpf(1)),))
    assert r.has_complex_poles
    assert r.denom_degree == 2
    assert abs(r.eval(mpf(2)) - 1 / mpf(5)) < mpf("1e-70")
    with pytest.raises(ParameterError):
        r.require_real_poles()


def test_eval_scalar_domains(ctx):
    assert eval_scalar(Sqrt(), mpf(4)) == 2
    with pytest.raises(DomainError):
        eval_scalar(Sqrt(), mpf(-1))
    with pytest.raises(DomainError):
        eval_scalar(InvSqrt(), mpf(0))
    with pytest.raises(DomainError):
        eval_scalar(InvPower(2), mpf(0))
    # 1/x is defined for negative arguments
    assert eval_scalar(InvPower(1), mpf(-2)) == mpf("-0.5")
    assert eval_scalar(Sign(), mpf(-3)) == -1
    with pytest.raises(DomainError):
        eval_scalar(Sign(), mpf(0))
    assert abs(eval_scalar(ExpScaled(), mpf(1)) - gmpy2.exp(mpf(-1))) < mpf("1e-70")


def test_as_rational(ctx):
    rf = as_rational(InvPower(3))
    assert rf.poles == (0, 0, 0)
    assert as_rational(Sqrt()) is None
    p = as_rational(Polynomial((mpf(1), mpf(2))))
    assert p.poles == ()


def test_is_continuous_on(ctx):
    assert is_continuous_on(InvPower(1), mpf(1), mpf(2))
    assert not is_continuous_on(InvPower(1), mpf(-1), mpf(2))
    assert not is_continuous_on(Sign(), mpf(-1), mpf(1))
    assert is_continuous_on(Sign(), mpf(1), mpf(2))
    assert is_continuous_on(ExpScaled(), mpf(-5), mpf(5))


def test_format_parse_roundtrip(ctx):
    cases = [
        Polynomial((mpf(1), mpf(0), mpf(3))),
        Rational(RationalFunction((mpf(0), mpf(1)), (mpf(-1), mpf(-2)))),
        Sqrt(),
        InvSqrt(),
        InvPower(4),
        ExpScaled(mpf(1), -1),
        Sign(),
    ]
    for f in cases:
        text = format_function(f)
        g = parse_function(text)
        assert format_function(g) == text


def test_parse_rejects_junk(ctx):
    with pytest.raises(ParameterError):
        parse_function("frobnicate:3")

import gmpy2
import pytest

from lanfa import ParameterError, krylov_grade, lanczos, mpf
from lanfa.krylov import basis_apply, basis_project
from lanfa.xlinalg import dot, norm2

from conftest import make_instance, uniform_instance


def test_lanczos_first_alpha(ctx):
    # lam=[1,2], ones b: alpha_1 = b'Ab/b'b = 3/2
    inst = make_instance([1, 2], [1, 1])
    dec = lanczos(inst, 2)
    assert abs(dec.T.alpha[0] - mpf("1.5")) < mpf("1e-70")
    assert dec.k == 2


def test_lanczos_grade_detection(ctx, prec):
    # b has a zero coefficient: grade is 2, not 3
    inst = make_instance([1, 2, 3], [1, 0, 1])
    dec = lanczos(inst, 3)
    assert dec.grade_reached
    assert dec.k == 2
    assert abs(dec.T.alpha[0] - 2) < mpf("1e-70")
    assert krylov_grade(inst) == 2


def test_lanczos_orthonormal_basis(ctx, prec):
    inst = uniform_instance(12, 1, 40)
    dec = lanczos(inst, 8)
    for i in range(8):
        for j in range(i, 8):
            want = 1 if i == j else 0
            assert abs(dot(dec.Q[i], dec.Q[j]) - want) < 100 * prec.tol


def test_lanczos_three_term_recurrence(ctx, prec):
    # A Q_k = Q_k T_k + beta_next q_{k+1} e_k'
    inst = uniform_instance(10, 1, 10)
    k = 5
    dec = lanczos(inst, k)
    for j in range(k):
        aq = [l * x for l, x in zip(inst.lam, dec.Q[j])]
        # subtract T coefficients
        expect = [mpf(0)] * inst.d
        if j > 0:
            expect = [e + dec.T.beta[j - 1] * x for e, x in zip(expect, dec.Q[j - 1])]
        expect = [e + dec.T.alpha[j] * x for e, x in zip(expect, dec.Q[j])]
        if j < k - 1:
            expect = [e + dec.T.beta[j] * x for e, x in zip(expect, dec.Q[j + 1])]
        resid = norm2([a - e for a, e in zip(aq, expect)])
        if j == k - 1:
            resid = abs(resid - dec.beta_next)  # last column carries the tail
        assert resid < 1000 * prec.tol * inst.norm_a()


def test_basis_apply_project_roundtrip(ctx, prec):
    inst = uniform_instance(9, 2, 20)
    dec = lanczos(inst, 4)
    coeff = [mpf(1), mpf(-2), mpf("0.5"), mpf(3)]
    vec = basis_apply(dec, coeff)
    back = basis_project(dec, vec)
    for c, b in zip(coeff, back):
        assert abs(c - b) < 100 * prec.tol


def test_lanczos_k_validation(ctx):
    inst = make_instance([1, 2], [1, 1])
    with pytest.raises(ParameterError):
        lanczos(inst, 0)

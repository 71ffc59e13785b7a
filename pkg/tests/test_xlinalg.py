import gmpy2
import pytest

from lanfa import (
    DimensionError,
    DomainError,
    ParameterError,
    SingularShiftError,
    Tridiagonal,
    dense_solve,
    mpf,
    solve_shifted_tridiag,
    tridiag_eig,
)
from lanfa.xlinalg import dot, norm2, sub, weighted_dot, weighted_norm


def test_dot_and_norm(ctx):
    u = [mpf(3), mpf(4)]
    assert dot(u, u) == 25
    assert norm2(u) == 5


def test_weighted_dot_validates(ctx):
    with pytest.raises(DimensionError):
        weighted_dot([mpf(1)], [mpf(1), mpf(2)], [mpf(1)])
    with pytest.raises(DomainError):
        weighted_dot([mpf(1)], [mpf(1)], [mpf(-1)])


def test_weighted_norm(ctx):
    # sqrt(2*1 + 3*4) = sqrt(14)
    v = weighted_norm([mpf(1), mpf(2)], [mpf(2), mpf(3)])
    assert abs(v - gmpy2.sqrt(mpf(14))) < mpf("1e-70")


def test_tridiagonal_validation(ctx):
    with pytest.raises(DomainError):
        Tridiagonal((mpf(1), mpf(2)), (mpf(0),))  # zero off-diagonal
    T = Tridiagonal((mpf(2), mpf(2), mpf(2)), (mpf(1), mpf(1)))
    assert T.n == 3
    assert T.norm_bound() == 4  # Gershgorin: 2 + |1| + |1|


def test_tridiag_matvec(ctx):
    T = Tridiagonal((mpf(2), mpf(2)), (mpf(1),))
    y = T.matvec([mpf(1), mpf(1)])
    assert [float(x) for x in y] == [3.0, 3.0]


def test_tridiag_eig_uniform_chain(ctx, prec):
    # eigenvalues of tridiag(1,2,1) at n=3 are 2 - sqrt(2), 2, 2 + sqrt(2)
    T = Tridiagonal((mpf(2), mpf(2), mpf(2)), (mpf(1), mpf(1)))
    theta, V = tridiag_eig(T)
    s2 = gmpy2.sqrt(mpf(2))
    expected = [2 - s2, mpf(2), 2 + s2]
    for t, e in zip(theta, expected):
        assert abs(t - e) < prec.tol
    # eigenvector columns are orthonormal
    for i in range(3):
        col_i = [V[r][i] for r in range(3)]
        for j in range(3):
            col_j = [V[r][j] for r in range(3)]
            want = 1 if i == j else 0
            assert abs(dot(col_i, col_j) - want) < 10 * prec.tol


def test_tridiag_eig_residual(ctx, prec):
    T = Tridiagonal((mpf(1), mpf(3), mpf(2), mpf(5)), (mpf("0.5"), mpf(2), mpf(1)))
    theta, V = tridiag_eig(T)
    assert all(a <= b for a, b in zip(theta, theta[1:]))
    for j in range(4):
        col = [V[r][j] for r in range(4)]
        resid = sub(T.matvec(col), [theta[j] * x for x in col])
        assert norm2(resid) < 100 * prec.tol * T.norm_bound()


def test_solve_shifted_tridiag(ctx):
    # [[2,1],[1,2]] x = [1,1] -> x = [1/3, 1/3]
    T = Tridiagonal((mpf(2), mpf(2)), (mpf(1),))
    x = solve_shifted_tridiag(T, mpf(0), [mpf(1), mpf(1)])
    third = 1 / mpf(3)
    assert abs(x[0] - third) < mpf("1e-70")
    assert abs(x[1] - third) < mpf("1e-70")


def test_solve_shifted_with_shift(ctx):
    # (T - I) with T=[[2,1],[1,2]] is [[1,1],[1,1]], singular
    T = Tridiagonal((mpf(2), mpf(2)), (mpf(1),))
    with pytest.raises(SingularShiftError) as exc:
        solve_shifted_tridiag(T, mpf(1), [mpf(1), mpf(0)])
    assert exc.value.nearest_distance is None or exc.value.nearest_distance < mpf("1e-30")


def test_solve_shifted_singular_1x1(ctx):
    T = Tridiagonal((mpf(0),), ())
    with pytest.raises(SingularShiftError):
        solve_shifted_tridiag(T, mpf(0), [mpf(1)])


def test_solve_shifted_residual(ctx, prec):
    T = Tridiagonal((mpf(1), mpf(4), mpf(9)), (mpf(2), mpf(3)))
    rhs = [mpf(1), mpf(-2), mpf(5)]
    z = mpf(-1)
    x = solve_shifted_tridiag(T, z, rhs)
    # residual of (T - zI)x = rhs
    shifted = Tridiagonal(tuple(a - z for a in T.alpha), T.beta)
    resid = sub(shifted.matvec(x), rhs)
    assert norm2(resid) < 100 * prec.tol * norm2(rhs)


def test_dense_solve(ctx):
    A = [[mpf(0), mpf(1)], [mpf(2), mpf(0)]]  # needs pivoting
    x = dense_solve(A, [mpf(3), mpf(4)])
    assert abs(x[0] - 2) < mpf("1e-70")
    assert abs(x[1] - 3) < mpf("1e-70")

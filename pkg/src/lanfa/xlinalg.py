"""Extended-precision vectors, inner products, and tridiagonal solvers.

Vectors are plain lists of ``gmpy2.mpfr``; every routine assumes it runs
inside an active :meth:`lanfa.precision.Precision.ctx` block (public
entry points in higher modules take care of that).
"""

from __future__ import annotations

from dataclasses import dataclass

import gmpy2

from .errors import DimensionError, DomainError, ParameterError, SingularShiftError, SolverError
from .precision import mpf


def as_xvector(entries):
    """Copy a sequence into an mpfr vector, rejecting non-finite entries."""
    v = [mpf(x) for x in entries]
    if not v:
        raise ParameterError("vector must have length >= 1")
    for x in v:
        if not gmpy2.is_finite(x):
            raise DomainError(f"non-finite vector entry {x}")
    return v


def dot(u, v):
    if len(u) != len(v):
        raise DimensionError(f"length mismatch: {len(u)} vs {len(v)}")
    s = mpf(0)
    for a, b in zip(u, v):
        s += a * b
    return s


def weighted_dot(u, v, w):
    """Sum of w_i * u_i * v_i; realizes g(A)-weighted inner products."""
    if not (len(u) == len(v) == len(w)):
        raise DimensionError(f"length mismatch: {len(u)}, {len(v)}, {len(w)}")
    s = mpf(0)
    for a, b, c in zip(u, v, w):
        if c <= 0:
            raise DomainError(f"nonpositive weight {c}")
        s += c * a * b
    return s


def norm2(u):
    return gmpy2.sqrt(dot(u, u))


def weighted_norm(u, w):
    return gmpy2.sqrt(weighted_dot(u, u, w))


def sub(u, v):
    if len(u) != len(v):
        raise DimensionError(f"length mismatch: {len(u)} vs {len(v)}")
    return [a - b for a, b in zip(u, v)]


def axpy(alpha, u, v):
    """alpha*u + v."""
    if len(u) != len(v):
        raise DimensionError(f"length mismatch: {len(u)} vs {len(v)}")
    return [alpha * a + b for a, b in zip(u, v)]


def scale(alpha, u):
    return [alpha * a for a in u]


@dataclass(frozen=True)
class Tridiagonal:
    """Symmetric tridiagonal matrix by its diagonal and off-diagonal.

    Off-diagonal entries must be strictly positive: breakdown of the
    recurrence that produces these matrices is represented upstream, never
    as a zero coupling here.
    """

    alpha: tuple
    beta: tuple

    def __post_init__(self):
        alpha = tuple(mpf(a) for a in self.alpha)
        beta = tuple(mpf(b) for b in self.beta)
        if len(alpha) < 1:
            raise ParameterError("tridiagonal matrix must be at least 1x1")
        if len(beta) != len(alpha) - 1:
            raise DimensionError(
                f"beta length {len(beta)} does not match alpha length {len(alpha)}"
            )
        for b in beta:
            if not b > 0:
                raise DomainError(f"off-diagonal entries must be positive, got {b}")
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", beta)

    @property
    def n(self):
        return len(self.alpha)

    def norm_bound(self):
        """Gershgorin bound on the spectral norm."""
        n = self.n
        best = mpf(0)
        for i in range(n):
            row = abs(self.alpha[i])
            if i > 0:
                row += self.beta[i - 1]
            if i < n - 1:
                row += self.beta[i]
            best = max(best, row)
        return best

    def matvec(self, x):
        if len(x) != self.n:
            raise DimensionError(f"length mismatch: {len(x)} vs {self.n}")
        n = self.n
        y = []
        for i in range(n):
            s = self.alpha[i] * x[i]
            if i > 0:
                s += self.beta[i - 1] * x[i - 1]
            if i < n - 1:
                s += self.beta[i] * x[i + 1]
            y.append(s)
        return y

    def leading(self, k):
        """Leading k-by-k principal submatrix."""
        if not 1 <= k <= self.n:
            raise ParameterError(f"invalid leading dimension {k}")
        return Tridiagonal(self.alpha[:k], self.beta[: k - 1])


def tridiag_eig(T, max_sweeps_per_value=None):
    """Eigendecomposition of a symmetric tridiagonal matrix.

    Implicit-shift QL iteration carried out entirely at the working
    precision.  Returns ``(theta, V)`` with ``theta`` ascending and ``V``
    a row-major orthonormal matrix whose column ``j`` is the eigenvector
    for ``theta[j]``.
    """
    n = T.n
    prec_bits = gmpy2.get_context().precision
    eps = gmpy2.exp2(2 - prec_bits)
    cap = max_sweeps_per_value if max_sweeps_per_value is not None else 50 * n

    d = [mpf(a) for a in T.alpha]
    e = [mpf(b) for b in T.beta] + [mpf(0)]
    z = [[mpf(1) if i == j else mpf(0) for j in range(n)] for i in range(n)]

    for l in range(n):
        iters = 0
        while True:
            m = n - 1
            for mm in range(l, n - 1):
                dd = abs(d[mm]) + abs(d[mm + 1])
                if abs(e[mm]) <= eps * dd:
                    m = mm
                    break
            if m == l:
                break
            iters += 1
            if iters > cap:
                raise SolverError(
                    f"QL iteration failed to converge; worst off-diagonal residual {e[l]}"
                )
            g = (d[l + 1] - d[l]) / (2 * e[l])
            r = _hypot(g, mpf(1))
            g = d[m] - d[l] + e[l] / (g + gmpy2.copy_sign(r, g))
            s = mpf(1)
            c = mpf(1)
            p = mpf(0)
            underflow = False
            for i in range(m - 1, l - 1, -1):
                f = s * e[i]
                b = c * e[i]
                r = _hypot(f, g)
                e[i + 1] = r
                if r == 0:
                    d[i + 1] -= p
                    e[m] = mpf(0)
                    underflow = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                for k in range(n):
                    f = z[k][i + 1]
                    z[k][i + 1] = s * z[k][i] + c * f
                    z[k][i] = c * z[k][i] - s * f
            if underflow:
                continue
            d[l] -= p
            e[l] = g
            e[m] = mpf(0)

    order = sorted(range(n), key=lambda j: d[j])
    theta = [d[j] for j in order]
    V = [[z[i][j] for j in order] for i in range(n)]
    return theta, V


def _hypot(a, b):
    return gmpy2.sqrt(a * a + b * b)


def eig_apply(theta, V, values, coeff):
    """V diag(values) V^T applied to coeff; all row-major lists."""
    n = len(theta)
    proj = [mpf(0)] * n
    for j in range(n):
        s = mpf(0)
        for i in range(n):
            s += V[i][j] * coeff[i]
        proj[j] = values[j] * s
    out = []
    for i in range(n):
        s = mpf(0)
        for j in range(n):
            s += V[i][j] * proj[j]
        out.append(s)
    return out


def solve_shifted_tridiag(T, z, rhs, tol=None):
    """Solve (T - zI) y = rhs by banded LU with partial pivoting.

    Raises :class:`SingularShiftError` (with the distance from z to the
    nearest eigenvalue of T) when a pivot falls below tol times the matrix
    scale; callers surface this rather than masking it.
    """
    n = T.n
    if len(rhs) != n:
        raise DimensionError(f"rhs length {len(rhs)} vs matrix size {n}")
    z = mpf(z)
    scale_bound = T.norm_bound() + abs(z)
    if scale_bound == 0:
        scale_bound = mpf(1)
    if tol is None:
        tol = gmpy2.exp2(-(gmpy2.get_context().precision // 2))
    thresh = tol * scale_bound

    d = [T.alpha[i] - z for i in range(n)]
    u = [T.beta[i] for i in range(n - 1)] + [mpf(0)]
    uu = [mpf(0)] * n
    low = [T.beta[i] for i in range(n - 1)]
    x = [mpf(r) for r in rhs]

    for i in range(n - 1):
        if abs(low[i]) > abs(d[i]):
            d[i], low[i] = low[i], d[i]
            d[i + 1], u[i] = u[i], d[i + 1]
            u[i + 1], uu[i] = uu[i], u[i + 1]
            x[i], x[i + 1] = x[i + 1], x[i]
        if abs(d[i]) <= thresh:
            raise SingularShiftError(z, _nearest_eig_distance(T, z))
        m = low[i] / d[i]
        d[i + 1] -= m * u[i]
        u[i + 1] -= m * uu[i]
        x[i + 1] -= m * x[i]
    if abs(d[n - 1]) <= thresh:
        raise SingularShiftError(z, _nearest_eig_distance(T, z))

    y = [mpf(0)] * n
    for i in range(n - 1, -1, -1):
        s = x[i]
        if i + 1 < n:
            s -= u[i] * y[i + 1]
        if i + 2 < n:
            s -= uu[i] * y[i + 2]
        y[i] = s / d[i]
    return y


def _nearest_eig_distance(T, z):
    try:
        theta, _ = tridiag_eig(T)
    except SolverError:
        return None
    return min(abs(t - z) for t in theta)


def dense_solve(A, b, thresh=None):
    """Solve a small dense system by Gaussian elimination with pivoting.

    A is a row-major list of lists; used for the exchange-algorithm linear
    systems and other tiny auxiliary solves.
    """
    n = len(A)
    if any(len(row) != n for row in A):
        raise DimensionError("matrix is not square")
    if len(b) != n:
        raise DimensionError(f"rhs length {len(b)} vs matrix size {n}")
    M = [[mpf(x) for x in row] for row in A]
    x = [mpf(v) for v in b]
    for i in range(n):
        p = max(range(i, n), key=lambda r: abs(M[r][i]))
        if M[p][i] == 0:
            raise SolverError("singular linear system")
        if p != i:
            M[i], M[p] = M[p], M[i]
            x[i], x[p] = x[p], x[i]
        if thresh is not None and abs(M[i][i]) <= thresh:
            raise SolverError("numerically singular linear system")
        for r in range(i + 1, n):
            m = M[r][i] / M[i][i]
            if m == 0:
                continue
            for c in range(i, n):
                M[r][c] -= m * M[i][c]
            x[r] -= m * x[i]
    y = [mpf(0)] * n
    for i in range(n - 1, -1, -1):
        s = x[i]
        for c in range(i + 1, n):
            s -= M[i][c] * y[c]
        y[i] = s / M[i][i]
    return y

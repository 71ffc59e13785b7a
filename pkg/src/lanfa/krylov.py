"""Lanczos iteration with full reorthogonalization in extended precision."""

from __future__ import annotations

from dataclasses import dataclass

import gmpy2

from .errors import ParameterError
from .precision import mpf
from .xlinalg import Tridiagonal, dot, norm2


@dataclass(frozen=True)
class KrylovDecomposition:
    """Orthonormal Krylov basis Q (tuple of columns) and Jacobi matrix T.

    ``beta_next`` is the residual norm that would start the next column;
    ``grade_reached`` marks breakdown, i.e. the Krylov space stopped
    growing at ``len(Q)`` columns.
    """

    Q: tuple
    T: Tridiagonal
    grade_reached: bool
    beta_next: object
    bnorm: object

    @property
    def k(self):
        return len(self.Q)


def lanczos(inst, k, reorth="full"):
    """Run k steps of the three-term Lanczos recurrence on (A, b).

    A acts diagonally in the eigenbasis representation.  With
    ``reorth="full"`` every new vector gets two modified Gram-Schmidt
    passes against all previous columns, our stand-in for exact
    arithmetic; ``reorth="none"`` exists for drift experiments only.
    """
    if k < 1:
        raise ParameterError(f"need k >= 1, got {k}")
    if reorth not in ("full", "none"):
        raise ParameterError(f"reorth must be 'full' or 'none', got {reorth!r}")

    with inst.precision.ctx():
        lam = inst.lam
        bnorm = inst.norm_b()
        if bnorm == 0:
            raise ParameterError("right-hand side has zero norm")
        norm_a = inst.norm_a()
        breakdown_tol = inst.precision.tol * (norm_a if norm_a > 0 else mpf(1))

        q = [x / bnorm for x in inst.w]
        cols = [q]
        alpha = []
        beta = []
        grade_reached = False
        beta_next = mpf(0)

        for j in range(k):
            v = [lam[i] * cols[j][i] for i in range(inst.d)]
            a_j = dot(cols[j], v)
            alpha.append(a_j)
            v = [v[i] - a_j * cols[j][i] for i in range(inst.d)]
            if j > 0:
                v = [v[i] - beta[j - 1] * cols[j - 1][i] for i in range(inst.d)]
            if reorth == "full":
                for _ in range(2):
                    for prev in cols:
                        c = dot(prev, v)
                        v = [v[i] - c * prev[i] for i in range(inst.d)]
            b_j = norm2(v)
            beta_next = b_j
            if b_j <= breakdown_tol:
                grade_reached = True
                break
            if j == k - 1:
                break
            beta.append(b_j)
            cols.append([x / b_j for x in v])

        T = Tridiagonal(tuple(alpha), tuple(beta))
        return KrylovDecomposition(
            Q=tuple(tuple(c) for c in cols),
            T=T,
            grade_reached=grade_reached or len(cols) == inst.d,
            beta_next=beta_next,
            bnorm=bnorm,
        )


def krylov_grade(inst):
    """Number of eigenvalues carrying a nonzero coefficient of b."""
    return sum(1 for x in inst.w if x != 0)


def basis_apply(decomp, coeff):
    """Q y for coefficients y in the Krylov basis."""
    k = len(coeff)
    if k > decomp.k:
        raise ParameterError(f"{k} coefficients but only {decomp.k} basis columns")
    d = len(decomp.Q[0])
    out = [mpf(0)] * d
    for j in range(k):
        cj = coeff[j]
        col = decomp.Q[j]
        for i in range(d):
            out[i] += cj * col[i]
    return out


def basis_project(decomp, vec, k=None):
    """Q^T vec restricted to the first k columns."""
    k = decomp.k if k is None else k
    if k > decomp.k:
        raise ParameterError(f"asked for {k} coefficients but only {decomp.k} columns")
    return [dot(decomp.Q[j], vec) for j in range(k)]

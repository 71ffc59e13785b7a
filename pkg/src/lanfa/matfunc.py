"""Exact matrix-function application and the Lanczos matrix-function iterate."""

from __future__ import annotations

import gmpy2

from . import funcs, krylov, xlinalg
from .errors import DomainError, ParameterError, SingularShiftError
from .precision import mpf

FAILED = "FAILED"


def exact_apply(inst, f):
    """f(A) b in the eigenbasis representation: entrywise f(lambda_i) w_i."""
    with inst.precision.ctx():
        return [funcs.eval_scalar(f, x) * w for x, w in zip(inst.lam, inst.w)]


def lanczos_fa(inst, f, k, decomp=None, path="eig"):
    """The k-th Lanczos iterate Q f(T) Q^T b.

    ``path="eig"`` evaluates f(T) through the tridiagonal
    eigendecomposition (works for any f defined at the Ritz values);
    ``path="solve"`` is the shifted-solve route for rational f, used to
    cross-validate the eigendecomposition path.
    """
    if k < 1:
        raise ParameterError(f"need k >= 1, got {k}")
    with inst.precision.ctx():
        decomp = _decomp_for(inst, k, decomp)
        k_eff = min(k, decomp.k)
        coeff = _ft_e1(inst, f, decomp, k_eff, path)
        return krylov.basis_apply(decomp, coeff)


def _decomp_for(inst, k, decomp):
    if decomp is None or (decomp.k < k and not decomp.grade_reached):
        return krylov.lanczos(inst, k)
    return decomp


def _ft_e1(inst, f, decomp, k, path):
    """Coefficients f(T_k) (|b| e1) in the Krylov basis."""
    T = decomp.T.leading(k)
    if path == "eig":
        theta, V = xlinalg.tridiag_eig(T)
        _check_ritz_domain(inst, f, T, theta)
        values = [funcs.eval_scalar(f, t) for t in theta]
        e1 = [decomp.bnorm] + [mpf(0)] * (k - 1)
        return xlinalg.eig_apply(theta, V, values, e1)
    if path == "solve":
        rf = funcs.as_rational(f)
        if rf is None:
            raise ParameterError("solve path requires a rational function")
        if k <= rf.numer_degree:
            raise ParameterError(
                f"solve path needs k > deg(numerator) = {rf.numer_degree}, got k = {k}"
            )
        v = [decomp.bnorm] + [mpf(0)] * (k - 1)
        w = _poly_apply_tridiag(T, rf.numer, v)
        for z in rf.poles:
            w = xlinalg.solve_shifted_tridiag(T, z, w, tol=inst.precision.tol)
        for a, b in rf.cpole_pairs:
            w = _solve_quadratic_factor(T, a, b, w)
        return w
    raise ParameterError(f"unknown path {path!r}")


def _poly_apply_tridiag(T, coeffs, v):
    """n(T) v by Horner with tridiagonal matvecs."""
    k = len(v)
    acc = [coeffs[-1] * x for x in v]
    for c in reversed(coeffs[:-1]):
        acc = T.matvec(acc)
        for i in range(k):
            acc[i] += c * v[i]
    return acc


def _solve_quadratic_factor(T, a, b, rhs):
    """Solve ((T - aI)^2 + b^2 I) y = rhs (dense; used only for conjugate pairs)."""
    k = T.n
    shifted = [[mpf(0)] * k for _ in range(k)]
    for i in range(k):
        shifted[i][i] = T.alpha[i] - a
        if i + 1 < k:
            shifted[i][i + 1] = T.beta[i]
            shifted[i + 1][i] = T.beta[i]
    M = [[mpf(0)] * k for _ in range(k)]
    for i in range(k):
        for j in range(k):
            s = mpf(0)
            for t in range(max(0, max(i, j) - 1), min(k, min(i, j) + 2)):
                s += shifted[i][t] * shifted[t][j]
            M[i][j] = s
        M[i][i] += b * b
    return xlinalg.dense_solve(M, rhs)


def _check_ritz_domain(inst, f, T, theta):
    """Surface the pole-hits-Ritz-value failure mode instead of masking it."""
    scale = max(inst.norm_a(), T.norm_bound())
    tol = inst.precision.tol * (scale if scale > 0 else mpf(1))
    rf = funcs.as_rational(f)
    if rf is not None:
        for z in rf.poles:
            for t in theta:
                if abs(t - z) <= tol:
                    raise SingularShiftError(z, abs(t - z))
        for a, b in rf.cpole_pairs:
            for t in theta:
                if (t - a) * (t - a) + b * b <= tol * tol:
                    raise SingularShiftError(gmpy2.mpc(a, b), None)
    if isinstance(f, funcs.Sign):
        for t in theta:
            if abs(t) <= tol:
                raise DomainError(f"sign at a Ritz value {t} indistinguishable from 0")


def lanczos_fa_iterates(inst, f, k_max, decomp=None):
    """The Lanczos iterates themselves for k = 1..k_max, FAILED where the
    evaluation is undefined, reusing one factorization."""
    if k_max < 1:
        raise ParameterError(f"need k_max >= 1, got {k_max}")
    with inst.precision.ctx():
        decomp = _decomp_for(inst, k_max, decomp)
        out = []
        for k in range(1, k_max + 1):
            kk = min(k, decomp.k)
            try:
                coeff = _ft_e1(inst, f, decomp, kk, "eig")
            except (SingularShiftError, DomainError):
                out.append(FAILED)
                continue
            out.append(krylov.basis_apply(decomp, coeff))
        return out


def lanczos_fa_series(inst, f, k_max, decomp=None):
    """Per-iteration 2-norm errors of the Lanczos iterates for k = 1..k_max.

    A single Lanczos factorization is reused; iterations where the
    evaluation fails (a Ritz value hits a pole) record the FAILED marker
    instead of a number.
    """
    if k_max < 1:
        raise ParameterError(f"need k_max >= 1, got {k_max}")
    with inst.precision.ctx():
        decomp = _decomp_for(inst, k_max, decomp)
        target = exact_apply(inst, f)
        out = []
        last = None
        for k in range(1, k_max + 1):
            if k > decomp.k:
                out.append(last if last is not None else FAILED)
                continue
            try:
                coeff = _ft_e1(inst, f, decomp, k, "eig")
            except (SingularShiftError, DomainError):
                out.append(FAILED)
                continue
            approx = krylov.basis_apply(decomp, coeff)
            last = xlinalg.norm2(xlinalg.sub(target, approx))
            out.append(last)
        return out


# --- interpolation characterization (test utility) ----------------------------

def leja_order(xs):
    """Reorder points for numerically stable Newton interpolation."""
    pts = [mpf(x) for x in xs]
    if not pts:
        return []
    ordered = [max(pts, key=abs)]
    remaining = [x for x in pts if x is not ordered[0]]
    while remaining:
        best = max(
            remaining,
            key=lambda x: min(abs(x - y) for y in ordered),
        )
        ordered.append(best)
        remaining.remove(best)
    return ordered


def newton_interpolant(xs, f):
    """Divided-difference interpolant of f at xs; returns a callable."""
    pts = [mpf(x) for x in xs]
    coeffs = [funcs.eval_scalar(f, x) if not callable(f) else f(x) for x in pts]
    n = len(pts)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coeffs[i] = (coeffs[i] - coeffs[i - 1]) / (pts[i] - pts[i - j])

    def p(x):
        x = mpf(x)
        acc = coeffs[-1]
        for i in range(n - 2, -1, -1):
            acc = acc * (x - pts[i]) + coeffs[i]
        return acc

    return p

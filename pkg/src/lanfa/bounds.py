"""A-priori and instance-based error bounds for the Krylov iterates: the
rational near-optimality bound, the uniform polynomial bound, the closed-form
minimax rate for 1/x, the rational-candidate triangle bound, and the residual
near-optimality theorem for indefinite systems.
"""

from __future__ import annotations

from dataclasses import dataclass

import gmpy2

from . import approx, funcs, matfunc, optimal, xlinalg
from .errors import DomainError, ParameterError
from .precision import mpf

FAILED = matfunc.FAILED


def kappa_shift(inst, z):
    """Condition number of A - zI over the instance's spectral interval.

    The shift must lie strictly outside [lam_min, lam_max].
    """
    z = mpf(z)
    with inst.precision.ctx():
        lo, hi = inst.lam_min, inst.lam_max
        if z < lo:
            return (hi - z) / (lo - z)
        if z > hi:
            return (z - lo) / (z - hi)
        raise DomainError(f"shift {z} lies inside the spectral interval [{lo}, {hi}]")


@dataclass(frozen=True)
class NearOptimalityReport:
    k: int
    kappas: tuple
    prefactor: object
    opt_err_shifted: object
    bound: object
    gamma: object
    eta: object


def rational_bound(inst, r, k, decomp=None):
    """Near-optimality bound for the rational Krylov iterate at step k.

    bound = q * prod(kappa(A - z_j)) * (2-norm optimal error at dimension
    k - q + 1), where the z_j are the real poles of r.  Complex-conjugate
    pole pairs are excluded from the prefactor.
    """
    if not isinstance(r, funcs.RationalFunction):
        raise ParameterError("rational_bound takes a RationalFunction")
    if k <= r.numer_degree:
        raise ParameterError(f"need k > deg(numerator) = {r.numer_degree}")
    q = len(r.poles)
    if q < 1:
        raise ParameterError("rational_bound needs at least one real pole")
    dim = k - q + 1
    if dim < 1:
        raise ParameterError(f"need k - q + 1 >= 1, got {dim}")
    with inst.precision.ctx():
        kappas = tuple(kappa_shift(inst, z) for z in r.poles)
        prefactor = mpf(q)
        for kap in kappas:
            prefactor *= kap
        eta = min(
            min(abs(mpf(z) - inst.lam_min), abs(mpf(z) - inst.lam_max)) for z in r.poles
        )
        gamma = 1 + (inst.lam_max - inst.lam_min) / eta
        prod_cap = gamma**q
        if not all(kap >= 1 for kap in kappas) or not prefactor / q <= prod_cap * (1 + inst.precision.tol):
            raise DomainError("shift condition numbers exceed the gamma bound")
        _, terrs = optimal.optimal_error_series(
            inst, funcs.Rational(r), dim, optimal.TwoNorm(), decomp
        )
        opt_err = terrs[dim - 1]
        return NearOptimalityReport(
            k=k,
            kappas=kappas,
            prefactor=prefactor,
            opt_err_shifted=opt_err,
            bound=prefactor * opt_err,
            gamma=gamma,
            eta=eta,
        )


def uniform_bound(inst, f, k, grid=None):
    """Twice the Chebyshev-interpolation error of degree k-1 on the spectral
    interval; multiply by ||b|| to compare against absolute errors."""
    if k < 1:
        raise ParameterError(f"need k >= 1, got {k}")
    with inst.precision.ctx():
        lo, hi = inst.lam_min, inst.lam_max
        if not funcs.is_continuous_on(f, lo, hi):
            raise DomainError("function is discontinuous on the spectral interval")
        if lo == hi:
            return mpf(0)
        grid = grid if grid is not None else max(10 * k, 200)
        p = approx.chebyshev_interpolant(f, (lo, hi), k - 1)
        return 2 * approx.sup_error(f, p, (lo, hi), grid)


def inv_minimax_exact(interval, k):
    """Closed-form best uniform error of degree k-1 polynomials against 1/x."""
    lo, hi = mpf(interval[0]), mpf(interval[1])
    if lo <= 0:
        raise DomainError(f"need lo > 0, got {lo}")
    if not lo < hi:
        raise ParameterError(f"need lo < hi, got [{lo}, {hi}]")
    if k < 1:
        raise ParameterError(f"need k >= 1, got {k}")
    t = 1 - 2 / (1 + gmpy2.sqrt(hi / lo))
    return 8 * t ** (k + 1) / ((t * t - 1) ** 2 * (hi - lo))


def triangle_bound_series(inst, f, k_max, candidates, grid=10000, decomp=None):
    """Rational-candidate bounds on the error of f for k = 1..k_max.

    For each rational candidate r: (C_r + 2) ||b|| sup|f - r| + C_r * (2-norm
    optimal error for r at dimension k - c_r), with C_r the near-optimality
    prefactor and c_r = q - 1.  Entry k is the (min bound, argmin index) pair,
    or (FAILED, None) when no candidate is admissible there.
    """
    if not candidates:
        raise ParameterError("need at least one candidate")
    if k_max < 1:
        raise ParameterError(f"need k_max >= 1, got {k_max}")
    with inst.precision.ctx():
        lo, hi = inst.lam_min, inst.lam_max
        nb = inst.norm_b()
        data = []
        for i, r in enumerate(candidates):
            q = len(r.poles)
            C = mpf(q)
            for z in r.poles:
                C *= kappa_shift(inst, z)
            sup = approx.sup_error(f, lambda x, rr=r: rr.eval(x), (lo, hi), grid)
            dim_max = k_max - (q - 1)
            terrs = None
            if dim_max >= 1:
                _, terrs = optimal.optimal_error_series(
                    inst, funcs.Rational(r), dim_max, optimal.TwoNorm(), decomp
                )
            data.append((i, q - 1, r.numer_degree, C, sup, terrs))
        out = []
        for k in range(1, k_max + 1):
            best, best_i = None, None
            for i, c_r, ndeg, C, sup, terrs in data:
                dim = k - c_r
                if dim < 1 or k <= ndeg or terrs is None:
                    continue
                val = (C + 2) * nb * sup + C * terrs[dim - 1]
                if best is None or val < best:
                    best, best_i = val, i
            out.append((best if best is not None else FAILED, best_i))
        return out


def triangle_bound(inst, f, k, candidates, grid=10000, decomp=None):
    """Smallest rational-candidate bound at step k; see triangle_bound_series."""
    series = triangle_bound_series(inst, f, k, candidates, grid, decomp)
    bound, idx = series[k - 1]
    if bound is FAILED:
        raise ParameterError(f"no candidate admits a bound at k={k}")
    return bound, idx


def lanczos_or_bound(inst, r, k, decomp=None):
    """2-norm near-optimality bound for the reduced-dimension rational iterate:
    sqrt(kappa(|r(A)|)) times the 2-norm optimal error at dimension k - q//2."""
    if not isinstance(r, funcs.RationalFunction):
        raise ParameterError("lanczos_or_bound takes a RationalFunction")
    q = r.denom_degree
    dim = k - q // 2
    if dim < 1:
        raise ParameterError(f"need k - q//2 >= 1, got {dim}")
    with inst.precision.ctx():
        g = optimal.weight_values(optimal.AbsRational(r), inst)
        kap = max(g) / min(g)
        _, terrs = optimal.optimal_error_series(
            inst, funcs.Rational(r), dim, optimal.TwoNorm(), decomp
        )
        return gmpy2.sqrt(kap) * terrs[dim - 1]


# --- residual optimality for linear systems -----------------------------------

def minres_residuals(inst, k_max, decomp=None):
    """2-norm residuals ||b - A y_k|| of the residual-optimal iterates,
    k = 0..k_max (the k=0 entry is ||b||)."""
    if k_max < 0:
        raise ParameterError(f"need k_max >= 0, got {k_max}")
    with inst.precision.ctx():
        if min(abs(l) for l in inst.lam) <= inst.precision.tol * inst.norm_a():
            raise DomainError("matrix is singular: residual minimization undefined")
        out = [inst.norm_b()]
        if k_max == 0:
            return out
        # minimizing ||b - A y|| over y in K_k is the A^2-weighted optimum for 1/x
        gerrs, _ = optimal.optimal_error_series(
            inst, funcs.InvPower(1), k_max, optimal.PowerOfA(2), decomp
        )
        prev = out[0]
        for e in gerrs:
            e = min(e, prev)  # optimal sequence is nonincreasing by construction
            out.append(e)
            prev = e
        return out


def cg_residuals(inst, k_max, decomp=None):
    """2-norm residuals of the tridiagonal-solve iterates for 1/x, with FAILED
    where the reduced system is singular."""
    out = []
    with inst.precision.ctx():
        iterates = matfunc.lanczos_fa_iterates(inst, funcs.InvPower(1), k_max, decomp)
        for x in iterates:
            if x is FAILED or isinstance(x, str):
                out.append(FAILED)
                continue
            ax = [l * v for l, v in zip(inst.lam, x)]
            out.append(xlinalg.norm2(xlinalg.sub(inst.w, ax)))
    return out


def verify_cg_minres_relation(inst, k_max, decomp=None):
    """Max relative deviation between the direct residuals of the 1/x iterate
    and the value predicted from consecutive residual-optimal norms.

    Where the residual-optimal sequence stagnates the direct iterate must be a
    FAILED sentinel; a finite value there is reported as a deviation of 1.
    """
    with inst.precision.ctx():
        tol = inst.precision.tol
        mres = minres_residuals(inst, k_max, decomp)
        cres = cg_residuals(inst, k_max, decomp)
        worst = mpf(0)
        for k in range(1, k_max + 1):
            prev, cur = mres[k - 1], mres[k]
            if prev <= tol * inst.norm_b() or cur <= tol * inst.norm_b():
                break  # converged: everything below is noise
            ratio = cur / prev
            denom_sq = (1 - ratio) * (1 + ratio)
            stagnated = denom_sq <= tol
            if cres[k - 1] is FAILED:
                if not stagnated:
                    worst = max(worst, mpf(1))
                continue
            if stagnated:
                worst = max(worst, mpf(1))
                continue
            predicted = cur / gmpy2.sqrt(denom_sq)
            dev = abs(cres[k - 1] - predicted) / predicted
            worst = max(worst, dev)
        return worst


@dataclass(frozen=True)
class IndefiniteReport:
    k: int
    k_star: int
    minres_residuals: tuple
    cg_residuals: tuple
    factor: object
    lhs: object
    rhs: object


def indefinite_theorem_check(inst, k, decomp=None):
    """Best residual among the first k tridiagonal-solve iterates is within a
    factor e*sqrt(k) + 1/sqrt(k) of the k-th residual-optimal value."""
    if k < 1:
        raise ParameterError(f"need k >= 1, got {k}")
    with inst.precision.ctx():
        mres = minres_residuals(inst, k, decomp)
        cres = cg_residuals(inst, k, decomp)
        # the zero iterate (residual ||b||) is always an admissible candidate
        k_star = 0
        lhs = inst.norm_b()
        for i, r in enumerate(cres):
            if r is FAILED:
                continue
            if r < lhs:
                lhs, k_star = r, i + 1
        rk = mpf(k)
        factor = gmpy2.exp(mpf(1)) * gmpy2.sqrt(rk) + 1 / gmpy2.sqrt(rk)
        rhs = factor * mres[k]
        return IndefiniteReport(
            k=k,
            k_star=k_star,
            minres_residuals=tuple(mres),
            cg_residuals=tuple(cres),
            factor=factor,
            lhs=lhs,
            rhs=rhs,
        )

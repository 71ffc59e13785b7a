"""Classical approximation constructions: Chebyshev interpolation, the
exchange algorithm for best uniform polynomial approximation (interval and
discrete), diagonal Pade approximants to exp, and Zolotarev's rational
approximation to the square root.

Polynomials live in the Chebyshev basis of their target interval; monomial
conversion exists for display only.
"""

from __future__ import annotations

from dataclasses import dataclass

import gmpy2
import numpy as np

from . import funcs
from .errors import DomainError, ParameterError, SolverError
from .precision import Precision, mpf


def _as_callable(f):
    if callable(f) and not isinstance(
        f, (funcs.Polynomial, funcs.Rational, funcs.Sqrt, funcs.InvSqrt, funcs.InvPower, funcs.ExpScaled, funcs.Sign)
    ):
        return f
    return lambda x: funcs.eval_scalar(f, x)


@dataclass(frozen=True)
class ChebPoly:
    """Polynomial in the Chebyshev basis of [a, b]."""

    a: object
    b: object
    coeffs: tuple

    def __post_init__(self):
        object.__setattr__(self, "a", mpf(self.a))
        object.__setattr__(self, "b", mpf(self.b))
        object.__setattr__(self, "coeffs", tuple(mpf(c) for c in self.coeffs))
        if not self.a < self.b:
            raise ParameterError(f"degenerate interval [{self.a}, {self.b}]")

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def _map(self, x):
        return (2 * mpf(x) - self.a - self.b) / (self.b - self.a)

    def __call__(self, x):
        """Clenshaw evaluation."""
        t = self._map(x)
        b1 = mpf(0)
        b2 = mpf(0)
        for c in reversed(self.coeffs[1:]):
            b1, b2 = 2 * t * b1 - b2 + c, b1
        return t * b1 - b2 + self.coeffs[0]

    def monomial_coeffs(self):
        """Ascending monomial coefficients in x (display / low degree only)."""
        # T recurrence in the mapped variable, then substitute the affine map.
        n = len(self.coeffs)
        tk_prev = [mpf(1)]
        tk = None
        total = [mpf(0)] * n
        for m in range(n):
            if m == 0:
                cur = tk_prev
            elif m == 1:
                cur = [mpf(0), mpf(1)]
                tk = cur
            else:
                cur = [mpf(0)] + [2 * c for c in tk]
                for i, c in enumerate(tk_prev):
                    cur[i] -= c
                cur += [mpf(0)] * (m + 1 - len(cur))
                tk_prev, tk = tk, cur
            for i, c in enumerate(cur):
                total[i] += self.coeffs[m] * c
        # total is in t; substitute t = (2x - a - b)/(b - a) by synthetic composition
        shift = -(self.a + self.b) / (self.b - self.a)
        scalef = 2 / (self.b - self.a)
        out = [mpf(0)]
        for c in reversed(total):
            # out = out * (scale*x + shift) + c
            new = [mpf(0)] * (len(out) + 1)
            for i, o in enumerate(out):
                new[i] += o * shift
                new[i + 1] += o * scalef
            new[0] += c
            out = new[: len(total)]
        return out


@dataclass(frozen=True)
class BestApprox:
    poly: ChebPoly
    error: object
    alt_points: tuple


def chebyshev_points(interval, n):
    """n Chebyshev points of the first kind mapped to the interval."""
    a, b = mpf(interval[0]), mpf(interval[1])
    mid = (a + b) / 2
    half = (b - a) / 2
    pi = gmpy2.const_pi()
    return [mid + half * gmpy2.cos(pi * (2 * j + 1) / (2 * n)) for j in range(n - 1, -1, -1)]


def chebyshev_interpolant(f, interval, degree):
    """Interpolate f at the degree+1 Chebyshev points of the interval."""
    if degree < 0:
        raise ParameterError(f"degree must be >= 0, got {degree}")
    fx = _as_callable(f)
    a, b = mpf(interval[0]), mpf(interval[1])
    n = degree + 1
    pi = gmpy2.const_pi()
    mid = (a + b) / 2
    half = (b - a) / 2
    nodes_t = [gmpy2.cos(pi * (2 * j + 1) / (2 * n)) for j in range(n)]
    vals = [fx(mid + half * t) for t in nodes_t]
    coeffs = []
    for m in range(n):
        s = mpf(0)
        for j in range(n):
            s += vals[j] * gmpy2.cos(pi * m * (2 * j + 1) / (2 * n))
        c = 2 * s / n
        coeffs.append(c / 2 if m == 0 else c)
    return ChebPoly(a, b, tuple(coeffs))


def chebyshev_grid(interval, size):
    """Chebyshev-distributed sample grid including the endpoints."""
    a, b = mpf(interval[0]), mpf(interval[1])
    if size < 2:
        raise ParameterError("grid needs at least 2 points")
    mid = (a + b) / 2
    half = (b - a) / 2
    pi = gmpy2.const_pi()
    return [mid - half * gmpy2.cos(pi * j / (size - 1)) for j in range(size)]


def sup_error(f, g, interval, grid=2000):
    """max |f - g| over a Chebyshev-distributed grid of the given size."""
    fx, gx = _as_callable(f), _as_callable(g)
    best = mpf(0)
    for x in chebyshev_grid(interval, grid):
        v = abs(fx(x) - gx(x))
        if v > best:
            best = v
    return best


# --- exchange algorithm (interval) --------------------------------------------

def remez_best_poly(f, interval, degree, precision=None, max_iters=80):
    """Best uniform polynomial approximation on an interval.

    Multi-point exchange on a dense-grid extremum search, with every
    extremum polished by golden-section refinement so the equioscillation
    spread converges below tol * error.
    """
    precision = precision or Precision()
    fx = _as_callable(f)
    a, b = mpf(interval[0]), mpf(interval[1])
    if not a < b:
        raise ParameterError(f"need lo < hi, got [{a}, {b}]")
    n = degree + 2  # reference size
    pi = gmpy2.const_pi()
    mid = (a + b) / 2
    half = (b - a) / 2
    ref = [mid - half * gmpy2.cos(pi * j / (n - 1)) for j in range(n)]
    tol = precision.tol

    last_spread = None
    for _ in range(max_iters):
        coeffs, h = _solve_reference(fx, a, b, degree, ref)
        p = ChebPoly(a, b, coeffs)
        err = lambda x: fx(x) - p(x)
        extrema = _find_extrema(err, a, b, max(50 * (degree + 2), 300))
        extrema = _polish_extrema(err, extrema, a, b)
        extrema = _alternating_subset(err, extrema, n)
        if len(extrema) < n:
            raise SolverError(
                f"exchange lost alternation: found {len(extrema)} extrema, need {n}"
            )
        vals = [abs(err(x)) for x in extrema]
        spread = max(vals) - min(vals)
        level = max(vals)
        ref = extrema
        if level > 0 and spread <= tol * level:
            coeffs, h = _solve_reference(fx, a, b, degree, ref)
            return BestApprox(ChebPoly(a, b, coeffs), abs(h), tuple(ref))
        if level == 0:
            return BestApprox(ChebPoly(a, b, coeffs), mpf(0), tuple(ref))
        if last_spread is not None and spread >= last_spread and spread <= 4 * tol * level:
            coeffs, h = _solve_reference(fx, a, b, degree, ref)
            return BestApprox(ChebPoly(a, b, coeffs), abs(h), tuple(ref))
        last_spread = spread
    raise SolverError(
        f"exchange failed to converge after {max_iters} iterations; last reference {ref}"
    )


def _solve_reference(fx, a, b, degree, ref):
    """Leveled-error system: p(x_i) + (-1)^i h = f(x_i) on the reference."""
    n = len(ref)
    mapped = [(2 * x - a - b) / (b - a) for x in ref]
    rows = []
    for i, t in enumerate(mapped):
        row = _cheb_row(t, degree)
        row.append(mpf((-1) ** i))
        rows.append(row)
    rhs = [fx(x) for x in ref]
    sol = ChebSolve(rows, rhs)
    return tuple(sol[:-1]), sol[-1]


def ChebSolve(rows, rhs):
    from .xlinalg import dense_solve

    return dense_solve(rows, rhs)


def _cheb_row(t, degree):
    row = [mpf(1)]
    if degree >= 1:
        row.append(t)
    for _ in range(2, degree + 1):
        row.append(2 * t * row[-1] - row[-2])
    return row


def _find_extrema(err, a, b, grid_size):
    """Grid-local extrema of the signed error, endpoints always included."""
    xs = chebyshev_grid((a, b), grid_size)
    es = [err(x) for x in xs]
    out = [(xs[0], xs[0], xs[1])]
    for i in range(1, len(xs) - 1):
        if (es[i] - es[i - 1] >= 0) != (es[i + 1] - es[i] > 0):
            out.append((xs[i], xs[i - 1], xs[i + 1]))
    out.append((xs[-1], xs[-2], xs[-1]))
    return out


def _polish_extrema(err, brackets, a, b):
    """Golden-section refinement of |err| on each bracket."""
    out = []
    inv_phi = (gmpy2.sqrt(mpf(5)) - 1) / 2
    target = gmpy2.exp2(-(gmpy2.get_context().precision * 3 // 4))
    span = b - a
    for x0, lo, hi in brackets:
        s = mpf(1) if err(x0) >= 0 else mpf(-1)
        g = lambda x: s * err(x)
        c = hi - inv_phi * (hi - lo)
        d = lo + inv_phi * (hi - lo)
        gc, gd = g(c), g(d)
        while hi - lo > target * span:
            if gc > gd:
                hi, d, gd = d, c, gc
                c = hi - inv_phi * (hi - lo)
                gc = g(c)
            else:
                lo, c, gc = c, d, gd
                d = lo + inv_phi * (hi - lo)
                gd = g(d)
        out.append((lo + hi) / 2)
    return out


def _alternating_subset(err, points, n):
    """Thin polished extrema to an alternating reference of size n."""
    pts = sorted(set(points))
    kept = []
    for x in pts:
        e = err(x)
        if kept and (e >= 0) == (kept[-1][1] >= 0):
            if abs(e) > abs(kept[-1][1]):
                kept[-1] = (x, e)
        else:
            kept.append((x, e))
    while len(kept) > n:
        # drop the smaller-magnitude endpoint extremum
        if abs(kept[0][1]) <= abs(kept[-1][1]):
            kept.pop(0)
        else:
            kept.pop()
    return [x for x, _ in kept]


# --- exchange algorithm (discrete) --------------------------------------------

def discrete_best_poly(f, points, degree, precision=None):
    """Best uniform polynomial approximation on a finite point set."""
    precision = precision or Precision()
    fx = _as_callable(f)
    pts = sorted(mpf(x) for x in points)
    for u, v in zip(pts, pts[1:]):
        if u == v:
            raise ParameterError("points must be distinct")
    n = degree + 2
    if len(pts) < n:
        raise ParameterError(f"need more than degree+1 = {degree + 1} points")
    a, b = pts[0], pts[-1]
    if a == b:
        raise ParameterError("points span a degenerate interval")

    idx = [round(i * (len(pts) - 1) / (n - 1)) for i in range(n)]
    tiny = gmpy2.exp2(-(gmpy2.get_context().precision - 8))
    for _ in range(20 * len(pts) + 50):
        ref = [pts[i] for i in idx]
        coeffs, h = _solve_reference(fx, a, b, degree, ref)
        p = ChebPoly(a, b, coeffs)
        errs = [fx(x) - p(x) for x in pts]
        worst = max(range(len(pts)), key=lambda i: abs(errs[i]))
        scale = max(abs(e) for e in errs) + abs(h)
        if abs(errs[worst]) <= abs(h) + tiny * max(scale, mpf(1)) or worst in idx:
            return BestApprox(p, abs(h), tuple(ref))
        idx = _exchange_index(idx, worst, errs)
    raise SolverError(f"discrete exchange failed to settle; last reference {idx}")


def _exchange_index(idx, worst, errs):
    s = errs[worst] >= 0
    new = list(idx)
    if worst < idx[0]:
        if (errs[idx[0]] >= 0) == s:
            new[0] = worst
        else:
            new = [worst] + new[:-1]
    elif worst > idx[-1]:
        if (errs[idx[-1]] >= 0) == s:
            new[-1] = worst
        else:
            new = new[1:] + [worst]
    else:
        for i in range(len(idx) - 1):
            if idx[i] < worst < idx[i + 1]:
                if (errs[idx[i]] >= 0) == s:
                    new[i] = worst
                else:
                    new[i + 1] = worst
                break
    return new


# --- diagonal Pade approximant to exp -----------------------------------------

def pade_exp(m):
    """[m/m] Pade approximant to exp about 0.

    Returns a RationalFunction with a monic denominator; complex-conjugate
    denominator roots (present for m >= 2) are carried as pole pairs.
    """
    if m < 1:
        raise ParameterError(f"need m >= 1, got {m}")
    numer_int = []
    for j in range(m + 1):
        num = _falling(2 * m - j, m - j) * _binom(m, j)
        numer_int.append(num)
    # p(x) = sum numer_int[j]/ (2m)!/(m)!... normalized below; keep exact ints
    # Actual classical coefficients: (2m-j)! m! / ((2m)! j! (m-j)!)
    numer = [mpf(gmpy2.fac(2 * m - j) * gmpy2.fac(m)) / mpf(gmpy2.fac(2 * m) * gmpy2.fac(j) * gmpy2.fac(m - j)) for j in range(m + 1)]
    denom = [c if j % 2 == 0 else -c for j, c in enumerate(numer)]

    roots = _poly_roots(denom)
    real_poles = []
    pairs = []
    for z in roots:
        if z.imag == 0:
            real_poles.append(z.real)
        elif z.imag > 0:
            pairs.append((z.real, z.imag))
    lead = denom[-1]
    scaled_numer = tuple(c / lead for c in numer)
    return funcs.RationalFunction(scaled_numer, tuple(sorted(real_poles)), tuple(pairs))


def _binom(n, k):
    return gmpy2.bincoef(n, k)


def _falling(n, k):
    out = gmpy2.mpz(1)
    for i in range(k):
        out *= n - i
    return out


def _poly_roots(coeffs, newton_steps=60):
    """Roots of a real polynomial: double-precision seeds polished in mpc."""
    arr = np.array([float(c) for c in reversed(coeffs)], dtype=float)
    seeds = np.roots(arr)
    dcoeffs = [i * coeffs[i] for i in range(1, len(coeffs))]
    out = []
    tolbits = gmpy2.get_context().precision - 8
    for s in seeds:
        z = gmpy2.mpc(float(s.real), float(s.imag))
        for _ in range(newton_steps):
            pv = _horner_c(coeffs, z)
            dv = _horner_c(dcoeffs, z)
            if dv == 0:
                break
            step = pv / dv
            z = z - step
            if abs(step) <= gmpy2.exp2(-tolbits) * (1 + abs(z)):
                break
        if abs(z.imag) <= gmpy2.exp2(-(tolbits // 2)) * (1 + abs(z)):
            z = gmpy2.mpc(z.real, 0)
        out.append(z)
    return out


def _horner_c(coeffs, z):
    acc = gmpy2.mpc(0)
    for c in reversed(coeffs):
        acc = acc * z + c
    return acc


# --- Zolotarev rational approximation to sqrt ---------------------------------

def agm(a, b, cap=200):
    for _ in range(cap):
        if a == b or abs(a - b) <= gmpy2.exp2(-(gmpy2.get_context().precision - 4)) * abs(a):
            return (a + b) / 2
        a, b = (a + b) / 2, gmpy2.sqrt(a * b)
    raise SolverError("AGM failed to converge")


def elliptic_k(modulus):
    """Complete elliptic integral K of the given modulus k (not parameter)."""
    kp = gmpy2.sqrt((1 - modulus) * (1 + modulus))
    return gmpy2.const_pi() / (2 * agm(mpf(1), kp))


def ellipj_sn_cn(u, m, cap=200):
    """Jacobi sn and cn by the AGM descending-Landen recursion; m is the parameter."""
    if not 0 < m < 1:
        raise DomainError(f"parameter must be in (0,1), got {m}")
    a = [mpf(1)]
    b = gmpy2.sqrt(1 - m)
    c = [gmpy2.sqrt(m)]
    # Stop just above the rounding noise floor; the quadratically convergent
    # iteration can stall there without ever dropping below 2^-prec.
    eps = gmpy2.exp2(-(gmpy2.get_context().precision - 8))
    i = 0
    while abs(c[i] / a[i]) > eps:
        if i > cap:
            raise SolverError("Jacobi AGM recursion failed to converge")
        ai = a[i]
        c.append((ai - b) / 2)
        a.append((ai + b) / 2)
        b = gmpy2.sqrt(ai * b)
        i += 1
    phi = gmpy2.exp2(i) * a[i] * u
    while i > 0:
        t = c[i] * gmpy2.sin(phi) / a[i]
        phi = (gmpy2.asin(t) + phi) / 2
        i -= 1
    sn = gmpy2.sin(phi)
    cn = gmpy2.cos(phi)
    return sn, cn


def zolotarev_sqrt(interval, degree, grid=None):
    """Best-relative-error rational approximation to sqrt on a positive interval.

    Type (degree, degree-1): x times the classical elliptic-function
    approximation to 1/sqrt(x).  All poles are real, negative, and simple.
    """
    lo, hi = mpf(interval[0]), mpf(interval[1])
    if not 0 < lo < hi:
        raise ParameterError(f"need 0 < lo < hi, got [{lo}, {hi}]")
    if degree < 1:
        raise ParameterError(f"need degree >= 1, got {degree}")
    n = degree - 1  # elliptic factor count
    ell2 = lo / hi
    ell = gmpy2.sqrt(ell2)
    cs = []
    if n > 0:
        mprm = 1 - ell2  # parameter of the complementary modulus
        kprime = elliptic_k(gmpy2.sqrt(mprm))
        for i in range(1, 2 * n + 1):
            sn, cn = ellipj_sn_cn(i * kprime / (2 * n + 1), mprm)
            cs.append(ell2 * sn * sn / (cn * cn))

    def unnorm(y_scaled):
        out = mpf(1)
        for i in range(n):
            out *= (y_scaled + cs[2 * i + 1]) / (y_scaled + cs[2 * i])
        return out

    # Equilibrate the relative error of y*unnorm(y) against sqrt on [ell2, 1].
    rho = lambda t: gmpy2.sqrt(t) * unnorm(t)
    size = grid if grid is not None else max(1000, 200 * degree)
    xs = chebyshev_grid((ell2, mpf(1)), size)
    vals = [rho(x) for x in xs]
    rmin_i = min(range(size), key=lambda i: vals[i])
    rmax_i = max(range(size), key=lambda i: vals[i])
    rmin = _refine_scalar(rho, xs, rmin_i, minimize=True)
    rmax = _refine_scalar(rho, xs, rmax_i, minimize=False)
    M = 2 / (rmax + rmin)

    poles = tuple(sorted(-hi * cs[2 * i] for i in range(n)))
    # numerator: sqrt(hi)*M/hi * y * prod(y + hi*c_odd)
    numer_roots = [-hi * cs[2 * i + 1] for i in range(n)]
    coeffs = [mpf(0), mpf(1)]
    for rt in numer_roots:
        coeffs = _mul_linear(coeffs, rt)
    lead = gmpy2.sqrt(hi) * M / hi
    numer = tuple(c * lead for c in coeffs)
    return funcs.RationalFunction(numer, poles)


def _mul_linear(coeffs, root):
    """coeffs(x) * (x - root)."""
    out = [mpf(0)] * (len(coeffs) + 1)
    for i, c in enumerate(coeffs):
        out[i] -= root * c
        out[i + 1] += c
    return out


def _refine_scalar(func, xs, i, minimize):
    lo = xs[max(0, i - 1)]
    hi = xs[min(len(xs) - 1, i + 1)]
    sgn = mpf(-1) if minimize else mpf(1)
    g = lambda x: sgn * func(x)
    inv_phi = (gmpy2.sqrt(mpf(5)) - 1) / 2
    target = gmpy2.exp2(-(gmpy2.get_context().precision * 3 // 4)) * (hi - lo + 1)
    c = hi - inv_phi * (hi - lo)
    d = lo + inv_phi * (hi - lo)
    gc, gd = g(c), g(d)
    while hi - lo > target:
        if gc > gd:
            hi, d, gd = d, c, gc
            c = hi - inv_phi * (hi - lo)
            gc = g(c)
        else:
            lo, c, gc = c, d, gd
            d = lo + inv_phi * (hi - lo)
            gd = g(d)
    return func((lo + hi) / 2)

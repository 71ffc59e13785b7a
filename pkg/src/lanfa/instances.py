"""Problem instances: spectra, right-hand sides, and worst-case constructions.

A symmetric matrix enters only through its spectrum, and the right-hand
side through its coefficients in the eigenbasis; every quantity computed
in this package is invariant under orthogonal change of basis, so this
representation is exact.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

import gmpy2

from . import funcs
from .errors import DomainError, ParameterError
from .precision import Precision, mpf


@dataclass(frozen=True)
class ProblemInstance:
    lam: tuple
    w: tuple
    precision: Precision = field(default_factory=Precision)

    def __post_init__(self):
        with self.precision.ctx():
            lam = tuple(mpf(x) for x in self.lam)
            w = tuple(mpf(x) for x in self.w)
            if len(lam) < 1:
                raise ParameterError("instance needs at least one eigenvalue")
            if len(lam) != len(w):
                raise ParameterError(
                    f"{len(lam)} eigenvalues but {len(w)} coefficients"
                )
            for a, b in zip(lam, lam[1:]):
                if not a < b:
                    raise ParameterError("eigenvalues must be strictly ascending")
            if all(x == 0 for x in w):
                raise ParameterError("right-hand side must be nonzero")
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "w", w)

    @property
    def d(self):
        return len(self.lam)

    @property
    def lam_min(self):
        return self.lam[0]

    @property
    def lam_max(self):
        return self.lam[-1]

    def norm_a(self):
        """Spectral norm of A."""
        return max(abs(self.lam_min), abs(self.lam_max))

    def norm_b(self):
        s = mpf(0)
        for x in self.w:
            s += x * x
        return gmpy2.sqrt(s)

    def kappa(self):
        """Condition number lambda_max/lambda_min for positive definite A."""
        if not self.lam_min > 0:
            raise DomainError("condition number requires a positive definite spectrum")
        return self.lam_max / self.lam_min


# --- spectra ------------------------------------------------------------------

def uniform(d, lo, hi):
    _check_range(d, lo, hi)
    lo, hi = mpf(lo), mpf(hi)
    if d == 1:
        return [lo]
    return [lo + (hi - lo) * i / (d - 1) for i in range(d)]


def geometric(d, lo, hi):
    _check_range(d, lo, hi)
    if not mpf(lo) > 0:
        raise ParameterError("geometric spacing requires lo > 0")
    lo, hi = mpf(lo), mpf(hi)
    if d == 1:
        return [lo]
    ratio = hi / lo
    return [lo * ratio ** (mpf(i) / (d - 1)) for i in range(d)]


def cluster_outlier(d, outlier, cluster_lo, cluster_hi):
    """One detached eigenvalue plus a uniform cluster."""
    if d < 2:
        raise ParameterError("cluster_outlier needs d >= 2")
    _check_range(d - 1, cluster_lo, cluster_hi)
    outlier = mpf(outlier)
    if cluster_lo <= outlier <= cluster_hi:
        raise ParameterError("outlier must lie outside the cluster interval")
    pts = [outlier] + uniform(d - 1, cluster_lo, cluster_hi)
    return _checked_ascending(sorted(pts))


def indefinite_symmetric(d, inner, outer):
    """Spectrum symmetric about 0, geometrically spaced on each side."""
    if d < 2 or d % 2:
        raise ParameterError("indefinite_symmetric needs even d >= 2")
    if not 0 < inner < outer:
        raise ParameterError("need 0 < inner < outer")
    pos = geometric(d // 2, inner, outer)
    return [-x for x in reversed(pos)] + pos


def two_clusters(d1, c1, width1, d2, c2, width2):
    if d1 < 1 or d2 < 1:
        raise ParameterError("both clusters need at least one eigenvalue")
    a = uniform(d1, mpf(c1) - mpf(width1), mpf(c1) + mpf(width1)) if d1 > 1 else [mpf(c1)]
    b = uniform(d2, mpf(c2) - mpf(width2), mpf(c2) + mpf(width2)) if d2 > 1 else [mpf(c2)]
    return _checked_ascending(sorted(a + b))


def tight_cluster(d, kappa):
    """lambda_1 = 1 with the rest evenly spaced on [0.99995*kappa, kappa]."""
    if d < 2:
        raise ParameterError("tight_cluster needs d >= 2")
    kappa = mpf(kappa)
    if not kappa > 1:
        raise ParameterError("tight_cluster needs kappa > 1")
    return _checked_ascending([mpf(1)] + uniform(d - 1, mpf("0.99995") * kappa, kappa))


SPECTRUM_KINDS = {
    "uniform": uniform,
    "geometric": geometric,
    "cluster_outlier": cluster_outlier,
    "indefinite_symmetric": indefinite_symmetric,
    "two_clusters": two_clusters,
    "tight_cluster": tight_cluster,
}


def spectrum(kind, precision=None, **params):
    """Named spectrum constructor, addressable from harness configs."""
    if kind not in SPECTRUM_KINDS:
        raise ParameterError(f"unknown spectrum kind {kind!r}; known: {sorted(SPECTRUM_KINDS)}")
    precision = precision or Precision()
    with precision.ctx():
        return SPECTRUM_KINDS[kind](**params)


def _check_range(d, lo, hi):
    if d < 1:
        raise ParameterError(f"need d >= 1, got {d}")
    if d > 1 and not mpf(lo) < mpf(hi):
        raise ParameterError(f"need lo < hi, got [{lo}, {hi}]")


def _checked_ascending(pts):
    for a, b in zip(pts, pts[1:]):
        if not a < b:
            raise ParameterError("constructed spectrum has nondistinct eigenvalues")
    return pts


def ones_b(d):
    """Coefficients of the sum of all eigenvectors."""
    if d < 1:
        raise ParameterError(f"need d >= 1, got {d}")
    return [mpf(1)] * d


# --- minimax-hard instances ---------------------------------------------------

@dataclass(frozen=True)
class HardInstance:
    """Instance on which the 2-norm optimal Krylov error equals the minimax error."""

    instance: ProblemInstance
    epsilon: object
    equioscillation_points: tuple
    best_poly: object
    degenerate: bool = False


def hard_instance(f, interval, k, precision=None):
    """Dimension-(k+1) instance whose optimal degree-<k error equals minimax.

    The eigenvalues are the k+1 equioscillation points of the best
    degree-(k-1) approximation and the squared coefficients come from the
    closed-form solution of the alternation linear system.
    """
    from . import approx

    precision = precision or Precision()
    if k < 1:
        raise ParameterError(f"need k >= 1, got {k}")
    with precision.ctx():
        best = approx.remez_best_poly(f, interval, k - 1, precision=precision)
        return _hard_from_alternation(best, precision)


def discrete_hard_instance(f, points, k, precision=None):
    """Same construction on the active set of a discrete best approximation."""
    from . import approx

    precision = precision or Precision()
    if k < 1:
        raise ParameterError(f"need k >= 1, got {k}")
    with precision.ctx():
        best = approx.discrete_best_poly(f, points, k - 1, precision=precision)
        return _hard_from_alternation(best, precision)


def _hard_from_alternation(best, precision):
    pts = [mpf(x) for x in best.alt_points]
    n = len(pts)
    products = []
    for ell in range(n):
        prod = mpf(1)
        for i in range(n):
            if i == ell:
                continue
            for j in range(i + 1, n):
                if j == ell:
                    continue
                prod *= pts[j] - pts[i]
        products.append(prod)
    total = mpf(0)
    for p in products:
        if not p > 0:
            raise ParameterError(
                "internal error: alternation weights must be positive"
            )
        total += p
    b = [gmpy2.sqrt(p / total) for p in products]
    inst = ProblemInstance(tuple(pts), tuple(b), precision)
    degenerate = abs(best.error) <= precision.tol
    return HardInstance(
        instance=inst,
        epsilon=abs(best.error),
        equioscillation_points=tuple(pts),
        best_poly=best.poly,
        degenerate=degenerate,
    )


# --- adversarial right-hand-side search ---------------------------------------

def adversarial_b(lam, f, k_max, budget, seed, precision=None, method="lanczos_fa"):
    """Search for coefficients maximizing the worst per-iteration optimality ratio.

    Multi-start random unit vectors followed by coordinate-wise
    multiplicative hill climbing (factors 2 and 1/2), under a total budget
    of objective evaluations beyond the all-ones baseline.  Deterministic
    for a fixed seed.
    """
    from . import optimal

    precision = precision or Precision()
    if budget < 1:
        raise ParameterError(f"budget must be >= 1, got {budget}")
    d = len(lam)
    rng = random.Random(seed)

    with precision.ctx():
        lam = [mpf(x) for x in lam]
        for x in lam:
            try:
                funcs.eval_scalar(f, x)
            except DomainError:
                raise

        def objective(w):
            inst = ProblemInstance(tuple(lam), tuple(w), precision)
            ratios = optimal.optimality_ratio_series(inst, f, k_max, method=method)
            worst = None
            worst_k = 0
            for k, r in enumerate(ratios, start=1):
                if isinstance(r, str):
                    continue
                if worst is None or r > worst:
                    worst, worst_k = r, k
            if worst is None:
                return mpf(0), 0
            return worst, worst_k

        def normalize(w):
            s = mpf(0)
            for x in w:
                s += x * x
            nrm = gmpy2.sqrt(s)
            return [x / nrm for x in w]

        best_w = normalize(ones_b(d))
        best_ratio, best_k = objective(best_w)

        used = 0
        restarts = min(budget, max(1, budget // 4))
        for _ in range(restarts):
            cand = normalize([mpf(rng.gauss(0.0, 1.0)) for _ in range(d)])
            ratio, at_k = objective(cand)
            used += 1
            if ratio > best_ratio:
                best_w, best_ratio, best_k = cand, ratio, at_k

        coords = list(range(d))
        while used < budget:
            rng.shuffle(coords)
            improved = False
            for i in coords:
                if used >= budget:
                    break
                for factor in (2, gmpy2.mpfr("0.5")):
                    if used >= budget:
                        break
                    cand = list(best_w)
                    cand[i] = cand[i] * factor if cand[i] != 0 else mpf(rng.gauss(0.0, 1.0))
                    cand = normalize(cand)
                    ratio, at_k = objective(cand)
                    used += 1
                    if ratio > best_ratio:
                        best_w, best_ratio, best_k = cand, ratio, at_k
                        improved = True
                        break
            if not improved and used >= budget:
                break

        return best_w, best_ratio, best_k

"""Scalar functions applied to matrices, and rational functions with real poles.

A ``RationalFunction`` is n(x)/m(x) with a monic denominator built from its
poles.  Conjugate complex pole pairs are carried separately as ``(re, im)``
tuples; everything that relies on real poles (partial denominators, shifted
positive-definite weights) rejects functions that have complex pairs.
"""

from __future__ import annotations

import ast
from dataclasses import dataclass

import gmpy2

from .errors import DomainError, ParameterError
from .precision import mpf


def horner(coeffs, x):
    """Evaluate a polynomial with ascending coefficients."""
    acc = mpf(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


@dataclass(frozen=True)
class RationalFunction:
    numer: tuple
    poles: tuple
    cpole_pairs: tuple = ()

    def __post_init__(self):
        numer = tuple(mpf(c) for c in self.numer)
        poles = tuple(mpf(z) for z in self.poles)
        pairs = tuple((mpf(a), mpf(b)) for a, b in self.cpole_pairs)
        if not numer:
            raise ParameterError("numerator must have at least one coefficient")
        for a, b in pairs:
            if not b > 0:
                raise ParameterError("complex pole pairs must have positive imaginary part")
        object.__setattr__(self, "numer", numer)
        object.__setattr__(self, "poles", poles)
        object.__setattr__(self, "cpole_pairs", pairs)

    @property
    def q(self):
        """Number of real poles (with multiplicity)."""
        return len(self.poles)

    @property
    def denom_degree(self):
        return len(self.poles) + 2 * len(self.cpole_pairs)

    @property
    def numer_degree(self):
        deg = len(self.numer) - 1
        while deg > 0 and self.numer[deg] == 0:
            deg -= 1
        return deg

    def has_complex_poles(self):
        return bool(self.cpole_pairs)

    def require_real_poles(self):
        if self.cpole_pairs:
            raise ParameterError("operation requires a rational function with real poles only")

    def denom_eval(self, x):
        m = mpf(1)
        for z in self.poles:
            m *= x - z
        for a, b in self.cpole_pairs:
            m *= (x - a) * (x - a) + b * b
        return m

    def denom_range_eval(self, x, i, j):
        """Product of (x - z_t) over real poles i <= t < j (0-indexed)."""
        self.require_real_poles()
        m = mpf(1)
        for t in range(i, j):
            m *= x - self.poles[t]
        return m

    def partial(self, j):
        """n(x) divided by the first j real pole factors."""
        self.require_real_poles()
        if not 0 <= j <= self.q:
            raise ParameterError(f"partial index {j} out of range 0..{self.q}")
        return RationalFunction(self.numer, self.poles[:j])

    def eval(self, x):
        x = mpf(x)
        m = self.denom_eval(x)
        if m == 0:
            raise DomainError(f"rational function evaluated at a pole: {x}")
        return horner(self.numer, x) / m

    def compose_negate(self):
        """The rational function x -> r(-x), with the denominator kept monic."""
        numer = tuple(c if i % 2 == 0 else -c for i, c in enumerate(self.numer))
        sign = -1 if self.denom_degree % 2 else 1
        numer = tuple(sign * c for c in numer)
        return RationalFunction(
            numer,
            tuple(-z for z in self.poles),
            tuple((-a, b) for a, b in self.cpole_pairs),
        )


# --- scalar function variants -------------------------------------------------

@dataclass(frozen=True)
class Polynomial:
    coeffs: tuple

    def __post_init__(self):
        coeffs = tuple(mpf(c) for c in self.coeffs)
        if not coeffs:
            raise ParameterError("polynomial needs at least one coefficient")
        for c in coeffs:
            if not gmpy2.is_finite(c):
                raise ParameterError("polynomial coefficients must be finite")
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def degree(self):
        deg = len(self.coeffs) - 1
        while deg > 0 and self.coeffs[deg] == 0:
            deg -= 1
        return deg


@dataclass(frozen=True)
class Rational:
    rf: RationalFunction


@dataclass(frozen=True)
class Sqrt:
    pass


@dataclass(frozen=True)
class InvSqrt:
    pass


@dataclass(frozen=True)
class InvPower:
    q: int

    def __post_init__(self):
        if self.q < 1:
            raise ParameterError(f"inverse power must be >= 1, got {self.q}")


@dataclass(frozen=True)
class ExpScaled:
    t: float = 1.0
    sign: int = -1

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ParameterError("sign must be +1 or -1")


@dataclass(frozen=True)
class Sign:
    pass


def eval_scalar(f, x):
    """Evaluate a scalar function variant at x in working precision."""
    x = mpf(x)
    if isinstance(f, Polynomial):
        return horner(f.coeffs, x)
    if isinstance(f, Rational):
        return f.rf.eval(x)
    if isinstance(f, Sqrt):
        if not x > 0:
            raise DomainError(f"sqrt requires x > 0, got {x}")
        return gmpy2.sqrt(x)
    if isinstance(f, InvSqrt):
        if not x > 0:
            raise DomainError(f"1/sqrt requires x > 0, got {x}")
        return 1 / gmpy2.sqrt(x)
    if isinstance(f, InvPower):
        if x == 0:
            raise DomainError(f"x^(-{f.q}) requires x != 0")
        return x ** (-f.q)
    if isinstance(f, ExpScaled):
        return gmpy2.exp(f.sign * mpf(f.t) * x)
    if isinstance(f, Sign):
        if x == 0:
            raise DomainError("sign is undefined at 0")
        return mpf(1) if x > 0 else mpf(-1)
    raise ParameterError(f"unknown scalar function {f!r}")


def as_rational(f):
    """Rational form of f when it has one, else None."""
    if isinstance(f, Rational):
        return f.rf
    if isinstance(f, Polynomial):
        return RationalFunction(f.coeffs, ())
    if isinstance(f, InvPower):
        return RationalFunction((1,), (0,) * f.q)
    return None


def is_continuous_on(f, lo, hi):
    """Whether f is continuous on [lo, hi] (poles and sign jumps checked)."""
    rf = as_rational(f)
    if rf is not None:
        return all(not lo <= z <= hi for z in rf.poles)
    if isinstance(f, Sign):
        return not lo <= 0 <= hi
    if isinstance(f, (Sqrt, InvSqrt)):
        return lo > 0
    return True


# --- canonical textual form ---------------------------------------------------

def format_function(f):
    if isinstance(f, Polynomial):
        return "poly:" + _fmt_list(f.coeffs)
    if isinstance(f, Rational):
        rf = f.rf
        text = f"rational:numer={_fmt_list(rf.numer)};poles={_fmt_list(rf.poles)}"
        if rf.cpole_pairs:
            text += ";cpoles=" + _fmt_list([[a, b] for a, b in rf.cpole_pairs])
        return text
    if isinstance(f, Sqrt):
        return "sqrt"
    if isinstance(f, InvSqrt):
        return "inv_sqrt"
    if isinstance(f, InvPower):
        return f"inv_power:{f.q}"
    if isinstance(f, ExpScaled):
        return f"exp:t={float(f.t)},sign={f.sign:+d}"
    if isinstance(f, Sign):
        return "sign"
    raise ParameterError(f"unknown scalar function {f!r}")


def _fmt_list(values):
    def fmt(v):
        if isinstance(v, (list, tuple)):
            return "[" + ",".join(fmt(x) for x in v) + "]"
        return repr(float(v))

    return "[" + ",".join(fmt(v) for v in values) + "]"


def parse_function(text):
    """Parse the canonical textual form, e.g. ``inv_power:4`` or ``sqrt``."""
    text = text.strip()
    if text == "sqrt":
        return Sqrt()
    if text == "inv_sqrt":
        return InvSqrt()
    if text == "sign":
        return Sign()
    if text.startswith("inv_power:"):
        return InvPower(int(text.split(":", 1)[1]))
    if text.startswith("poly:"):
        return Polynomial(tuple(_parse_list(text.split(":", 1)[1])))
    if text.startswith("exp:"):
        fields = dict(part.split("=") for part in text.split(":", 1)[1].split(","))
        return ExpScaled(t=float(fields.get("t", 1.0)), sign=int(fields.get("sign", -1)))
    if text.startswith("rational:"):
        fields = dict(part.split("=", 1) for part in text.split(":", 1)[1].split(";"))
        if "numer" not in fields or "poles" not in fields:
            raise ParameterError(f"rational spec needs numer= and poles=: {text!r}")
        pairs = _parse_list(fields["cpoles"]) if "cpoles" in fields else ()
        return Rational(
            RationalFunction(
                tuple(_parse_list(fields["numer"])),
                tuple(_parse_list(fields["poles"])),
                tuple(tuple(p) for p in pairs),
            )
        )
    raise ParameterError(f"cannot parse scalar function spec {text!r}")


def _parse_list(text):
    try:
        value = ast.literal_eval(text)
    except (ValueError, SyntaxError) as exc:
        raise ParameterError(f"cannot parse list {text!r}") from exc
    if not isinstance(value, (list, tuple)):
        raise ParameterError(f"expected a list, got {text!r}")
    return list(value)

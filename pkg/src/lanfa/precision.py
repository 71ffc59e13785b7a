"""Working-precision configuration built on gmpy2's MPFR contexts.

All numerical code in this package runs inside an explicit precision
context.  Values are ordinary ``gmpy2.mpfr`` numbers; the active context
determines the significand width of every operation.
"""

from __future__ import annotations

import os
from contextlib import contextmanager
from dataclasses import dataclass, field

import gmpy2

from .errors import ParameterError

ENV_BITS = "LANFA_PRECISION_BITS"
DEFAULT_BITS = 256


def default_bits() -> int:
    """Default significand bits, overridable via LANFA_PRECISION_BITS."""
    raw = os.environ.get(ENV_BITS)
    if raw is None:
        return DEFAULT_BITS
    try:
        bits = int(raw)
    except ValueError as exc:
        raise ParameterError(f"{ENV_BITS} must be an integer, got {raw!r}") from exc
    return bits


@dataclass(frozen=True)
class Precision:
    """Significand width of the working arithmetic plus a check tolerance.

    ``tol`` defaults to 2**(-bits/2): identities that hold exactly in real
    arithmetic are asserted to half the working precision, leaving ample
    headroom for rounding.
    """

    bits: int = field(default_factory=default_bits)
    tol_bits: int | None = None

    def __post_init__(self):
        if self.bits < 64:
            raise ParameterError(f"precision must be at least 64 bits, got {self.bits}")
        if self.tol_bits is not None and self.tol_bits <= 0:
            raise ParameterError("tol_bits must be positive")

    @property
    def tol(self):
        """Acceptance tolerance as an mpfr in the current context."""
        n = self.tol_bits if self.tol_bits is not None else self.bits // 2
        return gmpy2.exp2(-n)

    @contextmanager
    def ctx(self):
        """Activate MPFR arithmetic at this precision."""
        old = gmpy2.get_context()
        gmpy2.set_context(gmpy2.context(precision=self.bits))
        try:
            yield
        finally:
            gmpy2.set_context(old)


def mpf(x):
    """Coerce to mpfr in the current context (strings parsed exactly)."""
    return gmpy2.mpfr(x)

import gmpy2
import pytest

from lanfa import Precision, ProblemInstance, mpf, ones_b, spectrum


@pytest.fixture
def prec():
    return Precision()


@pytest.fixture
def ctx(prec):
    with prec.ctx():
        yield prec


def make_instance(lam, w, prec=None):
    prec = prec or Precision()
    with prec.ctx():
        return ProblemInstance(tuple(mpf(x) for x in lam), tuple(mpf(x) for x in w), prec)


def uniform_instance(d, lo, hi, prec=None):
    prec = prec or Precision()
    lam = spectrum("uniform", prec, d=d, lo=lo, hi=hi)
    with prec.ctx():
        return ProblemInstance(tuple(lam), ones_b(d), prec)

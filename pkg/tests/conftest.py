import math

import pytest

from rffso.analytics import FsoHop, LinkConfig
from rffso.fso_channel import DetectionParams, MalagaParams, PointingPathParams
from rffso.hardware import Aggregate, Ideal
from rffso.rf_channel import RfHopParams


def db(x):
    return 10.0 ** (x / 10.0)


def make_cfg(snr_db=20.0, r=2, xi=0.9, hw=None, protocol="AF", mu1_db=None, **malaga):
    mu = db(snr_db)
    mu1 = mu if mu1_db is None else db(mu1_db)
    fso = FsoHop(MalagaParams(**malaga), PointingPathParams(xi=xi), DetectionParams(r, mu))
    return LinkConfig(RfHopParams(mu1), fso, Ideal() if hw is None else hw, protocol)


AGG = Aggregate(0.3, 0.3)
GAMMA_TH = db(7.0)


@pytest.fixture
def cfg_factory():
    return make_cfg


def rel(a, b):
    return abs(a - b) / max(abs(b), 1e-300)


def isclose(a, b, rtol):
    return math.isclose(a, b, rel_tol=rtol)

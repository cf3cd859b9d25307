"""End-to-end SNDR for fixed-gain AF and DF relaying."""

from __future__ import annotations

import enum
import math

import numpy as np

from .errors import UnsupportedCombinationError
from .hardware import Aggregate, HardwareProfile, Hpa, LinkConstants


class Protocol(str, enum.Enum):
    AF = "AF"
    DF = "DF"


def _scalar(x):
    return float(x) if np.ndim(x) == 0 else x


def combine(protocol, hw: HardwareProfile, lc: LinkConstants, gamma1, gamma2):
    """Combined SNDR; accepts scalars or broadcastable arrays."""
    protocol = Protocol(protocol)
    g1 = np.asarray(gamma1, dtype=float)
    g2 = np.asarray(gamma2, dtype=float)
    if protocol is Protocol.AF:
        if isinstance(hw, Aggregate):
            den = hw.delta * g1 * g2 + (1.0 + hw.kappa2**2) * g2 + lc.C
        elif isinstance(hw, Hpa):
            den = lc.kappa * g2 + lc.C
        else:
            den = g2 + lc.C
        return _scalar(g1 * g2 / den)
    if isinstance(hw, Hpa):
        raise UnsupportedCombinationError("the HPA model is defined for AF relaying only")
    if isinstance(hw, Aggregate):
        a = g1 / (hw.kappa1**2 * g1 + 1.0)
        b = g2 / (hw.kappa2**2 * g2 + 1.0)
        return _scalar(np.minimum(a, b))
    return _scalar(np.minimum(g1, g2))


def ceiling(protocol, hw: HardwareProfile):
    """Asymptotic SNDR ceiling; ``inf`` for ideal hardware."""
    protocol = Protocol(protocol)
    if isinstance(hw, Aggregate):
        if protocol is Protocol.AF:
            d = hw.delta
        else:
            d = max(hw.kappa1**2, hw.kappa2**2)
        return math.inf if d == 0 else 1.0 / d
    if isinstance(hw, Hpa) and protocol is Protocol.DF:
        raise UnsupportedCombinationError("the HPA model is defined for AF relaying only")
    return math.inf

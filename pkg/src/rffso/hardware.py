"""Hardware-impairment profiles and the relay's fixed-gain constant.

HPA model
---------
The relay amplifier sees a zero-mean complex Gaussian input normalised to
unit power, so its envelope ``u`` is Rayleigh with density ``2u exp(-u^2)``.
With saturation amplitude ``nu = sqrt(IBO)`` the AM/AM characteristics are

* SEL:  ``F(u) = min(u, nu)``
* TWTA: ``F(u) = 2 nu^2 u / (nu^2 + u^2)`` (Saleh form, peak ``nu`` at ``u = nu``;
  the AM/PM part is ignored)

The Bussgang decomposition gives the linear gain ``eps = E[u F(u)]`` and the
output power ``iota = E[F(u)^2]``; the distortion power is
``sigma_tau2 = iota - eps^2``. Referred to the destination noise through the
fixed gain ``G^2 sigma_0^2 = 1 / (E[gamma1] + 1)`` this yields
``kappa = 1 + sigma_tau2 / eps^2 * (E[gamma1] + 1)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

from scipy import integrate
from scipy.special import erfc

from .errors import DomainError
from .rf_channel import RfHopParams, mean_gamma1

HPA_KINDS = ("SEL", "TWTA")


@dataclass(frozen=True)
class Ideal:
    pass


@dataclass(frozen=True)
class Aggregate:
    kappa1: float = 0.3
    kappa2: float = 0.3

    def __post_init__(self):
        if self.kappa1 < 0 or self.kappa2 < 0:
            raise DomainError("impairment levels must be nonnegative")

    @property
    def delta(self):
        return aggregate_delta(self.kappa1, self.kappa2)


@dataclass(frozen=True)
class Hpa:
    kind: str = "SEL"
    ibo_db: float = 5.0

    def __post_init__(self):
        kind = self.kind.upper()
        if kind not in HPA_KINDS:
            raise DomainError(f"unknown HPA kind {self.kind!r}; expected one of {HPA_KINDS}")
        object.__setattr__(self, "kind", kind)


HardwareProfile = Union[Ideal, Aggregate, Hpa]


@dataclass(frozen=True)
class HpaParams:
    epsilon: float
    sigma_tau2: float
    kappa: float
    iota: float

    @property
    def sdr(self):
        """Signal-to-distortion ratio ``eps^2 / sigma_tau2`` at the amplifier output."""
        return math.inf if self.sigma_tau2 == 0 else self.epsilon**2 / self.sigma_tau2


@dataclass(frozen=True)
class LinkConstants:
    C: float
    Egamma1: float
    kappa: float = 1.0  # HPA distortion factor; 1 for the other profiles


def aggregate_delta(kappa1, kappa2):
    if kappa1 < 0 or kappa2 < 0:
        raise DomainError("impairment levels must be nonnegative")
    k1, k2 = kappa1 * kappa1, kappa2 * kappa2
    return k1 + k2 + k1 * k2


def _bussgang(kind, nu):
    if kind == "SEL":
        e = math.exp(-nu * nu)
        eps = 1.0 - e + 0.5 * math.sqrt(math.pi) * nu * erfc(nu)
        iota = 1.0 - e
        return eps, iota

    def amam(u):
        return 2.0 * nu * nu * u / (nu * nu + u * u)

    def weight(u):
        return 2.0 * u * math.exp(-u * u)

    opts = dict(epsabs=0.0, epsrel=1e-12, limit=200, points=[nu])
    eps = integrate.quad(lambda u: u * amam(u) * weight(u), 0.0, max(12.0, 4 * nu), **opts)[0]
    iota = integrate.quad(lambda u: amam(u) ** 2 * weight(u), 0.0, max(12.0, 4 * nu), **opts)[0]
    return eps, iota


def hpa_params(kind, ibo_db, mean_gamma1=0.0) -> HpaParams:
    """Bussgang gain, distortion power, distortion factor and clipping factor.

    ``mean_gamma1`` is the mean first-hop SNR that fixes the relay gain; the
    default 0 gives the amplifier-only distortion factor ``1 + sigma_tau2/eps^2``.
    """
    kind = kind.upper()
    if kind not in HPA_KINDS:
        raise DomainError(f"unknown HPA kind {kind!r}")
    nu = math.sqrt(10.0 ** (ibo_db / 10.0))
    eps, iota = _bussgang(kind, nu)
    sigma_tau2 = max(iota - eps * eps, 0.0)
    kappa = 1.0 + sigma_tau2 / (eps * eps) * (mean_gamma1 + 1.0)
    return HpaParams(float(eps), float(sigma_tau2), float(kappa), float(iota))


def link_constant(p: RfHopParams, hw: HardwareProfile) -> LinkConstants:
    eg = mean_gamma1(p)
    if isinstance(hw, Aggregate):
        return LinkConstants(eg * (1.0 + hw.kappa1**2) + 1.0, eg)
    if isinstance(hw, Hpa):
        kappa = hpa_params(hw.kind, hw.ibo_db, eg).kappa
        return LinkConstants(eg + kappa, eg, kappa)
    return LinkConstants(eg + 1.0, eg)

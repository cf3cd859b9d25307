"""Second-hop statistics: Malaga turbulence, Rayleigh-jitter pointing error, path loss.

The optical SNR is normalised so that ``gamma2 = mu_r * (I / E[I])**r``; path
loss and the pointing-error gain ``A0`` therefore only rescale ``E[I]`` and
drop out of every SNR distribution. ``r = 1`` is heterodyne detection,
``r = 2`` intensity modulation with direct detection.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import comb, gammaln

from .errors import DegenerateParametersError, DomainError
from .specfun import MeijerGSpec, bessel_k, delta_vec, meijer_g


@dataclass(frozen=True)
class MalagaParams:
    alpha: float = 4.2
    beta: int = 5
    rho: float = 0.6
    b0: float = 0.596
    Omega: float = 1.32
    dphi: float = math.pi / 2

    def __post_init__(self):
        if not (self.alpha > 0 and self.b0 > 0 and self.Omega >= 0):
            raise DomainError("Malaga parameters need alpha > 0, b0 > 0, Omega >= 0")
        if int(self.beta) != self.beta or self.beta < 1:
            raise DomainError(f"beta must be a positive integer, got {self.beta}")
        if not 0.0 <= self.rho <= 1.0:
            raise DomainError(f"rho must lie in [0, 1], got {self.rho}")
        object.__setattr__(self, "beta", int(self.beta))


@dataclass(frozen=True)
class MalagaDerived:
    params: MalagaParams
    g: float
    OmegaP: float
    A: float
    a: tuple
    b: tuple

    @property
    def alpha(self):
        return self.params.alpha

    @property
    def beta(self):
        return self.params.beta

    @property
    def mean_Ia(self):
        return self.g + self.OmegaP

    def B(self, xi):
        al, be = self.alpha, self.beta
        xi2 = xi * xi
        return xi2 * al * be * (self.g + self.OmegaP) / ((xi2 + 1.0) * (self.g * be + self.OmegaP))

    def c(self, r):
        return tuple(bn * r ** (self.alpha + n - 1) for n, bn in enumerate(self.b, start=1))

    def D(self, xi, r):
        return xi * xi * self.A / (2.0**r * (2.0 * math.pi) ** (r - 1))

    def E(self, xi, r):
        return self.B(xi) ** r / r ** (2 * r)


@dataclass(frozen=True)
class PointingPathParams:
    xi: float = 0.9
    A0: float = 1.0
    sigma_atten: float = 0.0
    L: float = 1.0

    def __post_init__(self):
        if not self.xi > 0:
            raise DomainError(f"xi must be positive, got {self.xi}")
        if not 0.0 < self.A0 <= 1.0:
            raise DomainError(f"A0 must lie in (0, 1], got {self.A0}")
        if not (self.L > 0 and self.sigma_atten >= 0):
            raise DomainError("need L > 0 and sigma_atten >= 0")


@dataclass(frozen=True)
class DetectionParams:
    r: int = 2
    mu_r: float = 100.0

    def __post_init__(self):
        if self.r not in (1, 2):
            raise DomainError(f"r must be 1 (heterodyne) or 2 (IM/DD), got {self.r}")
        if not self.mu_r > 0:
            raise DomainError(f"mu_r must be positive, got {self.mu_r}")

    def with_mu(self, mu_r):
        return DetectionParams(self.r, mu_r)


@dataclass(frozen=True)
class GeometryParams:
    wavelength: float = 1550e-9
    w0: float = 5e-3
    F0: float = -10.0
    Cn2: float = 2.8e-14
    a_rx: float = 5e-2
    sigma_s: float = 0.3
    L: float = 1000.0


def derive_malaga(p: MalagaParams) -> MalagaDerived:
    al, be = p.alpha, p.beta
    g = 2.0 * p.b0 * (1.0 - p.rho)
    if g <= 0:
        raise DegenerateParametersError("g = 2 b0 (1 - rho) vanishes; the Malaga constant A is undefined")
    OmegaP = p.Omega + 2.0 * p.rho * p.b0 + 2.0 * math.sqrt(2.0 * p.rho * p.b0 * p.Omega) * math.cos(p.dphi)
    gbo = g * be + OmegaP
    logA = (math.log(2.0) + 0.5 * al * math.log(al) - (1.0 + 0.5 * al) * math.log(g) - gammaln(al)
            + (be + 0.5 * al) * math.log(g * be / gbo))
    A = math.exp(logA)
    a, b = [], []
    for n in range(1, be + 1):
        # exponents n/2 (not alpha/2) are what normalise the density
        an = (comb(be - 1, n - 1, exact=True) * gbo ** (1.0 - 0.5 * n) / math.factorial(n - 1)
              * (OmegaP / g) ** (n - 1) * (al / be) ** (0.5 * n))
        a.append(an)
        b.append(an * (gbo / (al * be)) ** (0.5 * (al + n)))
    return MalagaDerived(p, g, OmegaP, A, tuple(a), tuple(b))


def mixture_weights(d: MalagaDerived):
    """Weights ``w_n`` of the Gamma-product mixture ``I_a ~ sum w_n GG(alpha, n)``; they sum to 1."""
    al = d.alpha
    return np.array([d.A * bn * math.exp(gammaln(al) + gammaln(n)) / 2.0 for n, bn in enumerate(d.b, start=1)])


def pdf_Ia(d: MalagaDerived, I):
    I = np.asarray(I, dtype=float)
    if np.any(I <= 0):
        raise DomainError("pdf_Ia requires I > 0")
    al, be = d.alpha, d.beta
    arg = 2.0 * np.sqrt(al * be * I / (d.g * be + d.OmegaP))
    out = np.zeros(I.shape)
    for n, an in enumerate(d.a, start=1):
        out = out + an * I ** (0.5 * (al + n) - 1.0) * bessel_k(al - n, arg)
    out = d.A * out
    return float(out) if out.ndim == 0 else out


def _gamma2_specs(d: MalagaDerived, xi, r):
    xi2 = xi * xi
    return [
        MeijerGSpec.build(3 * r, 1, [1.0] + delta_vec(r, xi2 + 1.0),
                          delta_vec(r, xi2) + delta_vec(r, d.alpha) + delta_vec(r, float(n)) + [0.0])
        for n in range(1, d.beta + 1)
    ]


def pdf_gamma2(d: MalagaDerived, pp: PointingPathParams, det: DetectionParams, gamma):
    gam = np.asarray(gamma, dtype=float)
    if np.any(gam <= 0):
        raise DomainError("pdf_gamma2 requires gamma > 0")
    xi2 = pp.xi**2
    z = d.B(pp.xi) * (gam / det.mu_r) ** (1.0 / det.r)
    out = np.zeros(gam.shape)
    for n, bn in enumerate(d.b, start=1):
        spec = MeijerGSpec.build(3, 0, [xi2 + 1.0], [xi2, d.alpha, float(n)])
        out = out + bn * meijer_g(spec, z)
    out = xi2 * d.A / (2.0**det.r * gam) * out
    return float(out) if out.ndim == 0 else out


def cdf_gamma2(d: MalagaDerived, pp: PointingPathParams, det: DetectionParams, gamma):
    gam = np.asarray(gamma, dtype=float)
    if np.any(gam < 0):
        raise DomainError("cdf_gamma2 requires gamma >= 0")
    out = np.zeros(gam.shape)
    pos = gam > 0
    if np.any(pos):
        z = d.E(pp.xi, det.r) * gam[pos] / det.mu_r
        acc = np.zeros(z.shape)
        for cn, spec in zip(d.c(det.r), _gamma2_specs(d, pp.xi, det.r)):
            acc = acc + cn * meijer_g(spec, z)
        out[pos] = d.D(pp.xi, det.r) * acc
    out = np.clip(out, 0.0, 1.0)
    return float(out) if out.ndim == 0 else out


def moment_gamma2(d: MalagaDerived, pp: PointingPathParams, det: DetectionParams, k):
    if not k > 0:
        raise DomainError("moment order must be positive")
    r, xi2, al = det.r, pp.xi**2, d.alpha
    s = sum(bn * math.exp(gammaln(r * k + n)) for n, bn in enumerate(d.b, start=1))
    return (r * xi2 * d.A * math.exp(gammaln(r * k + al)) / (2.0**r * (k * r + xi2) * d.B(pp.xi) ** (k * r))
            * s * det.mu_r**k)


def path_loss(pp: PointingPathParams):
    return math.exp(-pp.sigma_atten * pp.L)


def pointing_gain(pp: PointingPathParams, w_Leq, R):
    R = np.asarray(R, dtype=float)
    out = pp.A0 * np.exp(-2.0 * R**2 / w_Leq**2)
    return float(out) if out.ndim == 0 else out


def derive_geometry(gp: GeometryParams):
    """Beam width at the receiver, pointing-error constants and Rytov variance."""
    if not gp.sigma_s > 0:
        raise DegenerateParametersError("jitter standard deviation sigma_s must be positive")
    if not (gp.wavelength > 0 and gp.w0 > 0 and gp.Cn2 > 0 and gp.a_rx > 0 and gp.L > 0):
        raise DomainError("geometry parameters must be positive (F0 excepted)")
    k = 2.0 * math.pi / gp.wavelength
    sigma_R2 = 1.23 * gp.Cn2 * k ** (7.0 / 6.0) * gp.L ** (11.0 / 6.0)
    theta0 = 1.0 - gp.L / gp.F0
    lam0 = 2.0 * gp.L / (k * gp.w0**2)
    w_free = gp.w0 * math.sqrt(theta0**2 + lam0**2)
    lam1 = lam0 / (theta0**2 + lam0**2)
    w_L = w_free * math.sqrt(1.0 + 1.63 * sigma_R2 ** (6.0 / 5.0) * lam1)
    v = math.sqrt(math.pi) * gp.a_rx / (math.sqrt(2.0) * w_L)
    A0 = math.erf(v) ** 2
    w_Leq2 = w_L**2 * math.sqrt(math.pi) * math.erf(v) / (2.0 * v * math.exp(-v * v))
    w_Leq = math.sqrt(w_Leq2)
    return {"w_L": w_L, "w_Leq": w_Leq, "A0": A0, "xi": w_Leq / (2.0 * gp.sigma_s), "sigma_R2": sigma_R2}

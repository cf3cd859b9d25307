"""Closed-form and semi-analytic performance metrics.

Notation follows the system model: ``mu1``/``mu_r`` are the linear average
SNRs of the RF and optical hops, ``W_k``/``lam_k`` the first-hop mixture
weights and rates (see ``rf_channel.exp_terms``), ``D c_n`` the optical CDF
coefficients and ``tau4``/``tau5`` the lower/upper Meijer-G parameter vectors

    tau4 = [Delta(r: xi^2), Delta(r: alpha), Delta(r: n), 0]
    tau5 = Delta(r: xi^2 + 1)

The end-to-end CCDF of the AF SNDR is evaluated directly as a sum of positive
Meijer-G terms, so small outage probabilities are computed as ``1 - ccdf``
only where unavoidable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from functools import cached_property

import numpy as np
from scipy.special import erfc, gammaln

from . import quadrature
from .errors import (
    AccuracyError,
    DegenerateParametersError,
    DomainError,
    UnsupportedCombinationError,
)
from .fso_channel import (
    DetectionParams,
    MalagaParams,
    PointingPathParams,
    cdf_gamma2,
    derive_malaga,
    moment_gamma2,
)
from .hardware import Aggregate, Hpa, Ideal, hpa_params, link_constant
from .rf_channel import RfHopParams, cdf_gamma1, exp_terms, mean_gamma1
from .sndr import Protocol, ceiling
from .specfun import (
    FoxH2Spec,
    MeijerGSpec,
    delta_vec,
    _slater_log_coeff,
    fox_h_bivariate,
    meijer_g,
    meijer_g_asymptotic,
)

VARPI_IMDD = math.e / (2.0 * math.pi)
_PROB_SLACK = 1e-6


@dataclass(frozen=True)
class FsoHop:
    malaga: MalagaParams = field(default_factory=MalagaParams)
    pointing: PointingPathParams = field(default_factory=PointingPathParams)
    detection: DetectionParams = field(default_factory=DetectionParams)

    @cached_property
    def derived(self):
        return derive_malaga(self.malaga)


@dataclass(frozen=True)
class LinkConfig:
    rf: RfHopParams
    fso: FsoHop
    hw: object = field(default_factory=Ideal)
    protocol: Protocol = Protocol.AF
    varpi_override: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "protocol", Protocol(self.protocol))

    @property
    def r(self):
        return self.fso.detection.r

    @property
    def varpi(self):
        if self.varpi_override is not None:
            return self.varpi_override
        return 1.0 if self.r == 1 else VARPI_IMDD

    @cached_property
    def lc(self):
        return link_constant(self.rf, self.hw)

    def with_snr(self, mu1=None, mu_r=None):
        rf = self.rf if mu1 is None else self.rf.with_mu1(mu1)
        det = self.fso.detection if mu_r is None else self.fso.detection.with_mu(mu_r)
        return replace(self, rf=rf, fso=replace(self.fso, detection=det))

    def with_hw(self, hw):
        return replace(self, hw=hw)

    def with_protocol(self, protocol):
        return replace(self, protocol=Protocol(protocol))


@dataclass(frozen=True)
class AsymptoteReport:
    diversity_gain: float
    coding_gain: float
    ceiling_sndr: float
    ceiling_capacity: float
    floor: bool = False


# ---------------------------------------------------------------------------
# parameter vectors
# ---------------------------------------------------------------------------

def _tau4(cfg, n):
    r, xi2 = cfg.r, cfg.fso.pointing.xi ** 2
    return delta_vec(r, xi2) + delta_vec(r, cfg.fso.derived.alpha) + delta_vec(r, float(n)) + [0.0]


def _tau5(cfg):
    return delta_vec(cfg.r, cfg.fso.pointing.xi ** 2 + 1.0)


def _opt_coefs(cfg):
    """``D c_n`` for n = 1..beta and ``(B/r^2)^r``."""
    d, xi, r = cfg.fso.derived, cfg.fso.pointing.xi, cfg.r
    dc = [d.D(xi, r) * cn for cn in d.c(r)]
    return dc, d.E(xi, r)


def _check_prob(p, what):
    p = np.asarray(p, dtype=float)
    if np.any(p < -_PROB_SLACK) or np.any(p > 1.0 + _PROB_SLACK) or np.any(~np.isfinite(p)):
        raise AccuracyError(f"{what}: value outside [0, 1] beyond tolerance ({np.min(p)}, {np.max(p)})")
    p = np.clip(p, 0.0, 1.0)
    return float(p) if p.ndim == 0 else p


def _as_float(v):
    v = np.asarray(v, dtype=float)
    return float(v) if v.ndim == 0 else v


def _require(cfg, protocol):
    if cfg.protocol is not Protocol(protocol):
        raise DomainError(f"operation requires protocol {protocol}, config has {cfg.protocol.value}")


# ---------------------------------------------------------------------------
# SNDR distributions
# ---------------------------------------------------------------------------

def _af_terms(cfg, x):
    """Per first-hop term: (weight, exponential rate, Meijer argument scale, valid mask)."""
    w, lam, _ = exp_terms(cfg.rf)
    _, E = _opt_coefs(cfg)
    lc = cfg.lc
    hw = cfg.hw
    if isinstance(hw, Hpa):
        den = np.ones_like(x)
        a1 = lc.kappa
    elif isinstance(hw, Aggregate):
        den = 1.0 - hw.delta * x
        a1 = 1.0 + hw.kappa2**2
    else:
        den = np.ones_like(x)
        a1 = 1.0
    valid = den > 0
    den = np.where(valid, den, 1.0)
    out = []
    for wk, lk in zip(w, lam):
        zeta1 = lk * a1 / den
        zeta2 = lk * lc.C * E / den
        out.append((wk, zeta1, zeta2))
    return out, valid


def _af_ccdf(cfg, x, g_eval=None):
    """Complementary CDF of the AF SNDR at ``x`` (array)."""
    x = np.asarray(x, dtype=float)
    flat = x.ravel()
    mu1, mu_r = cfg.rf.mu1, cfg.fso.detection.mu_r
    dc, _ = _opt_coefs(cfg)
    out = np.zeros(flat.shape)
    pos = flat > 0
    terms, valid = _af_terms(cfg, flat)
    live = pos & valid
    if np.any(live):
        xl = flat[live]
        acc = np.zeros(xl.shape)
        specs = [MeijerGSpec.build(3 * cfg.r + 1, 0, _tau5(cfg), _tau4(cfg, n))
                 for n in range(1, cfg.fso.derived.beta + 1)]
        for wk, zeta1, zeta2 in terms:
            z1 = zeta1 if np.ndim(zeta1) == 0 else zeta1[live]
            z2 = zeta2 if np.ndim(zeta2) == 0 else zeta2[live]
            arg = z2 * xl / (mu1 * mu_r)
            s = np.zeros(xl.shape)
            for dcn, spec in zip(dc, specs):
                s += dcn * (meijer_g(spec, arg) if g_eval is None else g_eval(spec, arg))
            acc += wk * np.exp(-z1 * xl / mu1) * s
        out[live] = acc
    out[~pos] = 1.0
    return out.reshape(x.shape)


def _df_ccdf(cfg, x, f2=None):
    x = np.asarray(x, dtype=float)
    hw = cfg.hw
    if isinstance(hw, Hpa):
        raise UnsupportedCombinationError("the HPA model is defined for AF relaying only")
    k1, k2 = (hw.kappa1**2, hw.kappa2**2) if isinstance(hw, Aggregate) else (0.0, 0.0)
    d1, d2 = 1.0 - k1 * x, 1.0 - k2 * x
    valid = (d1 > 0) & (d2 > 0)
    y1 = np.where(valid, x / np.where(d1 > 0, d1, 1.0), 0.0)
    y2 = np.where(valid, x / np.where(d2 > 0, d2, 1.0), 0.0)
    f1 = cdf_gamma1(cfg.rf, y1)
    if f2 is None:
        f2v = cdf_gamma2(cfg.fso.derived, cfg.fso.pointing, cfg.fso.detection, y2)
    else:
        f2v = f2(y2)
    out = (1.0 - f1) * (1.0 - f2v)
    return np.where(valid, out, 0.0)


def ccdf_sndr(cfg: LinkConfig, x):
    """Complementary CDF of the end-to-end SNDR."""
    if cfg.protocol is Protocol.AF:
        out = _af_ccdf(cfg, x)
    else:
        out = _df_ccdf(cfg, x)
    return _check_prob(out, "ccdf")


def cdf_sndr(cfg: LinkConfig, x):
    return _check_prob(1.0 - np.asarray(ccdf_sndr(cfg, x)), "cdf")


# ---------------------------------------------------------------------------
# Outage
# ---------------------------------------------------------------------------

def outage_af(cfg: LinkConfig, gamma_th):
    _require(cfg, "AF")
    return cdf_sndr(cfg, gamma_th)


def outage_df(cfg: LinkConfig, gamma_th):
    _require(cfg, "DF")
    return cdf_sndr(cfg, gamma_th)


def outage(cfg: LinkConfig, gamma_th):
    return cdf_sndr(cfg, gamma_th)


def _asym_eval(s_max):
    return lambda spec, z: meijer_g_asymptotic(spec, z, s_max=s_max)


def outage_af_asymptotic(cfg: LinkConfig, gamma_th, s_max=0.0):
    """High-SNR outage: every Meijer-G replaced by its small-argument residue sum."""
    _require(cfg, "AF")
    # a truncated expansion, not a probability: no clamping (it exceeds 1 at low SNR)
    return _as_float(1.0 - _af_ccdf(cfg, gamma_th, g_eval=_asym_eval(s_max)))


def _cdf2_asymptotic(cfg, y, s_max=0.0):
    d, det = cfg.fso.derived, cfg.fso.detection
    dc, E = _opt_coefs(cfg)
    y = np.asarray(y, dtype=float)
    out = np.zeros(y.shape)
    pos = y > 0
    for n, dcn in enumerate(dc, start=1):
        spec = MeijerGSpec.build(3 * cfg.r, 1, [1.0] + _tau5(cfg), _tau4(cfg, n))
        out[pos] += dcn * meijer_g_asymptotic(spec, E * y[pos] / det.mu_r, s_max=s_max)
    return out


def outage_df_asymptotic(cfg: LinkConfig, gamma_th, s_max=0.0):
    _require(cfg, "DF")
    return _as_float(1.0 - _df_ccdf(cfg, gamma_th, f2=lambda y: _cdf2_asymptotic(cfg, y, s_max)))


# ---------------------------------------------------------------------------
# Symbol error probability
# ---------------------------------------------------------------------------

def _upper_limit(cfg):
    if cfg.protocol is Protocol.AF and isinstance(cfg.hw, Hpa):
        return math.inf
    return ceiling(cfg.protocol, cfg.hw)


def sep_numeric(cfg: LinkConfig, c=2.0, *, cdf=None):
    """``E[Q(sqrt(c gamma))]`` from the SNDR CDF, with ``gamma = u^2``."""
    if not c > 0:
        raise DomainError("modulation constant c must be positive")
    F = cdf if cdf is not None else (lambda g: 1.0 - np.asarray(ccdf_sndr(cfg, g)))
    U = _upper_limit(cfg)
    u_cut = math.sqrt(2.0 * 45.0 / c)  # exp(-c u^2/2) < 1e-19 beyond
    u_hi = min(math.sqrt(U), u_cut) if math.isfinite(U) else u_cut
    # analytic tail: F = 1 beyond u_hi (exact past the ceiling, negligible weight otherwise)
    tail = 0.5 * erfc(math.sqrt(c / 2.0) * u_hi)
    bps = [u_hi * 2.0**-j for j in range(1, 40)]

    def f(u):
        return 2.0 * np.exp(-0.5 * c * u * u) * F(u * u)

    val, _ = quadrature.gauss_kronrod(f, 0.0, u_hi, rtol=1e-9, atol=1e-15, breakpoints=bps, max_panels=20000)
    return _check_prob(math.sqrt(c / (8.0 * math.pi)) * val + tail, "SEP")


def sep_af_ideal_closed(cfg: LinkConfig, c=2.0, *, g_eval=None, clamp=True):
    _require(cfg, "AF")
    if not isinstance(cfg.hw, Ideal):
        raise DomainError("closed-form SEP applies to ideal hardware")
    mu1, mu_r = cfg.rf.mu1, cfg.fso.detection.mu_r
    w, lam, _ = exp_terms(cfg.rf)
    dc, E = _opt_coefs(cfg)
    C = cfg.lc.C
    total = 0.0
    for wk, lk in zip(w, lam):
        zeta1, zeta2 = lk, lk * C * E
        q = c * mu1 + 2.0 * zeta1
        arg = 2.0 * zeta2 / (q * mu_r)
        s = 0.0
        for n, dcn in enumerate(dc, start=1):
            spec = MeijerGSpec.build(3 * cfg.r + 1, 1, [0.5] + _tau5(cfg), _tau4(cfg, n))
            s += dcn * (meijer_g(spec, arg) if g_eval is None else g_eval(spec, arg))
        total += wk * math.sqrt(2.0 * mu1 / q) * s
    val = 0.5 - math.sqrt(c / (8.0 * math.pi)) * total
    return _check_prob(val, "SEP") if clamp else val


def sep_af_ideal_asymptotic(cfg: LinkConfig, c=2.0, s_max=0.0):
    return sep_af_ideal_closed(cfg, c, g_eval=_asym_eval(s_max), clamp=False)


def _leading_cdf2(cfg):
    """Exponent and coefficient of ``F_gamma2(g) ~ a (g/mu_r)^p`` as ``g -> 0``."""
    dc, E = _opt_coefs(cfg)
    best = {}
    for n, dcn in enumerate(dc, start=1):
        spec = MeijerGSpec.build(3 * cfg.r, 1, [1.0] + _tau5(cfg), _tau4(cfg, n))
        poles = spec.b[: spec.m]
        p = min(poles)
        if sum(abs(b - p) < 1e-9 for b in poles) > 1:
            raise DegenerateParametersError("leading pole of the optical CDF is not simple")
        h = poles.index(p)
        logc, sign = _slater_log_coeff(spec, h, 0)
        coef = 0.0 if logc is None else sign * math.exp(logc) * dcn * E**p
        best.setdefault(round(p, 12), 0.0)
        best[round(p, 12)] += coef
    p = min(best)
    return p, best[p]


def sep_df_high_snr(cfg: LinkConfig, c=2.0):
    """Diversity gain, coding gain and the high-SNR SEP law ``(G_c mu)^-G_d``.

    The gains are defined with ``mu1 = mu_r = mu``. Impaired hardware gives an
    error floor (``G_d = 0``).
    """
    if not isinstance(cfg.hw, Ideal):
        return {"Gd": 0.0, "Gc": math.nan, "floor": True, "sep": None}
    w, lam, _ = exp_terms(cfg.rf)
    a1 = float(np.sum(w * lam))  # F1(g) ~ a1 g/mu1
    p2, a2 = _leading_cdf2(cfg)
    gd = min(1.0, p2)
    coef = (a1 if abs(gd - 1.0) < 1e-12 else 0.0) + (a2 if abs(p2 - gd) < 1e-12 else 0.0)
    # SEP ~ coef 2^G Gamma(G + 1/2) / (2 sqrt(pi) c^G) mu^-G
    k = coef * 2.0**gd * math.exp(gammaln(gd + 0.5)) / (2.0 * math.sqrt(math.pi))
    gc = c * k ** (-1.0 / gd)

    def sep(mu):
        return (gc * np.asarray(mu, dtype=float)) ** (-gd)

    return {"Gd": gd, "Gc": gc, "floor": False, "sep": sep, "F_coef": coef}


def diversity_gain(cfg: LinkConfig):
    return sep_df_high_snr(cfg)["Gd"]


# ---------------------------------------------------------------------------
# Ergodic capacity
# ---------------------------------------------------------------------------

def _ec_from_ccdf(ccdf, varpi, upper, scale):
    """``varpi/ln2 int_0^upper ccdf(g) / (1 + varpi g) dg`` on a log grid."""
    lo = 1e-12 * scale
    if math.isfinite(upper):
        hi = upper
    else:
        hi = scale
        while float(np.asarray(ccdf(np.array([hi])))[0]) > 1e-17:
            hi *= 4.0
            if hi > 1e30 * scale:
                raise AccuracyError("CCDF does not decay")

    def f(g):
        return np.asarray(ccdf(g), dtype=float) / (1.0 + varpi * g)

    val, _ = quadrature.log_grid_integral(f, lo, hi, rtol=1e-9, atol=1e-14, max_panels=20000)
    # below lo the CCDF is 1
    val += math.log1p(varpi * lo) / varpi
    return varpi / math.log(2.0) * val


def ec_numeric(cfg: LinkConfig):
    U = _upper_limit(cfg)
    scale = max(cfg.rf.mu1, cfg.fso.detection.mu_r, 1.0)
    return _ec_from_ccdf(lambda g: ccdf_sndr(cfg, g), cfg.varpi, U, scale)


def _jensen_term(cfg):
    """``J = E[gamma1 gamma2 / ((1 + kappa2^2) gamma2 + C)]``."""
    hw = cfg.hw
    k2 = hw.kappa2**2 if isinstance(hw, Aggregate) else 0.0
    dc, E = _opt_coefs(cfg)
    lc = cfg.lc
    arg = E * lc.C / ((1.0 + k2) * cfg.fso.detection.mu_r)
    s = 0.0
    for n, dcn in enumerate(dc, start=1):
        spec = MeijerGSpec.build(3 * cfg.r + 1, 1, [0.0] + _tau5(cfg), _tau4(cfg, n))
        s += dcn * meijer_g(spec, arg)
    return lc.Egamma1 / (1.0 + k2) * s


def ec_upper_bound_af(cfg: LinkConfig):
    _require(cfg, "AF")
    if isinstance(cfg.hw, Hpa):
        raise UnsupportedCombinationError("the Jensen bound is derived for the aggregate impairment model")
    delta = cfg.hw.delta if isinstance(cfg.hw, Aggregate) else 0.0
    J = _jensen_term(cfg)
    return math.log2(1.0 + cfg.varpi * J / (delta * J + 1.0))


def ec_approx(cfg: LinkConfig):
    """``log2(1 + varpi E[num]/E[den])`` applied to the AF SNDR ratio."""
    _require(cfg, "AF")
    e1 = mean_gamma1(cfg.rf)
    e2 = moment_gamma2(cfg.fso.derived, cfg.fso.pointing, cfg.fso.detection, 1.0)
    hw, lc = cfg.hw, cfg.lc
    if isinstance(hw, Aggregate):
        den = hw.delta * e1 * e2 + (1.0 + hw.kappa2**2) * e2 + lc.C
    elif isinstance(hw, Hpa):
        den = lc.kappa * e2 + lc.C
    else:
        den = e2 + lc.C
    return math.log2(1.0 + cfg.varpi * e1 * e2 / den)


def _hpa_foxh_spec(cfg):
    tau5 = _tau5(cfg)
    return lambda n: FoxH2Spec(
        n1=1, a1=((0.0, 1.0, 1.0),), b1=(),
        m2=1, n2=1, c2=((0.0, 1.0),), d2=((0.0, 1.0),),
        m3=3 * cfg.r + 1, n3=0, c3=tuple((t, 1.0) for t in tau5),
        d3=tuple((t, 1.0) for t in _tau4(cfg, n)),
    )


def ec_hpa_closed(cfg: LinkConfig, *, rtol=1e-7):
    """HPA ergodic capacity via the bivariate Fox-H representation.

    Returns ``(value, meta)``; ``meta["fallback"]`` is True when the Fox-H
    quadrature failed and the 1-D numeric integral was used instead.
    """
    _require(cfg, "AF")
    if not isinstance(cfg.hw, Hpa):
        raise DomainError("ec_hpa_closed requires an HPA profile")
    mu1, mu_r, varpi = cfg.rf.mu1, cfg.fso.detection.mu_r, cfg.varpi
    w, lam, _ = exp_terms(cfg.rf)
    dc, E = _opt_coefs(cfg)
    lc = cfg.lc
    make = _hpa_foxh_spec(cfg)
    try:
        total = 0.0
        for wk, lk in zip(w, lam):
            zeta3, zeta4 = lk * lc.kappa, lk * lc.C * E
            x, y = varpi * mu1 / zeta3, zeta4 / (zeta3 * mu_r)
            s = sum(dcn * fox_h_bivariate(make(n), x, y, rtol=rtol) for n, dcn in enumerate(dc, start=1))
            total += wk * mu1 / zeta3 * s
        return varpi / math.log(2.0) * total, {"fallback": False}
    except AccuracyError as exc:
        return ec_numeric(cfg), {"fallback": True, "reason": str(exc)}


def _ec_kernel(p, varpi):
    """Mellin kernel ``K(s) = int_0^inf g^s exp(-p g) / (1 + varpi g) dg`` for complex ``s``.

    Trapezoidal rule in ``u = ln g``; the integrand is analytic in a strip of
    half-width pi, so a step of 0.05 is far below the discretisation limit.
    """

    def kern(s):
        s = np.asarray(s, dtype=complex)
        lo = -60.0 / max(float(np.min(s.real)) + 1.0, 0.25)
        hi = math.log(60.0 / p) + 1.0
        u = np.arange(lo, hi, 0.05)
        g = np.exp(u)
        base = -p * g - np.log1p(varpi * g)
        vals = np.exp((s.ravel()[:, None] + 1.0) * u[None, :] + base[None, :])
        return (0.05 * vals.sum(axis=1)).reshape(s.shape)

    return kern


def ec_hpa_asymptotic(cfg: LinkConfig, s_max=0.0):
    """High-SNR HPA capacity: residue expansion of the optical factor, kernel kept exact."""
    _require(cfg, "AF")
    if not isinstance(cfg.hw, Hpa):
        raise DomainError("ec_hpa_asymptotic requires an HPA profile")
    mu1, mu_r, varpi = cfg.rf.mu1, cfg.fso.detection.mu_r, cfg.varpi
    w, lam, _ = exp_terms(cfg.rf)
    dc, E = _opt_coefs(cfg)
    lc = cfg.lc
    total = 0.0
    for wk, lk in zip(w, lam):
        zeta3, zeta4 = lk * lc.kappa, lk * lc.C * E
        kern = _ec_kernel(zeta3 / mu1, varpi)
        z = zeta4 / (mu1 * mu_r)
        for n, dcn in enumerate(dc, start=1):
            spec = MeijerGSpec.build(3 * cfg.r + 1, 0, _tau5(cfg), _tau4(cfg, n))
            total += wk * dcn * meijer_g_asymptotic(spec, z, s_max=s_max, kernel=kern)
    return varpi / math.log(2.0) * total


def ec_df_bound(cfg: LinkConfig):
    """``min_i E[log2(1 + varpi g_i / (kappa_i^2 g_i + 1))]`` per hop."""
    _require(cfg, "DF")
    hw = cfg.hw
    if isinstance(hw, Hpa):
        raise UnsupportedCombinationError("the HPA model is defined for AF relaying only")
    k1, k2 = (hw.kappa1**2, hw.kappa2**2) if isinstance(hw, Aggregate) else (0.0, 0.0)
    varpi = cfg.varpi
    fso = cfg.fso

    def hop(ccdf, k, scale):
        # d/dg log2(1 + varpi g/(k g + 1)) = varpi / ln2 / ((k g + 1)(k g + 1 + varpi g))
        def dens(g):
            return np.asarray(ccdf(g)) * (1.0 + varpi * g) / ((k * g + 1.0) * ((k + varpi) * g + 1.0))

        return _ec_from_ccdf(dens, varpi, math.inf, scale)

    c1 = hop(lambda g: 1.0 - np.asarray(cdf_gamma1(cfg.rf, g)), k1, cfg.rf.mu1)
    c2 = hop(lambda g: 1.0 - np.asarray(cdf_gamma2(fso.derived, fso.pointing, fso.detection, g)), k2,
             fso.detection.mu_r)
    return min(c1, c2)


def capacity_ceiling(cfg: LinkConfig):
    hw = cfg.hw
    if isinstance(hw, Hpa):
        h = hpa_params(hw.kind, hw.ibo_db)
        if h.sigma_tau2 == 0:
            return math.inf
        return math.log2(1.0 + cfg.varpi * h.epsilon**2 / (h.iota - h.epsilon**2))
    g = ceiling(cfg.protocol, hw)
    return math.inf if math.isinf(g) else math.log2(1.0 + cfg.varpi * g)


def ceilings(cfg: LinkConfig) -> AsymptoteReport:
    if isinstance(cfg.hw, Hpa):
        g_star = math.inf
    else:
        g_star = ceiling(cfg.protocol, cfg.hw)
    gains = sep_df_high_snr(cfg) if isinstance(cfg.hw, Ideal) else {"Gd": 0.0, "Gc": math.nan, "floor": True}
    return AsymptoteReport(gains["Gd"], gains["Gc"], g_star, capacity_ceiling(cfg), gains.get("floor", False))

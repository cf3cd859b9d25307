"""First-hop statistics: m-th worst of M relays over Rayleigh fading with outdated CSI."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .errors import DomainError


@dataclass(frozen=True)
class RfHopParams:
    """First-hop configuration; ``mu1`` is the linear average SNR."""

    mu1: float
    M: int = 3
    m: int = 3
    rho_m: float = 0.7

    def __post_init__(self):
        if not self.mu1 > 0:
            raise DomainError(f"mu1 must be positive, got {self.mu1}")
        if int(self.M) != self.M or int(self.m) != self.m or not 1 <= self.m <= self.M:
            raise DomainError(f"need integers 1 <= m <= M, got m={self.m}, M={self.M}")
        if not 0.0 <= self.rho_m <= 1.0:
            raise DomainError(f"rho_m must lie in [0, 1], got {self.rho_m}")

    def with_mu1(self, mu1):
        return RfHopParams(mu1, self.M, self.m, self.rho_m)


def _log_binom(n, k):
    return gammaln(n + 1.0) - gammaln(k + 1.0) - gammaln(n - k + 1.0)


def exp_terms(p: RfHopParams):
    """Mixture representation of the selected-relay SNR.

    Returns ``(w, lam, v)`` with ``F(g) = 1 - sum w_k exp(-lam_k g / mu1)``:
    ``v_k = (M-m+k)(1-rho_m) + 1`` and ``lam_k = (M-m+k+1)/v_k``.
    """
    M, m = int(p.M), int(p.m)
    k = np.arange(m, dtype=float)
    j = M - m + k
    v = j * (1.0 - p.rho_m) + 1.0
    lam = (j + 1.0) / v
    logw = np.log(m) + _log_binom(M, m) + _log_binom(m - 1, k) - np.log(j + 1.0)
    w = np.where(k % 2 == 0, 1.0, -1.0) * np.exp(logw)
    return w, lam, v


def pdf_gamma1(p: RfHopParams, gamma):
    g = np.asarray(gamma, dtype=float)
    w, lam, _ = exp_terms(p)
    out = np.sum((w * lam)[:, None] / p.mu1 * np.exp(-np.outer(lam, g.ravel()) / p.mu1), axis=0)
    out = np.where(g.ravel() < 0, 0.0, out).reshape(g.shape)
    return float(out) if g.ndim == 0 else out


def cdf_gamma1(p: RfHopParams, gamma):
    g = np.asarray(gamma, dtype=float)
    w, lam, _ = exp_terms(p)
    gg = np.maximum(g.ravel(), 0.0)
    # 1 - sum w exp(-lam g) loses digits near 0; use expm1 there
    out = -np.sum(w[:, None] * np.expm1(-np.outer(lam, gg) / p.mu1), axis=0) + (1.0 - w.sum())
    out = np.clip(out, 0.0, 1.0).reshape(g.shape)
    return float(out) if g.ndim == 0 else out


def mean_gamma1(p: RfHopParams):
    w, lam, _ = exp_terms(p)
    return float(p.mu1 * np.sum(w / lam))

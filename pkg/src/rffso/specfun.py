"""Numerical special functions: Bessel-K, Gaussian Q, Meijer-G and a bivariate Fox-H.

The Meijer-G convention is the usual Mellin-Barnes one::

    G^{m,n}_{p,q}(z | a; b) = 1/(2 pi i) \\int_L  Phi(s) z^s ds

    Phi(s) = prod_{j<m} Gamma(b_j - s) prod_{j<n} Gamma(1 - a_j + s)
             / ( prod_{j>=m} Gamma(1 - b_j + s) prod_{j>=n} Gamma(a_j - s) )

with L a vertical line separating the poles of Gamma(b_j - s) (to the right)
from those of Gamma(1 - a_j + s) (to the left). On that line the integrand is
conjugate-symmetric for real parameters, so only the upper half is integrated.
The trapezoidal rule is used: it converges geometrically for integrands that
are analytic in a strip around the line, and the step is halved until two
successive estimates agree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate, optimize, special

from .errors import (
    AccuracyError,
    DegenerateParametersError,
    DomainError,
    RangeError,
    UnsupportedParametersError,
)

__all__ = [
    "MeijerGSpec",
    "FoxH2Spec",
    "bessel_k",
    "gaussian_q",
    "delta_vec",
    "meijer_g",
    "meijer_g_small_arg",
    "meijer_g_asymptotic",
    "fox_h_bivariate",
]

_LOG_TINY = -745.0
_DECAY = 38.0  # natural-log drop below the peak at which the contour is cut
_RTOL = 1e-13
_MAX_LEVELS = 14
_POLE_TOL = 1e-9
_SLACK = 2.0


# ---------------------------------------------------------------------------
# Elementary pieces
# ---------------------------------------------------------------------------

def delta_vec(j, x):
    """Return ``[x/j, (x+1)/j, ..., (x+j-1)/j]``."""
    j = int(j)
    if j < 1:
        raise DomainError(f"delta_vec needs j >= 1, got {j}")
    return [(x + i) / j for i in range(j)]


def gaussian_q(x):
    """Gaussian tail probability ``Q(x) = erfc(x/sqrt 2)/2``."""
    out = 0.5 * special.erfc(np.asarray(x, dtype=float) / math.sqrt(2.0))
    return float(out) if np.ndim(out) == 0 else out


def _bessel_k_scalar(nu, x):
    if not x > 0:
        raise DomainError(f"bessel_k requires x > 0, got {x}")
    nu = abs(float(nu))
    # integrand exp(nu t - x cosh t) (1 + exp(-2 nu t))/2 peaks at sinh t = nu/x
    t_peak = math.asinh(nu / x)
    phi_max = nu * t_peak - x * math.cosh(t_peak)
    if phi_max > 700.0:
        raise RangeError(f"K_{nu}({x}) overflows double precision")

    def expo(t):
        return nu * t - x * math.cosh(t) - phi_max

    # beyond t_hi the scaled integrand is below exp(-60)
    lo, hi = t_peak, t_peak + 1.0
    while expo(hi) > -60.0:
        lo, hi = hi, t_peak + 2.0 * (hi - t_peak)
    t_hi = optimize.brentq(lambda t: expo(t) + 60.0, lo, hi)

    def f(t):
        return math.exp(expo(t)) * 0.5 * (1.0 + math.exp(-2.0 * nu * t))

    pieces = []
    if t_peak > 0:
        pieces.append(integrate.quad(f, 0.0, t_peak, epsabs=0.0, epsrel=1e-13, limit=200)[0])
    pieces.append(integrate.quad(f, t_peak, t_hi, epsabs=0.0, epsrel=1e-13, limit=200)[0])
    return math.exp(phi_max) * math.fsum(pieces)


def bessel_k(nu, x):
    """Modified Bessel function of the second kind ``K_nu(x)`` for real ``nu``.

    Evaluated from ``K_nu(x) = int_0^inf exp(-x cosh t) cosh(nu t) dt`` by
    adaptive quadrature, split at the peak of the integrand.
    """
    if np.ndim(nu) == 0 and np.ndim(x) == 0:
        return _bessel_k_scalar(nu, float(x))
    nu_b, x_b = np.broadcast_arrays(np.asarray(nu, float), np.asarray(x, float))
    out = np.empty(nu_b.shape)
    for idx in np.ndindex(nu_b.shape):
        out[idx] = _bessel_k_scalar(nu_b[idx], x_b[idx])
    return out


# ---------------------------------------------------------------------------
# Meijer-G
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MeijerGSpec:
    """Orders and parameters of ``G^{m,n}_{p,q}``."""

    m: int
    n: int
    p: int
    q: int
    a: tuple = field(default=())
    b: tuple = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(float(v) for v in self.a))
        object.__setattr__(self, "b", tuple(float(v) for v in self.b))
        if len(self.a) != self.p or len(self.b) != self.q:
            raise DomainError(
                f"parameter lengths ({len(self.a)}, {len(self.b)}) do not match p={self.p}, q={self.q}"
            )
        if not (0 <= self.m <= self.q and 0 <= self.n <= self.p):
            raise DomainError(f"invalid orders m={self.m}, n={self.n}, p={self.p}, q={self.q}")
        if self.p > self.q:
            raise DomainError("only p <= q is supported")

    @classmethod
    def build(cls, m, n, a, b):
        a, b = tuple(a), tuple(b)
        return cls(m, n, len(a), len(b), a, b)

    # poles of Gamma(b_j - s), j < m, sit at b_j + k; those of Gamma(1 - a_j + s)
    # at a_j - 1 - k
    @property
    def strip(self):
        lo = max((aj - 1.0 for aj in self.a[: self.n]), default=-math.inf)
        hi = min(self.b[: self.m], default=math.inf)
        return lo, hi

    @property
    def decay_rate(self):
        """Exponential decay rate (in units of pi) of the integrand along a vertical line."""
        return self.m + self.n - 0.5 * (self.p + self.q)


def _log_mellin(spec, s):
    """log of the Mellin-Barnes kernel Phi(s) (complex, principal branch sums)."""
    s = np.asarray(s, dtype=complex)
    out = np.zeros(s.shape, dtype=complex)
    m, n = spec.m, spec.n
    for bj in spec.b[:m]:
        out += special.loggamma(bj - s)
    for aj in spec.a[:n]:
        out += special.loggamma(1.0 - aj + s)
    for bj in spec.b[m:]:
        out -= special.loggamma(1.0 - bj + s)
    for aj in spec.a[n:]:
        out -= special.loggamma(aj - s)
    return out


def _safe_exp(logv):
    """exp of a complex log, mapping -inf (zeros of 1/Gamma) to 0."""
    logv = np.asarray(logv)
    bad = ~np.isfinite(logv.real) & (np.nan_to_num(logv.real, nan=-np.inf) < 0)
    bad |= np.isnan(logv.real)
    safe = np.where(bad, _LOG_TINY * 2, logv.real)
    out = np.exp(safe + 1j * np.where(np.isfinite(logv.imag), logv.imag, 0.0))
    return np.where(bad, 0.0, out)


def _contour_candidates(spec, lnz):
    lo, hi = spec.strip
    if lo >= hi:
        raise UnsupportedParametersError(
            f"no vertical contour separates the pole families (strip [{lo}, {hi}])"
        )
    q_minus_p = max(spec.q - spec.p, 1)
    # saddle of the integrand sits near -z^(1/(q-p)) for large z, +z^(-1/(q-p)) for small z
    big = float(np.max(lnz)) if math.isinf(lo) else -float(np.min(lnz))
    reach = min(12.0 + 3.0 * math.exp(min(max(big, 0.0), 60.0) / q_minus_p), 5e3)
    fin_lo, fin_hi = not math.isinf(lo), not math.isinf(hi)
    if not fin_lo and not fin_hi:
        lo, hi = -reach, reach
    elif not fin_lo:
        lo = hi - reach
    elif not fin_hi:
        hi = lo + reach
    span = hi - lo
    u = np.concatenate([np.geomspace(1e-3, 0.05, 24), np.linspace(0.06, 0.94, 177),
                        1.0 - np.geomspace(0.05, 1e-3, 24)])
    cands = [lo + span * u]
    offsets = np.geomspace(1e-3, 1.0, 31)
    offsets = offsets[offsets < 0.5 * span]
    if fin_lo:
        cands.append(lo + offsets)
    if fin_hi:
        cands.append(hi - offsets)
    return np.unique(np.concatenate(cands)), (lo, hi)


def _choose_contours(spec, lnz):
    """Pick a contour abscissa per argument by minimising the peak integrand modulus."""
    cands, _ = _contour_candidates(spec, lnz)
    probe = np.array([0.0, 0.5, 2.0])
    logabs = _log_mellin(spec, cands[:, None] + 1j * probe[None, :]).real
    logabs = np.where(np.isnan(logabs), -np.inf, logabs)
    peak = np.max(logabs, axis=1)  # (n_cands,)
    score = peak[:, None] + cands[:, None] * lnz[None, :]
    # a contour within _SLACK nats of the optimum costs at most e^_SLACK in
    # cancellation; greedily share contours to cut the number of distinct lines
    ok = score <= np.min(score, axis=0)[None, :] + _SLACK
    best = np.full(lnz.shape, -1)
    uncovered = np.ones(lnz.shape, dtype=bool)
    while uncovered.any():
        counts = (ok & uncovered[None, :]).sum(axis=1)
        pick = int(np.argmax(counts))
        hit = ok[pick] & uncovered
        best[hit] = pick
        uncovered &= ~hit
    return cands, best


def _cutoff(logabs_fn, start=1.0):
    """Return T beyond which log|f(c + i t)| stays _DECAY below its running peak."""
    t = np.concatenate([np.linspace(0.0, 4.0, 33), 4.0 * np.geomspace(1.0, 2.5e3, 400)[1:]])
    la = logabs_fn(t)
    la = np.where(np.isnan(la), -np.inf, la)
    peak = np.max(la)
    above = np.nonzero(la > peak - _DECAY)[0]
    if above[-1] == len(t) - 1:
        raise AccuracyError("Mellin-Barnes integrand does not decay along the contour")
    return float(t[above[-1] + 1]), peak


def _trapezoid_line(spec, c, lnz):
    """Integrate along Re s = c for an array of log-arguments sharing that abscissa."""
    T, _ = _cutoff(lambda t: _log_mellin(spec, c + 1j * t).real)
    _, hi = spec.strip
    lo, _ = spec.strip
    gap = min(abs(hi - c), abs(c - lo))
    h = min(0.25, max(gap, 1e-4))
    lnz = np.asarray(lnz)

    def partial(t_nodes, weights):
        # Re[exp(L + s lnz)] = exp(Re L + c lnz) cos(Im L + t lnz); the modulus
        # factor separates, so only a real cosine matrix is needed per chunk
        logphi = _log_mellin(spec, c + 1j * t_nodes)
        lr = np.where(np.isnan(logphi.real), -np.inf, logphi.real)
        li = np.where(np.isfinite(logphi.imag), logphi.imag, 0.0)
        shift = float(np.max(lr)) if np.isfinite(np.max(lr)) else 0.0
        wexp = weights * np.exp(lr - shift)
        zscale = np.exp(np.minimum(shift + c * lnz, 700.0))
        total = np.zeros(lnz.shape)
        mag = np.zeros(lnz.shape)
        chunk = max(1, int(2e6 // max(len(t_nodes), 1)))
        for i0 in range(0, len(lnz), chunk):
            cosm = np.cos(li[None, :] + t_nodes[None, :] * lnz[i0 : i0 + chunk, None])
            total[i0 : i0 + chunk] = cosm @ wexp
            mag[i0 : i0 + chunk] = np.abs(cosm) @ wexp
        return total * zscale, mag * zscale

    n = int(math.ceil(T / h))
    nodes = h * np.arange(n + 1)
    w = np.ones(n + 1)
    w[0] = 0.5
    s_sum, m_sum = partial(nodes, w)
    est = h * s_sum
    err = np.full(lnz.shape, np.inf)
    for _ in range(_MAX_LEVELS):
        h_new = h / 2.0
        mids = h_new * (2 * np.arange(n) + 1)
        add, add_mag = partial(mids, np.ones(n))
        s_sum += add
        m_sum += add_mag
        new = h_new * s_sum
        err = np.abs(new - est)
        floor = 64.0 * np.finfo(float).eps * h_new * m_sum
        est, h, n = new, h_new, 2 * n
        if np.all(err <= np.maximum(_RTOL * np.abs(est), floor)):
            break
    floor = 64.0 * np.finfo(float).eps * h * m_sum
    return est / math.pi, err / math.pi, floor / math.pi


def meijer_g(spec: MeijerGSpec, z, *, return_error=False):
    """Evaluate ``G^{m,n}_{p,q}(z)`` for real ``z > 0`` by contour quadrature.

    ``z`` may be a scalar or an array. With ``return_error`` a second value
    carrying the quadrature error estimate is returned.
    """
    z_arr = np.asarray(z, dtype=float)
    if np.any(~(z_arr > 0)):
        raise DomainError("meijer_g requires z > 0")
    if spec.decay_rate <= 0:
        raise UnsupportedParametersError(
            f"m + n - (p + q)/2 = {spec.decay_rate} <= 0: line integral does not converge"
        )
    flat = z_arr.ravel()
    lnz = np.log(flat)
    cands, best = _choose_contours(spec, lnz)
    val = np.empty(flat.shape)
    err = np.empty(flat.shape)
    for idx in np.unique(best):
        sel = np.nonzero(best == idx)[0]
        v, e, floor = _trapezoid_line(spec, float(cands[idx]), lnz[sel])
        bad = e > np.maximum(1e-8 * np.abs(v), floor)
        if np.any(bad):
            raise AccuracyError(
                f"meijer_g contour quadrature did not converge (error estimate {np.max(e[bad]):.3g})",
                estimate=float(np.max(e[bad])),
            )
        val[sel] = v
        err[sel] = np.maximum(e, floor)
    val = val.reshape(z_arr.shape)
    err = err.reshape(z_arr.shape)
    if z_arr.ndim == 0:
        val, err = float(val), float(err)
    return (val, err) if return_error else val


def _right_poles_info(spec):
    bm = np.array(spec.b[: spec.m])
    diffs = bm[:, None] - bm[None, :]
    coincide = np.abs(diffs - np.round(diffs)) < _POLE_TOL
    np.fill_diagonal(coincide, False)
    return bm, coincide


def _slater_log_coeff(spec, h, k):
    """log|c| and sign of the residue coefficient at s = b_h + k (simple pole).

    Returns (None, 0) when a reciprocal Gamma vanishes.
    """
    bh = spec.b[h]
    logc = -special.gammaln(k + 1.0)
    sign = -1.0 if k % 2 else 1.0
    num_args = [spec.b[j] - bh - k for j in range(spec.m) if j != h]
    num_args += [1.0 - aj + bh + k for aj in spec.a[: spec.n]]
    den_args = [1.0 - bj + bh + k for bj in spec.b[spec.m :]]
    den_args += [aj - bh - k for aj in spec.a[spec.n :]]
    for x in num_args:
        if x <= 0 and abs(x - round(x)) < _POLE_TOL:
            raise DegenerateParametersError(f"coincident poles: Gamma({x:g}) in residue coefficient")
        logc += special.gammaln(x)
        sign *= special.gammasgn(x)
    for x in den_args:
        if x <= 0 and abs(x - round(x)) < _POLE_TOL:
            return None, 0.0
        logc -= special.gammaln(x)
        sign *= special.gammasgn(x)
    return logc, sign


def meijer_g_small_arg(spec: MeijerGSpec, z, terms=1):
    """Residue expansion of ``G^{m,n}_{p,q}(z)`` about ``z = 0``.

    Sums the first ``terms`` residues of every pole family ``b_h + k``
    (``h < m``). ``terms=1`` is the leading-order form used for high-SNR
    asymptotes; ``terms=None`` keeps adding residues until the series has
    converged. Requires simple poles.
    """
    z_arr = np.asarray(z, dtype=float)
    if np.any(~(z_arr > 0)):
        raise DomainError("meijer_g_small_arg requires z > 0")
    _, coincide = _right_poles_info(spec)
    if np.any(coincide):
        raise DegenerateParametersError("coincident poles among the first m lower parameters")
    lnz = np.log(z_arr)
    total = np.zeros(z_arr.shape)
    k_max = 600 if terms is None else int(terms)
    for k in range(k_max):
        contrib = np.zeros(z_arr.shape)
        for h in range(spec.m):
            logc, sign = _slater_log_coeff(spec, h, k)
            if logc is None:
                continue
            contrib = contrib + sign * np.exp(logc + (spec.b[h] + k) * lnz)
        total = total + contrib
        if terms is None and k > 4 and np.all(np.abs(contrib) <= 1e-17 * np.maximum(np.abs(total), 1e-300)):
            break
    else:
        if terms is None:
            raise AccuracyError("residue series did not converge", estimate=float(np.max(np.abs(contrib))))
    return float(total) if z_arr.ndim == 0 else total


def _pole_multiplicity(spec, s0):
    return sum(
        1 for bh in spec.b[: spec.m] if s0 - bh > -_POLE_TOL and abs(s0 - bh - round(s0 - bh)) < _POLE_TOL
    )


def _nearest_other_singularity(spec, s0):
    """Distance from s0 to the closest pole (either family) not located at s0."""
    best = math.inf
    for bh in spec.b[: spec.m]:
        k = max(0, math.floor(s0 - bh))
        for kk in (k - 1, k, k + 1, k + 2):
            if kk < 0:
                continue
            d = abs(bh + kk - s0)
            if d > _POLE_TOL:
                best = min(best, d)
    for aj in spec.a[: spec.n]:
        best = min(best, abs(s0 - (aj - 1.0)))
    return best


def _circle_residue(spec, s0, lnz, kernel=None, nodes=64):
    """-Res_{s=s0} Phi(s) z^s K(s), by the trapezoidal rule on a small circle."""
    rho = min(0.25, 0.45 * _nearest_other_singularity(spec, s0))
    max_lnz = float(np.max(np.abs(lnz))) if np.size(lnz) else 0.0
    rho = max(min(rho, 3.0 / max(max_lnz, 1e-12)), min(rho, 0.02))
    theta = 2.0 * math.pi * (np.arange(nodes) + 0.5) / nodes
    ds = rho * np.exp(1j * theta)
    s = s0 + ds
    logphi = _log_mellin(spec, s)
    kern = np.ones(nodes, complex) if kernel is None else np.asarray(kernel(s), dtype=complex)
    vals = np.exp(logphi[None, :] + s[None, :] * np.asarray(lnz)[:, None]) * kern[None, :] * ds[None, :]
    return -(vals.sum(axis=1) / nodes).real


def meijer_g_asymptotic(spec: MeijerGSpec, z, s_max=1.0, kernel=None):
    """Small-argument asymptote of ``G(z)`` (optionally weighted by a Mellin kernel).

    Adds the residue at the leading pole ``b_h`` of every family (the
    classical one-term-per-family expansion) plus every further pole with
    real part ``<= s_max``. Coincident poles are merged and their full
    residue, logarithmic terms included, is taken numerically, so integer
    parameter differences are handled. ``kernel`` (callable on complex
    ``s``) multiplies the Mellin integrand; it must be analytic near the poles.
    """
    z_arr = np.asarray(z, dtype=float)
    if np.any(~(z_arr > 0)):
        raise DomainError("meijer_g_asymptotic requires z > 0")
    lnz = np.log(z_arr).ravel()
    points = []
    for bh in spec.b[: spec.m]:
        k = 0
        while k == 0 or bh + k <= s_max + _POLE_TOL:
            s0 = bh + k
            if all(abs(s0 - p) > _POLE_TOL for p in points):
                points.append(s0)
            k += 1
    total = np.zeros(lnz.shape)
    for s0 in sorted(points):
        mult = _pole_multiplicity(spec, s0)
        if mult == 1:
            h = next(j for j in range(spec.m)
                     if s0 - spec.b[j] > -_POLE_TOL and abs(s0 - spec.b[j] - round(s0 - spec.b[j])) < _POLE_TOL)
            k = int(round(s0 - spec.b[h]))
            try:
                logc, sign = _slater_log_coeff(spec, h, k)
            except DegenerateParametersError:
                total += _circle_residue(spec, s0, lnz, kernel)
                continue
            if logc is None:
                continue
            kf = 1.0 if kernel is None else float(np.real(kernel(np.array([s0], dtype=complex))[0]))
            total += sign * kf * np.exp(logc + s0 * lnz)
        else:
            total += _circle_residue(spec, s0, lnz, kernel)
    total = total.reshape(z_arr.shape)
    return float(total) if z_arr.ndim == 0 else total


# ---------------------------------------------------------------------------
# Bivariate Fox-H
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FoxH2Spec:
    """Two-variable H-function ``H^{0,n1:m2,n2:m3,n3}_{p1,q1:p2,q2:p3,q3}``.

    Coupling entries are triples ``(a, alpha, A)``; the first ``n1`` of ``a1``
    contribute ``Gamma(1 - a + alpha s + A t)`` to the numerator, the rest
    ``Gamma(a - alpha s - A t)`` to the denominator, and every entry of ``b1``
    contributes ``Gamma(1 - b + beta s + B t)`` to the denominator. The two
    single-variable factors take pairs ``(c, gamma)`` / ``(d, delta)`` in the
    Meijer-G arrangement with scaled arguments ``d - delta s`` and
    ``1 - c + gamma s``. The integrand carries ``x^s y^t``.
    """

    n1: int
    a1: tuple
    b1: tuple
    m2: int
    n2: int
    c2: tuple
    d2: tuple
    m3: int
    n3: int
    c3: tuple
    d3: tuple

    def __post_init__(self):
        for name in ("c2", "d2", "c3", "d3"):
            pairs = tuple((float(v), float(sc)) for v, sc in getattr(self, name))
            if any(sc <= 0 for _, sc in pairs):
                raise DomainError(f"{name}: exponent scales must be strictly positive")
            object.__setattr__(self, name, pairs)
        for name in ("a1", "b1"):
            triples = tuple((float(v), float(s1), float(s2)) for v, s1, s2 in getattr(self, name))
            if any(s1 <= 0 or s2 <= 0 for _, s1, s2 in triples):
                raise DomainError(f"{name}: exponent scales must be strictly positive")
            object.__setattr__(self, name, triples)
        if not (0 <= self.n1 <= len(self.a1) and 0 <= self.m2 <= len(self.d2) and 0 <= self.n2 <= len(self.c2)
                and 0 <= self.m3 <= len(self.d3) and 0 <= self.n3 <= len(self.c3)):
            raise DomainError("invalid structural indices for FoxH2Spec")


def _log_theta(pairs_c, pairs_d, m, n, s):
    out = np.zeros(np.shape(s), dtype=complex)
    for j, (d, dl) in enumerate(pairs_d):
        if j < m:
            out += special.loggamma(d - dl * s)
        else:
            out -= special.loggamma(1.0 - d + dl * s)
    for j, (c, gm) in enumerate(pairs_c):
        if j < n:
            out += special.loggamma(1.0 - c + gm * s)
        else:
            out -= special.loggamma(c - gm * s)
    return out


def _log_coupling(spec, s, t):
    out = np.zeros(np.broadcast(s, t).shape, dtype=complex)
    for j, (a, al, A) in enumerate(spec.a1):
        if j < spec.n1:
            out += special.loggamma(1.0 - a + al * s + A * t)
        else:
            out -= special.loggamma(a - al * s - A * t)
    for b, be, B in spec.b1:
        out -= special.loggamma(1.0 - b + be * s + B * t)
    return out


def _foxh_contours(spec):
    """Maximise the smallest distance of the contour pair from any numerator pole."""
    rows, rhs = [], []
    # each constraint:  g0 + gs * cs + gt * ct >= margin  ->  -gs cs - gt ct + margin <= g0
    for j, (d, dl) in enumerate(spec.d2[: spec.m2]):
        rows.append([dl, 0.0, 1.0]); rhs.append(d)
    for c, gm in spec.c2[: spec.n2]:
        rows.append([-gm, 0.0, 1.0]); rhs.append(1.0 - c)
    for f, fl in spec.d3[: spec.m3]:
        rows.append([0.0, fl, 1.0]); rhs.append(f)
    for e, em in spec.c3[: spec.n3]:
        rows.append([0.0, -em, 1.0]); rhs.append(1.0 - e)
    for a, al, A in spec.a1[: spec.n1]:
        rows.append([-al, -A, 1.0]); rhs.append(1.0 - a)
    res = optimize.linprog(
        c=[0.0, 0.0, -1.0],
        A_ub=np.array(rows), b_ub=np.array(rhs),
        bounds=[(-50, 50), (-50, 50), (None, 1.0)],
        method="highs",
    )
    if not res.success or res.x[2] <= 1e-6:
        raise UnsupportedParametersError("no contour pair separates the pole families of the H-function")
    margin = float(res.x[2])
    # the optimum is often a whole face; take the point nearest the origin so a
    # one-sided family does not push the contours (and the integrand) out to |s| ~ 50
    A = np.array(rows)
    margin_rows = np.hstack([A[:, :2], np.zeros((len(rows), 2))])
    # auxiliaries (p, q) bound |cs| and |ct|
    abs_rows = np.array([[1, 0, -1, 0], [-1, 0, -1, 0], [0, 1, 0, -1], [0, -1, 0, -1]], dtype=float)
    res2 = optimize.linprog(
        c=[0.0, 0.0, 1.0, 1.0],
        A_ub=np.vstack([margin_rows, abs_rows]),
        b_ub=np.concatenate([np.array(rhs) - 0.999 * margin, np.zeros(4)]),
        bounds=[(-50, 50), (-50, 50), (0, None), (0, None)],
        method="highs",
    )
    if res2.success:
        return float(res2.x[0]), float(res2.x[1]), 0.999 * margin
    return float(res.x[0]), float(res.x[1]), margin


def fox_h_bivariate(spec: FoxH2Spec, x, y, *, rtol=1e-7, return_error=False):
    """Bivariate Fox-H function by iterated Mellin-Barnes quadrature.

    The double contour integral is discretised with a two-dimensional
    trapezoidal rule whose step is halved until successive estimates agree to
    ``rtol``. Compute-intensive: expect tens to hundreds of milliseconds.
    """
    if not (x > 0 and y > 0):
        raise DomainError("fox_h_bivariate requires x, y > 0")
    cs, ct, margin = _foxh_contours(spec)
    lx, ly = math.log(x), math.log(y)

    def log_integrand(u, v):
        s = cs + 1j * u
        t = ct + 1j * v
        return (_log_theta(spec.c2, spec.d2, spec.m2, spec.n2, s)
                + _log_theta(spec.c3, spec.d3, spec.m3, spec.n3, t)
                + _log_coupling(spec, s, t) + s * lx + t * ly)

    # support box from a coarse scan
    grid = np.concatenate([-np.geomspace(400, 0.25, 60), [0.0], np.geomspace(0.25, 400, 60)])
    vg = grid[grid >= 0]
    la = log_integrand(grid[:, None], vg[None, :]).real
    la = np.where(np.isnan(la), -np.inf, la)
    keep = la > np.max(la) - _DECAY
    ui, vi = np.nonzero(keep)
    if ui.min() == 0 or ui.max() == len(grid) - 1 or vi.max() == len(vg) - 1:
        raise AccuracyError("H-function integrand does not decay on the scanned box")
    u_lo, u_hi = grid[max(ui.min() - 1, 0)], grid[min(ui.max() + 1, len(grid) - 1)]
    v_hi = vg[min(vi.max() + 1, len(vg) - 1)]

    def trap(h):
        u = np.arange(math.floor(u_lo / h), math.ceil(u_hi / h) + 1) * h
        v = np.arange(0, math.ceil(v_hi / h) + 1) * h
        wv = np.ones(len(v))
        wv[0] = 0.5
        total = 0.0
        mag = 0.0
        step = max(1, int(1.5e6 // len(v)))
        for i0 in range(0, len(u), step):
            vals = _safe_exp(log_integrand(u[i0 : i0 + step, None], v[None, :])).real
            total += float((vals @ wv).sum())
            mag += float((np.abs(vals) @ wv).sum())
        return total * h * h / (2.0 * math.pi**2), mag * h * h / (2.0 * math.pi**2)

    h = min(0.5, margin)
    prev, _ = trap(h)
    err = math.inf
    for _ in range(8):
        h /= 2.0
        cur, mag = trap(h)
        err = abs(cur - prev)
        prev = cur
        if err <= max(rtol * abs(cur), 1e3 * np.finfo(float).eps * mag):
            break
    else:
        raise AccuracyError(f"fox_h_bivariate did not converge (estimate {err:.3g})", estimate=err)
    return (prev, err) if return_error else prev

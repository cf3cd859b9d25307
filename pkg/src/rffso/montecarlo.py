"""Monte-Carlo oracle for the mixed RF/FSO link.

Samples are drawn in fixed-size batches. Batch ``i`` uses its own Philox
stream seeded from ``(seed, i)``, and per-batch accumulators are merged in
batch order, so results do not depend on the number of worker threads.

Both hops are sampled in normalised form (``gamma1/mu1`` and ``I/E[I]``) so
one set of draws serves a whole SNR sweep (common random numbers).
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np
from scipy import optimize, stats

from .errors import DomainError, ModelMismatchError
from .fso_channel import cdf_gamma2, moment_gamma2, path_loss, pointing_gain
from .rf_channel import RfHopParams, cdf_gamma1
from .sndr import ceiling, combine
from .specfun import gaussian_q


@dataclass(frozen=True)
class SimConfig:
    seed: int = 20240531
    n_samples: int = 1_000_000
    batch_size: int = 1 << 18
    workers: int = 1

    def __post_init__(self):
        if self.n_samples < 0 or self.batch_size <= 0 or self.workers <= 0:
            raise DomainError("n_samples >= 0, batch_size > 0 and workers > 0 are required")
        if not 0 <= self.seed < 2**64:
            raise DomainError("seed must be a 64-bit unsigned integer")


@dataclass(frozen=True)
class MetricEstimate:
    value: float
    stderr: float
    ci95_lo: float
    ci95_hi: float
    n: int
    warning: str | None = None


@dataclass(frozen=True)
class Outage:
    gamma_th: float


@dataclass(frozen=True)
class Sep:
    c: float = 2.0


@dataclass(frozen=True)
class Capacity:
    varpi: float | None = None


def batch_stream(seed, index):
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([int(seed), int(index)])))


def _batches(sim: SimConfig):
    n, b = sim.n_samples, sim.batch_size
    return [(i, min(b, n - i * b)) for i in range(math.ceil(n / b))] if n else []


# ---------------------------------------------------------------------------
# samplers
# ---------------------------------------------------------------------------

def _cgauss(rng, size):
    return (rng.standard_normal(size) + 1j * rng.standard_normal(size)) / math.sqrt(2.0)


def sample_rf_prs(p: RfHopParams, rng, size=None):
    """First-hop SNR of the relay ranked ``m``-th worst on outdated CSI."""
    n = 1 if size is None else int(size)
    h_out = _cgauss(rng, (n, p.M))
    h_act = math.sqrt(p.rho_m) * h_out + math.sqrt(1.0 - p.rho_m) * _cgauss(rng, (n, p.M))
    order = np.argsort(np.abs(h_out) ** 2, axis=1, kind="stable")
    pick = order[:, p.m - 1]
    g = np.abs(h_act[np.arange(n), pick]) ** 2 * p.mu1
    return float(g[0]) if size is None else g


def sample_turbulence(d, rng, size):
    """Malaga irradiance ``I_a = X Y`` with unit-mean Gamma ``X`` and shadowed-Rician ``Y``."""
    al, be = d.alpha, d.beta
    x = rng.gamma(al, 1.0 / al, size)
    s = rng.gamma(be, 1.0 / be, size)
    phi = rng.uniform(0.0, 2.0 * math.pi, size)
    scatter = math.sqrt(d.g) * _cgauss(rng, size)
    y = np.abs(np.sqrt(s * d.OmegaP) * np.exp(1j * phi) + scatter) ** 2
    return x * y


def mean_irradiance(fso):
    d, pp = fso.derived, fso.pointing
    xi2 = pp.xi**2
    return d.mean_Ia * pp.A0 * path_loss(pp) * xi2 / (xi2 + 1.0)


def sample_fso_normalized(fso, rng, size, sigma_s=1.0):
    """``I / E[I]`` for the composite turbulence / pointing / path-loss channel."""
    pp = fso.pointing
    w_leq = 2.0 * pp.xi * sigma_s
    radial = sigma_s * np.sqrt(-2.0 * np.log1p(-rng.random(size)))
    ip = pointing_gain(pp, w_leq, radial)
    ia = sample_turbulence(fso.derived, rng, size)
    return ia * ip * path_loss(pp) / mean_irradiance(fso)


def sample_fso(fso, rng, size=None):
    n = 1 if size is None else int(size)
    det = fso.detection
    g = det.mu_r * sample_fso_normalized(fso, rng, n) ** det.r
    return float(g[0]) if size is None else g


def _normalized_pair(cfg, rng, size):
    rf1 = replace(cfg.rf, mu1=1.0)
    return sample_rf_prs(rf1, rng, size), sample_fso_normalized(cfg.fso, rng, size)


def sndr_from_normalized(cfg, x1, i2):
    g1 = cfg.rf.mu1 * x1
    g2 = cfg.fso.detection.mu_r * i2 ** cfg.r
    return np.asarray(combine(cfg.protocol, cfg.hw, cfg.lc, g1, g2), dtype=float)


# ---------------------------------------------------------------------------
# estimation
# ---------------------------------------------------------------------------

def _metric_values(metric, cfg, g):
    if isinstance(metric, Outage):
        return (g <= metric.gamma_th).astype(float)
    if isinstance(metric, Sep):
        return gaussian_q(np.sqrt(metric.c * g))
    if isinstance(metric, Capacity):
        varpi = cfg.varpi if metric.varpi is None else metric.varpi
        return np.log2(1.0 + varpi * g)
    raise DomainError(f"unknown metric {metric!r}")


@dataclass
class _Acc:
    n: int = 0
    mean: float = 0.0
    m2: float = 0.0
    hits: float = 0.0
    gmax: float = 0.0

    def add(self, v, gmax):
        nb = v.size
        if nb == 0:
            return
        mb = float(v.mean())
        m2b = float(((v - mb) ** 2).sum())
        tot = self.n + nb
        delta = mb - self.mean
        self.mean += delta * nb / tot
        self.m2 += m2b + delta * delta * self.n * nb / tot
        self.n = tot
        self.hits += float(v.sum())
        self.gmax = max(self.gmax, gmax)


def _finish(acc: _Acc, metric):
    if acc.n == 0:
        return MetricEstimate(math.nan, math.nan, math.nan, math.nan, 0, "no samples")
    var = acc.m2 / (acc.n - 1) if acc.n > 1 else 0.0
    se = math.sqrt(max(var, 0.0) / acc.n)
    warn = None
    if isinstance(metric, Outage) and 0 < acc.hits < 10:
        warn = f"only {int(acc.hits)} outage events; estimate unreliable"
    elif isinstance(metric, Outage) and acc.hits == 0 and acc.mean == 0:
        warn = "no outage events observed"
    return MetricEstimate(acc.mean, se, acc.mean - 1.96 * se, acc.mean + 1.96 * se, acc.n, warn)


def estimate_grid(metrics: Sequence, cfgs: Sequence, sim: SimConfig, *, return_max=False):
    """Estimate every metric at every config with shared normalised draws.

    All configs must share the channel-shape parameters (they may differ in
    SNR, hardware and protocol). Returns ``est[i][j]`` for config i, metric j.
    """
    base = cfgs[0]

    def run(batch):
        idx, size = batch
        rng = batch_stream(sim.seed, idx)
        x1, i2 = _normalized_pair(base, rng, size)
        out = []
        for cfg in cfgs:
            g = sndr_from_normalized(cfg, x1, i2)
            out.append([(_metric_values(mt, cfg, g), float(g.max(initial=0.0))) for mt in metrics])
        return out

    accs = [[_Acc() for _ in metrics] for _ in cfgs]
    batches = _batches(sim)
    if sim.workers > 1 and len(batches) > 1:
        with ThreadPoolExecutor(sim.workers) as pool:
            results = pool.map(run, batches)
            for res in results:
                _merge(accs, res)
    else:
        for b in batches:
            _merge(accs, run(b))
    est = [[_finish(a, mt) for a, mt in zip(row, metrics)] for row in accs]
    if return_max:
        return est, [max(a.gmax for a in row) for row in accs]
    return est


def _merge(accs, res):
    for row, rrow in zip(accs, res):
        for acc, (v, gm) in zip(row, rrow):
            acc.add(v, gm)


def estimate(metric, cfg, sim: SimConfig) -> MetricEstimate:
    return estimate_grid([metric], [cfg], sim)[0][0]


def sample_sndr(cfg, sim: SimConfig):
    """All SNDR samples for ``cfg`` (concatenated in batch order)."""
    out = []
    for idx, size in _batches(sim):
        x1, i2 = _normalized_pair(cfg, batch_stream(sim.seed, idx), size)
        out.append(sndr_from_normalized(cfg, x1, i2))
    return np.concatenate(out) if out else np.zeros(0)


def sample_gamma2(cfg, sim: SimConfig):
    out = []
    for idx, size in _batches(sim):
        rng = batch_stream(sim.seed, idx)
        out.append(sample_fso(cfg.fso, rng, size))
    return np.concatenate(out) if out else np.zeros(0)


def sample_gamma1(cfg, sim: SimConfig):
    out = []
    for idx, size in _batches(sim):
        out.append(sample_rf_prs(cfg.rf, batch_stream(sim.seed, idx), size))
    return np.concatenate(out) if out else np.zeros(0)


# ---------------------------------------------------------------------------
# statistics against the analytic model
# ---------------------------------------------------------------------------

def ks_distance(samples, cdf, n_points=2000):
    """Kolmogorov-Smirnov distance evaluated at ``n_points`` sample quantiles.

    The analytic CDF is only evaluated at the chosen order statistics; the
    result underestimates the full statistic by at most ``1/n_points``.
    """
    xs = np.sort(np.asarray(samples, dtype=float))
    n = xs.size
    idx = np.unique(np.linspace(0, n - 1, min(n_points, n)).astype(int))
    f = np.asarray(cdf(xs[idx]), dtype=float)
    hi = (idx + 1) / n
    lo = idx / n
    return float(np.max(np.maximum(np.abs(f - hi), np.abs(f - lo))))


def chi2_gamma1(p: RfHopParams, samples, bins=50):
    """Chi-square goodness of fit of first-hop samples on equiprobable analytic bins."""
    q = np.linspace(0.0, 1.0, bins + 1)[1:-1]
    hi = p.mu1 * 60.0
    edges = [optimize.brentq(lambda g, t=t: cdf_gamma1(p, g) - t, 0.0, hi, xtol=1e-14 * p.mu1) for t in q]
    counts = np.bincount(np.searchsorted(edges, samples), minlength=bins)
    expected = np.full(bins, samples.size / bins)
    return stats.chisquare(counts, expected)


def self_test(cfg, sim: SimConfig, tol=0.02):
    """Compare the first two empirical moments of gamma2 with the closed form."""
    g = sample_gamma2(cfg, sim)
    fso = cfg.fso
    out = {}
    for k in (1, 2):
        ref = moment_gamma2(fso.derived, fso.pointing, fso.detection, k)
        emp = float(np.mean(g**k))
        out[k] = (emp, ref, abs(emp / ref - 1.0))
    worst = max(v[2] for v in out.values())
    if worst > tol:
        raise ModelMismatchError(f"gamma2 moments disagree with the closed form by {worst:.3%}: {out}")
    return out


@dataclass
class CheckResult:
    name: str
    status: str  # "pass" | "fail" | "not run"
    value: float = math.nan
    limit: float = math.nan
    detail: str = ""


@dataclass
class Tolerances:
    moment_rel: float = 0.01
    ks: float = 5e-3
    chi2_p: float = 0.01
    n_sigma: float = 3.0
    min_outage: float = 1e-3


def binomial_sd(p, est: MetricEstimate):
    """Standard error of an outage estimate under the null ``P = p``.

    The sample stderr vanishes when every draw lands on one side of the
    threshold, which happens routinely for ``p`` near 0 or 1.
    """
    return max(est.stderr, math.sqrt(max(p * (1.0 - p), 0.0) / max(est.n, 1)))


def validate(cfg, sim: SimConfig, tolerances: Tolerances | None = None, *, analytic_cfg=None,
             snr_db=(0, 10, 20, 30, 40), gamma_th=None, sep_c=2.0):
    """Analytic-versus-simulation suite for one link configuration.

    ``analytic_cfg`` (default ``cfg``) feeds the closed forms; passing a
    perturbed copy acts as a negative control.
    """
    from . import analytics

    tol = tolerances or Tolerances()
    acfg = analytic_cfg or cfg
    gamma_th = 10 ** 0.7 if gamma_th is None else gamma_th
    names = ["moment_k1", "moment_k2", "ks_gamma2", "chi2_gamma1"]
    names += [f"{m}@{s}dB" for s in snr_db for m in ("op", "sep", "ec")]
    if sim.n_samples == 0:
        return [CheckResult(n, "not run") for n in names]
    report = []
    fso = acfg.fso
    g2 = sample_gamma2(cfg, sim)
    for k in (1, 2):
        ref = moment_gamma2(fso.derived, fso.pointing, fso.detection, k)
        gk = g2**k
        dev = abs(float(np.mean(gk)) / ref - 1.0)
        # heavy-tailed at small n: never demand more than the sampling error allows
        lim = max(tol.moment_rel, tol.n_sigma * float(np.std(gk)) / math.sqrt(gk.size) / ref)
        report.append(CheckResult(f"moment_k{k}", "pass" if dev <= lim else "fail", dev, lim))
    ks = ks_distance(g2, lambda x: cdf_gamma2(fso.derived, fso.pointing, fso.detection, x))
    report.append(CheckResult("ks_gamma2", "pass" if ks <= tol.ks else "fail", ks, tol.ks))
    g1 = sample_gamma1(cfg, sim)
    pval = float(chi2_gamma1(acfg.rf, g1).pvalue)
    report.append(CheckResult("chi2_gamma1", "pass" if pval > tol.chi2_p else "fail", pval, tol.chi2_p))

    grid = [cfg.with_snr(10 ** (s / 10), 10 ** (s / 10)) for s in snr_db]
    agrid = [acfg.with_snr(10 ** (s / 10), 10 ** (s / 10)) for s in snr_db]
    metrics = [Outage(gamma_th), Sep(sep_c), Capacity()]
    est = estimate_grid(metrics, grid, sim)
    for s, row, ac in zip(snr_db, est, agrid):
        op = analytics.outage(ac, gamma_th)
        vals = {"op": op, "sep": analytics.sep_numeric(ac, sep_c), "ec": analytics.ec_numeric(ac)}
        for name, e in zip(("op", "sep", "ec"), row):
            label = f"{name}@{s}dB"
            if op < tol.min_outage:
                report.append(CheckResult(label, "not run", detail=f"outage {op:.2e} below {tol.min_outage}"))
                continue
            dev = abs(vals[name] - e.value)
            lim = tol.n_sigma * (binomial_sd(op, e) if name == "op" else e.stderr)
            ok = dev <= lim or (e.stderr == 0 and dev <= 1e-12)
            report.append(CheckResult(label, "pass" if ok else "fail", dev, lim,
                                      f"analytic={vals[name]:.6g} mc={e.value:.6g}"))
    return report


def max_sndr(cfg, sim: SimConfig):
    """Largest sampled SNDR and the theoretical ceiling it must stay below."""
    _, gmax = estimate_grid([Outage(0.0)], [cfg], sim, return_max=True)
    return gmax[0], ceiling(cfg.protocol, cfg.hw)

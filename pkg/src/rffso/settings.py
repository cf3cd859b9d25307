"""Flat key/value run settings and their INI-style text format.

Every key is named after the model symbol it sets. Values given in dB are
converted to linear scale only when a :class:`~rffso.analytics.LinkConfig`
is built.
"""

from __future__ import annotations

import configparser
import math
import re
from dataclasses import asdict, dataclass, fields, replace

from .analytics import FsoHop, LinkConfig
from .errors import DomainError, RfFsoError
from .fso_channel import DetectionParams, MalagaParams, PointingPathParams, path_loss
from .hardware import Aggregate, Hpa, Ideal
from .rf_channel import RfHopParams
from .sndr import Protocol


class ConfigError(RfFsoError):
    """Unparseable or out-of-range configuration; carries a source location when known."""

    def __init__(self, message, line=None, column=None):
        loc = f"line {line}, column {column}: " if line is not None else ""
        super().__init__(loc + message)
        self.line, self.column = line, column


AXES = ("snr_db", "gamma_th_db", "kappa", "ibo_db", "xi")
METRICS = ("op", "sep", "ec")
METHODS = ("analytic", "asymptotic", "mc", "bounds")


@dataclass(frozen=True)
class Settings:
    # [link]
    protocol: str = "AF"
    hardware: str = "ideal"
    kappa1: float = 0.3
    kappa2: float = 0.3
    hpa_kind: str = "SEL"
    ibo_db: float = 5.0
    M: int = 3
    m: int = 3
    rho_m: float = 0.7
    # [fso]
    alpha: float = 4.2
    beta: int = 5
    rho: float = 0.6
    b0: float = 0.596
    Omega: float = 1.32
    dphi: float = math.pi / 2
    xi: float = 0.9
    A0: float = 1.0
    sigma_atten: float = 0.0
    L_km: float = 1.0
    detection: str = "imdd"
    # [metric]
    gamma_th_db: float = 7.0
    modulation_c: float = 2.0
    varpi: float | None = None
    # [sweep]
    x_axis: str = "snr_db"
    start: float = 0.0
    stop: float = 40.0
    step: float = 1.0
    snr_db: float = 20.0
    mu1_db: float | None = None
    metrics: tuple = ("op",)
    methods: tuple = ("analytic",)
    # [mc]
    seed: int = 20240531
    samples: int = 100_000
    batch_size: int = 1 << 16
    workers: int = 1

    @property
    def r(self):
        return 1 if self.detection == "heterodyne" else 2

    @property
    def gamma_th(self):
        return 10.0 ** (self.gamma_th_db / 10.0)

    def hardware_profile(self):
        if self.hardware == "aggregate":
            return Aggregate(self.kappa1, self.kappa2)
        if self.hardware == "hpa":
            return Hpa(self.hpa_kind, self.ibo_db)
        return Ideal()

    def link_config(self) -> LinkConfig:
        """Resolve to a model config; ``snr_db`` is the transmit-referred optical SNR.

        The path loss ``exp(-sigma_atten L_km)`` scales the optical irradiance,
        so the optical SNR seen by the detector is ``mu_r I_l^r``.
        """
        pp = PointingPathParams(xi=self.xi, A0=self.A0, sigma_atten=self.sigma_atten, L=self.L_km)
        mu_r = 10.0 ** (self.snr_db / 10.0) * path_loss(pp) ** self.r
        mu1 = 10.0 ** ((self.snr_db if self.mu1_db is None else self.mu1_db) / 10.0)
        fso = FsoHop(
            MalagaParams(self.alpha, self.beta, self.rho, self.b0, self.Omega, self.dphi),
            pp,
            DetectionParams(self.r, mu_r),
        )
        rf = RfHopParams(mu1, self.M, self.m, self.rho_m)
        return LinkConfig(rf, fso, self.hardware_profile(), Protocol(self.protocol), self.varpi)

    def grid(self):
        n = int(round((self.stop - self.start) / self.step)) + 1
        return [self.start + i * self.step for i in range(n)]

    def at(self, x):
        """Settings with the sweep variable set to ``x``."""
        if self.x_axis == "kappa":
            return replace(self, kappa1=x, kappa2=x)
        return replace(self, **{self.x_axis: x})

    def resolved(self):
        d = asdict(self)
        d["metrics"], d["methods"] = list(self.metrics), list(self.methods)
        return d


SECTIONS = {
    "link": ["protocol", "hardware", "kappa1", "kappa2", "hpa_kind", "ibo_db", "M", "m", "rho_m"],
    "fso": ["alpha", "beta", "rho", "b0", "Omega", "dphi", "xi", "A0", "sigma_atten", "L_km", "detection", "r"],
    "metric": ["gamma_th_db", "modulation_c", "varpi"],
    "sweep": ["x_axis", "start", "stop", "step", "snr_db", "mu1_db", "metrics", "methods"],
    "mc": ["seed", "samples", "batch_size", "workers"],
}

KEY_HELP = {
    "protocol": "relaying protocol: AF or DF",
    "hardware": "impairment profile: ideal, aggregate or hpa",
    "kappa1": "source impairment level (aggregate profile)",
    "kappa2": "relay impairment level (aggregate profile)",
    "hpa_kind": "relay amplifier model for the hpa profile: SEL or TWTA",
    "ibo_db": "amplifier input back-off in dB",
    "M": "number of relays",
    "m": "selected relay rank (m-th worst; m = M is the best)",
    "rho_m": "correlation between outdated and actual CSI",
    "alpha": "Malaga large-scale turbulence parameter",
    "beta": "Malaga small-scale turbulence parameter (positive integer)",
    "rho": "fraction of scattered power coupled to the LOS component",
    "b0": "average power of the total scatter components",
    "Omega": "average power of the LOS component",
    "dphi": "phase difference between the LOS and coupled-scatter components (rad)",
    "xi": "pointing-error coefficient w_Leq / (2 sigma_s)",
    "A0": "fraction of collected power at zero displacement",
    "sigma_atten": "weather attenuation coefficient (1/km)",
    "L_km": "optical link length (km)",
    "detection": "heterodyne (r = 1) or imdd (r = 2)",
    "r": "alternative to detection: 1 or 2",
    "gamma_th_db": "outage threshold in dB",
    "modulation_c": "modulation constant c in Q(sqrt(c gamma)); 2 for CBPSK",
    "varpi": "capacity scaling; default 1 (heterodyne) or e/(2 pi) (IM/DD)",
    "x_axis": "sweep variable: " + ", ".join(AXES),
    "start": "first sweep value (axis units)",
    "stop": "last sweep value (axis units, inclusive)",
    "step": "sweep step (axis units, > 0)",
    "snr_db": "average SNR in dB when it is not the sweep variable",
    "mu1_db": "hold the RF SNR fixed at this value (default: mu1 = mu_r)",
    "metrics": "comma list of " + ", ".join(METRICS),
    "methods": "comma list of " + ", ".join(METHODS),
    "seed": "Monte-Carlo seed (64-bit unsigned)",
    "samples": "Monte-Carlo samples per point",
    "batch_size": "Monte-Carlo batch size (part of the random-stream layout)",
    "workers": "Monte-Carlo worker threads (does not change results)",
}

_TYPES = {f.name: f.type for f in fields(Settings)}


def _locate(text, section, key):
    sec = None
    for i, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if line.startswith("[") and line.endswith("]"):
            sec = line[1:-1].strip()
            continue
        m = re.match(r"\s*([A-Za-z_][\w]*)\s*[=:]\s*", raw)
        if m and sec == section and m.group(1) == key:
            return i, m.end() + 1
    return None, None


def _convert(key, value):
    typ = _TYPES[key]
    v = value.strip()
    if key in ("metrics", "methods"):
        items = tuple(s.strip().lower() for s in v.split(",") if s.strip())
        allowed = METRICS if key == "metrics" else METHODS
        bad = [s for s in items if s not in allowed]
        if bad or not items:
            raise ValueError(f"expected a comma list from {allowed}, got {v!r}")
        return items
    if "int" in typ:
        if v.lower() in ("none", "") and "None" in typ:
            return None
        return int(v)
    if "float" in typ:
        if v.lower() in ("none", "") and "None" in typ:
            return None
        x = float(v)
        if not math.isfinite(x):
            raise ValueError(f"non-finite value {v!r}")
        return x
    return v


def parse_settings(text, base: Settings | None = None):
    """Parse config text. Returns ``(settings, explicit_keys)``."""
    cp = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    cp.optionxform = str
    try:
        cp.read_string(text)
    except configparser.ParsingError as exc:
        lineno = exc.errors[0][0] if exc.errors else None
        raise ConfigError(f"malformed line {exc.errors[0][1] if exc.errors else ''}", lineno, 1) from None
    except configparser.DuplicateOptionError as exc:
        raise ConfigError(f"duplicate key {exc.option!r}", exc.lineno, 1) from None
    except configparser.Error as exc:
        raise ConfigError(str(exc).splitlines()[0]) from None
    values = {}
    for section in cp.sections():
        if section not in SECTIONS:
            line, _ = _locate_section(text, section)
            raise ConfigError(f"unknown section [{section}]; expected one of {sorted(SECTIONS)}", line, 1)
        for key, raw in cp.items(section):
            line, col = _locate(text, section, key)
            if key not in SECTIONS[section]:
                raise ConfigError(f"unknown key {key!r} in [{section}]", line, 1)
            if key == "r":
                if raw.strip() not in ("1", "2"):
                    raise ConfigError(f"r must be 1 or 2, got {raw.strip()!r}", line, col)
                values["detection"] = "heterodyne" if raw.strip() == "1" else "imdd"
                continue
            try:
                values[key] = _convert(key, raw)
            except ValueError as exc:
                raise ConfigError(f"bad value for {key!r}: {exc}", line, col) from None
    settings = replace(base or Settings(), **values)
    check_settings(settings)
    return settings, set(values)


def _locate_section(text, section):
    for i, raw in enumerate(text.splitlines(), start=1):
        if raw.strip() == f"[{section}]":
            return i, 1
    return None, None


def check_settings(s: Settings):
    """Range checks that the model constructors do not cover."""
    def bad(msg):
        raise ConfigError(msg)

    if s.protocol.upper() not in ("AF", "DF"):
        bad(f"protocol must be AF or DF, got {s.protocol!r}")
    object.__setattr__(s, "protocol", s.protocol.upper())
    if s.hardware.lower() not in ("ideal", "aggregate", "hpa"):
        bad(f"hardware must be ideal, aggregate or hpa, got {s.hardware!r}")
    object.__setattr__(s, "hardware", s.hardware.lower())
    if s.detection.lower() not in ("heterodyne", "imdd"):
        bad(f"detection must be heterodyne or imdd, got {s.detection!r}")
    object.__setattr__(s, "detection", s.detection.lower())
    if s.x_axis not in AXES:
        bad(f"x_axis must be one of {AXES}, got {s.x_axis!r}")
    if not s.step > 0:
        bad("step must be positive")
    if not s.start < s.stop:
        bad("start must be below stop")
    if s.samples < 0 or s.batch_size <= 0 or s.workers <= 0:
        bad("samples >= 0, batch_size > 0 and workers > 0 are required")
    if not 0 <= s.seed < 2**64:
        bad("seed must be a 64-bit unsigned integer")
    if not s.modulation_c > 0:
        bad("modulation_c must be positive")
    try:
        for x in s.grid():
            s.at(x).link_config()
    except DomainError as exc:
        bad(str(exc))

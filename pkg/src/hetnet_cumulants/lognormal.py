"""Log-normal algebra: cumulant fitting, partial moments and quotients."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import special

from .errors import InvalidArgumentError
from .specfun import normal_interval_probability


@dataclass(frozen=True)
class LogNormalParams:
    """Y = exp(mu + sigma * Z), Z standard normal; natural-log units."""

    mu: float
    sigma: float

    def __post_init__(self):
        if not math.isfinite(self.mu):
            raise InvalidArgumentError(f"log-normal mu must be finite, got {self.mu}")
        if not (math.isfinite(self.sigma) and self.sigma >= 0.0):
            raise InvalidArgumentError(f"log-normal sigma must be >= 0, got {self.sigma}")

    @property
    def mean(self) -> float:
        return math.exp(self.mu + 0.5 * self.sigma**2)

    @property
    def variance(self) -> float:
        s2 = self.sigma**2
        return math.expm1(s2) * math.exp(2.0 * self.mu + s2)

    @property
    def median(self) -> float:
        return math.exp(self.mu)

    def moment(self, n: float) -> float:
        return math.exp(n * self.mu + 0.5 * n**2 * self.sigma**2)

    def cdf(self, y):
        y = np.asarray(y, dtype=float)
        with np.errstate(divide="ignore"):
            logy = np.log(np.where(y > 0.0, y, 0.0))
        if self.sigma == 0.0:
            out = (logy >= self.mu).astype(float)
        else:
            out = special.ndtr((logy - self.mu) / self.sigma)
        return float(out) if out.ndim == 0 else out

    def sf(self, y):
        return 1.0 - self.cdf(y)

    def ppf(self, q):
        q = np.asarray(q, dtype=float)
        out = np.exp(self.mu + self.sigma * special.ndtri(q))
        return float(out) if out.ndim == 0 else out

    def sample(self, rng: np.random.Generator, size=None):
        return np.exp(self.mu + self.sigma * rng.standard_normal(size))

    def scaled(self, factor: float) -> "LogNormalParams":
        """Law of ``factor * Y`` for a positive constant."""
        return LogNormalParams(self.mu + math.log(factor), self.sigma)

    def to_db(self) -> tuple[float, float]:
        """(mean, std) of 10 log10 Y."""
        k = 10.0 / math.log(10.0)
        return k * self.mu, k * self.sigma


@dataclass(frozen=True)
class CumulantVec:
    """Cumulants kappa_1..kappa_N of a power variable, in mW**n."""

    values: tuple[float, ...]

    def __post_init__(self):
        vals = tuple(float(v) for v in self.values)
        if len(vals) < 1:
            raise InvalidArgumentError("CumulantVec needs at least one entry")
        object.__setattr__(self, "values", vals)

    def __len__(self):
        return len(self.values)

    def __getitem__(self, i):
        return self.values[i]

    def __iter__(self):
        return iter(self.values)

    def __add__(self, other: "CumulantVec") -> "CumulantVec":
        if not isinstance(other, CumulantVec):
            return NotImplemented
        if len(other) != len(self):
            raise InvalidArgumentError(
                f"cannot add cumulant vectors of length {len(self)} and {len(other)}"
            )
        return CumulantVec(tuple(a + b for a, b in zip(self.values, other.values)))

    @property
    def mean(self) -> float:
        return self.values[0]

    @property
    def variance(self) -> float:
        return self.values[1]

    @property
    def skewness(self) -> float:
        return self.values[2] / self.values[1] ** 1.5

    @property
    def excess_kurtosis(self) -> float:
        return self.values[3] / self.values[1] ** 2

    def as_array(self) -> np.ndarray:
        return np.array(self.values)

    @classmethod
    def zeros(cls, n: int) -> "CumulantVec":
        return cls((0.0,) * n)


def ln_from_cumulants(c: CumulantVec | Sequence[float]) -> LogNormalParams:
    """Log-normal matching the first two cumulants (mean and variance).

    ``mu = ln(k1**2 / sqrt(k1**2 + k2))`` and ``sigma**2 = ln(1 + k2 / k1**2)``.
    Higher cumulants are ignored.
    """
    k1, k2 = float(c[0]), float(c[1])
    if not (k1 > 0.0 and math.isfinite(k1)):
        raise InvalidArgumentError(f"log-normal fit needs kappa_1 > 0, got {k1}")
    if not (k2 >= 0.0 and math.isfinite(k2)):
        raise InvalidArgumentError(f"log-normal fit needs kappa_2 >= 0, got {k2}")
    ratio = k2 / k1**2
    sigma2 = math.log1p(ratio)
    mu = math.log(k1) - 0.5 * sigma2
    return LogNormalParams(mu, math.sqrt(sigma2))


def ln_cumulants(ln: LogNormalParams, order: int = 4) -> CumulantVec:
    """Exact cumulants of a log-normal law.

    Orders 1-4 use closed forms built on expm1(sigma**2), which stay accurate
    as sigma -> 0; higher orders go through the raw moments.
    """
    from .specfun import cumulants_from_moments

    if order > 4:
        return CumulantVec(tuple(cumulants_from_moments([ln.moment(n) for n in range(1, order + 1)])))
    s2 = ln.sigma**2
    w = math.exp(s2)
    em1 = math.expm1(s2)
    k2 = em1 * math.exp(2.0 * ln.mu + s2)
    values = [
        math.exp(ln.mu + 0.5 * s2),
        k2,
        (w + 2.0) * math.sqrt(em1) * k2**1.5,
        (w**4 + 2.0 * w**3 + 3.0 * w**2 - 6.0) * k2**2,
    ]
    return CumulantVec(tuple(values[:order]))


def partial_moment(ln: LogNormalParams, n: float, lo: float = 0.0, hi: float = math.inf) -> float:
    """Partial moment  int_lo^hi y**n f_Y(y) dy  of a log-normal Y.

    ``lo <= 0`` (including ``-inf``) means the lower end of the support and
    ``hi = inf`` the upper end. Closed form:
    ``exp(n mu + n**2 sigma**2 / 2) * [Q(lo~ - n sigma) - Q(hi~ - n sigma)]``
    with ``lo~ = (ln lo - mu) / sigma``.
    """
    lo, hi = float(lo), float(hi)
    if math.isnan(lo) or math.isnan(hi):
        raise InvalidArgumentError("partial moment bounds must not be NaN")
    if lo > hi:
        raise InvalidArgumentError(f"partial moment needs lo <= hi, got ({lo}, {hi})")
    if lo == hi:
        return 0.0
    log_lo = math.log(lo) if lo > 0.0 else -math.inf
    log_hi = math.log(hi) if hi > 0.0 else -math.inf
    if ln.sigma == 0.0:
        # point mass at exp(mu); interval taken as [lo, hi)
        inside = log_lo <= ln.mu < log_hi or (hi == math.inf and log_lo <= ln.mu)
        return ln.moment(n) if inside else 0.0
    shift = n * ln.sigma
    a = (log_lo - ln.mu) / ln.sigma - shift
    b = (log_hi - ln.mu) / ln.sigma - shift
    prob = normal_interval_probability(a, b)
    if prob == 0.0:
        return 0.0
    return ln.moment(n) * prob


def sir_combine(signal: LogNormalParams, interference: LogNormalParams) -> LogNormalParams:
    """Law of the quotient of two independent log-normals."""
    return LogNormalParams(
        signal.mu - interference.mu, math.hypot(signal.sigma, interference.sigma)
    )

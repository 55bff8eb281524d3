"""Special functions and quadrature primitives.

Gauss-Hermite rules, the Gaussian tail function Q, digamma, the Hurwitz
zeta value zeta(2, m) and partial Bell polynomials.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np
from numpy.polynomial import hermite
from scipy import special

from .errors import InvalidArgumentError

DEFAULT_QUADRATURE_ORDER = 32
MAX_QUADRATURE_ORDER = 128
MAX_BELL_ORDER = 12

# Q(u) underflows below the smallest subnormal double past this point.
_Q_SATURATION = 38.0


@dataclass(frozen=True)
class QuadratureRule:
    """Gauss-Hermite nodes and weights for the weight function exp(-eta**2)."""

    order: int
    nodes: np.ndarray
    weights: np.ndarray

    def integrate(self, func) -> float:
        """Approximate the integral of ``exp(-eta**2) * func(eta)`` over the real line."""
        return float(np.dot(self.weights, func(self.nodes)))

    def expect_normal(self, func, mean: float = 0.0, std: float = 1.0) -> float:
        """E[func(Z)] for Z ~ Normal(mean, std**2)."""
        values = func(mean + math.sqrt(2.0) * std * self.nodes)
        return float(np.dot(self.weights, values) / math.sqrt(math.pi))


@lru_cache(maxsize=None)
def gauss_hermite(order: int = DEFAULT_QUADRATURE_ORDER) -> QuadratureRule:
    """Return the ``order``-point Gauss-Hermite rule (physicists' convention).

    The rule integrates ``exp(-eta**2) * f(eta)`` exactly for polynomials ``f``
    of degree up to ``2 * order - 1``. Rules are cached and their arrays are
    read-only, so a rule may be shared freely.
    """
    if isinstance(order, bool) or int(order) != order:
        raise InvalidArgumentError(f"quadrature order must be an integer, got {order!r}")
    order = int(order)
    if not 1 <= order <= MAX_QUADRATURE_ORDER:
        raise InvalidArgumentError(
            f"quadrature order must be in [1, {MAX_QUADRATURE_ORDER}], got {order}"
        )
    nodes, weights = hermite.hermgauss(order)
    # symmetrise: hermgauss returns nodes mirrored only to ~1 ulp
    nodes = 0.5 * (nodes - nodes[::-1])
    weights = 0.5 * (weights + weights[::-1])
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return QuadratureRule(order, nodes, weights)


def q_function(u):
    """Gaussian tail probability Q(u) = Pr[N(0, 1) > u].

    Accepts scalars or arrays. Saturates to exactly 0 or 1 for |u| > 38.
    """
    arr = np.asarray(u, dtype=float)
    if np.isnan(arr).any():
        raise InvalidArgumentError("q_function is undefined for NaN")
    out = special.ndtr(-arr)
    out = np.where(arr > _Q_SATURATION, 0.0, out)
    out = np.where(arr < -_Q_SATURATION, 1.0, out)
    if out.ndim == 0:
        return float(out)
    return out


def normal_interval_probability(a, b):
    """Pr[a < N(0, 1) < b], evaluated on the tail side that keeps precision."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    upper = special.ndtr(-a) - special.ndtr(-b)
    lower = special.ndtr(b) - special.ndtr(a)
    out = np.where(a > 0.0, upper, lower)
    out = np.clip(out, 0.0, 1.0)
    if out.ndim == 0:
        return float(out)
    return out


def _check_positive(m: float, name: str) -> float:
    m = float(m)
    if not m > 0.0 or not math.isfinite(m):
        raise InvalidArgumentError(f"{name} requires a finite positive argument, got {m}")
    return m


def digamma(m: float) -> float:
    """Euler psi function psi(m) for m > 0."""
    return float(special.digamma(_check_positive(m, "digamma")))


def trigamma_hurwitz(m: float) -> float:
    """Hurwitz zeta zeta(2, m) = sum_{k>=0} 1 / (m + k)**2, i.e. the trigamma function."""
    return float(special.zeta(2.0, _check_positive(m, "trigamma_hurwitz")))


def bell_partial(n: int, k: int, x: Sequence):
    """Partial Bell polynomial B_{n,k}(x_1, ..., x_{n-k+1}).

    Uses the recurrence
    ``B_{n,k} = sum_{i=1}^{n-k+1} C(n-1, i-1) x_i B_{n-i,k-1}``
    with plain Python arithmetic, so integer or Fraction inputs give exact
    results. ``x`` may be longer than ``n - k + 1``; extra entries are ignored.
    """
    if not (1 <= n <= MAX_BELL_ORDER) or not (1 <= k <= n):
        raise InvalidArgumentError(
            f"bell_partial needs 1 <= k <= n <= {MAX_BELL_ORDER}, got n={n}, k={k}"
        )
    if len(x) < n - k + 1:
        raise InvalidArgumentError(
            f"bell_partial({n}, {k}) needs {n - k + 1} arguments, got {len(x)}"
        )
    used = list(x[: n - k + 1])
    # B_{n,k} never touches x_j for j > n - k + 1, so zero padding is harmless
    return _bell_table(n, used + [used[0] * 0] * (k - 1))[n][k]


def _bell_table(n: int, x: list) -> list[list]:
    # table[i][j] = B_{i,j}(x); B_{0,0} = 1 and B_{i,0} = 0 for i > 0
    zero = x[0] * 0
    table = [[zero] * (n + 1) for _ in range(n + 1)]
    table[0][0] = zero + 1
    for i in range(1, n + 1):
        for j in range(1, i + 1):
            acc = zero
            for r in range(1, i - j + 2):
                prev = table[i - r][j - 1]
                if prev:
                    acc = acc + math.comb(i - 1, r - 1) * x[r - 1] * prev
            table[i][j] = acc
    return table


def cumulants_from_moments(moments: Sequence[float]) -> list[float]:
    """Raw moments m_1..m_N to cumulants kappa_1..kappa_N via Faa di Bruno.

    kappa_n is the n-th derivative of ln f at the base point f = 1, where the
    derivatives of ``f`` are the raw moments and ln^(k)(1) = (-1)**(k-1) (k-1)!.
    """
    n_max = len(moments)
    if n_max < 1 or n_max > MAX_BELL_ORDER:
        raise InvalidArgumentError(f"need between 1 and {MAX_BELL_ORDER} moments")
    table = _bell_table(n_max, list(moments))
    out = []
    for n in range(1, n_max + 1):
        kappa = 0.0
        for k in range(1, n + 1):
            kappa += (-1) ** (k - 1) * math.factorial(k - 1) * table[n][k]
        out.append(kappa)
    return out

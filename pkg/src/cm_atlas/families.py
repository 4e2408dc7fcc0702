"""The function families built from divided differences of polygamma functions.

Everything lives on (-alpha, infinity) with alpha = min(s, t).  Divided
differences are computed from the polygamma fast path directly (never by
subtractive cancellation of near-equal ln-gamma values); the confluent
branches s == t and |t - s| == 1 are detected by exact float equality.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad

from .errors import (
    DegenerateParameterError,
    DomainError,
    EvalOverflowError,
    OrderError,
    QuadratureError,
)
from .specfun import digamma, ln_gamma, polygamma, psi_positive_root

__all__ = [
    "ParamTriple",
    "GridSpec",
    "DEFAULT_GRID",
    "divided_diff_psi",
    "delta",
    "delta_deriv",
    "theta",
    "theta_deriv",
    "theta_quadrature",
    "kernel_g",
    "h_func",
    "ln_h",
    "capital_lambda",
    "z_func",
    "phi",
    "q_func",
]

# Gaps below this are evaluated by the confluent midpoint fallback; above it
# the direct divided difference is free of harmful cancellation.
_CONFLUENT_GAP = 1e-8

_MAX_DERIV = 8


@dataclass(frozen=True)
class ParamTriple:
    """(s, t, lambda) with the derived boundary alpha and gap regime."""

    s: float
    t: float
    lam: float
    alpha: float = field(init=False)
    regime: str = field(init=False)

    def __post_init__(self) -> None:
        for name in ("s", "t", "lam"):
            v = float(getattr(self, name))
            if not math.isfinite(v):
                raise ValueError(f"{name} must be finite, got {v!r}")
            object.__setattr__(self, name, v)
        object.__setattr__(self, "alpha", min(self.s, self.t))
        gap = abs(self.t - self.s)
        if gap == 0.0:
            regime = "equal"
        elif gap == 1.0:
            regime = "unit-gap"
        elif gap < 1.0:
            regime = "sub-unit-gap"
        else:
            regime = "super-unit-gap"
        object.__setattr__(self, "regime", regime)

    @property
    def gap(self) -> float:
        return abs(self.t - self.s)


@dataclass(frozen=True)
class GridSpec:
    """Evaluation grid on (-alpha, infinity), offset delta above the boundary."""

    delta: float = 1e-3
    x_max: float = 1e4
    n_points: int = 400
    spacing: str = "log"

    def __post_init__(self) -> None:
        if not (self.delta > 0.0):
            raise ValueError("delta must be positive")
        if self.n_points < 2:
            raise ValueError("n_points must be at least 2")
        if self.spacing not in ("log", "linear"):
            raise ValueError(f"unknown spacing {self.spacing!r}")

    def points(self, alpha: float) -> np.ndarray:
        """Strictly increasing points in (-alpha + delta*(1-1e-12), x_max]."""
        u_max = self.x_max + alpha
        if u_max <= self.delta:
            raise ValueError("x_max must exceed -alpha + delta")
        if self.spacing == "log":
            u = np.geomspace(self.delta, u_max, self.n_points)
        else:
            u = np.linspace(self.delta, u_max, self.n_points)
        return -alpha + u


DEFAULT_GRID = GridSpec()


def _check_domain(x: float, alpha: float) -> float:
    x = float(x)
    if not math.isfinite(x) or x <= -alpha:
        raise DomainError(f"x must lie in (-alpha, inf) = ({-alpha}, inf), got {x!r}")
    return x


def _psi_value(k: int, x: float) -> float:
    return digamma(x).value if k == 0 else polygamma(k, x).value


def divided_diff_psi(k: int, s: float, t: float, x: float) -> float:
    """[psi^(k)(x+t) - psi^(k)(x+s)]/(t-s), confluent limit psi^(k+1)(x+s)."""
    if not 0 <= k <= 15:
        raise OrderError(f"divided difference order must be in [0, 15], got {k}")
    x = _check_domain(x, min(s, t))
    if s == t:
        return _psi_value(k + 1, x + s)
    if abs(t - s) < _CONFLUENT_GAP:
        # First-order Taylor fallback at the midpoint.
        return _psi_value(k + 1, x + 0.5 * (s + t))
    return (_psi_value(k, x + t) - _psi_value(k, x + s)) / (t - s)


def delta(p: ParamTriple, x: float) -> float:
    """Divided-difference di/tri-gamma combination D0(x)^2 + lam*D1(x)."""
    x = _check_domain(x, p.alpha)
    if p.regime == "unit-gap":
        return (1.0 - p.lam) / (x + p.alpha) ** 2
    d0 = divided_diff_psi(0, p.s, p.t, x)
    d1 = divided_diff_psi(1, p.s, p.t, x)
    return d0 * d0 + p.lam * d1


def delta_deriv(p: ParamTriple, n: int, x: float) -> float:
    """n-th derivative of delta via the binomial product expansion."""
    if not 0 <= n <= _MAX_DERIV:
        raise OrderError(f"derivative order must be in [0, {_MAX_DERIV}], got {n}")
    x = _check_domain(x, p.alpha)
    if p.regime == "unit-gap":
        u = x + p.alpha
        sign = 1.0 if n % 2 == 0 else -1.0
        return (1.0 - p.lam) * sign * math.factorial(n + 1) / u ** (n + 2)
    d = [divided_diff_psi(i, p.s, p.t, x) for i in range(n + 2)]
    acc = sum(math.comb(n, i) * d[i] * d[n - i] for i in range(n + 1))
    return acc + p.lam * d[n + 1]


def _theta_rational_coeffs(p: ParamTriple) -> tuple[float, float]:
    # Partial-fraction split of the rational part for s != t.
    inv = 1.0 / (p.t - p.s)
    return inv + p.lam, p.lam - inv


def theta(p: ParamTriple, x: float) -> float:
    """The telescoping remainder: D0 minus its rational comparison term."""
    x = _check_domain(x, p.alpha)
    if p.regime == "equal":
        u = x + p.s
        return polygamma(1, u).value - (1.0 + 2.0 * p.lam * u) / (2.0 * u * u)
    if p.regime == "unit-gap":
        u = x + p.alpha
        return 0.5 * (1.0 - p.lam) * (1.0 / u + 1.0 / (u + 1.0))
    d0 = divided_diff_psi(0, p.s, p.t, x)
    return d0 - (1.0 + p.lam * (2.0 * x + p.s + p.t)) / (2.0 * (x + p.s) * (x + p.t))


def theta_deriv(p: ParamTriple, n: int, x: float) -> float:
    """Exact n-th derivative of theta (divided difference minus partial fractions)."""
    if not 0 <= n <= _MAX_DERIV:
        raise OrderError(f"derivative order must be in [0, {_MAX_DERIV}], got {n}")
    if n == 0:
        return theta(p, x)
    x = _check_domain(x, p.alpha)
    sign = 1.0 if n % 2 == 0 else -1.0
    nfac = math.factorial(n)
    if p.regime == "equal":
        u = x + p.s
        rat = math.factorial(n + 1) / (2.0 * u ** (n + 2)) + p.lam * nfac / u ** (n + 1)
        return polygamma(n + 1, u).value - sign * rat
    if p.regime == "unit-gap":
        u = x + p.alpha
        return 0.5 * (1.0 - p.lam) * sign * nfac * (
            1.0 / u ** (n + 1) + 1.0 / (u + 1.0) ** (n + 1)
        )
    a, b = _theta_rational_coeffs(p)
    rat = 0.5 * (a / (x + p.s) ** (n + 1) + b / (x + p.t) ** (n + 1))
    return divided_diff_psi(n, p.s, p.t, x) - sign * nfac * rat


def kernel_g(s: float, t: float, u: float) -> float:
    """tanh((t-s)u/2) / [(t-s) tanh(u/2)]; exactly 1 when |t-s| == 1."""
    if s == t:
        raise DegenerateParameterError("kernel_g requires s != t")
    u = float(u)
    if not (u > 0.0) or not math.isfinite(u):
        raise DomainError(f"u must be positive and finite, got {u!r}")
    gap = t - s
    if abs(gap) == 1.0:
        return 1.0
    return math.tanh(0.5 * gap * u) / (gap * math.tanh(0.5 * u))


def theta_quadrature(p: ParamTriple, x: float) -> float:
    """Integral-representation cross-check of theta for s != t.

    Integrates (1/2)[g(u) - lam](e^(-(x+s)u) + e^(-(x+t)u)) over (0, U],
    with U chosen so the dropped tail is below 1e-16 of the prefactor.
    """
    if p.s == p.t:
        raise DegenerateParameterError("theta_quadrature requires s != t")
    x = _check_domain(x, p.alpha)
    decay = x + p.alpha
    upper = 37.0 / decay

    def integrand(u: float) -> float:
        g = kernel_g(p.s, p.t, u)
        return 0.5 * (g - p.lam) * (
            math.exp(-(x + p.s) * u) + math.exp(-(x + p.t) * u)
        )

    value, est = quad(integrand, 0.0, upper, limit=200, epsabs=1e-13, epsrel=1e-11)
    gmax = max(1.0, 1.0 / p.gap) + abs(p.lam)
    tail = 0.5 * gmax * (
        math.exp(-(x + p.s) * upper) / (x + p.s)
        + math.exp(-(x + p.t) * upper) / (x + p.t)
    )
    if est + tail > 1e-8 * (1.0 + abs(value)):
        raise QuadratureError(
            f"quadrature error estimate {est + tail:g} exceeds tolerance"
        )
    return value


def ln_h(p: ParamTriple, x: float) -> float:
    """log of the gamma-ratio family; its derivative in x equals theta."""
    x = _check_domain(x, p.alpha)
    if p.regime == "equal":
        u = x + p.s
        return -p.lam * math.log(u) + digamma(u).value + 0.5 / u
    inv = 1.0 / (p.t - p.s)
    return (
        0.5 * (inv - p.lam) * math.log(x + p.t)
        - 0.5 * (inv + p.lam) * math.log(x + p.s)
        + (ln_gamma(x + p.t) - ln_gamma(x + p.s)) * inv
    )


def h_func(p: ParamTriple, x: float) -> float:
    """exp(ln_h); raises EvalOverflowError rather than returning infinity."""
    value = ln_h(p, x)
    if value > 700.0:
        raise EvalOverflowError(
            f"ln_h = {value:g} would overflow; evaluate ln_h instead"
        )
    return math.exp(value)


def capital_lambda(s: float, t: float, x: float) -> float:
    """The threshold function whose range separates the two CM directions."""
    if s == t:
        raise DegenerateParameterError("capital_lambda requires s != t")
    x = _check_domain(x, min(s, t))
    denom = 2.0 * x + s + t
    if denom == 0.0:
        raise DomainError("pole at 2x + s + t = 0")
    d0 = divided_diff_psi(0, s, t, x)
    prod = (x + s) * (x + t)
    return (2.0 * prod / denom) * (d0 - 0.5 / prod)


def z_func(s: float, t: float, x: float) -> float:
    """Gamma-ratio mean minus x; confluent branch exp(psi(x+s)) - x."""
    x = _check_domain(x, min(s, t))
    if s == t:
        return math.exp(digamma(x + s).value) - x
    return math.exp((ln_gamma(x + t) - ln_gamma(x + s)) / (t - s)) - x


def phi(x: float) -> float:
    """psi(x) + ln(e^(1/x) - 1); increasing from -gamma to 0 on (0, inf)."""
    x = float(x)
    if not (x > 0.0) or not math.isfinite(x):
        raise DomainError(f"x must be positive and finite, got {x!r}")
    r = 1.0 / x
    if r > 30.0:
        # ln(e^r - 1) = r + ln(1 - e^-r); avoids overflow of expm1.
        log_term = r + math.log1p(-math.exp(-r))
    else:
        log_term = math.log(math.expm1(r))
    return digamma(x).value + log_term


def q_func(x: float) -> float:
    """Sharp-constant generator for the gamma-ratio exponential bounds.

    Removable singularity at the psi root c handled by a 1e-4 window in
    which the value 1/psi'(c) is returned; both branches agree to ~1e-8
    inside the window.
    """
    x = float(x)
    if not (x > 0.0) or not math.isfinite(x):
        raise DomainError(f"x must be positive and finite, got {x!r}")
    c = psi_positive_root()
    if abs(x - c) <= 1e-4:
        return 1.0 / polygamma(1, c).value
    psi_x = digamma(x).value
    denom = (psi_x - 1.0) * math.exp(psi_x) + 1.0
    return (ln_gamma(x) - ln_gamma(c)) / denom

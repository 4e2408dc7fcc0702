"""Registry of the standalone inequalities and limits, with sweep support.

Every check is callable pointwise and also exposed through ``REGISTRY`` as
a default sweep returning one verdict per configuration.  Margins are
oriented so that positive means the claimed inequality holds strictly;
gamma-ratio work is done in log space throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateParameterError, DomainError, OrderError
from .families import ParamTriple, capital_lambda, ln_h, phi, z_func
from .specfun import EULER_GAMMA, digamma, ln_gamma, polygamma

__all__ = [
    "InequalityVerdict",
    "check_thm3_divided_diff",
    "check_gamma_ratio",
    "check_watson",
    "check_p_polynomial",
    "check_qi_psi_bounds",
    "check_batir_psi",
    "check_exp_psi_bound",
    "check_alzer_ratio",
    "check_limits_suite",
    "sweep_thm3",
    "sweep_gamma_ratio",
    "REGISTRY",
    "run_registry",
]


@dataclass(frozen=True)
class InequalityVerdict:
    name: str
    domain_swept: str
    holds: bool
    worst_margin: float
    witness: tuple[float, float, float]  # (point, lhs, rhs)


def _verdict(name: str, domain: str, rows) -> InequalityVerdict:
    # rows: iterable of (point, margin, lhs, rhs); the worst margin wins.
    worst = min(rows, key=lambda r: r[1])
    point, margin, lhs, rhs = worst
    return InequalityVerdict(
        name=name,
        domain_swept=domain,
        holds=margin > 0.0,
        worst_margin=margin,
        witness=(point, lhs, rhs),
    )


def _psi_k(k: int, x: float) -> float:
    return digamma(x).value if k == 0 else polygamma(k, x).value


# ---------------------------------------------------------------------------
# Divided-difference double bound (sharp beta/gamma thresholds)

def _thm3_rows(a: float, b: float, k: int, beta: float, gamma: float):
    mid = (-1.0) ** (k - 1) * (_psi_k(k - 1, b) - _psi_k(k - 1, a)) / (b - a)
    half_fac = 0.5 * math.factorial(k - 1)
    inv = 1.0 / (b - a)
    lo = half_fac * ((inv + beta) / a**k + (beta - inv) / b**k)
    hi = half_fac * ((inv + gamma) / a**k + (gamma - inv) / b**k)
    if mid - lo <= hi - mid:
        return [(a, mid - lo, lo, mid)]
    return [(a, hi - mid, mid, hi)]


def check_thm3_divided_diff(
    a: float, b: float, k: int, beta: float, gamma: float
) -> InequalityVerdict:
    """Double bound on the divided difference of psi^(k-1) at (a, b)."""
    if a == b:
        raise DegenerateParameterError("check requires a != b")
    if not (a > 0.0 and b > 0.0):
        raise DomainError("a and b must be positive")
    if not 1 <= k <= 8:
        raise OrderError(f"k must be in [1, 8], got {k}")
    rows = _thm3_rows(a, b, k, beta, gamma)
    return _verdict(
        "thm3", f"point a={a:g}, b={b:g}, k={k}, beta={beta:g}, gamma={gamma:g}", rows
    )


def sweep_thm3(
    gap: float,
    k: int,
    beta: float,
    gamma: float,
    a_grid: np.ndarray | None = None,
) -> InequalityVerdict:
    if a_grid is None:
        a_grid = np.geomspace(1e-4, 1e4, 400)
    rows = []
    for a in a_grid:
        rows.extend(_thm3_rows(float(a), float(a) + gap, k, beta, gamma))
    return _verdict(
        "thm3",
        f"a in [{a_grid[0]:g}, {a_grid[-1]:g}], b-a={gap:g}, k={k}, "
        f"beta={beta:g}, gamma={gamma:g}",
        rows,
    )


# ---------------------------------------------------------------------------
# Gamma-ratio geometric-mean inequality

def check_gamma_ratio(a: float, b: float) -> InequalityVerdict:
    """[Gamma(b)/Gamma(a)]^(1/(b-a)) vs sqrt(ab)(a/b)^(1/(2(b-a))), log space."""
    if a == b or abs(b - a) == 1.0:
        raise DegenerateParameterError("requires a != b and |b-a| != 1")
    if not (a > 0.0 and b > 0.0):
        raise DomainError("a and b must be positive")
    lhs = (ln_gamma(b) - ln_gamma(a)) / (b - a)
    rhs = 0.5 * (math.log(a) + math.log(b)) + (math.log(a) - math.log(b)) / (
        2.0 * (b - a)
    )
    if abs(b - a) < 1.0:
        margin = rhs - lhs
        domain = f"point a={a:g}, b={b:g} (|b-a|<1, direct)"
    else:
        margin = lhs - rhs
        domain = f"point a={a:g}, b={b:g} (|b-a|>1, reversed)"
    return _verdict("gamma-ratio", domain, [(a, margin, lhs, rhs)])


def sweep_gamma_ratio(
    regime: str, n_pairs: int = 100, seed: int = 0
) -> InequalityVerdict:
    rng = np.random.default_rng(seed)
    rows = []
    for _ in range(n_pairs):
        a = float(rng.uniform(0.05, 50.0))
        if regime == "sub-unit":
            gap = float(rng.uniform(0.05, 0.95))
        elif regime == "super-unit":
            gap = float(rng.uniform(1.05, 10.0))
        else:
            raise ValueError(f"unknown regime {regime!r}")
        if rng.random() < 0.5 and a - gap > 0.01:
            b = a - gap
        else:
            b = a + gap
        v = check_gamma_ratio(a, b)
        rows.append((v.witness[0], v.worst_margin, v.witness[1], v.witness[2]))
    return _verdict(
        "gamma-ratio", f"{n_pairs} seeded random pairs, {regime} regime", rows
    )


# ---------------------------------------------------------------------------
# Watson refinement

def check_watson(x: float) -> InequalityVerdict:
    """Refined and original bounds on [Gamma(x+1)/Gamma(x+1/2)]^2, x > -1/2."""
    if not (x > -0.5):
        raise DomainError(f"x must exceed -1/2, got {x!r}")
    ratio_sq = math.exp(2.0 * (ln_gamma(x + 1.0) - ln_gamma(x + 0.5)))
    refined_rhs = (x + 0.5) * math.sqrt((x + 0.5) / (x + 1.0))
    rows = [
        (x, refined_rhs - ratio_sq, ratio_sq, refined_rhs),        # refined
        (x, 0.5 - (ratio_sq - x), ratio_sq - x, 0.5),              # original
        (x, (x + 0.5) - refined_rhs, refined_rhs, x + 0.5),        # refined => original
    ]
    return _verdict("watson", f"point x={x:g}", rows)


# ---------------------------------------------------------------------------
# Trigamma/tetragamma polynomial bound and positivity

_P_COEFFS = (75, 900, 4840, 15370, 31865, 45050, 44101, 29700, 13290, 3600, 450)


def p_polynomial(x: float) -> float:
    acc = 0.0
    for c in _P_COEFFS:
        acc = acc * x + c
    return acc


def check_p_polynomial(x: float) -> InequalityVerdict:
    """[psi'(x)]^2 + psi''(x) above its rational lower bound, and positive."""
    if not (x > 0.0):
        raise DomainError(f"x must be positive, got {x!r}")
    lhs = polygamma(1, x).value ** 2 + polygamma(2, x).value
    rhs = p_polynomial(x) / (900.0 * x**4 * (x + 1.0) ** 10)
    rows = [(x, lhs - rhs, lhs, rhs), (x, lhs, lhs, 0.0)]
    return _verdict("p-polynomial", f"point x={x:g}", rows)


# ---------------------------------------------------------------------------
# Two-sided rational sandwich for |psi^(k)|

def check_qi_psi_bounds(k: int, x: float) -> InequalityVerdict:
    """(k-1)!/x^k + k!/(2x^(k+1)) < |psi^(k)(x)| < (k-1)!/x^k + k!/x^(k+1)."""
    if not 1 <= k <= 8:
        raise OrderError(f"k must be in [1, 8], got {k}")
    if not (x > 0.0):
        raise DomainError(f"x must be positive, got {x!r}")
    mid = abs(polygamma(k, x).value)
    base = math.factorial(k - 1) / x**k
    corr = math.factorial(k) / x ** (k + 1)
    lo = base + 0.5 * corr
    hi = base + corr
    rows = [(x, mid - lo, lo, mid), (x, hi - mid, mid, hi)]
    return _verdict("qi-psi", f"point k={k}, x={x:g}", rows)


# ---------------------------------------------------------------------------
# Exponential two-sided digamma bound (sharpened constants -gamma, 0)

def check_batir_psi(
    x: float, a: float = -EULER_GAMMA, b: float = 0.0
) -> InequalityVerdict:
    """a - ln(e^(1/x) - 1) < psi(x) < b - ln(e^(1/x) - 1), i.e. a < phi(x) < b."""
    if not (x > 0.0):
        raise DomainError(f"x must be positive, got {x!r}")
    v = phi(x)
    rows = [(x, v - a, a, v), (x, b - v, v, b)]
    return _verdict("batir", f"point x={x:g}, a={a:g}, b={b:g}", rows)


def check_batir_one_sided(x: float) -> InequalityVerdict:
    """psi(x) > ln(pi^2/6) - gamma - ln(e^(1/x) - 1) for x >= 2."""
    if not (x >= 2.0):
        raise DomainError(f"x must be >= 2, got {x!r}")
    lhs = phi(x)
    rhs = math.log(math.pi**2 / 6.0) - EULER_GAMMA
    return _verdict(
        "batir-one-sided", f"point x={x:g}", [(x, lhs - rhs, rhs, lhs)]
    )


# ---------------------------------------------------------------------------
# Exponential |psi^(n)| envelope (log-space margins)

def _exp_psi_rows(n: int, x: float, alpha: float, beta: float):
    psi_x = digamma(x).value
    log_mid = math.log(abs(polygamma(n, x).value))
    base = math.log(math.factorial(n - 1)) - n * psi_x
    log_lo = base + alpha / x
    log_hi = base + beta / x
    return [(x, log_mid - log_lo, log_lo, log_mid), (x, log_hi - log_mid, log_mid, log_hi)]


def check_exp_psi_bound(
    n: int, x: float, alpha: float | None = None, beta: float = 0.0
) -> InequalityVerdict:
    """(n-1)! exp[alpha/x - n psi(x)] < |psi^(n)(x)| < (n-1)! exp[beta/x - n psi(x)].

    Margins (and the recorded lhs/rhs) are in log space to avoid overflow
    near the boundary.  Defaults are the sharp constants (-n, 0).
    """
    if not 1 <= n <= 6:
        raise OrderError(f"n must be in [1, 6], got {n}")
    if not (x > 0.0):
        raise DomainError(f"x must be positive, got {x!r}")
    if alpha is None:
        alpha = -float(n)
    rows = _exp_psi_rows(n, x, alpha, beta)
    return _verdict(
        "exp-psi",
        f"point n={n}, x={x:g}, alpha={alpha:g}, beta={beta:g} (log-space)",
        rows,
    )


# ---------------------------------------------------------------------------
# Successive-polygamma power ratio

def check_alzer_ratio(n: int, x: float) -> InequalityVerdict:
    """(-1)^n psi^(n+1)(x) < n/((n-1)!)^(1/n) [(-1)^(n-1) psi^(n)(x)]^(1+1/n)."""
    if not 1 <= n <= 6:
        raise OrderError(f"n must be in [1, 6], got {n}")
    if not (x > 0.0):
        raise DomainError(f"x must be positive, got {x!r}")
    lhs = (-1.0) ** n * polygamma(n + 1, x).value
    base = (-1.0) ** (n - 1) * polygamma(n, x).value
    rhs = n / math.factorial(n - 1) ** (1.0 / n) * base ** (1.0 + 1.0 / n)
    return _verdict(
        "alzer", f"point n={n}, x={x:g}", [(x, rhs - lhs, lhs, rhs)]
    )


# ---------------------------------------------------------------------------
# Limits suite

def _staged_limit(name, stages, fn, target, tol):
    residuals = [abs(fn(arg) - target) for arg in stages]
    shrinking = all(r1 > r2 for r1, r2 in zip(residuals, residuals[1:]))
    final = residuals[-1]
    margin = tol - final if shrinking else -final - tol
    return InequalityVerdict(
        name=name,
        domain_swept=f"staged args {stages[0]:g}..{stages[-1]:g}, target {target:g}",
        holds=shrinking and final <= tol,
        worst_margin=margin,
        witness=(float(stages[-1]), fn(stages[-1]), target),
    )


def _staged_divergence(name, stages, fn, direction, threshold):
    values = [fn(arg) for arg in stages]
    if direction == "down":
        monotone = all(v1 > v2 for v1, v2 in zip(values, values[1:]))
        margin = -threshold - values[-1]
    else:
        monotone = all(v1 < v2 for v1, v2 in zip(values, values[1:]))
        margin = values[-1] - threshold
    return InequalityVerdict(
        name=name,
        domain_swept=f"staged args {stages[0]:g}..{stages[-1]:g}, diverges {direction}",
        holds=monotone and margin > 0.0,
        worst_margin=margin,
        witness=(float(stages[-1]), values[-1], math.copysign(threshold, margin)),
    )


def check_limits_suite() -> list[InequalityVerdict]:
    """All the asymptotic statements, each at staged arguments.

    Residuals must shrink monotonically across stages and the final one
    must be below the per-limit tolerance.  Also includes the sign tests
    for e^(psi(x+1)) - x being decreasing and convex.
    """
    out = []
    s = 0.7
    out.append(_staged_limit(
        "limit-wendel", [1e2, 1e3, 1e4, 1e5],
        lambda x: math.exp(ln_gamma(x + s) - s * math.log(x) - ln_gamma(x)),
        1.0, 1e-5,
    ))
    k = 3
    out.append(_staged_limit(
        "limit-scaled-polygamma", [1e2, 1e3, 1e4, 1e5],
        lambda x: (-1.0) ** (k + 1) * x**k * polygamma(k, x).value,
        float(math.factorial(k - 1)), 1e-3,
    ))
    out.append(_staged_limit(
        "limit-u-psi", [1e-4, 1e-5, 1e-6, 1e-7],
        lambda u: u * digamma(u).value,
        -1.0, 1e-5,
    ))
    out.append(_staged_limit(
        "limit-phi-infinity", [1e2, 1e3, 1e4, 1e5], phi, 0.0, 1e-5,
    ))
    out.append(_staged_limit(
        "limit-phi-zero", [1e-3, 1e-4, 1e-5, 1e-6], phi, -EULER_GAMMA, 1e-3,
    ))
    # Residual decays like 1/x^2 and sinks under cancellation noise past
    # ~1e5, so the staging stops at 1e4.
    out.append(_staged_limit(
        "limit-lambda-infinity", [1e2, 1e3, 1e4],
        lambda x: capital_lambda(0.0, 0.5, x),
        1.0, 1e-4,
    ))
    out.append(_staged_limit(
        "limit-lambda-boundary", [1e-4, 1e-5, 1e-6, 1e-7],
        lambda u: capital_lambda(0.0, 0.5, u),
        2.0, 1e-3,
    ))
    out.append(_staged_limit(
        "limit-h-critical", [10.0, 1e2, 1e3],
        lambda x: ln_h(ParamTriple(0.0, 0.5, 1.0), x),
        0.0, 1e-6,
    ))
    out.append(_staged_divergence(
        "limit-h-supercritical", [1e2, 1e3, 1e4, 1e5, 1e6],
        lambda x: ln_h(ParamTriple(0.0, 0.5, 2.0), x),
        "down", 5.0,
    ))
    out.append(_staged_divergence(
        "limit-h-subcritical", [1e2, 1e3, 1e4, 1e5, 1e6],
        lambda x: ln_h(ParamTriple(0.0, 0.5, 0.5), x),
        "up", 5.0,
    ))
    # e^(psi(x+1)) - x is strictly decreasing and strictly convex on (-1, inf).
    # Below x+1 ~ 0.04 the exp(psi) term underflows relative to x and the
    # sampled values are numerically linear, so the grid starts there.
    xs = -1.0 + np.geomspace(4e-2, 1e3, 300)
    vals = np.array([z_func(1.0, 1.0, float(x)) for x in xs])
    d1 = np.diff(vals)
    # Second divided differences (the grid is log-spaced, so plain double
    # differencing would not test convexity).
    slope = d1 / np.diff(xs)
    d2 = np.diff(slope) / (xs[2:] - xs[:-2])
    out.append(InequalityVerdict(
        name="psi-exp-shift-decreasing",
        domain_swept=f"grid x in ({xs[0]:g}, {xs[-1]:g}], 300 log points",
        holds=bool(np.all(d1 < 0.0)),
        worst_margin=float(-d1.max()),
        witness=(float(xs[int(d1.argmax())]), float(d1.max()), 0.0),
    ))
    out.append(InequalityVerdict(
        name="psi-exp-shift-convex",
        domain_swept=f"grid x in ({xs[0]:g}, {xs[-1]:g}], 300 log points",
        holds=bool(np.all(d2 > 0.0)),
        worst_margin=float(d2.min()),
        witness=(float(xs[int(d2.argmin()) + 1]), float(d2.min()), 0.0),
    ))
    return out


# ---------------------------------------------------------------------------
# Default sweeps (the CLI registry)

def _default_grid(lo: float = 1e-3, hi: float = 1e4, n: int = 400) -> np.ndarray:
    return np.geomspace(lo, hi, n)


def _sweep_pointwise(name, domain, points, row_fn) -> InequalityVerdict:
    rows = []
    for x in points:
        rows.extend(row_fn(float(x)))
    return _verdict(name, domain, rows)


def _registry_thm3(**kw) -> list[InequalityVerdict]:
    if kw:
        return [check_thm3_divided_diff(
            kw["a"], kw["b"], int(kw.get("k", 1)), kw["beta"], kw["gamma"]
        )]
    out = []
    for gap, beta, gamma in ((0.5, 1.0, 2.0), (2.0, 0.5, 1.0)):
        for k in (1, 2, 3):
            out.append(sweep_thm3(gap, k, beta, gamma))
    return out


def _registry_gamma_ratio(**kw) -> list[InequalityVerdict]:
    if kw:
        return [check_gamma_ratio(kw["a"], kw["b"])]
    return [sweep_gamma_ratio("sub-unit"), sweep_gamma_ratio("super-unit")]


def _registry_watson(**kw) -> list[InequalityVerdict]:
    if kw:
        return [check_watson(kw["x"])]
    xs = -0.5 + _default_grid(1e-3, 1e4 + 0.5)
    def rows(x):
        v = check_watson(x)
        return [(x, v.worst_margin, v.witness[1], v.witness[2])]
    return [_sweep_pointwise("watson", "x in (-0.5, 1e4], 400 log points", xs, rows)]


def _registry_p_polynomial(**kw) -> list[InequalityVerdict]:
    if kw:
        return [check_p_polynomial(kw["x"])]
    # Above ~1e3 the analytic margin (~1/(6 x^6)) sinks under binary64
    # rounding of the cancellation in psi'^2 + psi''.
    xs = _default_grid(1e-3, 1e3)
    def rows(x):
        v = check_p_polynomial(x)
        return [(x, v.worst_margin, v.witness[1], v.witness[2])]
    return [_sweep_pointwise(
        "p-polynomial", "x in [1e-3, 1e3], 400 log points", xs, rows
    )]


def _registry_qi_psi(**kw) -> list[InequalityVerdict]:
    if kw:
        return [check_qi_psi_bounds(int(kw.get("k", 1)), kw["x"])]
    out = []
    xs = _default_grid()
    for k in range(1, 9):
        def rows(x, k=k):
            v = check_qi_psi_bounds(k, x)
            return [(x, v.worst_margin, v.witness[1], v.witness[2])]
        out.append(_sweep_pointwise(
            "qi-psi", f"k={k}, x in [1e-3, 1e4], 400 log points", xs, rows
        ))
    return out


def _registry_batir(**kw) -> list[InequalityVerdict]:
    if kw:
        return [check_batir_psi(
            kw["x"], kw.get("a", -EULER_GAMMA), kw.get("b", 0.0)
        )]
    xs = _default_grid(1e-4, 1e4)
    def rows(x):
        v = check_batir_psi(x)
        return [(x, v.worst_margin, v.witness[1], v.witness[2])]
    out = [_sweep_pointwise("batir", "x in [1e-4, 1e4], 400 log points", xs, rows)]
    xs2 = np.geomspace(2.0, 1e4, 200)
    def rows2(x):
        v = check_batir_one_sided(x)
        return [(x, v.worst_margin, v.witness[1], v.witness[2])]
    out.append(_sweep_pointwise(
        "batir-one-sided", "x in [2, 1e4], 200 log points", xs2, rows2
    ))
    return out


def _registry_exp_psi(**kw) -> list[InequalityVerdict]:
    if kw:
        n = int(kw.get("n", 1))
        return [check_exp_psi_bound(
            n, kw["x"], kw.get("alpha"), kw.get("beta", 0.0)
        )]
    out = []
    xs = _default_grid(1e-4, 1e4)
    for n in range(1, 7):
        out.append(_sweep_pointwise(
            "exp-psi",
            f"n={n}, x in [1e-4, 1e4], 400 log points (log-space)",
            xs,
            lambda x, n=n: _exp_psi_rows(n, x, -float(n), 0.0),
        ))
    return out


def _registry_alzer(**kw) -> list[InequalityVerdict]:
    if kw:
        return [check_alzer_ratio(int(kw.get("n", 1)), kw["x"])]
    out = []
    xs = _default_grid()
    for n in range(1, 7):
        def rows(x, n=n):
            v = check_alzer_ratio(n, x)
            return [(x, v.worst_margin, v.witness[1], v.witness[2])]
        out.append(_sweep_pointwise(
            "alzer", f"n={n}, x in [1e-3, 1e4], 400 log points", xs, rows
        ))
    return out


def _registry_limits(**kw) -> list[InequalityVerdict]:
    return check_limits_suite()


REGISTRY = {
    "thm3": _registry_thm3,
    "gamma-ratio": _registry_gamma_ratio,
    "watson": _registry_watson,
    "p-polynomial": _registry_p_polynomial,
    "qi-psi": _registry_qi_psi,
    "batir": _registry_batir,
    "exp-psi": _registry_exp_psi,
    "alzer": _registry_alzer,
    "limits": _registry_limits,
}


def run_registry(name: str | None = None, **kw) -> list[InequalityVerdict]:
    """Run one named check (or all of them) and collect the verdicts."""
    if name is not None:
        if name not in REGISTRY:
            raise KeyError(f"unknown inequality name {name!r}")
        return REGISTRY[name](**kw)
    out = []
    for key in REGISTRY:
        out.extend(REGISTRY[key]())
    return out

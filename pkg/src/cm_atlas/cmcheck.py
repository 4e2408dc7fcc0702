"""Complete-monotonicity verification engine.

Checks the alternating-derivative sign pattern (-1)^n f^(n)(x) >= 0 on a
grid for the delta and theta families, classifies the outcome against the
sharp-threshold predicate (lambda vs 1 and 1/|t-s|), recovers the sharp
lambda values by bisection, and locates violation witnesses.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import BracketError, OrderError
from .families import DEFAULT_GRID, GridSpec, ParamTriple, delta_deriv, theta_deriv

__all__ = [
    "Theorem1Prediction",
    "CmReport",
    "ViolationWitness",
    "theorem1_predicate",
    "cm_verify",
    "sharp_lambda_estimate",
    "find_violation",
]

# A sampled value counts as a sign violation only below -SIGN_TOL*(1+|f|);
# true necessity violations grow polynomially past the threshold while
# rounding noise does not.
SIGN_TOL = 1e-10
ZERO_TOL = 1e-12

_FAMILIES = {"delta": delta_deriv, "theta": theta_deriv}


@dataclass(frozen=True)
class Theorem1Prediction:
    """Tri-state CM classification: each field is 'yes', 'no' or 'unknown'."""

    cm: str
    neg_cm: str
    identically_zero: bool = False

    @property
    def verdict(self) -> str:
        if self.identically_zero:
            return "identically-zero"
        if self.cm == "yes":
            return "CM-consistent"
        if self.neg_cm == "yes":
            return "negCM-consistent"
        if self.cm == "no" and self.neg_cm == "no":
            return "neither"
        return "unknown"


@dataclass(frozen=True)
class ViolationWitness:
    order: int
    x: float
    value: float


@dataclass(frozen=True)
class CmReport:
    family: str
    params: ParamTriple
    max_order: int
    per_order_min: tuple[tuple[int, float, float], ...]
    verdict: str
    predicted: str
    agree: bool
    inconsistent: bool


def theorem1_predicate(p: ParamTriple) -> Theorem1Prediction:
    """Sharp-threshold classification of the delta/theta families.

    The same thresholds govern both families.  The s == t case leaves the
    negated direction unclassified ('unknown') rather than extrapolating.
    """
    lam = p.lam
    if p.regime == "equal":
        return Theorem1Prediction(cm=_yn(lam <= 1.0), neg_cm="unknown")
    gap = p.gap
    if p.regime == "unit-gap":
        if lam == 1.0:
            return Theorem1Prediction(cm="yes", neg_cm="yes", identically_zero=True)
        return Theorem1Prediction(cm=_yn(lam < 1.0), neg_cm=_yn(lam > 1.0))
    if p.regime == "sub-unit-gap":
        return Theorem1Prediction(cm=_yn(lam <= 1.0), neg_cm=_yn(lam >= 1.0 / gap))
    return Theorem1Prediction(cm=_yn(lam <= 1.0 / gap), neg_cm=_yn(lam >= 1.0))


def _yn(flag: bool) -> str:
    return "yes" if flag else "no"


def cm_verify(
    family: str,
    p: ParamTriple,
    max_order: int = 6,
    grid: GridSpec = DEFAULT_GRID,
) -> CmReport:
    """Evaluate (-1)^n f^(n) for n = 0..max_order on the grid and classify."""
    deriv = _family_deriv(family)
    if not 0 <= max_order <= 8:
        raise OrderError(f"max_order must be in [0, 8], got {max_order}")
    xs = grid.points(p.alpha)
    cm_ok = True
    neg_ok = True
    zero = True
    per_order: list[tuple[int, float, float]] = []
    for n in range(max_order + 1):
        best = math.inf
        best_x = xs[0]
        for x in xs:
            f = deriv(p, n, float(x))
            v = f if n % 2 == 0 else -f
            tol = SIGN_TOL * (1.0 + abs(f))
            if v < -tol:
                cm_ok = False
            if v > tol:
                neg_ok = False
            if abs(f) > ZERO_TOL:
                zero = False
            if v < best:
                best = v
                best_x = float(x)
        per_order.append((n, best, best_x))
    inconsistent = False
    if zero:
        verdict = "identically-zero"
    elif cm_ok and neg_ok:
        # Should be impossible at nonzero magnitude; flag a numerical fault.
        inconsistent = True
        verdict = "neither"
    elif cm_ok:
        verdict = "CM-consistent"
    elif neg_ok:
        verdict = "negCM-consistent"
    else:
        verdict = "neither"
    pred = theorem1_predicate(p)
    return CmReport(
        family=family,
        params=p,
        max_order=max_order,
        per_order_min=tuple(per_order),
        verdict=verdict,
        predicted=pred.verdict,
        agree=_compatible(verdict, pred),
        inconsistent=inconsistent,
    )


def _family_deriv(family: str):
    try:
        return _FAMILIES[family]
    except KeyError:
        raise ValueError(f"unknown family {family!r}; expected 'delta' or 'theta'")


def _compatible(verdict: str, pred: Theorem1Prediction) -> bool:
    if pred.identically_zero:
        return verdict == "identically-zero"
    cm_like = verdict in ("CM-consistent", "identically-zero")
    neg_like = verdict in ("negCM-consistent", "identically-zero")
    if pred.cm == "yes" and not cm_like:
        return False
    if pred.cm == "no" and cm_like:
        return False
    if pred.neg_cm == "yes" and not neg_like:
        return False
    if pred.neg_cm == "no" and neg_like:
        return False
    return True


def sharp_lambda_estimate(
    family: str,
    s: float,
    t: float,
    direction: str,
    max_order: int = 4,
    grid: GridSpec = DEFAULT_GRID,
    bracket: tuple[float, float] = (-10.0, 10.0),
    tol: float = 1e-4,
) -> float:
    """Recover the sharp lambda threshold by bisection on the verdict.

    The families are affine in lambda, so the passing set is a half-line
    and bisection over the bracket is valid.  direction 'cm-upper' finds
    the largest CM lambda; 'negcm-lower' the smallest negCM lambda.
    """
    if direction not in ("cm-upper", "negcm-lower"):
        raise ValueError(f"unknown direction {direction!r}")
    if direction == "negcm-lower" and s == t:
        raise ValueError("negcm-lower is undefined for s == t")

    passing = ("CM-consistent", "identically-zero") if direction == "cm-upper" \
        else ("negCM-consistent", "identically-zero")

    def passes(lam: float) -> bool:
        report = cm_verify(family, ParamTriple(s, t, lam), max_order, grid)
        return report.verdict in passing

    lo, hi = bracket
    pass_lo, pass_hi = passes(lo), passes(hi)
    if pass_lo == pass_hi:
        raise BracketError(
            f"bracket endpoints {bracket} both classify as "
            f"{'passing' if pass_lo else 'failing'}"
        )
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if passes(mid) == pass_lo:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def find_violation(
    family: str,
    p: ParamTriple,
    sign: str,
    max_order: int = 4,
    grid: GridSpec = DEFAULT_GRID,
) -> ViolationWitness | None:
    """Worst sign-pattern violation, or None if the pattern holds on the grid.

    Points are scanned extremes-first since necessity failures live at the
    ends of the domain, but the returned witness is the global worst.
    """
    if sign not in ("cm", "negcm"):
        raise ValueError(f"unknown sign {sign!r}; expected 'cm' or 'negcm'")
    deriv = _family_deriv(family)
    xs = grid.points(p.alpha)
    order_idx = sorted(range(len(xs)), key=lambda i: min(i, len(xs) - 1 - i))
    worst: ViolationWitness | None = None
    worst_norm = -SIGN_TOL
    for n in range(max_order + 1):
        for i in order_idx:
            x = float(xs[i])
            f = deriv(p, n, x)
            v = f if n % 2 == 0 else -f
            if sign == "negcm":
                v = -v
            norm = v / (1.0 + abs(f))
            if norm < worst_norm:
                worst_norm = norm
                worst = ViolationWitness(order=n, x=x, value=v)
    return worst

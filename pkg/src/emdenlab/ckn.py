"""Weighted Rayleigh quotient and its sharp constant on radial profiles.

The quotient E(u) = ||Du||^2_{L^2, weight r^a} / ||u||^2_{L^q, weight r^b}
is finite on the admissible band a - 2 <= 2b/q <= a and scale-free exactly
when the dimensional balance (N+b)/q + 1 = (N+a)/2 holds.  On the balance
manifold q - 1 is the critical source exponent, and in the radial region
the infimum of E is attained by the explicit bubble profile, which turns
the two integrals into Beta functions.  Past the symmetry-breaking
threshold (a > 0, b large) the radial bubble is no longer the minimizer
and best_constant refuses rather than report a wrong constant.

Quadrature is decade-by-decade Gauss-Kronrod with a power-law origin stub
and a fitted power-law tail; a tail flatter than 1/r is reported as a
divergent norm instead of being truncated into a finite lie.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, Optional, Tuple

from scipy.integrate import IntegrationWarning, quad

from .closed_forms import bubble_eval, normalized_bubble
from .errors import (
    BalanceViolated,
    DegenerateWeight,
    DimensionTooSmall,
    InadmissibleWeights,
    NonintegrableProfile,
    NotInRange,
    SymmetryBreakingRegion,
)
from .params import (
    BALANCE_REL_TOL,
    SYMMETRY_BREAKING,
    ProblemParams,
    balance_residual,
    fs_region,
)
from .pohozaev import sphere_area

ADMISSIBLE = "Admissible"
BAND_VIOLATED = "BandViolated"
BALANCE_VIOLATED = "BalanceViolated"

_R_ORIGIN = 1e-8
_DECADE_MAX = 40
_TAIL_REL = 1e-10
_TAIL_FIT_MIN_R = 1e2
_DIVERGENCE_R = 1e6

RadialProfile = Callable[[float], Tuple[float, float]]


@dataclass(frozen=True)
class CknTriple:
    N: int
    a: float
    b: float
    q: float

    def to_dict(self) -> dict:
        return {"N": self.N, "a": self.a, "b": self.b, "q": self.q}


@dataclass(frozen=True)
class BalanceReport:
    verdict: str
    band_low_ok: bool
    band_high_ok: bool
    balance_defect: float
    balance_ok: bool
    q_gt_2: bool
    b_gt_a_minus_2: bool
    a_minus_2_gt_minus_N: bool

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "band_low_ok": self.band_low_ok,
            "band_high_ok": self.band_high_ok,
            "balance_defect": self.balance_defect,
            "balance_ok": self.balance_ok,
            "q_gt_2": self.q_gt_2,
            "b_gt_a_minus_2": self.b_gt_a_minus_2,
            "a_minus_2_gt_minus_N": self.a_minus_2_gt_minus_N,
        }


@dataclass(frozen=True)
class EnergyReport:
    grad_norm_sq: float
    q_norm: float
    rayleigh: float
    closed_form: Optional[float]
    s_estimate: float

    def to_dict(self) -> dict:
        return {
            "grad_norm_sq": self.grad_norm_sq,
            "q_norm": self.q_norm,
            "rayleigh": self.rayleigh,
            "closed_form": self.closed_form,
            "s_estimate": self.s_estimate,
        }


def _validate_triple(triple: CknTriple) -> None:
    if triple.N < 3:
        raise DimensionTooSmall(f"N = {triple.N}, need N >= 3")
    if triple.q < 2:
        raise NotInRange(f"q = {triple.q}, need q >= 2")


def check_balance(triple: CknTriple, tol_bal: float = BALANCE_REL_TOL) -> BalanceReport:
    """Verdict on the two structural conditions, balance checked first.

    The report also carries the separate necessary conditions for a
    positive extremal (q > 2 and b > a - 2 > -N) so a caller can see
    which one fails even when the headline verdict is about balance.
    """
    _validate_triple(triple)
    N, a, b, q = triple.N, triple.a, triple.b, triple.q
    defect = balance_residual(N, a, b, q)
    scale = max(1.0, abs((N + a) / 2.0))
    balance_ok = abs(defect) <= tol_bal * scale
    band_low = a - 2.0 <= 2.0 * b / q
    band_high = 2.0 * b / q <= a
    if not balance_ok:
        verdict = BALANCE_VIOLATED
    elif not (band_low and band_high):
        verdict = BAND_VIOLATED
    else:
        verdict = ADMISSIBLE
    return BalanceReport(
        verdict=verdict,
        band_low_ok=band_low,
        band_high_ok=band_high,
        balance_defect=defect,
        balance_ok=balance_ok,
        q_gt_2=q > 2.0,
        b_gt_a_minus_2=b > a - 2.0,
        a_minus_2_gt_minus_N=a - 2.0 > -float(N),
    )


def _integrate_radial(weight_exp: float, f: Callable[[float], float], label: str) -> float:
    """int_0^inf r^weight_exp f(r) dr, f >= 0, by decade-wise quadrature.

    Below _R_ORIGIN the integrand is closed in its fitted local power law;
    the upper end stops once the fitted tail power predicts a remainder
    under _TAIL_REL relative, and a tail flatter than 1/r past
    _DIVERGENCE_R raises NonintegrableProfile.
    """

    def g(r: float) -> float:
        return r**weight_exp * f(r)

    g0, g1 = g(_R_ORIGIN), g(10.0 * _R_ORIGIN)
    if g0 > 0.0 and g1 > 0.0:
        slope = math.log10(g1 / g0)
        if slope <= -1.0 + 1e-9:
            raise NonintegrableProfile(
                f"{label}: integrand ~ r^{slope:.6f} at the origin"
            )
        total = g0 * _R_ORIGIN / (slope + 1.0)
    else:
        total = 0.0
    with warnings.catch_warnings():
        # round-off reports are expected at epsrel this close to machine eps
        warnings.simplefilter("ignore", IntegrationWarning)
        k = -8
        while k < _DECADE_MAX:
            lo, hi = 10.0**k, 10.0 ** (k + 1)
            piece, _ = quad(g, lo, hi, epsabs=1e-300, epsrel=1e-12, limit=200)
            total += piece
            k += 1
            if hi < _TAIL_FIT_MIN_R:
                continue
            ghi = g(hi)
            if ghi == 0.0:
                return total
            glo = g(lo)
            if glo <= 0.0:
                continue
            slope = math.log10(ghi / glo)
            if slope >= -1.0 - 1e-6:
                if hi >= _DIVERGENCE_R:
                    raise NonintegrableProfile(
                        f"{label}: tail integrand ~ r^{slope:.6f} at r = {hi:g}"
                    )
                continue
            remainder = ghi * hi / (-slope - 1.0)
            if remainder <= _TAIL_REL * abs(total):
                return total
    raise NonintegrableProfile(f"{label}: no convergent tail by r = 1e{_DECADE_MAX}")


def energy(triple: CknTriple, profile: RadialProfile) -> EnergyReport:
    """Rayleigh quotient of a radial profile handle r -> (v, v').

    Works for any integrable weights; balance is not required (the value
    is then scale-dependent, which is the caller's business).
    """
    _validate_triple(triple)
    N, a, b, q = triple.N, triple.a, triple.b, triple.q
    omega = sphere_area(N)
    grad = omega * _integrate_radial(
        N - 1.0 + a, lambda r: profile(r)[1] ** 2, "gradient norm"
    )
    qmass = omega * _integrate_radial(
        N - 1.0 + b, lambda r: abs(profile(r)[0]) ** q, "decay norm"
    )
    if qmass <= 0.0:
        raise ValueError("profile has zero weighted q-norm")
    q_norm = qmass ** (1.0 / q)
    rayleigh = grad / q_norm**2
    if not rayleigh > 0.0:
        raise ValueError(f"quotient came out nonpositive: {rayleigh}")
    return EnergyReport(
        grad_norm_sq=grad,
        q_norm=q_norm,
        rayleigh=rayleigh,
        closed_form=None,
        s_estimate=rayleigh,
    )


def bubble_energy_closed_form(triple: CknTriple) -> float:
    """Beta-function value of E on the bubble; needs the balance to hold.

    With m = (N-2+a)/sigma both integrals reduce under s = r^sigma:
    the gradient side to m^2 sigma B(m+2, m), the q-side to
    B(m+1, m+1)/sigma, so

        E = m^2 sigma B(m+2, m) omega^(1-2/q) (B(m+1, m+1)/sigma)^(-2/q).
    """
    _validate_triple(triple)
    N, a, b, q = triple.N, triple.a, triple.b, triple.q
    if N - 2 + a <= 0:
        raise DegenerateWeight(f"N - 2 + a = {N - 2 + a}, need it positive")
    if N + b <= 0 or b <= a - 2.0:
        raise InadmissibleWeights(f"weights (a, b) = ({a}, {b}) out of range")
    defect = balance_residual(N, a, b, q)
    if abs(defect) > BALANCE_REL_TOL * max(1.0, abs((N + a) / 2.0)):
        raise BalanceViolated(
            f"closed form lives on the balance manifold; defect = {defect}"
        )
    sigma = 2.0 + b - a
    m = (N - 2.0 + a) / sigma
    omega = sphere_area(N)
    grad_part = m * m * sigma * math.exp(
        math.lgamma(m + 2.0) + math.lgamma(m) - math.lgamma(2.0 * m + 2.0)
    )
    q_part = math.exp(2.0 * math.lgamma(m + 1.0) - math.lgamma(2.0 * m + 2.0)) / sigma
    return grad_part * omega ** (1.0 - 2.0 / q) * q_part ** (-2.0 / q)


def best_constant(triple: CknTriple) -> EnergyReport:
    """Sharp constant of the quotient, valid in the radial-minimizer region.

    Evaluates E on the exact bubble by quadrature, attaches the Beta
    closed form, and cross-checks the two to 1e-6 relative.  Refuses with
    SymmetryBreakingRegion where the radial bubble is not the minimizer.
    """
    report = check_balance(triple)
    if report.verdict != ADMISSIBLE:
        raise BalanceViolated(
            f"best constant needs an admissible triple, verdict was {report.verdict}"
        )
    N, a, b = triple.N, triple.a, triple.b
    p_crit = (N + 2.0 + 2.0 * b - a) / (N - 2.0 + a)
    params = ProblemParams(N=N, a=a, b=b, p=p_crit)
    if fs_region(params) == SYMMETRY_BREAKING:
        raise SymmetryBreakingRegion(
            f"(a, b) = ({a}, {b}) lies above the symmetry-breaking threshold; "
            "the radial bubble is not the minimizer there"
        )
    prof = normalized_bubble(params)
    measured = energy(triple, lambda r: bubble_eval(prof, r))
    closed = bubble_energy_closed_form(triple)
    if abs(measured.rayleigh - closed) > 1e-6 * abs(closed):
        raise RuntimeError(
            "quadrature and closed form disagree: "
            f"{measured.rayleigh!r} vs {closed!r}"
        )
    return EnergyReport(
        grad_norm_sq=measured.grad_norm_sq,
        q_norm=measured.q_norm,
        rayleigh=measured.rayleigh,
        closed_form=closed,
        s_estimate=measured.rayleigh,
    )

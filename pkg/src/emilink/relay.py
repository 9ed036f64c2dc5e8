"""Half-duplex decode-and-forward relaying: rates and power optimization.

The two-phase protocol splits the channel uses into fractions tau1 and
1 - tau1 with per-phase powers p1, p2, giving the achievable rate

    min{tau1 log2(1 + p1 alpha1), (1 - tau1) log2(1 + p2 alpha2)}

with effective gains alpha1 (source->relay, interference plus noise) and
alpha2 (relay->destination, noise only).  The average power tau1 p1 +
(1 - tau1) p2 is minimized by a bisection on the power budget whose inner
stage maximizes the achievable rate at a fixed budget.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import InfeasibleError, NumericalError

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0  # golden-section ratio

TAU_MIN = 1e-4  # the rate vanishes at tau -> 0 or 1, so clamping loses nothing
BISECTION_MAX_ITERS = 200
POWER_UPPER_W = 1e5


class CombinerKind(Enum):
    MR = "mr"
    MMSE = "mmse"


@dataclass(frozen=True)
class EffectiveGains:
    """Per-phase SNR per unit transmit power, in 1/W."""

    alpha1: float
    alpha2: float

    def __post_init__(self):
        if self.alpha1 <= 0 or self.alpha2 <= 0:
            raise ValueError("effective gains must be positive")


@dataclass(frozen=True)
class RelaySolution:
    """Time split, per-phase powers and the resulting average power."""

    tau1: float
    p1: float
    p2: float
    average_power: float
    achieved_rate: float
    iterations: int = 0


def df_rate(tau1: float, p1: float, p2: float, gains: EffectiveGains) -> float:
    """Achievable decode-and-forward rate for the given split and powers."""
    if not 0.0 < tau1 < 1.0:
        raise ValueError("tau1 must lie strictly between 0 and 1")
    if p1 < 0 or p2 < 0:
        raise ValueError("powers must be nonnegative")
    r1 = tau1 * math.log2(1.0 + p1 * gains.alpha1)
    r2 = (1.0 - tau1) * math.log2(1.0 + p2 * gains.alpha2)
    return min(r1, r2)


def effective_gains_single(beta_sr: float, beta_rd: float,
                           emi_variance: float, noise_power_w: float) -> EffectiveGains:
    """Single-antenna gains: interference degrades only the first phase."""
    if noise_power_w <= 0:
        raise ValueError("noise power must be positive")
    return EffectiveGains(beta_sr / (emi_variance + noise_power_w),
                          beta_rd / noise_power_w)


def repetition_required_power(target_rate: float, beta_sr: float, beta_rd: float,
                              emi_variance: float, noise_power_w: float) -> float:
    """Average power of repetition coding (tau1 = 1/2, equalized phase rates)."""
    if beta_sr <= 0 or beta_rd <= 0:
        raise ValueError("channel gains must be positive")
    return ((2.0 ** (2.0 * target_rate) - 1.0)
            * (beta_sr * noise_power_w + beta_rd * (emi_variance + noise_power_w))
            / (2.0 * beta_rd * beta_sr))


def _equalized_rate_grid(taus: np.ndarray, budget: float, gains: EffectiveGains,
                         iters: int = 24) -> np.ndarray:
    """Equalized-phase rate over a tau1 grid at a binding budget (vectorized).

    For fixed tau1 the first-phase rate grows and the second-phase rate
    falls as p1 sweeps [0, budget/tau1], so the equalizer is a bisection;
    grid accuracy only has to locate the peak for later refinement.
    """
    lo = np.zeros_like(taus)
    hi = budget / taus
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        r1 = taus * np.log2(1.0 + mid * gains.alpha1)
        p2 = (budget - taus * mid) / (1.0 - taus)
        r2 = (1.0 - taus) * np.log2(1.0 + np.maximum(p2, 0.0) * gains.alpha2)
        raise_lo = r1 < r2
        lo = np.where(raise_lo, mid, lo)
        hi = np.where(raise_lo, hi, mid)
    mid = 0.5 * (lo + hi)
    return taus * np.log2(1.0 + mid * gains.alpha1)


def _equalized_rate_scalar(tau: float, budget: float, gains: EffectiveGains,
                           iters: int = 60) -> tuple[float, float]:
    """Scalar twin of _equalized_rate_grid returning (rate, p1).

    Runs safeguarded Newton on the (strictly increasing) phase-rate
    difference, falling back to bisection steps whenever Newton leaves the
    bracket.
    """
    a1, a2 = gains.alpha1, gains.alpha2
    other = 1.0 - tau
    lo, hi = 0.0, budget / tau
    p1 = 0.5 * hi
    for _ in range(iters):
        p2 = (budget - tau * p1) / other
        if p2 < 0.0:
            p2 = 0.0
        r1 = math.log1p(p1 * a1)
        r2 = math.log1p(p2 * a2)
        residual = tau * r1 - other * r2
        if residual < 0.0:
            lo = p1
        else:
            hi = p1
        slope = tau * (a1 / (1.0 + p1 * a1) + a2 / (1.0 + p2 * a2))
        if abs(residual) <= 1e-14 * (tau * r1 + other * r2) or hi - lo <= 1e-16 * hi:
            break
        step = p1 - residual / slope
        p1 = step if lo < step < hi else 0.5 * (lo + hi)
    return tau * math.log2(1.0 + p1 * a1), p1


def df_inner_max_rate(budget: float, gains: EffectiveGains,
                      coarse_points: int = 512) -> tuple[float, float, float, float]:
    """Maximum achievable rate under an average-power budget.

    Exploits that the optimum equalizes the two phase rates with the budget
    binding: a coarse tau1 grid locates the peak (guarding against
    non-unimodality) and golden-section search refines it.  Returns
    (rate, tau1, p1, p2).
    """
    if budget <= 0:
        raise ValueError("power budget must be positive")
    taus = np.linspace(TAU_MIN, 1.0 - TAU_MIN, coarse_points)
    rates = _equalized_rate_grid(taus, budget, gains)
    peak = int(np.argmax(rates))
    a = taus[max(peak - 1, 0)]
    b = taus[min(peak + 1, coarse_points - 1)]
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc = _equalized_rate_scalar(c, budget, gains)[0]
    fd = _equalized_rate_scalar(d, budget, gains)[0]
    while b - a > 1e-9:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = _equalized_rate_scalar(c, budget, gains)[0]
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = _equalized_rate_scalar(d, budget, gains)[0]
    tau1 = 0.5 * (a + b)
    rate, p1 = _equalized_rate_scalar(tau1, budget, gains)
    p2 = (budget - tau1 * p1) / (1.0 - tau1)
    return rate, tau1, p1, p2


def df_min_power(target_rate: float, gains: EffectiveGains,
                 tolerance: float = 1e-6) -> RelaySolution:
    """Bisection on the power budget for the minimum-power relay solution.

    Brackets [0, 1e5] W; stops once the inner maximum rate is within
    ``tolerance`` (relative) of the target.  Raises InfeasibleError when the
    target is out of reach at the upper bracket.
    """
    if target_rate <= 0:
        raise ValueError("target rate must be positive")
    lo, hi = 0.0, POWER_UPPER_W
    rate_hi, *_ = df_inner_max_rate(hi, gains)
    if rate_hi < target_rate:
        raise InfeasibleError(
            f"rate {target_rate} unreachable within {POWER_UPPER_W:.0e} W")
    if not rate_hi >= target_rate > 0.0:
        raise NumericalError("bisection bracket lost before iterating")
    solution = None
    for iteration in range(1, BISECTION_MAX_ITERS + 1):
        mid = 0.5 * (lo + hi)
        rate, tau1, p1, p2 = df_inner_max_rate(mid, gains)
        if abs(rate - target_rate) <= tolerance * target_rate:
            solution = RelaySolution(tau1, p1, p2, mid, rate, iteration)
            break
        if rate < target_rate:
            lo = mid
        else:
            hi = mid
        if not lo < hi:
            raise NumericalError("bisection interval collapsed without converging")
    if solution is None:
        rate, tau1, p1, p2 = df_inner_max_rate(hi, gains)
        solution = RelaySolution(tau1, p1, p2, hi, rate, BISECTION_MAX_ITERS)
    return solution


def effective_gain_first_phase(h_sr: np.ndarray, covariance: np.ndarray,
                               kind: CombinerKind) -> float:
    """First-phase effective gain |g^H h|^2 / (g^H C g) for the combiner.

    MR takes g = h; MMSE takes g = C^{-1} h, whose value is the generalized
    Rayleigh maximum h^H C^{-1} h and always dominates MR.
    """
    h = np.asarray(h_sr)
    cov = np.asarray(covariance)
    if h.ndim != 1 or cov.shape != (h.size, h.size):
        raise ValueError("channel/covariance dimensions disagree")
    if kind is CombinerKind.MR:
        denom = float(np.real(h.conj() @ cov @ h))
        if denom <= 0:
            raise NumericalError("covariance is not positive definite")
        return float(np.abs(h.conj() @ h) ** 2) / denom
    try:
        solved = np.linalg.solve(cov, h)
    except np.linalg.LinAlgError as exc:
        raise NumericalError("covariance is singular") from exc
    return float(np.real(h.conj() @ solved))


def effective_gain_second_phase(h_rd: np.ndarray, noise_power_w: float) -> float:
    """Second-phase gain ||h_rd||^2 / noise under unit-norm MR precoding."""
    if noise_power_w <= 0:
        raise ValueError("noise power must be positive")
    h = np.asarray(h_rd)
    norm_sq = float(np.real(h.conj() @ h))
    if norm_sq == 0.0:
        raise InfeasibleError("relay-destination channel is zero")
    return norm_sq / noise_power_w

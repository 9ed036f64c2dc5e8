"""Reflecting-surface link: rate, required power and phase optimization.

The end-to-end SINR with transmit power p and reflection phases phi_n is

    p |h_rd^T Phi h_sr|^2 / (variance * ||h_rd^T Phi R^(1/2)||^2 + noise)

where Phi = diag(exp(j phi_n)).  Closing the phases on the channel product
(phi_n = -arg(h_sr_n h_rd_n)) maximizes the numerator and is optimal without
interference; the interference-aware optimizer below runs projected gradient
ascent on the SINR starting from that configuration.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .emi import EmiModel, emi_quadratic_form
from .errors import InfeasibleError
from .scene import LosChannel

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class PhaseConfig:
    """Per-element reflection phases, wrapped into [0, 2*pi)."""

    phases: np.ndarray

    def __post_init__(self):
        ph = np.mod(np.asarray(self.phases, dtype=float), TWO_PI)
        if ph.ndim != 1 or ph.size == 0:
            raise ValueError("phases must be a non-empty 1-d array")
        object.__setattr__(self, "phases", ph)

    @property
    def n_elements(self) -> int:
        return self.phases.size


@dataclass(frozen=True)
class IrsLink:
    """Source->surface and surface->destination channels plus noise terms."""

    h_sr: LosChannel
    h_rd: LosChannel
    emi: EmiModel
    noise_power_w: float

    def __post_init__(self):
        n = self.h_sr.n_elements
        if self.h_rd.n_elements != n or self.emi.n_elements != n:
            raise ValueError("channel and correlation dimensions disagree")
        if self.noise_power_w <= 0:
            raise ValueError("noise power must be positive")


@dataclass(frozen=True)
class IrsSolution:
    """Required power and phase configuration from the fixed-point solver."""

    power_w: float
    phases: PhaseConfig
    iterations: int
    converged: bool = True


def phases_noise_only(h_sr: LosChannel, h_rd: LosChannel) -> PhaseConfig:
    """Phases that align the cascaded channel: phi_n = -arg(h_sr_n h_rd_n)."""
    prod = h_sr.coefficients * h_rd.coefficients
    if np.any(prod == 0):
        raise ValueError("phase alignment undefined for zero channel coefficients")
    return PhaseConfig(-np.angle(prod))


def _combined(link: IrsLink, config: PhaseConfig):
    """Row channel v = h_rd * exp(j phi) and the cascaded scalar v . h_sr."""
    v = link.h_rd.coefficients * np.exp(1j * config.phases)
    return v, np.sum(v * link.h_sr.coefficients)


def irs_sinr(power_w: float, link: IrsLink, config: PhaseConfig) -> float:
    if power_w < 0:
        raise ValueError("power must be nonnegative")
    v, cascade = _combined(link, config)
    interference = link.emi.variance * emi_quadratic_form(v, link.emi.correlation)
    return power_w * abs(cascade) ** 2 / (interference + link.noise_power_w)


def irs_rate(power_w: float, link: IrsLink, config: PhaseConfig) -> float:
    """End-to-end information rate log2(1 + SINR) in bit/s/Hz."""
    return float(np.log2(1.0 + irs_sinr(power_w, link, config)))


def irs_required_power(target_rate: float, link: IrsLink, config: PhaseConfig) -> float:
    """Transmit power that achieves ``target_rate`` with fixed phases."""
    if target_rate <= 0:
        raise ValueError("target rate must be positive")
    v, cascade = _combined(link, config)
    gain = abs(cascade) ** 2
    if gain == 0.0:
        raise InfeasibleError("cascaded channel is zero; no power achieves the rate")
    interference = link.emi.variance * emi_quadratic_form(v, link.emi.correlation)
    return (2.0 ** target_rate - 1.0) * (interference + link.noise_power_w) / gain


def irs_sinr_gradient(power_w: float, link: IrsLink, phases: np.ndarray) -> np.ndarray:
    """Analytic gradient of the SINR with respect to the phase vector."""
    v = link.h_rd.coefficients * np.exp(1j * np.asarray(phases))
    cascade = np.sum(v * link.h_sr.coefficients)
    corr_v = link.emi.correlation @ v.conj()
    quad = max(float(np.real(v @ corr_v)), 0.0)
    denom = link.emi.variance * quad + link.noise_power_w
    d_num = -2.0 * np.imag(np.conj(cascade) * link.h_sr.coefficients * v)
    d_quad = -2.0 * np.imag(v * corr_v)
    return power_w * (d_num * denom - abs(cascade) ** 2 * link.emi.variance * d_quad) / denom ** 2


def phases_emi_aware(link: IrsLink, power_w: float, *, init: PhaseConfig | None = None,
                     step0: float = 1.0, shrink: float = 0.5, slope: float = 1e-4,
                     tol: float = 1e-8, max_iters: int = 1000) -> PhaseConfig:
    """Tune the phases against the interference statistics.

    Projected gradient ascent on the SINR with Armijo backtracking,
    initialized at the noise-only configuration ("projection" is phase
    wrapping, which is free since the objective is 2*pi-periodic).  Never
    returns a configuration worse than its initialization; warns instead of
    failing when the iteration limit is hit.
    """
    if power_w <= 0:
        raise ValueError("power must be positive")
    config = init if init is not None else phases_noise_only(link.h_sr, link.h_rd)
    phases = config.phases.copy()
    value = irs_sinr(power_w, link, PhaseConfig(phases))
    converged = False
    for _ in range(max_iters):
        grad = irs_sinr_gradient(power_w, link, phases)
        grad_sq = float(grad @ grad)
        if grad_sq == 0.0:
            converged = True
            break
        step = step0
        candidate_value = value
        accepted = False
        while step > 1e-20:
            candidate = phases + step * grad
            candidate_value = irs_sinr(power_w, link, PhaseConfig(candidate))
            if candidate_value >= value + slope * step * grad_sq:
                accepted = True
                break
            step *= shrink
        if not accepted:
            converged = True
            break
        improvement = (candidate_value - value) / value if value > 0 else np.inf
        phases = np.mod(candidate, TWO_PI)
        value = candidate_value
        if improvement < tol:
            converged = True
            break
    if not converged:
        warnings.warn("phase optimization hit the iteration limit; returning best iterate",
                      RuntimeWarning, stacklevel=2)
    return PhaseConfig(phases)


def irs_min_power_emi_aware(target_rate: float, link: IrsLink, *,
                            tol: float = 1e-6, max_outer: int = 20,
                            **opt_kwargs) -> IrsSolution:
    """Minimum power to reach ``target_rate`` with interference-aware phases.

    Alternates phase optimization at the current power with the power update
    until the power change falls below ``tol`` (relative).  The result never
    exceeds the noise-only-phases power.
    """
    config = phases_noise_only(link.h_sr, link.h_rd)
    power = irs_required_power(target_rate, link, config)
    outer = 0
    converged = False
    for outer in range(1, max_outer + 1):
        config = phases_emi_aware(link, power, init=config, **opt_kwargs)
        new_power = irs_required_power(target_rate, link, config)
        done = abs(new_power - power) <= tol * power
        power = new_power
        if done:
            converged = True
            break
    return IrsSolution(power, config, outer, converged)

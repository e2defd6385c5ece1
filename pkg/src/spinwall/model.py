"""Material parameters, co-moving frames, and rest-state spectra.

The magnetization model has damping alpha > 0, current strength beta >= 0,
easy-axis anisotropy mu < 0, polarization contrast ccp in (-1, 1), and an
applied field h along the axis.  The two rest states are m = +e3 and m = -e3;
each sees an effective current beta / (1 +- ccp).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import IntEnum
from typing import Sequence

import numpy as np

from .errors import PoleAtAnisotropyField

__all__ = [
    "MaterialParams",
    "Frame",
    "Regime",
    "SpectrumPoint",
    "beta_pm",
    "classify_regime",
    "is_marginal",
    "gamma_curves",
    "rest_state_dispersion",
    "essential_spectrum_curve",
]

# relative tolerance for calling a field value marginal
_MARGINAL_RTOL = 1e-12


@dataclass(frozen=True)
class MaterialParams:
    """Physical parameters of the wire; validated on construction."""

    alpha: float
    beta: float
    mu: float
    ccp: float
    h: float

    def __post_init__(self):
        for name in ("alpha", "beta", "mu", "ccp", "h"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise ValueError(f"{name} must be finite, got {v!r}")
        if self.alpha <= 0:
            raise ValueError(f"alpha must be positive, got {self.alpha}")
        if self.beta < 0:
            raise ValueError(f"beta must be nonnegative, got {self.beta}")
        if not -1 < self.ccp < 1:
            raise ValueError(f"ccp must lie in (-1, 1), got {self.ccp}")


@dataclass(frozen=True)
class Frame:
    """Co-moving, co-rotating frame: speed s and rotation frequency omega."""

    s: float
    omega: float


class Regime(IntEnum):
    """Joint stability of the two rest states."""

    BISTABLE = 0
    MONOSTABLE_PLUS = 1
    MONOSTABLE_MINUS = 2
    BIUNSTABLE = 3


@dataclass(frozen=True)
class SpectrumPoint:
    """One point of a spectral curve: eigenvalue lam at wavenumber k, weight eta."""

    lam: complex
    k: float
    eta: float


def beta_pm(p: MaterialParams) -> tuple[float, float]:
    """Effective current strengths (beta_plus, beta_minus) at the rest states."""
    return p.beta / (1.0 + p.ccp), p.beta / (1.0 - p.ccp)


def _thresholds(p: MaterialParams) -> tuple[float, float]:
    """Field thresholds: +e3 stable iff h > t_plus, -e3 stable iff h < t_minus."""
    bp, bm = beta_pm(p)
    return bp / p.alpha + p.mu, bm / p.alpha - p.mu


def classify_regime(p: MaterialParams) -> Regime:
    """Classify the joint stability of +e3 and -e3 at the given field."""
    t_plus, t_minus = _thresholds(p)
    plus_stable = p.h > t_plus
    minus_stable = p.h < t_minus
    if plus_stable and minus_stable:
        return Regime.BISTABLE
    if plus_stable:
        return Regime.MONOSTABLE_PLUS
    if minus_stable:
        return Regime.MONOSTABLE_MINUS
    return Regime.BIUNSTABLE


def is_marginal(p: MaterialParams) -> bool:
    """True when h sits on a rest-state stability threshold to within rounding."""
    tol = _MARGINAL_RTOL * max(1.0, abs(p.h))
    return any(abs(p.h - t) <= tol for t in _thresholds(p))


def gamma_curves(p: MaterialParams) -> tuple[float, float]:
    """Boundary diagnostics (Gamma_plus, Gamma_minus).

    Gamma_plus vanishes exactly where +e3 changes stability and Gamma_minus
    where -e3 does; both are expressed relative to the distance of h from the
    anisotropy poles +-mu, so they stay O(1) across parameter sweeps.
    """
    if p.h == p.mu or p.h == -p.mu:
        raise PoleAtAnisotropyField(
            f"gamma curves undefined at h = {p.h} with mu = {p.mu}"
        )
    bp, bm = beta_pm(p)
    gamma_plus = (bp / p.alpha) / (p.h - p.mu) - 1.0
    gamma_minus = 1.0 - (bm / p.alpha) / (p.h + p.mu)
    return gamma_plus, gamma_minus


def rest_state_dispersion(
    p: MaterialParams, f: Frame, pole: int, lam: complex, nu: complex
) -> complex:
    """Linear dispersion determinant of the transverse modes at a rest state.

    `pole` is +1 for the rest state +e3 and -1 for -e3.  The determinant is a
    quartic polynomial in the spatial mode nu; its zeros at nu = i k trace the
    essential spectrum in the frame f.  Normalized so that it factors exactly
    into the two quadratics returned by the operator-coefficient mapping.
    """
    if pole not in (+1, -1):
        raise ValueError(f"pole must be +1 or -1, got {pole!r}")
    tau = pole
    a = p.alpha
    bt = p.beta / (1.0 + tau * p.ccp)
    base = nu * nu + p.mu - tau * p.h
    shift = lam - f.s * nu
    first = base - 1j * tau * bt - (a - 1j) * (shift - 1j * tau * f.omega)
    second = base + 1j * tau * bt - (a + 1j) * (shift + 1j * tau * f.omega)
    return first * second / (1.0 + a * a)


def _branch_values(
    p: MaterialParams, f: Frame, pole: int, nu: complex
) -> tuple[complex, complex]:
    """The two eigenvalue branches lam(nu) solving the dispersion determinant."""
    tau = pole
    a = p.alpha
    bt = p.beta / (1.0 + tau * p.ccp)
    base = nu * nu + p.mu - tau * p.h
    lam1 = (base - 1j * tau * bt) / (a - 1j) + f.s * nu + 1j * tau * f.omega
    lam2 = (base + 1j * tau * bt) / (a + 1j) + f.s * nu - 1j * tau * f.omega
    return lam1, lam2


def essential_spectrum_curve(
    p: MaterialParams,
    f: Frame,
    pole: int,
    eta: float,
    k_grid: Sequence[float],
) -> list[SpectrumPoint]:
    """Sample the exponentially weighted essential spectrum at a rest state.

    Evaluates both eigenvalue branches at nu = eta + i k for each k in
    `k_grid` and returns first branch one, then branch two, each in grid
    order.  Weight eta = 0 gives the unweighted curves.
    """
    if pole not in (+1, -1):
        raise ValueError(f"pole must be +1 or -1, got {pole!r}")
    ks = np.asarray(k_grid, dtype=float)
    first = []
    second = []
    for k in ks:
        lam1, lam2 = _branch_values(p, f, pole, eta + 1j * k)
        first.append(SpectrumPoint(lam=lam1, k=float(k), eta=eta))
        second.append(SpectrumPoint(lam=lam2, k=float(k), eta=eta))
    return first + second

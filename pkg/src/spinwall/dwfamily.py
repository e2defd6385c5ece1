"""The explicit domain-wall family and its critical fields.

At zero polarization contrast the model has an explicit wall

    m0(xi) = (sech(a xi), 0, -tanh(a xi)),   a = sigma sqrt(-mu),

which is a relative equilibrium: it travels with speed s and rotates with
frequency omega given in closed form.  This module also carries the
energy-estimate stability bound, the fields where the wall speed or frequency
crosses the invasion predictions, the residual of the co-rotating profile
equations for general profiles in spherical coordinates, and the effective
potentials behind the standing-wall field.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import LogDomain, NotBistable, SingularProfile
from .model import Frame, MaterialParams, Regime, classify_regime

__all__ = [
    "ExplicitDW",
    "SphericalProfile",
    "CriticalFields",
    "explicit_dw",
    "profile_m0",
    "frame_m0",
    "stability_threshold",
    "critical_fields",
    "coherent_ode_residual",
    "standing_field_H",
    "propagation_sign",
    "potentials",
]


class CriticalFields(NamedTuple):
    h_s_plus: float
    h_s_minus: float
    h_omega: float


@dataclass(frozen=True)
class ExplicitDW:
    """Explicit wall: orientation sigma = +-1 and its co-moving frame."""

    sigma: int
    params: MaterialParams
    frame: Frame


@dataclass(frozen=True)
class SphericalProfile:
    """Profile in spherical coordinates on a uniform grid.

    m = (sin(theta) cos(phi), sin(theta) sin(phi), cos(theta)).
    """

    grid: np.ndarray
    theta: np.ndarray
    phi: np.ndarray


def _require_explicit_family(p: MaterialParams):
    if p.ccp != 0.0:
        raise ValueError(f"explicit wall family needs ccp = 0, got {p.ccp}")
    if p.mu >= 0.0:
        raise ValueError(f"explicit wall family needs an easy axis (mu < 0), got {p.mu}")


def profile_m0(mu: float, sigma: int, xi) -> np.ndarray:
    """Evaluate the explicit wall profile; xi may be a scalar or an array."""
    if mu >= 0.0:
        raise ValueError(f"need mu < 0, got {mu}")
    if sigma not in (+1, -1):
        raise ValueError(f"sigma must be +1 or -1, got {sigma!r}")
    x = np.asarray(xi, dtype=float)
    ax = sigma * math.sqrt(-mu) * x
    sech = 1.0 / np.cosh(ax)
    return np.stack([sech, np.zeros_like(x), -np.tanh(ax)])


def frame_m0(p: MaterialParams, branch: int = +1) -> Frame:
    """Closed-form frame of the explicit wall; branch picks the sign of s."""
    _require_explicit_family(p)
    if branch not in (+1, -1):
        raise ValueError(f"branch must be +1 or -1, got {branch!r}")
    a = p.alpha
    opa2 = 1.0 + a * a
    s = branch * abs(a * p.h - p.beta) / (math.sqrt(-p.mu) * opa2)
    omega = (p.h + a * p.beta) / opa2
    return Frame(s=s, omega=omega)


def explicit_dw(p: MaterialParams, branch: int = +1) -> ExplicitDW:
    """Build the explicit wall whose speed has the sign selected by branch."""
    f = frame_m0(p, branch)
    drive = p.alpha * p.h - p.beta
    sigma = branch * (1 if drive >= 0.0 else -1)
    return ExplicitDW(sigma=sigma, params=p, frame=f)


def stability_threshold(p: MaterialParams) -> float:
    """Field bound below which the explicit wall is linearly stable.

    Energy estimate: |h| < beta / alpha - 9 mu / (9 + 2 sqrt(3)).
    """
    if p.mu >= 0.0:
        raise ValueError(f"need mu < 0, got {p.mu}")
    return p.beta / p.alpha - 9.0 * p.mu / (9.0 + 2.0 * math.sqrt(3.0))


def critical_fields(p: MaterialParams) -> CriticalFields:
    """Fields where the wall frame meets the invasion predictions.

    h_s_plus and h_s_minus are the two fields where the wall speed equals the
    invasion speed; h_omega is where the frequencies match.
    """
    _require_explicit_family(p)
    a = p.alpha
    base = p.beta / a - 2.0 * p.mu - 2.0 * p.mu / (a * a)
    swing = (2.0 * p.mu / (a * a)) * math.sqrt(1.0 + a * a)
    return CriticalFields(
        h_s_plus=base + swing,
        h_s_minus=base - swing,
        h_omega=p.beta / a - 2.0 * p.mu,
    )


def _central_derivatives(y: np.ndarray, dxi: float) -> tuple[np.ndarray, np.ndarray]:
    d1 = (y[2:] - y[:-2]) / (2.0 * dxi)
    d2 = (y[2:] - 2.0 * y[1:-1] + y[:-2]) / (dxi * dxi)
    return d1, d2


def coherent_ode_residual(
    prof: SphericalProfile, f: Frame, p: MaterialParams
) -> tuple[float, float]:
    """Sup-norm residuals (r_theta, r_phi) of the co-rotating profile equations.

    The polar equation is evaluated on the whole interior; the azimuthal one
    only where sin(theta) > 1e-3, since it degenerates at the poles.  Raises
    when that window is empty.
    """
    grid = np.asarray(prof.grid, dtype=float)
    theta = np.asarray(prof.theta, dtype=float)
    phi = np.asarray(prof.phi, dtype=float)
    if grid.ndim != 1 or grid.size < 5:
        raise ValueError("grid must be one-dimensional with at least 5 points")
    if theta.shape != grid.shape or phi.shape != grid.shape:
        raise ValueError("theta and phi must match the grid shape")
    steps = np.diff(grid)
    dxi = steps[0]
    if dxi <= 0 or not np.allclose(steps, dxi, rtol=1e-8, atol=0.0):
        raise ValueError("grid must be uniform and increasing")
    if np.any(theta < -1e-9) or np.any(theta > math.pi + 1e-9):
        raise ValueError("theta must lie in [0, pi]")

    tp, tpp = _central_derivatives(theta, dxi)
    pp, ppp = _central_derivatives(phi, dxi)
    th = theta[1:-1]
    st, ct = np.sin(th), np.cos(th)
    bt = p.beta / (1.0 + p.ccp * ct)

    r_theta = tpp + p.alpha * f.s * tp - st * (
        f.s * pp + pp * pp * ct + (p.h - p.mu * ct) - f.omega
    )
    r_phi = ppp * st + f.s * tp + 2.0 * pp * tp * ct + st * (
        p.alpha * f.s * pp + bt - p.alpha * f.omega
    )

    mask = st > 1e-3
    if not np.any(mask):
        raise SingularProfile("sin(theta) nowhere exceeds 1e-3 on the interior")
    return float(np.max(np.abs(r_theta))), float(np.max(np.abs(r_phi[mask])))


def standing_field_H(p: MaterialParams) -> float:
    """Field at which the effective wall potential difference vanishes.

    H = beta (log(1 + ccp) - log(1 - ccp)) / (2 alpha ccp); the ccp -> 0
    limit beta / alpha is taken through a series once ccp is below 1e-4.
    """
    c = p.ccp
    if abs(c) < 1e-4:
        return (p.beta / p.alpha) * (1.0 + c * c / 3.0)
    return p.beta * (math.log1p(c) - math.log1p(-c)) / (2.0 * p.alpha * c)


def propagation_sign(p: MaterialParams, orientation: int = +1) -> int:
    """Predicted sign of the wall speed in the bistable regime.

    `orientation` is +1 for a wall with +e3 on the left and -1 for the
    mirrored wall.  The state with the lower effective potential invades, so
    a +e3-left wall moves right (positive speed) exactly when h exceeds the
    standing field.
    """
    if orientation not in (+1, -1):
        raise ValueError(f"orientation must be +1 or -1, got {orientation!r}")
    if classify_regime(p) is not Regime.BISTABLE:
        raise NotBistable(
            f"propagation sign needs both rest states stable, regime is "
            f"{classify_regime(p).name}"
        )
    gap = p.h - standing_field_H(p)
    if abs(gap) <= 1e-12 * max(1.0, abs(p.h)):
        return 0
    return orientation * (1 if gap > 0 else -1)


def potentials(m3, p: MaterialParams):
    """Effective potentials (V, V_tilde) on the wall coordinate m3 in [-1, 1].

    V drops the polarization contrast; V_tilde keeps it through the
    logarithmic term, evaluated by series for tiny ccp.  Their difference of
    endpoint gaps is what singles out the standing field.
    """
    x = np.asarray(m3, dtype=float)
    if np.any(np.abs(x) > 1.0 + 1e-12):
        raise ValueError("m3 must lie in [-1, 1]")
    v = -(p.h - p.beta / p.alpha) * x + 0.5 * p.mu * x * x
    c = p.ccp
    if abs(c) < 1e-4:
        current = (p.beta / p.alpha) * (x - 0.5 * c * x * x + (c * c / 3.0) * x**3)
    else:
        arg = 1.0 + c * x
        if np.any(arg <= 0.0):
            raise LogDomain(f"1 + ccp m3 must stay positive, ccp = {c}")
        current = (p.beta / (p.alpha * c)) * np.log(arg)
    vt = -p.h * x + 0.5 * p.mu * x * x + current
    if np.ndim(m3) == 0:
        return float(v), float(vt)
    return v, vt

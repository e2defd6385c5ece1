"""Spectra of constant-coefficient two-component operators.

The linearization at a rest state, written for the complexified transverse
mode, has symbol

    D(lam, nu) = P_plus(nu) * P_minus(nu),
    P_pm(nu) = (a2 pm i b2) nu^2 + (a1 pm i b1) nu + (a0 pm i b0) - lam.

Everything here works with the six coefficients (a2, a1, a0, b2, b1, b0):
spatial roots, Morse indices, absolute spectrum, double roots and pinching,
and the marginal-stability predictions for fronts invading an unstable rest
state.  Two concrete coefficient maps are provided, one for the magnetization
model and one for the complex Ginzburg-Landau benchmark.
"""

from __future__ import annotations

import math
from dataclasses import InitVar, dataclass
from typing import Sequence

import numpy as np

from .errors import (
    DegenerateLeadingCoefficient,
    EllipticityViolated,
    IndexUnstable,
    NotMonostable,
    PathAmbiguous,
    SolverFailure,
)
from .model import Frame, MaterialParams, Regime, beta_pm, classify_regime

__all__ = [
    "OperatorCoefficients",
    "SpatialRoots",
    "HalfLine",
    "DoubleRoot",
    "factor_coefficients",
    "factor_symbol",
    "dispersion",
    "weighted_essential_curves",
    "spatial_roots",
    "morse_index",
    "absolute_spectrum",
    "double_roots",
    "is_pinched",
    "llgs_coefficients",
    "cgl_coefficients",
    "linear_spreading_speed",
    "linear_spreading_frequency",
    "optimal_weight",
]


@dataclass(frozen=True)
class OperatorCoefficients:
    """Coefficients (a2, a1, a0, b2, b1, b0) of the factored quartic symbol.

    The constructor rejects degenerate leading coefficients and, unless the
    symbol is elliptic, raises.  The default ellipticity predicate is
    Re a2 > |Im b2|, which keeps both factor leading coefficients in the open
    right half-plane; `strict=True` switches to the stronger variant
    Re a2 > (Im b2)^2.
    """

    a2: complex
    a1: complex
    a0: complex
    b2: complex
    b1: complex
    b0: complex
    strict: InitVar[bool] = False

    def __post_init__(self, strict):
        for name in ("a2", "a1", "a0", "b2", "b1", "b0"):
            object.__setattr__(self, name, complex(getattr(self, name)))
        c2p = self.a2 + 1j * self.b2
        c2m = self.a2 - 1j * self.b2
        if self.a2 == 0 or c2p == 0 or c2m == 0:
            raise DegenerateLeadingCoefficient(
                f"factor leading coefficients {c2p!r}, {c2m!r} must be nonzero"
            )
        bound = self.b2.imag ** 2 if strict else abs(self.b2.imag)
        if not self.a2.real > bound:
            raise EllipticityViolated(
                f"need Re a2 > {'(Im b2)^2' if strict else '|Im b2|'}; "
                f"got a2 = {self.a2!r}, b2 = {self.b2!r}"
            )


@dataclass(frozen=True)
class SpatialRoots:
    """Spatial roots of D(lam, .) at fixed lam.

    `roots` holds all four, sorted by decreasing real part with ties broken
    by decreasing imaginary part; `plus_factor` and `minus_factor` attribute
    them to the quadratic factors.
    """

    roots: tuple[complex, complex, complex, complex]
    plus_factor: tuple[complex, complex]
    minus_factor: tuple[complex, complex]


@dataclass(frozen=True)
class HalfLine:
    """Half-line {anchor + r * direction : r >= 0} in the spectral plane."""

    anchor: complex
    direction: complex

    def point(self, r: float) -> complex:
        return self.anchor + r * self.direction


@dataclass(frozen=True)
class DoubleRoot:
    """Double spatial root: location, degeneracy and pinching classification."""

    lam: complex
    nu: complex
    simple: bool
    pinched: bool


def factor_coefficients(c: OperatorCoefficients, sign: int) -> tuple[complex, complex, complex]:
    """Quadratic coefficients (c2, c1, c0) of the factor P_sign (lam omitted)."""
    s = 1j * sign
    return c.a2 + s * c.b2, c.a1 + s * c.b1, c.a0 + s * c.b0


def factor_symbol(c: OperatorCoefficients, sign: int, nu: complex) -> complex:
    """Evaluate c2 nu^2 + c1 nu + c0 for one factor; subtract lam for P."""
    c2, c1, c0 = factor_coefficients(c, sign)
    return (c2 * nu + c1) * nu + c0


def dispersion(c: OperatorCoefficients, lam: complex, nu: complex) -> complex:
    """Full quartic symbol D(lam, nu) = P_plus * P_minus."""
    return (factor_symbol(c, +1, nu) - lam) * (factor_symbol(c, -1, nu) - lam)


def weighted_essential_curves(
    c: OperatorCoefficients, eta: float, k_grid: Sequence[float]
) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalue branches lam_pm(eta + i k) of the weighted symbol.

    Since lam enters each factor linearly, the branch for factor sign is just
    the factor symbol evaluated at nu = eta + i k.
    """
    nu = eta + 1j * np.asarray(k_grid, dtype=float)
    c2p, c1p, c0p = factor_coefficients(c, +1)
    c2m, c1m, c0m = factor_coefficients(c, -1)
    return (c2p * nu + c1p) * nu + c0p, (c2m * nu + c1m) * nu + c0m


def _factor_roots(c: OperatorCoefficients, sign: int, lam: complex) -> np.ndarray:
    c2, c1, c0 = factor_coefficients(c, sign)
    return np.roots([c2, c1, c0 - lam])


def spatial_roots(c: OperatorCoefficients, lam: complex) -> SpatialRoots:
    """All four spatial roots at lam, sorted and attributed to the factors."""
    rp = _factor_roots(c, +1, lam)
    rm = _factor_roots(c, -1, lam)
    merged = sorted(
        [complex(z) for z in rp] + [complex(z) for z in rm],
        key=lambda z: (-z.real, -z.imag),
    )
    return SpatialRoots(
        roots=tuple(merged),
        plus_factor=(complex(rp[0]), complex(rp[1])),
        minus_factor=(complex(rm[0]), complex(rm[1])),
    )


def _coefficient_scale(c: OperatorCoefficients) -> float:
    return max(
        abs(v)
        for s in (+1, -1)
        for v in factor_coefficients(c, s)
    )


def morse_index(c: OperatorCoefficients) -> int:
    """Number of spatial roots with positive real part at large real lam.

    Evaluated at lam = R, 2R, 4R with R = 10 (1 + max coefficient)^2; all
    three counts must agree, otherwise the index did not stabilize.
    """
    R = 10.0 * (1.0 + _coefficient_scale(c)) ** 2
    counts = []
    for lam in (R, 2.0 * R, 4.0 * R):
        roots = spatial_roots(c, lam).roots
        counts.append(sum(1 for z in roots if z.real > 0))
    if counts[0] != counts[1] or counts[1] != counts[2]:
        raise IndexUnstable(f"root counts {counts} at radii {R}, {2 * R}, {4 * R}")
    return counts[0]


def absolute_spectrum(c: OperatorCoefficients) -> tuple[HalfLine, HalfLine]:
    """Rightmost-relevant branch set: one parabola-vertex half-line per factor.

    Each factor P_sign has a single double spatial root, reached at

        lam_dr = c0 - c1^2 / (4 c2),

    and continues into the half-line lam_dr - c2 * r, r >= 0, along which the
    colliding roots keep equal real part.
    """
    lines = []
    for sign in (+1, -1):
        c2, c1, c0 = factor_coefficients(c, sign)
        anchor = c0 - c1 * c1 / (4.0 * c2)
        lines.append(HalfLine(anchor=anchor, direction=-c2))
    return lines[0], lines[1]


def double_roots(c: OperatorCoefficients) -> tuple[DoubleRoot, DoubleRoot]:
    """The two double roots of D, one per factor, with their classification."""
    out = []
    for sign in (+1, -1):
        c2, c1, c0 = factor_coefficients(c, sign)
        lam = c0 - c1 * c1 / (4.0 * c2)
        nu = -c1 / (2.0 * c2)
        other = factor_symbol(c, -sign, nu) - lam
        scale = _coefficient_scale(c)
        tol = 1e-9 * max(1.0, scale) * max(1.0, abs(nu)) ** 2
        # dD/dlam = -(P_plus + P_minus) and d2D/dnu2 = 2 c2 * P_other here
        simple = abs(other) > tol and abs(2.0 * c2 * other) > tol
        out.append(
            DoubleRoot(
                lam=lam,
                nu=nu,
                simple=simple,
                pinched=_pinched(c, lam, nu),
            )
        )
    return out[0], out[1]


def is_pinched(c: OperatorCoefficients, root: DoubleRoot) -> bool:
    """Recompute whether the colliding pair at `root` splits across Re nu = 0."""
    return _pinched(c, root.lam, root.nu)


def _continued_sqrt_affine(d0: complex, v: complex, t: float) -> complex:
    """sqrt of d0 + v t continued from t = 0.

    The path is affine, so the principal branch cut on the negative real axis
    is crossed at most once; the sign flips there.
    """
    d = d0 + v * t
    sign = 1.0
    if v.imag != 0.0:
        tc = -d0.imag / v.imag
        if 0.0 < tc < t and (d0 + v * tc).real < 0.0:
            sign = -1.0
    return sign * np.sqrt(d)


def _pinched(c: OperatorCoefficients, lam0: complex, nu0: complex) -> bool:
    """Decide pinching by following the collision to lam0 + T, T >> 1.

    A double root is pinched when its two colliding spatial roots separate
    into opposite open half-planes as lam moves far to the right.  Double
    roots on the rightmost branch boundary are pinched by construction; for
    the rest the two colliding roots are continued in closed form, since each
    factor discriminant is affine in lam.
    """
    hp, hm = absolute_spectrum(c)
    max_re = max(hp.anchor.real, hm.anchor.real)
    if abs(lam0.real - max_re) <= 1e-9 * (1.0 + abs(max_re)):
        return True

    T = 10.0 * (1.0 + abs(lam0))
    scale = max(1.0, _coefficient_scale(c)) ** 2
    endpoints = []
    for sign in (+1, -1):
        c2, c1, c0 = factor_coefficients(c, sign)
        d0 = c1 * c1 - 4.0 * c2 * (c0 - lam0)
        v = 4.0 * c2
        # a mid-path factor collision makes the continuation undecidable;
        # the collision being classified sits at t = 0 and does not count
        t_zero = -d0 / v
        if (
            abs(t_zero.imag) <= 1e-9 * (1.0 + abs(t_zero))
            and 1e-9 * (1.0 + T) < t_zero.real <= T
        ):
            raise PathAmbiguous(
                f"factor discriminant vanishes at lam = {lam0 + t_zero!r} on the ray"
            )
        wT = _continued_sqrt_affine(d0, v, T)
        if abs(d0) <= 1e-12 * scale:
            # same-factor double: both continuations belong to this factor
            endpoints.append(((-c1 + wT) / (2.0 * c2), (-c1 - wT) / (2.0 * c2)))
        else:
            # cross-factor collision: continue the root that starts at nu0
            w0 = np.sqrt(d0)
            cand_p = (-c1 + w0) / (2.0 * c2)
            cand_m = (-c1 - w0) / (2.0 * c2)
            s0 = 1.0 if abs(cand_p - nu0) <= abs(cand_m - nu0) else -1.0
            endpoints.append(((-c1 + s0 * wT) / (2.0 * c2),))
    for ends in endpoints:
        if len(ends) == 2:
            ra, rb = ends[0].real, ends[1].real
            return ra * rb < 0.0
    ra, rb = endpoints[0][0].real, endpoints[1][0].real
    return ra * rb < 0.0


def llgs_coefficients(p: MaterialParams, f: Frame, pole: int) -> OperatorCoefficients:
    """Transverse-mode coefficients at the rest state pole * e3 in frame f.

    Normalized so that b2 = 1 / (1 + alpha^2) > 0 at both poles; with that
    convention the factor attribution swaps under pole reflection, and the
    product P_plus P_minus equals the rest-state dispersion determinant
    exactly.
    """
    if pole not in (+1, -1):
        raise ValueError(f"pole must be +1 or -1, got {pole!r}")
    a = p.alpha
    opa2 = 1.0 + a * a
    bp, bm = beta_pm(p)
    if pole == -1:
        a0 = (a * (p.h + p.mu) - bm) / opa2
        b0 = (p.h + p.mu + a * bm) / opa2 - f.omega
    else:
        a0 = (bp - a * (p.h - p.mu)) / opa2
        b0 = f.omega - (p.h - p.mu + a * bp) / opa2
    return OperatorCoefficients(
        a2=a / opa2, a1=f.s, a0=a0, b2=1.0 / opa2, b1=0.0, b0=b0
    )


def cgl_coefficients(gamma: float, s: float = 0.0, omega: float = 0.0) -> OperatorCoefficients:
    """Complex Ginzburg-Landau benchmark: u_t = (1 + i gamma) u_xx + u - i omega u."""
    return OperatorCoefficients(a2=1.0, a1=s, a0=1.0, b2=gamma, b1=0.0, b0=-omega)


def _spreading_setup(p: MaterialParams, pole: int) -> tuple[float, float]:
    c = llgs_coefficients(p, Frame(0.0, 0.0), pole)
    a0 = c.a0.real
    scale = max(1.0, abs(p.h) + abs(p.mu) + p.beta / p.alpha)
    required = Regime.MONOSTABLE_PLUS if pole == -1 else Regime.MONOSTABLE_MINUS
    tol = 1e-12 * scale
    if a0 < -tol:
        raise NotMonostable(
            f"rest state {pole:+d}e3 is not unstable (growth rate {a0})"
        )
    if abs(a0) > tol and classify_regime(p) is not required:
        raise NotMonostable(
            f"regime {classify_regime(p).name} does not match pole {pole:+d}"
        )
    return a0, tol


def linear_spreading_speed(p: MaterialParams, pole: int = -1) -> float:
    """Marginal-stability invasion speed into the unstable rest state pole * e3.

    Closed form 2 sqrt(a0 / alpha); at marginal parameters the speed is 0.
    The result is cross-checked against a bisection on the real part of the
    branch anchors as a function of s.
    """
    a0, tol = _spreading_setup(p, pole)
    if abs(a0) <= tol:
        return 0.0
    s = 2.0 * math.sqrt(a0 / p.alpha)

    def anchor_re(speed: float) -> float:
        hp, hm = absolute_spectrum(llgs_coefficients(p, Frame(speed, 0.0), pole))
        return max(hp.anchor.real, hm.anchor.real)

    lo, hi = 0.0, 2.0 * s + 1.0
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if anchor_re(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    s_search = 0.5 * (lo + hi)
    if abs(s - s_search) > 1e-10 * max(1.0, s):
        raise SolverFailure(
            f"closed-form speed {s} disagrees with bisection {s_search}"
        )
    return s


def linear_spreading_frequency(p: MaterialParams, pole: int = -1) -> float:
    """Frame rotation frequency that freezes the branch anchors at marginality."""
    s = linear_spreading_speed(p, pole)
    c = llgs_coefficients(p, Frame(s, 0.0), pole)
    slope = -1.0 if pole == -1 else 1.0
    omega = (-s * s / 4.0 - c.b0.real) / slope
    hp, hm = absolute_spectrum(llgs_coefficients(p, Frame(s, omega), pole))
    resid = max(abs(hp.anchor), abs(hm.anchor))
    if resid > 1e-9 * max(1.0, abs(omega)):
        raise SolverFailure(f"anchors fail to vanish at marginality: {resid}")
    return omega


def optimal_weight(p: MaterialParams, s: float) -> float:
    """Exponential weight at which the weighted curves touch the branch anchors."""
    return -p.alpha * s / 2.0

"""Evans function for the explicit wall, via exterior products.

Perturbations of the wall that start tangent to the unit sphere stay tangent
under the linearized flow, and the eigenvalue problem for the wall lives on
such fields; the normal component obeys a decoupled scalar equation whose
growth rates depend on how the right-hand side is extended off the sphere,
so it is excluded on purpose.  In the moving orthonormal frame t1, t2
spanning the tangent planes along the profile, the restriction is a
2-component second-order pencil in the components (p, q) of n = p t1 + q t2,
written as a first-order system y' = A(xi; lam) y in C^4 with interleaved
state (p, p', q, q').  The Evans function pairs the unstable subspace
transported from the left with the stable subspace transported from the
right; both are integrated as wedge coordinates in Lambda^2 C^4 (dimension
6), with a complex rate shift that neutralizes the asymptotic growth so the
pairing converges as the domain grows.

All coefficients derive from one closed-form assembly of the 3-component
linearization at the wall; an independent finite-difference oracle of the
pointwise right-hand side is compared against it during problem construction
(both the full matrix and its tangent restriction), and winding numbers can
be recomputed with every transported block sourced from the oracle instead.
Winding numbers are taken over the boundary of the right half-annulus
{inner_radius <= |lam| <= radius, Re lam >= 0}, which excludes the two
symmetry eigenvalues at the origin.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np
from numba import njit, prange

from .dwfamily import explicit_dw
from .errors import (
    IntegrationOverflow,
    PhaseUnresolved,
    SolverFailure,
    SubspaceDegenerate,
)
from .model import Frame, MaterialParams
from .spectral import absolute_spectrum, factor_coefficients, llgs_coefficients

__all__ = [
    "EvansProblem",
    "EvansContour",
    "WindingResult",
    "assemble_A",
    "jacobian_oracle",
    "evans_value",
    "winding_number",
]

_G3 = np.array([[0.0, 1.0, 0.0], [-1.0, 0.0, 0.0], [0.0, 0.0, 0.0]])


def _build_wedge_tables():
    """Index tables for the induced action of A on Lambda^2 C^4.

    For each 2-subset J the derivative of the wedge coordinate Phi_J is a
    signed sum of A entries times other coordinates; the six (row, col,
    source, sign) entries per subset encode exactly that sum.  The complement
    tables carry the Laplace-expansion signs used in the final pairing.
    """
    subsets = list(combinations(range(4), 2))
    index = {s: i for i, s in enumerate(subsets)}

    def perm_sign(seq):
        inv = 0
        for i in range(len(seq)):
            for j in range(i + 1, len(seq)):
                if seq[i] > seq[j]:
                    inv += 1
        return -1.0 if inv % 2 else 1.0

    rows = np.zeros((6, 6), dtype=np.int64)
    cols = np.zeros((6, 6), dtype=np.int64)
    srcs = np.zeros((6, 6), dtype=np.int64)
    sgns = np.zeros((6, 6), dtype=np.float64)
    for ji, J in enumerate(subsets):
        e = 0
        for pos in range(2):
            jp = J[pos]
            rows[ji, e] = jp
            cols[ji, e] = jp
            srcs[ji, e] = ji
            sgns[ji, e] = 1.0
            e += 1
            for a in range(4):
                if a in J:
                    continue
                replaced = list(J)
                replaced[pos] = a
                rows[ji, e] = jp
                cols[ji, e] = a
                srcs[ji, e] = index[tuple(sorted(replaced))]
                sgns[ji, e] = perm_sign(replaced)
                e += 1
        assert e == 6
    comp = np.zeros(6, dtype=np.int64)
    csgn = np.zeros(6, dtype=np.float64)
    for ji, J in enumerate(subsets):
        Jc = tuple(i for i in range(4) if i not in J)
        comp[ji] = index[Jc]
        csgn[ji] = perm_sign(list(J) + list(Jc))
    return subsets, rows, cols, srcs, sgns, comp, csgn


_SUBSETS, _ROWT, _COLT, _SRCT, _SGT, _COMP, _CSGN = _build_wedge_tables()


@dataclass(frozen=True)
class EvansProblem:
    """Wall eigenvalue problem: parameters, frame, weight and domain size.

    The frame must be the closed-form wall frame (it is filled in when
    omitted).  Construction cross-checks the closed-form matrix assembly
    against the finite-difference oracle at a handful of sample points.
    """

    params: MaterialParams
    eta: float
    frame: Frame | None = None
    half_width: float = 100.0
    sigma: int = field(init=False)

    def __post_init__(self):
        p = self.params
        if p.ccp != 0.0:
            raise ValueError(f"wall eigenvalue problem needs ccp = 0, got {p.ccp}")
        if p.mu >= 0.0:
            raise ValueError(f"wall eigenvalue problem needs mu < 0, got {p.mu}")
        if self.half_width <= 0:
            raise ValueError("half_width must be positive")
        wall = explicit_dw(p, branch=+1)
        ref = wall.frame
        if self.frame is None:
            object.__setattr__(self, "frame", ref)
        else:
            scale = max(1.0, abs(ref.s), abs(ref.omega))
            if (
                abs(self.frame.s - ref.s) > 1e-9 * scale
                or abs(self.frame.omega - ref.omega) > 1e-9 * scale
            ):
                raise ValueError(
                    f"frame {self.frame} is not the wall frame {ref}"
                )
        object.__setattr__(self, "sigma", wall.sigma)
        _oracle_gate(self)


@dataclass(frozen=True)
class EvansContour:
    """Boundary of the right half-annulus, parameterized by arclength t in [0, 1)."""

    radius: float
    inner_radius: float
    ts: np.ndarray

    @classmethod
    def build(cls, radius: float, inner_radius: float, mesh: int) -> "EvansContour":
        if not 0.0 < inner_radius < radius:
            raise ValueError("need 0 < inner_radius < radius")
        if mesh < 8:
            raise ValueError("need at least 8 mesh points")
        lengths = np.array([
            math.pi * radius,
            radius - inner_radius,
            math.pi * inner_radius,
            radius - inner_radius,
        ])
        total = lengths.sum()
        counts = np.maximum(2, np.floor(mesh * lengths / total).astype(int))
        counts[0] += mesh - counts.sum()
        if counts[0] < 2:
            raise ValueError("mesh too small for this contour")
        ts = []
        t0 = 0.0
        for seg in range(4):
            width = lengths[seg] / total
            ts.append(t0 + width * np.arange(counts[seg]) / counts[seg])
            t0 += width
        return cls(radius=radius, inner_radius=inner_radius, ts=np.concatenate(ts))

    def points(self, ts: np.ndarray | None = None) -> np.ndarray:
        """Map parameters to contour points, counterclockwise from -i radius."""
        t = self.ts if ts is None else ts
        R, r = self.radius, self.inner_radius
        total = math.pi * (R + r) + 2.0 * (R - r)
        u = np.asarray(t) * total
        out = np.empty(u.shape, dtype=complex)
        arc = math.pi * R
        leg = R - r
        inner = math.pi * r
        sel = u < arc
        out[sel] = R * np.exp(1j * (-0.5 * math.pi + u[sel] / R))
        u2 = u - arc
        sel = (~sel) & (u2 < leg)
        out[sel] = 1j * (R - u2[sel])
        u3 = u2 - leg
        sel = (u2 >= leg) & (u3 < inner)
        out[sel] = r * np.exp(1j * (0.5 * math.pi - u3[sel] / r))
        u4 = u3 - inner
        sel = u3 >= inner
        out[sel] = -1j * (r + u4[sel])
        return out

    def refined(self) -> "EvansContour":
        """Insert the parameter midpoint of every (cyclic) adjacent pair."""
        t = self.ts
        mids = 0.5 * (t + np.roll(t, -1))
        mids[-1] = 0.5 * (t[-1] + t[0] + 1.0) % 1.0
        ts = np.sort(np.concatenate([t, mids]))
        return EvansContour(radius=self.radius, inner_radius=self.inner_radius, ts=ts)


@dataclass
class WindingResult:
    winding: int
    min_modulus: float
    phase_resolved: bool
    mesh_used: int
    nodes: np.ndarray
    values: np.ndarray


# ----------------------------------------------------------------------------
# closed-form assembly and the finite-difference oracle


def _profile_arrays(p: MaterialParams, sigma: int, xi: np.ndarray):
    a = sigma * math.sqrt(-p.mu)
    with np.errstate(over="ignore"):
        sech = 1.0 / np.cosh(a * xi)
    th = np.tanh(a * xi)
    m1 = sech
    m3 = -th
    m1p = -a * sech * th
    m3p = -a * sech**2
    m1pp = a * a * sech * (th * th - sech * sech)
    m3pp = 2.0 * a * a * sech * sech * th
    grad2 = a * a * sech * sech
    return m1, m3, m1p, m3p, m1pp, m3pp, grad2


def _pencil_blocks(prob: EvansProblem, xi: np.ndarray):
    """Closed-form weighted pencil blocks: stacked 3x3 M2, M1_eta, M0_eta.

    The weighted second-order pencil is M2 n'' + M1_eta n' + (M0_eta - lam) n
    with M0_eta = M0 + eta M1 + eta^2 M2 and M1_eta = M1 + 2 eta M2.
    """
    p = prob.params
    f = prob.frame
    a = p.alpha
    opa2 = 1.0 + a * a
    eta = prob.eta
    m1, m3, m1p, m3p, m1pp, m3pp, grad2 = _profile_arrays(p, prob.sigma, xi)
    n = xi.size
    eye = np.eye(3)

    def skew(u1, u3):
        # cross-product matrix of (u1, 0, u3)
        M = np.zeros((n, 3, 3))
        M[:, 0, 1] = -u3
        M[:, 1, 0] = u3
        M[:, 1, 2] = -u1
        M[:, 2, 1] = u1
        return M

    M2 = (a * eye[None] - skew(m1, m3)) / opa2

    mmpT = np.zeros((n, 3, 3))
    mmpT[:, 0, 0] = m1 * m1p
    mmpT[:, 0, 2] = m1 * m3p
    mmpT[:, 2, 0] = m3 * m1p
    mmpT[:, 2, 2] = m3 * m3p
    M1 = f.s * eye[None] + (2.0 * a / opa2) * mmpT

    DC = np.zeros((n, 3, 3))
    DC[:, 0, 0] = m3
    DC[:, 0, 1] = -a
    DC[:, 0, 2] = m1
    DC[:, 1, 0] = a
    DC[:, 1, 1] = m3
    DC[:, 2, 2] = 2.0 * m3
    DC *= p.beta

    drive = p.h - p.mu * m3
    DF = np.zeros((n, 3, 3))
    DF[:, 0, 2] = p.mu * (a * m1 * m3) - drive * (a * m1)
    DF[:, 1, 2] = p.mu * (-m1)
    DF[:, 2, 2] = p.mu * (a * (m3 * m3 - 1.0)) - drive * (2.0 * a * m3)
    DF[:, 0, 0] = -drive * (a * m3)
    DF[:, 0, 1] = -drive * 1.0
    DF[:, 1, 0] = -drive * (-1.0)
    DF[:, 1, 1] = -drive * (a * m3)

    M0 = (
        skew(m1pp, m3pp)
        + opa2 * f.omega * _G3[None]
        + a * grad2[:, None, None] * eye[None]
        + DC
        + DF
    ) / opa2

    M0e = M0 + eta * M1 + eta * eta * M2
    M1e = M1 + 2.0 * eta * M2
    return M2, M1e, M0e, (m1, m3, m1p)


def _frame_matrices(prob: EvansProblem, xi: np.ndarray):
    """Stacked 3x3 blocks P = M2^-1, PQ = M2^-1 M0_eta, PW = M2^-1 M1_eta.

    Full 3-component pencil; the first-order matrix A of `assemble_A` is
    built from U = lam P - PQ and W = -PW.
    """
    p = prob.params
    a = p.alpha
    M2, M1e, M0e, (m1, m3, _) = _pencil_blocks(prob, xi)
    n = xi.size
    skew = np.zeros((n, 3, 3))
    skew[:, 0, 1] = -m3
    skew[:, 1, 0] = m3
    skew[:, 1, 2] = -m1
    skew[:, 2, 1] = m1
    mmT = np.zeros((n, 3, 3))
    mmT[:, 0, 0] = m1 * m1
    mmT[:, 0, 2] = m1 * m3
    mmT[:, 2, 0] = m1 * m3
    mmT[:, 2, 2] = m3 * m3
    M2inv = (a * a * np.eye(3)[None] + a * skew + mmT) / a
    P = M2inv
    PQ = np.matmul(M2inv, M0e)
    PW = np.matmul(M2inv, M1e)
    return P, PQ, PW


def _reduce_blocks(M2, M1e, M0e, m1, m3, m1p, a):
    """Project a 3-component pencil onto the moving tangent frame.

    With t1 = (m3, 0, -m1), t2 = e2 and kappa = a m1, the frame satisfies
    m' = kappa t1, t1' = -kappa m, t2' = 0.  Substituting n = p t1 + q t2
    and projecting onto t1, t2 gives 2x2 blocks; the p-column collects the
    curvature corrections from the frame derivatives.
    """
    n = m1.shape[0]
    T = np.zeros((n, 3, 2))
    T[:, 0, 0] = m3
    T[:, 2, 0] = -m1
    T[:, 1, 1] = 1.0
    mvec = np.zeros((n, 3))
    mvec[:, 0] = m1
    mvec[:, 2] = m3
    kap = a * m1
    kapp = a * m1p
    T2 = np.einsum("nip,nij,njq->npq", T, M2, T)
    T1 = np.einsum("nip,nij,njq->npq", T, M1e, T)
    T0 = np.einsum("nip,nij,njq->npq", T, M0e, T)
    M2m = np.einsum("nip,nij,nj->np", T, M2, mvec)
    M1m = np.einsum("nip,nij,nj->np", T, M1e, mvec)
    T0[:, :, 0] -= (
        (kap * kap)[:, None] * T2[:, :, 0]
        + kapp[:, None] * M2m
        + kap[:, None] * M1m
    )
    T1[:, :, 0] -= 2.0 * kap[:, None] * M2m
    return T2, T1, T0


def _invert_2x2(T2: np.ndarray) -> np.ndarray:
    det = T2[:, 0, 0] * T2[:, 1, 1] - T2[:, 0, 1] * T2[:, 1, 0]
    inv = np.empty_like(T2)
    inv[:, 0, 0] = T2[:, 1, 1]
    inv[:, 0, 1] = -T2[:, 0, 1]
    inv[:, 1, 0] = -T2[:, 1, 0]
    inv[:, 1, 1] = T2[:, 0, 0]
    inv /= det[:, None, None]
    return inv


def _tangent_matrices(prob: EvansProblem, xi: np.ndarray):
    """Stacked 2x2 blocks P = T2^-1, PQ = T2^-1 T0_eta, PW = T2^-1 T1_eta."""
    M2, M1e, M0e, (m1, m3, m1p) = _pencil_blocks(prob, xi)
    a = prob.sigma * math.sqrt(-prob.params.mu)
    T2, T1, T0 = _reduce_blocks(M2, M1e, M0e, m1, m3, m1p, a)
    P = _invert_2x2(T2)
    PQ = np.matmul(P, T0)
    PW = np.matmul(P, T1)
    return P, PQ, PW


def _interleave(U: np.ndarray, W: np.ndarray) -> np.ndarray:
    k = U.shape[0]
    A = np.zeros((2 * k, 2 * k), dtype=complex)
    for r in range(k):
        A[2 * r, 2 * r + 1] = 1.0
        A[2 * r + 1, 0::2] = U[r]
        A[2 * r + 1, 1::2] = W[r]
    return A


def assemble_A(prob: EvansProblem, lam: complex, xi: float) -> np.ndarray:
    """Closed-form first-order matrix A(xi; lam) of the full 3-component problem."""
    P, PQ, PW = _frame_matrices(prob, np.array([float(xi)]))
    U = lam * P[0] - PQ[0]
    return _interleave(U, -PW[0])


def _pointwise_rhs(m, mp, mpp, p: MaterialParams, f: Frame) -> np.ndarray:
    """Unprojected frame right-hand side as a function of (m, m', m'')."""
    a = p.alpha
    opa2 = 1.0 + a * a
    Dm = (a * mpp - np.cross(m, mpp)) / opa2
    bt = p.beta / (1.0 + p.ccp * m[2])
    drive = p.h - p.mu * m[2]
    fvec = (
        bt * np.array([m[0] * m[2] - a * m[1], m[1] * m[2] + a * m[0], m[2] ** 2 - 1.0])
        - drive
        * np.array([a * m[0] * m[2] + m[1], a * m[1] * m[2] - m[0], a * (m[2] ** 2 - 1.0)])
    ) / opa2
    gm = np.array([m[1], -m[0], 0.0])
    return Dm + f.s * mp + f.omega * gm + (a / opa2) * np.dot(mp, mp) * m + fvec


def _oracle_blocks(prob: EvansProblem, xi: float):
    """Unshifted pencil blocks (M0, M1, M2) by central differences of the rhs."""
    p = prob.params
    f = prob.frame
    x = np.array([float(xi)])
    m1, m3, m1p, m3p, m1pp, m3pp, _ = _profile_arrays(p, prob.sigma, x)
    m = np.array([m1[0], 0.0, m3[0]])
    mp = np.array([m1p[0], 0.0, m3p[0]])
    mpp = np.array([m1pp[0], 0.0, m3pp[0]])
    eps = 1e-4
    blocks = []
    for slot in range(3):
        B = np.zeros((3, 3))
        args = [m.copy(), mp.copy(), mpp.copy()]
        for j in range(3):
            args[slot][j] += eps
            hi = _pointwise_rhs(args[0], args[1], args[2], p, f)
            args[slot][j] -= 2.0 * eps
            lo = _pointwise_rhs(args[0], args[1], args[2], p, f)
            args[slot][j] += eps
            B[:, j] = (hi - lo) / (2.0 * eps)
        blocks.append(B)
    return blocks


def jacobian_oracle(prob: EvansProblem, lam: complex, xi: float) -> np.ndarray:
    """First-order matrix built by finite differences of the pointwise rhs.

    Central differences in each slot of (m, m', m'') at the closed-form
    profile give the second-order pencil blocks; the same weight shift and
    interleaving as the closed-form assembly then produce A.  The inversion
    of the leading block goes through a generic linear solve on purpose.
    """
    M0, M1, M2 = _oracle_blocks(prob, xi)
    eta = prob.eta
    M0e = M0 + eta * M1 + eta * eta * M2
    M1e = M1 + 2.0 * eta * M2
    M2inv = np.linalg.inv(M2)
    U = M2inv @ (lam * np.eye(3) - M0e)
    W = -M2inv @ M1e
    return _interleave(U, W)


def _tangent_oracle_matrices(prob: EvansProblem, xi: np.ndarray):
    """Tangent blocks P, PQ, PW with every pencil block sourced from the oracle.

    Much slower than the closed form; used to cross-check it and to rerun
    winding computations on an independently derived matrix.
    """
    n = xi.size
    M2 = np.empty((n, 3, 3))
    M1 = np.empty((n, 3, 3))
    M0 = np.empty((n, 3, 3))
    for i in range(n):
        M0[i], M1[i], M2[i] = _oracle_blocks(prob, float(xi[i]))
    eta = prob.eta
    M0e = M0 + eta * M1 + eta * eta * M2
    M1e = M1 + 2.0 * eta * M2
    p = prob.params
    m1, m3, m1p, *_ = _profile_arrays(p, prob.sigma, xi)
    a = prob.sigma * math.sqrt(-p.mu)
    T2, T1, T0 = _reduce_blocks(M2, M1e, M0e, m1, m3, m1p, a)
    P = _invert_2x2(T2)
    return P, np.matmul(P, T0), np.matmul(P, T1)


_GATE_SAMPLES = [
    (0.37 + 0.21j, -2.7),
    (0.37 + 0.21j, 0.0),
    (2.1 - 1.3j, 1.9),
    (-0.5 + 0.8j, -0.4),
]


def _oracle_gate(prob: EvansProblem):
    for lam, xi in _GATE_SAMPLES:
        closed = assemble_A(prob, lam, xi)
        fd = jacobian_oracle(prob, lam, xi)
        err = np.max(np.abs(closed - fd))
        if err > 1e-6 * (1.0 + abs(lam)):
            raise SolverFailure(
                f"matrix assembly disagrees with the pointwise oracle by {err:.3e} "
                f"at lam = {lam}, xi = {xi}"
            )
        x = np.array([xi])
        Pc, Qc, Wc = _tangent_matrices(prob, x)
        Po, Qo, Wo = _tangent_oracle_matrices(prob, x)
        tc = _interleave(lam * Pc[0] - Qc[0], -Wc[0])
        to = _interleave(lam * Po[0] - Qo[0], -Wo[0])
        err = np.max(np.abs(tc - to))
        if err > 1e-6 * (1.0 + abs(lam)):
            raise SolverFailure(
                f"tangent restriction disagrees with the pointwise oracle by "
                f"{err:.3e} at lam = {lam}, xi = {xi}"
            )


# ----------------------------------------------------------------------------
# asymptotic subspaces


def _end_poles(prob: EvansProblem) -> tuple[int, int]:
    # left end (xi -> -inf) rest state is sigma e3
    return prob.sigma, -prob.sigma


def _selected_roots(prob: EvansProblem, pole: int, lams: np.ndarray, stable: bool):
    """Continued selection of the two tangent spatial roots, per node.

    One root per quadratic factor.  On contours that stay in Re lam >= 0
    with both branch points at Re < 0, the principal square root of each
    (affine in lam) discriminant continues the large-lam selection
    analytically, so no path state is needed.  Returns the weighted rates
    nu - eta, one array per factor.
    """
    p = prob.params
    f = prob.frame
    c = llgs_coefficients(p, f, pole)
    eta = prob.eta
    sgn = -1.0 if stable else 1.0
    roots = []
    for fsign in (+1, -1):
        c2, c1, c0 = factor_coefficients(c, fsign)
        disc = c1 * c1 - 4.0 * c2 * (c0 - lams)
        roots.append((-c1 + sgn * np.sqrt(disc)) / (2.0 * c2) - eta)
    return roots


def _branch_points(prob: EvansProblem) -> list[complex]:
    pts = []
    for pole in (+1, -1):
        c = llgs_coefficients(prob.params, prob.frame, pole)
        hp, hm = absolute_spectrum(c)
        pts.extend([hp.anchor, hm.anchor])
    return pts


def _check_admissible(prob: EvansProblem):
    """Weighted essential curves and the branch points must sit left of Re = 0."""
    eta = prob.eta
    s = prob.frame.s
    for pole in (+1, -1):
        c = llgs_coefficients(prob.params, prob.frame, pole)
        for fsign in (+1, -1):
            c2, c1, c0 = factor_coefficients(c, fsign)
            # Re lam(eta + i k) is a downward parabola in k; take its vertex
            a_k = -c2.real
            b_k = -(2.0 * eta * c2.imag + c1.imag)
            const = c2.real * eta * eta + c1.real * eta + c0.real
            val = const - b_k * b_k / (4.0 * a_k)
            if not val < 0.0:
                raise ValueError(
                    f"weighted essential curve reaches Re = {val:.3g} >= 0 at "
                    f"pole {pole:+d}, factor {fsign:+d}, eta = {eta}"
                )
    for pt in _branch_points(prob):
        if not pt.real < 0.0:
            raise ValueError(
                f"branch point {pt} does not lie left of the contour"
            )
    if abs(eta) * prob.half_width > 600.0:
        raise ValueError("weight too strong for the domain size")
    _ = s


def _asymptotic_data(prob: EvansProblem, lams: np.ndarray, source: str):
    """Initial wedges and rate shifts at both ends, verified per node."""
    nn = lams.shape[0]
    pole_left, pole_right = _end_poles(prob)
    L = prob.half_width
    matrices = _tangent_matrices if source == "closed" else _tangent_oracle_matrices
    out = []
    for pole, stable, end_xi in (
        (pole_left, False, -L),
        (pole_right, True, L),
    ):
        nu_hats = _selected_roots(prob, pole, lams, stable)
        P, PQ, PW = matrices(prob, np.array([end_xi]))
        a_base = _interleave(-PQ[0].astype(complex), -PW[0])
        a_slope = _interleave(P[0].astype(complex), np.zeros((2, 2)))
        for r in range(2):
            a_slope[2 * r, 2 * r + 1] = 0.0
        A_all = a_base[None] + lams[:, None, None] * a_slope[None]
        scaleA = 1.0 + np.max(np.abs(A_all), axis=(1, 2))

        vecs = np.zeros((nn, 4, 2), dtype=complex)
        for col, fsign in enumerate((+1, -1)):
            w = 1j * fsign
            nu = nu_hats[col]
            vecs[:, 0, col] = 1.0
            vecs[:, 1, col] = nu
            vecs[:, 2, col] = w
            vecs[:, 3, col] = w * nu
        vecs /= np.linalg.norm(vecs, axis=1, keepdims=True)

        for col in range(2):
            nu = nu_hats[col]
            resid = np.einsum("nij,nj->ni", A_all, vecs[:, :, col]) - nu[:, None] * vecs[:, :, col]
            bad = np.abs(resid).max(axis=1) > 1e-6 * scaleA
            if np.any(bad):
                k = int(np.argmax(bad))
                raise SubspaceDegenerate(
                    f"asymptotic eigenvector residual too large at lam = {lams[k]}, "
                    f"pole {pole:+d}, mode {col}"
                )

        wedge = np.empty((nn, 6), dtype=complex)
        for ji, J in enumerate(_SUBSETS):
            wedge[:, ji] = np.linalg.det(vecs[:, J, :])
        norms = np.linalg.norm(wedge, axis=1)
        if np.any(norms < 1e-8):
            k = int(np.argmin(norms))
            raise SubspaceDegenerate(
                f"asymptotic subspace degenerates at lam = {lams[k]}, pole {pole:+d}"
            )
        wedge /= norms[:, None]
        shift = nu_hats[0] + nu_hats[1]
        out.append((wedge, shift))
    (phi0, shift_l), (psi0, shift_r) = out
    return phi0, shift_l, psi0, shift_r


# ----------------------------------------------------------------------------
# compound-matrix integration kernels


@njit(cache=True)
def _fill_A(A, lam, P, PQ, PW, idx):
    for r in range(2):
        rr = 2 * r + 1
        A[2 * r, rr] = 1.0
        for cc in range(2):
            A[rr, 2 * cc] = lam * P[idx, r, cc] - PQ[idx, r, cc]
            A[rr, 2 * cc + 1] = -PW[idx, r, cc]


@njit(cache=True)
def _deriv(A, phi, shift, sgn, rowt, colt, srct, sgt, out):
    for ji in range(6):
        acc = 0.0 + 0.0j
        for e in range(6):
            acc += sgt[ji, e] * A[rowt[ji, e], colt[ji, e]] * phi[srct[ji, e]]
        out[ji] = sgn * (acc - shift * phi[ji])


@njit(cache=True)
def _integrate_side(
    phi, lam, shift, sgn, base0, step_dir, nsteps, dxi,
    P, PQ, PW, rowt, colt, srct, sgt,
):
    """RK4 transport of the wedge; returns (status, accumulated log10 scale)."""
    A0 = np.zeros((4, 4), dtype=np.complex128)
    A1 = np.zeros((4, 4), dtype=np.complex128)
    A2 = np.zeros((4, 4), dtype=np.complex128)
    k1 = np.empty(6, dtype=np.complex128)
    k2 = np.empty(6, dtype=np.complex128)
    k3 = np.empty(6, dtype=np.complex128)
    k4 = np.empty(6, dtype=np.complex128)
    yt = np.empty(6, dtype=np.complex128)
    acc_log = 0.0
    for j in range(nsteps):
        b0 = base0 + 2 * j * step_dir
        _fill_A(A0, lam, P, PQ, PW, b0)
        _fill_A(A1, lam, P, PQ, PW, b0 + step_dir)
        _fill_A(A2, lam, P, PQ, PW, b0 + 2 * step_dir)
        _deriv(A0, phi, shift, sgn, rowt, colt, srct, sgt, k1)
        for t in range(6):
            yt[t] = phi[t] + 0.5 * dxi * k1[t]
        _deriv(A1, yt, shift, sgn, rowt, colt, srct, sgt, k2)
        for t in range(6):
            yt[t] = phi[t] + 0.5 * dxi * k2[t]
        _deriv(A1, yt, shift, sgn, rowt, colt, srct, sgt, k3)
        for t in range(6):
            yt[t] = phi[t] + dxi * k3[t]
        _deriv(A2, yt, shift, sgn, rowt, colt, srct, sgt, k4)
        for t in range(6):
            phi[t] += (dxi / 6.0) * (k1[t] + 2.0 * k2[t] + 2.0 * k3[t] + k4[t])
        if (j & 31) == 31:
            mx = 0.0
            for t in range(6):
                v = abs(phi[t])
                if v > mx:
                    mx = v
            if not np.isfinite(mx) or mx == 0.0:
                return 1, acc_log
            if mx > 1e100:
                inv = 1.0 / mx
                for t in range(6):
                    phi[t] *= inv
                acc_log += np.log10(mx)
    return 0, acc_log


@njit(cache=True, parallel=True)
def _evans_batch(
    lams, phi0, shift_l, psi0, shift_r, P, PQ, PW, K, dxi,
    rowt, colt, srct, sgt, comp, csgn,
):
    nn = lams.shape[0]
    mant = np.empty(nn, dtype=np.complex128)
    logs = np.empty(nn, dtype=np.float64)
    for q in prange(nn):
        phi = phi0[q].copy()
        st1, lg1 = _integrate_side(
            phi, lams[q], shift_l[q], 1.0, 0, 1, K, dxi,
            P, PQ, PW, rowt, colt, srct, sgt,
        )
        psi = psi0[q].copy()
        st2, lg2 = _integrate_side(
            psi, lams[q], shift_r[q], -1.0, 4 * K, -1, K, dxi,
            P, PQ, PW, rowt, colt, srct, sgt,
        )
        if st1 != 0 or st2 != 0:
            mant[q] = complex(np.nan, np.nan)
            logs[q] = 0.0
        else:
            acc = 0.0 + 0.0j
            for ji in range(6):
                acc += csgn[ji] * phi[ji] * psi[comp[ji]]
            mant[q] = acc
            logs[q] = lg1 + lg2
    return mant, logs


_DXI = 0.01


def _evans_raw(
    prob: EvansProblem, lams: np.ndarray, source: str = "closed"
) -> tuple[np.ndarray, np.ndarray]:
    """Evans values as (mantissa, log10 scale) arrays over the given lam nodes."""
    if source not in ("closed", "oracle"):
        raise ValueError(f"source must be 'closed' or 'oracle', got {source!r}")
    lams = np.ascontiguousarray(lams, dtype=complex)
    phi0, shift_l, psi0, shift_r = _asymptotic_data(prob, lams, source)
    L = prob.half_width
    K = max(2, round(L / _DXI))
    dxi = L / K
    half = np.linspace(-L, L, 4 * K + 1)
    matrices = _tangent_matrices if source == "closed" else _tangent_oracle_matrices
    P, PQ, PW = matrices(prob, half)
    mant, logs = _evans_batch(
        lams, phi0, shift_l, psi0, shift_r, P, PQ, PW, K, dxi,
        _ROWT, _COLT, _SRCT, _SGT, _COMP, _CSGN,
    )
    if not np.all(np.isfinite(mant)):
        k = int(np.argmin(np.isfinite(mant)))
        raise IntegrationOverflow(
            f"wedge transport lost finiteness at lam = {lams[k]}"
        )
    return mant, logs


def evans_value(prob: EvansProblem, lam: complex) -> complex:
    """Evans function at a single point right of the weighted spectra."""
    _check_admissible(prob)
    mant, logs = _evans_raw(prob, np.array([complex(lam)]))
    val = mant[0] * 10.0 ** logs[0]
    if not np.isfinite(val.real) or not np.isfinite(val.imag):
        raise IntegrationOverflow(f"Evans value overflowed at lam = {lam}")
    return complex(val)


def winding_number(
    prob: EvansProblem,
    radius: float = 100.0,
    inner_radius: float = 0.1,
    mesh: int = 1500,
    max_refine: int = 4,
    source: str = "closed",
) -> WindingResult:
    """Winding of the Evans function around the right half-annulus boundary.

    The phase is accumulated between adjacent nodes; the mesh is refined by
    cyclic midpoint insertion until every phase increment is below pi/2, up
    to `max_refine` rounds.  The annulus notch excludes the two symmetry
    eigenvalues at the origin, so a spectrally stable wall reports winding 0.
    With source = "oracle" every transported block comes from the
    finite-difference oracle instead of the closed-form assembly.
    """
    _check_admissible(prob)
    contour = EvansContour.build(radius, inner_radius, mesh)
    ts = contour.ts
    nodes = contour.points(ts)
    mant, logs = _evans_raw(prob, nodes, source)
    for round_idx in range(max_refine + 1):
        phase = np.angle(mant)
        dphi = np.diff(np.concatenate([phase, phase[:1]]))
        dphi = (dphi + math.pi) % (2.0 * math.pi) - math.pi
        resolved = bool(np.max(np.abs(dphi)) < 0.5 * math.pi)
        if resolved or round_idx == max_refine:
            break
        mids = 0.5 * (ts + np.roll(ts, -1))
        mids[-1] = (0.5 * (ts[-1] + ts[0] + 1.0)) % 1.0
        new_nodes = contour.points(mids)
        new_mant, new_logs = _evans_raw(prob, new_nodes, source)
        ts = np.concatenate([ts, mids])
        order = np.argsort(ts)
        ts = ts[order]
        nodes = np.concatenate([nodes, new_nodes])[order]
        mant = np.concatenate([mant, new_mant])[order]
        logs = np.concatenate([logs, new_logs])[order]
    if not resolved:
        raise PhaseUnresolved(
            f"phase increments stay above pi/2 after {max_refine} refinements "
            f"({ts.size} nodes)"
        )
    winding = int(round(float(np.sum(dphi)) / (2.0 * math.pi)))
    log_abs = np.log10(np.abs(mant)) + logs
    min_modulus = float(10.0 ** np.min(log_abs))
    values = mant * 10.0**logs
    return WindingResult(
        winding=winding,
        min_modulus=min_modulus,
        phase_resolved=True,
        mesh_used=int(ts.size),
        nodes=nodes,
        values=values,
    )

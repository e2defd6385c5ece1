"""Hand-derived reference tabulation of the weighted first-order matrix.

Kept verbatim as cross-validation data, including its known defects, which
are catalogued in docs/linearization_notes.md and reproduced here as closed
forms so the tests can assert the catalogue exactly.  Entry (i, j) of the
second-order blocks follows n_i'' = -sum_j u_ij n_j - sum_j v_ij n_j' with
state order (n1, n1', n2, n2', n3, n3').

The u22 entry contains a term divided by m3 and therefore diverges at the
wall center; evaluate away from xi = 0.
"""

import math

import numpy as np

__all__ = ["wall_profile", "tabulated_A", "catalogued_deviation"]


def wall_profile(mu: float, sigma: int, xi: float):
    """Profile values (m1, m3, m1'', m3'', |m'|^2) of the explicit wall."""
    a = sigma * math.sqrt(-mu)
    c = 1.0 / math.cosh(a * xi)
    t = math.tanh(a * xi)
    m1, m3 = c, -t
    m1pp = mu * c * (c * c - t * t)
    m3pp = -2.0 * mu * t * c * c
    grad2 = -mu * c * c
    return m1, m3, m1pp, m3pp, grad2


def tabulated_A(p, f, eta: float, lam: complex, xi: float, sigma: int = 1):
    """The tabulated 6x6 matrix, verbatim."""
    al, be, mu, h = p.alpha, p.beta, p.mu, p.h
    s, Om = f.s, f.omega
    opa2 = 1.0 + al * al
    A2 = al * al
    m1, m3, m1pp, m3pp, g2 = wall_profile(mu, sigma, xi)

    u11 = ((A2 + m1**2) / opa2 * g2 + be * (A2 + m1**2) / (al * opa2) * m3
           - (A2 + m1**2) * (h - mu * m3) / opa2 * m3 - (A2 + m1**2) / al * lam
           - m3 * m3pp / opa2 + Om * m3 - (al * be + h - mu * m3) / opa2 * m3
           + s * eta * (A2 + m1**2) / al + eta**2)
    u12 = (-(A2 + m1**2) / (al * opa2) * m3pp + Om * (A2 + m1**2) / al
           - (A2 + m1**2) * (h - mu * m3 + al * be) / (al * opa2)
           - al / opa2 * g2 * m3 + (al * (h - mu * m3) - be) / opa2 * m3
           - lam * m3 + m1 * m3 * m1pp / (al * opa2) - s * eta * m3)
    u13 = (be * (A2 + m1**2) / (al * opa2) * m1 + mu * (A2 + m1**2) / opa2 * m1 * m3
           - (A2 + m1**2) * (h - mu * m3) / opa2 * m1 + m1pp * m3 / opa2
           + mu * m1 * m3 / opa2 + m1 * m3 / opa2 * g2
           - (2 * al * (h - mu * m3) - 2 * be) / (al * opa2) * m1 * m3
           + mu * (m3**2 - 1) / opa2 * m1 * m3 - m1 * m3 / al * lam
           + s * eta / al * m1 * m3)
    # the first term writes |m|^2 (identically one on the profile)
    u21 = (al / opa2 * 1.0 * m3 + be / opa2 * m3**2
           - al * (h - mu * m3) / opa2 * m3**2 - lam * m3 + al / opa2 * m3pp
           - al * Om + (A2 * be + al * (h - mu * m3)) / opa2 + s * eta * m3)
    u22 = (-m3 * m3pp / opa2 + Om * m3 - al * be / opa2 * m3
           - (h - mu * m3) / opa2 * m3 + A2 / opa2 * g2 + al * be / opa2 * m3
           - A2 * (h - mu * m3) / m3 - al * lam - m1 * m1pp / opa2
           + al * s * eta + eta**2)
    u23 = (-(al * (h - mu * m3) - be) / opa2 * m1 * m3 + al * mu / opa2 * m1 * m3**2
           - al / opa2 * m1pp - al * mu / opa2 * m1 - al / opa2 * g2 * m1
           - 2 * be / opa2 * m1 * m3 + 2 * al * (h - mu * m3) / opa2 * m1 * m3
           - al * mu * (m3**2 - 1) / opa2 * m1 + lam * m1 - s * eta * m1)
    u31 = (m1 * m3 / opa2 * g2 + (be - al * (h - mu * m3)) / opa2 * m1 * m3**2
           - m1 * m3 / opa2 * lam + m1 * m3pp / opa2 - Om * m1
           + (h - mu * m3 + al * be) / opa2 * m1 + s * eta / al * m1 * m3)
    u32 = (-m1 * m3 * m3pp / (al * opa2) + m1 * m3 / al * Om
           - (h - mu * m3 + al * be) / (al * opa2) * m1 * m3**2
           - m1 * m3 / al * lam + al / opa2 * g2 * m1
           - (al * (h - mu * m3) - be) / opa2 * m1 * m3 - lam * m1
           + (A2 + m3**2) / (al * opa2) * m1pp + s * eta * m1)
    u33 = (be / (al * opa2) * m1**2 * m3 - al * (h - mu * m3) / (al * opa2) * m1**2 * m3
           + mu / opa2 * m1**2 * m3**2 - m1 * m1pp / opa2 - mu / opa2 * m1**2
           + (A2 + m3**2) / opa2 * g2
           - (A2 + m3**2) * (2 * al * (h - mu * m3) - 2 * be) / (al * opa2) * m3
           + mu * (A2 + m3**2) * (m3**2 - 1) / opa2 - (A2 + m3**2) / al * lam
           + (A2 + m3**2) / al * s * eta + eta**2)

    v11 = (A2 + m1**2) * s / al + 2 * eta
    v12 = -m3 * s
    v13 = m1 * m3 * s / al
    v21 = m3 * s
    v22 = al * s + 2 * eta
    v23 = -m1 * s
    v31 = m1 * m3 * s / al
    v32 = m1 * s
    v33 = (A2 + m3**2) * s / al + 2 * eta

    U = np.array([[u11, u12, u13], [u21, u22, u23], [u31, u32, u33]])
    V = np.array([[v11, v12, v13], [v21, v22, v23], [v31, v32, v33]])
    A = np.zeros((6, 6), dtype=complex)
    for i in range(3):
        A[2 * i, 2 * i + 1] = 1.0
        for j in range(3):
            A[2 * i + 1, 2 * j] = -U[i, j]
            A[2 * i + 1, 2 * j + 1] = -V[i, j]
    return A


def catalogued_deviation(p, f, eta: float, lam: complex, xi: float,
                         sigma: int = 1):
    """Closed-form correction: derived matrix minus `tabulated_A`."""
    al, be, mu, h = p.alpha, p.beta, p.mu, p.h
    opa2 = 1.0 + al * al
    a = sigma * math.sqrt(-mu)
    c = 1.0 / math.cosh(a * xi)
    t = math.tanh(a * xi)
    m1, m3 = c, -t
    m1p, m3p = -a * c * t, -a * c * c
    g = h - mu * m3
    g2 = -mu * c * c

    Du = np.zeros((3, 3), dtype=complex)
    Dv = np.zeros((3, 3), dtype=complex)
    Dv[0, 0] = 2 * m1 * m1p
    Dv[0, 2] = 2 * m1 * m3p
    Dv[2, 0] = 2 * m3 * m1p
    Dv[2, 2] = 2 * m3 * m3p
    Du[0, 0] = 2 * eta * m1 * m1p
    Du[0, 1] = 2 * lam * m3 + (al * g - be) * (m3**2 - m3) / opa2
    Du[0, 2] = (2 * eta * m1 * m3p
                - 2 * (al * g - be) * m1 * (m3**2 - m3) / (al * opa2))
    Du[1, 0] = al * (g2 - 1.0) * m3 / opa2
    Du[1, 1] = al * al * g * (al * al + m1**2) / (opa2 * m3)
    Du[2, 0] = (2 * eta * m3 * m1p
                - lam * m1 * m3 * (al * al - al + 1.0) / (al * opa2)
                + (al - 1.0) * (al * g - be) * m1 * m3**2 / (al * opa2))
    Du[2, 1] = (lam * m1 * m3 / al
                + (g + al * be) * (m1 * m3**2 - m1 * m3) / (al * opa2))
    Du[2, 2] = 2 * eta * m3 * m3p

    D = np.zeros((6, 6), dtype=complex)
    for i in range(3):
        for j in range(3):
            D[2 * i + 1, 2 * j] = -Du[i, j]
            D[2 * i + 1, 2 * j + 1] = -Dv[i, j]
    return D

"""Parameter validation, regime classification, and rest-state spectra."""

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from spinwall import (
    Frame,
    MaterialParams,
    PoleAtAnisotropyField,
    Regime,
    beta_pm,
    classify_regime,
    essential_spectrum_curve,
    gamma_curves,
    is_marginal,
    rest_state_dispersion,
)

finite = st.floats(allow_nan=False, allow_infinity=False)


def mk(alpha=1.0, beta=0.75, mu=-1.0, ccp=0.0, h=0.0):
    return MaterialParams(alpha=alpha, beta=beta, mu=mu, ccp=ccp, h=h)


class TestMaterialParams:
    def test_valid_construction(self):
        p = mk(h=1.9)
        assert p.alpha == 1.0 and p.h == 1.9

    @pytest.mark.parametrize("bad", [0.0, -0.5])
    def test_alpha_positive(self, bad):
        with pytest.raises(ValueError, match="alpha"):
            mk(alpha=bad)

    def test_beta_nonnegative(self):
        with pytest.raises(ValueError, match="beta"):
            mk(beta=-0.1)

    @pytest.mark.parametrize("bad", [1.0, -1.0, 1.7])
    def test_ccp_open_interval(self, bad):
        with pytest.raises(ValueError, match="ccp"):
            mk(ccp=bad)

    def test_rejects_nonfinite(self):
        with pytest.raises(ValueError, match="finite"):
            mk(h=math.nan)
        with pytest.raises(ValueError, match="finite"):
            mk(mu=math.inf)

    def test_frozen(self):
        with pytest.raises(Exception):
            mk().h = 3.0  # type: ignore[misc]


class TestRegimes:
    def test_effective_currents(self):
        p = mk(ccp=0.5)
        bp, bm = beta_pm(p)
        assert bp == pytest.approx(0.5) and bm == pytest.approx(1.5)

    def test_canonical_band(self):
        # +e3 stable iff h > -0.25, -e3 stable iff h < 1.75 at these values
        assert classify_regime(mk(h=0.0)) is Regime.BISTABLE
        assert classify_regime(mk(h=1.74)) is Regime.BISTABLE
        assert classify_regime(mk(h=2.0)) is Regime.MONOSTABLE_PLUS
        assert classify_regime(mk(h=-1.0)) is Regime.MONOSTABLE_MINUS

    def test_biunstable_window(self):
        p = MaterialParams(alpha=1.0, beta=3.0, mu=-0.1, ccp=-0.8, h=5.0)
        assert classify_regime(p) is Regime.BIUNSTABLE

    def test_marginal_at_thresholds(self):
        assert is_marginal(mk(h=1.75))
        assert is_marginal(mk(h=-0.25))
        assert not is_marginal(mk(h=1.7501))

    @given(
        h=st.floats(-4, 8),
        ccp=st.floats(-0.75, 0.75),
        beta=st.floats(0, 2),
        alpha=st.floats(0.2, 3),
        mu=st.floats(-2, -0.05),
    )
    def test_plus_maps_to_minus_under_reflection(self, h, ccp, beta, alpha, mu):
        p = MaterialParams(alpha=alpha, beta=beta, mu=mu, ccp=ccp, h=h)
        q = MaterialParams(alpha=alpha, beta=beta, mu=mu, ccp=-ccp, h=-h)
        if classify_regime(p) is Regime.MONOSTABLE_PLUS:
            assert classify_regime(q) is Regime.MONOSTABLE_MINUS

    @given(h=st.floats(-4, 4), alpha=st.floats(0.2, 3), mu=st.floats(-2, -0.05))
    def test_reflection_involution_without_current(self, h, alpha, mu):
        swap = {
            Regime.BISTABLE: Regime.BISTABLE,
            Regime.BIUNSTABLE: Regime.BIUNSTABLE,
            Regime.MONOSTABLE_PLUS: Regime.MONOSTABLE_MINUS,
            Regime.MONOSTABLE_MINUS: Regime.MONOSTABLE_PLUS,
        }
        p = MaterialParams(alpha=alpha, beta=0.0, mu=mu, ccp=0.0, h=h)
        q = MaterialParams(alpha=alpha, beta=0.0, mu=mu, ccp=0.0, h=-h)
        assert classify_regime(q) is swap[classify_regime(p)]


class TestGammaCurves:
    def test_sign_change_across_threshold(self):
        lo, hi = gamma_curves(mk(h=1.7)), gamma_curves(mk(h=1.8))
        assert lo[1] * hi[1] < 0  # minus-state diagnostic flips at 1.75

    def test_pole_raises(self):
        with pytest.raises(PoleAtAnisotropyField):
            gamma_curves(mk(h=-1.0))
        with pytest.raises(PoleAtAnisotropyField):
            gamma_curves(mk(h=1.0))


class TestDispersion:
    def test_branch_values_are_roots(self, rng):
        p = mk(h=1.9, ccp=0.3)
        f = Frame(s=0.6, omega=1.1)
        for _ in range(25):
            nu = complex(rng.normal(), rng.normal())
            for pole in (+1, -1):
                pts = essential_spectrum_curve(p, f, pole, eta=nu.real, k_grid=[nu.imag])
                for pt in pts:
                    val = rest_state_dispersion(p, f, pole, pt.lam, nu)
                    assert abs(val) < 1e-9 * (1 + abs(pt.lam)) ** 2

    def test_pole_validation(self):
        with pytest.raises(ValueError, match="pole"):
            rest_state_dispersion(mk(), Frame(0.0, 0.0), 0, 0.0, 0.0)
        with pytest.raises(ValueError, match="pole"):
            essential_spectrum_curve(mk(), Frame(0.0, 0.0), 3, 0.0, [0.0])

    def test_static_marginality_at_band_edge(self):
        # at the upper bistability edge the k=0 modes of -e3 sit on the axis
        p = mk(h=1.75)
        pts = essential_spectrum_curve(p, Frame(0.0, 0.0), -1, 0.0, [0.0])
        lams = sorted((pt.lam for pt in pts), key=lambda z: z.imag)
        assert lams[0] == pytest.approx(-0.75j, abs=1e-12)
        assert lams[1] == pytest.approx(+0.75j, abs=1e-12)

    def test_curve_layout_and_weight_passthrough(self):
        p = mk(h=2.4)
        ks = np.linspace(-2, 2, 11)
        pts = essential_spectrum_curve(p, Frame(0.5, 1.0), -1, -0.3, ks)
        assert len(pts) == 22
        assert all(pt.eta == -0.3 for pt in pts)
        assert [pt.k for pt in pts[:11]] == list(ks)

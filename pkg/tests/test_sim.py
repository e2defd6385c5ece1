"""Freezing simulator: construction, single steps, fits, short runs."""

import math

import numpy as np
import pytest

from spinwall import (
    DegenerateGram,
    Frame,
    Grid,
    LocalizedBump,
    MagnetizationField,
    MaterialParams,
    SimConfig,
    StepWall,
    ZeroVector,
    build_initial,
    classify_front,
    freeze_step,
    frame_m0,
    profile_m0,
    pushed_pulled_scan,
    renormalize,
    rhs,
    run,
    step,
    wall_position,
)

CANON = dict(alpha=1.0, beta=0.75, mu=-1.0)


def canon(h, ccp=0.0):
    return MaterialParams(ccp=ccp, h=h, **CANON)


def field_from_values(grid, values):
    return MagnetizationField(grid=grid, values=values)


class TestGridAndConfig:
    def test_grid_geometry(self):
        g = Grid(half_width=50.0, n=10001)
        assert g.dx == pytest.approx(0.01)
        assert g.xi[0] == -50.0 and g.xi[-1] == 50.0 and g.xi.size == 10001

    def test_grid_validation(self):
        with pytest.raises(ValueError):
            Grid(half_width=0.0, n=11)
        with pytest.raises(ValueError):
            Grid(half_width=1.0, n=2)

    def test_field_shape_validation(self):
        g = Grid(half_width=1.0, n=11)
        with pytest.raises(ValueError):
            MagnetizationField(grid=g, values=np.zeros((3, 10)))

    def test_config_validation(self):
        g = Grid(half_width=50.0, n=10001)
        ok = SimConfig(params=canon(1.0), grid=g, dt=1e-4, t_final=1.0,
                       initial=StepWall())
        assert ok.averaging_window == 0.2
        with pytest.raises(ValueError):
            SimConfig(params=canon(1.0), grid=g, dt=0.0, t_final=1.0,
                      initial=StepWall())
        with pytest.raises(ValueError):
            SimConfig(params=canon(1.0), grid=g, dt=1e-4, t_final=1.0,
                      initial=StepWall(), averaging_window=1.0)

    def test_config_rejects_unstable_explicit_part(self):
        g = Grid(half_width=50.0, n=10001)
        p = MaterialParams(alpha=0.5, beta=0.75, mu=-1.0, ccp=0.0, h=1.0)
        with pytest.raises(ValueError, match="explicit precession"):
            SimConfig(params=p, grid=g, dt=1e-4, t_final=1.0, initial=StepWall())
        # coarser grid satisfies the von Neumann bound at the same dt
        SimConfig(params=p, grid=Grid(half_width=50.0, n=2001), dt=1e-4,
                  t_final=1.0, initial=StepWall())


class TestInitialData:
    def test_step_wall_orientations(self):
        g = Grid(half_width=20.0, n=801)
        f = build_initial(StepWall(orientation=+1), g, canon(1.0))
        assert f.values[2, 0] == pytest.approx(1.0, abs=1e-9)
        assert f.values[2, -1] == pytest.approx(-1.0, abs=1e-9)
        assert np.allclose(np.sum(f.values**2, axis=0), 1.0, atol=1e-12)
        flipped = build_initial(StepWall(orientation=-1), g, canon(1.0))
        assert np.allclose(flipped.values[2], -f.values[2])

    def test_bump_shape(self):
        g = Grid(half_width=20.0, n=801)
        f = build_initial(LocalizedBump(amplitude=0.5, center=-3.0), g, canon(1.0))
        i = np.argmax(f.values[0])
        assert g.xi[i] == pytest.approx(-3.0, abs=g.dx)
        assert f.values[2].max() == pytest.approx(-math.cos(0.5), abs=1e-9)
        assert f.values[2, 0] == pytest.approx(-1.0, abs=1e-12)

    def test_validation(self):
        g = Grid(half_width=20.0, n=801)
        with pytest.raises(ValueError):
            build_initial(StepWall(orientation=0), g, canon(1.0))
        with pytest.raises(ValueError):
            build_initial(StepWall(), g, MaterialParams(alpha=1.0, beta=0.75,
                                                        mu=0.5, ccp=0.0, h=1.0))
        with pytest.raises(ValueError):
            build_initial("wall", g, canon(1.0))


class TestPointwiseOps:
    def test_renormalize(self):
        g = Grid(half_width=1.0, n=11)
        v = np.tile(np.array([[3.0], [0.0], [4.0]]), (1, 11))
        out = renormalize(field_from_values(g, v))
        assert np.allclose(out.values[0], 0.6) and np.allclose(out.values[2], 0.8)
        bad = v.copy()
        bad[:, 4] = 0.0
        with pytest.raises(ZeroVector):
            renormalize(field_from_values(g, bad))
        bad[:, 4] = np.nan
        with pytest.raises(ZeroVector):
            renormalize(field_from_values(g, bad))

    def test_rest_state_is_equilibrium(self):
        g = Grid(half_width=10.0, n=501)
        v = np.zeros((3, 501))
        v[2] = 1.0
        f = field_from_values(g, v)
        out = rhs(f, canon(2.0), Frame(s=0.3, omega=1.1))
        assert np.max(np.abs(out)) == 0.0
        stepped = step(f, canon(2.0), Frame(s=0.3, omega=1.1), dt=1e-3)
        assert np.max(np.abs(stepped.values - v)) < 1e-14

    def test_wall_rhs_small_at_explicit_frame(self):
        p = canon(1.9)
        g = Grid(half_width=25.0, n=2501)
        f = field_from_values(g, profile_m0(p.mu, +1, g.xi))
        r_good = np.max(np.abs(rhs(f, p, frame_m0(p))))
        r_bad = np.max(np.abs(rhs(f, p, Frame(s=0.0, omega=0.0))))
        assert r_good < 1e-3
        assert r_bad > 1e-2

    def test_step_preserves_norm(self):
        p = canon(1.9)
        g = Grid(half_width=25.0, n=2501)
        f = field_from_values(g, profile_m0(p.mu, +1, g.xi))
        out = step(f, p, frame_m0(p), dt=1e-4)
        assert np.allclose(np.sum(out.values**2, axis=0), 1.0, atol=1e-12)


class TestFreezeFit:
    def grid_and_wall(self):
        g = Grid(half_width=25.0, n=2501)
        return g, g.xi

    def test_translation_recovered(self):
        g, xi = self.grid_and_wall()
        dt, delta = 1e-6, 1e-6
        old = field_from_values(g, profile_m0(-1.0, +1, xi))
        new = field_from_values(g, profile_m0(-1.0, +1, xi - delta))
        s_fit, om_fit = freeze_step(new, old, dt)
        assert s_fit == pytest.approx(delta / dt, rel=1e-4)
        assert om_fit == pytest.approx(0.0, abs=1e-4)

    def test_rotation_recovered(self):
        g, xi = self.grid_and_wall()
        dt, phi = 1e-6, 1e-6
        base = profile_m0(-1.0, +1, xi)
        rot = np.stack([
            math.cos(phi) * base[0] - math.sin(phi) * base[1],
            math.sin(phi) * base[0] + math.cos(phi) * base[1],
            base[2],
        ])
        s_fit, om_fit = freeze_step(field_from_values(g, rot),
                                    field_from_values(g, base), dt)
        assert om_fit == pytest.approx(phi / dt, rel=1e-4)
        assert s_fit == pytest.approx(0.0, abs=1e-4)

    def test_degenerate_on_uniform_state(self):
        g = Grid(half_width=5.0, n=101)
        v = np.zeros((3, 101))
        v[2] = 1.0
        f = field_from_values(g, v)
        with pytest.raises(DegenerateGram):
            freeze_step(f, f, 1e-4)
        with pytest.raises(ValueError):
            freeze_step(f, f, 0.0)


class TestWallPosition:
    def test_crossing_location(self):
        g = Grid(half_width=20.0, n=2001)
        f = field_from_values(g, profile_m0(-1.0, +1, g.xi))
        assert wall_position(f) == pytest.approx(0.0, abs=g.dx)
        shifted = field_from_values(g, profile_m0(-1.0, +1, g.xi - 2.3))
        assert wall_position(shifted) == pytest.approx(2.3, abs=g.dx)

    def test_no_crossing_is_nan(self):
        g = Grid(half_width=5.0, n=101)
        v = np.zeros((3, 101))
        v[2] = 1.0
        assert math.isnan(wall_position(field_from_values(g, v)))


class TestClassifyFront:
    def test_labels(self):
        assert classify_front(1.05, 1.0, 2.0) == "pushed"
        assert classify_front(1.95, 1.0, 2.0) == "pulled"
        assert classify_front(1.5, 1.0, 2.0) == "ambiguous"
        assert classify_front(1.51, 1.0, 2.0) == "ambiguous"
        assert classify_front(0.7, 1.0, 1.0) == "ambiguous"


class TestRun:
    def test_short_run_contract(self):
        g = Grid(half_width=25.0, n=1251)
        cfg = SimConfig(params=canon(1.9), grid=g, dt=2e-4, t_final=1.0,
                        initial=StepWall())
        r = run(cfg)
        assert r.t_final_used == pytest.approx(1.0)
        assert r.freezing.s_history.size == 5001
        assert r.freezing.s == r.freezing.s_history[-1]
        assert r.wall_times.size == r.wall_positions.size
        assert r.wall_times[-1] <= 1.0 + 1e-12
        assert np.all(np.isfinite(r.freezing.s_history))
        assert np.allclose(np.sum(r.field.values**2, axis=0), 1.0, atol=1e-9)
        assert isinstance(r.converged, (bool, np.bool_))

    def test_wall_run_approaches_explicit_frame(self):
        p = canon(1.9)
        g = Grid(half_width=25.0, n=2501)
        cfg = SimConfig(params=p, grid=g, dt=1e-4, t_final=2.0,
                        initial=StepWall())
        r = run(cfg)
        f = frame_m0(p)
        assert r.s_inf == pytest.approx(f.s, abs=5e-3)
        assert r.omega_inf == pytest.approx(f.omega, abs=5e-3)
        assert abs(r.wall_positions[-1]) < 1.0

    def test_invasion_ignites_without_boundary_blowup(self):
        p = canon(10.0, ccp=0.5)
        g = Grid(half_width=25.0, n=1251)
        cfg = SimConfig(params=p, grid=g, dt=2e-4, t_final=3.0,
                        initial=LocalizedBump())
        r = run(cfg)
        assert np.isfinite(r.s_inf) and np.isfinite(r.omega_inf)
        # inflow end stays pinned at the unstable rest state it started from
        assert r.field.values[2, -1] == pytest.approx(-1.0, abs=1e-12)
        assert r.field.values[2].max() > 0.9


class TestScan:
    def test_bistable_row(self):
        g = Grid(half_width=25.0, n=1251)
        rows = pushed_pulled_scan([1.0], canon(0.0), grid=g, dt=2e-4,
                                  t_final=2.0, n_jobs=1)
        (row,) = rows
        assert row.h == 1.0
        assert row.s_wall == pytest.approx(0.125)
        assert row.omega_wall == pytest.approx(0.875)
        assert math.isnan(row.s_invasion) and math.isnan(row.omega_invasion)
        assert row.label == "bistable"
        assert np.isfinite(row.s_sim) and np.isfinite(row.omega_sim)

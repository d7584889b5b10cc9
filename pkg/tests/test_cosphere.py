import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hfio.cosphere import (
    PhaseSpaceField,
    PhaseSpacePoint,
    ball_average,
    ball_volume,
    hl_maximal,
    lp_lq_norm,
    maximal_radii,
    offset_distance_sq,
    quasi_distance,
)
from hfio.lattice import make_grid
from hfio.packets import DirectionSet

GRID = make_grid(2, 32, np.pi)
DIRS = DirectionSet.uniform(16)

point = st.tuples(st.integers(0, 31), st.integers(0, 31), st.integers(0, 15))


def _pt(t):
    return PhaseSpacePoint((t[0], t[1]), t[2])


class TestQuasiDistance:
    @given(a=point, b=point)
    @settings(max_examples=100, deadline=None)
    def test_symmetric(self, a, b):
        assert quasi_distance(GRID, DIRS, _pt(a), _pt(b)) == pytest.approx(
            quasi_distance(GRID, DIRS, _pt(b), _pt(a)), abs=1e-14)

    @given(a=point, b=point)
    @settings(max_examples=100, deadline=None)
    def test_zero_iff_equal(self, a, b):
        d = quasi_distance(GRID, DIRS, _pt(a), _pt(b))
        if a == b:
            assert d == 0.0
        else:
            assert d > 0.0

    @given(a=point, b=point, c=point)
    @settings(max_examples=150, deadline=None)
    def test_quasi_triangle(self, a, b, c):
        dab = quasi_distance(GRID, DIRS, _pt(a), _pt(b))
        dbc = quasi_distance(GRID, DIRS, _pt(b), _pt(c))
        dac = quasi_distance(GRID, DIRS, _pt(a), _pt(c))
        assert dac <= 4.0 * (dab + dbc) + 1e-12

    @given(a=point, b=point)
    @settings(max_examples=50, deadline=None)
    def test_offset_table_consistent(self, a, b):
        pa, pb = _pt(a), _pt(b)
        table = offset_distance_sq(GRID, DIRS.vectors[pa.omega], DIRS.vectors[pb.omega])
        m1 = (pa.x[0] - pb.x[0]) % GRID.N
        m2 = (pa.x[1] - pb.x[1]) % GRID.N
        assert table[m1, m2] == pytest.approx(
            quasi_distance(GRID, DIRS, pa, pb) ** 2, rel=1e-12)

    def test_offset_table_even(self):
        table = offset_distance_sq(GRID, DIRS.vectors[0], DIRS.vectors[3])
        flipped = np.roll(table[::-1, ::-1], (1, 1), axis=(0, 1))
        np.testing.assert_allclose(table, flipped, atol=1e-14)


class TestBallVolume:
    CENTER = PhaseSpacePoint((0, 0), 0)

    def test_positive_radius_required(self):
        with pytest.raises(ValueError, match="nonpositive-radius"):
            ball_volume(GRID, DIRS, self.CENTER, 0.0)

    def test_monotone_in_radius(self):
        taus = [0.3, 0.5, 0.9, 1.5, 2.5]
        vols = [ball_volume(GRID, DIRS, self.CENTER, t) for t in taus]
        assert all(a < b for a, b in zip(vols, vols[1:]))

    def test_center_independent(self):
        v0 = ball_volume(GRID, DIRS, PhaseSpacePoint((0, 0), 2), 0.7)
        v1 = ball_volume(GRID, DIRS, PhaseSpacePoint((17, 5), 2), 0.7)
        assert v0 == v1


class TestBallAverage:
    def _field(self, seed=0):
        rng = np.random.default_rng(seed)
        return PhaseSpaceField(GRID, DIRS, rng.standard_normal((16, 32, 32)))

    def test_radius_guards(self):
        F = self._field()
        with pytest.raises(ValueError, match="nonpositive-radius"):
            ball_average(F, -1.0)
        with pytest.raises(ValueError, match="radius-below-resolution"):
            ball_average(F, GRID.dx / 2)

    def test_constant_field_fixed(self):
        F = PhaseSpaceField(GRID, DIRS, np.full((16, 32, 32), 3.25))
        avg = ball_average(F, 0.8)
        np.testing.assert_allclose(avg.values, 3.25, rtol=1e-12)

    def test_monotone(self):
        F = self._field(seed=2)
        G = PhaseSpaceField(GRID, DIRS, F.values + 0.5)
        dv = ball_average(G, 0.6).values - ball_average(F, 0.6).values
        np.testing.assert_allclose(dv, 0.5, rtol=1e-10)

    def test_matches_direct_summation(self):
        from oracles import oracle_ball_average

        F = PhaseSpaceField(GRID, DIRS, np.abs(self._field(seed=3).values))
        fast = ball_average(F, 0.8).values
        slow = oracle_ball_average(F, 0.8).values
        np.testing.assert_allclose(fast, slow, rtol=1e-10)


class TestMaximal:
    def test_dominates_identity(self):
        rng = np.random.default_rng(5)
        F = PhaseSpaceField(GRID, DIRS, rng.standard_normal((16, 32, 32)))
        m = hl_maximal(F)
        assert np.all(m.values >= np.abs(F.values) - 1e-12)

    def test_radius_ladder_covers(self):
        radii = maximal_radii(GRID, DIRS)
        assert radii[0] < GRID.dx
        assert radii[-1] > GRID.L


class TestPhaseSpaceField:
    def test_shape_validated(self):
        with pytest.raises(ValueError, match="shape-mismatch"):
            PhaseSpaceField(GRID, DIRS, np.zeros((3, 32, 32)))

    def test_lp_norms(self):
        F = PhaseSpaceField(GRID, DIRS, np.ones((16, 32, 32)))
        measure = GRID.L**2 * 2 * np.pi
        assert F.lp_norm(1.0) == pytest.approx(measure)
        assert F.lp_norm(2.0) == pytest.approx(np.sqrt(measure))
        assert F.lp_norm(np.inf) == 1.0

    def test_mixed_norm_single_equals_lp(self):
        rng = np.random.default_rng(1)
        F = PhaseSpaceField(GRID, DIRS, rng.standard_normal((16, 32, 32)))
        assert lp_lq_norm([F], 1.0, 2.0) == pytest.approx(F.lp_norm(1.0))

    def test_mixed_norm_guards(self):
        F = PhaseSpaceField(GRID, DIRS, np.zeros((16, 32, 32)))
        with pytest.raises(ValueError):
            lp_lq_norm([], 1.0, 2.0)
        with pytest.raises(ValueError):
            lp_lq_norm([F], 0.5, 2.0)

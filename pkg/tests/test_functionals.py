import numpy as np
import pytest

from hfio.functionals import (
    conical_square,
    decompose,
    grand_maximal,
    gstar,
    hardy_norm,
    peetre_max,
    sobolev_norm,
    vertical_square,
)
from hfio.lattice import Field, lp_norm, make_grid, physical_field, translate


@pytest.fixture(scope="module")
def field(oracle_bank):
    rng = np.random.default_rng(13)
    grid = oracle_bank.grid
    vals = rng.standard_normal(grid.shape) + 1j * rng.standard_normal(grid.shape)
    return physical_field(grid, vals)


class TestGuards:
    def test_aperture_below_one(self, field, oracle_bank):
        with pytest.raises(ValueError):
            conical_square(field, oracle_bank, aperture=0.5)

    def test_gstar_alpha_positive(self, field, oracle_bank):
        with pytest.raises(ValueError):
            gstar(field, oracle_bank, 0.0)

    def test_grand_maximal_scale_cover(self, field, oracle_bank):
        with pytest.raises(ValueError):
            grand_maximal(field, oracle_bank, sigma_max=8.0)

    def test_grid_mismatch(self, oracle_bank):
        other = physical_field(make_grid(2, 16, np.pi), np.zeros((16, 16)))
        with pytest.raises(ValueError, match="grid-mismatch"):
            decompose(other, oracle_bank)


class TestHomogeneity:
    """Every functional is positively 1-homogeneous in the input."""

    def test_conical(self, field, oracle_bank):
        double = Field(field.grid, field.domain, 2.0 * field.values)
        a = conical_square(field, oracle_bank).values
        b = conical_square(double, oracle_bank).values
        np.testing.assert_allclose(b, 2.0 * a, rtol=1e-10)

    def test_vertical(self, field, oracle_bank):
        double = Field(field.grid, field.domain, 2.0 * field.values)
        a = vertical_square(field, oracle_bank).values
        b = vertical_square(double, oracle_bank).values
        np.testing.assert_allclose(b, 2.0 * a, rtol=1e-10)

    def test_grand_maximal(self, field, oracle_bank):
        double = Field(field.grid, field.domain, 2.0 * field.values)
        assert grand_maximal(double, oracle_bank) == pytest.approx(
            2.0 * grand_maximal(field, oracle_bank), rel=1e-10)


class TestEquivariance:
    def test_conical_translation(self, field, oracle_bank):
        shift = (5, 9)
        a = conical_square(translate(field, shift), oracle_bank).values
        b = conical_square(field, oracle_bank).values
        np.testing.assert_allclose(a, np.roll(b, shift, axis=(1, 2)), atol=1e-9)

    def test_vertical_translation(self, field, oracle_bank):
        shift = (3, -7)
        a = vertical_square(translate(field, shift), oracle_bank).values
        b = vertical_square(field, oracle_bank).values
        np.testing.assert_allclose(a, np.roll(b, shift, axis=(1, 2)), atol=1e-9)


class TestThreadDeterminism:
    def test_conical_bitwise(self, field, oracle_bank):
        a = conical_square(field, oracle_bank, threads=1).values
        b = conical_square(field, oracle_bank, threads=4).values
        assert np.array_equal(a, b)

    def test_gstar_bitwise(self, field, oracle_bank):
        a = gstar(field, oracle_bank, 2.5, threads=1).values
        b = gstar(field, oracle_bank, 2.5, threads=3).values
        assert np.array_equal(a, b)

    def test_grand_maximal_bitwise(self, field, oracle_bank):
        assert grand_maximal(field, oracle_bank, threads=1) == grand_maximal(
            field, oracle_bank, threads=4)


class TestChannels:
    def test_channels_vanish_above_16(self, field, oracle_bank):
        dec = decompose(field, oracle_bank)
        assert np.all(dec.channel_hat(0, 17.0) == 0.0)

    def test_channels_at_matches_single(self, field, oracle_bank):
        dec = decompose(field, oracle_bank)
        stacked = dec.channels_at(0.25)
        single = dec.channel(3, 0.25)
        np.testing.assert_allclose(stacked[3], single, atol=1e-12)


class TestPeetre:
    def test_dominates_channel_value(self, field, oracle_bank):
        """The weighted sup at (x, omega) is at least the channel value there
        (the candidate y = x, nu = omega has weight 1)."""
        dec = decompose(field, oracle_bank)
        per_scale = peetre_max(field, oracle_bank, alpha=2.5)
        for F, sigma in zip(per_scale, oracle_bank.scales.sigmas):
            chans = np.abs(dec.channels_at(sigma))
            assert np.all(F.values >= chans - 1e-10)


class TestComparisonNorms:
    def test_sobolev_zero_order_is_lp(self, field):
        assert sobolev_norm(field, 0.0, 1.0) == pytest.approx(
            lp_norm(field, 1.0), rel=1e-12)

    def test_hardy_positive_for_oscillatory(self, oracle_bank):
        grid = oracle_bank.grid
        x = grid.axis_coords()
        vals = np.cos(8.0 * x)[:, None] * np.exp(
            -((x - grid.L / 2) ** 2))[None, :]
        f = physical_field(grid, vals)
        assert hardy_norm(f) > 0.0

    def test_local_hardy_dominated_by_sum(self, field):
        loc = hardy_norm(field, local=True)
        assert loc > 0.0
        assert np.isfinite(loc)

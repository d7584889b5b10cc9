import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hfio.lattice import (
    Field,
    FieldFileError,
    apply_multiplier,
    frequency_field,
    lp_norm,
    make_grid,
    physical_field,
    read_field,
    to_frequency,
    to_physical,
    translate,
    write_field,
)


def _random_field(grid, seed=0):
    rng = np.random.default_rng(seed)
    vals = rng.standard_normal(grid.shape) + 1j * rng.standard_normal(grid.shape)
    return physical_field(grid, vals)


class TestGridSpec:
    def test_basic_properties(self):
        grid = make_grid(2, 64, np.pi)
        assert grid.dx == pytest.approx(np.pi / 64)
        assert grid.nyquist == pytest.approx(64.0)
        assert grid.shape == (64, 64)
        assert len(grid.axis_coords()) == 64
        assert grid.axis_freqs()[1] == pytest.approx(2.0)

    @pytest.mark.parametrize("n,N,L", [(0, 64, 1.0), (4, 64, 1.0), (2, 48, 1.0),
                                       (2, 4, 1.0), (2, 64, 0.0), (2, 64, -2.0)])
    def test_invalid_specs_rejected(self, n, N, L):
        with pytest.raises(ValueError):
            make_grid(n, N, L)

    def test_freq_radius_zero_at_origin(self):
        grid = make_grid(2, 16, 2 * np.pi)
        assert grid.freq_radius()[0, 0] == 0.0


class TestTransforms:
    def test_round_trip(self):
        grid = make_grid(2, 32, np.pi)
        f = _random_field(grid)
        g = to_physical(to_frequency(f))
        np.testing.assert_allclose(g.values, f.values, atol=1e-13)

    def test_parseval(self):
        grid = make_grid(2, 32, 2.0)
        f = _random_field(grid, seed=3)
        fhat = to_frequency(f)
        # ||f||_2^2 = (2*pi/L)^n / (2*pi)^n * sum |fhat|^2  on the torus
        lhs = lp_norm(f, 2.0) ** 2
        rhs = np.sum(np.abs(fhat.values) ** 2) * (1.0 / grid.L) ** grid.n
        assert lhs == pytest.approx(rhs, rel=1e-12)

    def test_domain_tracking(self):
        grid = make_grid(2, 16, 1.0)
        f = _random_field(grid)
        assert f.domain == "physical"
        assert to_frequency(f).domain == "frequency"
        assert to_frequency(to_frequency(f)).domain == "frequency"

    @given(a=st.floats(-3, 3), b=st.floats(-3, 3))
    @settings(max_examples=20, deadline=None)
    def test_multiplier_linearity(self, a, b):
        grid = make_grid(2, 16, np.pi)
        f = _random_field(grid, seed=1)
        g = _random_field(grid, seed=2)
        sym = grid.freq_radius()
        combo = physical_field(grid, a * f.values + b * g.values)
        lhs = apply_multiplier(combo, sym).values
        rhs = a * apply_multiplier(f, sym).values + b * apply_multiplier(g, sym).values
        np.testing.assert_allclose(lhs, rhs, atol=1e-10)

    def test_multiplier_composition(self):
        grid = make_grid(2, 16, np.pi)
        f = _random_field(grid, seed=5)
        r = grid.freq_radius()
        one_shot = apply_multiplier(f, r**2)
        two_shot = apply_multiplier(apply_multiplier(f, r), r)
        np.testing.assert_allclose(one_shot.values, two_shot.values, atol=1e-10)

    def test_scalar_multiplier(self):
        grid = make_grid(2, 16, np.pi)
        f = _random_field(grid, seed=6)
        g = apply_multiplier(f, 2.0)
        np.testing.assert_allclose(g.values, 2.0 * f.values, atol=1e-12)


class TestNormsAndTranslation:
    @pytest.mark.parametrize("p", [1.0, 2.0, 3.0, np.inf])
    def test_translate_preserves_norm(self, p):
        grid = make_grid(2, 32, np.pi)
        f = _random_field(grid, seed=4)
        g = translate(f, (5, -11))
        assert lp_norm(g, p) == pytest.approx(lp_norm(f, p), rel=1e-12)

    def test_lp_norm_rejects_bad_p(self):
        grid = make_grid(2, 16, 1.0)
        with pytest.raises(ValueError):
            lp_norm(_random_field(grid), 0.5)

    def test_multiplier_commutes_with_translation(self):
        grid = make_grid(2, 32, np.pi)
        f = _random_field(grid, seed=9)
        sym = np.exp(-grid.freq_radius())
        a = translate(apply_multiplier(f, sym), (3, 7)).values
        b = apply_multiplier(translate(f, (3, 7)), sym).values
        np.testing.assert_allclose(a, b, atol=1e-11)


class TestFieldIO:
    def test_round_trip_bit_exact(self, tmp_path):
        grid = make_grid(2, 32, np.pi)
        f = _random_field(grid, seed=8)
        path = tmp_path / "f.hfio"
        write_field(f, path)
        g = read_field(path)
        assert g.grid == grid
        assert g.domain == f.domain
        assert np.array_equal(g.values, f.values)

    def test_no_partial_files(self, tmp_path):
        grid = make_grid(2, 16, 1.0)
        write_field(_random_field(grid), tmp_path / "f.hfio")
        assert [p.name for p in tmp_path.iterdir()] == ["f.hfio"]

    def test_bad_magic_rejected(self, tmp_path):
        grid = make_grid(2, 16, 1.0)
        path = tmp_path / "f.hfio"
        write_field(_random_field(grid), path)
        raw = bytearray(path.read_bytes())
        raw[:4] = b"XXXX"
        path.write_bytes(raw)
        with pytest.raises(FieldFileError):
            read_field(path)

    def test_truncation_rejected(self, tmp_path):
        grid = make_grid(2, 16, 1.0)
        path = tmp_path / "f.hfio"
        write_field(_random_field(grid), path)
        path.write_bytes(path.read_bytes()[:-16])
        with pytest.raises(FieldFileError):
            read_field(path)


class TestFieldValidation:
    def test_shape_mismatch_rejected(self):
        grid = make_grid(2, 16, 1.0)
        with pytest.raises(ValueError):
            Field(grid, "physical", np.zeros((8, 8)))

    def test_bad_domain_rejected(self):
        grid = make_grid(2, 16, 1.0)
        with pytest.raises(ValueError):
            Field(grid, "spectral", np.zeros(grid.shape))

    def test_frequency_field_constructor(self):
        grid = make_grid(2, 16, 1.0)
        f = frequency_field(grid, np.ones(grid.shape))
        assert f.domain == "frequency"
        assert f.values.dtype == np.complex128

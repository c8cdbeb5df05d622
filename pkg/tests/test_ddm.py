import io

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ddmrfi.core import ConfigError, to_db
from ddmrfi.ddm import (
    DdmGrid,
    NoiseModel,
    ddm_from_text,
    ddm_to_text,
    inject_atypical,
    inject_jammer,
    noise_floor,
    noise_floor_db,
    nominal_noise_counts,
    read_ddm,
    synth_normal,
    write_ddm,
)
from oracle import brute_noise_floor


def grid_from(power, sp_delay=2, sp_doppler=1):
    return DdmGrid(
        power=np.asarray(power, dtype=float),
        specular_delay_index=sp_delay,
        specular_doppler_index=sp_doppler,
    )


class TestGridInvariants:
    def test_rejects_empty_forbidden_zone(self):
        with pytest.raises(ConfigError):
            grid_from(np.ones((5, 3)), sp_delay=0)

    def test_rejects_negative_power(self):
        power = np.ones((5, 3))
        power[3, 1] = -1.0
        with pytest.raises(ConfigError):
            grid_from(power)

    def test_rejects_out_of_range_specular(self):
        with pytest.raises(ConfigError):
            grid_from(np.ones((5, 3)), sp_delay=5)
        with pytest.raises(ConfigError):
            grid_from(np.ones((5, 3)), sp_doppler=3)

    def test_power_is_immutable(self):
        grid = grid_from(np.ones((5, 3)))
        with pytest.raises(ValueError):
            grid.power[0, 0] = 7.0


class TestNoiseFloor:
    def test_constant_forbidden_zone(self):
        power = np.full((6, 4), 100.0)
        power[4:, :] = 9999.0  # outside the forbidden zone
        assert noise_floor(grid_from(power, sp_delay=4)) == 100.0

    def test_small_grid_enumerated(self):
        # forbidden zone = rows 0..1 of a 5x3 grid: values 1..6, mean 3.5
        power = np.array(
            [
                [1.0, 2.0, 3.0],
                [4.0, 5.0, 6.0],
                [50.0, 60.0, 70.0],
                [10.0, 10.0, 10.0],
                [0.0, 1.0, 2.0],
            ]
        )
        grid = grid_from(power, sp_delay=2)
        assert noise_floor(grid) == 3.5
        assert noise_floor(grid) == brute_noise_floor(power.tolist(), 2)

    def test_depends_only_on_forbidden_zone(self):
        rng = np.random.default_rng(7)
        base = rng.uniform(1.0, 100.0, size=(9, 5))
        grid = grid_from(base, sp_delay=3)
        reference = noise_floor(grid)
        for _ in range(10):
            perturbed = np.array(base)
            perturbed[3:, :] = rng.uniform(0.0, 1e6, size=(6, 5))
            assert noise_floor(grid_from(perturbed, sp_delay=3)) == reference

    def test_matches_brute_force_on_random_grids(self):
        rng = np.random.default_rng(12345)
        for _ in range(100):
            n_delay = int(rng.integers(2, 20))
            n_doppler = int(rng.integers(1, 16))
            sp_delay = int(rng.integers(1, n_delay))
            power = rng.uniform(0.0, 1e5, size=(n_delay, n_doppler))
            grid = DdmGrid(power, sp_delay, int(rng.integers(0, n_doppler)))
            expected = brute_noise_floor(power.tolist(), sp_delay)
            assert noise_floor(grid) == pytest.approx(expected, rel=1e-12)


class TestNoiseModel:
    def test_direct_arithmetic(self):
        assert nominal_noise_counts(NoiseModel(2.0, 3.0, 4.0)) == 14.0

    def test_unit_gain_unit_power(self):
        counts = nominal_noise_counts(NoiseModel(1.0, 0.5, 0.5))
        assert counts == 1.0
        assert to_db(counts) == 0.0

    def test_forty_one_db_level(self):
        # G * (P_a + P_r) = 10^4.1 -> 41 dB exactly
        model = NoiseModel(10.0, 10.0 ** 3.1 / 2.0, 10.0 ** 3.1 / 2.0)
        assert to_db(nominal_noise_counts(model)) == pytest.approx(41.0, abs=1e-9)

    def test_rejects_nonpositive_fields(self):
        with pytest.raises(ConfigError):
            NoiseModel(0.0, 1.0, 1.0)


class TestSynthNormal:
    MODEL = NoiseModel(1.0, 500.0, 500.0)  # nominal 1000 counts = 30 dB

    def test_peak_at_specular_when_smooth(self):
        grid = synth_normal(model=self.MODEL, peak_counts=1e5, roughness=0.0, rng_seed=3)
        idx = np.unravel_index(np.argmax(grid.power), grid.power.shape)
        assert idx == (grid.specular_delay_index, grid.specular_doppler_index)

    def test_forbidden_zone_noise_level(self):
        # wide forbidden zone (>= 30 bins) keeps the sample mean of the
        # exponential fluctuation within +/-1 dB of the nominal level
        nominal_db = to_db(nominal_noise_counts(self.MODEL))
        for seed in range(20):
            grid = synth_normal(
                grid_shape=(24, 32),
                model=self.MODEL,
                peak_counts=1e5,
                roughness=0.4,
                rng_seed=seed,
                specular_delay_index=10,
            )
            assert grid.forbidden_zone().size >= 30
            assert noise_floor_db(grid) == pytest.approx(nominal_db, abs=1.0)

    def test_rough_surface_has_stronger_arms(self):
        rough = synth_normal(model=self.MODEL, peak_counts=1e5, roughness=0.8, rng_seed=11)
        smooth = synth_normal(model=self.MODEL, peak_counts=1e5, roughness=0.1, rng_seed=11)
        sp_d, sp_f = rough.specular_delay_index, rough.specular_doppler_index
        arm_power_rough = 0.0
        arm_power_smooth = 0.0
        for i in range(sp_d + 1, rough.n_delay):
            for j in range(rough.n_doppler):
                if abs(j - sp_f) > 1:
                    arm_power_rough += rough.power[i, j]
                    arm_power_smooth += smooth.power[i, j]
        assert arm_power_rough > arm_power_smooth

    def test_bit_reproducible(self):
        a = synth_normal(model=self.MODEL, peak_counts=5e4, roughness=0.5, rng_seed=99)
        b = synth_normal(model=self.MODEL, peak_counts=5e4, roughness=0.5, rng_seed=99)
        assert np.array_equal(a.power, b.power)

    def test_rejects_peak_below_noise(self):
        with pytest.raises(ConfigError):
            synth_normal(model=self.MODEL, peak_counts=999.0, rng_seed=0)


class TestInjectJammer:
    def base_grid(self, baseline=50.0):
        return grid_from(np.full((7, 5), baseline), sp_delay=3, sp_doppler=2)

    def test_zero_stripe_is_identity(self):
        grid = self.base_grid()
        out = inject_jammer(grid, 2, 0.0)
        assert np.array_equal(out.power, grid.power)

    def test_raises_noise_floor(self):
        grid = self.base_grid()
        out = inject_jammer(grid, 4, 123.0)
        assert noise_floor(out) > noise_floor(grid)

    def test_closed_form_uniform_baseline(self):
        b, c = 80.0, 35.0
        grid = self.base_grid(baseline=b)
        out = inject_jammer(grid, 1, c)
        assert noise_floor(out) == pytest.approx(b + c / grid.n_doppler, rel=1e-12)
        assert noise_floor(out) == pytest.approx(
            brute_noise_floor(out.power.tolist(), 3), rel=1e-12
        )

    def test_additive_composition(self):
        grid = self.base_grid()
        once = inject_jammer(grid, 2, 30.0)
        twice = inject_jammer(inject_jammer(grid, 2, 10.0), 2, 20.0)
        assert np.allclose(once.power, twice.power, rtol=0, atol=1e-12)

    def test_strictly_increasing_in_stripe(self):
        grid = self.base_grid()
        floors = [noise_floor(inject_jammer(grid, 0, c)) for c in (1.0, 5.0, 25.0)]
        assert floors == sorted(floors)
        assert len(set(floors)) == 3

    def test_rejects_bad_column(self):
        with pytest.raises(ConfigError):
            inject_jammer(self.base_grid(), 5, 1.0)
        with pytest.raises(ConfigError):
            inject_jammer(self.base_grid(), -1, 1.0)


class TestInjectAtypical:
    def base_grid(self):
        return grid_from(np.full((6, 4), 10.0), sp_delay=3, sp_doppler=2)

    def test_empty_mask_is_identity(self):
        grid = self.base_grid()
        out = inject_atypical(grid, [], 100.0)
        assert np.array_equal(out.power, grid.power)

    def test_forbidden_mask_rise(self):
        grid = self.base_grid()
        mask = {(0, 1), (1, 2), (2, 3)}  # k = 3 bins inside the forbidden zone
        out = inject_atypical(grid, mask, 24.0)
        fz_bins = grid.forbidden_zone().size
        assert noise_floor(out) == pytest.approx(
            noise_floor(grid) + 24.0 * 3 / fz_bins, rel=1e-12
        )

    def test_mask_outside_forbidden_zone_leaves_floor(self):
        grid = self.base_grid()
        out = inject_atypical(grid, {(4, 0), (5, 3)}, 1e6)
        assert noise_floor(out) == noise_floor(grid)

    def test_rejects_out_of_range(self):
        with pytest.raises(ConfigError):
            inject_atypical(self.base_grid(), {(6, 0)}, 1.0)


class TestDdmTextFormat:
    def test_round_trip_bytes(self):
        grid = synth_normal(peak_counts=2e4, roughness=0.35, rng_seed=5)
        text = ddm_to_text(grid)
        again = ddm_to_text(ddm_from_text(text))
        assert text == again
        assert text.endswith("\n")
        assert "\r" not in text

    def test_round_trip_values(self):
        grid = grid_from(np.array([[1.25, 2.0], [3.0, 4.5], [5.0, 6.0]]), sp_delay=1, sp_doppler=0)
        buf = io.StringIO()
        write_ddm(grid, buf)
        buf.seek(0)
        out = read_ddm(buf)
        assert np.array_equal(out.power, grid.power)
        assert out.specular_delay_index == grid.specular_delay_index
        assert out.delay_bin_chips == grid.delay_bin_chips

    def test_bad_header_reports(self):
        from ddmrfi.core import DataError

        with pytest.raises(DataError):
            ddm_from_text("1 2 3\n")


@settings(max_examples=50, deadline=None)
@given(st.integers(min_value=0, max_value=2**31 - 1))
def test_noise_floor_ignores_fuzzed_signal_zone(seed):
    rng = np.random.default_rng(seed)
    base = rng.uniform(0.0, 100.0, size=(8, 6))
    grid = grid_from(base, sp_delay=4, sp_doppler=3)
    fuzzed = np.array(base)
    fuzzed[4:, :] = rng.uniform(0.0, 1e7, size=(4, 6))
    assert noise_floor(grid_from(fuzzed, sp_delay=4, sp_doppler=3)) == noise_floor(grid)

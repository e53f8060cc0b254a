"""Tests for the flat key = value experiment configuration."""

import numpy as np
import pytest
from numpy.testing import assert_allclose

import vlcsim as v
from vlcsim.errors import ConfigError


class TestRoundTrip:
    def test_defaults_survive_serialization(self):
        cfg = v.ExperimentConfig()
        assert v.parse_config(cfg.to_text()) == cfg

    def test_awkward_floats_round_trip_losslessly(self):
        cfg = v.ExperimentConfig(i_low=0.1, i_high=1.0 / 3.0 + 1.0,
                                 lambdas=(0.1, 1.0 / 7.0), zeta_step=0.01)
        again = v.parse_config(cfg.to_text())
        assert again.i_high == cfg.i_high
        assert again.lambdas == cfg.lambdas

    def test_explicit_gammas_and_n_list(self):
        cfg = v.ExperimentConfig(gammas=(0.2, 0.3, 0.4), n_list=(64, 256, 1024))
        again = v.parse_config(cfg.to_text())
        assert again.gammas == (0.2, 0.3, 0.4)
        assert again.n_list == (64, 256, 1024)

    def test_auto_gammas_round_trip(self):
        again = v.parse_config(v.ExperimentConfig(gammas=v.AUTO).to_text())
        assert again.gammas == v.AUTO

    def test_file_round_trip(self, tmp_path):
        cfg = v.ExperimentConfig(seed=31337, symbol_count=123)
        path = tmp_path / "run.cfg"
        cfg.save(path)
        assert v.load_config(path) == cfg


class TestParsing:
    def test_comments_and_blank_lines_ignored(self):
        cfg = v.parse_config("# a comment\n\nseed = 9  # trailing\n")
        assert cfg.seed == 9

    def test_unknown_key_is_named(self):
        with pytest.raises(ConfigError) as err:
            v.parse_config("frobnicate = 3")
        assert err.value.key == "frobnicate"

    def test_bad_value_is_named(self):
        with pytest.raises(ConfigError) as err:
            v.parse_config("symbol_count = lots")
        assert err.value.key == "symbol_count"

    def test_missing_equals_sign(self):
        with pytest.raises(ConfigError):
            v.parse_config("just some words")

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError):
            v.load_config(tmp_path / "nope.cfg")

    def test_overrides_layer_on_base(self):
        base = v.ExperimentConfig(seed=1, symbol_count=50)
        cfg = v.parse_config("seed = 2", base)
        assert cfg.seed == 2 and cfg.symbol_count == 50


class TestValidation:
    @pytest.mark.parametrize("text,key", [
        ("n_subcarriers = 63", "n_subcarriers"),
        ("symbol_count = 0", "symbol_count"),
        ("oversample_factor = 0", "oversample_factor"),
        ("seed = -1", "seed"),
        ("i_low = 2.0", "i_high"),
        ("o_high = 0.0", "o_high"),
        ("lambdas = 1.5", "lambdas"),
        ("gammas = 0.2, 1.2", "gammas"),
        ("dnr_db_step = 0", "dnr_db_step"),
        ("dnr_db_stop = -10", "dnr_db_stop"),
        ("zeta_step = 0.7", "zeta_step"),
        ("gamma_step = 0", "gamma_step"),
        ("n_list = 63", "n_list"),
    ])
    def test_each_violation_names_its_key(self, text, key):
        with pytest.raises(ConfigError) as err:
            v.parse_config(text).validate()
        assert err.value.key == key

    def test_defaults_are_valid(self):
        v.ExperimentConfig().validate()


class TestDerivedValues:
    def test_dnr_grid_includes_both_ends(self):
        cfg = v.ExperimentConfig(dnr_db_start=0.0, dnr_db_stop=60.0, dnr_db_step=2.0)
        grid = cfg.dnr_db_grid()
        assert len(grid) == 31
        assert_allclose([grid[0], grid[-1]], [0.0, 60.0])

    def test_led_built_from_fields(self):
        led = v.ExperimentConfig(i_low=0.2, i_high=1.4, o_high=3.0).led()
        assert led == v.LedModel(0.2, 1.4, 3.0)

    def test_subcarrier_counts_fall_back_to_single_n(self):
        assert v.ExperimentConfig(n_subcarriers=128).subcarrier_counts() == (128,)
        assert v.ExperimentConfig(n_list=(64, 256)).subcarrier_counts() == (64, 256)

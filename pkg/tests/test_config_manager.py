"""
設定管理モジュールのテスト
"""

import math

import pytest

from src.core.config_manager import ConfigManager, RunConfig
from src.expsim.data_models import DetectorModel
from src.utils.exceptions import ConfigurationError, ValidationError


class TestConfigManager:

    def test_default_config_loads(self):
        manager = ConfigManager()
        config = manager.build_run_config()
        assert config.theta == pytest.approx(math.pi / 3)
        assert config.p == 0.5
        assert config.output_format == 'csv'
        assert config.detector == DetectorModel()

    def test_dotted_get(self, config_file):
        manager = ConfigManager(config_file)
        assert manager.get('experiment.detector.efficiency') == 1.0
        assert manager.get('experiment.missing.key', 'fallback') == 'fallback'
        assert manager.get_section('oracle')['grid_points'] == 720

    def test_overrides_take_precedence(self, config_file):
        config = ConfigManager(config_file).build_run_config({'p': 0.7, 'seed': 5, 'theta': None})
        assert config.p == 0.7
        assert config.seed == 5
        assert config.theta == pytest.approx(math.pi / 3)

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigurationError):
            ConfigManager(str(tmp_path / 'absent.yaml'))

    def test_invalid_yaml(self, tmp_path):
        path = tmp_path / 'broken.yaml'
        path.write_text("state: [unclosed\n", encoding='utf-8')
        with pytest.raises(ConfigurationError):
            ConfigManager(str(path))

    def test_missing_section(self, write_config, config_dict):
        del config_dict['oracle']
        with pytest.raises(ConfigurationError) as excinfo:
            ConfigManager(write_config(config_dict))
        assert 'oracle' in excinfo.value.message

    def test_out_of_range_value_in_file(self, write_config, config_dict):
        config_dict['state']['p'] = 1.5
        with pytest.raises(ConfigurationError):
            ConfigManager(write_config(config_dict))

    def test_detector_section(self, write_config, config_dict):
        config_dict['experiment']['detector'] = {'efficiency': 0.8, 'dark_counts': 2.0}
        manager = ConfigManager(write_config(config_dict))
        assert manager.detector == DetectorModel(efficiency=0.8, dark_counts=2.0)


class TestRunConfig:

    def test_invalid_weight(self, config_file):
        with pytest.raises(ValidationError):
            ConfigManager(config_file).build_run_config({'p': 1.5})

    def test_invalid_phi_grid(self):
        with pytest.raises(ValidationError):
            RunConfig(theta=1.0, p=0.5, phi_start=1.0, phi_stop=0.0, phi_count=10, counts_n=10, seed=1)
        with pytest.raises(ValidationError):
            RunConfig(theta=1.0, p=0.5, phi_start=0.0, phi_stop=1.0, phi_count=1, counts_n=10, seed=1)

    def test_invalid_counts_and_seed(self):
        with pytest.raises(ValidationError):
            RunConfig(theta=1.0, p=0.5, phi_start=0.0, phi_stop=1.0, phi_count=3, counts_n=0, seed=1)
        with pytest.raises(ValidationError):
            RunConfig(theta=1.0, p=0.5, phi_start=0.0, phi_stop=1.0, phi_count=3, counts_n=10, seed=-2)

    def test_grids(self, small_run_config):
        phis = small_run_config.phi_values()
        assert len(phis) == 13
        assert phis[0] == pytest.approx(-math.pi)
        assert phis[-1] == pytest.approx(math.pi)
        assert len(small_run_config.experiment_phi_values()) == 5
        assert small_run_config.oracle_options() == {
            'grid_points': 720, 'basins': 3, 'tol': 1e-9, 'sphere_resolution': 10000
        }

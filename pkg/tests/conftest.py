"""
共通フィクスチャ
"""

import copy
import math

import pytest
import yaml

from src.core.config_manager import RunConfig
from src.quantum.data_models import ThetaPState
from src.utils.logger import configure_logging

BASE_CONFIG = {
    'state': {'theta': math.pi / 3, 'p': 0.5},
    'scan': {'phi_start': -math.pi, 'phi_stop': math.pi, 'phi_count': 121, 'theta_count': 201},
    'experiment': {
        'counts_n': 10000,
        'seed': 20160101,
        'phi_count': 25,
        'seeds_per_point': 1,
        'detector': {'efficiency': 1.0, 'dark_counts': 0.0},
    },
    'oracle': {'grid_points': 720, 'basins': 3, 'bracket_tol': 1e-9, 'sphere_resolution': 10000},
    'execution': {'parallel_workers': 1},
    'output': {'format': 'csv', 'path': 'output'},
    'logging': {'level': 'WARNING', 'file': None, 'max_size_mb': 10, 'backup_count': 3},
}


@pytest.fixture(autouse=True)
def quiet_logging():
    """ログはテストごとの標準エラーへ WARNING 以上のみ"""
    configure_logging(log_level="WARNING")


@pytest.fixture
def balanced_state():
    """θ = π/3, p = 1/2"""
    return ThetaPState(math.pi / 3, 0.5)


@pytest.fixture
def biased_state():
    """θ = π/3, p = 0.7"""
    return ThetaPState(math.pi / 3, 0.7)


@pytest.fixture
def config_dict():
    return copy.deepcopy(BASE_CONFIG)


@pytest.fixture
def write_config(tmp_path):
    """設定辞書を YAML に書き出してパスを返す関数"""
    def _write(data, name='config.yaml'):
        path = tmp_path / name
        path.write_text(yaml.safe_dump(data), encoding='utf-8')
        return str(path)
    return _write


@pytest.fixture
def config_file(write_config, config_dict):
    return write_config(config_dict)


@pytest.fixture
def small_run_config(tmp_path):
    """図・実験テスト用の小さなグリッド"""
    return RunConfig(
        theta=math.pi / 3,
        p=0.5,
        phi_start=-math.pi,
        phi_stop=math.pi,
        phi_count=13,
        counts_n=1000,
        seed=7,
        output_path=str(tmp_path / 'out'),
        theta_count=21,
        experiment_phi_count=5,
    )

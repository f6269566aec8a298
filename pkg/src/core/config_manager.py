"""
設定管理モジュール

YAML 設定の読み込み、検証、コマンドライン引数による上書きを行います。
"""

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Optional

import numpy as np
import yaml

from ..expsim.data_models import DetectorModel
from ..utils.exceptions import ConfigurationError, ValidationError
from ..utils.logger import get_logger
from ..utils.validator import ConfigValidator, ParameterValidator


@dataclass
class RunConfig:
    """
    1回の実行の設定

    設定ファイルの値にコマンドライン引数を上書きしたものです。
    """
    theta: float
    p: float
    phi_start: float
    phi_stop: float
    phi_count: int
    counts_n: int
    seed: int
    output_format: str = 'csv'
    output_path: str = 'output'
    theta_count: int = 201
    experiment_phi_count: int = 25
    seeds_per_point: int = 1
    detector: DetectorModel = field(default_factory=DetectorModel)
    workers: int = 1
    grid_points: int = 720
    basins: int = 3
    bracket_tol: float = 1e-9
    sphere_resolution: int = 10000

    def __post_init__(self):
        """初期化後の検証"""
        self.theta = ParameterValidator.validate_theta(self.theta)
        self.p = ParameterValidator.validate_weight(self.p)
        ParameterValidator.validate_phi_grid(self.phi_start, self.phi_stop, self.phi_count)
        ParameterValidator.validate_counts(self.counts_n)
        ParameterValidator.validate_seed(self.seed)
        ParameterValidator.validate_format(self.output_format)
        if self.workers < 1:
            raise ValidationError(f"workers must be positive, got {self.workers}")

    @property
    def phi_grid(self) -> tuple:
        return self.phi_start, self.phi_stop, self.phi_count

    def phi_values(self) -> np.ndarray:
        """走査用の単調増加な φ グリッド"""
        return np.linspace(self.phi_start, self.phi_stop, self.phi_count)

    def experiment_phi_values(self) -> np.ndarray:
        """実験エミュレーション用の φ グリッド"""
        return np.linspace(self.phi_start, self.phi_stop, self.experiment_phi_count)

    def oracle_options(self) -> Dict[str, Any]:
        return {
            'grid_points': self.grid_points,
            'basins': self.basins,
            'tol': self.bracket_tol,
            'sphere_resolution': self.sphere_resolution,
        }


class ConfigManager:
    """設定管理クラス"""

    def __init__(self, config_path: Optional[str] = None):
        """
        Args:
            config_path: 設定ファイルパス（Noneの場合はデフォルトパス使用）
        """
        self.logger = get_logger(__name__)
        self.config_path = config_path or self._get_default_config_path()
        self._config_data = None
        self._load_config()

    def _get_default_config_path(self) -> str:
        """デフォルト設定ファイルパスを取得"""
        project_root = Path(__file__).parent.parent.parent
        return str(project_root / "config" / "config.yaml")

    def _load_config(self) -> None:
        """設定ファイルを読み込み、検証します"""
        config_file = Path(self.config_path)

        if not config_file.exists():
            raise ConfigurationError(f"Config file not found: {self.config_path}")

        try:
            with open(config_file, 'r', encoding='utf-8') as f:
                raw_config = yaml.safe_load(f)
        except yaml.YAMLError as e:
            raise ConfigurationError(f"Invalid YAML format: {e}")
        except OSError as e:
            raise ConfigurationError(f"Failed to read config: {e}", {'path': self.config_path})

        if not raw_config or not isinstance(raw_config, dict):
            raise ConfigurationError("Config file is empty")

        try:
            ConfigValidator.validate_config(raw_config)
        except ValidationError as e:
            raise ConfigurationError(f"Invalid configuration: {e.message}", {'path': self.config_path})

        self._config_data = raw_config
        self.logger.debug("Configuration loaded", path=self.config_path)

    def get(self, key: str, default: Any = None) -> Any:
        """
        設定値を取得します。

        Args:
            key: 設定キー（ドット記法対応 例: "experiment.detector.efficiency"）
            default: デフォルト値

        Returns:
            設定値
        """
        value = self._config_data
        for k in key.split('.'):
            if isinstance(value, dict) and k in value:
                value = value[k]
            else:
                return default
        return value

    def get_section(self, section: str) -> Dict[str, Any]:
        """設定セクション全体を取得します"""
        return self._config_data.get(section, {})

    @property
    def parallel_workers(self) -> int:
        return self.get('execution.parallel_workers', 1)

    @property
    def log_level(self) -> str:
        return self.get('logging.level', 'WARNING')

    @property
    def log_file(self) -> Optional[str]:
        return self.get('logging.file')

    @property
    def output_format(self) -> str:
        return self.get('output.format', 'csv')

    @property
    def detector(self) -> DetectorModel:
        """実験エミュレーションの検出器モデル（既定は理想）"""
        return DetectorModel(
            efficiency=float(self.get('experiment.detector.efficiency', 1.0)),
            dark_counts=float(self.get('experiment.detector.dark_counts', 0.0))
        )

    def build_run_config(self, overrides: Optional[Dict[str, Any]] = None) -> RunConfig:
        """
        設定ファイルの値に上書き値を適用して RunConfig を作成します。

        Args:
            overrides: RunConfig のフィールド名をキーとする上書き値（None の値は無視）

        Returns:
            実行設定

        Raises:
            ValidationError: 値が範囲外の場合
        """
        values: Dict[str, Any] = {
            'theta': self.get('state.theta', math.pi / 3),
            'p': self.get('state.p', 0.5),
            'phi_start': self.get('scan.phi_start', -math.pi),
            'phi_stop': self.get('scan.phi_stop', math.pi),
            'phi_count': self.get('scan.phi_count', 121),
            'theta_count': self.get('scan.theta_count', 201),
            'counts_n': self.get('experiment.counts_n', 10000),
            'seed': self.get('experiment.seed', 20160101),
            'experiment_phi_count': self.get('experiment.phi_count', 25),
            'seeds_per_point': self.get('experiment.seeds_per_point', 1),
            'detector': self.detector,
            'workers': self.parallel_workers,
            'grid_points': self.get('oracle.grid_points', 720),
            'basins': self.get('oracle.basins', 3),
            'bracket_tol': self.get('oracle.bracket_tol', 1e-9),
            'sphere_resolution': self.get('oracle.sphere_resolution', 10000),
            'output_format': self.output_format,
            'output_path': self.get('output.path', 'output'),
        }
        for key, value in (overrides or {}).items():
            if value is not None:
                values[key] = value
        return RunConfig(**values)

"""
バリデーション機能

計算パラメータと設定データの検証を行います。
"""

import math
from typing import Dict, Any
from .exceptions import ValidationError


class ParameterValidator:
    """状態・測定・実行パラメータ検証クラス"""

    # 有効な出力形式
    VALID_FORMATS = {'csv', 'json'}

    # 64bit 符号なし整数の上限
    MAX_SEED = 2 ** 64 - 1

    @classmethod
    def validate_theta(cls, theta: float) -> float:
        """
        開口角 θ を検証します。

        Args:
            theta: Bloch 球上の開口角（ラジアン）

        Returns:
            検証済みの θ

        Raises:
            ValidationError: θ が [0, π] の範囲外または有限でない場合
        """
        theta = cls._finite(theta, 'theta')
        if theta < 0.0 or theta > math.pi:
            raise ValidationError(f"theta must be within [0, pi], got {theta}")
        return theta

    @classmethod
    def validate_weight(cls, p: float) -> float:
        """混合比 p を検証します"""
        p = cls._finite(p, 'p')
        if p < 0.0 or p > 1.0:
            raise ValidationError(f"p must be within [0, 1], got {p}")
        return p

    @classmethod
    def validate_counts(cls, n: int) -> int:
        """計数 N (≥1) を検証します"""
        if isinstance(n, bool) or not isinstance(n, int) or n < 1:
            raise ValidationError(f"counts must be a positive integer, got {n!r}")
        return n

    @classmethod
    def validate_seed(cls, seed: int) -> int:
        """乱数シードを検証します"""
        if isinstance(seed, bool) or not isinstance(seed, int) or seed < 0 or seed > cls.MAX_SEED:
            raise ValidationError(f"seed must be a 64-bit unsigned integer, got {seed!r}")
        return seed

    @classmethod
    def validate_phi_grid(cls, start: float, stop: float, count: int) -> None:
        """φ グリッド (start, stop, count) を検証します"""
        cls._finite(start, 'phi_start')
        cls._finite(stop, 'phi_stop')
        if isinstance(count, bool) or not isinstance(count, int) or count < 2:
            raise ValidationError(f"phi_count must be an integer >= 2, got {count!r}")
        if stop <= start:
            raise ValidationError(f"phi_stop must be greater than phi_start ({start} >= {stop})")

    @classmethod
    def validate_format(cls, output_format: str) -> str:
        """出力形式を検証します"""
        if output_format not in cls.VALID_FORMATS:
            raise ValidationError(
                f"Invalid output format: {output_format}. Must be one of {sorted(cls.VALID_FORMATS)}"
            )
        return output_format

    @staticmethod
    def _finite(value: Any, name: str) -> float:
        try:
            value = float(value)
        except (TypeError, ValueError):
            raise ValidationError(f"{name} must be a real number, got {value!r}")
        if not math.isfinite(value):
            raise ValidationError(f"{name} must be finite, got {value}")
        return value


class ConfigValidator:
    """設定データ検証クラス"""

    REQUIRED_SECTIONS = ['state', 'scan', 'experiment', 'oracle', 'execution', 'output', 'logging']

    @classmethod
    def validate_config(cls, config: Dict[str, Any]) -> None:
        """
        設定データを検証します。

        Args:
            config: 設定データ

        Raises:
            ValidationError: 設定が無効な場合
        """
        # 必須セクション確認
        for section in cls.REQUIRED_SECTIONS:
            if section not in config:
                raise ValidationError(f"Missing required config section: {section}")

        cls._validate_state_config(config.get('state', {}))
        cls._validate_scan_config(config.get('scan', {}))
        cls._validate_experiment_config(config.get('experiment', {}))
        cls._validate_oracle_config(config.get('oracle', {}))
        cls._validate_execution_config(config.get('execution', {}))
        ParameterValidator.validate_format(config.get('output', {}).get('format', 'csv'))
        cls._validate_logging_config(config.get('logging', {}))

    @classmethod
    def _validate_state_config(cls, state_config: Dict[str, Any]) -> None:
        """state設定の検証"""
        ParameterValidator.validate_theta(state_config.get('theta', math.pi / 3))
        ParameterValidator.validate_weight(state_config.get('p', 0.5))

    @classmethod
    def _validate_scan_config(cls, scan_config: Dict[str, Any]) -> None:
        """scan設定の検証"""
        ParameterValidator.validate_phi_grid(
            scan_config.get('phi_start', -math.pi),
            scan_config.get('phi_stop', math.pi),
            scan_config.get('phi_count', 121)
        )
        theta_count = scan_config.get('theta_count', 201)
        if not isinstance(theta_count, int) or theta_count < 2:
            raise ValidationError("theta_count must be an integer >= 2")

    @classmethod
    def _validate_experiment_config(cls, experiment_config: Dict[str, Any]) -> None:
        """experiment設定の検証"""
        ParameterValidator.validate_counts(experiment_config.get('counts_n', 10000))
        ParameterValidator.validate_seed(experiment_config.get('seed', 0))

        phi_count = experiment_config.get('phi_count', 25)
        if not isinstance(phi_count, int) or phi_count < 2:
            raise ValidationError("experiment.phi_count must be an integer >= 2")

        # 検出器モデル（既定は理想検出器）
        detector = experiment_config.get('detector', {}) or {}
        efficiency = detector.get('efficiency', 1.0)
        if not isinstance(efficiency, (int, float)) or efficiency <= 0.0 or efficiency > 1.0:
            raise ValidationError("detector.efficiency must be within (0, 1]")
        dark_counts = detector.get('dark_counts', 0.0)
        if not isinstance(dark_counts, (int, float)) or dark_counts < 0.0:
            raise ValidationError("detector.dark_counts must be non-negative")

    @classmethod
    def _validate_oracle_config(cls, oracle_config: Dict[str, Any]) -> None:
        """oracle設定の検証"""
        grid_points = oracle_config.get('grid_points', 720)
        if not isinstance(grid_points, int) or grid_points < 8:
            raise ValidationError("oracle.grid_points must be an integer >= 8")

        basins = oracle_config.get('basins', 3)
        if not isinstance(basins, int) or basins < 1:
            raise ValidationError("oracle.basins must be a positive integer")

        tol = oracle_config.get('bracket_tol', 1e-9)
        if not isinstance(tol, (int, float)) or tol <= 0.0:
            raise ValidationError("oracle.bracket_tol must be positive")

        resolution = oracle_config.get('sphere_resolution', 10000)
        if not isinstance(resolution, int) or resolution < 100:
            raise ValidationError("oracle.sphere_resolution must be an integer >= 100")

    @classmethod
    def _validate_execution_config(cls, execution_config: Dict[str, Any]) -> None:
        """execution設定の検証"""
        workers = execution_config.get('parallel_workers', 1)
        if not isinstance(workers, int) or workers < 1 or workers > 32:
            raise ValidationError("parallel_workers must be between 1 and 32")

    @classmethod
    def _validate_logging_config(cls, logging_config: Dict[str, Any]) -> None:
        """logging設定の検証"""
        level = logging_config.get('level', 'WARNING')
        valid_levels = ['DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL']
        if level not in valid_levels:
            raise ValidationError(f"Invalid logging level: {level}. Must be one of {valid_levels}")

        max_size = logging_config.get('max_size_mb', 10)
        if not isinstance(max_size, int) or max_size < 1 or max_size > 1000:
            raise ValidationError("max_size_mb must be between 1 and 1000")

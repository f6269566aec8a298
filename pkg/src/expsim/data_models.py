"""
実験エミュレーションのデータモデル

計数記録、トモグラフィー結果、検出器モデル、パイプラインの出力構造を定義します。
"""

import math
from dataclasses import dataclass, field, asdict
from typing import Any, Dict, List, Optional

import numpy as np

from ..quantum.data_models import MeasurementSetting, ThetaPState
from ..utils.exceptions import ValidationError


@dataclass(frozen=True)
class CountRecord:
    """単一測定設定の計数 n±"""
    setting: MeasurementSetting
    n_plus: int
    n_minus: int

    def __post_init__(self):
        for name in ('n_plus', 'n_minus'):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int) or value < 0:
                raise ValidationError(f"{name} must be a non-negative integer, got {value!r}")

    @property
    def total(self) -> int:
        return self.n_plus + self.n_minus


@dataclass(frozen=True)
class DetectorModel:
    """
    検出器モデル

    efficiency: 各計数が検出される確率 η、dark_counts: 設定あたりの暗計数の平均
    """
    efficiency: float = 1.0
    dark_counts: float = 0.0

    def __post_init__(self):
        if not 0.0 < self.efficiency <= 1.0:
            raise ValidationError(f"detector efficiency must be within (0, 1], got {self.efficiency}")
        if self.dark_counts < 0.0:
            raise ValidationError(f"dark_counts must be non-negative, got {self.dark_counts}")

    @property
    def ideal(self) -> bool:
        return self.efficiency == 1.0 and self.dark_counts == 0.0

    def apply(self, counts: np.ndarray, rng: np.random.Generator) -> np.ndarray:
        """理想計数に検出効率の間引きと暗計数を加えます（理想検出器では乱数を消費しません）"""
        counts = np.asarray(counts, dtype=np.int64)
        if self.ideal:
            return counts
        detected = rng.binomial(counts, self.efficiency)
        if self.dark_counts > 0.0:
            detected = detected + rng.poisson(self.dark_counts, size=counts.shape)
        return detected.astype(np.int64)


IDEAL_DETECTOR = DetectorModel()


@dataclass
class TomographyResult:
    """
    トモグラフィー結果

    rho_raw は線形逆変換（非物理的になり得る）、rho_ml は物理的射影後の密度行列です。
    """
    rho_raw: np.ndarray
    rho_ml: np.ndarray
    settings_used: List[str]
    n_per_setting: int
    fidelity_vs_truth: Optional[float] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            'settings_used': list(self.settings_used),
            'n_per_setting': self.n_per_setting,
            'fidelity_vs_truth': self.fidelity_vs_truth,
        }


@dataclass
class PipelineRecord:
    """
    単一測定角の推定値と閉形式の値

    skipped_plus / skipped_minus は計数ゼロで条件付きトモグラフィーを行えなかった分岐です。
    """
    phi: float
    replicate: int
    counts_plus: int
    counts_minus: int
    r_plus_hat: float
    r_minus_hat: float
    purity_plus_hat: float
    purity_minus_hat: float
    avg_purity_hat: float
    discord_hat: float
    i2_hat: float
    r_plus: float
    purity_plus: float
    purity_minus: float
    avg_purity: float
    discord_phi: float
    i2_phi: float
    skipped_plus: bool = False
    skipped_minus: bool = False

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    def errors(self) -> Dict[str, float]:
        """推定値の絶対誤差（スキップした分岐は NaN）"""
        return {
            'r_plus': abs(self.r_plus_hat - self.r_plus),
            'purity_plus': abs(self.purity_plus_hat - self.purity_plus),
            'purity_minus': abs(self.purity_minus_hat - self.purity_minus),
            'avg_purity': abs(self.avg_purity_hat - self.avg_purity),
            'discord': abs(self.discord_hat - self.discord_phi),
            'i2': abs(self.i2_hat - self.i2_phi),
        }


@dataclass
class ExperimentRun:
    """実験パイプライン全体の結果"""
    state: ThetaPState
    counts_n: int
    seed: int
    detector: DetectorModel
    preparation: TomographyResult
    marginal: TomographyResult
    records: List[PipelineRecord] = field(default_factory=list)

    @property
    def skipped_branches(self) -> int:
        return sum(int(r.skipped_plus) + int(r.skipped_minus) for r in self.records)

    def summary(self) -> Dict[str, Any]:
        """
        推定誤差の要約

        Returns:
            準備状態の忠実度と、各推定量の絶対誤差の中央値・最大値
        """
        errors: Dict[str, Dict[str, float]] = {}
        if self.records:
            keys = self.records[0].errors().keys()
            for key in keys:
                values = np.array([r.errors()[key] for r in self.records], dtype=float)
                values = values[~np.isnan(values)]
                errors[key] = {
                    'median': float(np.median(values)) if values.size else math.nan,
                    'max': float(np.max(values)) if values.size else math.nan,
                }

        return {
            'theta': self.state.theta,
            'p': self.state.p,
            'counts_n': self.counts_n,
            'seed': self.seed,
            'detector_efficiency': self.detector.efficiency,
            'detector_dark_counts': self.detector.dark_counts,
            'points': len(self.records),
            'skipped_branches': self.skipped_branches,
            'preparation_fidelity': self.preparation.fidelity_vs_truth,
            'marginal_fidelity': self.marginal.fidelity_vs_truth,
            'errors': errors,
        }

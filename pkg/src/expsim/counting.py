"""
計数シミュレーション

測定設定ごとに固定総数 N の光子を二項分布で ± に振り分けます。
"""

from typing import Optional, Tuple, Union

import numpy as np

from .data_models import IDEAL_DETECTOR, CountRecord, DetectorModel
from .rng import make_rng
from ..quantum.data_models import MeasurementSetting
from ..quantum.linalg import ensure_density
from ..quantum.measurement import projectors
from ..utils.exceptions import EstimationError
from ..utils.validator import ParameterValidator

RngLike = Union[int, np.random.Generator]


def as_generator(rng: RngLike) -> np.random.Generator:
    """シードまたは Generator から Generator を得ます"""
    if isinstance(rng, np.random.Generator):
        return rng
    return make_rng(rng)


def _clip_probability(value: float) -> float:
    return min(max(float(value), 0.0), 1.0)


def outcome_probability(rho, setting: MeasurementSetting) -> float:
    """単一量子ビット状態で結果 + を得る確率 Tr(ρΠ₊)"""
    arr = ensure_density(rho)
    plus, _ = projectors(setting)
    return _clip_probability(np.trace(arr @ plus).real)


def draw_binary_counts(r_plus: float, n: int, rng: np.random.Generator,
                       detector: Optional[DetectorModel] = None) -> Tuple[int, int]:
    """確率 r₊ で N 回試行したときの (n₊, n₋)"""
    n_plus = int(rng.binomial(n, _clip_probability(r_plus)))
    counts = (detector or IDEAL_DETECTOR).apply(np.array([n_plus, n - n_plus]), rng)
    return int(counts[0]), int(counts[1])


def simulate_counts(rho, setting: MeasurementSetting, n: int, rng: RngLike,
                    detector: Optional[DetectorModel] = None) -> CountRecord:
    """
    単一量子ビット状態の射影測定の計数をシミュレートします。

    Args:
        rho: 2×2 密度行列
        setting: 測定設定
        n: 設定あたりの光子数 N
        rng: シードまたは Generator
        detector: 検出器モデル（既定は理想）

    Returns:
        計数記録
    """
    ParameterValidator.validate_counts(n)
    n_plus, n_minus = draw_binary_counts(outcome_probability(rho, setting), n, as_generator(rng), detector)
    return CountRecord(setting=setting, n_plus=n_plus, n_minus=n_minus)


def estimate_r(c: CountRecord) -> Tuple[float, float]:
    """
    確率推定 r̂± = n± / (n₊ + n₋)

    Raises:
        EstimationError: 計数がゼロの場合
    """
    if c.total == 0:
        raise EstimationError(
            "Cannot estimate probabilities from zero counts",
            {'setting': c.setting.label()}
        )
    r_plus = c.n_plus / c.total
    return r_plus, 1.0 - r_plus


def bloch_component(c: CountRecord) -> float:
    """測定軸方向の Bloch 成分の推定 (n₊ − n₋)/N"""
    if c.total == 0:
        raise EstimationError(
            "Cannot estimate a Bloch component from zero counts",
            {'setting': c.setting.label()}
        )
    return (c.n_plus - c.n_minus) / c.total

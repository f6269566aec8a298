"""
状態トモグラフィー

相互不偏基底（Pauli 固有基底）での計数から線形逆変換で状態を再構成し、
最近接の物理的状態へ射影します。
"""

import itertools
from typing import List, Optional, Sequence

import numpy as np

from .counting import RngLike, as_generator, bloch_component, simulate_counts
from .data_models import IDEAL_DETECTOR, CountRecord, DetectorModel, TomographyResult
from ..quantum.data_models import MeasurementSetting
from ..quantum.linalg import PAULI_I, PAULIS, as_matrix, ensure_density, fidelity
from ..quantum.measurement import projectors
from ..utils.validator import ParameterValidator

AXIS_LABELS = ('x', 'y', 'z')
PAULI_SETTINGS = tuple(
    MeasurementSetting.direction(axis) for axis in np.eye(3)
)


def project_to_simplex(values: Sequence[float]) -> np.ndarray:
    """
    確率単体（和1、非負）へのユークリッド射影

    Args:
        values: 実数列

    Returns:
        射影後の値（入力と同じ順序）
    """
    v = np.asarray(values, dtype=float)
    u = np.sort(v)[::-1]
    cumulative = np.cumsum(u)
    ranks = np.arange(1, v.size + 1)
    active = np.flatnonzero(u - (cumulative - 1.0) / ranks > 0.0)
    rho = int(active[-1])
    tau = (cumulative[rho] - 1.0) / (rho + 1)
    return np.maximum(v - tau, 0.0)


def ml_project(rho_raw) -> np.ndarray:
    """
    線形逆変換の推定を物理的状態へ射影します。

    2×2 は Bloch ベクトルを単位球へ動径方向に縮め、4×4 は固有値を確率単体へ射影します。

    Args:
        rho_raw: エルミート行列（トレース ≈ 1）

    Returns:
        密度行列
    """
    arr = as_matrix(rho_raw)
    arr = 0.5 * (arr + arr.conj().T)

    if arr.shape == (2, 2):
        bloch = np.array([np.trace(arr @ sigma).real for sigma in PAULIS])
        norm = float(np.linalg.norm(bloch))
        if norm > 1.0:
            bloch = bloch / norm
        return 0.5 * (PAULI_I + sum(b * sigma for b, sigma in zip(bloch, PAULIS)))

    values, vectors = np.linalg.eigh(arr)
    projected = project_to_simplex(values)
    return (vectors * projected) @ vectors.conj().T


def reconstruct_single_qubit(records: Sequence[CountRecord], truth=None) -> TomographyResult:
    """
    x, y, z 軸の計数から単一量子ビット状態を再構成します。

    Args:
        records: 軸ごとの計数記録（x, y, z の順）
        truth: 忠実度計算用の真の状態

    Returns:
        トモグラフィー結果
    """
    bloch = [bloch_component(record) for record in records]
    rho_raw = 0.5 * (PAULI_I + sum(b * sigma for b, sigma in zip(bloch, PAULIS)))
    rho_ml = ml_project(rho_raw)
    return TomographyResult(
        rho_raw=rho_raw,
        rho_ml=rho_ml,
        settings_used=list(AXIS_LABELS),
        n_per_setting=records[0].total if records else 0,
        fidelity_vs_truth=fidelity(truth, rho_ml) if truth is not None else None
    )


def tomography_single_qubit(rho_true, n_per_setting: int, rng: RngLike,
                            detector: Optional[DetectorModel] = None) -> TomographyResult:
    """
    単一量子ビットの完全トモグラフィー

    Args:
        rho_true: 真の 2×2 密度行列
        n_per_setting: 軸あたりの光子数
        rng: シードまたは Generator
        detector: 検出器モデル

    Returns:
        トモグラフィー結果
    """
    ParameterValidator.validate_counts(n_per_setting)
    generator = as_generator(rng)
    records = [
        simulate_counts(rho_true, setting, n_per_setting, generator, detector)
        for setting in PAULI_SETTINGS
    ]
    return reconstruct_single_qubit(records, truth=rho_true)


def _joint_probabilities(rho: np.ndarray, setting_a: MeasurementSetting,
                         setting_b: MeasurementSetting) -> np.ndarray:
    # (++, +−, −+, −−) の順
    probabilities = np.array([
        np.trace(rho @ np.kron(pa, pb)).real
        for pa in projectors(setting_a)
        for pb in projectors(setting_b)
    ])
    probabilities = np.clip(probabilities, 0.0, None)
    return probabilities / probabilities.sum()


def tomography_two_qubit(rho_true, n_per_setting: int, rng: RngLike,
                         detector: Optional[DetectorModel] = None) -> TomographyResult:
    """
    2量子ビットの完全トモグラフィー

    9通りの Pauli 基底の組それぞれで4結果の計数を多項分布から生成し、
    15個の期待値を推定して線形逆変換と物理的射影を行います。

    Args:
        rho_true: 真の 4×4 密度行列
        n_per_setting: 設定あたりの光子対数
        rng: シードまたは Generator
        detector: 検出器モデル

    Returns:
        トモグラフィー結果
    """
    ParameterValidator.validate_counts(n_per_setting)
    rho = ensure_density(rho_true)
    generator = as_generator(rng)
    detector = detector or IDEAL_DETECTOR

    correlations = np.zeros((3, 3))
    local_a = np.zeros((3, 3))
    local_b = np.zeros((3, 3))
    labels: List[str] = []
    for (i, setting_a), (j, setting_b) in itertools.product(enumerate(PAULI_SETTINGS), repeat=2):
        counts = generator.multinomial(n_per_setting, _joint_probabilities(rho, setting_a, setting_b))
        counts = detector.apply(counts, generator)
        total = max(int(counts.sum()), 1)
        n_pp, n_pm, n_mp, n_mm = (int(c) for c in counts)
        correlations[i, j] = (n_pp - n_pm - n_mp + n_mm) / total
        local_a[i, j] = (n_pp + n_pm - n_mp - n_mm) / total
        local_b[i, j] = (n_pp - n_pm + n_mp - n_mm) / total
        labels.append(AXIS_LABELS[i] + AXIS_LABELS[j])

    # 局所 Bloch 成分は相手側の3設定で平均
    r_a = local_a.mean(axis=1)
    r_b = local_b.mean(axis=0)

    rho_raw = np.kron(PAULI_I, PAULI_I).astype(complex)
    for i, sigma in enumerate(PAULIS):
        rho_raw = rho_raw + r_a[i] * np.kron(sigma, PAULI_I) + r_b[i] * np.kron(PAULI_I, sigma)
        for j, tau in enumerate(PAULIS):
            rho_raw = rho_raw + correlations[i, j] * np.kron(sigma, tau)
    rho_raw = 0.25 * rho_raw

    rho_ml = ml_project(rho_raw)
    return TomographyResult(
        rho_raw=rho_raw,
        rho_ml=rho_ml,
        settings_used=labels,
        n_per_setting=n_per_setting,
        fidelity_vs_truth=fidelity(rho, rho_ml)
    )

"""
実験パイプライン

状態準備のトモグラフィー、B 側の計数、結果ごとの A の条件付きトモグラフィーを
測定角グリッドに沿って実行し、純度から相関量を推定します。
"""

import math
from typing import Callable, List, Optional, Sequence

from .counting import draw_binary_counts, estimate_r, outcome_probability
from .data_models import CountRecord, DetectorModel, ExperimentRun, IDEAL_DETECTOR, PipelineRecord
from .rng import STREAM_MARGINAL, STREAM_PREPARATION, make_rng, point_rng
from .tomography import PAULI_SETTINGS, reconstruct_single_qubit, tomography_single_qubit, tomography_two_qubit
from ..quantum.correlations import avg_conditional_purity, discord_phi, info_deficit_phi
from ..quantum.data_models import MeasurementSetting, Outcome, ThetaPState
from ..quantum.linalg import entropy_from_mixedness, purity
from ..quantum.measurement import conditional_purity, conditional_state, outcome_probabilities
from ..quantum.states import make_theta_state, reduce
from ..utils.exceptions import EstimationError
from ..utils.logger import get_logger
from ..utils.validator import ParameterValidator

logger = get_logger(__name__)

# 点ごとのタスクを順序どおりに実行する関数（逐次実行または core のグリッドエンジン）
Runner = Callable[[List[Callable[[], PipelineRecord]]], List[PipelineRecord]]


def _sequential(tasks: List[Callable[[], PipelineRecord]]) -> List[PipelineRecord]:
    return [task() for task in tasks]


def _conditional_tomography(s: ThetaPState, phi: float, outcome: Outcome, count: int,
                            rng, detector: DetectorModel) -> Optional[float]:
    """結果 outcome を得た count 個の光子で A の各軸を測定し、再構成した純度を返します"""
    truth = conditional_state(s, phi, outcome).state
    records = []
    for setting in PAULI_SETTINGS:
        n_plus, n_minus = draw_binary_counts(outcome_probability(truth, setting), count, rng, detector)
        records.append(CountRecord(setting=setting, n_plus=n_plus, n_minus=n_minus))
    try:
        result = reconstruct_single_qubit(records, truth=truth)
    except EstimationError:
        return None
    return purity(result.rho_ml)


def simulate_point(s: ThetaPState, phi: float, counts_n: int, seed: int, index: int,
                   replicate: int = 0, purity_ab_hat: float = 1.0, purity_a_hat: float = 1.0,
                   detector: Optional[DetectorModel] = None) -> PipelineRecord:
    """
    単一測定角の計数と推定

    計数ゼロや再構成失敗で欠落した条件付き分岐は、残った分岐の r̂ 重み付き平均の純度と
    エントロピーで補完してから P̂_avg、D̂_φ、Î2_φ を組み立てます。両分岐が欠落した場合は NaN です。

    Args:
        s: 状態パラメータ
        phi: B 側の測定角
        counts_n: 設定あたりの光子数 N
        seed: 実験全体のシード
        index: 測定角グリッドの番号（乱数ストリームの識別に使用）
        replicate: 同一点の繰り返し番号
        purity_ab_hat: 準備トモグラフィーから推定した P̂_AB
        purity_a_hat: 局所トモグラフィーから推定した P̂_A
        detector: 検出器モデル

    Returns:
        推定値と閉形式の値
    """
    detector = detector or IDEAL_DETECTOR
    rng = point_rng(seed, index, replicate)
    r_true = outcome_probabilities(s, phi)

    n_plus, n_minus = draw_binary_counts(r_true[0], counts_n, rng, detector)
    r_hat = estimate_r(CountRecord(setting=MeasurementSetting.xz(phi), n_plus=n_plus, n_minus=n_minus)) \
        if n_plus + n_minus > 0 else (math.nan, math.nan)

    purity_hat, truth, skipped = {}, {}, {}
    for outcome, count, r in zip(Outcome, (n_plus, n_minus), r_true):
        estimate = None
        if count > 0 and r > 1e-12:
            estimate = _conditional_tomography(s, phi, outcome, count, rng, detector)
        skipped[outcome] = estimate is None
        purity_hat[outcome] = math.nan if estimate is None else estimate
        truth[outcome] = conditional_purity(s, phi, outcome) if r > 1e-12 else math.nan

    # 欠落分岐は残った分岐の重み付き平均で補完（残りが無ければ NaN）
    kept = [(w, purity_hat[o]) for o, w in zip(Outcome, r_hat) if not skipped[o]]
    kept_weight = sum(w for w, _ in kept)
    if kept_weight > 0.0:
        fill_purity = sum(w * value for w, value in kept) / kept_weight
        fill_entropy = sum(w * entropy_from_mixedness(1.0 - value) for w, value in kept) / kept_weight
    else:
        fill_purity = fill_entropy = math.nan

    avg_hat, measured, post = 0.0, 0.0, 0.0
    for outcome, weight in zip(Outcome, r_hat):
        if skipped[outcome]:
            branch_purity, branch_entropy = fill_purity, fill_entropy
        else:
            branch_purity = purity_hat[outcome]
            branch_entropy = entropy_from_mixedness(1.0 - branch_purity)
        avg_hat += weight * branch_purity
        measured += weight * branch_entropy
        post += weight * weight * branch_purity

    cond_entropy_hat = entropy_from_mixedness(1.0 - purity_ab_hat) - entropy_from_mixedness(1.0 - purity_a_hat)
    if any(skipped.values()):
        logger.warning(
            "Conditional branch skipped",
            phi=phi,
            replicate=replicate,
            counts_plus=n_plus,
            counts_minus=n_minus
        )

    return PipelineRecord(
        phi=phi,
        replicate=replicate,
        counts_plus=n_plus,
        counts_minus=n_minus,
        r_plus_hat=r_hat[0],
        r_minus_hat=r_hat[1],
        purity_plus_hat=purity_hat[Outcome.PLUS],
        purity_minus_hat=purity_hat[Outcome.MINUS],
        avg_purity_hat=avg_hat,
        discord_hat=measured - cond_entropy_hat,
        i2_hat=2.0 * (purity_ab_hat - post),
        r_plus=r_true[0],
        purity_plus=truth[Outcome.PLUS],
        purity_minus=truth[Outcome.MINUS],
        avg_purity=avg_conditional_purity(s, phi),
        discord_phi=discord_phi(s, phi),
        i2_phi=info_deficit_phi(s, phi),
        skipped_plus=skipped[Outcome.PLUS],
        skipped_minus=skipped[Outcome.MINUS]
    )


def run_experiment_pipeline(s: ThetaPState, phis: Sequence[float], counts_n: int, seed: int,
                            detector: Optional[DetectorModel] = None, seeds_per_point: int = 1,
                            runner: Optional[Runner] = None) -> ExperimentRun:
    """
    実験パイプライン全体を実行します。

    Args:
        s: 状態パラメータ
        phis: 測定角グリッド
        counts_n: 設定あたりの光子数 N
        seed: 64bit シード
        detector: 検出器モデル（既定は理想）
        seeds_per_point: 各測定角の繰り返し数
        runner: タスク列を順序どおり実行する関数（既定は逐次）

    Returns:
        実験結果
    """
    ParameterValidator.validate_counts(counts_n)
    ParameterValidator.validate_seed(seed)
    detector = detector or IDEAL_DETECTOR

    rho_ab = make_theta_state(s)
    preparation = tomography_two_qubit(rho_ab, counts_n, make_rng(seed, STREAM_PREPARATION), detector)
    marginal = tomography_single_qubit(reduce(rho_ab, 'A'), counts_n, make_rng(seed, STREAM_MARGINAL), detector)
    purity_ab_hat = purity(preparation.rho_ml)
    purity_a_hat = purity(marginal.rho_ml)

    logger.info(
        "Preparation tomography completed",
        theta=s.theta,
        p=s.p,
        counts_n=counts_n,
        fidelity=preparation.fidelity_vs_truth
    )

    tasks = [
        (lambda i=index, phi=float(phi), j=replicate: simulate_point(
            s, phi, counts_n, seed, i, j, purity_ab_hat, purity_a_hat, detector
        ))
        for index, phi in enumerate(phis)
        for replicate in range(seeds_per_point)
    ]
    records = (runner or _sequential)(tasks)

    run = ExperimentRun(
        state=s,
        counts_n=counts_n,
        seed=seed,
        detector=detector,
        preparation=preparation,
        marginal=marginal,
        records=records
    )
    logger.info("Experiment pipeline completed", points=len(records), skipped=run.skipped_branches)
    return run

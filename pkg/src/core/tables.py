"""
表データ構築モジュール

φ 走査、θ 走査、モンテカルロ記録の行を固定の列スキーマで構築します。
"""

import math
from typing import Any, Callable, Dict, List, Sequence

from ..expsim.data_models import PipelineRecord
from ..quantum import correlations as corr
from ..quantum.data_models import Outcome, ThetaPState
from ..quantum.measurement import conditional_purity, conditional_weight, outcome_probabilities
from ..quantum.states import local_purity
from ..utils.exceptions import ZeroProbabilityError

Row = Dict[str, Any]

# φ 走査の列（順序固定）
PHI_SCAN_COLUMNS = [
    'phi', 'r_plus', 'r_minus', 'p_prime_plus', 'p_prime_minus',
    'P_cond_plus', 'P_cond_minus', 'P_avg', 'D_phi', 'I2_phi',
]

# θ 走査の列
THETA_SCAN_COLUMNS = [
    'theta', 'p', 'P_B', 'P_cond_max', 'D', 'I2_min',
    'phi_star_cond', 'phi_star_deficit', 'concurrence_ac',
]

# モンテカルロ推定の列
MONTE_CARLO_COLUMNS = [
    'p', 'point_index', 'replicate', 'phi', 'counts_plus', 'counts_minus',
    'r_plus_hat', 'r_minus_hat', 'P_cond_plus_hat', 'P_cond_minus_hat',
    'P_avg_hat', 'D_phi_hat', 'I2_phi_hat',
    'P_avg', 'D_phi', 'I2_phi', 'skipped_plus', 'skipped_minus',
]


def _branch_or_nan(func: Callable[[], float]) -> float:
    try:
        return func()
    except ZeroProbabilityError:
        return math.nan


def phi_scan_row(s: ThetaPState, phi: float) -> Row:
    """
    単一測定角の行

    確率ゼロの結果の p' と条件付き純度は NaN です。
    """
    r_plus, r_minus = outcome_probabilities(s, phi)
    return {
        'phi': phi,
        'r_plus': r_plus,
        'r_minus': r_minus,
        'p_prime_plus': _branch_or_nan(lambda: conditional_weight(s, phi, Outcome.PLUS)),
        'p_prime_minus': _branch_or_nan(lambda: conditional_weight(s, phi, Outcome.MINUS)),
        'P_cond_plus': _branch_or_nan(lambda: conditional_purity(s, phi, Outcome.PLUS)),
        'P_cond_minus': _branch_or_nan(lambda: conditional_purity(s, phi, Outcome.MINUS)),
        'P_avg': corr.avg_conditional_purity(s, phi),
        'D_phi': corr.discord_phi(s, phi),
        'I2_phi': corr.info_deficit_phi(s, phi),
    }


def phi_scan_tasks(s: ThetaPState, phis: Sequence[float]) -> List[Callable[[], Row]]:
    """φ 走査の点ごとのタスク"""
    return [lambda phi=float(phi): phi_scan_row(s, phi) for phi in phis]


def theta_scan_row(s: ThetaPState) -> Row:
    """単一 (θ, p) の最適化済み相関量の行"""
    discord_value, phi_star = corr.discord(s)
    return {
        'theta': s.theta,
        'p': s.p,
        'P_B': local_purity(s),
        'P_cond_max': corr.max_avg_conditional_purity(s),
        'D': discord_value,
        'I2_min': corr.geometric_deficit(s),
        'phi_star_cond': phi_star,
        'phi_star_deficit': corr.optimal_phi_deficit(s),
        'concurrence_ac': corr.concurrence_ac(s),
    }


def theta_scan_tasks(p: float, thetas: Sequence[float]) -> List[Callable[[], Row]]:
    """θ 走査の点ごとのタスク"""
    return [lambda theta=float(theta): theta_scan_row(ThetaPState(theta, p)) for theta in thetas]


def monte_carlo_rows(p: float, records: Sequence[PipelineRecord], replicates: int = 1) -> List[Row]:
    """パイプライン記録を行に変換します"""
    rows = []
    for position, record in enumerate(records):
        rows.append({
            'p': p,
            'point_index': position // max(replicates, 1),
            'replicate': record.replicate,
            'phi': record.phi,
            'counts_plus': record.counts_plus,
            'counts_minus': record.counts_minus,
            'r_plus_hat': record.r_plus_hat,
            'r_minus_hat': record.r_minus_hat,
            'P_cond_plus_hat': record.purity_plus_hat,
            'P_cond_minus_hat': record.purity_minus_hat,
            'P_avg_hat': record.avg_purity_hat,
            'D_phi_hat': record.discord_hat,
            'I2_phi_hat': record.i2_hat,
            'P_avg': record.avg_purity,
            'D_phi': record.discord_phi,
            'I2_phi': record.i2_phi,
            'skipped_plus': record.skipped_plus,
            'skipped_minus': record.skipped_minus,
        })
    return rows

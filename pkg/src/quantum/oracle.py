"""
オラクルモジュール

閉形式を検証するための総当たり最適化と、行列演算のみによる再計算を提供します。
"""

import math
from typing import Callable, List, Optional, Tuple

import numpy as np
from scipy.optimize import minimize

from .data_models import (
    BlochVector,
    DenseRecord,
    MeasurementSetting,
    ScanResult,
    SphereScanResult,
    ThetaPState,
)
from .linalg import density_to_bloch, entropy, partial_trace, purity
from .measurement import dephase, measure_dense
from .correlations import discord_phi
from .states import make_theta_state
from ..utils.exceptions import NonFiniteObjectiveError, ValidationError
from ..utils.logger import get_logger

logger = get_logger(__name__)

# 黄金比の逆数
INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def _evaluate(f: Callable, x):
    value = float(f(x))
    if not math.isfinite(value):
        raise NonFiniteObjectiveError(
            f"Objective returned a non-finite value: {value}",
            location=x
        )
    return value


def golden_section_minimize(f: Callable[[float], float], a: float, b: float,
                            tol: float = 1e-9, max_iter: int = 200) -> Tuple[float, float, int, float]:
    """
    黄金分割探索による1次元最小化

    Args:
        f: 目的関数
        a, b: 探索区間
        tol: 終了時のブラケット幅
        max_iter: 最大反復回数

    Returns:
        (最小点, 最小値, 反復回数, 最終ブラケット幅)

    Raises:
        NonFiniteObjectiveError: f が NaN / inf を返した場合
    """
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = _evaluate(f, c), _evaluate(f, d)
    iterations = 0

    while (b - a) > tol and iterations < max_iter:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = _evaluate(f, c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = _evaluate(f, d)
        iterations += 1

    x = c if fc <= fd else d
    return x, min(fc, fd), iterations, b - a


def _wrap(phi: float) -> float:
    wrapped = math.remainder(phi, 2.0 * math.pi)
    return math.pi if wrapped <= -math.pi else wrapped


def phi_grid(points: int) -> np.ndarray:
    """(−π, π] を等分する粗いグリッド"""
    step = 2.0 * math.pi / points
    return -math.pi + step * np.arange(1, points + 1)


def minimize_over_phi(f: Callable[[float], float], grid_points: int = 720,
                      basins: int = 3, tol: float = 1e-9) -> ScanResult:
    """
    (−π, π] 上の大域最小化

    粗いグリッドで局所最小を拾い、値の小さい basins 個を黄金分割で精密化して最小のものを採用します。

    Args:
        f: 測定角を受け取るスカラー関数
        grid_points: 粗いグリッドの点数
        basins: 精密化する局所最小の数
        tol: ブラケット幅

    Returns:
        走査結果

    Raises:
        NonFiniteObjectiveError: f が NaN / inf を返した場合
    """
    grid = phi_grid(grid_points)
    values = np.array([_evaluate(f, float(phi)) for phi in grid])
    step = 2.0 * math.pi / grid_points

    # 周期境界での局所最小
    left, right = np.roll(values, 1), np.roll(values, -1)
    candidates = np.flatnonzero((values <= left) & (values <= right))
    if candidates.size == 0:
        candidates = np.array([int(np.argmin(values))])
    ordered = sorted(candidates.tolist(), key=lambda i: (values[i], i))[:basins]

    best_arg, best_value = float(grid[ordered[0]]), float(values[ordered[0]])
    total_iterations, width = 0, 0.0
    for index in ordered:
        center = float(grid[index])
        x, fx, iterations, bracket = golden_section_minimize(f, center - step, center + step, tol)
        total_iterations += iterations
        if fx < best_value:
            best_arg, best_value, width = x, fx, bracket

    logger.debug(
        "Phi minimization finished",
        grid_points=grid_points,
        basins=len(ordered),
        arg_opt=best_arg,
        value_opt=best_value
    )
    return ScanResult(
        grid=list(zip(grid.tolist(), values.tolist())),
        arg_opt=_wrap(best_arg),
        value_opt=best_value,
        refinement_iterations=total_iterations,
        bracket_width=width
    )


def maximize_over_phi(f: Callable[[float], float], **kwargs) -> ScanResult:
    """minimize_over_phi の最大化版（grid と value_opt は f の値で返します）"""
    result = minimize_over_phi(lambda phi: -f(phi), **kwargs)
    return ScanResult(
        grid=[(phi, -value) for phi, value in result.grid],
        arg_opt=result.arg_opt,
        value_opt=-result.value_opt,
        refinement_iterations=result.refinement_iterations,
        bracket_width=result.bracket_width
    )


def fibonacci_sphere(resolution: int) -> np.ndarray:
    """Bloch 球上にほぼ一様に分布する resolution 個の単位ベクトル"""
    index = np.arange(resolution) + 0.5
    polar = np.arccos(1.0 - 2.0 * index / resolution)
    azimuth = math.pi * (1.0 + math.sqrt(5.0)) * index
    return np.column_stack([
        np.sin(polar) * np.cos(azimuth),
        np.sin(polar) * np.sin(azimuth),
        np.cos(polar),
    ])


def _direction(angles) -> np.ndarray:
    polar, azimuth = angles
    return np.array([
        math.sin(polar) * math.cos(azimuth),
        math.sin(polar) * math.sin(azimuth),
        math.cos(polar),
    ])


def scan_bloch_sphere(f: Callable[[np.ndarray], float], resolution: int = 10000,
                      maximize: bool = False) -> SphereScanResult:
    """
    Bloch 球全方向の総当たり走査と局所精密化

    Args:
        f: 単位ベクトルを受け取るスカラー関数
        resolution: 方向の数
        maximize: True なら最大化

    Returns:
        最良方向とその値

    Raises:
        NonFiniteObjectiveError: f が NaN / inf を返した場合
    """
    sign = -1.0 if maximize else 1.0
    directions = fibonacci_sphere(resolution)
    values = np.array([_evaluate(f, k) for k in directions])
    best = int(np.argmin(sign * values))

    start = directions[best]
    initial = [math.acos(max(-1.0, min(1.0, start[2]))), math.atan2(start[1], start[0])]
    refined = minimize(
        lambda angles: sign * _evaluate(f, _direction(angles)),
        initial,
        method='Nelder-Mead',
        options={'xatol': 1e-10, 'fatol': 1e-15, 'maxiter': 2000}
    )

    if sign * refined.fun <= sign * values[best]:
        k, value = _direction(refined.x), sign * float(refined.fun)
    else:
        k, value = start, float(values[best])

    logger.debug(
        "Bloch sphere scan finished",
        resolution=resolution,
        value_opt=value,
        y_component=float(k[1]),
        iterations=int(refined.nit)
    )
    return SphereScanResult(
        grid=[(BlochVector.from_array(d), float(v)) for d, v in zip(directions, values)],
        arg_opt=BlochVector.from_array(k),
        value_opt=value,
        refinement_iterations=int(refined.nit)
    )


def locate_jump(angle_fn: Callable[[float], float], lo: float, hi: float, tol: float = 1e-9) -> float:
    """
    最適角が不連続に跳ぶ位置を二分法で求めます。

    Args:
        angle_fn: パラメータから最適角への関数
        lo, hi: 跳びを挟む区間
        tol: 区間幅

    Returns:
        跳びの位置
    """
    angle_lo, angle_hi = angle_fn(lo), angle_fn(hi)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        angle_mid = angle_fn(mid)
        if abs(angle_mid - angle_lo) <= abs(angle_mid - angle_hi):
            lo, angle_lo = mid, angle_mid
        else:
            hi, angle_hi = mid, angle_mid
    return 0.5 * (lo + hi)


def dense_conditional(rho, k) -> List[Tuple[float, Optional[np.ndarray]]]:
    """方向 k の測定に対する (r, 条件付き状態) の組"""
    branches = measure_dense(rho, MeasurementSetting.direction(k))
    return [(branch.r, branch.state) for branch in branches]


def dense_avg_conditional_purity(rho, k) -> float:
    """行列演算による平均条件付き純度"""
    return sum(r * purity(state) for r, state in dense_conditional(rho, k) if state is not None)


def dense_measured_entropy(rho, k) -> float:
    """行列演算による測定依存条件付きエントロピー"""
    return sum(r * entropy(state) for r, state in dense_conditional(rho, k) if state is not None)


def dense_global_post_purity(rho, k) -> float:
    """行列演算による測定後全体純度"""
    return purity(dephase(rho, MeasurementSetting.direction(k)))


def sphere_optimum(s: ThetaPState, kind: str = "conditional", resolution: int = 10000) -> SphereScanResult:
    """
    θ-p 状態の測定依存量を Bloch 球全方向で最大化します（行列演算のみ）。

    Args:
        s: 状態パラメータ
        kind: "conditional"（平均条件付き純度）または "deficit"（測定後全体純度）
        resolution: 方向の数

    Returns:
        最良方向とその値
    """
    objectives = {
        'conditional': dense_avg_conditional_purity,
        'deficit': dense_global_post_purity,
    }
    if kind not in objectives:
        raise ValidationError(f"Unknown sphere objective: {kind!r}")
    rho = make_theta_state(s)
    objective = objectives[kind]
    return scan_bloch_sphere(lambda k: objective(rho, k), resolution, maximize=True)


def bruteforce_discord(s: ThetaPState, **kwargs) -> ScanResult:
    """測定角の総当たりで求めたディスコード"""
    return minimize_over_phi(lambda phi: discord_phi(s, phi), **kwargs)


def dense_discord(rho, resolution: int = 2000) -> SphereScanResult:
    """
    任意の2量子ビット状態のディスコードを Bloch 球全方向の最小化で求めます。

    Args:
        rho: 4×4 密度行列
        resolution: 方向の数

    Returns:
        value_opt がディスコード、arg_opt が最適方向の走査結果
    """
    cond_entropy = entropy(rho) - entropy(partial_trace(rho, 'B'))
    result = scan_bloch_sphere(lambda k: dense_measured_entropy(rho, k), resolution)
    return SphereScanResult(
        grid=result.grid,
        arg_opt=result.arg_opt,
        value_opt=max(result.value_opt - cond_entropy, 0.0),
        refinement_iterations=result.refinement_iterations
    )


def _dense_weight(state: np.ndarray, s: ThetaPState) -> float:
    # ρ = p'|θ⟩⟨θ| + q'|−θ⟩⟨−θ| の x 成分は (p' − q') sin θ
    sin_t = math.sin(s.theta)
    if sin_t < 1e-12:
        return s.p
    return 0.5 * (1.0 + density_to_bloch(state).x / sin_t)


def dense_recompute(s: ThetaPState, phi: float) -> DenseRecord:
    """
    ρ_AB の生成、射影、部分トレース、対角化のみで全相関量を再計算します。

    確率ゼロの分岐の量は NaN になります。

    Args:
        s: 状態パラメータ
        phi: 測定角

    Returns:
        再計算レコード
    """
    rho = make_theta_state(s)
    setting = MeasurementSetting.xz(phi)
    branches = measure_dense(rho, setting)

    r_values, weights, purities = [], [], []
    measured = 0.0
    for branch in branches:
        r_values.append(branch.r)
        if branch.state is None:
            weights.append(math.nan)
            purities.append(math.nan)
            continue
        weights.append(_dense_weight(branch.state, s))
        purities.append(purity(branch.state))
        measured += branch.r * entropy(branch.state)

    avg = sum(r * pur for r, pur in zip(r_values, purities) if not math.isnan(pur))
    rho_a, rho_b = partial_trace(rho, 'A'), partial_trace(rho, 'B')
    purity_global = purity(rho)
    entropy_global = entropy(rho)
    entropy_local = entropy(rho_b)
    post_purity = purity(dephase(rho, setting))

    return DenseRecord(
        theta=s.theta,
        p=s.p,
        phi=phi,
        r_plus=r_values[0],
        r_minus=r_values[1],
        p_prime_plus=weights[0],
        p_prime_minus=weights[1],
        purity_cond_plus=purities[0],
        purity_cond_minus=purities[1],
        avg_cond_purity=avg,
        s2_cond_entropy=2.0 * (1.0 - avg),
        purity_ab=purity_global,
        purity_a=purity(rho_a),
        purity_b=purity(rho_b),
        entropy_ab=entropy_global,
        entropy_b=entropy_local,
        cond_entropy=entropy_global - entropy_local,
        measured_cond_entropy=measured,
        discord_phi=measured - (entropy_global - entropy_local),
        global_post_purity=post_purity,
        info_deficit=2.0 * (purity_global - post_purity),
        renyi_deficit=-math.log2(post_purity / purity_global)
    )

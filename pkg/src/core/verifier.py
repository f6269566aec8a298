"""
検証モジュール

閉形式の相関量を総当たりオラクルと行列演算の再計算で照合し、
チェックごとに PASS / FAIL を判定します。
"""

import math
from dataclasses import dataclass, field, asdict
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .grid_engine import GridEngine
from ..quantum import correlations as corr
from ..quantum import oracle
from ..quantum.data_models import ThetaPState
from ..quantum.measurement import is_degenerate
from ..quantum.states import local_purity, purity_ab
from ..utils.logger import RunLogger, get_logger

# 検証グリッド
VERIFY_THETAS = tuple(0.025 * math.pi * k for k in range(1, 21))
VERIFY_WEIGHTS = tuple(round(0.5 + 0.05 * k, 2) for k in range(10))

# Bloch 球走査の (θ, p)
SPHERE_POINTS = (
    (0.2 * math.pi, 0.6),
    (math.pi / 3, 0.7),
    (0.4 * math.pi, 0.9),
    (0.25 * math.pi, 0.8),
    (0.15 * math.pi, 0.55),
)

VERIFY_COLUMNS = ['check', 'theta', 'p', 'closed_form', 'oracle', 'delta', 'tolerance', 'passed']


@dataclass
class CheckResult:
    """1つの照合結果"""
    check: str
    theta: float
    p: float
    closed_form: float
    oracle: float
    delta: float
    tolerance: float
    passed: bool

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass
class VerificationSummary:
    """照合結果の集計"""
    checks: List[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failed_checks(self) -> List[CheckResult]:
        return [c for c in self.checks if not c.passed]

    @property
    def status(self) -> str:
        return "PASS" if self.passed else "FAIL"

    @property
    def max_delta(self) -> float:
        return max((c.delta for c in self.checks), default=0.0)

    def extend(self, checks: Sequence[CheckResult]) -> None:
        self.checks.extend(checks)

    def to_rows(self) -> List[Dict[str, Any]]:
        return [c.to_dict() for c in self.checks]


def angle_delta(a: float, b: float, period: float = math.pi) -> float:
    """周期 period を法とした角度の差"""
    return abs(math.remainder(a - b, period))


def _check(name: str, s: ThetaPState, closed: float, reference: float, tolerance: float,
           delta: Optional[float] = None) -> CheckResult:
    delta = abs(closed - reference) if delta is None else delta
    return CheckResult(
        check=name,
        theta=s.theta,
        p=s.p,
        closed_form=closed,
        oracle=reference,
        delta=delta,
        tolerance=tolerance,
        passed=bool(delta <= tolerance)
    )


class Verifier:
    """閉形式とオラクルの照合クラス"""

    def __init__(self, engine: Optional[GridEngine] = None, grid_points: int = 720,
                 basins: int = 3, tol: float = 1e-9, sphere_resolution: int = 10000):
        """
        Args:
            engine: グリッド評価エンジン（None なら逐次）
            grid_points: φ 最適化の粗いグリッド点数
            basins: 精密化する局所最小の数
            tol: 黄金分割のブラケット幅
            sphere_resolution: Bloch 球走査の方向数
        """
        self.engine = engine or GridEngine(1)
        self.options = {'grid_points': grid_points, 'basins': basins, 'tol': tol}
        self.sphere_resolution = sphere_resolution
        self.logger = get_logger(__name__)
        self.run_logger = RunLogger(__name__)

    def verify_point(self, s: ThetaPState) -> List[CheckResult]:
        """
        単一 (θ, p) の閉形式をオラクルと照合します。

        Args:
            s: 状態パラメータ

        Returns:
            照合結果のリスト
        """
        checks: List[CheckResult] = []
        regular = not is_degenerate(s) and s.theta < math.pi / 2 - 1e-12

        # ディスコード
        discord_value, phi_min = corr.discord(s)
        brute = oracle.bruteforce_discord(s, **self.options)
        checks.append(_check('discord', s, discord_value, brute.value_opt, 1e-8))
        if regular:
            checks.append(_check('discord_argmin', s, phi_min, brute.arg_opt, 1e-6,
                                 angle_delta(phi_min, brute.arg_opt)))

        # 平均条件付き純度の最大値
        best = oracle.maximize_over_phi(lambda phi: corr.avg_conditional_purity(s, phi), **self.options)
        checks.append(_check('max_avg_conditional_purity', s, corr.max_avg_conditional_purity(s),
                             best.value_opt, 1e-10))
        if regular:
            phi_cond = corr.optimal_phi_conditional(s)
            checks.append(_check('phi_star_conditional', s, phi_cond, best.arg_opt, 1e-6,
                                 angle_delta(phi_cond, best.arg_opt)))

        # 最小情報欠損
        deficit = oracle.minimize_over_phi(lambda phi: corr.info_deficit_phi(s, phi), **self.options)
        checks.append(_check('geometric_deficit', s, corr.geometric_deficit(s), deficit.value_opt, 1e-10))
        numerator, denominator = corr.deficit_terms(s)
        if math.hypot(numerator, denominator) > 1e-6:
            phi_def = corr.optimal_phi_deficit(s)
            checks.append(_check('phi_star_deficit', s, phi_def, deficit.arg_opt, 1e-6,
                                 angle_delta(phi_def, deficit.arg_opt)))

        # 固有値方程式
        if regular:
            k_cond, _ = corr.optimal_direction_eigen(s, 'conditional')
            checks.append(_check('eigen_conditional', s, corr.direction_angle(k_cond),
                                 corr.optimal_phi_conditional(s), 1e-8))
        if math.hypot(numerator, denominator) > 1e-6:
            k_def, _ = corr.optimal_direction_eigen(s, 'deficit')
            checks.append(_check('eigen_deficit', s, corr.direction_angle(k_def),
                                 corr.optimal_phi_deficit(s), 1e-8,
                                 angle_delta(corr.direction_angle(k_def), corr.optimal_phi_deficit(s))))

        # 行列演算による再計算
        phi_sample = 0.5
        dense = oracle.dense_recompute(s, phi_sample)
        checks.append(_check('dense_avg_conditional_purity', s,
                             corr.avg_conditional_purity(s, phi_sample), dense.avg_cond_purity, 1e-10))
        checks.append(_check('dense_discord_phi', s,
                             corr.discord_phi(s, phi_sample), dense.discord_phi, 1e-10))
        checks.append(_check('dense_global_post_purity', s,
                             corr.global_post_purity(s, phi_sample), dense.global_post_purity, 1e-10))
        checks.append(_check('closed_form_global_post_purity', s,
                             corr.global_post_purity_closed_form(s, phi_sample),
                             corr.global_post_purity(s, phi_sample), 1e-12))
        return checks

    def verify_grid(self, thetas: Sequence[float] = VERIFY_THETAS,
                    weights: Sequence[float] = VERIFY_WEIGHTS) -> VerificationSummary:
        """(θ, p) グリッド全体で verify_point を実行します"""
        states = [ThetaPState(theta, p) for theta in thetas for p in weights]
        tasks = [lambda s=s: self.verify_point(s) for s in states]
        summary = VerificationSummary()
        for checks in self.engine.evaluate(tasks, kind="verify-grid").results:
            summary.extend(checks)
        return summary

    def inequality_suite(self, theta_count: int = 21, weight_count: int = 9,
                         phi_count: int = 61) -> List[CheckResult]:
        """
        P_{A/B_φ} ≥ P_A と P'_AB ≤ P_AB をグリッド全点で確認します。

        Returns:
            各不等式の最小余裕（負の最大値を delta とする）
        """
        thetas = np.linspace(0.0, math.pi / 2, theta_count)
        weights = np.linspace(0.1, 0.9, weight_count)
        phis = np.linspace(-math.pi, math.pi, phi_count)

        gain_slack, loss_slack = math.inf, math.inf
        for theta in thetas:
            for p in weights:
                s = ThetaPState(float(theta), float(p))
                base, global_purity = local_purity(s), purity_ab(s)
                for phi in phis:
                    gain_slack = min(gain_slack, corr.avg_conditional_purity(s, float(phi)) - base)
                    loss_slack = min(loss_slack, global_purity - corr.global_post_purity(s, float(phi)))

        grid_state = ThetaPState(0.0, 0.5)
        return [
            _check('inequality_conditional_purity', grid_state, gain_slack, 0.0, 1e-12,
                   max(-gain_slack, 0.0)),
            _check('inequality_global_purity', grid_state, loss_slack, 0.0, 1e-12,
                   max(-loss_slack, 0.0)),
        ]

    def concurrence_identity(self, thetas: Sequence[float] = VERIFY_THETAS,
                             weights: Sequence[float] = VERIFY_WEIGHTS) -> List[CheckResult]:
        """min_φ S₂(A/B_φ) = C²_AC"""
        checks = []
        for theta in thetas:
            for p in weights:
                s = ThetaPState(theta, p)
                minimum = oracle.minimize_over_phi(lambda phi: corr.s2_conditional_entropy(s, phi), **self.options)
                checks.append(_check('concurrence_identity', s, corr.concurrence_ac(s) ** 2,
                                     minimum.value_opt, 1e-10))
        return checks

    def sphere_checks(self, points: Sequence[Tuple[float, float]] = SPHERE_POINTS) -> List[CheckResult]:
        """
        Bloch 球全方向の最適値が xz 平面内の最適値と一致し、最適方向の y 成分が消えることを確認します。

        Args:
            points: (θ, p) の組

        Returns:
            各点・各量の値と y 成分の照合結果
        """
        checks: List[CheckResult] = []
        for theta, p in points:
            s = ThetaPState(theta, p)
            in_plane = {
                'conditional': corr.max_avg_conditional_purity(s),
                'deficit': corr.global_post_purity(s, corr.optimal_phi_deficit(s)),
            }
            for kind, expected in in_plane.items():
                result = oracle.sphere_optimum(s, kind, self.sphere_resolution)
                checks.append(_check(f'sphere_{kind}', s, expected, result.value_opt, 1e-6))
                checks.append(_check(f'sphere_{kind}_y', s, 0.0, result.y_component, 1e-4))
        return checks

    def transition_check(self) -> CheckResult:
        """p = 1/2 で最適欠損角が 0 → π/2 に跳ぶ位置を二分法で求め θ_c と比較します"""
        def angle(theta: float) -> float:
            return corr.optimal_phi_deficit(ThetaPState(theta, 0.5))

        location = oracle.locate_jump(angle, 0.25 * math.pi, 0.35 * math.pi)
        return _check('theta_c_transition', ThetaPState(location, 0.5), corr.THETA_C, location, 1e-3)

    def run_all(self) -> VerificationSummary:
        """
        検証一式を実行します。

        Returns:
            全チェックの集計
        """
        summary = self.verify_grid()
        summary.extend(self.inequality_suite())
        summary.extend(self.concurrence_identity())
        summary.extend(self.sphere_checks())
        summary.checks.append(self.transition_check())

        for check in summary.failed_checks:
            self.run_logger.verification_result(check.check, False, check.delta, check.tolerance)
        self.logger.info(
            "Verification finished",
            status=summary.status,
            checks=len(summary.checks),
            failed=len(summary.failed_checks),
            max_delta=summary.max_delta
        )
        return summary


def report_verification(s: ThetaPState, verifier: Optional[Verifier] = None) -> VerificationSummary:
    """report --verify 用の単一点照合"""
    verifier = verifier or Verifier()
    return VerificationSummary(checks=verifier.verify_point(s))

"""
遠隔射影測定モジュール

B 側の射影測定に対する射影子、結果確率、A 側の条件付き状態と純度、特別な測定角を提供します。
"""

import math
from typing import List, NamedTuple, Optional, Tuple

import numpy as np

from .data_models import (
    ConditionalOutcome,
    MeasurementSetting,
    Outcome,
    PureQubit,
    SpecialAngle,
    SpecialAngles,
    Subsystem,
    ThetaPState,
)
from .linalg import PAULI_I, PAULIS, TOL, ensure_density, partial_trace, pure_projector
from ..utils.exceptions import ZeroProbabilityError


class MeasurementBranch(NamedTuple):
    """一般の状態に対する測定分岐（確率ゼロなら state は None）"""
    outcome: Outcome
    r: float
    state: Optional[np.ndarray]


def normalize_angle(phi: float) -> float:
    """角度を (−π, π] に正規化します"""
    wrapped = math.remainder(phi, 2.0 * math.pi)
    if wrapped <= -math.pi:
        wrapped += 2.0 * math.pi
    return wrapped


def projectors(m: MeasurementSetting) -> Tuple[np.ndarray, np.ndarray]:
    """
    射影子 Π± = ½(I ± k·σ)

    xz モードでは Π₊ = |φ⟩⟨φ|、|φ⟩ = cos(φ/2)|V⟩ + sin(φ/2)|H⟩ です。

    Args:
        m: 測定設定

    Returns:
        (Π₊, Π₋)
    """
    k = m.unit_vector()
    k_sigma = sum(component * pauli for component, pauli in zip(k, PAULIS))
    plus, minus = (0.5 * (PAULI_I + o.sign * k_sigma) for o in Outcome)
    return plus, minus


def branch_weights(s: ThetaPState, phi: float, outcome: Outcome) -> Tuple[float, float]:
    """
    (p|⟨φ±|θ⟩|², q|⟨φ±|−θ⟩|²)

    和が r±、比が p'± を与えます。
    """
    half_minus = 0.5 * (s.theta - phi)
    half_plus = 0.5 * (s.theta + phi)
    if outcome is Outcome.PLUS:
        return s.p * math.cos(half_minus) ** 2, s.q * math.cos(half_plus) ** 2
    return s.p * math.sin(half_minus) ** 2, s.q * math.sin(half_plus) ** 2


def outcome_probabilities(s: ThetaPState, phi: float) -> Tuple[float, float]:
    """
    r± = ½[1 ± p cos(φ−θ) ± q cos(φ+θ)]

    Args:
        s: 状態パラメータ
        phi: 測定角（ラジアン）

    Returns:
        (r₊, r₋)
    """
    return sum(branch_weights(s, phi, Outcome.PLUS)), sum(branch_weights(s, phi, Outcome.MINUS))


def _checked_weights(s: ThetaPState, phi: float, outcome: Outcome) -> Tuple[float, float, float]:
    a, b = branch_weights(s, phi, outcome)
    r = a + b
    if r <= TOL.zero_probability:
        raise ZeroProbabilityError(
            f"Outcome {outcome.value} has zero probability at phi={phi!r}",
            outcome=outcome.value,
            probability=r,
            details={'theta': s.theta, 'p': s.p, 'phi': phi}
        )
    return a, b, r


def conditional_weight(s: ThetaPState, phi: float, outcome) -> float:
    """
    p'± = p(1 ± cos(θ−φ)) / (2r±)

    Raises:
        ZeroProbabilityError: r± ≤ 1e-12 の場合
    """
    a, _, r = _checked_weights(s, phi, Outcome.parse(outcome))
    return a / r


def conditional_mixedness(s: ThetaPState, phi: float, outcome) -> float:
    """1 − P_{A/B±} = 2p'q' sin²θ"""
    a, b, r = _checked_weights(s, phi, Outcome.parse(outcome))
    return 2.0 * a * b * math.sin(s.theta) ** 2 / (r * r)


def conditional_purity(s: ThetaPState, phi: float, outcome) -> float:
    """
    P_{A/B±} = 1 − 2p'±q'± sin²θ

    Raises:
        ZeroProbabilityError: r± ≤ 1e-12 の場合
    """
    return 1.0 - conditional_mixedness(s, phi, outcome)


def conditional_state(s: ThetaPState, phi: float, outcome) -> ConditionalOutcome:
    """
    B で結果 ± を得たときの A の条件付き状態 p'|θ⟩⟨θ| + q'|−θ⟩⟨−θ|

    Args:
        s: 状態パラメータ
        phi: 測定角
        outcome: 結果ラベル

    Returns:
        条件付き測定結果

    Raises:
        ZeroProbabilityError: r± ≤ 1e-12 の場合
    """
    outcome = Outcome.parse(outcome)
    a, b, r = _checked_weights(s, phi, outcome)
    p_prime = a / r
    q_prime = b / r
    state = (
        p_prime * pure_projector(PureQubit(s.theta).ket())
        + q_prime * pure_projector(PureQubit(-s.theta).ket())
    )
    purity = 1.0 - 2.0 * p_prime * q_prime * math.sin(s.theta) ** 2
    return ConditionalOutcome(outcome=outcome, r=r, state=state, p_prime=p_prime, purity=purity)


def is_degenerate(s: ThetaPState) -> bool:
    """θ = 0, π または pq = 0（条件付き状態が測定角に依存しない）"""
    return (
        s.theta < 1e-12
        or s.theta > math.pi - 1e-12
        or s.p * s.q < 1e-15
    )


def special_angles(s: ThetaPState) -> SpecialAngles:
    """
    特別な測定角を閉形式で求めます。

    purifying: φ = ±θ, ±(π−θ)（条件付き状態が純粋）
    equilibrating: p' = 1/2、(p−q)cosθ cosφ + sinθ sinφ = ±(p−q) の根
    prob_extremum: tan φ = (p−q) tan θ

    Args:
        s: 状態パラメータ

    Returns:
        特別な測定角（θ = 0 または pq = 0 では空で degenerate=True）
    """
    if is_degenerate(s):
        return SpecialAngles(degenerate=True)

    theta = s.theta
    purifying = [
        SpecialAngle(normalize_angle(theta), Outcome.MINUS, 0.0),
        SpecialAngle(normalize_angle(-theta), Outcome.MINUS, 1.0),
        SpecialAngle(normalize_angle(math.pi - theta), Outcome.PLUS, 1.0),
        SpecialAngle(normalize_angle(theta - math.pi), Outcome.PLUS, 0.0),
    ]

    diff = s.p - s.q
    delta = math.atan2(math.sin(theta), diff * math.cos(theta))
    radius = math.hypot(diff * math.cos(theta), math.sin(theta))
    equilibrating: List[SpecialAngle] = []
    for outcome, rhs in ((Outcome.MINUS, diff), (Outcome.PLUS, -diff)):
        spread = math.acos(min(1.0, max(-1.0, rhs / radius)))
        roots = {normalize_angle(delta + spread), normalize_angle(delta - spread)}
        equilibrating.extend(SpecialAngle(phi, outcome, 0.5) for phi in sorted(roots))

    extremum = math.atan2(diff * math.sin(theta), math.cos(theta))
    prob_extremum = sorted({normalize_angle(extremum), normalize_angle(extremum + math.pi)})

    return SpecialAngles(
        purifying=purifying,
        equilibrating=equilibrating,
        prob_extremum=prob_extremum,
        degenerate=False
    )


def measure_dense(rho_ab, setting: MeasurementSetting) -> List[MeasurementBranch]:
    """
    任意の2量子ビット状態に対し B を測定したときの分岐を行列演算で求めます。

    Args:
        rho_ab: 4×4 密度行列
        setting: 測定設定

    Returns:
        各結果の確率と A の条件付き状態
    """
    rho = ensure_density(rho_ab)
    branches = []
    for outcome, projector in zip((Outcome.PLUS, Outcome.MINUS), projectors(setting)):
        local = np.kron(PAULI_I, projector)
        projected = local @ rho @ local
        r = float(np.trace(projected).real)
        state = partial_trace(projected, Subsystem.A) / r if r > TOL.zero_probability else None
        branches.append(MeasurementBranch(outcome, r, state))
    return branches


def dephase(rho_ab, setting: MeasurementSetting) -> np.ndarray:
    """結果を読まない測定後の全体状態 Σ (I⊗Π±) ρ (I⊗Π±)"""
    rho = ensure_density(rho_ab)
    total = np.zeros((4, 4), dtype=complex)
    for projector in projectors(setting):
        local = np.kron(PAULI_I, projector)
        total += local @ rho @ local
    return total

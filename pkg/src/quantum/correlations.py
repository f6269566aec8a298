"""
相関量モジュール

平均条件付き純度、ディスコード（測定依存・閉形式）、測定後の全体純度、情報欠損、
固有値方程式による最適測定方向、θ_c 転移を閉形式で提供します。
エントロピーはすべて bit（log₂）単位です。
"""

import math
from enum import Enum
from typing import Optional, Tuple

import numpy as np
import scipy.linalg

from .data_models import (
    BlochVector,
    CorrelationReport,
    CorrelationTensor,
    MeasurementSetting,
    Outcome,
    ThetaPState,
)
from .linalg import PAULI_I, PAULIS, as_matrix, entropy_from_mixedness, partial_trace
from .measurement import branch_weights, conditional_state, is_degenerate, projectors
from .states import local_purity, mixedness_ab, mixedness_b, purity_ab
from ..utils.exceptions import ValidationError


# 最適な欠損角が 0 から π/2 へ跳ぶ開口角（p = 1/2）
THETA_C = math.acos(1.0 / math.sqrt(3.0))


class DirectionKind(Enum):
    """固有値方程式の種別"""
    CONDITIONAL = "conditional"
    DEFICIT = "deficit"


def _sin2(s: ThetaPState) -> float:
    return math.sin(s.theta) ** 2


def gamma_factor(s: ThetaPState, phi: float) -> float:
    """
    γ 因子

    P_{A/B_φ} = 1 − 2pqγ sin²θ。φ = 0 で 1、最適角で cos²θ です。
    """
    c_theta, c_phi = math.cos(s.theta), math.cos(phi)
    r_plus, r_minus = sum(branch_weights(s, phi, Outcome.PLUS)), sum(branch_weights(s, phi, Outcome.MINUS))
    gamma = 0.0
    if r_plus > 0.0:
        gamma += 0.25 * (c_theta + c_phi) ** 2 / r_plus
    if r_minus > 0.0:
        gamma += 0.25 * (c_phi - c_theta) ** 2 / r_minus
    return gamma


def _avg_conditional_mixedness(s: ThetaPState, phi: float) -> float:
    # Σ r±(1 − P±) = Σ 2a±b± sin²θ / r±
    total = 0.0
    for outcome in Outcome:
        a, b = branch_weights(s, phi, outcome)
        r = a + b
        if r > 0.0:
            total += 2.0 * a * b / r
    return total * _sin2(s)


def avg_conditional_purity(s: ThetaPState, phi: float) -> float:
    """
    平均条件付き純度 P_{A/B_φ} = r₊P_{A/B+} + r₋P_{A/B−}

    Args:
        s: 状態パラメータ
        phi: 測定角

    Returns:
        P_A 以上 1 以下の値
    """
    return 1.0 - _avg_conditional_mixedness(s, phi)


def purity_gain(s: ThetaPState, phi: float) -> float:
    """P_{A/B_φ} − P_A = 2pq(1 − γ) sin²θ"""
    return avg_conditional_purity(s, phi) - local_purity(s)


def s2_conditional_entropy(s: ThetaPState, phi: float) -> float:
    """測定依存の S₂ 条件付きエントロピー 2(1 − P_{A/B_φ})"""
    return 2.0 * _avg_conditional_mixedness(s, phi)


def optimal_phi_conditional(s: ThetaPState) -> float:
    """
    平均条件付き純度を最大にする測定角 tan φ = tan θ / (p − q)

    Args:
        s: 状態パラメータ

    Returns:
        [0, π] の角度。θ = 0, π または pq = 0 ではすべての φ が最適なので 0
    """
    if is_degenerate(s):
        return 0.0
    return math.atan2(math.sin(s.theta), (s.p - s.q) * math.cos(s.theta))


def approx_phi_conditional(s: ThetaPState, regime: str = "high") -> float:
    """
    最適角の漸近形

    Args:
        s: 状態パラメータ
        regime: "high"（p → 1: θ + (1−p) sin 2θ）または "balanced"（p → ½⁺: π/2 − 2(p−½)/tan θ）

    Returns:
        近似角
    """
    if regime == "high":
        return s.theta + s.q * math.sin(2.0 * s.theta)
    if regime == "balanced":
        return 0.5 * math.pi - 2.0 * (s.p - 0.5) / math.tan(s.theta)
    raise ValidationError(f"Unknown asymptotic regime: {regime!r}")


def max_avg_conditional_purity(s: ThetaPState) -> float:
    """P_{A/B} = 1 − 2pq sin²θ cos²θ"""
    return 1.0 - 0.5 * concurrence_ac(s) ** 2


def max_purity_gain(s: ThetaPState) -> float:
    """φ に関する最大純度利得 2pq sin⁴θ"""
    return 2.0 * s.p * s.q * _sin2(s) ** 2


def concurrence_ac(s: ThetaPState) -> float:
    """A と純化系 C の間のコンカレンス √(pq)|sin 2θ|"""
    return math.sqrt(s.p * s.q) * abs(math.sin(2.0 * s.theta))


def entanglement_of_formation_ac(s: ThetaPState) -> float:
    """E(A,C) = −Σ f± log₂ f±, f± = (1 ± √(1 − C²_AC))/2"""
    return entropy_from_mixedness(0.5 * concurrence_ac(s) ** 2)


def entropy_ab(s: ThetaPState) -> float:
    """S(ρ_AB)"""
    return entropy_from_mixedness(mixedness_ab(s))


def entropy_b(s: ThetaPState) -> float:
    """S(ρ_B)"""
    return entropy_from_mixedness(mixedness_b(s))


def conditional_entropy_vn(s: ThetaPState) -> float:
    """標準条件付きエントロピー S(A/B) = S(ρ_AB) − S(ρ_B)"""
    return entropy_ab(s) - entropy_b(s)


def measured_conditional_entropy(s: ThetaPState, phi: float) -> float:
    """測定依存条件付きエントロピー S(A/B_φ) = Σ r± S(ρ_{A/B±})"""
    sin2 = _sin2(s)
    total = 0.0
    for outcome in Outcome:
        a, b = branch_weights(s, phi, outcome)
        r = a + b
        if r > 0.0:
            total += r * entropy_from_mixedness(2.0 * a * b * sin2 / (r * r))
    return total


def discord_phi(s: ThetaPState, phi: float) -> float:
    """
    測定角 φ に対するディスコード D(A/B_φ) = S(A/B_φ) − S(A/B)

    Args:
        s: 状態パラメータ
        phi: 測定角

    Returns:
        bit 単位の値
    """
    return measured_conditional_entropy(s, phi) - conditional_entropy_vn(s)


def discord(s: ThetaPState) -> Tuple[float, float]:
    """
    量子ディスコード D(A/B) = H₂(f₊) − S(A/B)

    最小化する測定角は平均条件付き純度を最大化する角と一致します。

    Args:
        s: 状態パラメータ

    Returns:
        (ディスコード [bit], 最小化する測定角)
    """
    value = entanglement_of_formation_ac(s) - conditional_entropy_vn(s)
    return max(value, 0.0), optimal_phi_conditional(s)


def post_measurement_global_state(s: ThetaPState, phi: float) -> np.ndarray:
    """
    結果を読まない測定後の全体状態 r₊ρ_{A/B+}⊗Π₊ + r₋ρ_{A/B−}⊗Π₋

    Args:
        s: 状態パラメータ
        phi: 測定角

    Returns:
        4×4 密度行列
    """
    setting = MeasurementSetting.xz(phi)
    r_plus, r_minus = sum(branch_weights(s, phi, Outcome.PLUS)), sum(branch_weights(s, phi, Outcome.MINUS))
    state = np.zeros((4, 4), dtype=complex)
    for outcome, r, projector in zip(Outcome, (r_plus, r_minus), projectors(setting)):
        if r <= 1e-12:
            continue
        branch = conditional_state(s, phi, outcome)
        state += r * np.kron(branch.state, projector)
    return state


def global_post_purity(s: ThetaPState, phi: float) -> float:
    """
    P'_AB = r₊²P_{A/B+} + r₋²P_{A/B−}

    r²P = r² − 2ab sin²θ として評価します。
    """
    sin2 = _sin2(s)
    total = 0.0
    for outcome in Outcome:
        a, b = branch_weights(s, phi, outcome)
        r = a + b
        total += r * r - 2.0 * a * b * sin2
    return total


def global_post_purity_closed_form(s: ThetaPState, phi: float) -> float:
    """½[1 + (p cos(θ−φ) + q cos(θ+φ))²] − pq sin²θ(1 + cos(θ+φ)cos(θ−φ))"""
    return global_post_purity_uncorrected(s, phi) + 0.5


def global_post_purity_uncorrected(s: ThetaPState, phi: float) -> float:
    """定数項 ½ を欠いた一行形式（負になり得る）"""
    c_minus, c_plus = math.cos(s.theta - phi), math.cos(s.theta + phi)
    mean = s.p * c_minus + s.q * c_plus
    return 0.5 * mean * mean - s.p * s.q * _sin2(s) * (1.0 + c_plus * c_minus)


def info_deficit_phi(s: ThetaPState, phi: float) -> float:
    """S₂ 情報欠損 I₂ = 2(P_AB − P'_AB)"""
    return 2.0 * (purity_ab(s) - global_post_purity(s, phi))


def renyi_deficit_phi(s: ThetaPState, phi: float) -> float:
    """Rényi 情報欠損 −log₂(P'_AB / P_AB)"""
    return -math.log2(global_post_purity(s, phi) / purity_ab(s))


def deficit_terms(s: ThetaPState) -> Tuple[float, float]:
    numerator = (s.p - s.q) * math.sin(2.0 * s.theta)
    denominator = s.p * s.q + (1.0 - s.p * s.q) * math.cos(2.0 * s.theta)
    return numerator, denominator


def deficit_is_degenerate(s: ThetaPState) -> bool:
    """tan 2φ の分子・分母がともに 0（P'_AB が φ に依存しない）"""
    numerator, denominator = deficit_terms(s)
    return abs(numerator) < 1e-12 and abs(denominator) < 1e-12


def optimal_phi_deficit(s: ThetaPState) -> float:
    """
    P'_AB を最大化する測定角

    tan 2φ = (p−q) sin 2θ / (pq + (1−pq) cos 2θ) の根を atan2 で求め、[0, π) に畳み込みます。

    Args:
        s: 状態パラメータ

    Returns:
        [0, π) の角度。縮退時は 0
    """
    if deficit_is_degenerate(s):
        return 0.0
    phi = 0.5 * math.atan2(*deficit_terms(s))
    if phi < 0.0:
        phi += math.pi
    return phi


def approx_phi_deficit(s: ThetaPState) -> float:
    """p → 1 での漸近形 θ − (1−p) cos²θ sin 2θ"""
    return s.theta - s.q * math.cos(s.theta) ** 2 * math.sin(2.0 * s.theta)


def geometric_deficit(s: ThetaPState) -> float:
    """最小 S₂ 情報欠損（幾何学的ディスコードに比例）"""
    return info_deficit_phi(s, optimal_phi_deficit(s))


def renyi_deficit_min(s: ThetaPState) -> float:
    """最小 Rényi 情報欠損 −log₂(P'_max / P_AB)"""
    return renyi_deficit_phi(s, optimal_phi_deficit(s))


def correlation_tensor(s: ThetaPState) -> CorrelationTensor:
    """
    閉形式の相関テンソル

    J_xx = sin²θ, J_zz = cos²θ, J_xz = J_zx = (p−q) sinθ cosθ、
    C = J − r_A r_Bᵀ は C_xx = 4pq sin²θ のみ非零です。
    """
    sin_t, cos_t = math.sin(s.theta), math.cos(s.theta)
    diff = s.p - s.q
    J = np.array([
        [sin_t ** 2, 0.0, diff * sin_t * cos_t],
        [0.0, 0.0, 0.0],
        [diff * sin_t * cos_t, 0.0, cos_t ** 2],
    ])
    C = np.zeros((3, 3))
    C[0, 0] = 4.0 * s.p * s.q * sin_t ** 2
    r = np.array([diff * sin_t, 0.0, cos_t])
    bloch = BlochVector.from_array(r)
    return CorrelationTensor(C=C, J=J, r_a=bloch, r_b=bloch, n_b=np.eye(3) - np.outer(r, r))


def tensor_from_density(rho) -> CorrelationTensor:
    """
    任意の2量子ビット状態の期待値 ⟨σ_μ⊗σ_ν⟩ から相関テンソルを求めます。

    Args:
        rho: 4×4 密度行列

    Returns:
        相関テンソル
    """
    arr = as_matrix(rho)
    J = np.array([
        [float(np.trace(arr @ np.kron(sa, sb)).real) for sb in PAULIS]
        for sa in PAULIS
    ])
    r_a = np.array([float(np.trace(partial_trace(arr, 'A') @ sigma).real) for sigma in PAULIS])
    r_b = np.array([float(np.trace(partial_trace(arr, 'B') @ sigma).real) for sigma in PAULIS])
    return CorrelationTensor(
        C=J - np.outer(r_a, r_b),
        J=J,
        r_a=BlochVector.from_array(r_a),
        r_b=BlochVector.from_array(r_b),
        n_b=np.eye(3) - np.outer(r_b, r_b)
    )


def avg_conditional_purity_direction(tensor: CorrelationTensor, k) -> float:
    """
    一般の測定方向 k に対する平均条件付き純度

    P_{A/B_k} = P_A + ½ kᵀCᵀCk / (1 − (r_B·k)²)
    """
    k = np.asarray(k, dtype=float)
    r_a, r_b = tensor.r_a.as_array(), tensor.r_b.as_array()
    base = 0.5 * (1.0 + float(r_a @ r_a))
    denominator = 1.0 - float(r_b @ k) ** 2
    if denominator <= 1e-15:
        return base
    ck = tensor.C @ k
    return base + 0.5 * float(ck @ ck) / denominator


def global_post_purity_direction(tensor: CorrelationTensor, k) -> float:
    """一般の測定方向 k に対する P'_AB = ¼[1 + |r_A|² + kᵀ(JᵀJ + r_B r_Bᵀ)k]"""
    k = np.asarray(k, dtype=float)
    r_a, r_b = tensor.r_a.as_array(), tensor.r_b.as_array()
    jk = tensor.J @ k
    return 0.25 * (1.0 + float(r_a @ r_a) + float(r_b @ k) ** 2 + float(jk @ jk))


def _canonical_sign(vector: np.ndarray) -> np.ndarray:
    # x ≥ 0、x = 0 なら z > 0
    if vector[0] < -1e-12 or (abs(vector[0]) <= 1e-12 and vector[2] < 0.0):
        return -vector
    return vector


def optimal_direction_eigen(s: ThetaPState, kind="conditional") -> Tuple[BlochVector, float]:
    """
    固有値方程式から最適測定方向を求めます。

    conditional: 一般化固有値問題 CᵀC k = λ N_B k
    deficit: 標準固有値問題 (JᵀJ + r_B r_Bᵀ) k = λ k

    Args:
        s: 状態パラメータ
        kind: "conditional" または "deficit"

    Returns:
        (最大固有値の単位方向 k, λ)
    """
    kind = DirectionKind(kind) if isinstance(kind, str) else kind
    tensor = correlation_tensor(s)
    r_b = tensor.r_b.as_array()

    if kind is DirectionKind.CONDITIONAL:
        ctc = tensor.C.T @ tensor.C
        if float(np.max(np.abs(ctc))) <= 1e-15:
            # 相関なし: すべての方向が同等
            return BlochVector(0.0, 0.0, 1.0), 0.0
        values, vectors = scipy.linalg.eigh(ctc, tensor.n_b)
    else:
        matrix = tensor.J.T @ tensor.J + np.outer(r_b, r_b)
        values, vectors = np.linalg.eigh(matrix)

    k = vectors[:, -1]
    k = _canonical_sign(k / np.linalg.norm(k))
    return BlochVector.from_array(k), float(values[-1])


def direction_angle(k: BlochVector) -> float:
    """xz 平面内の方向 k = (sin φ, 0, cos φ) の角度 φ"""
    return math.atan2(k.x, k.z)


def build_report(s: ThetaPState, verification: Optional[str] = None) -> CorrelationReport:
    """
    単一 (θ, p) の相関量レポートを作成します。

    Args:
        s: 状態パラメータ
        verification: 検証結果（PASS / FAIL、未実施なら None）

    Returns:
        相関量レポート
    """
    discord_value, phi_star = discord(s)
    return CorrelationReport(
        theta=s.theta,
        p=s.p,
        purity_ab=purity_ab(s),
        purity_b=local_purity(s),
        max_cond_purity=max_avg_conditional_purity(s),
        phi_star_cond=phi_star,
        discord=discord_value,
        entropy_ab=entropy_ab(s),
        entropy_b=entropy_b(s),
        cond_entropy=conditional_entropy_vn(s),
        concurrence_ac=concurrence_ac(s),
        entanglement_of_formation=entanglement_of_formation_ac(s),
        max_purity_gain=max_purity_gain(s),
        i2_min=max(geometric_deficit(s), 0.0),
        phi_star_deficit=optimal_phi_deficit(s),
        i2_renyi_min=max(renyi_deficit_min(s), 0.0),
        theta_c_flag=s.theta > THETA_C,
        degenerate=is_degenerate(s),
        theta_beyond_half_pi=s.beyond_half_pi,
        verification=verification
    )

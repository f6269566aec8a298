"""
状態生成モジュール

対称2量子ビット混合状態 ρ_AB(θ, p) の生成と正準化、縮約状態、閉形式の純度・固有値、
一様分離状態の重ね合わせから得られる2サイト縮約状態を提供します。
"""

import math
from typing import Tuple, Union

import numpy as np
from scipy.spatial.transform import Rotation

from .data_models import (
    CanonicalForm,
    GroundStateSpec,
    PureQubit,
    Subsystem,
    ThetaPState,
)
from .linalg import (
    PAULI_I,
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    eigvals_from_mixedness,
    ensure_density,
    partial_trace,
    pure_projector,
)
from ..utils.exceptions import AngleMismatchError


def lab_to_bloch(theta_lab: float) -> float:
    """実験室の偏光角 θ_L から Bloch 角 θ = 2θ_L"""
    return 2.0 * theta_lab


def bloch_to_lab(theta: float) -> float:
    """Bloch 角 θ から実験室の偏光角 θ_L = θ/2"""
    return 0.5 * theta


def _product_ket(theta: float) -> np.ndarray:
    single = PureQubit(theta).ket()
    return np.kron(single, single)


def make_theta_state(s: ThetaPState) -> np.ndarray:
    """
    ρ_AB = p|θθ⟩⟨θθ| + q|−θ−θ⟩⟨−θ−θ| を生成します。

    Args:
        s: 状態パラメータ

    Returns:
        4×4 密度行列（階数 ≤ 2、量子ビット交換で不変）
    """
    plus = _product_ket(s.theta)
    minus = _product_ket(-s.theta)
    return s.p * np.outer(plus, plus.conj()) + s.q * np.outer(minus, minus.conj())


def purity_ab(s: ThetaPState) -> float:
    """P_AB = 1 − 2pq(1 − cos⁴θ)"""
    return 1.0 - mixedness_ab(s)


def mixedness_ab(s: ThetaPState) -> float:
    """1 − P_AB"""
    return 2.0 * s.p * s.q * (1.0 - math.cos(s.theta) ** 4)


def eigvals_ab(s: ThetaPState) -> Tuple[float, float]:
    """ρ_AB の非零固有値 λ± = ½(1 ± √(2P_AB − 1))"""
    return eigvals_from_mixedness(mixedness_ab(s))


def local_purity(s: ThetaPState) -> float:
    """P_A = P_B = 1 − 2pq sin²θ"""
    return 1.0 - mixedness_b(s)


def mixedness_b(s: ThetaPState) -> float:
    """1 − P_B"""
    return 2.0 * s.p * s.q * math.sin(s.theta) ** 2


def eigvals_b(s: ThetaPState) -> Tuple[float, float]:
    """ρ_B の固有値"""
    return eigvals_from_mixedness(mixedness_b(s))


def reduced_theta_state(s: ThetaPState) -> np.ndarray:
    """
    閉形式の縮約状態 ρ_A = ρ_B

    ½ [[1 + cos θ, (p−q) sin θ], [(p−q) sin θ, 1 − cos θ]]
    """
    c, off = math.cos(s.theta), (s.p - s.q) * math.sin(s.theta)
    return 0.5 * np.array([[1.0 + c, off], [off, 1.0 - c]], dtype=complex)


def reduce(rho, subsystem: Union[Subsystem, str]) -> np.ndarray:
    """
    部分トレースにより一方の量子ビットの縮約状態を返します。

    Args:
        rho: 4×4 密度行列
        subsystem: 残す部分系（A または B）

    Returns:
        2×2 密度行列
    """
    return partial_trace(ensure_density(rho), subsystem)


def mixture_state(omega1: PureQubit, omega2: PureQubit,
                  omega1p: PureQubit, omega2p: PureQubit, p: float) -> np.ndarray:
    """p|Ω1Ω2⟩⟨Ω1Ω2| + q|Ω1'Ω2'⟩⟨Ω1'Ω2'|"""
    first = np.kron(omega1.ket(), omega2.ket())
    second = np.kron(omega1p.ket(), omega2p.ket())
    return p * pure_projector(first) + (1.0 - p) * pure_projector(second)


def apply_local_unitaries(rho, u_a: np.ndarray, u_b: np.ndarray) -> np.ndarray:
    """(U_A ⊗ U_B) ρ (U_A ⊗ U_B)†"""
    u = np.kron(u_a, u_b)
    return u @ np.asarray(rho, dtype=complex) @ u.conj().T


def su2_from_rotation(rotation: np.ndarray) -> np.ndarray:
    """
    SO(3) 回転行列 R に対応する SU(2) 行列 U（U (v·σ) U† = (Rv)·σ）
    """
    x, y, z, w = Rotation.from_matrix(rotation).as_quat()
    return w * PAULI_I - 1j * (x * PAULI_X + y * PAULI_Y + z * PAULI_Z)


def bloch_angle(a: np.ndarray, b: np.ndarray) -> float:
    """2つの Bloch 方向のなす角"""
    return math.atan2(float(np.linalg.norm(np.cross(a, b))), float(np.dot(a, b)))


def _perpendicular(v: np.ndarray) -> np.ndarray:
    # z, x, y の順で v と最も直交に近い軸を選ぶ
    candidates = (np.array([0.0, 0.0, 1.0]), np.array([1.0, 0.0, 0.0]), np.array([0.0, 1.0, 0.0]))
    axis = min(candidates, key=lambda e: abs(float(np.dot(e, v))))
    w = axis - np.dot(axis, v) * v
    return w / np.linalg.norm(w)


def _canonical_frame(a: np.ndarray, a_p: np.ndarray) -> np.ndarray:
    """
    2方向 a, a' の二等分線を新しい z 軸、両者の張る面内に x 軸をとる回転行列

    回転後 a = (sin θ, 0, cos θ)、a' = (−sin θ, 0, cos θ) となります。
    """
    bisector = a + a_p
    difference = a - a_p
    if np.linalg.norm(bisector) < 1e-12:
        # 対蹠点: a を x 軸に
        x_axis = a / np.linalg.norm(a)
        z_axis = _perpendicular(x_axis)
    elif np.linalg.norm(difference) < 1e-12:
        # 開口角ゼロ: a を +z に
        z_axis = a / np.linalg.norm(a)
        x_axis = _perpendicular(z_axis)
    else:
        z_axis = bisector / np.linalg.norm(bisector)
        x_axis = difference / np.linalg.norm(difference)
    y_axis = np.cross(z_axis, x_axis)
    return np.vstack([x_axis, y_axis, z_axis])


def canonicalize(omega1: PureQubit, omega2: PureQubit,
                 omega1p: PureQubit, omega2p: PureQubit, p: float) -> CanonicalForm:
    """
    階数2の積状態混合 p|Ω1Ω2⟩⟨Ω1Ω2| + q|Ω1'Ω2'⟩⟨Ω1'Ω2'| を標準形 ρ_AB(θ, p) に変換します。

    Args:
        omega1, omega2: 第1項の量子ビット A, B の状態
        omega1p, omega2p: 第2項の量子ビット A, B の状態
        p: 第1項の重み

    Returns:
        標準形の状態と局所回転 (U_A, U_B)

    Raises:
        AngleMismatchError: (Ω2, Ω2') のなす角が (Ω1, Ω1') のなす角と異なる場合
    """
    a, a_p = omega1.bloch().as_array(), omega1p.bloch().as_array()
    b, b_p = omega2.bloch().as_array(), omega2p.bloch().as_array()

    angle_a = bloch_angle(a, a_p)
    angle_b = bloch_angle(b, b_p)
    if abs(angle_a - angle_b) > 1e-9:
        raise AngleMismatchError(
            "Canonical form requires equal Bloch angles on both qubits",
            angle_a=angle_a,
            angle_b=angle_b
        )

    u_a = su2_from_rotation(_canonical_frame(a, a_p))
    u_b = su2_from_rotation(_canonical_frame(b, b_p))
    state = ThetaPState(0.5 * angle_a, p)
    return CanonicalForm(state=state, rotation_a=u_a, rotation_b=u_b)


def gs_reduced_pair(g: GroundStateSpec) -> np.ndarray:
    """
    α|θ⟩^⊗n + β|−θ⟩^⊗n の2サイト縮約状態

    交差項は残り n−2 サイトの重なり cos^{n−2}θ で重み付けされ、
    全体を |α|² + |β|² + 2Re(αβ*)cosⁿθ で規格化します。

    Args:
        g: 重ね合わせの指定

    Returns:
        4×4 密度行列
    """
    alpha, beta = complex(g.alpha), complex(g.beta)
    plus = _product_ket(g.theta)
    minus = _product_ket(-g.theta)
    overlap = math.cos(g.theta) ** (g.n - 2)

    cross = alpha * beta.conjugate() * overlap * np.outer(plus, minus.conj())
    rho = (
        abs(alpha) ** 2 * np.outer(plus, plus.conj())
        + abs(beta) ** 2 * np.outer(minus, minus.conj())
        + cross
        + cross.conj().T
    )
    return rho / g.norm()

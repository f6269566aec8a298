"""
データモデル

状態・測定・相関量の計算結果の構造を定義します。
"""

import math
from dataclasses import dataclass, field, asdict
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from ..utils.exceptions import ValidationError
from ..utils.validator import ParameterValidator


class Outcome(Enum):
    """射影測定の結果ラベル"""
    PLUS = "+"
    MINUS = "-"

    @property
    def sign(self) -> int:
        return 1 if self is Outcome.PLUS else -1

    @classmethod
    def parse(cls, value: Any) -> "Outcome":
        """'+', '-', 'plus', 'minus', +1, -1 を受け付けます"""
        if isinstance(value, Outcome):
            return value
        mapping = {
            '+': cls.PLUS, 'plus': cls.PLUS, 1: cls.PLUS,
            '-': cls.MINUS, 'minus': cls.MINUS, -1: cls.MINUS,
        }
        key = value.lower() if isinstance(value, str) else value
        if key not in mapping:
            raise ValidationError(f"Unknown measurement outcome: {value!r}")
        return mapping[key]


class SettingMode(Enum):
    """測定設定の指定方法"""
    XZ_ANGLE = "xz-angle"
    BLOCH_DIRECTION = "bloch-direction"


class Subsystem(Enum):
    """部分系"""
    A = "A"
    B = "B"


@dataclass(frozen=True)
class BlochVector:
    """単一量子ビットの Bloch ベクトル"""
    x: float
    y: float
    z: float

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z], dtype=float)

    def norm(self) -> float:
        return math.sqrt(self.x * self.x + self.y * self.y + self.z * self.z)

    @classmethod
    def from_array(cls, values) -> "BlochVector":
        x, y, z = (float(v) for v in values)
        return cls(x, y, z)


@dataclass(frozen=True)
class PureQubit:
    """
    純粋状態の単一量子ビット

    |Ω⟩ = cos(θ/2)|0⟩ + e^{iφ} sin(θ/2)|1⟩ （θ: 極角、φ: 方位角）
    """
    theta: float
    phi_azimuth: float = 0.0

    def ket(self) -> np.ndarray:
        return np.array(
            [math.cos(self.theta / 2), np.exp(1j * self.phi_azimuth) * math.sin(self.theta / 2)],
            dtype=complex
        )

    def bloch(self) -> BlochVector:
        return BlochVector(
            math.sin(self.theta) * math.cos(self.phi_azimuth),
            math.sin(self.theta) * math.sin(self.phi_azimuth),
            math.cos(self.theta)
        )


@dataclass(frozen=True)
class ThetaPState:
    """
    対称2量子ビット混合状態のパラメータ

    ρ_AB = p|θθ⟩⟨θθ| + q|−θ−θ⟩⟨−θ−θ|, q = 1 − p
    """
    theta: float
    p: float

    def __post_init__(self):
        """初期化後の検証"""
        object.__setattr__(self, 'theta', ParameterValidator.validate_theta(self.theta))
        object.__setattr__(self, 'p', ParameterValidator.validate_weight(self.p))

    @property
    def q(self) -> float:
        return 1.0 - self.p

    @property
    def beyond_half_pi(self) -> bool:
        """θ > π/2（対称性で扱う領域）"""
        return self.theta > math.pi / 2

    def swapped_weights(self) -> "ThetaPState":
        """p ↔ q を入れ替えた状態"""
        return ThetaPState(self.theta, self.q)


@dataclass(frozen=True)
class GroundStateSpec:
    """
    一様分離状態の重ね合わせ α|θ⟩^⊗n + β|−θ⟩^⊗n の指定
    """
    alpha: complex
    beta: complex
    theta: float
    n: int

    def __post_init__(self):
        if isinstance(self.n, bool) or not isinstance(self.n, int) or self.n < 2:
            raise ValidationError(f"chain length n must be an integer >= 2, got {self.n!r}")
        if self.norm() <= 1e-15:
            raise ValidationError(
                "Ground state spec is not normalizable",
                {'alpha': str(self.alpha), 'beta': str(self.beta), 'theta': self.theta, 'n': self.n}
            )

    def norm(self) -> float:
        """|α|² + |β|² + 2Re(αβ*)cosⁿθ"""
        alpha, beta = complex(self.alpha), complex(self.beta)
        cross = (alpha * beta.conjugate()).real
        return abs(alpha) ** 2 + abs(beta) ** 2 + 2.0 * cross * math.cos(self.theta) ** self.n


@dataclass(frozen=True)
class MeasurementSetting:
    """
    B 側の射影測定設定

    xz 平面の角度 φ（k = (sin φ, 0, cos φ)）または一般の単位ベクトル k で指定します。
    """
    mode: SettingMode
    phi: Optional[float] = None
    k: Optional[BlochVector] = None

    def __post_init__(self):
        if isinstance(self.mode, str):
            object.__setattr__(self, 'mode', SettingMode(self.mode))

        if self.mode is SettingMode.XZ_ANGLE:
            if self.phi is None or not math.isfinite(self.phi):
                raise ValidationError(f"xz-angle setting requires a finite phi, got {self.phi!r}")
        else:
            if self.k is None:
                raise ValidationError("bloch-direction setting requires a direction k")
            if abs(self.k.norm() - 1.0) > 1e-12:
                raise ValidationError(
                    f"measurement direction must be a unit vector, |k| = {self.k.norm()!r}"
                )

    @classmethod
    def xz(cls, phi: float) -> "MeasurementSetting":
        return cls(SettingMode.XZ_ANGLE, phi=float(phi))

    @classmethod
    def direction(cls, k) -> "MeasurementSetting":
        if not isinstance(k, BlochVector):
            k = BlochVector.from_array(k)
        return cls(SettingMode.BLOCH_DIRECTION, k=k)

    def unit_vector(self) -> np.ndarray:
        """Bloch 球上の測定方向"""
        if self.mode is SettingMode.XZ_ANGLE:
            return np.array([math.sin(self.phi), 0.0, math.cos(self.phi)])
        return self.k.as_array()

    def label(self) -> str:
        if self.mode is SettingMode.XZ_ANGLE:
            return f"phi={self.phi:.6f}"
        return f"k=({self.k.x:.6f},{self.k.y:.6f},{self.k.z:.6f})"


@dataclass
class ConditionalOutcome:
    """
    条件付き測定結果

    結果ラベル、確率 r、条件付き状態 ρ_{A/B±}、重み p'、純度を保持します。
    """
    outcome: Outcome
    r: float
    state: np.ndarray
    p_prime: float
    purity: float

    def to_dict(self) -> Dict[str, Any]:
        return {
            'outcome': self.outcome.value,
            'r': self.r,
            'p_prime': self.p_prime,
            'purity': self.purity,
        }


@dataclass(frozen=True)
class SpecialAngle:
    """特別な測定角とその性質"""
    phi: float
    outcome: Outcome
    p_prime: float


@dataclass
class SpecialAngles:
    """
    特別な測定角の一覧

    purifying: 条件付き状態が純粋になる角（p' ∈ {0, 1}）
    equilibrating: p' = 1/2 となる角
    prob_extremum: r₊ が極値をとる角
    """
    purifying: List[SpecialAngle] = field(default_factory=list)
    equilibrating: List[SpecialAngle] = field(default_factory=list)
    prob_extremum: List[float] = field(default_factory=list)
    degenerate: bool = False

    def equilibrating_angles(self) -> List[float]:
        """重複を除いた p' = 1/2 の角（昇順）"""
        angles: List[float] = []
        for angle in sorted(a.phi for a in self.equilibrating):
            if not angles or abs(angle - angles[-1]) > 1e-12:
                angles.append(angle)
        return angles


@dataclass(frozen=True)
class CorrelationTensor:
    """
    相関テンソル

    C: 中心化相関 C_μν、J: ⟨σ_μ⊗σ_ν⟩、r_a / r_b: 局所 Bloch ベクトル、n_b: I − r_B r_Bᵀ
    """
    C: np.ndarray
    J: np.ndarray
    r_a: BlochVector
    r_b: BlochVector
    n_b: np.ndarray


@dataclass
class CorrelationReport:
    """
    単一 (θ, p) の相関量レポート
    """
    theta: float
    p: float
    purity_ab: float
    purity_b: float
    max_cond_purity: float
    phi_star_cond: float
    discord: float
    entropy_ab: float
    entropy_b: float
    cond_entropy: float
    concurrence_ac: float
    entanglement_of_formation: float
    max_purity_gain: float
    i2_min: float
    phi_star_deficit: float
    i2_renyi_min: float
    theta_c_flag: bool
    degenerate: bool = False
    theta_beyond_half_pi: bool = False
    verification: Optional[str] = None

    def to_dict(self) -> Dict[str, Any]:
        """辞書形式に変換"""
        return asdict(self)

    def is_finite(self) -> bool:
        return all(
            math.isfinite(v) for v in asdict(self).values()
            if isinstance(v, float)
        )


@dataclass
class CanonicalForm:
    """正準化結果: 標準形の状態と局所回転 (U_A, U_B)"""
    state: ThetaPState
    rotation_a: np.ndarray
    rotation_b: np.ndarray


@dataclass
class ScanResult:
    """
    総当たり最適化の結果

    grid: (パラメータ, 値) の粗いグリッド、arg_opt / value_opt: 精密化後の最適点
    """
    grid: List[Tuple[Any, float]]
    arg_opt: Any
    value_opt: float
    refinement_iterations: int
    bracket_width: float = 0.0


@dataclass
class SphereScanResult(ScanResult):
    """Bloch 球全方向の走査結果"""

    @property
    def direction(self) -> BlochVector:
        return self.arg_opt

    @property
    def y_component(self) -> float:
        return self.arg_opt.y


@dataclass
class DenseRecord:
    """
    行列演算のみで再計算した相関量

    閉形式の検証に用います。
    """
    theta: float
    p: float
    phi: float
    r_plus: float
    r_minus: float
    p_prime_plus: float
    p_prime_minus: float
    purity_cond_plus: float
    purity_cond_minus: float
    avg_cond_purity: float
    s2_cond_entropy: float
    purity_ab: float
    purity_a: float
    purity_b: float
    entropy_ab: float
    entropy_b: float
    cond_entropy: float
    measured_cond_entropy: float
    discord_phi: float
    global_post_purity: float
    info_deficit: float
    renyi_deficit: float

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

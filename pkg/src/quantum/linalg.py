"""
線形代数カーネル

2×2 / 4×4 の複素エルミート行列、Bloch ベクトル変換、純度、エントロピー族、忠実度を提供します。
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Tuple, Union

import numpy as np

from .data_models import BlochVector, Subsystem
from ..utils.exceptions import (
    DimensionMismatchError,
    InvalidEntropyFunctionError,
    NonHermitianError,
    UnphysicalStateError,
)


@dataclass(frozen=True)
class Tolerances:
    """数値許容誤差"""
    herm: float = 1e-12
    psd: float = 1e-10
    eig: float = 1e-12
    trace: float = 1e-10
    bloch: float = 1e-10
    zero_probability: float = 1e-12


TOL = Tolerances()

# Pauli 行列
PAULI_I = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (PAULI_X, PAULI_Y, PAULI_Z)


def as_matrix(m) -> np.ndarray:
    """2×2 または 4×4 の複素正方行列に変換します"""
    arr = np.asarray(m, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] not in (2, 4):
        raise DimensionMismatchError(f"Expected a 2x2 or 4x4 matrix, got shape {arr.shape}")
    return arr


def ensure_hermitian(m) -> np.ndarray:
    """
    エルミート性を検証します。

    Raises:
        NonHermitianError: |m_ij − conj(m_ji)| > 1e-12 の要素がある場合
    """
    arr = as_matrix(m)
    deviation = float(np.max(np.abs(arr - arr.conj().T)))
    if deviation > TOL.herm:
        raise NonHermitianError(
            "Matrix is not Hermitian",
            {'max_deviation': deviation, 'dim': arr.shape[0]}
        )
    return arr


def ensure_density(rho) -> np.ndarray:
    """
    密度行列（エルミート、トレース1、半正定値）であることを検証します。

    Raises:
        UnphysicalStateError: トレースまたは固有値が許容範囲外の場合
    """
    arr = ensure_hermitian(rho)
    trace = float(np.trace(arr).real)
    if abs(trace - 1.0) > TOL.trace:
        raise UnphysicalStateError(f"Density matrix trace must be 1, got {trace!r}")
    smallest = float(np.linalg.eigvalsh(arr)[0])
    if smallest < -TOL.psd:
        raise UnphysicalStateError(f"Density matrix has a negative eigenvalue {smallest!r}")
    return arr


def eigenvalues_hermitian(m) -> np.ndarray:
    """
    エルミート行列の固有値を降順で返します。

    2×2 は閉形式、4×4 は LAPACK (eigvalsh) で計算します。

    Args:
        m: エルミート行列

    Returns:
        実固有値（降順）

    Raises:
        NonHermitianError: エルミートでない場合
    """
    arr = ensure_hermitian(m)
    if arr.shape[0] == 2:
        a, d = arr[0, 0].real, arr[1, 1].real
        mean = 0.5 * (a + d)
        radius = math.hypot(0.5 * (a - d), abs(arr[0, 1]))
        return np.array([mean + radius, mean - radius])
    return np.linalg.eigvalsh(arr)[::-1].copy()


def purity(rho) -> float:
    """Tr ρ²"""
    arr = ensure_hermitian(rho)
    return float(np.vdot(arr, arr).real)


def eigvals_from_mixedness(mixedness: float) -> Tuple[float, float]:
    """
    階数2の状態の固有値 λ± を 1 − P（混合度）から求めます。

    λ± = ½(1 ± √(2P − 1)) を、λ− = m / (1 + √(1 − 2m)) として桁落ちなしに評価します。
    """
    m = min(max(mixedness, 0.0), 0.5)
    lam_minus = m / (1.0 + math.sqrt(1.0 - 2.0 * m))
    return 1.0 - lam_minus, lam_minus


def binary_entropy(lam_plus: float, lam_minus: float) -> float:
    """−Σ λ log₂ λ（bit）"""
    total = 0.0
    for lam in (lam_plus, lam_minus):
        if lam > 0.0:
            total -= lam * math.log2(lam)
    return total


def entropy_from_mixedness(mixedness: float) -> float:
    """混合度 1 − P から階数2状態の von Neumann エントロピー（bit）"""
    return binary_entropy(*eigvals_from_mixedness(mixedness))


class EntropyKind(Enum):
    """エントロピー関数の種別"""
    VON_NEUMANN = "von-neumann"
    LINEAR = "linear"
    CUSTOM = "custom"


def _von_neumann_term(lam: float) -> float:
    return -lam * math.log2(lam) if lam > 0.0 else 0.0


def _linear_term(lam: float) -> float:
    return 2.0 * lam * (1.0 - lam)


@dataclass(frozen=True)
class EntropyFunction:
    """
    一般化エントロピー S_f(ρ) = Σ f(λ_i) の f

    f は [0,1] 上の凹関数で f(0) = f(1) = 0 を満たします。
    """
    kind: EntropyKind
    func: Callable[[float], float]

    @classmethod
    def custom(cls, func: Callable[[float], float]) -> "EntropyFunction":
        """
        任意の f からエントロピー関数を作成します。

        Raises:
            InvalidEntropyFunctionError: f(0) または f(1) が 0 でない場合
        """
        f0, f1 = float(func(0.0)), float(func(1.0))
        if abs(f0) > 1e-12 or abs(f1) > 1e-12:
            raise InvalidEntropyFunctionError(
                "Entropy function must satisfy f(0) = f(1) = 0",
                {'f(0)': f0, 'f(1)': f1}
            )
        return cls(EntropyKind.CUSTOM, func)

    def __call__(self, lam: float) -> float:
        return self.func(lam)


VON_NEUMANN = EntropyFunction(EntropyKind.VON_NEUMANN, _von_neumann_term)
LINEAR = EntropyFunction(EntropyKind.LINEAR, _linear_term)


def entropy(rho, f: EntropyFunction = VON_NEUMANN) -> float:
    """
    S_f(ρ) = Σ f(λ_i)

    Args:
        rho: 密度行列
        f: エントロピー関数（既定は von Neumann、bit 単位）

    Returns:
        エントロピー（非負）
    """
    if f.kind is EntropyKind.LINEAR:
        return 2.0 * (1.0 - purity(rho))
    eigenvalues = np.clip(eigenvalues_hermitian(rho), 0.0, 1.0)
    return float(sum(f(float(lam)) for lam in eigenvalues))


def bloch_to_density(r: Union[BlochVector, np.ndarray]) -> np.ndarray:
    """
    Bloch ベクトルから単一量子ビットの密度行列 ½(I + r·σ) を作ります。

    Raises:
        UnphysicalStateError: |r| > 1 + 1e-10 の場合
    """
    vec = r.as_array() if isinstance(r, BlochVector) else np.asarray(r, dtype=float)
    norm = float(np.linalg.norm(vec))
    if norm > 1.0 + TOL.bloch:
        raise UnphysicalStateError(f"Bloch vector norm {norm!r} exceeds 1")
    return 0.5 * (PAULI_I + vec[0] * PAULI_X + vec[1] * PAULI_Y + vec[2] * PAULI_Z)


def density_to_bloch(rho) -> BlochVector:
    """単一量子ビット密度行列の Bloch ベクトル (Tr ρσ_x, Tr ρσ_y, Tr ρσ_z)"""
    arr = ensure_hermitian(rho)
    if arr.shape != (2, 2):
        raise DimensionMismatchError(f"Bloch vector requires a 2x2 matrix, got shape {arr.shape}")
    return BlochVector(
        float(np.trace(arr @ PAULI_X).real),
        float(np.trace(arr @ PAULI_Y).real),
        float(np.trace(arr @ PAULI_Z).real),
    )


def pure_projector(ket) -> np.ndarray:
    """|ψ⟩⟨ψ|（正規化して返す）"""
    vec = np.asarray(ket, dtype=complex)
    vec = vec / np.linalg.norm(vec)
    return np.outer(vec, vec.conj())


def partial_trace(rho, keep: Union[Subsystem, str]) -> np.ndarray:
    """
    4×4 の2量子ビット行列の部分トレース

    Args:
        rho: 4×4 行列
        keep: 残す部分系（A または B）

    Returns:
        2×2 の縮約行列
    """
    arr = as_matrix(rho)
    if arr.shape != (4, 4):
        raise DimensionMismatchError(f"Partial trace requires a 4x4 matrix, got shape {arr.shape}")
    keep = Subsystem(keep) if isinstance(keep, str) else keep

    tensor = arr.reshape(2, 2, 2, 2)
    if keep is Subsystem.A:
        return np.einsum('ijkj->ik', tensor)
    return np.einsum('ijil->jl', tensor)


def trace_distance(a, b) -> float:
    """½‖a − b‖₁"""
    left, right = as_matrix(a), as_matrix(b)
    if left.shape != right.shape:
        raise DimensionMismatchError(f"Shape mismatch: {left.shape} vs {right.shape}")
    diff = left - right
    diff = 0.5 * (diff + diff.conj().T)
    return float(0.5 * np.sum(np.abs(np.linalg.eigvalsh(diff))))


def _top_eigenvector(rho: np.ndarray) -> np.ndarray:
    _, vectors = np.linalg.eigh(rho)
    return vectors[:, -1]


def fidelity(rho, sigma) -> float:
    """
    忠実度 F = Tr √(√σ ρ √σ)（二乗しない定義）

    一方が純粋状態なら F = √⟨ψ|ρ|ψ⟩ を用い、それ以外は σ の固有分解で √σ を作ります。

    Raises:
        DimensionMismatchError: 次元が異なる場合
    """
    left, right = ensure_density(rho), ensure_density(sigma)
    if left.shape != right.shape:
        raise DimensionMismatchError(f"Fidelity requires equal dimensions: {left.shape} vs {right.shape}")

    # 純粋状態の近道
    for pure_candidate, other in ((right, left), (left, right)):
        if purity(pure_candidate) > 1.0 - TOL.eig:
            psi = _top_eigenvector(pure_candidate)
            overlap = float(np.vdot(psi, other @ psi).real)
            return math.sqrt(min(max(overlap, 0.0), 1.0))

    values, vectors = np.linalg.eigh(right)
    sqrt_sigma = (vectors * np.sqrt(np.clip(values, 0.0, None))) @ vectors.conj().T
    inner = sqrt_sigma @ left @ sqrt_sigma
    inner = 0.5 * (inner + inner.conj().T)
    total = float(np.sum(np.sqrt(np.clip(np.linalg.eigvalsh(inner), 0.0, None))))
    return min(total, 1.0)


def expectation(rho, operator) -> float:
    """Tr(ρ O) の実部"""
    return float(np.trace(as_matrix(rho) @ np.asarray(operator, dtype=complex)).real)

"""
カスタム例外クラス

量子相関解析システム固有の例外を定義します。
"""


class QuantumCorrelationException(Exception):
    """量子相関解析システム基底例外"""

    def __init__(self, message: str, details: dict = None):
        super().__init__(message)
        self.message = message
        self.details = details or {}


class ConfigurationError(QuantumCorrelationException):
    """設定関連エラー"""
    pass


class ValidationError(QuantumCorrelationException):
    """バリデーション関連エラー"""
    pass


class NonHermitianError(ValidationError):
    """エルミート性が成り立たない行列"""
    pass


class DimensionMismatchError(ValidationError):
    """行列次元の不一致"""
    pass


class UnphysicalStateError(ValidationError):
    """物理的でない状態（Bloch ノルム超過、負の固有値など）"""
    pass


class InvalidEntropyFunctionError(ValidationError):
    """f(0)=f(1)=0 を満たさないエントロピー関数"""
    pass


class AngleMismatchError(ValidationError):
    """正準化の適用条件（2組の Bloch 角が等しい）を満たさない入力"""

    def __init__(self, message: str, angle_a: float = None, angle_b: float = None, details: dict = None):
        super().__init__(message, details)
        self.angle_a = angle_a
        self.angle_b = angle_b


class ZeroProbabilityError(QuantumCorrelationException):
    """確率ゼロの測定結果での条件付け"""

    def __init__(self, message: str, outcome: str = None, probability: float = None, details: dict = None):
        super().__init__(message, details)
        self.outcome = outcome
        self.probability = probability


class NonFiniteObjectiveError(QuantumCorrelationException):
    """目的関数が NaN / inf を返した"""

    def __init__(self, message: str, location=None, details: dict = None):
        super().__init__(message, details)
        self.location = location


class EstimationError(QuantumCorrelationException):
    """計数データからの推定エラー"""
    pass


class VerificationError(QuantumCorrelationException):
    """閉形式とオラクルの照合失敗"""

    def __init__(self, message: str, failed_checks: list = None, details: dict = None):
        super().__init__(message, details)
        self.failed_checks = failed_checks or []


class OutputError(QuantumCorrelationException):
    """出力処理関連エラー"""

    def __init__(self, message: str, path: str = None, details: dict = None):
        super().__init__(message, details)
        self.path = path

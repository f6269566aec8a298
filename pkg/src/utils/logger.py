"""
ログ管理モジュール

structlog を標準 logging の上に構成します。標準出力はレポートと表データ専用のため、
ログは常に標準エラー（と任意のローテーションファイル）へ JSON で出力します。
"""

import logging
import sys
from logging.handlers import RotatingFileHandler
from pathlib import Path
from typing import IO, List, Optional

import structlog

# JSON 1行1イベント
LOG_PROCESSORS = [
    structlog.stdlib.filter_by_level,
    structlog.stdlib.add_logger_name,
    structlog.stdlib.add_log_level,
    structlog.stdlib.PositionalArgumentsFormatter(),
    structlog.processors.TimeStamper(fmt="iso"),
    structlog.processors.StackInfoRenderer(),
    structlog.processors.format_exc_info,
    structlog.processors.JSONRenderer(),
]


def _level(log_level: str) -> int:
    level = logging.getLevelName(str(log_level).upper())
    return level if isinstance(level, int) else logging.WARNING


def _build_handlers(stream: IO[str], log_file: Optional[str], max_size_mb: int,
                    backup_count: int) -> List[logging.Handler]:
    handlers: List[logging.Handler] = [logging.StreamHandler(stream)]
    if log_file:
        log_path = Path(log_file)
        log_path.parent.mkdir(parents=True, exist_ok=True)
        handlers.append(RotatingFileHandler(
            log_path,
            maxBytes=max_size_mb * 1024 * 1024,
            backupCount=backup_count,
            encoding='utf-8'
        ))
    return handlers


def configure_logging(
    log_level: str = "WARNING",
    log_file: Optional[str] = None,
    max_size_mb: int = 10,
    backup_count: int = 3,
    stream: Optional[IO[str]] = None
) -> None:
    """
    ログ設定を初期化します。何度呼び出しても直前の設定を置き換えます。

    Args:
        log_level: ログレベル名（不明な名前は WARNING）
        log_file: ローテーションするログファイルのパス
        max_size_mb: ログファイル最大サイズ(MB)
        backup_count: バックアップファイル数
        stream: 出力ストリーム（既定は呼び出し時点の標準エラー）
    """
    logging.basicConfig(
        level=_level(log_level),
        format="%(message)s",
        handlers=_build_handlers(stream or sys.stderr, log_file, max_size_mb, backup_count),
        force=True
    )
    structlog.configure(
        processors=LOG_PROCESSORS,
        context_class=dict,
        logger_factory=structlog.stdlib.LoggerFactory(),
        wrapper_class=structlog.stdlib.BoundLogger,
        cache_logger_on_first_use=True,
    )


def get_logger(name: str) -> structlog.stdlib.BoundLogger:
    """モジュール名に束縛した構造化ロガー"""
    return structlog.get_logger(name)


class RunLogger:
    """グリッド評価と照合の定型ログ"""

    def __init__(self, name: str):
        self.logger = get_logger(name)

    def grid_start(self, total_points: int, kind: str) -> None:
        self.logger.info("Grid evaluation started", kind=kind, total_points=total_points)

    def grid_progress(self, completed: int, total: int, label: str) -> None:
        progress = (completed / total) * 100 if total else 100.0
        self.logger.debug(
            "Grid evaluation progress",
            completed=completed,
            total=total,
            progress=f"{progress:.1f}%",
            current=label
        )

    def grid_complete(self, total_points: int, failed: int, total_time: float) -> None:
        # 失敗点があれば WARNING
        log = self.logger.warning if failed else self.logger.info
        log(
            "Grid evaluation completed",
            total_points=total_points,
            failed=failed,
            total_time=round(total_time, 3)
        )

    def verification_result(self, check: str, passed: bool, delta: float, tolerance: float) -> None:
        """照合結果ログ（失敗は WARNING）"""
        log = self.logger.info if passed else self.logger.warning
        log(
            "Verification check",
            check=check,
            passed=passed,
            delta=delta,
            tolerance=tolerance
        )

"""
グリッド評価エンジン

パラメータグリッド上の点ごとのタスクを逐次または並行に実行し、
結果を常にグリッド番号順で返します。
"""

import time
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass, field
from typing import Any, Callable, List, Optional, Sequence

from ..utils.exceptions import QuantumCorrelationException
from ..utils.logger import RunLogger, get_logger


@dataclass
class GridOutcome:
    """グリッド評価の結果"""
    kind: str
    results: List[Any] = field(default_factory=list)
    errors: List[Optional[str]] = field(default_factory=list)
    total_time: float = 0.0

    @property
    def failed(self) -> int:
        return sum(1 for e in self.errors if e is not None)


class GridEngine:
    """グリッド評価エンジンクラス"""

    # 進捗ログの間隔
    PROGRESS_EVERY = 50

    def __init__(self, max_workers: int = 1):
        """
        Args:
            max_workers: 並行ワーカー数（1 なら逐次実行）
        """
        self.max_workers = max(1, int(max_workers))
        self.logger = get_logger(__name__)
        self.run_logger = RunLogger(__name__)

    def evaluate(self, tasks: Sequence[Callable[[], Any]], kind: str = "grid",
                 raise_on_error: bool = True) -> GridOutcome:
        """
        タスク列を評価します。

        Args:
            tasks: 引数なしで呼び出せる点ごとのタスク
            kind: ログ用の種別名
            raise_on_error: True なら最初の失敗（番号順）を送出

        Returns:
            番号順の結果とエラー

        Raises:
            QuantumCorrelationException: raise_on_error が True で失敗したタスクがある場合
        """
        outcome = GridOutcome(kind=kind)
        start = time.time()
        self.run_logger.grid_start(len(tasks), kind)

        if self.max_workers == 1 or len(tasks) <= 1:
            results, errors = self._execute_sequential(tasks)
        else:
            results, errors = self._execute_parallel(tasks)

        outcome.results, outcome.errors = results, [self._describe(e) for e in errors]
        outcome.total_time = time.time() - start
        self.run_logger.grid_complete(len(tasks), outcome.failed, outcome.total_time)

        if raise_on_error:
            for error in errors:
                if error is not None:
                    if isinstance(error, QuantumCorrelationException):
                        raise error
                    raise QuantumCorrelationException(
                        f"Grid task failed: {error}",
                        {'kind': kind, 'error_type': type(error).__name__}
                    ) from error
        return outcome

    def map(self, tasks: Sequence[Callable[[], Any]]) -> List[Any]:
        """タスクを評価して結果だけを番号順で返します（失敗時は送出）"""
        return self.evaluate(tasks).results

    def _execute_sequential(self, tasks):
        results: List[Any] = [None] * len(tasks)
        errors: List[Optional[BaseException]] = [None] * len(tasks)
        for index, task in enumerate(tasks):
            if index % self.PROGRESS_EVERY == 0:
                self.run_logger.grid_progress(index, len(tasks), f"point {index}")
            try:
                results[index] = task()
            except Exception as e:
                self.logger.error("Grid task failed", index=index, error=str(e))
                errors[index] = e
        return results, errors

    def _execute_parallel(self, tasks):
        results: List[Any] = [None] * len(tasks)
        errors: List[Optional[BaseException]] = [None] * len(tasks)
        completed = 0

        with ThreadPoolExecutor(max_workers=self.max_workers) as executor:
            future_to_index = {executor.submit(task): index for index, task in enumerate(tasks)}

            # 完了順に受け取り、番号の位置に格納
            for future in as_completed(future_to_index):
                index = future_to_index[future]
                completed += 1
                if completed % self.PROGRESS_EVERY == 0:
                    self.run_logger.grid_progress(completed, len(tasks), f"point {index}")
                try:
                    results[index] = future.result()
                except Exception as e:
                    self.logger.error("Grid task failed", index=index, error=str(e))
                    errors[index] = e

        return results, errors

    @staticmethod
    def _describe(error: Optional[BaseException]) -> Optional[str]:
        return None if error is None else f"{type(error).__name__}: {error}"

"""
グリッド評価エンジンのテスト
"""

import time

import pytest

from src.core.grid_engine import GridEngine
from src.utils.exceptions import QuantumCorrelationException, ZeroProbabilityError


def _delayed(value, delay):
    def task():
        time.sleep(delay)
        return value
    return task


class TestGridEngine:

    def test_sequential_order(self):
        tasks = [lambda i=i: i * i for i in range(10)]
        assert GridEngine(1).map(tasks) == [i * i for i in range(10)]

    def test_parallel_results_keep_grid_order(self):
        # 後のタスクほど早く終わる
        tasks = [_delayed(i, 0.01 * (8 - i)) for i in range(8)]
        outcome = GridEngine(4).evaluate(tasks, kind="test")
        assert outcome.results == list(range(8))
        assert outcome.failed == 0

    def test_domain_error_is_reraised(self):
        def failing():
            raise ZeroProbabilityError("zero branch", outcome='-', probability=0.0)

        with pytest.raises(ZeroProbabilityError):
            GridEngine(2).evaluate([lambda: 1, failing])

    def test_generic_error_is_wrapped(self):
        def failing():
            raise RuntimeError("boom")

        with pytest.raises(QuantumCorrelationException) as excinfo:
            GridEngine(1).evaluate([failing], kind="wrap")
        assert excinfo.value.details['error_type'] == 'RuntimeError'
        assert isinstance(excinfo.value.__cause__, RuntimeError)

    def test_collect_errors(self):
        def failing():
            raise ValueError("bad point")

        outcome = GridEngine(3).evaluate([lambda: 1, failing, lambda: 3], raise_on_error=False)
        assert outcome.results == [1, None, 3]
        assert outcome.failed == 1
        assert outcome.errors[1] == "ValueError: bad point"

    def test_worker_count_floor(self):
        assert GridEngine(0).max_workers == 1

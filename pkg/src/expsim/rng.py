"""
乱数ストリーム管理

カウンタベースの 64bit 生成器 Philox を SeedSequence の spawn_key で分岐させ、
(シード, 用途, グリッド番号) ごとに独立で再現可能なストリームを作ります。
"""

import numpy as np

from ..utils.validator import ParameterValidator

# ストリーム番号
STREAM_PREPARATION = 0
STREAM_MARGINAL = 1
STREAM_POINTS = 2


def make_rng(seed: int, *keys: int) -> np.random.Generator:
    """
    シードと派生キーから乱数生成器を作成します。

    Args:
        seed: 64bit 符号なし整数シード
        *keys: ストリームを区別する非負整数

    Returns:
        Philox ベースの Generator

    Raises:
        ValidationError: シードが範囲外の場合
    """
    ParameterValidator.validate_seed(seed)
    sequence = np.random.SeedSequence(seed, spawn_key=tuple(int(k) for k in keys))
    return np.random.Generator(np.random.Philox(sequence))


def point_rng(seed: int, index: int, replicate: int = 0) -> np.random.Generator:
    """測定角グリッドの index 番目、replicate 回目のストリーム"""
    return make_rng(seed, STREAM_POINTS, index, replicate)

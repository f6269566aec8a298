"""
図データ構築モジュール

fig1: 条件付き重み p'±、fig2: θ 走査の最適化量、fig4: A の条件付き純度、
fig5: ディスコードと情報欠損のデータを構築します。fig4 / fig5 はモンテカルロ推定も含みます。
"""

import math
from dataclasses import dataclass, field
from typing import Any, Dict, List

import numpy as np

from .config_manager import RunConfig
from .grid_engine import GridEngine
from .tables import (
    MONTE_CARLO_COLUMNS,
    PHI_SCAN_COLUMNS,
    THETA_SCAN_COLUMNS,
    monte_carlo_rows,
    phi_scan_tasks,
    theta_scan_tasks,
)
from ..expsim.data_models import ExperimentRun
from ..expsim.pipeline import run_experiment_pipeline
from ..quantum import correlations as corr
from ..quantum.data_models import ThetaPState
from ..quantum.states import local_purity
from ..utils.exceptions import ValidationError
from ..utils.logger import get_logger

# 図の固定パラメータ
FIGURE_THETA = math.pi / 3
FIGURE_WEIGHTS = (0.5, 0.7)
FIGURES = ('fig1', 'fig2', 'fig4', 'fig5')

FIG1_COLUMNS = ['p', 'theta'] + PHI_SCAN_COLUMNS
FIG4_COLUMNS = ['p', 'theta', 'phi', 'P_cond_plus', 'P_cond_minus', 'P_avg', 'P_A', 'P_cond_max']
FIG5_COLUMNS = ['p', 'theta', 'phi', 'D_phi', 'I2_phi', 'discord', 'I2_min']


@dataclass
class FigureDataset:
    """1つの出力ファイルに対応する表"""
    name: str
    columns: List[str]
    rows: List[Dict[str, Any]] = field(default_factory=list)


class FigureBuilder:
    """図データ構築クラス"""

    def __init__(self, config: RunConfig, engine: GridEngine):
        """
        Args:
            config: 実行設定（φ グリッド、θ 点数、計数、シード）
            engine: グリッド評価エンジン
        """
        self.config = config
        self.engine = engine
        self.logger = get_logger(__name__)
        self._experiments: Dict[float, ExperimentRun] = {}

    def build(self, which: str) -> List[FigureDataset]:
        """
        指定した図のデータを構築します。

        Args:
            which: fig1, fig2, fig4, fig5 または all

        Returns:
            データセットのリスト
        """
        if which == 'all':
            datasets: List[FigureDataset] = []
            for name in FIGURES:
                datasets.extend(self.build(name))
            return datasets

        builders = {
            'fig1': self._fig1,
            'fig2': self._fig2,
            'fig4': self._fig4,
            'fig5': self._fig5,
        }
        if which not in builders:
            raise ValidationError(f"Unknown figure: {which}. Must be one of {list(FIGURES) + ['all']}")

        self.logger.info("Building figure data", figure=which)
        return builders[which]()

    def _phi_scan(self, p: float) -> List[Dict[str, Any]]:
        s = ThetaPState(FIGURE_THETA, p)
        return self.engine.evaluate(phi_scan_tasks(s, self.config.phi_values()), kind=f"phi-scan p={p}").results

    def _fig1(self) -> List[FigureDataset]:
        rows = []
        for p in FIGURE_WEIGHTS:
            rows.extend({'p': p, 'theta': FIGURE_THETA, **row} for row in self._phi_scan(p))
        return [FigureDataset('fig1', FIG1_COLUMNS, rows)]

    def _fig2(self) -> List[FigureDataset]:
        thetas = np.linspace(0.0, math.pi / 2, self.config.theta_count)
        rows = []
        for p in FIGURE_WEIGHTS:
            rows.extend(self.engine.evaluate(theta_scan_tasks(p, thetas), kind=f"theta-scan p={p}").results)
        return [FigureDataset('fig2', THETA_SCAN_COLUMNS, rows)]

    def _experiment(self, p: float) -> ExperimentRun:
        # fig4 と fig5 で同じ実行を共有
        if p not in self._experiments:
            self._experiments[p] = run_experiment_pipeline(
                ThetaPState(FIGURE_THETA, p),
                self.config.experiment_phi_values(),
                self.config.counts_n,
                self.config.seed,
                detector=self.config.detector,
                seeds_per_point=self.config.seeds_per_point,
                runner=self.engine.map
            )
        return self._experiments[p]

    def _monte_carlo(self, name: str) -> FigureDataset:
        rows = []
        for p in FIGURE_WEIGHTS:
            rows.extend(monte_carlo_rows(p, self._experiment(p).records, self.config.seeds_per_point))
        return FigureDataset(name, MONTE_CARLO_COLUMNS, rows)

    def _fig4(self) -> List[FigureDataset]:
        rows = []
        for p in FIGURE_WEIGHTS:
            s = ThetaPState(FIGURE_THETA, p)
            extra = {'P_A': local_purity(s), 'P_cond_max': corr.max_avg_conditional_purity(s)}
            for row in self._phi_scan(p):
                rows.append({'p': p, 'theta': FIGURE_THETA, **row, **extra})
        return [FigureDataset('fig4', FIG4_COLUMNS, rows), self._monte_carlo('fig4_mc')]

    def _fig5(self) -> List[FigureDataset]:
        rows = []
        for p in FIGURE_WEIGHTS:
            s = ThetaPState(FIGURE_THETA, p)
            extra = {'discord': corr.discord(s)[0], 'I2_min': corr.geometric_deficit(s)}
            for row in self._phi_scan(p):
                rows.append({'p': p, 'theta': FIGURE_THETA, **row, **extra})
        return [FigureDataset('fig5', FIG5_COLUMNS, rows), self._monte_carlo('fig5_mc')]

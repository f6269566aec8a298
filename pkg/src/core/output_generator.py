"""
出力生成モジュール

表データの CSV / JSON 出力、相関量レポートのテキスト整形、要約ファイルの生成を行います。
出力には日時などの可変情報を含めず、同じ入力とシードからは同一バイト列を生成します。
"""

import json
import math
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
import pandas as pd
from jinja2 import Environment, StrictUndefined

from ..quantum.data_models import CorrelationReport
from ..utils.exceptions import OutputError
from ..utils.logger import get_logger
from ..utils.validator import ParameterValidator

# CSV の数値は有効数字17桁
FLOAT_FORMAT = '%.17g'

REPORT_TEMPLATE = """\
correlation report
==================
theta: {{ fmt(report.theta) }}
p: {{ fmt(report.p) }}
{% for key, value in fields %}{{ key }}: {{ value }}
{% endfor %}{% if verification is not none %}
verification: {{ verification.status }}
{% for check in verification.checks %}  {{ check.check }}: delta={{ fmt(check.delta) }} tolerance={{ fmt(check.tolerance) }} {{ 'PASS' if check.passed else 'FAIL' }}
{% endfor %}{% endif %}"""


def _plain(value: Any) -> Any:
    """JSON 用に numpy 型と NaN を変換します"""
    if isinstance(value, (np.bool_, bool)):
        return bool(value)
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating, float)):
        value = float(value)
        return value if math.isfinite(value) else None
    return value


def format_number(value: Any) -> str:
    """レポート用の数値整形"""
    if isinstance(value, bool) or value is None:
        return str(value)
    if isinstance(value, float):
        return format(value, '.17g')
    return str(value)


class OutputGenerator:
    """出力生成クラス"""

    def __init__(self, output_format: str = 'csv'):
        """
        Args:
            output_format: csv または json
        """
        self.output_format = ParameterValidator.validate_format(output_format)
        self.logger = get_logger(__name__)
        self.jinja_env = Environment(undefined=StrictUndefined, keep_trailing_newline=True)

    def render_table(self, columns: Sequence[str], rows: List[Dict[str, Any]],
                     output_format: Optional[str] = None) -> str:
        """
        表を文字列に変換します。

        Args:
            columns: 列名（順序固定）
            rows: 行データ
            output_format: 出力形式（省略時は既定）

        Returns:
            CSV（ヘッダー付き）または JSON 配列
        """
        output_format = output_format or self.output_format
        if output_format == 'json':
            records = [{column: _plain(row.get(column)) for column in columns} for row in rows]
            return json.dumps(records, ensure_ascii=False, indent=2, allow_nan=False) + "\n"

        frame = pd.DataFrame(rows, columns=list(columns))
        return frame.to_csv(index=False, float_format=FLOAT_FORMAT)

    def write_table(self, columns: Sequence[str], rows: List[Dict[str, Any]], path,
                    output_format: Optional[str] = None) -> Path:
        """
        表をファイルへ書き出します。

        Raises:
            OutputError: 書き込みに失敗した場合（パスを含む）
        """
        file_path = Path(path)
        content = self.render_table(columns, rows, output_format)
        self._write_text(file_path, content)
        self.logger.info("Table written", path=str(file_path), rows=len(rows))
        return file_path

    def write_datasets(self, datasets, output_dir, output_format: Optional[str] = None) -> List[Path]:
        """
        図データセットをディレクトリに書き出します。

        Args:
            datasets: FigureDataset のリスト
            output_dir: 出力ディレクトリ
            output_format: 出力形式

        Returns:
            生成されたファイルパスのリスト
        """
        output_format = output_format or self.output_format
        directory = Path(output_dir)
        generated = []
        for dataset in datasets:
            path = directory / f"{dataset.name}.{output_format}"
            generated.append(self.write_table(dataset.columns, dataset.rows, path, output_format))
        self.logger.info("Figure data generated", files=len(generated), directory=str(directory))
        return generated

    def render_report(self, report: CorrelationReport, verification=None) -> str:
        """
        相関量レポートを構造化テキストに整形します。

        Args:
            report: 相関量レポート
            verification: 照合結果（VerificationSummary、任意）

        Returns:
            key: value 形式のテキスト
        """
        fields = [
            (key, format_number(value))
            for key, value in report.to_dict().items()
            if key not in ('theta', 'p', 'verification')
        ]
        template = self.jinja_env.from_string(REPORT_TEMPLATE)
        return template.render(report=report, fields=fields, verification=verification, fmt=format_number)

    def report_json(self, report: CorrelationReport, verification=None) -> str:
        """相関量レポートの JSON 表現"""
        data = {key: _plain(value) for key, value in report.to_dict().items()}
        if verification is not None:
            data['checks'] = [
                {key: _plain(value) for key, value in check.to_dict().items()}
                for check in verification.checks
            ]
        return json.dumps(data, ensure_ascii=False, indent=2, allow_nan=False) + "\n"

    def write_summary(self, summary: Dict[str, Any], path) -> Path:
        """
        要約を JSON ファイルとして書き出します。

        Raises:
            OutputError: 書き込みに失敗した場合
        """
        file_path = Path(path)
        content = json.dumps(self._sanitize(summary), ensure_ascii=False, indent=2, allow_nan=False) + "\n"
        self._write_text(file_path, content)
        self.logger.info("Summary written", path=str(file_path))
        return file_path

    def _sanitize(self, value: Any) -> Any:
        if isinstance(value, dict):
            return {key: self._sanitize(v) for key, v in value.items()}
        if isinstance(value, (list, tuple)):
            return [self._sanitize(v) for v in value]
        return _plain(value)

    def _write_text(self, file_path: Path, content: str) -> None:
        try:
            file_path.parent.mkdir(parents=True, exist_ok=True)
            with open(file_path, 'w', encoding='utf-8', newline='\n') as f:
                f.write(content)
        except OSError as e:
            raise OutputError(f"Failed to write {file_path}: {e}", path=str(file_path))

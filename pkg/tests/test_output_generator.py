"""
出力生成モジュールのテスト
"""

import json
import math

import pytest

from src.core.figures import FigureDataset
from src.core.output_generator import OutputGenerator, format_number
from src.core.verifier import CheckResult, VerificationSummary
from src.quantum.correlations import build_report
from src.utils.exceptions import OutputError, ValidationError

COLUMNS = ['phi', 'value', 'flag']
ROWS = [
    {'phi': 0.1, 'value': 0.5, 'flag': True},
    {'phi': 0.2, 'value': math.nan, 'flag': False},
]


class TestTables:

    def test_csv_header_and_precision(self):
        text = OutputGenerator('csv').render_table(COLUMNS, ROWS)
        lines = text.splitlines()
        assert lines[0] == 'phi,value,flag'
        assert lines[1] == '0.10000000000000001,0.5,True'
        assert lines[2].startswith('0.20000000000000001,,')

    def test_json_nan_is_null(self):
        data = json.loads(OutputGenerator('json').render_table(COLUMNS, ROWS))
        assert data[0] == {'phi': 0.1, 'value': 0.5, 'flag': True}
        assert data[1]['value'] is None

    def test_column_order_is_fixed(self):
        text = OutputGenerator().render_table(['flag', 'phi'], ROWS)
        assert text.splitlines()[0] == 'flag,phi'

    def test_invalid_format(self):
        with pytest.raises(ValidationError):
            OutputGenerator('xml')

    def test_write_table(self, tmp_path):
        path = OutputGenerator().write_table(COLUMNS, ROWS, tmp_path / 'nested' / 'scan.csv')
        assert path.read_text(encoding='utf-8').startswith('phi,value,flag\n')

    def test_write_datasets(self, tmp_path):
        datasets = [FigureDataset('fig1', COLUMNS, ROWS), FigureDataset('fig2', COLUMNS, ROWS[:1])]
        paths = OutputGenerator().write_datasets(datasets, tmp_path, 'json')
        assert [p.name for p in paths] == ['fig1.json', 'fig2.json']
        assert len(json.loads(paths[1].read_text(encoding='utf-8'))) == 1

    def test_write_failure_carries_path(self, tmp_path, mocker):
        mocker.patch('src.core.output_generator.open', side_effect=OSError("disk full"), create=True)
        target = tmp_path / 'scan.csv'
        with pytest.raises(OutputError) as excinfo:
            OutputGenerator().write_table(COLUMNS, ROWS, target)
        assert excinfo.value.path == str(target)

    def test_parent_is_a_file(self, tmp_path):
        blocker = tmp_path / 'blocker'
        blocker.write_text('x', encoding='utf-8')
        with pytest.raises(OutputError):
            OutputGenerator().write_table(COLUMNS, ROWS, blocker / 'scan.csv')


class TestReport:

    def test_render_report(self, balanced_state):
        text = OutputGenerator().render_report(build_report(balanced_state))
        lines = text.splitlines()
        assert lines[0] == 'correlation report'
        values = dict(line.split(': ', 1) for line in lines[2:] if ': ' in line)
        assert float(values['discord']) == pytest.approx(0.140289, abs=1e-6)
        assert float(values['p']) == 0.5
        assert values['theta_c_flag'] == 'True'
        assert 'verification' not in values

    def test_render_report_with_verification(self, balanced_state):
        summary = VerificationSummary([
            CheckResult('discord', 1.0, 0.5, 0.1, 0.1, 1e-12, 1e-8, True),
            CheckResult('geometric_deficit', 1.0, 0.5, 0.2, 0.3, 0.1, 1e-10, False),
        ])
        text = OutputGenerator().render_report(build_report(balanced_state), summary)
        assert 'verification: FAIL' in text
        assert '  discord: delta=9.9999999999999998e-13 tolerance=1e-08 PASS' in text
        assert text.rstrip().endswith('FAIL')

    def test_report_json(self, balanced_state):
        summary = VerificationSummary([CheckResult('discord', 1.0, 0.5, 0.1, 0.1, 0.0, 1e-8, True)])
        data = json.loads(OutputGenerator('json').report_json(build_report(balanced_state), summary))
        assert data['discord'] == pytest.approx(0.140289, abs=1e-6)
        assert data['checks'][0]['check'] == 'discord'

    def test_format_number(self):
        assert format_number(0.1) == '0.10000000000000001'
        assert format_number(True) == 'True'
        assert format_number(None) == 'None'
        assert format_number(3) == '3'


class TestSummary:

    def test_write_summary(self, tmp_path):
        path = OutputGenerator().write_summary(
            {'fidelity': 0.99, 'errors': {'r_plus': {'median': math.nan}}, 'points': 3},
            tmp_path / 'summary.json'
        )
        data = json.loads(path.read_text(encoding='utf-8'))
        assert data['errors']['r_plus']['median'] is None
        assert data['points'] == 3

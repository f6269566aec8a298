"""
コマンドラインのテスト
"""

import json
import math

import pytest

from src.core.verifier import CheckResult, VerificationSummary, Verifier
from src.main import (
    EXIT_OK,
    EXIT_OUTPUT,
    EXIT_USAGE,
    EXIT_VERIFICATION,
    build_overrides,
    create_argument_parser,
    run,
)


def report_values(text):
    return dict(line.split(': ', 1) for line in text.splitlines() if ': ' in line)


class TestReportCommand:

    def test_report(self, config_file, capsys):
        assert run(['report', '-c', config_file]) == EXIT_OK
        values = report_values(capsys.readouterr().out)
        assert float(values['discord']) == pytest.approx(0.140289, abs=1e-6)
        assert float(values['phi_star_cond']) == pytest.approx(math.pi / 2)

    def test_out_of_range_weight(self, config_file, capsys):
        assert run(['report', '-c', config_file, '--p', '1.5']) == EXIT_USAGE
        captured = capsys.readouterr()
        assert captured.out == ''
        assert 'p must be within' in captured.err

    def test_degrees_match_radians(self, config_file, capsys):
        run(['report', '-c', config_file, '--theta', '60', '--degrees', '--p', '0.7'])
        degrees = report_values(capsys.readouterr().out)
        run(['report', '-c', config_file, '--theta', repr(math.pi / 3), '--p', '0.7'])
        radians = report_values(capsys.readouterr().out)
        assert float(degrees['theta']) == pytest.approx(math.pi / 3)
        assert float(degrees['discord']) == pytest.approx(float(radians['discord']), abs=1e-12)

    def test_report_verify(self, config_file, capsys):
        assert run(['report', '-c', config_file, '--p', '0.7', '--verify']) == EXIT_OK
        out = capsys.readouterr().out
        assert 'verification: PASS' in out
        assert 'FAIL' not in out

    def test_report_json(self, config_file, capsys):
        assert run(['report', '-c', config_file, '--format', 'json']) == EXIT_OK
        data = json.loads(capsys.readouterr().out)
        assert data['purity_ab'] == pytest.approx(0.53125)
        assert data['verification'] is None

    def test_missing_config(self, tmp_path, capsys):
        assert run(['report', '-c', str(tmp_path / 'absent.yaml')]) == EXIT_USAGE
        assert 'absent.yaml' in capsys.readouterr().err

    def test_unknown_option_exits_with_usage(self, config_file):
        with pytest.raises(SystemExit) as excinfo:
            run(['report', '-c', config_file, '--bogus'])
        assert excinfo.value.code == EXIT_USAGE


class TestScanCommand:

    def test_scan_to_file(self, config_file, tmp_path, capsys):
        target = tmp_path / 'scan.csv'
        assert run(['scan', '-c', config_file, '--phi-count', '7', '--out', str(target)]) == EXIT_OK
        lines = target.read_text(encoding='utf-8').splitlines()
        assert lines[0] == 'phi,r_plus,r_minus,p_prime_plus,p_prime_minus,P_cond_plus,P_cond_minus,P_avg,D_phi,I2_phi'
        assert len(lines) == 8

    def test_scan_json_to_stdout(self, config_file, capsys):
        assert run(['scan', '-c', config_file, '--phi-count', '5', '--format', 'json']) == EXIT_OK
        rows = json.loads(capsys.readouterr().out)
        assert len(rows) == 5
        assert rows[2]['phi'] == pytest.approx(0.0, abs=1e-15)
        assert rows[2]['r_plus'] == pytest.approx(0.75)

    def test_output_error(self, config_file, tmp_path, capsys):
        blocker = tmp_path / 'blocker'
        blocker.write_text('x', encoding='utf-8')
        assert run(['scan', '-c', config_file, '--phi-count', '3', '--out', str(blocker / 'scan.csv')]) == EXIT_OUTPUT
        assert str(blocker / 'scan.csv') in capsys.readouterr().err


class TestExperimentCommand:

    def test_reruns_are_byte_identical(self, config_file, tmp_path, capsys):
        first, second = tmp_path / 'a', tmp_path / 'b'
        for directory in (first, second):
            assert run(['experiment', '-c', config_file, '--counts', '500', '--seed', '11',
                        '--out', str(directory)]) == EXIT_OK
        for name in ('experiment.csv', 'experiment_summary.json'):
            assert (first / name).read_bytes() == (second / name).read_bytes()

        summary = json.loads((first / 'experiment_summary.json').read_text(encoding='utf-8'))
        assert summary['seed'] == 11
        assert summary['counts_n'] == 500


class TestFigureCommand:

    @pytest.mark.parametrize('which,names', [
        ('fig1', ['fig1.csv']),
        ('fig4', ['fig4.csv', 'fig4_mc.csv']),
    ])
    def test_reruns_are_byte_identical(self, config_file, tmp_path, which, names):
        first, second = tmp_path / 'a', tmp_path / 'b'
        for directory in (first, second):
            assert run(['figure', which, '-c', config_file, '--counts', '500', '--seed', '3',
                        '--out', str(directory)]) == EXIT_OK
        for name in names:
            assert (first / name).read_bytes() == (second / name).read_bytes()


class TestVerifyCommand:

    def test_verification_failure_exit_code(self, config_file, mocker, capsys):
        failing = VerificationSummary([CheckResult('discord', 1.0, 0.5, 0.1, 0.2, 0.1, 1e-8, False)])
        mocker.patch.object(Verifier, 'run_all', return_value=failing)
        assert run(['verify', '-c', config_file]) == EXIT_VERIFICATION
        captured = capsys.readouterr()
        assert 'verification: FAIL' in captured.out
        assert 'discord' in captured.err

    def test_verification_table(self, config_file, tmp_path, mocker, capsys):
        passing = VerificationSummary([CheckResult('discord', 1.0, 0.5, 0.1, 0.1, 0.0, 1e-8, True)])
        mocker.patch.object(Verifier, 'run_all', return_value=passing)
        target = tmp_path / 'verify.csv'
        assert run(['verify', '-c', config_file, '--out', str(target)]) == EXIT_OK
        assert target.read_text(encoding='utf-8').splitlines()[0] == (
            'check,theta,p,closed_form,oracle,delta,tolerance,passed'
        )

    def test_sphere_resolution_from_config(self, config_dict, write_config, mocker, capsys):
        config_dict['oracle']['sphere_resolution'] = 2000
        passing = VerificationSummary([CheckResult('discord', 1.0, 0.5, 0.1, 0.1, 0.0, 1e-8, True)])
        seen = []

        def fake_run_all(verifier):
            seen.append(verifier.sphere_resolution)
            return passing

        mocker.patch.object(Verifier, 'run_all', autospec=True, side_effect=fake_run_all)
        assert run(['verify', '-c', write_config(config_dict)]) == EXIT_OK
        assert seen == [2000]


class TestArguments:

    def test_degree_overrides(self):
        args = create_argument_parser().parse_args(
            ['scan', '--theta', '90', '--phi-start', '-180', '--phi-stop', '180', '--degrees']
        )
        overrides = build_overrides(args)
        assert overrides['theta'] == pytest.approx(math.pi / 2)
        assert overrides['phi_start'] == pytest.approx(-math.pi)
        assert overrides['phi_stop'] == pytest.approx(math.pi)
        assert overrides['p'] is None

    def test_figure_choices(self):
        with pytest.raises(SystemExit):
            create_argument_parser().parse_args(['figure', 'fig3'])

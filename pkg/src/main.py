"""
メインアプリケーション

量子相関解析システムのエントリーポイントです。
"""

import sys
import math
import argparse
from pathlib import Path
from typing import Any, Dict, List, Optional

from . import __version__
from .core.config_manager import ConfigManager, RunConfig
from .core.figures import FIGURES, FigureBuilder
from .core.grid_engine import GridEngine
from .core.output_generator import OutputGenerator
from .core.tables import MONTE_CARLO_COLUMNS, PHI_SCAN_COLUMNS, monte_carlo_rows, phi_scan_tasks
from .core.verifier import VERIFY_COLUMNS, VerificationSummary, Verifier, report_verification
from .expsim.pipeline import run_experiment_pipeline
from .quantum.correlations import build_report
from .quantum.data_models import ThetaPState
from .utils.exceptions import (
    ConfigurationError,
    OutputError,
    QuantumCorrelationException,
    ValidationError,
    VerificationError,
)
from .utils.logger import configure_logging, get_logger

# 終了コード
EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2
EXIT_VERIFICATION = 3
EXIT_OUTPUT = 4
EXIT_INTERRUPTED = 130


class QuantumCorrelationApplication:
    """メインアプリケーションクラス"""

    def __init__(self, config_path: Optional[str] = None, verbose: bool = False):
        """
        Args:
            config_path: 設定ファイルパス
            verbose: True なら DEBUG ログ

        Raises:
            ConfigurationError: 設定ファイルが読めない場合
        """
        # 設定読み込み前のログも標準エラーへ
        configure_logging(log_level='DEBUG' if verbose else 'WARNING')
        self.config_manager = ConfigManager(config_path)

        configure_logging(
            log_level='DEBUG' if verbose else self.config_manager.log_level,
            log_file=self.config_manager.log_file,
            max_size_mb=self.config_manager.get('logging.max_size_mb', 10),
            backup_count=self.config_manager.get('logging.backup_count', 3)
        )
        self.logger = get_logger(__name__)
        self.logger.debug("Application initialized", config=self.config_manager.config_path)

    def run_config(self, overrides: Dict[str, Any]) -> RunConfig:
        """設定ファイルにコマンドライン引数を上書きした実行設定"""
        return self.config_manager.build_run_config(overrides)

    def cmd_report(self, config: RunConfig, verify: bool = False) -> str:
        """
        単一 (θ, p) の相関量レポートを作成します。

        Args:
            config: 実行設定
            verify: True ならオラクル照合を行う

        Returns:
            レポート文字列（text または json）

        Raises:
            VerificationError: 照合が失敗した場合（レポートは失敗前に出力済み）
        """
        s = ThetaPState(config.theta, config.p)
        report = build_report(s)
        summary: Optional[VerificationSummary] = None

        if verify:
            summary = report_verification(s, Verifier(GridEngine(config.workers), **config.oracle_options()))
            report.verification = summary.status

        generator = OutputGenerator(config.output_format)
        if config.output_format == 'json':
            text = generator.report_json(report, summary)
        else:
            text = generator.render_report(report, summary)

        self.logger.info("Report generated", theta=s.theta, p=s.p, verification=report.verification)
        print(text, end='')

        if summary is not None and not summary.passed:
            raise VerificationError(
                "Closed-form values disagree with the oracle",
                failed_checks=[c.check for c in summary.failed_checks]
            )
        return text

    def cmd_scan(self, config: RunConfig, out: Optional[str] = None) -> Optional[Path]:
        """
        φ 走査表を出力します。

        Args:
            config: 実行設定
            out: 出力ファイル（None なら標準出力）

        Returns:
            出力ファイルパス
        """
        s = ThetaPState(config.theta, config.p)
        engine = GridEngine(config.workers)
        rows = engine.evaluate(phi_scan_tasks(s, config.phi_values()), kind="phi-scan").results

        generator = OutputGenerator(config.output_format)
        self.logger.info("Scan completed", points=len(rows), theta=s.theta, p=s.p)
        if out is None:
            print(generator.render_table(PHI_SCAN_COLUMNS, rows), end='')
            return None
        return generator.write_table(PHI_SCAN_COLUMNS, rows, out)

    def cmd_figure(self, which: str, config: RunConfig, out: Optional[str] = None) -> List[Path]:
        """
        図データを出力ディレクトリに書き出します。

        Args:
            which: fig1, fig2, fig4, fig5 または all
            config: 実行設定
            out: 出力ディレクトリ（None なら設定値）
        """
        builder = FigureBuilder(config, GridEngine(config.workers))
        datasets = builder.build(which)
        generator = OutputGenerator(config.output_format)
        return generator.write_datasets(datasets, out or config.output_path)

    def cmd_experiment(self, config: RunConfig, out: Optional[str] = None) -> List[Path]:
        """
        実験エミュレーションを実行し、推定値と要約を書き出します。

        Returns:
            [推定値の表, 要約 JSON]
        """
        s = ThetaPState(config.theta, config.p)
        engine = GridEngine(config.workers)
        run = run_experiment_pipeline(
            s,
            config.experiment_phi_values(),
            config.counts_n,
            config.seed,
            detector=config.detector,
            seeds_per_point=config.seeds_per_point,
            runner=engine.map
        )

        directory = Path(out or config.output_path)
        generator = OutputGenerator(config.output_format)
        rows = monte_carlo_rows(s.p, run.records, config.seeds_per_point)
        files = [
            generator.write_table(MONTE_CARLO_COLUMNS, rows, directory / f"experiment.{config.output_format}"),
            generator.write_summary(run.summary(), directory / "experiment_summary.json"),
        ]
        self.logger.info(
            "Experiment completed",
            preparation_fidelity=run.preparation.fidelity_vs_truth,
            skipped=run.skipped_branches
        )
        return files

    def cmd_verify(self, config: RunConfig, out: Optional[str] = None) -> VerificationSummary:
        """
        閉形式とオラクルの照合一式を実行します。

        Raises:
            VerificationError: いずれかのチェックが失敗した場合
        """
        verifier = Verifier(GridEngine(config.workers), **config.oracle_options())
        summary = verifier.run_all()

        if out is not None:
            OutputGenerator(config.output_format).write_table(VERIFY_COLUMNS, summary.to_rows(), out)

        print(f"verification: {summary.status} ({len(summary.checks)} checks, "
              f"{len(summary.failed_checks)} failed, max delta {summary.max_delta:.3g})")
        if not summary.passed:
            raise VerificationError(
                "Verification failed",
                failed_checks=[c.check for c in summary.failed_checks]
            )
        return summary


def create_argument_parser() -> argparse.ArgumentParser:
    """コマンドライン引数パーサーを作成"""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--theta', type=float, help='Bloch 角 θ（ラジアン、--degrees で度）')
    common.add_argument('--p', type=float, help='混合の重み p ∈ [0, 1]')
    common.add_argument('--phi-start', type=float, help='φ グリッドの始点')
    common.add_argument('--phi-stop', type=float, help='φ グリッドの終点')
    common.add_argument('--phi-count', type=int, help='φ グリッドの点数 (≥ 2)')
    common.add_argument('--counts', type=int, help='設定あたりの光子数 N')
    common.add_argument('--seed', type=int, help='乱数シード（64bit 符号なし整数）')
    common.add_argument('--format', choices=['csv', 'json'], help='出力形式')
    common.add_argument('--out', help='出力先パス')
    common.add_argument('--degrees', action='store_true', help='角度を度で受け付ける（出力は常にラジアン）')
    common.add_argument('--workers', type=int, help='グリッド評価の並列数')
    common.add_argument('-c', '--config', help='設定ファイルパス (デフォルト: config/config.yaml)')
    common.add_argument('-v', '--verbose', action='store_true', help='詳細ログ出力')

    parser = argparse.ArgumentParser(
        description='二量子ビット混合状態の量子相関解析システム',
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
使用例:
  %(prog)s report --theta 1.0471976 --p 0.7 --verify
  %(prog)s scan --theta 60 --degrees --p 0.5 --out output/phi_scan.csv
  %(prog)s figure all --out output
  %(prog)s experiment --counts 100000 --seed 7
  %(prog)s verify --out output/verify.csv

θ は Bloch 球上の角度です。実験系の半波長板の角度 θ_L とは θ = 2θ_L の関係です。
        """
    )
    parser.add_argument('--version', action='version', version=f'%(prog)s {__version__}')

    subparsers = parser.add_subparsers(dest='command', required=True)

    report = subparsers.add_parser('report', parents=[common], help='単一 (θ, p) の相関量レポート')
    report.add_argument('--verify', action='store_true', help='オラクルとの照合を行う')

    subparsers.add_parser('scan', parents=[common], help='φ 走査表')

    figure = subparsers.add_parser('figure', parents=[common], help='図データの出力')
    figure.add_argument('which', choices=list(FIGURES) + ['all'], help='出力する図')

    subparsers.add_parser('experiment', parents=[common], help='実験パイプラインのエミュレーション')
    subparsers.add_parser('verify', parents=[common], help='閉形式とオラクルの照合')

    return parser


def build_overrides(args: argparse.Namespace) -> Dict[str, Any]:
    """
    引数から RunConfig の上書き値を作成します。

    --degrees 指定時は角度をラジアンに変換します。
    """
    def angle(value: Optional[float]) -> Optional[float]:
        if value is None or not args.degrees:
            return value
        return math.radians(value)

    return {
        'theta': angle(args.theta),
        'p': args.p,
        'phi_start': angle(args.phi_start),
        'phi_stop': angle(args.phi_stop),
        'phi_count': args.phi_count,
        'counts_n': args.counts,
        'seed': args.seed,
        'output_format': args.format,
        'workers': args.workers,
    }


def run(argv: Optional[List[str]] = None) -> int:
    """
    コマンドを実行し終了コードを返します。

    Args:
        argv: 引数（None なら sys.argv）

    Returns:
        終了コード
    """
    parser = create_argument_parser()
    args = parser.parse_args(argv)

    try:
        app = QuantumCorrelationApplication(args.config, args.verbose)
        config = app.run_config(build_overrides(args))

        if args.command == 'report':
            app.cmd_report(config, verify=args.verify)
        elif args.command == 'scan':
            app.cmd_scan(config, args.out)
        elif args.command == 'figure':
            for path in app.cmd_figure(args.which, config, args.out):
                print(path)
        elif args.command == 'experiment':
            for path in app.cmd_experiment(config, args.out):
                print(path)
        elif args.command == 'verify':
            app.cmd_verify(config, args.out)
        return EXIT_OK

    except KeyboardInterrupt:
        print("\n処理が中断されました", file=sys.stderr)
        return EXIT_INTERRUPTED
    except (ConfigurationError, ValidationError) as e:
        print(f"エラー: {e.message}", file=sys.stderr)
        return EXIT_USAGE
    except VerificationError as e:
        print(f"照合失敗: {', '.join(e.failed_checks)}", file=sys.stderr)
        return EXIT_VERIFICATION
    except OutputError as e:
        print(f"出力エラー: {e.path}: {e.message}", file=sys.stderr)
        return EXIT_OUTPUT
    except QuantumCorrelationException as e:
        print(f"エラー: {e.message}", file=sys.stderr)
        return EXIT_FAILURE


def main() -> None:
    """メインエントリーポイント"""
    sys.exit(run())


if __name__ == "__main__":
    main()

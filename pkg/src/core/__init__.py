"""
コアモジュール

設定管理、グリッド評価、表・図データの構築、検証、出力を提供します。
"""

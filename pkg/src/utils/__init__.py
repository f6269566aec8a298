"""
ユーティリティモジュール

共通的に使用される機能を提供します。
"""

"""
二準位量子相関解析ツール

このパッケージは、対称2量子ビット混合状態に対する遠隔射影測定の条件付き純度、
量子ディスコード、情報欠損を閉形式とオラクルで計算し、実験のモンテカルロ再現と
図データの出力を行うシステムです。
"""

__version__ = "1.0.0"
__author__ = "Quantum Correlation Team"

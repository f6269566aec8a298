"""
実験エミュレーションモジュール

有限計数の測定統計、トモグラフィー、実験パイプラインのモンテカルロ再現を提供します。
"""

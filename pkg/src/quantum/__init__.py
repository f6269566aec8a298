"""
量子相関モジュール

2量子ビット混合状態の生成、遠隔射影測定、相関量の閉形式とオラクルを提供します。
"""

# src/__init__.py
"""
IRS-aided OWC Allocation Simulator
반사 미러 배열 기반 광무선 통신 자원 할당 시뮬레이터 - Q-learning, SARSA, 최적 탐색
"""

__version__ = "1.0.0"
__author__ = "JDeun"
__license__ = "MIT"

__all__ = [
    '__version__',
]

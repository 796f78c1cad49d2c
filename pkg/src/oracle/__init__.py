from .optimizer import OracleResult, optimize_povm, random_restarts

__all__ = ["OracleResult", "optimize_povm", "random_restarts"]

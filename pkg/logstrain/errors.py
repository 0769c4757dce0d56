"""logstrain 的异常层次

每个异常类带有 CLI 退出码，由 utils.handle_errors 统一转换。
"""
from typing import Optional

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DOMAIN = 3
EXIT_IO = 4
EXIT_SOLVER = 5


class LogStrainError(Exception):
    """所有 logstrain 异常的基类"""

    exit_code = EXIT_DOMAIN


class InvalidArgumentError(LogStrainError, ValueError):
    """参数不合法（非有限值、非单位向量、样本太少等）"""

    exit_code = EXIT_CONFIG


class NotPositiveDefiniteError(LogStrainError):
    """矩阵不是正定的，无法取对数"""

    def __init__(self, eigenvalue: float, message: Optional[str] = None):
        self.eigenvalue = float(eigenvalue)
        super().__init__(message or f"matrix is not positive definite (eigenvalue {self.eigenvalue:.6g})")


class OrientationError(LogStrainError):
    """det F <= 0，违反方向保持约束"""

    def __init__(self, det: float):
        self.det = float(det)
        super().__init__(f"orientation constraint violated: det F = {self.det:.6g} <= 0")


class DomainError(LogStrainError):
    """自变量超出定义域"""


class BoundaryProximityError(LogStrainError):
    """有限差分探针落在能量为 +inf 的区域"""


class NonConvergenceError(LogStrainError):
    """标量 Newton 迭代未收敛"""

    exit_code = EXIT_SOLVER

    def __init__(self, residual: float, iterations: int, step_index: Optional[int] = None):
        self.residual = float(residual)
        self.iterations = int(iterations)
        self.step_index = step_index
        super().__init__(self._describe())

    def _describe(self) -> str:
        text = f"no convergence after {self.iterations} iterations (residual {self.residual:.3e})"
        if self.step_index is not None:
            text += f" at step {self.step_index}"
        return text

    def at_step(self, step_index: int) -> "NonConvergenceError":
        """返回带步号的副本"""
        return NonConvergenceError(self.residual, self.iterations, step_index)


class ConfigError(LogStrainError):
    """运行配置校验失败"""

    exit_code = EXIT_CONFIG

import numpy as np
from typing import Optional


def rotation_2d(angle: float) -> np.ndarray:
    """创建2D旋转矩阵

    Args:
        angle: 旋转角度（弧度）

    Returns:
        2x2 正交矩阵，det = 1
    """
    cos_r = np.cos(angle)
    sin_r = np.sin(angle)
    return np.array([[cos_r, -sin_r], [sin_r, cos_r]])


def random_rotation(rng: np.random.Generator, n: int) -> np.ndarray:
    """均匀分布的随机旋转（QR 分解加符号修正）"""
    Z = rng.standard_normal((n, n))
    Q, R = np.linalg.qr(Z)
    Q = Q * np.sign(np.diag(R))
    if np.linalg.det(Q) < 0:
        Q[:, 0] = -Q[:, 0]
    return Q


def unit_vector_2d(angle) -> np.ndarray:
    """角度对应的单位向量，支持数组输入（最后一维为分量）"""
    angle = np.asarray(angle, dtype=float)
    return np.stack([np.cos(angle), np.sin(angle)], axis=-1)


def half_circle_angles(count: int) -> np.ndarray:
    """[0, π) 上的均匀角度网格（对径方向冗余，不重复取）"""
    return np.pi * np.arange(count) / count


def fibonacci_hemisphere(count: int) -> np.ndarray:
    """上半球面上的 Fibonacci 点集

    Args:
        count: 点数

    Returns:
        (count, 3) 单位向量，z 分量 > 0
    """
    golden = np.pi * (3.0 - np.sqrt(5.0))
    i = np.arange(count)
    z = 1.0 - (i + 0.5) / count
    r = np.sqrt(np.maximum(0.0, 1.0 - z * z))
    phi = golden * i
    return np.stack([r * np.cos(phi), r * np.sin(phi), z], axis=-1)


def random_unit_vector(rng: np.random.Generator, n: int) -> np.ndarray:
    v = rng.standard_normal(n)
    return v / np.linalg.norm(v)


def random_unimodular(rng: np.random.Generator, n: int, max_condition: float = 20.0,
                      max_tries: int = 1000) -> np.ndarray:
    """det = 1 且条件数不超过 max_condition 的随机矩阵"""
    for _ in range(max_tries):
        A = np.eye(n) + 0.6 * rng.standard_normal((n, n))
        d = np.linalg.det(A)
        if d <= 0.05:
            continue
        A = A / d ** (1.0 / n)
        if np.linalg.cond(A) <= max_condition:
            return A
    raise RuntimeError("could not sample a unimodular matrix")


def random_deformation(rng: np.random.Generator, n: int, sv_min: float, sv_max: float,
                       log_uniform: bool = True) -> np.ndarray:
    """奇异值位于 [sv_min, sv_max] 的随机变形梯度 F = Q1·diag(s)·Q2ᵀ, det F > 0"""
    if log_uniform:
        s = np.exp(rng.uniform(np.log(sv_min), np.log(sv_max), n))
    else:
        s = rng.uniform(sv_min, sv_max, n)
    return random_rotation(rng, n) @ np.diag(s) @ random_rotation(rng, n).T


def lerp(a, b, t: float):
    """线性插值

    Args:
        a: 起始值
        b: 结束值
        t: 插值因子 (0.0 ~ 1.0)

    Returns:
        插值结果
    """
    return a + t * (b - a)


def clamp(value: float, min_value: float, max_value: float) -> float:
    """限制值在指定范围内"""
    return max(min_value, min(max_value, value))


def default_rng(seed: Optional[int] = None) -> np.random.Generator:
    return np.random.default_rng(seed)

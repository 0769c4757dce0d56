"""2×2 / 3×3 稠密矩阵核

对称特征分解、正定对称矩阵的主对数与指数、极分解、偏量投影、内积与不变量。
所有函数都接受批量输入，形状为 (..., n, n)，n ∈ {2, 3}。
二维情形全部使用闭式公式；三维特征值用三角形式的三次方程求解，再做一步 Newton 修正。
"""
import logging
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .errors import InvalidArgumentError, NotPositiveDefiniteError, OrientationError

logger = logging.getLogger(__name__)

EPS_PD_RELATIVE = 1e-12
SYMMETRY_TOL = 1e-10
SERIES_THRESHOLD = 1e-3
SCALAR_TOL = 1e-14
SIGN_TOL = 1e-12


@dataclass(frozen=True)
class EigenDecomposition:
    """特征值降序排列，eigenvectors 的第 i 列对应第 i 个特征值"""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        Q = self.eigenvectors
        return sym((Q * self.eigenvalues[..., None, :]) @ np.swapaxes(Q, -1, -2))


@dataclass(frozen=True)
class PolarFactors:
    """F = R·U，R 为旋转，U 对称正定"""

    R: np.ndarray
    U: np.ndarray


def as_matrix(A, symmetric: bool = False) -> np.ndarray:
    """把输入转换为 float64 矩阵（批），并检查形状与有限性

    Args:
        A: 类数组输入
        symmetric: 是否要求对称（容差 1e-10·max(1, ‖A‖)）

    Returns:
        形状 (..., n, n) 的数组
    """
    M = np.asarray(A, dtype=float)
    if M.ndim < 2 or M.shape[-1] != M.shape[-2] or M.shape[-1] not in (2, 3):
        raise InvalidArgumentError(f"expected n×n matrices with n in {{2, 3}}, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise InvalidArgumentError("matrix entries must be finite")
    if symmetric:
        asym = frobenius_norm(M - np.swapaxes(M, -1, -2))
        if np.any(asym > SYMMETRY_TOL * np.maximum(1.0, frobenius_norm(M))):
            raise InvalidArgumentError("matrix is not symmetric")
    return M


def transpose(A: np.ndarray) -> np.ndarray:
    return np.swapaxes(A, -1, -2)


def sym(A) -> np.ndarray:
    A = np.asarray(A, dtype=float)
    return 0.5 * (A + transpose(A))


def skew(A) -> np.ndarray:
    A = np.asarray(A, dtype=float)
    return 0.5 * (A - transpose(A))


def trace(A) -> np.ndarray:
    return np.trace(np.asarray(A, dtype=float), axis1=-2, axis2=-1)


def det(A) -> np.ndarray:
    """行列式，2×2 与 3×3 用显式公式"""
    A = np.asarray(A, dtype=float)
    if A.shape[-1] == 2:
        return A[..., 0, 0] * A[..., 1, 1] - A[..., 0, 1] * A[..., 1, 0]
    return (A[..., 0, 0] * (A[..., 1, 1] * A[..., 2, 2] - A[..., 1, 2] * A[..., 2, 1])
            - A[..., 0, 1] * (A[..., 1, 0] * A[..., 2, 2] - A[..., 1, 2] * A[..., 2, 0])
            + A[..., 0, 2] * (A[..., 1, 0] * A[..., 2, 1] - A[..., 1, 1] * A[..., 2, 0]))


def frobenius_inner(A, B) -> np.ndarray:
    """⟨A, B⟩ = tr(AᵀB)"""
    return np.sum(np.asarray(A, dtype=float) * np.asarray(B, dtype=float), axis=(-2, -1))


def frobenius_norm(A) -> np.ndarray:
    return np.sqrt(frobenius_inner(A, A))


def deviatoric(S) -> np.ndarray:
    """dev_n S = S − (1/n) tr(S)·𝟙"""
    S = np.asarray(S, dtype=float)
    return S - spherical(S)


def spherical(S) -> np.ndarray:
    S = np.asarray(S, dtype=float)
    n = S.shape[-1]
    return (trace(S) / n)[..., None, None] * np.eye(n)


def principal_invariants(A) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(I₁, I₂, I₃) = (tr A, ½[(tr A)² − tr(A²)], det A)"""
    A = np.asarray(A, dtype=float)
    tr = trace(A)
    return tr, 0.5 * (tr * tr - trace(A @ A)), det(A)


def relative_log_difference(l1, l2) -> np.ndarray:
    """(log l1 − log l2)/(l1 − l2)，l1 == l2 时取极限 1/l1

    相近特征值用 atanh 的 Taylor 级数，避免相消误差。
    """
    l1 = np.asarray(l1, dtype=float)
    l2 = np.asarray(l2, dtype=float)
    hi = np.maximum(l1, l2)
    lo = np.minimum(l1, l2)
    return _relative_log_difference(0.5 * (hi + lo), 0.5 * (hi - lo), hi, lo)


def _relative_log_difference(m: np.ndarray, r: np.ndarray, l1: np.ndarray, l2: np.ndarray) -> np.ndarray:
    # l1 = m + r, l2 = m − r, 且 l2 > 0；小特征值 l2 由行列式单独求得
    x = r / m
    series = (1.0 + x * x / 3.0 + x ** 4 / 5.0) / m
    with np.errstate(divide='ignore', invalid='ignore'):
        direct = (np.log(l1) - np.log(l2)) / (2.0 * r)
    return np.where(x < SERIES_THRESHOLD, series, direct)


def _sinhc(r: np.ndarray) -> np.ndarray:
    with np.errstate(divide='ignore', invalid='ignore'):
        direct = np.sinh(r) / r
    return np.where(r < SERIES_THRESHOLD, 1.0 + r * r / 6.0 + r ** 4 / 120.0, direct)


def _fix_signs(Q: np.ndarray) -> np.ndarray:
    # 每列第一个非零分量取正
    significant = np.abs(Q) > SIGN_TOL
    first = np.argmax(significant, axis=-2)
    lead = np.take_along_axis(Q, first[..., None, :], axis=-2)[..., 0, :]
    return Q * np.where(lead < 0, -1.0, 1.0)[..., None, :]


def _split2(A: np.ndarray):
    a = A[..., 0, 0]
    c = A[..., 1, 1]
    b = 0.5 * (A[..., 0, 1] + A[..., 1, 0])
    m = 0.5 * (a + c)
    d = 0.5 * (a - c)
    return a, b, c, m, d, np.hypot(d, b)


def _traceless2(d: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.stack([np.stack([d, b], -1), np.stack([b, -d], -1)], -2)


def _eigh2(A: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    a, b, c, m, d, r = _split2(A)
    determinant = a * c - b * b
    # 绝对值较大的特征值直接算，另一个由行列式得到
    big = np.where(m >= 0, m + r, m - r)
    safe = np.where(big == 0, 1.0, big)
    small = np.where(big == 0, 0.0, determinant / safe)
    l1 = np.where(m >= 0, big, small)
    l2 = np.where(m >= 0, small, big)
    theta = 0.5 * np.arctan2(b, d)
    cs, sn = np.cos(theta), np.sin(theta)
    Q = np.stack([np.stack([cs, -sn], -1), np.stack([sn, cs], -1)], -2)
    return np.stack([l1, l2], -1), _fix_signs(Q)


def _eigh3(A: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    A = sym(A)
    eye = np.eye(3)
    q = trace(A) / 3.0
    B = A - q[..., None, None] * eye
    p = np.sqrt(frobenius_inner(B, B) / 6.0)
    scale = np.max(np.abs(A), axis=(-2, -1))
    scalar = p <= SCALAR_TOL * scale
    p_safe = np.where(scalar, 1.0, p)
    Bn = B / p_safe[..., None, None]

    det_bn = det(Bn)
    phi = np.arccos(np.clip(0.5 * det_bn, -1.0, 1.0)) / 3.0
    beta = np.stack([2.0 * np.cos(phi),
                     2.0 * np.cos(phi + 4.0 * np.pi / 3.0),
                     2.0 * np.cos(phi + 2.0 * np.pi / 3.0)], -1)
    # 一步 Newton：β³ − 3β − det(Bn) = 0
    g = beta ** 3 - 3.0 * beta - det_bn[..., None]
    dg = 3.0 * beta ** 2 - 3.0
    beta = np.where(np.abs(dg) > 1e-8, beta - g / np.where(np.abs(dg) > 1e-8, dg, 1.0), beta)

    # 先求分离度最大的特征值的特征向量
    top = (beta[..., 0] - beta[..., 1]) >= (beta[..., 1] - beta[..., 2])
    beta_sep = np.where(top, beta[..., 0], beta[..., 2])
    M = Bn - beta_sep[..., None, None] * eye
    crosses = np.stack([np.cross(M[..., 0, :], M[..., 1, :]),
                        np.cross(M[..., 0, :], M[..., 2, :]),
                        np.cross(M[..., 1, :], M[..., 2, :])], -2)
    norms = np.linalg.norm(crosses, axis=-1)
    best = np.argmax(norms, axis=-1)
    v = np.take_along_axis(crosses, best[..., None, None], axis=-2)[..., 0, :]
    v_norm = np.take_along_axis(norms, best[..., None], axis=-1)[..., 0]
    v = np.where(scalar[..., None] | (v_norm[..., None] == 0), eye[0], v / np.where(v_norm == 0, 1.0, v_norm)[..., None])

    # 正交补上的 2×2 问题
    axis = np.argmin(np.abs(v), axis=-1)
    e = eye[axis]
    u1 = np.cross(v, e)
    u1 = u1 / np.linalg.norm(u1, axis=-1, keepdims=True)
    u2 = np.cross(v, u1)
    P = np.stack([u1, u2], -1)
    A2 = sym(transpose(P) @ A @ P)
    mu, W = _eigh2(A2)
    V2 = P @ W

    lam_sep = np.einsum('...i,...ij,...j->...', v, A, v)
    lam = np.where(top[..., None],
                   np.stack([lam_sep, mu[..., 0], mu[..., 1]], -1),
                   np.stack([mu[..., 0], mu[..., 1], lam_sep], -1))
    Q = np.where(top[..., None, None],
                 np.concatenate([v[..., :, None], V2], -1),
                 np.concatenate([V2, v[..., :, None]], -1))

    order = np.argsort(-lam, axis=-1, kind='stable')
    lam = np.take_along_axis(lam, order, axis=-1)
    Q = np.take_along_axis(Q, order[..., None, :], axis=-1)

    lam = np.where(scalar[..., None], q[..., None] * np.ones(3), lam)
    Q = np.where(scalar[..., None, None], eye, Q)
    return lam, _fix_signs(Q)


def _eigh(A: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    if A.shape[-1] == 2:
        return _eigh2(A)
    return _eigh3(A)


def _flatten(A: np.ndarray) -> Tuple[np.ndarray, Tuple[int, ...]]:
    # 内部核总是在 (N, n, n) 上运算
    n = A.shape[-1]
    return A.reshape((-1, n, n)), A.shape[:-2]


def sym_eigen(A) -> EigenDecomposition:
    """对称矩阵的特征分解

    Args:
        A: 对称矩阵（批）

    Returns:
        EigenDecomposition，特征值降序；重特征值时特征空间内的基取确定的一组
    """
    A = as_matrix(A, symmetric=True)
    n = A.shape[-1]
    flat, batch = _flatten(sym(A))
    lam, Q = _eigh(flat)
    return EigenDecomposition(eigenvalues=lam.reshape(batch + (n,)),
                              eigenvectors=Q.reshape(batch + (n, n)))


def _spectral(Q: np.ndarray, values: np.ndarray) -> np.ndarray:
    return sym((Q * values[..., None, :]) @ transpose(Q))


def _raise_not_pd(lam_min: np.ndarray, ok: np.ndarray) -> None:
    bad = np.flatnonzero(~np.asarray(ok).ravel())
    raise NotPositiveDefiniteError(np.asarray(lam_min).ravel()[bad[0]])


def _log_psym_flat(P: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    if P.shape[-1] == 2:
        a, b, c, m, d, r = _split2(P)
        lam, _ = _eigh2(P)
        l1, l2 = lam[..., 0], lam[..., 1]
        ok = l2 > EPS_PD_RELATIVE * np.maximum(np.abs(l1), np.abs(l2))
        mean_log = 0.5 * (np.log(np.where(ok, l1, 1.0)) + np.log(np.where(ok, l2, 1.0)))
        f = _relative_log_difference(np.where(ok, m, 1.0), np.where(ok, r, 0.0),
                                     np.where(ok, l1, 1.0), np.where(ok, l2, 1.0))
        out = mean_log[..., None, None] * np.eye(2) + f[..., None, None] * _traceless2(d, b)
        return out, ok, l2
    lam, Q = _eigh3(P)
    ok = lam[..., -1] > EPS_PD_RELATIVE * np.max(np.abs(lam), axis=-1)
    return _spectral(Q, np.log(np.where(ok[..., None], lam, 1.0))), ok, lam[..., -1]


def log_psym_masked(P: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """主对数，不抛异常：返回 (log P, ok)，ok=False 处的结果无意义"""
    flat, batch = _flatten(sym(P))
    out, ok, _ = _log_psym_flat(flat)
    return out.reshape(P.shape), ok.reshape(batch)


def matrix_log_psym(P) -> np.ndarray:
    """正定对称矩阵的主对数 log P = Σ log λᵢ Nᵢ⊗Nᵢ

    二维用闭式 log P = ½(log λ₁ + log λ₂)𝟙 + f·(P − ½ tr P·𝟙)，f 为相对对数差。

    Args:
        P: 对称正定矩阵（批）

    Returns:
        对称矩阵 log P

    Raises:
        NotPositiveDefiniteError: 最小特征值 ≤ 1e-12·max|λ|
    """
    P = as_matrix(P, symmetric=True)
    flat, batch = _flatten(sym(P))
    out, ok, lam_min = _log_psym_flat(flat)
    if not np.all(ok):
        _raise_not_pd(lam_min, ok)
    return out.reshape(P.shape)


def matrix_exp_sym(S) -> np.ndarray:
    """对称矩阵的指数，结果对称正定"""
    S = as_matrix(S, symmetric=True)
    flat, batch = _flatten(sym(S))
    if S.shape[-1] == 2:
        a, b, c, m, d, r = _split2(flat)
        em = np.exp(m)
        out = (em * np.cosh(r))[..., None, None] * np.eye(2) + (em * _sinhc(r))[..., None, None] * _traceless2(d, b)
    else:
        lam, Q = _eigh3(flat)
        out = _spectral(Q, np.exp(lam))
    return out.reshape(S.shape)


def check_orientation(F: np.ndarray) -> np.ndarray:
    J = np.asarray(det(F))
    if np.any(J <= 0):
        raise OrientationError(J.ravel()[np.flatnonzero(J.ravel() <= 0)[0]])
    return J


def polar_decompose(F) -> PolarFactors:
    """右极分解 F = R·U

    二维 R 由 F 的“旋转部分”闭式给出；三维由 C 的谱分解得到 U⁻¹，再做一步 Newton 正交化。

    Args:
        F: det F > 0 的矩阵（批）

    Returns:
        PolarFactors(R, U)

    Raises:
        OrientationError: det F ≤ 0
    """
    F = as_matrix(F)
    check_orientation(F)
    flat, batch = _flatten(F)
    if F.shape[-1] == 2:
        a, b, c, d = flat[:, 0, 0], flat[:, 0, 1], flat[:, 1, 0], flat[:, 1, 1]
        s = a + d
        w = c - b
        norm = np.hypot(s, w)
        R = np.stack([np.stack([s, -w], -1), np.stack([w, s], -1)], -2) / norm[:, None, None]
    else:
        lam, Q = _eigh3(sym(transpose(flat) @ flat))
        ok = lam[:, -1] > EPS_PD_RELATIVE * lam[:, 0]
        if not np.all(ok):
            _raise_not_pd(lam[:, -1], ok)
        R = flat @ _spectral(Q, 1.0 / np.sqrt(lam))
        R = 0.5 * (R + transpose(np.linalg.inv(R)))
    U = sym(transpose(R) @ flat)
    return PolarFactors(R=R.reshape(F.shape), U=U.reshape(F.shape))


def log_stretch_masked(F: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """log U = ½ log(FᵀF)；det F ≤ 0 或 C 数值奇异处 ok=False"""
    F = np.asarray(F, dtype=float)
    flat, batch = _flatten(F)
    valid = det(flat) > 0
    safe = np.where(valid[:, None, None], flat, np.eye(F.shape[-1]))
    logC, ok, _ = _log_psym_flat(sym(transpose(safe) @ safe))
    return (0.5 * logC).reshape(F.shape), (valid & ok).reshape(batch)


def log_stretch(F) -> np.ndarray:
    """Hencky 应变 log U = ½ log C

    Raises:
        OrientationError: det F ≤ 0
        NotPositiveDefiniteError: C 数值奇异
    """
    F = as_matrix(F)
    check_orientation(F)
    return 0.5 * matrix_log_psym(sym(transpose(F) @ F))

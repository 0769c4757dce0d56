"""秩一凸性 / Legendre–Hadamard 椭圆性扫描

对任意 EnergyModel 做方向二阶导数扫描，并提供简单剪切反例曲线的闭式公式与第一性原理对照。
"""
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.optimize import minimize_scalar

from .config import DEFAULT_SETTINGS
from .energy_models import (AdditiveLogComposite, EnergyModel, Hyperelastic, LogStrainEnergyKind,
                            MultiplicativeComposite, MultiplicativePlastic)
from .errors import InvalidArgumentError
from .math_utils import fibonacci_hemisphere, half_circle_angles, unit_vector_2d
from .tensor_kernels import check_orientation, as_matrix, det, frobenius_norm, sym_eigen

logger = logging.getLogger(__name__)

SECOND_DIFF_STEP = np.finfo(float).eps ** 0.25
# 传输恒等式两边探针点相同，截断误差一致，只剩舍入误差
TRANSPORT_STEP = 1e-2
UNIT_TOL = 1e-12
REFERENCE_INTERVAL = tuple(DEFAULT_SETTINGS["reference_interval"])


class Verdict(Enum):
    ELLIPTIC = "elliptic"
    VIOLATED = "violated"
    INCONCLUSIVE = "inconclusive"


def _check_unit(v: np.ndarray, label: str) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    norms = np.linalg.norm(v, axis=-1)
    if np.any(np.abs(norms - 1.0) > UNIT_TOL):
        raise InvalidArgumentError(f"{label} must be a unit vector (norm {np.max(norms):.15g})")
    return v


@dataclass(frozen=True)
class RankOneProbe:
    """秩一探针：基点 F，方向 η⊗ξ，对称窗口半宽 t_window"""

    F: np.ndarray
    eta: np.ndarray
    xi: np.ndarray
    t_window: float

    def __post_init__(self):
        F = as_matrix(self.F)
        _check_unit(self.eta, "eta")
        _check_unit(self.xi, "xi")
        if not self.t_window > 0:
            raise InvalidArgumentError("t_window must be positive")
        # det(F + tη⊗ξ) 关于 t 是仿射的，检查端点即可
        for t in (-self.t_window, 0.0, self.t_window):
            if det(self.at(t)) <= 0:
                raise InvalidArgumentError(f"det(F + t·eta⊗xi) <= 0 at t = {t:g}")
        object.__setattr__(self, "F", F)

    @property
    def direction(self) -> np.ndarray:
        return np.outer(self.eta, self.xi)

    def at(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        return np.asarray(self.F, dtype=float) + t[..., None, None] * self.direction

    def line(self, model: EnergyModel, samples: int = 201) -> Tuple[np.ndarray, np.ndarray]:
        """沿窗口采样 h(t) = W(F + tη⊗ξ)"""
        t = np.linspace(-self.t_window, self.t_window, samples)
        return t, model.energy(self.at(t))


@dataclass
class Witness:
    eta: np.ndarray
    xi: np.ndarray
    F: np.ndarray
    q: float
    theta: Optional[float] = None
    phi: Optional[float] = None

    def to_dict(self) -> Dict[str, Any]:
        data = {"eta": self.eta.tolist(), "xi": self.xi.tolist(), "F": self.F.tolist(), "q": self.q}
        if self.theta is not None:
            data.update({"theta": self.theta, "phi": self.phi})
        return data


@dataclass
class EllipticityReport:
    """基点 F 处的椭圆性结论

    verdict == VIOLATED ⟺ min_q < −tol；witness 仅在 VIOLATED 时给出。
    """

    verdict: Verdict
    min_q: float
    tol: float
    samples: int
    F: np.ndarray
    minimizer: Witness
    max_abs_q: float
    witness: Optional[Witness] = None
    cells: Optional[np.ndarray] = None
    angles: Optional[np.ndarray] = None
    directions: Optional[np.ndarray] = None
    refined: bool = False

    @property
    def violated(self) -> bool:
        return self.verdict is Verdict.VIOLATED

    def to_dict(self) -> Dict[str, Any]:
        return {
            "verdict": self.verdict.value,
            "min_q": self.min_q,
            "tol_ell": self.tol,
            "max_abs_q": self.max_abs_q,
            "samples": self.samples,
            "refined": self.refined,
            "F": self.F.tolist(),
            "witness": self.witness.to_dict() if self.witness is not None else None,
        }

    def cell_header(self) -> List[str]:
        if self.angles is not None:
            return ["theta", "phi", "q"]
        return ["eta_index", "xi_index", "q"]

    def cell_rows(self) -> Iterable[Tuple[Any, Any, float]]:
        if self.cells is None:
            return
        count = self.cells.shape[0]
        for i in range(count):
            for j in range(count):
                if self.angles is not None:
                    yield self.angles[i], self.angles[j], self.cells[i, j]
                else:
                    yield i, j, self.cells[i, j]


def _second_differences(model: EnergyModel, F: np.ndarray, eta: np.ndarray, xi: np.ndarray,
                        step: float) -> np.ndarray:
    A = eta[..., :, None] * xi[..., None, :]
    W0 = model.energy(F)
    W_plus = model.energy(F + step * A)
    W_minus = model.energy(F - step * A)
    with np.errstate(invalid='ignore', over='ignore'):
        q = (W_plus - 2.0 * W0 + W_minus) / (step * step)
    finite = np.isfinite(W_plus) & np.isfinite(W_minus) & np.isfinite(W0)
    return np.where(finite, q, -np.inf)


def _q(model: EnergyModel, F: np.ndarray, eta: np.ndarray, xi: np.ndarray,
       step: Optional[float], exact: bool) -> np.ndarray:
    if exact:
        form = model.rank_one_quadratic_form(eta, xi)
        if form is not None:
            return np.asarray(form, dtype=float)
    if step is None:
        step = SECOND_DIFF_STEP * max(1.0, float(frobenius_norm(F)))
    return _second_differences(model, F, eta, xi, step)


def directional_second_derivative(model: EnergyModel, F, eta, xi, step: Optional[float] = None,
                                  exact: bool = True) -> Union[float, np.ndarray]:
    """t ↦ W(F + tη⊗ξ) 在 t=0 处的二阶导数

    默认三点中心差分，步长 h₂ = eps^{1/4}·max(1, ‖F‖)；探针处能量为 +inf 时返回 −inf。
    模型若给出精确二次型（小应变模型），exact=True 时直接使用。

    Args:
        model: 能量模型
        F: 基点
        eta, xi: 单位向量（可批量，最后一维为分量）
        step: 覆盖默认步长
        exact: 是否优先使用精确二次型
    """
    F = as_matrix(F)
    eta = _check_unit(eta, "eta")
    xi = _check_unit(xi, "xi")
    q = _q(model, F, eta, xi, step, exact)
    if np.ndim(q) == 0:
        return float(q)
    return q


def _tolerance(q: np.ndarray, tol_relative: float, tol_floor: float) -> Tuple[float, float]:
    finite = q[np.isfinite(q)]
    max_abs = float(np.max(np.abs(finite))) if finite.size else 0.0
    return max(tol_relative * max_abs, tol_floor), max_abs


def _classify(min_q: float, tol: float, inconclusive_factor: float) -> Verdict:
    if min_q < -tol:
        return Verdict.VIOLATED
    if min_q < inconclusive_factor * tol:
        return Verdict.INCONCLUSIVE
    return Verdict.ELLIPTIC


def _refine_2d(model: EnergyModel, F: np.ndarray, theta: float, phi: float, width: float,
               step: float) -> Tuple[float, float, float]:
    # 每个角度各做一次局部黄金分割
    def q_at(th: float, ph: float) -> float:
        value = _q(model, F, unit_vector_2d(th)[None], unit_vector_2d(ph)[None], step, True)
        return float(np.asarray(value).ravel()[0])

    best = (q_at(theta, phi), theta, phi)
    for which in ("theta", "phi"):
        q0, th0, ph0 = best
        centre = th0 if which == "theta" else ph0
        objective = (lambda x: q_at(x, ph0)) if which == "theta" else (lambda x: q_at(th0, x))
        try:
            result = minimize_scalar(objective, bracket=(centre - width, centre, centre + width),
                                     method='golden', options={'xtol': 1e-8})
        except (ValueError, RuntimeError) as e:
            logger.debug(f"golden refinement in {which} skipped: {e}")
            continue
        if np.isfinite(result.fun) and result.fun < q0:
            best = (float(result.fun), float(result.x), ph0) if which == "theta" else (float(result.fun), th0, float(result.x))
    return best


def hemisphere_directions(count: int) -> np.ndarray:
    """三维方向集：Fibonacci 半球点加三个坐标轴"""
    return np.concatenate([fibonacci_hemisphere(count), np.eye(3)], axis=0)


def rank_one_scan(model: EnergyModel, F, angular_resolution: Optional[int] = None,
                  refine: Optional[bool] = None, keep_cells: bool = False,
                  settings: Optional[Dict[str, Any]] = None) -> EllipticityReport:
    """在角度网格上扫描方向二阶导数并给出椭圆性结论

    n=2：θ, φ ∈ [0, π) 均匀网格，最小格点附近做一次黄金分割细化；
    n=3：Fibonacci 半球方向集（含坐标轴），不细化。
    tol = max(tol_ell_relative·max|q|, tol_ell_floor)。
    """
    settings = {**DEFAULT_SETTINGS, **(settings or {})}
    F = as_matrix(F)
    check_orientation(F)
    n = F.shape[-1]
    if n != model.n:
        raise InvalidArgumentError(f"base point is {n}×{n} but model has n = {model.n}")
    if refine is None:
        refine = bool(settings["refine"])
    step = SECOND_DIFF_STEP * max(1.0, float(frobenius_norm(F)))

    angles = None
    if n == 2:
        count = int(angular_resolution or settings["angular_resolution"])
        if count < 4:
            raise InvalidArgumentError("angular_resolution must be at least 4")
        angles = half_circle_angles(count)
        directions = unit_vector_2d(angles)
    else:
        count = int(angular_resolution or settings["angular_resolution_3d"])
        directions = hemisphere_directions(count)
    m = directions.shape[0]
    eta = np.repeat(directions, m, axis=0)
    xi = np.tile(directions, (m, 1))
    q = _q(model, F, eta, xi, step, True).reshape(m, m)

    tol, max_abs = _tolerance(q, float(settings["tol_ell_relative"]), float(settings["tol_ell_floor"]))
    i, j = np.unravel_index(int(np.argmin(q)), q.shape)
    min_q = float(q[i, j])
    minimizer = Witness(eta=directions[i].copy(), xi=directions[j].copy(), F=F.copy(), q=min_q)
    if angles is not None:
        minimizer.theta, minimizer.phi = float(angles[i]), float(angles[j])

    refined = False
    if angles is not None and refine and np.isfinite(min_q):
        q_ref, th, ph = _refine_2d(model, F, angles[i], angles[j], np.pi / m, step)
        if q_ref < min_q:
            refined = True
            min_q = q_ref
            minimizer = Witness(eta=unit_vector_2d(th), xi=unit_vector_2d(ph), F=F.copy(), q=q_ref,
                                theta=float(th), phi=float(ph))

    verdict = _classify(min_q, tol, float(settings["inconclusive_factor"]))
    report = EllipticityReport(
        verdict=verdict, min_q=min_q, tol=tol, samples=int(q.size), F=F.copy(), minimizer=minimizer,
        max_abs_q=max_abs, witness=minimizer if verdict is Verdict.VIOLATED else None,
        cells=q if keep_cells else None, angles=angles if keep_cells else None,
        directions=directions if keep_cells else None, refined=refined)
    logger.debug(f"rank-one scan at F={F.tolist()}: {verdict.value}, min_q={min_q:.6g}, tol={tol:.3g}")
    return report


# ---------------------------------------------------------------- 直线凸性

@dataclass
class LineConvexityResult:
    convex: bool
    min_second_difference: float
    tol: float
    witness: Optional[Tuple[Tuple[float, float], ...]] = None
    witness_index: Optional[int] = None

    @property
    def verdict(self) -> str:
        return "convex" if self.convex else "nonconvex"

    def to_dict(self) -> Dict[str, Any]:
        return {"verdict": self.verdict, "min_second_difference": self.min_second_difference,
                "tol_line": self.tol,
                "witness": [list(p) for p in self.witness] if self.witness else None}


def line_convexity_check(samples: Union[Sequence[Tuple[float, float]], np.ndarray], h=None,
                         tol_relative: Optional[float] = None) -> LineConvexityResult:
    """相邻三点的二阶差分检验凸性

    非均匀网格上使用弦缺陷 2·[w·h₀ + (1−w)·h₂ − h₁]，均匀网格时等于 h₀ − 2h₁ + h₂。

    Args:
        samples: (t, h) 序列，或与 h 一起给出的 t 数组
        h: 可选的函数值数组
        tol_relative: tol_line = tol_relative·max|h|

    Raises:
        InvalidArgumentError: 少于 3 个点或 t 不严格递增
    """
    if tol_relative is None:
        tol_relative = float(DEFAULT_SETTINGS["tol_line_relative"])
    if h is None:
        data = np.asarray(samples, dtype=float)
        if data.ndim != 2 or data.shape[1] != 2:
            raise InvalidArgumentError("samples must be a sequence of (t, h) pairs")
        t, h = data[:, 0], data[:, 1]
    else:
        t = np.asarray(samples, dtype=float)
        h = np.asarray(h, dtype=float)
    if t.shape != h.shape or t.ndim != 1:
        raise InvalidArgumentError("t and h must be 1-d arrays of equal length")
    if t.size < 3:
        raise InvalidArgumentError(f"line convexity needs at least 3 samples, got {t.size}")
    if np.any(np.diff(t) <= 0):
        raise InvalidArgumentError("t must be strictly increasing")

    finite = h[np.isfinite(h)]
    tol = tol_relative * (float(np.max(np.abs(finite))) if finite.size else 0.0)
    w = (t[2:] - t[1:-1]) / (t[2:] - t[:-2])
    with np.errstate(invalid='ignore'):
        second = 2.0 * (w * h[:-2] + (1.0 - w) * h[2:] - h[1:-1])
    second = np.where(np.isnan(second), -np.inf, second)
    bad = np.flatnonzero(second < -tol)
    if bad.size == 0:
        return LineConvexityResult(True, float(np.min(second)), tol)
    k = int(bad[0])
    triple = tuple((float(t[k + d]), float(h[k + d])) for d in range(3))
    return LineConvexityResult(False, float(np.min(second)), tol, witness=triple, witness_index=k + 1)


# ---------------------------------------------------------------- 简单剪切反例

@dataclass
class SimpleShearKinematics:
    t: float
    U: np.ndarray
    R: np.ndarray
    logU: np.ndarray
    lambda1: float


def _lambda1(t):
    t = np.asarray(t, dtype=float)
    s = np.sqrt(t * t + 4.0)
    # t < 0 时用 2/(s − t) 避免相消
    return np.where(t >= 0, 0.5 * (s + t), 2.0 / (s - t))


def simple_shear_kinematics(t: float) -> SimpleShearKinematics:
    """F = 𝟙 + t e₁⊗e₂ 的闭式运动学

    U = (1/√(t²+4))[[2, t], [t, t²+2]]，R = (1/√(t²+4))[[2, t], [−t, 2]]，
    λ₁ = ½(√(t²+4) + t)，log U = (log λ₁/√(t²+4))[[−t, 2], [2, t]]。
    """
    t = float(t)
    s = math.sqrt(t * t + 4.0)
    lam1 = float(_lambda1(t))
    L = math.log(lam1)
    U = np.array([[2.0, t], [t, t * t + 2.0]]) / s
    R = np.array([[2.0, t], [-t, 2.0]]) / s
    logU = (L / s) * np.array([[-t, 2.0], [2.0, t]])
    return SimpleShearKinematics(t=t, U=U, R=R, logU=logU, lambda1=lam1)


def simple_shear(t) -> np.ndarray:
    """F(t) = 𝟙 + t e₁⊗e₂（可批量）"""
    t = np.asarray(t, dtype=float)
    F = np.broadcast_to(np.eye(2), t.shape + (2, 2)).copy()
    F[..., 0, 1] = t
    return F


def h_closed_form_paper(a: float, b: float, t):
    """反例曲线的闭式（分母 t²+4）

    h = exp(2 log²λ₁ − 2 (log λ₁/(t²+4))(−2at + 4b) + 2a² + 2b²)
    """
    t = np.asarray(t, dtype=float)
    L = np.log(_lambda1(t))
    value = np.exp(2.0 * L * L - 2.0 * (L / (t * t + 4.0)) * (-2.0 * a * t + 4.0 * b) + 2.0 * a * a + 2.0 * b * b)
    return float(value) if value.ndim == 0 else value


def counterexample_model(a: float, b: float) -> AdditiveLogComposite:
    """eH 等容部分 (μ = k = 1, n = 2)，E_p^log = [[a, b], [b, −a]]"""
    kind = LogStrainEnergyKind.exponentiated_iso(mu=1.0, k=1.0, n=2)
    return AdditiveLogComposite(kind, np.array([[a, b], [b, -a]], dtype=float))


def h_direct(a: float, b: float, t):
    """第一性原理求值：通过矩阵对数核计算 W(𝟙 + t e₁⊗e₂)，不用闭式"""
    t = np.asarray(t, dtype=float)
    value = counterexample_model(a, b).energy(simple_shear(t))
    return float(value) if np.ndim(value) == 0 else value


def _evenness_residual(h: np.ndarray) -> float:
    scale = float(np.max(np.abs(h))) if h.size else 1.0
    return float(np.max(np.abs(h - h[::-1]))) / max(scale, 1e-300)


@dataclass
class CounterexampleCurve:
    a: float
    b: float
    t_samples: np.ndarray
    h_paper: np.ndarray
    h_direct: np.ndarray
    paper_check: LineConvexityResult
    direct_check: LineConvexityResult
    evenness_paper: float
    evenness_direct: float
    settings: Dict[str, Any] = field(default_factory=dict)

    @property
    def discrepancy(self) -> float:
        """max|h_paper − h_direct| / max|h_paper|"""
        return float(np.max(np.abs(self.h_paper - self.h_direct)) / np.max(np.abs(self.h_paper)))

    @property
    def evenness_expected(self) -> bool:
        # b 项关于 t 是奇函数，只有 b = 0 时曲线是偶函数
        return self.b == 0.0

    def rows(self) -> Iterable[Tuple[float, float, float]]:
        return zip(self.t_samples, self.h_paper, self.h_direct)

    def to_dict(self) -> Dict[str, Any]:
        data = {
            "a": self.a,
            "b": self.b,
            "samples": int(self.t_samples.size),
            "h_paper": self.paper_check.to_dict(),
            "h_direct": self.direct_check.to_dict(),
            "evenness_residual": {"h_paper": self.evenness_paper, "h_direct": self.evenness_direct},
            "evenness_expected": self.evenness_expected,
            "discrepancy": self.discrepancy,
            "h_at_zero": {"h_paper": float(h_closed_form_paper(self.a, self.b, 0.0)),
                          "h_direct": float(h_direct(self.a, self.b, 0.0))},
        }
        if self.t_samples[0] <= 1.0 <= self.t_samples[-1]:
            data["h_at_one"] = {"h_paper": float(h_closed_form_paper(self.a, self.b, 1.0)),
                                "h_direct": float(h_direct(self.a, self.b, 1.0))}
        return data


def counterexample_curve(a: float, b: float, t_grid, tol_relative: Optional[float] = None) -> CounterexampleCurve:
    """在关于 0 对称的网格上采样两条曲线并检验凸性与偶性

    Raises:
        InvalidArgumentError: 网格不对称或少于 3 个点
    """
    t = np.asarray(t_grid, dtype=float)
    if t.ndim != 1 or t.size < 3:
        raise InvalidArgumentError("counterexample grid needs at least 3 samples")
    if not np.allclose(t, -t[::-1], rtol=0.0, atol=1e-12 * max(1.0, float(np.max(np.abs(t))))):
        raise InvalidArgumentError("counterexample grid must be symmetric about 0")
    hp = np.asarray(h_closed_form_paper(a, b, t))
    hd = np.asarray(h_direct(a, b, t))
    curve = CounterexampleCurve(
        a=float(a), b=float(b), t_samples=t, h_paper=hp, h_direct=hd,
        paper_check=line_convexity_check(t, hp, tol_relative),
        direct_check=line_convexity_check(t, hd, tol_relative),
        evenness_paper=_evenness_residual(hp), evenness_direct=_evenness_residual(hd))
    if curve.discrepancy > 1e-12:
        logger.info(f"h_paper and h_direct differ by {curve.discrepancy:.3e} (relative) for a={a}, b={b}")
    return curve


def frozen_identity_curvature(kind: LogStrainEnergyKind, ep_log) -> Tuple[float, np.ndarray, np.ndarray]:
    """加法对数复合模型在 F = 𝟙 处的最小秩一曲率（二维、仅等容部分）

    min q = μ·c·(1 − √2‖E_p‖)，指数族 c = e^{k‖E_p‖²}，二次族 c = 1；
    最小方向 η 为 E_p 最小特征值的特征向量，ξ ⊥ η。

    Returns:
        (min_q, eta, xi)
    """
    if kind.n != 2 or not kind.iso_only:
        raise InvalidArgumentError("closed-form identity curvature is available for 2D iso-only kinds")
    ep = as_matrix(ep_log, symmetric=True)
    norm = float(frobenius_norm(ep))
    factor = 1.0 if kind.is_quadratic else math.exp(kind.moduli.k * norm * norm)
    eig = sym_eigen(ep)
    eta = eig.eigenvectors[:, -1]
    xi = np.array([-eta[1], eta[0]])
    return kind.moduli.mu * factor * (1.0 - math.sqrt(2.0) * norm), eta, xi


# ---------------------------------------------------------------- 拉伸域扫描

def uniaxial_stretch_grid(values: Sequence[float], n: int = 3) -> List[Tuple[float, ...]]:
    return [(float(v),) + (1.0,) * (n - 1) for v in values]


def stretch_domain_scan(kind: LogStrainEnergyKind, stretch_grid: Sequence[Sequence[float]],
                        angular_resolution: Optional[int] = None,
                        settings: Optional[Dict[str, Any]] = None) -> Dict[Tuple[float, ...], EllipticityReport]:
    """对角拉伸 F = diag(λ₁, …) 上逐点扫描纯弹性模型"""
    model = Hyperelastic(kind)
    results: Dict[Tuple[float, ...], EllipticityReport] = {}
    for stretches in stretch_grid:
        key = tuple(float(v) for v in stretches)
        if len(key) != kind.n or min(key) <= 0:
            raise InvalidArgumentError(f"stretch {key} must have {kind.n} positive entries")
        results[key] = rank_one_scan(model, np.diag(key), angular_resolution=angular_resolution,
                                     settings=settings)
    return results


@dataclass
class EllipticInterval:
    lower: Optional[float]
    upper: Optional[float]
    contains_identity: bool
    reference: Tuple[float, float] = REFERENCE_INTERVAL

    @property
    def bounded(self) -> bool:
        return self.lower is not None and self.upper is not None

    @property
    def deviation(self) -> Tuple[Optional[float], Optional[float]]:
        lo = None if self.lower is None else self.lower - self.reference[0]
        hi = None if self.upper is None else self.upper - self.reference[1]
        return lo, hi

    def to_dict(self) -> Dict[str, Any]:
        return {"lower": self.lower, "upper": self.upper, "contains_identity": self.contains_identity,
                "bounded": self.bounded, "reference": list(self.reference),
                "deviation": list(self.deviation)}


def elliptic_interval(values: Sequence[float], reports: Sequence[EllipticityReport]) -> EllipticInterval:
    """单轴拉伸网格上包含 λ = 1 的椭圆区间；边界取相邻格点的中点，碰到网格端点则为 None"""
    values = np.asarray(values, dtype=float)
    order = np.argsort(values)
    values = values[order]
    elliptic = np.array([reports[k].verdict is Verdict.ELLIPTIC for k in order])
    centre = int(np.argmin(np.abs(values - 1.0)))
    if not elliptic[centre]:
        return EllipticInterval(None, None, False)
    lo = centre
    while lo > 0 and elliptic[lo - 1]:
        lo -= 1
    hi = centre
    while hi < values.size - 1 and elliptic[hi + 1]:
        hi += 1
    lower = 0.5 * (values[lo] + values[lo - 1]) if lo > 0 else None
    upper = 0.5 * (values[hi] + values[hi + 1]) if hi < values.size - 1 else None
    contains = values[lo] <= 1.0 <= values[hi]
    return EllipticInterval(lower=None if lower is None else float(lower),
                            upper=None if upper is None else float(upper), contains_identity=bool(contains))


# ---------------------------------------------------------------- 乘法输运恒等式

@dataclass
class TransportCheck:
    multiplicative: float
    hyperelastic: float
    zeta_norm: float

    @property
    def relative_residual(self) -> float:
        scale = max(abs(self.multiplicative), abs(self.hyperelastic), 1e-300)
        return abs(self.multiplicative - self.hyperelastic) / scale


def multiplicative_transport_check(kind: LogStrainEnergyKind, F, Fp, eta, xi,
                                   step: Optional[float] = None) -> TransportCheck:
    """(F + tη⊗ξ)F_p⁻¹ = F F_p⁻¹ + tη⊗(F_p⁻ᵀξ) 的可执行形式

    左边：乘法复合模型在 F 处沿 (η, ξ) 的二阶导数；
    右边：纯弹性模型在 F_e 处沿 (η, ξ′) 的二阶导数乘 ‖ζ‖²，ζ = F_p⁻ᵀξ，ξ′ = ζ/‖ζ‖。
    两边使用匹配的步长（h 与 h·‖ζ‖），使差分探针点相同；默认 h = 1e-2·max(1, ‖F‖)。
    """
    F = as_matrix(F)
    plastic = Fp if isinstance(Fp, MultiplicativePlastic) else MultiplicativePlastic(Fp)
    if step is None:
        step = TRANSPORT_STEP * max(1.0, float(frobenius_norm(F)))
    zeta = plastic.inverse.T @ np.asarray(xi, dtype=float)
    zeta_norm = float(np.linalg.norm(zeta))
    lhs = directional_second_derivative(MultiplicativeComposite(kind, plastic), F, eta, xi, step=step)
    rhs = directional_second_derivative(Hyperelastic(kind), F @ plastic.inverse, eta, zeta / zeta_norm,
                                        step=step * zeta_norm) * zeta_norm ** 2
    return TransportCheck(multiplicative=float(lhs), hyperelastic=float(rhs), zeta_norm=zeta_norm)

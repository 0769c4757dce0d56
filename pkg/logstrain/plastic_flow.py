"""三种塑性流动格式的应变驱动积分

小应变径向返回、加法对数返回映射、带 Eshelby 驱动应力的乘法流动；
每步记录 KKT 残差，并可在冻结塑性状态下探测椭圆性。
"""
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from .config import DEFAULT_SETTINGS
from .ellipticity_lab import EllipticityReport, Verdict, rank_one_scan
from .energy_models import (AdditiveLogComposite, AdditiveLogPlastic, EnergyModel, LogStrainEnergyKind,
                            Moduli, MultiplicativeComposite, MultiplicativePlastic, PlasticState,
                            SmallStrainPlastic, SmallStrainQuadratic, eshelby_from_log_strain,
                            what_hat_eval, what_hat_radial_stiffness, what_hat_stress)
from .errors import InvalidArgumentError, NonConvergenceError
from .math_utils import clamp, lerp
from .tensor_kernels import (as_matrix, check_orientation, det, deviatoric, frobenius_inner,
                             frobenius_norm, log_stretch, matrix_exp_sym, sym, trace)

logger = logging.getLogger(__name__)


class Formulation(Enum):
    SMALL_STRAIN = "small_strain"
    ADDITIVE_LOG = "additive_log"
    MULTIPLICATIVE = "multiplicative"

    @property
    def default_radius_factor(self) -> float:
        return float(DEFAULT_SETTINGS[f"radius_factor_{self.value}"])


@dataclass(frozen=True)
class YieldSurface:
    """‖dev Σ‖² ≤ factor·σ_y²，默认 factor = 2/3"""

    sigma_y: float
    radius_factor: float = 2.0 / 3.0

    def __post_init__(self):
        if not self.sigma_y > 0:
            raise InvalidArgumentError(f"sigma_y must be positive, got {self.sigma_y}")
        if not self.radius_factor > 0:
            raise InvalidArgumentError("radius_factor must be positive")

    @property
    def radius(self) -> float:
        return math.sqrt(self.radius_factor) * self.sigma_y

    @property
    def radius_squared(self) -> float:
        return self.radius_factor * self.sigma_y ** 2

    def value(self, stress) -> float:
        """χ(Σ) = ‖dev Σ‖² − ρ²"""
        dev = deviatoric(stress)
        return float(frobenius_inner(dev, dev)) - self.radius_squared

    def to_dict(self) -> Dict[str, Any]:
        return {"sigma_y": self.sigma_y, "radius_factor": self.radius_factor, "radius": self.radius}


@dataclass
class FlowState:
    plastic: PlasticState
    accumulated_multiplier: float = 0.0
    last_stress: Optional[np.ndarray] = None

    @classmethod
    def initial(cls, formulation: Formulation, n: int) -> 'FlowState':
        plastic = {Formulation.SMALL_STRAIN: SmallStrainPlastic,
                   Formulation.ADDITIVE_LOG: AdditiveLogPlastic,
                   Formulation.MULTIPLICATIVE: MultiplicativePlastic}[formulation].zero(n)
        return cls(plastic=plastic)


@dataclass
class StepResult:
    """一步积分的结果

    stress 为该格式的驱动应力（Σ_lin / Σ / Σ_E）；yield_value = ‖dev Σ‖² − ρ²。
    """

    t: float
    stress: np.ndarray
    plastic: PlasticState
    lambda_plus: float
    yield_value: float
    radius_squared: float
    delta_gamma: float = 0.0
    dissipation: float = 0.0
    energy: float = 0.0
    plastic_step: bool = False
    iterations: int = 0
    F: Optional[np.ndarray] = None
    state: Optional[FlowState] = None
    ellipticity: Optional[EllipticityReport] = None

    @property
    def kkt(self) -> Dict[str, float]:
        return {"yield_residual": max(self.yield_value, 0.0),
                "complementarity_residual": abs(self.lambda_plus * self.yield_value)}

    @property
    def verdict(self) -> str:
        return self.ellipticity.verdict.value if self.ellipticity is not None else "skipped"


@dataclass
class KKTCheck:
    passed: bool
    failures: List[str] = field(default_factory=list)
    details: Dict[str, float] = field(default_factory=dict)


def kkt_check(result: StepResult, tol: Optional[float] = None) -> KKTCheck:
    """λ⁺ ≥ 0，χ ≤ tol，|λ⁺·χ| ≤ tol；默认 tol = 1e-8·ρ²（失败时返回而不抛出）"""
    if tol is None:
        tol = float(DEFAULT_SETTINGS["kkt_tol_relative"]) * result.radius_squared
    failures = []
    if result.lambda_plus < 0:
        failures.append("multiplier")
    if result.yield_value > tol:
        failures.append("yield")
    if abs(result.lambda_plus * result.yield_value) > tol:
        failures.append("complementarity")
    details = {"lambda_plus": result.lambda_plus, "yield_value": result.yield_value, "tol": tol,
               **result.kkt}
    return KKTCheck(passed=not failures, failures=failures, details=details)


# ---------------------------------------------------------------- 标量 Newton

def safeguarded_newton(phi: Callable[[float], float], dphi: Callable[[float], float],
                       lo: float, hi: float, x0: Optional[float] = None, tol: float = 1e-12,
                       max_iter: int = 100, patience: int = 25) -> Tuple[float, int, float]:
    """在 [lo, hi] 上求单调递减函数 φ 的根

    要求 φ(lo) ≥ 0 ≥ φ(hi)。Newton 步落在区间外时取中点；
    连续 patience 次 Newton 迭代未使 |φ| 减半后改用二分。

    Returns:
        (根, 迭代次数, |φ(根)|)

    Raises:
        NonConvergenceError: max_iter 次后仍未收敛
    """
    x = clamp(lo if x0 is None else x0, lo, hi)
    best = math.inf
    unproductive = 0
    bisecting = False
    f = math.inf
    for iteration in range(1, max_iter + 1):
        f = phi(x)
        if abs(f) <= tol:
            return x, iteration, abs(f)
        if f > 0:
            lo = x
        else:
            hi = x
        if hi - lo <= 4.0 * np.finfo(float).eps * max(1.0, abs(hi)):
            return x, iteration, abs(f)
        if abs(f) < 0.5 * best:
            unproductive = 0
        else:
            unproductive += 1
        best = min(best, abs(f))
        if not bisecting and unproductive >= patience:
            bisecting = True
            logger.warning(f"Newton stalled after {iteration} iterations, falling back to bisection")
        step_ok = False
        if not bisecting:
            slope = dphi(x)
            if slope != 0 and np.isfinite(slope):
                x_new = x - f / slope
                step_ok = lo < x_new < hi
        if not step_ok:
            x_new = 0.5 * (lo + hi)
        x = x_new
    raise NonConvergenceError(residual=abs(f), iterations=max_iter)


def _solver_options(settings: Optional[Dict[str, Any]]) -> Dict[str, Any]:
    settings = {**DEFAULT_SETTINGS, **(settings or {})}
    return {"max_iter": int(settings["newton_max_iter"]), "patience": int(settings["newton_patience"]),
            "consistency_tol": float(settings["consistency_tol"]),
            "direction_max_iter": int(settings["direction_max_iter"])}


def _norm(A) -> float:
    return float(frobenius_norm(A))


# ---------------------------------------------------------------- 小应变

def radial_return_small_strain(eps_trial, state: FlowState, moduli: Moduli, yield_surface: YieldSurface,
                               dt: float = 1.0, t: float = 0.0) -> StepResult:
    """小应变理想塑性的闭式径向返回

    Σ = 2μ(ε − ε_p) + λ tr(ε − ε_p)𝟙；超出屈服面时 Δε_p = γ·N，
    N = dev Σ_trial/‖dev Σ_trial‖，γ = (‖dev Σ_trial‖ − ρ)/(2μ)。
    """
    if not isinstance(state.plastic, SmallStrainPlastic):
        raise InvalidArgumentError("radial_return_small_strain needs a small-strain plastic state")
    eps = sym(as_matrix(eps_trial, symmetric=True))
    n = eps.shape[-1]
    mu = moduli.mu
    lam = moduli.lame_lambda(n)
    eps_p = state.plastic.matrix
    rho = yield_surface.radius

    def stress_of(e):
        return 2.0 * mu * e + lam * float(trace(e)) * np.eye(n)

    stress = stress_of(eps - eps_p)
    dev = deviatoric(stress)
    dev_norm = _norm(dev)
    gamma = 0.0
    plastic = state.plastic
    dissipation = 0.0
    if dev_norm > rho:
        gamma = (dev_norm - rho) / (2.0 * mu)
        N = dev / dev_norm
        plastic = SmallStrainPlastic(deviatoric(eps_p + gamma * N))
        stress = stress_of(eps - plastic.matrix)
        dissipation = float(frobenius_inner(stress, plastic.matrix - eps_p))
    e = eps - plastic.matrix
    energy = mu * float(frobenius_inner(e, e)) + 0.5 * lam * float(trace(e)) ** 2
    return _finish(t, stress, plastic, gamma, dt, yield_surface, state, dissipation, energy, eps, 0)


def _finish(t: float, stress: np.ndarray, plastic: PlasticState, gamma: float, dt: float,
            yield_surface: YieldSurface, state: FlowState, dissipation: float, energy: float,
            F: Optional[np.ndarray], iterations: int) -> StepResult:
    if not dt > 0:
        raise InvalidArgumentError(f"time increment must be positive, got {dt}")
    lambda_plus = gamma / dt
    new_state = FlowState(plastic=plastic, accumulated_multiplier=state.accumulated_multiplier + gamma,
                          last_stress=stress)
    return StepResult(t=t, stress=stress, plastic=plastic, lambda_plus=lambda_plus,
                      yield_value=yield_surface.value(stress), radius_squared=yield_surface.radius_squared,
                      delta_gamma=gamma, dissipation=dissipation, energy=energy, plastic_step=gamma > 0,
                      iterations=iterations, F=F, state=new_state)


def _consistency_root(kind: LogStrainEnergyKind, s_trial: float, rho: float,
                      options: Dict[str, Any]) -> Tuple[float, int]:
    """求 Δγ ∈ [0, s_trial] 使 τ(s_trial − Δγ) = ρ；二次族为闭式"""
    if kind.is_quadratic:
        return s_trial - rho / (2.0 * kind.moduli.mu), 0

    def phi(gamma: float) -> float:
        return float(what_hat_radial_stiffness(kind, s_trial - gamma)[0]) - rho

    def dphi(gamma: float) -> float:
        return -float(what_hat_radial_stiffness(kind, s_trial - gamma)[1])

    gamma, iterations, _ = safeguarded_newton(
        phi, dphi, 0.0, s_trial, 0.0, tol=options["consistency_tol"] * max(rho, 1.0),
        max_iter=options["max_iter"], patience=options["patience"])
    return gamma, iterations


# ---------------------------------------------------------------- 加法对数

def additive_log_return_map(F, state: FlowState, kind: LogStrainEnergyKind, yield_surface: YieldSurface,
                            dt: float = 1.0, t: float = 0.0,
                            settings: Optional[Dict[str, Any]] = None) -> StepResult:
    """对数应变空间的向后 Euler 返回映射

    E_trial = log U − E_p^log；Σ_trial = DŴ(E_trial)。
    返回方向 N = dev Σ/‖dev Σ‖ 在返回点求值，由径向结构与试探方向一致。
    """
    if not isinstance(state.plastic, AdditiveLogPlastic):
        raise InvalidArgumentError("additive_log_return_map needs an additive-log plastic state")
    F = as_matrix(F)
    options = _solver_options(settings)
    ep = state.plastic.matrix
    E = log_stretch(F) - ep
    stress = what_hat_stress(kind, E)
    dev = deviatoric(stress)
    dev_norm = _norm(dev)
    rho = yield_surface.radius
    gamma = 0.0
    iterations = 0
    plastic = state.plastic
    dissipation = 0.0
    if dev_norm > rho:
        N = dev / dev_norm
        if kind.is_quadratic:
            gamma = (dev_norm - rho) / (2.0 * kind.moduli.mu)
        else:
            gamma, iterations = _consistency_root(kind, _norm(deviatoric(E)), rho, options)
        plastic = AdditiveLogPlastic(deviatoric(ep + gamma * N))
        E = E + ep - plastic.matrix
        stress = what_hat_stress(kind, E)
        dissipation = float(frobenius_inner(stress, plastic.matrix - ep))
    energy = float(what_hat_eval(kind, E))
    return _finish(t, stress, plastic, gamma, dt, yield_surface, state, dissipation, energy, F, iterations)


# ---------------------------------------------------------------- 乘法

def _elastic_log_strain(Fe: np.ndarray) -> np.ndarray:
    return log_stretch(Fe)


def multiplicative_flow_step(F, state: FlowState, kind: LogStrainEnergyKind, yield_surface: YieldSurface,
                             dt: float = 1.0, t: float = 0.0,
                             settings: Optional[Dict[str, Any]] = None) -> StepResult:
    """乘法分解下的半隐式指数更新

    F_e,trial = F·F_p⁻¹；驱动应力为 Eshelby 张量 Σ_E。屈服时 F_p,new = exp(Δγ·N)·F_p,old，
    N = dev Σ_E/‖dev Σ_E‖ 在收敛状态求值，Δγ 由完整运动学下的一致性条件经安全 Newton 求得。
    """
    if not isinstance(state.plastic, MultiplicativePlastic):
        raise InvalidArgumentError("multiplicative_flow_step needs a multiplicative plastic state")
    F = as_matrix(F)
    check_orientation(F)
    options = _solver_options(settings)
    n = F.shape[-1]
    fp_old = state.plastic.matrix
    fe_trial = F @ state.plastic.inverse
    E_trial = _elastic_log_strain(fe_trial)
    stress = eshelby_from_log_strain(kind, E_trial)
    dev_norm = _norm(deviatoric(stress))
    rho = yield_surface.radius
    if dev_norm <= rho:
        energy = float(what_hat_eval(kind, E_trial))
        return _finish(t, stress, state.plastic, 0.0, dt, yield_surface, state, 0.0, energy, F, 0)

    N = deviatoric(stress) / dev_norm
    s_trial = _norm(deviatoric(E_trial))
    gamma_max = s_trial
    gamma = 0.0
    iterations = 0
    for _ in range(options["direction_max_iter"]):
        def elastic_state(g: float, direction=N) -> Tuple[np.ndarray, np.ndarray]:
            fe = fe_trial @ matrix_exp_sym(-g * direction)
            E = _elastic_log_strain(fe)
            return E, eshelby_from_log_strain(kind, E)

        def phi(g: float) -> float:
            return _norm(deviatoric(elastic_state(g)[1])) - rho

        def dphi(g: float) -> float:
            s = max(s_trial - g, 0.0)
            return -float(what_hat_radial_stiffness(kind, s)[1])

        gamma, used, _ = safeguarded_newton(
            phi, dphi, 0.0, gamma_max, gamma, tol=options["consistency_tol"] * max(rho, 1.0),
            max_iter=options["max_iter"], patience=options["patience"])
        iterations += used
        E_new, stress = elastic_state(gamma)
        N_new = deviatoric(stress) / _norm(deviatoric(stress))
        if _norm(N_new - N) <= 1e-12:
            break
        N = N_new

    fp_new = matrix_exp_sym(gamma * N) @ fp_old
    fp_new = fp_new / det(fp_new) ** (1.0 / n)
    plastic = MultiplicativePlastic(fp_new)
    E_new = _elastic_log_strain(F @ plastic.inverse)
    stress = eshelby_from_log_strain(kind, E_new)
    dissipation = gamma * float(frobenius_inner(stress, N))
    energy = float(what_hat_eval(kind, E_new))
    return _finish(t, stress, plastic, gamma, dt, yield_surface, state, dissipation, energy, F, iterations)


# ---------------------------------------------------------------- 路径驱动

@dataclass
class PathSpec:
    """有序样本 (tᵢ, Fᵢ)；小应变格式也可直接给 εᵢ

    strain_measure 决定小应变格式从 F 读取的应变："linear" 为 sym(F − 𝟙)，"log" 为 log U。
    """

    times: Sequence[float]
    formulation: Formulation
    kind: LogStrainEnergyKind
    yield_surface: YieldSurface
    deformations: Optional[Sequence[np.ndarray]] = None
    strains: Optional[Sequence[np.ndarray]] = None
    strain_measure: str = "linear"
    initial_plastic: Optional[PlasticState] = None

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        if self.times.ndim != 1 or self.times.size == 0:
            raise InvalidArgumentError("path needs at least one sample")
        if np.any(np.diff(self.times) <= 0):
            raise InvalidArgumentError("path times must be strictly increasing")
        if self.deformations is None and self.strains is None:
            raise InvalidArgumentError("path needs deformation gradients or strains")
        if self.strains is not None and self.formulation is not Formulation.SMALL_STRAIN:
            raise InvalidArgumentError("strain samples are only accepted by the small-strain formulation")
        if self.strain_measure not in ("linear", "log"):
            raise InvalidArgumentError(f"unknown strain measure {self.strain_measure!r}")
        if self.deformations is not None:
            self.deformations = [as_matrix(F) for F in self.deformations]
            if len(self.deformations) != self.times.size:
                raise InvalidArgumentError("times and deformation samples differ in length")
            for i, F in enumerate(self.deformations):
                if F.shape != (self.kind.n, self.kind.n):
                    raise InvalidArgumentError(f"sample {i} has shape {F.shape}, expected n = {self.kind.n}")
                if det(F) <= 0:
                    raise InvalidArgumentError(f"sample {i} has det F <= 0")
        if self.strains is not None:
            self.strains = [as_matrix(e, symmetric=True) for e in self.strains]
            if len(self.strains) != self.times.size:
                raise InvalidArgumentError("times and strain samples differ in length")

    def with_formulation(self, formulation: Formulation, yield_surface: Optional[YieldSurface] = None,
                         strain_measure: Optional[str] = None) -> 'PathSpec':
        return PathSpec(times=self.times, formulation=formulation, kind=self.kind,
                        yield_surface=yield_surface or self.yield_surface, deformations=self.deformations,
                        strains=self.strains if formulation is Formulation.SMALL_STRAIN else None,
                        strain_measure=strain_measure or self.strain_measure)

    def refined(self) -> 'PathSpec':
        """相邻样本之间插入中点（F 线性插值）"""
        times = [self.times[0]]
        deformations = [self.deformations[0]] if self.deformations is not None else None
        strains = [self.strains[0]] if self.strains is not None else None
        for i in range(1, self.times.size):
            times.extend([lerp(self.times[i - 1], self.times[i], 0.5), self.times[i]])
            if deformations is not None:
                deformations.extend([lerp(self.deformations[i - 1], self.deformations[i], 0.5),
                                     self.deformations[i]])
            if strains is not None:
                strains.extend([lerp(self.strains[i - 1], self.strains[i], 0.5), self.strains[i]])
        return PathSpec(times=times, formulation=self.formulation, kind=self.kind,
                        yield_surface=self.yield_surface, deformations=deformations, strains=strains,
                        strain_measure=self.strain_measure, initial_plastic=self.initial_plastic)

    def __len__(self) -> int:
        return int(self.times.size)


@dataclass
class PathResult:
    formulation: Formulation
    steps: List[StepResult]

    def __iter__(self) -> Iterator[StepResult]:
        return iter(self.steps)

    def __len__(self) -> int:
        return len(self.steps)

    def __getitem__(self, index):
        return self.steps[index]

    @property
    def first_violation(self) -> Optional[int]:
        for index, step in enumerate(self.steps):
            if step.ellipticity is not None and step.ellipticity.verdict is Verdict.VIOLATED:
                return index
        return None

    @property
    def final_state(self) -> FlowState:
        return self.steps[-1].state

    def max_kkt(self) -> Dict[str, float]:
        return {"yield_residual": max(s.kkt["yield_residual"] for s in self.steps),
                "complementarity_residual": max(s.kkt["complementarity_residual"] for s in self.steps)}

    def to_dict(self) -> Dict[str, Any]:
        first = self.first_violation
        return {
            "formulation": self.formulation.value,
            "steps": len(self.steps),
            "plastic_steps": sum(1 for s in self.steps if s.plastic_step),
            "first_violation": None if first is None else {"step": first, "t": self.steps[first].t},
            "max_kkt": self.max_kkt(),
            "total_dissipation": sum(s.dissipation for s in self.steps),
            "final_plastic": self.final_state.plastic.to_dict(),
            "accumulated_multiplier": self.final_state.accumulated_multiplier,
        }


def frozen_model(formulation: Formulation, kind: LogStrainEnergyKind, plastic: PlasticState) -> EnergyModel:
    """冻结塑性状态下的纯弹性复合模型"""
    if formulation is Formulation.SMALL_STRAIN:
        return SmallStrainQuadratic(kind.moduli.mu, kind.moduli.lame_lambda(kind.n), plastic, n=kind.n)
    if formulation is Formulation.ADDITIVE_LOG:
        return AdditiveLogComposite(kind, plastic)
    return MultiplicativeComposite(kind, plastic)


def _step(path: PathSpec, index: int, state: FlowState, dt: float,
          settings: Optional[Dict[str, Any]]) -> StepResult:
    t = float(path.times[index])
    if path.formulation is Formulation.SMALL_STRAIN:
        if path.strains is not None:
            eps = path.strains[index]
        elif path.strain_measure == "log":
            eps = log_stretch(path.deformations[index])
        else:
            eps = sym(path.deformations[index] - np.eye(path.kind.n))
        result = radial_return_small_strain(eps, state, path.kind.moduli, path.yield_surface, dt, t)
        result.F = path.deformations[index] if path.deformations is not None else np.eye(path.kind.n) + eps
        return result
    F = path.deformations[index]
    if path.formulation is Formulation.ADDITIVE_LOG:
        return additive_log_return_map(F, state, path.kind, path.yield_surface, dt, t, settings)
    return multiplicative_flow_step(F, state, path.kind, path.yield_surface, dt, t, settings)


def drive_path(path: PathSpec, probe_ellipticity: bool = False, angular_resolution: Optional[int] = None,
               settings: Optional[Dict[str, Any]] = None) -> PathResult:
    """按顺序积分路径；probe_ellipticity 时每步对冻结复合模型在当前 F 处做秩一扫描

    Raises:
        NonConvergenceError: 某步不收敛，带步号
    """
    state = FlowState(plastic=path.initial_plastic) if path.initial_plastic is not None \
        else FlowState.initial(path.formulation, path.kind.n)
    times = path.times
    steps: List[StepResult] = []
    for index in range(times.size):
        if times.size == 1:
            dt = 1.0
        elif index == 0:
            dt = float(times[1] - times[0])
        else:
            dt = float(times[index] - times[index - 1])
        try:
            result = _step(path, index, state, dt, settings)
        except NonConvergenceError as e:
            raise e.at_step(index) from e
        if probe_ellipticity:
            model = frozen_model(path.formulation, path.kind, result.plastic)
            result.ellipticity = rank_one_scan(model, result.F, angular_resolution=angular_resolution,
                                               settings=settings)
        logger.debug(f"step {index} t={result.t:g}: lambda+={result.lambda_plus:.6g}, verdict={result.verdict}")
        steps.append(result)
        state = result.state
    return PathResult(formulation=path.formulation, steps=steps)


def step_size_study(path: PathSpec, levels: int = 3,
                    settings: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
    """逐级减半时间步长，报告最终塑性状态的变化（一阶积分器应按 O(dt) 缩小）"""
    if levels < 2:
        raise InvalidArgumentError("step size study needs at least 2 levels")
    finals: List[np.ndarray] = []
    dts: List[float] = []
    current = path
    for _ in range(levels):
        result = drive_path(current, settings=settings)
        finals.append(np.array(result.final_state.plastic.matrix))
        dts.append(float(np.max(np.diff(current.times))) if len(current) > 1 else 1.0)
        current = current.refined()
    differences = [_norm(finals[i + 1] - finals[i]) for i in range(levels - 1)]
    ratios = [differences[i] / differences[i + 1] if differences[i + 1] > 0 else math.inf
              for i in range(len(differences) - 1)]
    return {"dt": dts, "differences": differences, "ratios": ratios,
            "final_plastic": [f.tolist() for f in finals]}


def shear_cycle(t_max: float, load_steps: int, unload_steps: int, n: int = 2) -> Tuple[np.ndarray, List[np.ndarray]]:
    """简单剪切加载到 t_max 再卸载回 0：返回 (时间, F 序列)"""
    if load_steps < 1 or unload_steps < 1:
        raise InvalidArgumentError("shear cycle needs at least one load and one unload step")
    amounts = list(np.linspace(0.0, t_max, load_steps + 1)) + list(np.linspace(t_max, 0.0, unload_steps + 1)[1:])
    deformations = []
    for gamma in amounts:
        F = np.eye(n)
        F[0, 1] = gamma
        deformations.append(F)
    return np.arange(len(amounts), dtype=float), deformations

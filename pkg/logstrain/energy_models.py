"""能量模型目录

对数应变核心函数 Ŵ（二次 Hencky、指数 Hencky），以及建立在 F 上的复合模型：
纯弹性、加法对数、乘法分解、Saint-Venant–Kirchhoff、小应变。
另外提供有限差分 Piola 应力、Cauchy 应力、Eshelby 张量和一维玩具能量。
"""
import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, Optional, Union

import numpy as np

from .errors import BoundaryProximityError, DomainError, InvalidArgumentError
from .tensor_kernels import (as_matrix, det, deviatoric, frobenius_inner, frobenius_norm,
                             log_stretch_masked, matrix_exp_sym, skew, sym, trace, transpose)

logger = logging.getLogger(__name__)

TRACE_TOL = 1e-12
UNIMODULAR_TOL = 1e-10
ASYMMETRY_TOL = 1e-6
PIOLA_STEP = np.cbrt(np.finfo(float).eps)


class EnergyFamily(Enum):
    QUADRATIC_HENCKY = "quadratic_hencky"
    EXPONENTIATED_HENCKY = "exponentiated_hencky"


@dataclass(frozen=True)
class Moduli:
    """材料常数

    mu: 剪切模量；kappa: 体积模量；lam: 第一 Lamé 常数（二维必须显式给出）；
    k, khat: 指数 Hencky 的无量纲参数。
    """

    mu: float
    kappa: float
    lam: Optional[float] = None
    k: float = 1.0
    khat: float = 1.0

    def __post_init__(self):
        if not (self.mu > 0):
            raise InvalidArgumentError(f"mu must be positive, got {self.mu}")
        if not (self.kappa > 0):
            raise InvalidArgumentError(f"kappa must be positive, got {self.kappa}")
        if self.k < 0 or self.khat < 0:
            raise InvalidArgumentError("k and khat must be non-negative")

    def lame_lambda(self, n: int) -> float:
        """第一 Lamé 常数；三维可由 κ − 2μ/3 导出，二维没有默认换算"""
        if self.lam is not None:
            return float(self.lam)
        if n == 3:
            return self.kappa - 2.0 * self.mu / 3.0
        raise InvalidArgumentError("lambda must be given explicitly for n = 2")

    def to_dict(self) -> Dict[str, Any]:
        return {"mu": self.mu, "kappa": self.kappa, "lambda": self.lam, "k": self.k, "khat": self.khat}


@dataclass(frozen=True)
class LogStrainEnergyKind:
    """对数应变能量 Ŵ 的种类

    iso_only=True 时略去体积部分（只保留 ‖dev E‖² 项）。
    """

    family: EnergyFamily
    moduli: Moduli
    n: int = 3
    iso_only: bool = False

    def __post_init__(self):
        if self.n not in (2, 3):
            raise InvalidArgumentError(f"dimension must be 2 or 3, got {self.n}")
        if self.family is EnergyFamily.EXPONENTIATED_HENCKY:
            if self.moduli.k == 0 or (self.moduli.khat == 0 and not self.iso_only):
                raise InvalidArgumentError("exponentiated Hencky needs k > 0 and khat > 0")
            if self.n == 2 and (self.moduli.k < 0.25 or (self.moduli.khat < 0.125 and not self.iso_only)):
                logger.warning(f"k={self.moduli.k}, khat={self.moduli.khat} is outside the "
                               f"rank-one convex regime k >= 1/4, khat >= 1/8")

    @classmethod
    def exponentiated_iso(cls, mu: float = 1.0, k: float = 1.0, n: int = 2) -> 'LogStrainEnergyKind':
        """只含等容部分的指数 Hencky 能量 (μ/k)·e^{k‖dev E‖²}"""
        return cls(EnergyFamily.EXPONENTIATED_HENCKY, Moduli(mu=mu, kappa=1.0, k=k), n=n, iso_only=True)

    @classmethod
    def quadratic(cls, mu: float = 1.0, kappa: float = 1.0, n: int = 3) -> 'LogStrainEnergyKind':
        return cls(EnergyFamily.QUADRATIC_HENCKY, Moduli(mu=mu, kappa=kappa), n=n)

    @property
    def is_quadratic(self) -> bool:
        return self.family is EnergyFamily.QUADRATIC_HENCKY

    def to_dict(self) -> Dict[str, Any]:
        return {"family": self.family.value, "n": self.n, "iso_only": self.iso_only, **self.moduli.to_dict()}


def _frozen(matrix) -> np.ndarray:
    array = np.array(matrix, dtype=float)
    array.setflags(write=False)
    return array


class PlasticState:
    """冻结的塑性变量：SmallStrain / AdditiveLog / Multiplicative"""

    variant = "plastic"

    def __init__(self, matrix):
        self.matrix = _frozen(as_matrix(matrix))
        self.n = self.matrix.shape[-1]
        self._validate()

    def _validate(self) -> None:
        pass

    @classmethod
    def zero(cls, n: int) -> 'PlasticState':
        return cls(np.zeros((n, n)))

    def norm(self) -> float:
        return float(frobenius_norm(self.matrix))

    def to_dict(self) -> Dict[str, Any]:
        return {"variant": self.variant, "matrix": self.matrix.tolist()}

    def __repr__(self):
        return f"{type(self).__name__}({self.matrix.tolist()})"


class _TracelessSymmetric(PlasticState):

    def _validate(self) -> None:
        if float(frobenius_norm(skew(self.matrix))) > TRACE_TOL * max(1.0, self.norm()):
            raise InvalidArgumentError(f"{self.variant} plastic strain must be symmetric")
        self.matrix = _frozen(sym(self.matrix))
        tr = float(trace(self.matrix))
        if abs(tr) > TRACE_TOL:
            raise InvalidArgumentError(f"{self.variant} plastic strain must be traceless, trace = {tr:.3e}")


class SmallStrainPlastic(_TracelessSymmetric):
    """ε_p，对称且无迹"""

    variant = "small_strain"


class AdditiveLogPlastic(_TracelessSymmetric):
    """E_p^log = log U_p，对称且无迹"""

    variant = "additive_log"

    def plastic_stretch(self) -> np.ndarray:
        """U_p = exp(E_p^log)"""
        return matrix_exp_sym(self.matrix)


class MultiplicativePlastic(PlasticState):
    """F_p，det F_p = 1"""

    variant = "multiplicative"

    def _validate(self) -> None:
        d = float(det(self.matrix))
        if abs(d - 1.0) > UNIMODULAR_TOL:
            raise InvalidArgumentError(f"plastic distortion must have unit determinant, det = {d:.12g}")

    @classmethod
    def zero(cls, n: int) -> 'MultiplicativePlastic':
        return cls(np.eye(n))

    @property
    def inverse(self) -> np.ndarray:
        return np.linalg.inv(self.matrix)


# ---------------------------------------------------------------- Ŵ(E)

def what_hat_eval(kind: LogStrainEnergyKind, E) -> Union[float, np.ndarray]:
    """对数应变能量 Ŵ(E)

    QuadraticHencky: μ‖dev E‖² + (κ/2)(tr E)²
    ExponentiatedHencky: (μ/k)e^{k‖dev E‖²} + (κ/(2k̂))e^{k̂(tr E)²}
    """
    E = np.asarray(E, dtype=float)
    m = kind.moduli
    dd = frobenius_inner(deviatoric(E), deviatoric(E))
    tr = trace(E)
    with np.errstate(over='ignore'):
        if kind.is_quadratic:
            iso = m.mu * dd
            vol = 0.5 * m.kappa * tr * tr
        else:
            iso = (m.mu / m.k) * np.exp(m.k * dd)
            vol = (m.kappa / (2.0 * m.khat)) * np.exp(m.khat * tr * tr) if not kind.iso_only else 0.0
    if kind.iso_only:
        return iso
    return iso + vol


def what_hat_stress(kind: LogStrainEnergyKind, E) -> np.ndarray:
    """Ŵ 对 E 的解析导数 DŴ(E)"""
    E = np.asarray(E, dtype=float)
    m = kind.moduli
    dev = deviatoric(E)
    dd = frobenius_inner(dev, dev)
    tr = trace(E)
    eye = np.eye(E.shape[-1])
    with np.errstate(over='ignore', invalid='ignore'):
        if kind.is_quadratic:
            iso_factor = 2.0 * m.mu * np.ones_like(dd)
            vol_factor = m.kappa * tr
        else:
            iso_factor = 2.0 * m.mu * np.exp(m.k * dd)
            vol_factor = m.kappa * np.exp(m.khat * tr * tr) * tr
    stress = iso_factor[..., None, None] * dev
    if not kind.iso_only:
        stress = stress + vol_factor[..., None, None] * eye
    return stress


def what_hat_radial_stiffness(kind: LogStrainEnergyKind, s):
    """等容部分沿径向的应力幅值 τ(s) = 2μ g(s²) s 及其导数，s = ‖dev E‖"""
    m = kind.moduli
    s = np.asarray(s, dtype=float)
    if kind.is_quadratic:
        return 2.0 * m.mu * s, 2.0 * m.mu * np.ones_like(s)
    g = np.exp(m.k * s * s)
    return 2.0 * m.mu * g * s, 2.0 * m.mu * g * (1.0 + 2.0 * m.k * s * s)


# ---------------------------------------------------------------- 复合模型

def _check_dimension(F: np.ndarray, n: int) -> np.ndarray:
    F = np.asarray(F, dtype=float)
    if F.ndim < 2 or F.shape[-2:] != (n, n):
        raise InvalidArgumentError(f"expected {n}×{n} deformation gradients, got shape {F.shape}")
    return F


class EnergyModel:
    """能量模型基类

    energy(F) 接受批量 F，det F ≤ 0 处返回 +inf（小应变模型除外）。
    """

    name = "energy_model"
    plastic: Optional[PlasticState] = None

    def __init__(self, n: int):
        self.n = n

    def energy(self, F) -> np.ndarray:
        raise NotImplementedError

    def driving_stress(self, F) -> np.ndarray:
        """该格式下驱动塑性流动的应力"""
        raise NotImplementedError

    def with_plastic(self, plastic: PlasticState) -> 'EnergyModel':
        raise InvalidArgumentError(f"{self.name} has no plastic state")

    def rank_one_quadratic_form(self, eta, xi) -> Optional[np.ndarray]:
        """若二阶方向导数有精确表达式则返回，否则返回 None"""
        return None

    def to_dict(self) -> Dict[str, Any]:
        data = {"model": self.name, "n": self.n}
        if self.plastic is not None:
            data["plastic"] = self.plastic.to_dict()
        return data

    def __repr__(self):
        return f"{type(self).__name__}({self.to_dict()})"


class _LogStrainModel(EnergyModel):

    def __init__(self, kind: LogStrainEnergyKind):
        super().__init__(kind.n)
        self.kind = kind

    def _elastic_log_strain(self, F: np.ndarray):
        raise NotImplementedError

    def energy(self, F) -> np.ndarray:
        F = _check_dimension(F, self.n)
        E, ok = self._elastic_log_strain(F)
        W = np.asarray(what_hat_eval(self.kind, E), dtype=float)
        return np.where(ok, W, np.inf)

    def to_dict(self) -> Dict[str, Any]:
        data = super().to_dict()
        data["kind"] = self.kind.to_dict()
        return data


class Hyperelastic(_LogStrainModel):
    """W(F) = Ŵ(log U)"""

    name = "hyperelastic"

    def _elastic_log_strain(self, F):
        return log_stretch_masked(F)

    def driving_stress(self, F) -> np.ndarray:
        E, _ = log_stretch_masked(_check_dimension(F, self.n))
        return what_hat_stress(self.kind, E)


class AdditiveLogComposite(_LogStrainModel):
    """W(F) = Ŵ(log U − E_p^log)"""

    name = "additive_log"

    def __init__(self, kind: LogStrainEnergyKind, plastic: Union[AdditiveLogPlastic, np.ndarray, None] = None):
        super().__init__(kind)
        if plastic is None:
            plastic = AdditiveLogPlastic.zero(kind.n)
        elif not isinstance(plastic, AdditiveLogPlastic):
            plastic = AdditiveLogPlastic(plastic)
        if plastic.n != kind.n:
            raise InvalidArgumentError("plastic state dimension does not match the energy")
        self.plastic = plastic

    def _elastic_log_strain(self, F):
        E, ok = log_stretch_masked(F)
        return E - self.plastic.matrix, ok

    def driving_stress(self, F) -> np.ndarray:
        """Σ = DŴ(log U − E_p^log)"""
        E, _ = self._elastic_log_strain(_check_dimension(F, self.n))
        return what_hat_stress(self.kind, E)

    def with_plastic(self, plastic) -> 'AdditiveLogComposite':
        return AdditiveLogComposite(self.kind, plastic)


class MultiplicativeComposite(_LogStrainModel):
    """W(F) = Ŵ(log U_e)，F_e = F·F_p⁻¹"""

    name = "multiplicative"

    def __init__(self, kind: LogStrainEnergyKind, plastic: Union[MultiplicativePlastic, np.ndarray, None] = None):
        super().__init__(kind)
        if plastic is None:
            plastic = MultiplicativePlastic.zero(kind.n)
        elif not isinstance(plastic, MultiplicativePlastic):
            plastic = MultiplicativePlastic(plastic)
        if plastic.n != kind.n:
            raise InvalidArgumentError("plastic state dimension does not match the energy")
        self.plastic = plastic
        self._fp_inv = plastic.inverse

    def elastic_part(self, F) -> np.ndarray:
        return np.asarray(F, dtype=float) @ self._fp_inv

    def _elastic_log_strain(self, F):
        return log_stretch_masked(self.elastic_part(F))

    def driving_stress(self, F) -> np.ndarray:
        """Eshelby 张量 Σ_E = DŴ(log U_e) − Ŵ(log U_e)·𝟙"""
        E, _ = self._elastic_log_strain(_check_dimension(F, self.n))
        return eshelby_from_log_strain(self.kind, E)

    def with_plastic(self, plastic) -> 'MultiplicativeComposite':
        return MultiplicativeComposite(self.kind, plastic)


class SaintVenantKirchhoff(EnergyModel):
    """W = μ/4‖E − E_p‖² + λ/8 [tr(E − E_p)]²，E = (C − 𝟙)/2"""

    name = "saint_venant_kirchhoff"

    def __init__(self, mu: float, lam: float, ep=None, n: int = 3):
        super().__init__(n)
        self.mu = float(mu)
        self.lam = float(lam)
        ep = np.zeros((n, n)) if ep is None else ep
        self.ep = _frozen(as_matrix(ep, symmetric=True))

    def _strain(self, F: np.ndarray) -> np.ndarray:
        C = sym(transpose(F) @ F)
        return 0.5 * (C - np.eye(self.n)) - self.ep

    def energy(self, F) -> np.ndarray:
        F = _check_dimension(F, self.n)
        D = self._strain(F)
        tr = trace(D)
        W = 0.25 * self.mu * frobenius_inner(D, D) + 0.125 * self.lam * tr * tr
        return np.where(det(F) > 0, W, np.inf)

    def driving_stress(self, F) -> np.ndarray:
        """∂W/∂E = μ/2 (E − E_p) + λ/4 tr(E − E_p)·𝟙"""
        D = self._strain(_check_dimension(F, self.n))
        return 0.5 * self.mu * D + (0.25 * self.lam * trace(D))[..., None, None] * np.eye(self.n)

    def to_dict(self) -> Dict[str, Any]:
        return {"model": self.name, "n": self.n, "mu": self.mu, "lambda": self.lam, "ep": self.ep.tolist()}


class SmallStrainQuadratic(EnergyModel):
    """W = μ‖sym(F − 𝟙) − ε_p‖² + (λ/2)[tr(sym(F − 𝟙) − ε_p)]²"""

    name = "small_strain"

    def __init__(self, mu: float, lam: float, plastic: Union[SmallStrainPlastic, np.ndarray, None] = None,
                 n: int = 3):
        super().__init__(n)
        self.mu = float(mu)
        self.lam = float(lam)
        if plastic is None:
            plastic = SmallStrainPlastic.zero(n)
        elif not isinstance(plastic, SmallStrainPlastic):
            plastic = SmallStrainPlastic(plastic)
        self.plastic = plastic

    def _elastic_strain(self, F: np.ndarray) -> np.ndarray:
        return sym(F - np.eye(self.n)) - self.plastic.matrix

    def energy(self, F) -> np.ndarray:
        e = self._elastic_strain(_check_dimension(F, self.n))
        tr = trace(e)
        return self.mu * frobenius_inner(e, e) + 0.5 * self.lam * tr * tr

    def driving_stress(self, F) -> np.ndarray:
        """Σ_lin = 2μ(ε − ε_p) + λ tr(ε − ε_p)·𝟙"""
        e = self._elastic_strain(_check_dimension(F, self.n))
        return 2.0 * self.mu * e + (self.lam * trace(e))[..., None, None] * np.eye(self.n)

    def rank_one_quadratic_form(self, eta, xi) -> np.ndarray:
        """2μ‖sym(η⊗ξ)‖² + λ⟨η, ξ⟩²，与 F 和 ε_p 无关"""
        eta = np.asarray(eta, dtype=float)
        xi = np.asarray(xi, dtype=float)
        A = eta[..., :, None] * xi[..., None, :]
        S = sym(A)
        dot = np.sum(eta * xi, axis=-1)
        return 2.0 * self.mu * frobenius_inner(S, S) + self.lam * dot * dot

    def with_plastic(self, plastic) -> 'SmallStrainQuadratic':
        return SmallStrainQuadratic(self.mu, self.lam, plastic, n=self.n)

    def to_dict(self) -> Dict[str, Any]:
        data = super().to_dict()
        data.update({"mu": self.mu, "lambda": self.lam})
        return data


# ---------------------------------------------------------------- 求值与应力

def energy_eval(model: EnergyModel, F) -> Union[float, np.ndarray]:
    """能量密度；det F ≤ 0 时为 +inf（显式无穷值，不抛异常）"""
    F = np.asarray(F, dtype=float)
    W = model.energy(F)
    if F.ndim == 2:
        return float(W)
    return W


def _probe_matrices(n: int) -> np.ndarray:
    basis = np.zeros((n * n, n, n))
    for idx in range(n * n):
        basis[idx, idx // n, idx % n] = 1.0
    return basis


def piola_stress_fd(model: EnergyModel, F) -> np.ndarray:
    """第一 Piola-Kirchhoff 应力 S₁ = D_F W 的中心差分近似

    步长 h = cbrt(eps)·max(1, ‖F‖)。

    Raises:
        BoundaryProximityError: 任一探针点能量为 +inf
    """
    F = as_matrix(F)
    n = F.shape[-1]
    h = PIOLA_STEP * max(1.0, float(frobenius_norm(F)))
    basis = _probe_matrices(n)
    W_plus = model.energy(F + h * basis)
    W_minus = model.energy(F - h * basis)
    if not (np.all(np.isfinite(W_plus)) and np.all(np.isfinite(W_minus))):
        raise BoundaryProximityError(f"infinite energy within {h:.3g} of F; too close to det F = 0")
    return ((W_plus - W_minus) / (2.0 * h)).reshape(n, n)


def _symmetrize_checked(T: np.ndarray, label: str) -> np.ndarray:
    scale = float(frobenius_norm(T))
    asym = float(frobenius_norm(skew(T)))
    if asym > ASYMMETRY_TOL * max(scale, 1e-8):
        logger.warning(f"{label} asymmetry {asym:.3e} exceeds {ASYMMETRY_TOL:g}·‖{label}‖ = {scale:.3e}")
    return sym(T)


def cauchy_stress(model: EnergyModel, F) -> np.ndarray:
    """σ = (1/det F)·S₁·Fᵀ，对称化"""
    F = as_matrix(F)
    S1 = piola_stress_fd(model, F)
    return _symmetrize_checked(S1 @ F.T / float(det(F)), "cauchy")


def eshelby_tensor(kind: LogStrainEnergyKind, Fe) -> np.ndarray:
    """弹性 Eshelby 张量 Σ_E = F_eᵀ·D W(F_e) − W(F_e)·𝟙（有限差分）"""
    Fe = as_matrix(Fe)
    model = Hyperelastic(kind)
    S1 = piola_stress_fd(model, Fe)
    W = float(model.energy(Fe))
    return _symmetrize_checked(Fe.T @ S1 - W * np.eye(kind.n), "eshelby")


def mandel_stress(kind: LogStrainEnergyKind, Fe) -> np.ndarray:
    """F_eᵀ·D W(F_e) 的解析形式：各向同性时等于 DŴ(log U_e)"""
    E, ok = log_stretch_masked(as_matrix(Fe))
    if not np.all(ok):
        raise DomainError("Mandel stress needs det Fe > 0")
    return what_hat_stress(kind, E)


def eshelby_from_log_strain(kind: LogStrainEnergyKind, E) -> np.ndarray:
    """Σ_E = DŴ(E) − Ŵ(E)·𝟙，E = log U_e"""
    E = np.asarray(E, dtype=float)
    W = np.asarray(what_hat_eval(kind, E), dtype=float)
    return what_hat_stress(kind, E) - W[..., None, None] * np.eye(E.shape[-1])


def hencky_energy_closed_form(F, mu: float, kappa: float) -> float:
    """W_H = μ/4‖dev log C‖² + κ/2 (log det F)²"""
    F = as_matrix(F)
    E, ok = log_stretch_masked(F)
    if not ok:
        return math.inf
    dev_log_c = deviatoric(2.0 * E)
    return float(0.25 * mu * frobenius_inner(dev_log_c, dev_log_c) + 0.5 * kappa * math.log(det(F)) ** 2)


def coaxial(C, Cp, tol: float = 1e-12) -> bool:
    """C·C_p⁻¹ 与 C_p⁻¹·C 是否在容差内可交换"""
    C = as_matrix(C)
    Cp_inv = np.linalg.inv(as_matrix(Cp))
    scale = max(1.0, float(frobenius_norm(C) * frobenius_norm(Cp_inv)))
    return float(frobenius_norm(C @ Cp_inv - Cp_inv @ C)) <= tol * scale


# ---------------------------------------------------------------- 一维玩具能量

class Toy1DFamily(Enum):
    HENCKY_SQUARED = "hencky_squared"
    EXP_HENCKY = "exp_hencky"
    EXP_HENCKY_SHIFTED = "exp_hencky_shifted"
    HENCKY_SQUARED_SHIFTED = "hencky_squared_shifted"


@dataclass(frozen=True)
class Toy1D:
    family: Toy1DFamily
    s: float = 1.0

    def __post_init__(self):
        if not (self.s > 0):
            raise DomainError(f"shift s must be positive, got {self.s}")


def toy1d_eval(family: Union[Toy1D, Toy1DFamily, str], t, s: float = 1.0):
    """一维能量

    (log t)²、e^{(log t)²}、e^{(log t − log s)²}、(log t − log s)²

    Raises:
        DomainError: t ≤ 0 或 s ≤ 0
    """
    if isinstance(family, Toy1D):
        spec = family
    else:
        spec = Toy1D(Toy1DFamily(family), s)
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr <= 0):
        raise DomainError("toy energies are defined for t > 0 only")
    log_t = np.log(t_arr)
    if spec.family in (Toy1DFamily.EXP_HENCKY_SHIFTED, Toy1DFamily.HENCKY_SQUARED_SHIFTED):
        log_t = log_t - math.log(spec.s)
    if spec.family in (Toy1DFamily.HENCKY_SQUARED, Toy1DFamily.HENCKY_SQUARED_SHIFTED):
        value = log_t ** 2
    else:
        value = np.exp(log_t ** 2)
    if np.ndim(value) == 0:
        return float(value)
    return value

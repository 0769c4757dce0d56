"""子命令运行配置（JSON）的 pydantic 模型

未知字段一律拒绝；`lambda` 通过别名接收。
"""
import logging
import math
from typing import Any, List, Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .energy_models import (AdditiveLogComposite, EnergyFamily, EnergyModel, Hyperelastic,
                            LogStrainEnergyKind, Moduli, MultiplicativeComposite, SaintVenantKirchhoff,
                            SmallStrainQuadratic)
from .plastic_flow import Formulation, PathSpec, YieldSurface, shear_cycle

logger = logging.getLogger(__name__)

FormulationName = Literal["small_strain", "additive_log", "multiplicative"]


def _square(value: Any) -> List[List[float]]:
    """接受嵌套列表或按行展开的 n² 个数"""
    array = np.asarray(value, dtype=float)
    if array.ndim == 1:
        n = int(round(math.sqrt(array.size)))
        if n * n != array.size:
            raise ValueError(f"{array.size} row-major entries do not form a square matrix")
        array = array.reshape(n, n)
    if array.ndim != 2 or array.shape[0] != array.shape[1] or array.shape[0] not in (2, 3):
        raise ValueError(f"expected a 2×2 or 3×3 matrix, got shape {array.shape}")
    if not np.all(np.isfinite(array)):
        raise ValueError("matrix entries must be finite")
    return array.tolist()


class StrictModel(BaseModel):
    model_config = ConfigDict(extra="forbid", populate_by_name=True)


class KindConfig(StrictModel):
    family: Literal["exponentiated_hencky", "quadratic_hencky"] = Field(
        "exponentiated_hencky", title="能量族", description="指数 Hencky 或二次 Hencky")
    n: Literal[2, 3] = Field(2, title="维数")
    mu: float = Field(1.0, gt=0, title="剪切模量")
    kappa: float = Field(1.0, gt=0, title="体积模量")
    lam: Optional[float] = Field(None, alias="lambda", title="Lamé λ", description="二维小应变/SVK 模型必需")
    k: float = Field(1.0, ge=0)
    khat: float = Field(1.0, ge=0)
    iso_only: bool = Field(False, description="只保留等容部分（eH-iso）")

    def build_kind(self) -> LogStrainEnergyKind:
        moduli = Moduli(mu=self.mu, kappa=self.kappa, lam=self.lam, k=self.k, khat=self.khat)
        return LogStrainEnergyKind(family=EnergyFamily(self.family), moduli=moduli, n=self.n,
                                   iso_only=self.iso_only)


class ModelConfig(KindConfig):
    type: Literal["hyperelastic", "additive_log", "multiplicative", "svk", "small_strain"] = Field(
        ..., title="模型类型")
    plastic: Optional[List[List[float]]] = Field(
        None, title="冻结塑性变量", description="E_p^log / F_p / ε_p / SVK 的 E_p，按模型类型解释")

    @field_validator("plastic", mode="before")
    @classmethod
    def _plastic_square(cls, value):
        return None if value is None else _square(value)

    @model_validator(mode="after")
    def _plastic_shape(self):
        if self.plastic is not None and len(self.plastic) != self.n:
            raise ValueError(f"plastic variable must be {self.n}×{self.n}")
        if self.plastic is not None and self.type == "hyperelastic":
            raise ValueError("hyperelastic models take no plastic variable")
        return self

    def build_model(self) -> EnergyModel:
        kind = self.build_kind()
        plastic = None if self.plastic is None else np.asarray(self.plastic, dtype=float)
        if self.type == "hyperelastic":
            return Hyperelastic(kind)
        if self.type == "additive_log":
            return AdditiveLogComposite(kind, plastic)
        if self.type == "multiplicative":
            return MultiplicativeComposite(kind, plastic)
        lam = kind.moduli.lame_lambda(self.n)
        if self.type == "svk":
            return SaintVenantKirchhoff(self.mu, lam, plastic, n=self.n)
        return SmallStrainQuadratic(self.mu, lam, plastic, n=self.n)


class EvalConfig(StrictModel):
    model: ModelConfig
    F: List[List[float]] = Field(..., title="变形梯度")

    @field_validator("F", mode="before")
    @classmethod
    def _f_square(cls, value):
        return _square(value)


class CounterexampleConfig(StrictModel):
    a: float = -2.0
    b: float = 0.0
    t_min: float = -2.0
    t_max: float = 2.0
    samples: int = Field(401, ge=3, title="采样点数")

    @model_validator(mode="after")
    def _symmetric_range(self):
        if not self.t_max > 0 or not math.isclose(self.t_min, -self.t_max, rel_tol=0.0, abs_tol=1e-12):
            raise ValueError("t range must be symmetric about 0 with t_max > 0")
        return self

    def grid(self) -> np.ndarray:
        return np.linspace(self.t_min, self.t_max, self.samples)


class ShearLineConfig(StrictModel):
    """F(t) = 𝟙 + t e₁⊗e₂ 上的等距基点"""

    t_min: float = 0.0
    t_max: float = 1.5
    samples: int = Field(31, ge=1)


class RandomPointsConfig(StrictModel):
    count: int = Field(50, ge=1)
    sv_min: float = Field(0.2, gt=0)
    sv_max: float = Field(5.0, gt=0)


class ScanConfig(StrictModel):
    model: ModelConfig
    points: Optional[List[List[List[float]]]] = None
    shear: Optional[ShearLineConfig] = None
    random: Optional[RandomPointsConfig] = None
    angular_resolution: Optional[int] = Field(None, ge=4)
    cells_csv: bool = Field(False, description="输出每个基点的格点 q 值")

    @field_validator("points", mode="before")
    @classmethod
    def _points_square(cls, value):
        return None if value is None else [_square(F) for F in value]

    @model_validator(mode="after")
    def _has_points(self):
        if self.points is None and self.shear is None and self.random is None:
            raise ValueError("scan needs points, a shear line or random points")
        if self.points is not None and any(len(F) != self.model.n for F in self.points):
            raise ValueError(f"base points must be {self.model.n}×{self.model.n}")
        if self.shear is not None and self.model.n != 2:
            raise ValueError("shear line base points are 2×2")
        return self


class StepSample(StrictModel):
    t: float
    F: List[List[float]]

    @field_validator("F", mode="before")
    @classmethod
    def _f_square(cls, value):
        return _square(value)


class ShearCycleConfig(StrictModel):
    t_max: float = 1.5
    load_steps: int = Field(30, ge=1)
    unload_steps: int = Field(30, ge=1)


class PathBaseConfig(StrictModel):
    kind: KindConfig
    sigma_y: float = Field(..., gt=0, title="屈服应力")
    domain_radius_factor: Optional[float] = Field(None, gt=0, description="弹性域半径因子，缺省按格式取值")
    steps: Optional[List[StepSample]] = None
    shear_cycle: Optional[ShearCycleConfig] = None
    strain_measure: Literal["linear", "log"] = "linear"
    probe_ellipticity: bool = True
    angular_resolution: Optional[int] = Field(None, ge=4)

    @model_validator(mode="after")
    def _one_source(self):
        if (self.steps is None) == (self.shear_cycle is None):
            raise ValueError("give exactly one of steps or shear_cycle")
        if self.steps is not None:
            if not self.steps:
                raise ValueError("steps must not be empty")
            if any(len(s.F) != self.kind.n for s in self.steps):
                raise ValueError(f"step deformation gradients must be {self.kind.n}×{self.kind.n}")
        if self.shear_cycle is not None and self.kind.n != 2:
            raise ValueError("shear_cycle generates 2×2 paths")
        return self

    def samples(self):
        if self.shear_cycle is not None:
            c = self.shear_cycle
            return shear_cycle(c.t_max, c.load_steps, c.unload_steps, n=2)
        return [s.t for s in self.steps], [np.asarray(s.F, dtype=float) for s in self.steps]

    def build_path(self, formulation: str, default_radius_factor: float) -> PathSpec:
        form = Formulation(formulation)
        factor = self.domain_radius_factor or default_radius_factor
        times, deformations = self.samples()
        return PathSpec(times=times, formulation=form, kind=self.kind.build_kind(),
                        yield_surface=YieldSurface(self.sigma_y, factor), deformations=deformations,
                        strain_measure=self.strain_measure)


class PathConfig(PathBaseConfig):
    formulation: FormulationName


class CompareConfig(PathBaseConfig):
    formulations: List[FormulationName] = Field(..., min_length=2)
    strain_measure: Literal["linear", "log"] = "log"

    @field_validator("formulations")
    @classmethod
    def _distinct(cls, value):
        if len(set(value)) != len(value):
            raise ValueError("formulations must be distinct")
        return value


COMMAND_SCHEMAS = {
    "eval": EvalConfig,
    "counterexample": CounterexampleConfig,
    "scan": ScanConfig,
    "path": PathConfig,
    "compare": CompareConfig,
}

"""logstrain：对数应变弹塑性模型与秩一凸性检验"""

__version__ = "0.1.0"

from .energy_models import (AdditiveLogComposite, EnergyFamily, Hyperelastic, LogStrainEnergyKind, Moduli,
                            MultiplicativeComposite, SaintVenantKirchhoff, SmallStrainQuadratic)
from .ellipticity_lab import Verdict, rank_one_scan
from .errors import LogStrainError
from .plastic_flow import Formulation, PathSpec, YieldSurface, drive_path

__all__ = [
    "AdditiveLogComposite", "EnergyFamily", "Hyperelastic", "LogStrainEnergyKind", "Moduli",
    "MultiplicativeComposite", "SaintVenantKirchhoff", "SmallStrainQuadratic", "Verdict", "rank_one_scan",
    "LogStrainError", "Formulation", "PathSpec", "YieldSurface", "drive_path",
]

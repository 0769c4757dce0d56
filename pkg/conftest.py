import logging

import numpy as np
import pytest

from logstrain.energy_models import EnergyFamily, LogStrainEnergyKind, Moduli
from logstrain.logger import LOGGER_NAME


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


@pytest.fixture
def eh_iso():
    """二维 eH 等容部分，μ = k = 1"""
    return LogStrainEnergyKind.exponentiated_iso(mu=1.0, k=1.0, n=2)


@pytest.fixture
def eh_full_2d():
    return LogStrainEnergyKind(EnergyFamily.EXPONENTIATED_HENCKY, Moduli(mu=1.0, kappa=1.0, k=1.0, khat=1.0), n=2)


@pytest.fixture
def quadratic_3d():
    return LogStrainEnergyKind.quadratic(mu=1.0, kappa=1.0, n=3)


@pytest.fixture(autouse=True)
def propagate_package_logs():
    # caplog 需要 logstrain 记录器向根记录器传播
    logger = logging.getLogger(LOGGER_NAME)
    previous = logger.propagate
    logger.propagate = True
    yield
    logger.propagate = previous


def random_spd(rng, n, count, lam_min=1e-2, lam_max=1e2):
    """特征值对数均匀分布在 [lam_min, lam_max] 的对称正定矩阵批"""
    Z = rng.standard_normal((count, n, n))
    Q, R = np.linalg.qr(Z)
    lam = np.exp(rng.uniform(np.log(lam_min), np.log(lam_max), (count, n)))
    return (Q * lam[:, None, :]) @ np.swapaxes(Q, -1, -2), lam

import os
import json
import copy
import numbers
import logging
from typing import Dict, Any, Optional

from .errors import ConfigError

logger = logging.getLogger(__name__)

SEED_LIMIT = 2 ** 64

DEFAULT_SETTINGS: Dict[str, Any] = {
    # 椭圆性扫描
    "angular_resolution": 128,
    "angular_resolution_3d": 64,
    "refine": True,
    "tol_ell_relative": 1e-6,
    "tol_ell_floor": 1e-10,
    "inconclusive_factor": 10.0,
    # 直线凸性检查
    "tol_line_relative": 1e-9,
    # 塑性流动
    "kkt_tol_relative": 1e-8,
    "newton_max_iter": 100,
    "newton_patience": 25,
    "consistency_tol": 1e-12,
    "direction_max_iter": 5,
    "radius_factor_small_strain": 2.0 / 3.0,
    "radius_factor_additive_log": 2.0 / 3.0,
    "radius_factor_multiplicative": 1.0 / 3.0,
    # 反例曲线默认值
    "counterexample": {
        "a": -2.0,
        "b": 0.0,
        "t_min": -2.0,
        "t_max": 2.0,
        "samples": 401
    },
    # 参考椭圆区间（单轴拉伸）
    "reference_interval": [0.21162, 1.39561],
    "threads": 0,
    # 随机扫描点的种子；同一配置得到逐字节相同的输出
    "seed": 0
}


def _is_number(value: Any) -> bool:
    return isinstance(value, numbers.Real) and not isinstance(value, bool)


def _check_value(key: str, default: Any, value: Any) -> Any:
    """按默认值的类型检查一个设置项"""
    if isinstance(default, bool):
        if not isinstance(value, bool):
            raise ConfigError(f"setting {key} must be true or false, got {value!r}")
    elif isinstance(default, int):
        if not isinstance(value, int) or isinstance(value, bool):
            raise ConfigError(f"setting {key} must be an integer, got {value!r}")
    elif isinstance(default, float):
        if not _is_number(value):
            raise ConfigError(f"setting {key} must be a number, got {value!r}")
        value = float(value)
    elif isinstance(default, list):
        if not isinstance(value, list) or len(value) != len(default) or not all(map(_is_number, value)):
            raise ConfigError(f"setting {key} must be a list of {len(default)} numbers, got {value!r}")
        value = [float(v) for v in value]
    return value


class ConfigManager:
    """数值设置：默认值之上合并一个 JSON 文件（默认 ~/.logstrain.json）

    未知键只记录警告后忽略；已知键类型不符时抛出 ConfigError。
    """

    def __init__(self, config_path: Optional[str] = None):
        self.config = copy.deepcopy(DEFAULT_SETTINGS)
        self.config_path = config_path or os.path.join(
            os.path.expanduser("~"), ".logstrain.json")

        self.load_config()

    def load_config(self) -> bool:
        """合并设置文件；文件不存在时返回 False

        Raises:
            ConfigError: 文件不是 JSON 对象，或某个设置项类型/取值不合法
        """
        if not os.path.exists(self.config_path):
            logger.debug("No settings file found, using defaults")
            return False
        try:
            with open(self.config_path, 'r', encoding='utf-8') as f:
                loaded = json.load(f)
        except ValueError as e:
            raise ConfigError(f"settings file {self.config_path} is not valid JSON: {e}")
        if not isinstance(loaded, dict):
            raise ConfigError("settings document must be a JSON object")

        for key, value in loaded.items():
            if key not in self.config:
                logger.warning(f"Ignoring unknown setting: {key}")
                continue
            default = DEFAULT_SETTINGS[key]
            if isinstance(default, dict):
                if not isinstance(value, dict):
                    raise ConfigError(f"setting {key} must be an object")
                for sub_key, sub_value in value.items():
                    if sub_key not in default:
                        logger.warning(f"Ignoring unknown setting: {key}.{sub_key}")
                        continue
                    self.config[key][sub_key] = _check_value(f"{key}.{sub_key}", default[sub_key], sub_value)
            else:
                self.config[key] = _check_value(key, default, value)

        self.check_seed(self.config["seed"])
        if self.config["threads"] < 0:
            raise ConfigError("setting threads must be >= 0")
        logger.info(f"Settings loaded from {self.config_path}")
        return True

    @staticmethod
    def check_seed(seed: int) -> int:
        if not 0 <= seed < SEED_LIMIT:
            raise ConfigError(f"seed must lie in [0, 2**64), got {seed}")
        return seed

    def get_all(self) -> Dict[str, Any]:
        """当前设置的副本，写入每份 JSON 报告"""
        return copy.deepcopy(self.config)

    def radius_factor(self, formulation: str) -> float:
        """按流动格式返回弹性域半径因子

        Args:
            formulation: small_strain / additive_log / multiplicative

        Returns:
            ρ² = factor·σ_y² 中的 factor
        """
        return float(self.config[f"radius_factor_{formulation}"])

#!/usr/bin/env python
# -*- coding: utf-8 -*-

import csv
import functools
import json
import logging
import os
from typing import Any, Iterable, List, Sequence

import numpy as np
from pydantic import ValidationError

from .errors import EXIT_CONFIG, EXIT_IO, EXIT_OK, LogStrainError

logger = logging.getLogger(__name__)


def handle_errors(func):
    """统一的错误处理装饰器

    被装饰的命令函数返回退出码；异常被记录并转换为对应退出码，不向外抛出。
    """
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            code = func(*args, **kwargs)
            return EXIT_OK if code is None else code
        except ValidationError as e:
            logger.error(f"{func.__name__} 失败: invalid config: {e}")
            return EXIT_CONFIG
        except LogStrainError as e:
            logger.error(f"{func.__name__} 失败: {e}")
            logger.debug("traceback", exc_info=True)
            return e.exit_code
        except OSError as e:
            logger.error(f"{func.__name__} 失败: I/O error: {e}")
            return EXIT_IO
        except ValueError as e:
            logger.error(f"{func.__name__} 失败: invalid value: {e}")
            logger.debug("traceback", exc_info=True)
            return EXIT_CONFIG
    return wrapper


def format_float(value: float) -> str:
    """17 位有效数字的确定性浮点格式"""
    value = float(value)
    if np.isnan(value):
        return "nan"
    if np.isinf(value):
        return "inf" if value > 0 else "-inf"
    return format(value, ".17g")


def _cell(value: Any) -> str:
    if isinstance(value, (float, np.floating)):
        return format_float(value)
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    return str(value)


def write_csv(path: str, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    """写 CSV（`.` 小数点，`\\n` 行尾）

    Args:
        path: 输出文件路径
        header: 列名
        rows: 每行的值

    Returns:
        写入的路径
    """
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    with open(path, 'w', encoding='utf-8', newline='') as f:
        writer = csv.writer(f, lineterminator='\n')
        writer.writerow(list(header))
        for row in rows:
            writer.writerow([_cell(v) for v in row])
    logger.info(f"Wrote {path}")
    return path


def to_jsonable(value: Any) -> Any:
    """把 numpy 值和无穷大转换为可 JSON 序列化的对象"""
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return to_jsonable(value.tolist())
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if np.isfinite(value):
            return value
        return format_float(value)
    return value


def dump_json(document: Any) -> str:
    return json.dumps(to_jsonable(document), indent=2, ensure_ascii=False, sort_keys=False)


def write_json(path: str, document: Any) -> str:
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    with open(path, 'w', encoding='utf-8', newline='\n') as f:
        f.write(dump_json(document))
        f.write('\n')
    logger.info(f"Wrote {path}")
    return path


def flatten(matrix: np.ndarray) -> List[float]:
    """按行展开矩阵"""
    return [float(v) for v in np.asarray(matrix, dtype=float).ravel()]

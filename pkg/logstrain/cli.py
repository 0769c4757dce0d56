#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""命令行入口：logstrain eval|counterexample|scan|path|compare"""
import argparse
import json
import logging
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence

import numpy as np

from .config import ConfigManager
from .ellipticity_lab import (EllipticityReport, Verdict, counterexample_curve, rank_one_scan,
                              simple_shear)
from .energy_models import (MultiplicativePlastic, cauchy_stress, energy_eval, piola_stress_fd)
from .errors import ConfigError
from .logger import Logger
from .math_utils import default_rng, random_deformation
from .plastic_flow import PathResult, StepResult, drive_path
from .schemas import (COMMAND_SCHEMAS, CompareConfig, CounterexampleConfig, EvalConfig, PathConfig,
                      ScanConfig)
from .tensor_kernels import check_orientation, frobenius_norm, log_stretch
from .utils import dump_json, flatten, handle_errors, write_csv, write_json

logger = logging.getLogger(__name__)


@dataclass
class RunContext:
    out_dir: Optional[str]
    threads: int
    seed: int
    settings: Dict[str, Any]
    config_manager: ConfigManager

    def output(self, name: str) -> Optional[str]:
        return os.path.join(self.out_dir, name) if self.out_dir else None

    def workers(self) -> int:
        return self.threads if self.threads > 0 else (os.cpu_count() or 1)

    def map(self, func: Callable, items: Sequence) -> List:
        """按输入顺序返回结果的并行 map"""
        if self.workers() == 1 or len(items) <= 1:
            return [func(item) for item in items]
        with ThreadPoolExecutor(max_workers=self.workers()) as pool:
            return list(pool.map(func, items))


def _emit(ctx: RunContext, command: str, summary: Dict[str, Any]) -> None:
    document = {"command": command, **summary, "seed": ctx.seed, "settings": ctx.settings}
    print(dump_json(document))
    path = ctx.output(f"{command}.json")
    if path:
        write_json(path, document)


def load_run_config(command: str, path: Optional[str], defaults: Optional[Dict[str, Any]] = None):
    """读取并校验子命令配置

    Raises:
        ConfigError: 文件缺失或不是合法 JSON
        pydantic.ValidationError: 字段不符合模式
    """
    raw: Dict[str, Any] = {}
    if path is not None:
        if not os.path.exists(path):
            raise ConfigError(f"config file not found: {path}")
        try:
            with open(path, 'r', encoding='utf-8') as f:
                raw = json.load(f)
        except ValueError as e:
            raise ConfigError(f"config file {path} is not valid JSON: {e}")
        if not isinstance(raw, dict):
            raise ConfigError("config document must be a JSON object")
    elif defaults is None:
        raise ConfigError(f"{command} needs --config")
    return COMMAND_SCHEMAS[command].model_validate({**(defaults or {}), **raw})


# ---------------------------------------------------------------- eval

def cmd_eval(config: EvalConfig, ctx: RunContext) -> int:
    model = config.model.build_model()
    F = np.asarray(config.F, dtype=float)
    check_orientation(F)
    summary = {
        "model": model.to_dict(),
        "F": F,
        "energy": energy_eval(model, F),
        "piola_stress": piola_stress_fd(model, F),
        "cauchy_stress": cauchy_stress(model, F),
        "driving_stress": model.driving_stress(F),
    }
    _emit(ctx, "eval", summary)
    return 0


# ---------------------------------------------------------------- counterexample

def cmd_counterexample(config: CounterexampleConfig, ctx: RunContext) -> int:
    curve = counterexample_curve(config.a, config.b, config.grid(),
                                 tol_relative=float(ctx.settings["tol_line_relative"]))
    path = ctx.output("counterexample.csv")
    if path:
        write_csv(path, ["t", "h_paper", "h_direct"], curve.rows())
    _emit(ctx, "counterexample", curve.to_dict())
    return 0


# ---------------------------------------------------------------- scan

def _aggregate(reports: Iterable[EllipticityReport]) -> Verdict:
    verdicts = [r.verdict for r in reports]
    if Verdict.VIOLATED in verdicts:
        return Verdict.VIOLATED
    if Verdict.INCONCLUSIVE in verdicts:
        return Verdict.INCONCLUSIVE
    return Verdict.ELLIPTIC


def _scan_points(config: ScanConfig, ctx: RunContext) -> List[Dict[str, Any]]:
    points: List[Dict[str, Any]] = []
    for F in config.points or []:
        points.append({"source": "points", "F": np.asarray(F, dtype=float)})
    if config.shear is not None:
        for t in np.linspace(config.shear.t_min, config.shear.t_max, config.shear.samples):
            points.append({"source": "shear", "t": float(t), "F": simple_shear(t)})
    if config.random is not None:
        rng = default_rng(ctx.seed)
        for _ in range(config.random.count):
            F = random_deformation(rng, config.model.n, config.random.sv_min, config.random.sv_max)
            points.append({"source": "random", "F": F})
    return points


def cmd_scan(config: ScanConfig, ctx: RunContext) -> int:
    model = config.model.build_model()
    points = _scan_points(config, ctx)
    logger.info(f"Scanning {len(points)} base points of {model.name}")

    def scan(point: Dict[str, Any]) -> EllipticityReport:
        return rank_one_scan(model, point["F"], angular_resolution=config.angular_resolution,
                             keep_cells=config.cells_csv, settings=ctx.settings)

    reports = ctx.map(scan, points)
    aggregate = _aggregate(reports)
    first = next((i for i, r in enumerate(reports) if r.violated), None)
    entries = []
    for index, (point, report) in enumerate(zip(points, reports)):
        entry = {"index": index, "source": point["source"], **report.to_dict()}
        if "t" in point:
            entry["t"] = point["t"]
        entries.append(entry)
        if config.cells_csv and ctx.out_dir:
            write_csv(ctx.output(f"scan_cells_{index:03d}.csv"), report.cell_header(), report.cell_rows())
    summary = {
        "model": model.to_dict(),
        "aggregate": aggregate.value,
        "first_violation": None if first is None else {k: entries[first][k] for k in ("index", "t") if k in entries[first]},
        "violations": sum(1 for r in reports if r.violated),
        "reports": entries,
    }
    _emit(ctx, "scan", summary)
    return 0


# ---------------------------------------------------------------- path / compare

def _plastic_strain_norm(step: StepResult) -> float:
    """塑性应变的可比较范数；乘法格式取 ‖½ log(F_pᵀF_p)‖"""
    if isinstance(step.plastic, MultiplicativePlastic):
        return float(frobenius_norm(log_stretch(step.plastic.matrix)))
    return step.plastic.norm()


def _component_names(prefix: str, n: int) -> List[str]:
    return [f"{prefix}{i + 1}{j + 1}" for i in range(n) for j in range(n)]


def path_rows(result: PathResult) -> Iterable[List[Any]]:
    for step in result:
        yield [step.t, *flatten(step.stress), *flatten(step.plastic.matrix), step.lambda_plus,
               step.kkt["yield_residual"], step.verdict]


def cmd_path(config: PathConfig, ctx: RunContext) -> int:
    path = config.build_path(config.formulation, ctx.config_manager.radius_factor(config.formulation))
    logger.info(f"Driving {len(path)} samples with the {config.formulation} formulation")
    result = drive_path(path, probe_ellipticity=config.probe_ellipticity,
                        angular_resolution=config.angular_resolution, settings=ctx.settings)
    n = path.kind.n
    out = ctx.output("path.csv")
    if out:
        header = ["t", *_component_names("s", n), *_component_names("p", n), "lambda_plus",
                  "yield_residual", "verdict"]
        write_csv(out, header, path_rows(result))
    summary = {"yield_surface": path.yield_surface.to_dict(), "kind": path.kind.to_dict(), **result.to_dict()}
    _emit(ctx, "path", summary)
    return 0


def cmd_compare(config: CompareConfig, ctx: RunContext) -> int:
    paths = [config.build_path(name, ctx.config_manager.radius_factor(name)) for name in config.formulations]

    def run(path) -> PathResult:
        return drive_path(path, probe_ellipticity=config.probe_ellipticity,
                          angular_resolution=config.angular_resolution, settings=ctx.settings)

    results: List[PathResult] = ctx.map(run, paths)
    n = paths[0].kind.n
    header = ["t"]
    for name in config.formulations:
        header += [*_component_names(f"{name}_s", n), f"{name}_energy", f"{name}_plastic_norm",
                   f"{name}_verdict"]
    rows = []
    for index, t in enumerate(paths[0].times):
        row: List[Any] = [float(t)]
        for result in results:
            step = result[index]
            row += [*flatten(step.stress), step.energy, _plastic_strain_norm(step), step.verdict]
        rows.append(row)
    out = ctx.output("compare.csv")
    if out:
        write_csv(out, header, rows)
    summary = {"formulations": {name: {"yield_surface": path.yield_surface.to_dict(), **result.to_dict()}
                                for name, path, result in zip(config.formulations, paths, results)}}
    _emit(ctx, "compare", summary)
    return 0


COMMANDS = {
    "eval": cmd_eval,
    "counterexample": cmd_counterexample,
    "scan": cmd_scan,
    "path": cmd_path,
    "compare": cmd_compare,
}


def _seed(value: str) -> int:
    try:
        return ConfigManager.check_seed(int(value))
    except (ValueError, ConfigError) as e:
        raise argparse.ArgumentTypeError(str(e))


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="子命令配置 JSON")
    common.add_argument("--out", help="输出目录（CSV/JSON）")
    common.add_argument("--threads", type=int, default=None, help="工作线程数，0 为自动")
    common.add_argument("--seed", type=_seed, default=None, help="随机扫描的种子，默认取设置中的 seed")
    common.add_argument("--settings", help="数值设置 JSON（默认 ~/.logstrain.json）")
    common.add_argument("--log-level", default="WARNING", help="日志级别")
    common.add_argument("--log-dir", help="日志文件目录")

    parser = argparse.ArgumentParser(prog="logstrain",
                                     description="对数应变弹塑性与秩一凸性工具")
    subparsers = parser.add_subparsers(dest="command", required=True)
    subparsers.add_parser("eval", parents=[common], help="计算能量与应力")
    subparsers.add_parser("counterexample", parents=[common], help="简单剪切反例曲线")
    subparsers.add_parser("scan", parents=[common], help="秩一凸性扫描")
    subparsers.add_parser("path", parents=[common], help="驱动塑性路径")
    subparsers.add_parser("compare", parents=[common], help="比较流动格式")
    return parser


@handle_errors
def run(args: argparse.Namespace) -> int:
    if args.settings is not None and not os.path.exists(args.settings):
        raise ConfigError(f"settings file not found: {args.settings}")
    config_manager = ConfigManager(args.settings)
    settings = config_manager.get_all()
    threads = int(settings["threads"]) if args.threads is None else args.threads
    if threads < 0:
        raise ConfigError("--threads must be >= 0")
    seed = int(settings["seed"]) if args.seed is None else args.seed
    ctx = RunContext(out_dir=args.out, threads=threads, seed=seed, settings=settings,
                     config_manager=config_manager)
    defaults = settings["counterexample"] if args.command == "counterexample" else None
    config = load_run_config(args.command, args.config, defaults)
    logger.info(f"Running {args.command}")
    code = COMMANDS[args.command](config, ctx)
    logger.info(f"{args.command} finished")
    return code


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    log = Logger(args.log_level, args.log_dir)
    try:
        return run(args)
    finally:
        log.close()


if __name__ == "__main__":
    sys.exit(main())

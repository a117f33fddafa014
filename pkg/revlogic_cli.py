#!/usr/bin/env python3
"""
可逆逻辑工具包 - 命令行入口
- sim / check / cost：对网表文件做仿真、校验与代价统计
- faults scan：单比特翻转故障扫描
- alu build / alu verify：生成与校验两种容错 ALU
- tables：重算代价对照表

退出码：0 成功，1 校验未通过，2 用法/解析/位宽错误
"""

import os
import sys
import logging
import argparse
from typing import List, Optional

from env_utils import load_env_file
from revlogic import (
    RevLogicConfig,
    RevLogicError,
    NetlistFormatError,
    FtfaVariant,
    get_config,
    set_config,
)
from revlogic.rl_alu import build_alu, compare_costs, format_cost_tables, table_for, verify_function_table
from revlogic.rl_dsl import dumps, parse
from revlogic.rl_faults import fault_scan
from revlogic.rl_gates import BitVector, catalog_summary
from revlogic.rl_netlist import (
    Netlist,
    cost_report,
    simulate,
    simulate_lines,
    verify_bijective,
    verify_parity_preserving,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2

IN_HELP = ("输入位串，第 k 个字符驱动第 k 条声明的主输入线（按文件中的声明顺序，"
           "第一个字符对应第一条 in 线）")


def parse_arguments(argv: Optional[List[str]] = None) -> argparse.Namespace:
    """解析命令行参数"""
    parser = argparse.ArgumentParser(prog="revlogic", description="保奇偶可逆逻辑与容错 ALU 工具")
    parser.add_argument("--config", type=str, default="config.json", help="配置文件路径")
    parser.add_argument("-v", "--verbose", action="store_true", help="输出调试日志")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sim", help="仿真网表")
    p.add_argument("file", help="网表文件，- 表示标准输入")
    p.add_argument("--in", dest="bits", required=True, help=IN_HELP)
    p.add_argument("--lines", action="store_true", help="同时输出全部线的最终取值")

    p = sub.add_parser("check", help="双射与保奇偶校验")
    p.add_argument("file", help="网表文件，- 表示标准输入")

    p = sub.add_parser("cost", help="代价指标")
    p.add_argument("file", help="网表文件，- 表示标准输入")

    faults = sub.add_parser("faults", help="故障注入").add_subparsers(dest="action", required=True)
    p = faults.add_parser("scan", help="单比特翻转故障扫描")
    p.add_argument("file", help="网表文件，- 表示标准输入")
    p.add_argument("--samples", type=int, help="抽样向量数，缺省时在上限内穷举")
    p.add_argument("--seed", type=int, help="抽样随机种子")
    p.add_argument("--workers", type=int, help="扫描线程数")

    alu = sub.add_parser("alu", help="容错 ALU").add_subparsers(dest="action", required=True)
    for name, text in (("build", "生成 ALU 网表"), ("verify", "校验 ALU 功能表")):
        p = alu.add_parser(name, help=text)
        p.add_argument("--design", type=int, choices=[1, 2], required=True, help="ALU 设计")
        p.add_argument("--width", type=int, required=True, help="位数")
        p.add_argument("--fa", type=str, default=FtfaVariant.PPPG_6.value,
                       choices=[v.value for v in FtfaVariant], help="全加器结构")
        if name == "build":
            p.add_argument("-o", "--output", type=str, help="输出文件路径，缺省写到标准输出")

    sub.add_parser("tables", help="重算代价对照表")
    sub.add_parser("gates", help="列出门目录")

    return parser.parse_args(argv)


def validate_arguments(args: argparse.Namespace) -> bool:
    """验证命令行参数"""
    if getattr(args, "width", 1) < 1:
        logger.error(f"位数必须为正数: {args.width}")
        return False
    if getattr(args, "samples", None) is not None and args.samples < 1:
        logger.error(f"抽样数必须为正数: {args.samples}")
        return False
    if getattr(args, "workers", None) is not None and args.workers < 1:
        logger.error(f"线程数必须为正数: {args.workers}")
        return False
    output = getattr(args, "output", None)
    if output and os.path.dirname(output) and not os.path.isdir(os.path.dirname(output)):
        logger.error(f"输出目录不存在: {os.path.dirname(output)}")
        return False
    return True


def _setup_logging(config: RevLogicConfig, verbose: bool = False) -> None:
    level = logging.DEBUG if verbose else getattr(logging, config.log_level.upper(), logging.INFO)
    handlers: List[logging.Handler] = [logging.StreamHandler(sys.stderr)]
    if config.log_file:
        handlers.append(logging.FileHandler(config.log_file, encoding="utf-8"))
    logging.basicConfig(
        level=level,
        format='%(asctime)s - %(levelname)s - %(message)s',
        datefmt='%Y-%m-%d %H:%M:%S',
        handlers=handlers,
        force=True,
    )


def _load_config(config_path: str) -> RevLogicConfig:
    load_env_file()
    if os.path.exists(config_path):
        config = RevLogicConfig.from_config_file(config_path)
    else:
        config = RevLogicConfig()
    return config.with_env_overrides()


def _read_netlist(path: str) -> Netlist:
    if path == "-":
        text = sys.stdin.read()
    else:
        with open(path, 'rb') as f:
            text = f.read()
    result = parse(text)
    for diag in result.diagnostics:
        print(f"{path}:{diag}", file=sys.stderr)
    if not result.ok:
        raise NetlistFormatError(f"无法解析网表文件 {path}", result.diagnostics)
    return result.document.netlist


def _yes_no(flag: bool) -> str:
    return "yes" if flag else "no"


def run_sim(args: argparse.Namespace) -> int:
    net = _read_netlist(args.file)
    bits = BitVector.from_string(args.bits)
    outputs = simulate(net, bits)
    print(f"out {outputs}")
    for name, value in net.read(outputs).items():
        print(f"{name}={value}")
    if args.lines:
        finals = simulate_lines(net, bits)
        print(f"lines {finals}")
        for line, value in zip(net.lines, finals):
            print(f"line {line.name}={value}")
    return EXIT_OK


def run_check(args: argparse.Namespace) -> int:
    net = _read_netlist(args.file)
    limit = get_config().exhaustive_limit
    ok = True

    if len(net.lines) <= limit:
        bijective = verify_bijective(net)
        ok &= bijective
        print(f"{'bijective':<22}{_yes_no(bijective)}")
    else:
        print(f"{'bijective':<22}skipped ({len(net.lines)} lines > {limit})")

    structural = verify_parity_preserving(net, "structural")
    ok &= structural.ok
    detail = "" if structural.ok else f" (gate {structural.offending_gate})"
    print(f"{'parity (structural)':<22}{_yes_no(structural.ok)}{detail}")

    width = len(net.input_positions)
    if width <= limit:
        exhaustive = verify_parity_preserving(net, "exhaustive")
        ok &= exhaustive.ok
        detail = "" if exhaustive.ok else f" (input {exhaustive.counterexample})"
        print(f"{'parity (exhaustive)':<22}{_yes_no(exhaustive.ok)}{detail}")
    else:
        print(f"{'parity (exhaustive)':<22}skipped ({width} inputs > {limit})")
    return EXIT_OK if ok else EXIT_FAILED


def run_cost(args: argparse.Namespace) -> int:
    report = cost_report(_read_netlist(args.file))
    print(report.format_table())
    print()
    for item in report.key_values():
        print(item)
    return EXIT_OK


def run_faults(args: argparse.Namespace) -> int:
    net = _read_netlist(args.file)
    config = get_config()
    samples = args.samples
    if samples is None and len(net.input_positions) > config.exhaustive_limit:
        samples = config.fault_samples
        logger.info(f"主输入 {len(net.input_positions)} 位超过穷举上限，改为抽样 {samples} 个向量")
    report = fault_scan(net, samples=samples, seed=args.seed, workers=args.workers)
    print(report.format(net))
    return EXIT_OK if report.fully_detected else EXIT_FAILED


def run_alu(args: argparse.Namespace) -> int:
    variant = FtfaVariant.from_tag(args.fa)
    net = build_alu(args.design, args.width, variant)
    if args.action == "build":
        text = dumps(net, [("design", args.design), ("width", args.width), ("fa", variant.value)])
        if args.output:
            with open(args.output, 'w', encoding='utf-8') as f:
                f.write(text)
            logger.info(f"ALU 网表已写入: {args.output}")
        else:
            sys.stdout.write(text)
        return EXIT_OK

    report = verify_function_table(net, table_for(args.design), args.width)
    print(report.format())
    return EXIT_OK if report.passed else EXIT_FAILED


def run_tables(args: argparse.Namespace) -> int:
    comparisons = compare_costs()
    print(format_cost_tables(comparisons))
    return EXIT_OK if all(c.ok for c in comparisons) else EXIT_FAILED


def run_gates(args: argparse.Namespace) -> int:
    print(f"{'gate':<10}{'arity':<7}{'QC':<13}parity-preserving")
    for name, info in catalog_summary().items():
        print(f"{name:<10}{info['arity']:<7}{str(info['quantum_cost']):<13}"
              f"{_yes_no(info['parity_preserving'])}")
    return EXIT_OK


HANDLERS = {
    "sim": run_sim,
    "check": run_check,
    "cost": run_cost,
    "faults": run_faults,
    "alu": run_alu,
    "tables": run_tables,
    "gates": run_gates,
}


def main(argv: Optional[List[str]] = None) -> int:
    """主函数，返回退出码"""
    try:
        args = parse_arguments(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE

    try:
        config = _load_config(args.config)
    except ValueError as e:
        print(f"❌ 配置无效: {e}", file=sys.stderr)
        return EXIT_USAGE
    set_config(config)
    try:
        _setup_logging(config, args.verbose)
    except OSError as e:
        print(f"❌ 无法打开日志文件 {config.log_file}: {e}", file=sys.stderr)
        return EXIT_USAGE

    if not validate_arguments(args):
        logger.error("参数验证失败")
        return EXIT_USAGE

    logger.debug(f"执行命令: {args.command}，配置文件: {args.config}")
    try:
        return HANDLERS[args.command](args)
    except NetlistFormatError as e:
        logger.error(f"{e}，共 {len(e.diagnostics)} 条诊断")
        return EXIT_USAGE
    except (RevLogicError, ValueError) as e:
        logger.error(f"命令执行失败: {e}")
        return EXIT_USAGE
    except OSError as e:
        logger.error(f"文件读写失败: {e}")
        return EXIT_USAGE
    except KeyboardInterrupt:
        logger.info("程序被用户中断")
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())

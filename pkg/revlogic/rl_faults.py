#!/usr/bin/env python3
"""
故障注入模块 - 单比特翻转故障与全线奇偶检测

故障模型：某一段线上的一次瞬态翻转。
检测量：全部最终线值的异或 与 全部初始线值的异或 是否不同。
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from .rl_config import get_config
from .rl_errors import FaultSiteError
from .rl_gates import BitVector
from .rl_netlist import (
    InputLike,
    Netlist,
    _as_row,
    _check_bound,
    evaluate_lines,
    initial_states,
    input_space,
)

logger = logging.getLogger(__name__)

INPUT_FAULT = -1


@dataclass(frozen=True, order=True)
class FaultSite:
    """
    gate_index >= 0：在该门执行后翻转其第 line_index 个绑定线；
    gate_index == -1：在任何门执行前翻转第 line_index 条线（绝对线号）。
    """
    gate_index: int
    line_index: int

    @property
    def is_input_fault(self) -> bool:
        return self.gate_index == INPUT_FAULT

    def resolve(self, net: Netlist) -> int:
        """校验位置并返回被翻转的绝对线号"""
        if self.is_input_fault:
            if not 0 <= self.line_index < len(net.lines):
                raise FaultSiteError(f"输入故障线号 {self.line_index} 超出范围 0..{len(net.lines) - 1}")
            return self.line_index
        if not 0 <= self.gate_index < len(net.gates):
            raise FaultSiteError(f"门序号 {self.gate_index} 超出范围，网表共 {len(net.gates)} 个门")
        inst = net.gates[self.gate_index]
        if not 0 <= self.line_index < inst.gate.arity:
            raise FaultSiteError(
                f"第 {self.gate_index} 个门 {inst.gate.name} 只有 {inst.gate.arity} 个端口，"
                f"收到端口 {self.line_index}")
        return inst.bindings[self.line_index]

    def describe(self, net: Netlist) -> str:
        line = net.lines[self.resolve(net)].name
        if self.is_input_fault:
            return f"input:{line}"
        return f"gate{self.gate_index}({net.gates[self.gate_index].gate.name}):{line}"


def fault_sites(net: Netlist) -> List[FaultSite]:
    """全部故障位置：每条线的输入端，加上每个门的每个输出端"""
    sites = [FaultSite(INPUT_FAULT, j) for j in range(len(net.lines))]
    for g, inst in enumerate(net.gates):
        sites.extend(FaultSite(g, p) for p in range(inst.gate.arity))
    return sites


def _run_with_fault(net: Netlist, states: np.ndarray, site: FaultSite) -> np.ndarray:
    line = site.resolve(net)
    states = states.copy()
    if site.is_input_fault:
        states[:, line] ^= 1
        return evaluate_lines(net, states)
    evaluate_lines(net, states, 0, site.gate_index + 1)
    states[:, line] ^= 1
    return evaluate_lines(net, states, site.gate_index + 1)


def simulate_with_fault(net: Netlist, inputs: InputLike, site: FaultSite) -> BitVector:
    """注入一次翻转后的全部最终线值"""
    states = initial_states(net, _as_row(net, inputs))
    finals = _run_with_fault(net, states, site)
    return BitVector(tuple(int(b) for b in finals[0]))


@dataclass(frozen=True)
class SiteResult:
    site: FaultSite
    trials: int
    detected: int
    undetected_example: Optional[BitVector] = None

    @property
    def fully_detected(self) -> bool:
        return self.detected == self.trials


@dataclass(frozen=True)
class FaultScanReport:
    mode: str
    vectors: int
    results: Tuple[SiteResult, ...]
    false_alarms: int = 0

    @property
    def total_sites(self) -> int:
        return len(self.results)

    @property
    def total_trials(self) -> int:
        return sum(r.trials for r in self.results)

    @property
    def total_detected(self) -> int:
        return sum(r.detected for r in self.results)

    @property
    def undetected_sites(self) -> List[FaultSite]:
        return [r.site for r in self.results if not r.fully_detected]

    @property
    def detection_rate(self) -> float:
        return self.total_detected / self.total_trials if self.total_trials else 1.0

    @property
    def fully_detected(self) -> bool:
        return not self.undetected_sites and self.false_alarms == 0

    def format(self, net: Optional[Netlist] = None) -> str:
        lines = [
            f"mode           {self.mode}",
            f"vectors        {self.vectors}",
            f"sites          {self.total_sites}",
            f"trials         {self.total_trials}",
            f"detected       {self.total_detected}",
            f"detection      {self.detection_rate:.2%}",
            f"false alarms   {self.false_alarms}",
        ]
        missed = [r for r in self.results if not r.fully_detected]
        if missed:
            lines.append(f"undetected     {len(missed)} sites")
            for r in missed:
                where = r.site.describe(net) if net is not None else f"({r.site.gate_index}, {r.site.line_index})"
                lines.append(f"  {where:<28}{r.trials - r.detected}/{r.trials} missed, e.g. input {r.undetected_example}")
        return "\n".join(lines)


def _scan_site(net: Netlist, states: np.ndarray, before: np.ndarray, inputs: np.ndarray,
               site: FaultSite) -> SiteResult:
    after = _run_with_fault(net, states, site).sum(axis=1) & 1
    missed = np.flatnonzero(after == before)
    example = None
    if missed.size and inputs.shape[1]:
        example = BitVector(tuple(int(b) for b in inputs[missed[0]]))
    return SiteResult(site, int(before.size), int(before.size - missed.size), example)


def fault_scan(net: Netlist, samples: Optional[int] = None, seed: Optional[int] = None,
               workers: Optional[int] = None, limit: Optional[int] = None) -> FaultScanReport:
    """
    对每个故障位置、每个输入向量注入一次翻转并比较全线奇偶。
    samples 为 None 时穷举全部主输入，否则按 seed 抽取 samples 个向量（可复现）。
    """
    config = get_config()
    workers = config.workers if workers is None else workers
    width = len(net.input_positions)

    if samples is None:
        _check_bound(width, limit, "故障穷举扫描")
        if seed is not None:
            logger.warning(f"穷举模式不使用随机种子，已忽略 seed={seed}")
        inputs = input_space(width)
        mode = "exhaustive"
    else:
        if samples < 1:
            raise ValueError(f"抽样数必须为正数，收到: {samples}")
        seed = config.fault_seed if seed is None else seed
        rng = np.random.default_rng(seed)
        inputs = rng.integers(0, 2, size=(samples, width), dtype=np.uint8)
        mode = f"sampled(k={samples}, seed={seed})"

    states = initial_states(net, inputs)
    before = states.sum(axis=1) & 1
    clean = evaluate_lines(net, states.copy()).sum(axis=1) & 1
    false_alarms = int(np.count_nonzero(clean != before))
    if false_alarms:
        logger.warning(f"无故障运行出现 {false_alarms} 次奇偶不一致，网表不保奇偶")

    sites = fault_sites(net)
    logger.info(f"故障扫描开始: {len(sites)} 个位置 x {inputs.shape[0]} 个向量, 线程数 {workers}")
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            results = list(executor.map(lambda s: _scan_site(net, states, before, inputs, s), sites))
    else:
        results = [_scan_site(net, states, before, inputs, s) for s in sites]

    report = FaultScanReport(mode, int(inputs.shape[0]), tuple(results), false_alarms)
    logger.info(f"故障扫描完成: 检出率 {report.detection_rate:.2%}, "
                f"未完全检出位置 {len(report.undetected_sites)} 个")
    return report

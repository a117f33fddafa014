#!/usr/bin/env python3
"""
网表模块 - 门级联的表示、批量仿真、真值表、校验与代价指标

仿真引擎以 numpy 数组承载一批输入向量的线状态，形状为 (batch, 线数)，
每个门按其置换表对所绑定的线做一次查表。
"""

import logging
from dataclasses import dataclass, replace
from enum import Enum
from functools import lru_cache
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from .rl_config import get_config
from .rl_errors import ArityError, CapacityError, WiringError
from .rl_gates import (
    UNSPECIFIED,
    BitVector,
    Gate,
    get_gate,
    inverse,
    is_parity_preserving,
)

logger = logging.getLogger(__name__)

InputLike = Union[BitVector, Sequence[int]]


class Source(Enum):
    """线的输入角色"""
    INPUT = "in"
    CONST0 = "const0"
    CONST1 = "const1"


def signal_of(name: str) -> str:
    """主输入名 "sig@tap" 由外部信号 sig 驱动"""
    return name.split("@", 1)[0]


@dataclass(frozen=True)
class Line:
    """一条电路线：输入角色 + 输出角色（output 为 None 表示垃圾输出）"""
    name: str
    source: Source = Source.INPUT
    output: Optional[str] = None

    @property
    def is_constant(self) -> bool:
        return self.source is not Source.INPUT

    @property
    def is_garbage(self) -> bool:
        return self.output is None

    @property
    def constant_value(self) -> Optional[int]:
        if self.source is Source.CONST0:
            return 0
        if self.source is Source.CONST1:
            return 1
        return None


@dataclass(frozen=True)
class GateInstance:
    gate: Gate
    bindings: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "bindings", tuple(self.bindings))


@dataclass(frozen=True)
class Netlist:
    """门级联；gates 的顺序即求值顺序"""
    lines: Tuple[Line, ...]
    gates: Tuple[GateInstance, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "lines", tuple(self.lines))
        object.__setattr__(self, "gates", tuple(self.gates))
        if not self.lines:
            raise WiringError("网表至少需要一条线")

        seen = set()
        outputs = set()
        for line in self.lines:
            if line.name in seen:
                raise WiringError(f"线名重复: {line.name}")
            seen.add(line.name)
            if line.output is not None:
                if line.output in outputs:
                    raise WiringError(f"功能输出名重复: {line.output}")
                outputs.add(line.output)

        count = len(self.lines)
        for position, inst in enumerate(self.gates):
            if len(inst.bindings) != inst.gate.arity:
                raise ArityError(
                    f"第 {position} 个门 {inst.gate.name} 需要绑定 {inst.gate.arity} 条线，"
                    f"实际 {len(inst.bindings)} 条")
            if len(set(inst.bindings)) != len(inst.bindings):
                raise WiringError(f"第 {position} 个门 {inst.gate.name} 重复绑定同一条线")
            if any(not 0 <= b < count for b in inst.bindings):
                raise WiringError(f"第 {position} 个门 {inst.gate.name} 绑定了不存在的线")

    # ------------------------------------------------------------------
    # 端口视图
    # ------------------------------------------------------------------

    @property
    def line_names(self) -> Tuple[str, ...]:
        return tuple(line.name for line in self.lines)

    @property
    def input_positions(self) -> Tuple[int, ...]:
        return tuple(i for i, line in enumerate(self.lines) if not line.is_constant)

    @property
    def output_positions(self) -> Tuple[int, ...]:
        return tuple(i for i, line in enumerate(self.lines) if not line.is_garbage)

    @property
    def inputs(self) -> Tuple[str, ...]:
        """主输入线名（声明顺序）"""
        return tuple(self.lines[i].name for i in self.input_positions)

    @property
    def outputs(self) -> Tuple[str, ...]:
        """功能输出名（声明顺序）"""
        return tuple(self.lines[i].output for i in self.output_positions)

    @property
    def signals(self) -> Tuple[str, ...]:
        """驱动主输入的外部信号名，去重后保持首次出现的顺序"""
        ordered: Dict[str, None] = {}
        for name in self.inputs:
            ordered.setdefault(signal_of(name), None)
        return tuple(ordered)

    def line_index(self, name: str) -> int:
        for i, line in enumerate(self.lines):
            if line.name == name:
                return i
        raise WiringError(f"未声明的线: {name}")

    def drive(self, values: Mapping[str, int]) -> BitVector:
        """按外部信号名生成主输入向量"""
        missing = [s for s in self.signals if s not in values]
        if missing:
            raise ArityError(f"缺少输入信号: {', '.join(missing)}")
        return BitVector(tuple(values[signal_of(name)] for name in self.inputs))

    def read(self, outputs: BitVector) -> Dict[str, int]:
        """把功能输出向量还原为 名称 -> 位"""
        names = self.outputs
        if outputs.width != len(names):
            raise ArityError(f"输出宽度 {outputs.width} 与功能输出数 {len(names)} 不一致")
        return dict(zip(names, outputs.bits))

    # ------------------------------------------------------------------
    # 变换
    # ------------------------------------------------------------------

    def relabel(self, prefix: str = "", lines: Optional[Mapping[str, str]] = None,
                outputs: Optional[Mapping[str, str]] = None) -> "Netlist":
        """重命名线与功能输出；未在映射中出现的名字加前缀"""
        lines = lines or {}
        outputs = outputs or {}
        for name in lines:
            self.line_index(name)
        known_outputs = set(self.outputs)
        for name in outputs:
            if name not in known_outputs:
                raise WiringError(f"未声明的功能输出: {name}")
        renamed = tuple(
            replace(line,
                    name=lines.get(line.name, prefix + line.name),
                    output=None if line.output is None else outputs.get(line.output, prefix + line.output))
            for line in self.lines)
        return Netlist(renamed, self.gates)

    def discard(self, *names: str) -> "Netlist":
        """把指定的功能输出降为垃圾输出"""
        known = set(self.outputs)
        unknown = [n for n in names if n not in known]
        if unknown:
            raise WiringError(f"未声明的功能输出: {', '.join(unknown)}")
        drop = set(names)
        return Netlist(
            tuple(replace(line, output=None) if line.output in drop else line for line in self.lines),
            self.gates)


class NetlistBuilder:
    """按线名逐步搭建网表，build() 后冻结"""

    def __init__(self):
        self._lines: List[Line] = []
        self._index: Dict[str, int] = {}
        self._gates: List[GateInstance] = []

    def _add_line(self, line: Line) -> str:
        if line.name in self._index:
            raise WiringError(f"线名重复: {line.name}")
        self._index[line.name] = len(self._lines)
        self._lines.append(line)
        return line.name

    def add_input(self, name: str) -> str:
        return self._add_line(Line(name, Source.INPUT))

    def add_constant(self, name: str, value: int = 0) -> str:
        if value not in (0, 1):
            raise ValueError(f"常量只能为0或1，收到: {value!r}")
        return self._add_line(Line(name, Source.CONST1 if value else Source.CONST0))

    def add_gate(self, gate: Union[str, Gate], *line_names: str) -> "NetlistBuilder":
        if isinstance(gate, str):
            gate = get_gate(gate)
        try:
            bindings = tuple(self._index[name] for name in line_names)
        except KeyError as e:
            raise WiringError(f"未声明的线: {e.args[0]}") from None
        self._gates.append(GateInstance(gate, bindings))
        return self

    def set_output(self, line_name: str, output_name: str) -> "NetlistBuilder":
        if line_name not in self._index:
            raise WiringError(f"未声明的线: {line_name}")
        i = self._index[line_name]
        self._lines[i] = replace(self._lines[i], output=output_name)
        return self

    def build(self) -> Netlist:
        return Netlist(tuple(self._lines), tuple(self._gates))


@dataclass(frozen=True)
class CostReport:
    """网表的六项结构指标"""
    gate_count: int
    garbage_outputs: int
    constant_inputs: int
    quantum_cost: Optional[int]
    depth: int
    line_count: int

    def as_dict(self) -> Dict[str, object]:
        return {
            "GC": self.gate_count,
            "GO": self.garbage_outputs,
            "CI": self.constant_inputs,
            "QC": UNSPECIFIED if self.quantum_cost is None else self.quantum_cost,
            "depth": self.depth,
            "LC": self.line_count,
        }

    def key_values(self) -> List[str]:
        return [f"{key}={value}" for key, value in self.as_dict().items()]

    def format_table(self) -> str:
        labels = {
            "GC": "gate count",
            "GO": "garbage outputs",
            "CI": "constant inputs",
            "QC": "quantum cost",
            "depth": "depth",
            "LC": "line count",
        }
        return "\n".join(f"{labels[key]:<18}{key:<7}{value}" for key, value in self.as_dict().items())


@dataclass(frozen=True)
class ParityVerdict:
    """奇偶校验结论；structural 模式给出违例门，exhaustive 模式给出反例输入"""
    ok: bool
    mode: str
    offending_gate: Optional[int] = None
    counterexample: Optional[BitVector] = None

    def __bool__(self) -> bool:
        return self.ok


# ---------------------------------------------------------------------------
# 批量仿真引擎
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _lookup(gate: Gate) -> np.ndarray:
    return np.asarray(gate.table, dtype=np.int64)


@lru_cache(maxsize=64)
def _shifts(width: int) -> np.ndarray:
    return np.arange(width, dtype=np.int64)


def input_space(width: int) -> np.ndarray:
    """按整数升序列出全部 width 位输入，形状 (2^width, width)"""
    codes = np.arange(1 << width, dtype=np.int64)
    return ((codes[:, None] >> _shifts(width)) & 1).astype(np.uint8)


def pack_rows(matrix: np.ndarray) -> np.ndarray:
    """每行按下标0为最低位打包成整数"""
    return (matrix.astype(np.int64) << _shifts(matrix.shape[1])).sum(axis=1)


def initial_states(net: Netlist, inputs: np.ndarray) -> np.ndarray:
    """由主输入矩阵 (batch, 主输入数) 构造初始线状态"""
    inputs = np.asarray(inputs, dtype=np.uint8)
    if inputs.ndim != 2 or inputs.shape[1] != len(net.input_positions):
        raise ArityError(f"需要 {len(net.input_positions)} 位主输入，收到形状 {inputs.shape}")
    states = np.zeros((inputs.shape[0], len(net.lines)), dtype=np.uint8)
    states[:, list(net.input_positions)] = inputs
    for i, line in enumerate(net.lines):
        if line.source is Source.CONST1:
            states[:, i] = 1
    return states


def evaluate_lines(net: Netlist, states: np.ndarray, start: int = 0,
                   stop: Optional[int] = None) -> np.ndarray:
    """原地执行 gates[start:stop]，返回同一数组"""
    for inst in net.gates[start:stop]:
        bound = list(inst.bindings)
        shifts = _shifts(len(bound))
        packed = (states[:, bound].astype(np.int64) << shifts).sum(axis=1)
        out = _lookup(inst.gate)[packed]
        states[:, bound] = ((out[:, None] >> shifts) & 1).astype(np.uint8)
    return states


def simulate_batch(net: Netlist, inputs: np.ndarray) -> np.ndarray:
    """一批主输入 -> 功能输出矩阵 (batch, 功能输出数)"""
    states = evaluate_lines(net, initial_states(net, inputs))
    return states[:, list(net.output_positions)]


def _as_row(net: Netlist, inputs: InputLike) -> np.ndarray:
    bits = tuple(inputs.bits) if isinstance(inputs, BitVector) else tuple(inputs)
    expected = len(net.input_positions)
    if len(bits) != expected:
        raise ArityError(f"需要 {expected} 位主输入，收到 {len(bits)} 位")
    if any(b not in (0, 1) for b in bits):
        raise ValueError(f"主输入只能包含0或1: {bits}")
    return np.asarray([bits], dtype=np.uint8).reshape(1, expected)


def simulate(net: Netlist, inputs: InputLike) -> BitVector:
    """返回功能输出（按声明顺序）"""
    if not net.output_positions:
        raise WiringError("网表没有声明功能输出")
    return BitVector(tuple(int(b) for b in simulate_batch(net, _as_row(net, inputs))[0]))


def simulate_lines(net: Netlist, inputs: InputLike) -> BitVector:
    """返回全部线的最终取值"""
    states = evaluate_lines(net, initial_states(net, _as_row(net, inputs)))
    return BitVector(tuple(int(b) for b in states[0]))


def _check_bound(width: int, limit: Optional[int], what: str) -> int:
    limit = get_config().exhaustive_limit if limit is None else limit
    if width > limit:
        raise CapacityError(f"{what} 需要穷举 {width} 位，超过上限 {limit}")
    return limit


def truth_table(net: Netlist, limit: Optional[int] = None) -> Dict[BitVector, BitVector]:
    """穷举所有主输入（整数升序），返回 输入 -> 功能输出"""
    width = len(net.input_positions)
    _check_bound(width, limit, "真值表")
    if width == 0 or not net.output_positions:
        raise WiringError("真值表要求至少一个主输入和一个功能输出")
    space = input_space(width)
    outs = simulate_batch(net, space)
    return {
        BitVector(tuple(int(b) for b in row_in)): BitVector(tuple(int(b) for b in row_out))
        for row_in, row_out in zip(space, outs)
    }


def verify_parity_preserving(net: Netlist, mode: str = "structural",
                             limit: Optional[int] = None) -> ParityVerdict:
    """structural：逐门检查；exhaustive：穷举主输入比较全线奇偶"""
    if mode == "structural":
        for position, inst in enumerate(net.gates):
            if not is_parity_preserving(inst.gate):
                logger.debug(f"第 {position} 个门 {inst.gate.name} 不保奇偶")
                return ParityVerdict(False, mode, offending_gate=position)
        return ParityVerdict(True, mode)
    if mode != "exhaustive":
        raise ValueError(f"未知的校验模式: {mode}")

    width = len(net.input_positions)
    _check_bound(width, limit, "奇偶穷举校验")
    space = input_space(width)
    states = initial_states(net, space)
    before = states.sum(axis=1) & 1
    after = evaluate_lines(net, states).sum(axis=1) & 1
    bad = np.flatnonzero(before != after)
    if bad.size:
        row = space[bad[0]]
        example = BitVector(tuple(int(b) for b in row)) if width else None
        return ParityVerdict(False, mode, counterexample=example)
    return ParityVerdict(True, mode)


def verify_bijective(net: Netlist, limit: Optional[int] = None) -> bool:
    """把全部线（含常量线）视为自由输入，检查整体映射是否为双射"""
    width = len(net.lines)
    _check_bound(width, limit, "双射校验")
    finals = evaluate_lines(net, input_space(width))
    return np.unique(pack_rows(finals)).size == (1 << width)


def gate_levels(net: Netlist) -> List[int]:
    """分层：门的层号 = 1 + 之前共享任一条线的门的最大层号"""
    last: Dict[int, int] = {}
    levels = []
    for inst in net.gates:
        level = 1 + max((last.get(b, 0) for b in inst.bindings), default=0)
        for b in inst.bindings:
            last[b] = level
        levels.append(level)
    return levels


def cost_report(net: Netlist) -> CostReport:
    qc: Optional[int] = 0
    for inst in net.gates:
        if inst.gate.quantum_cost is None:
            qc = None
            break
        qc += inst.gate.quantum_cost
    return CostReport(
        gate_count=len(net.gates),
        garbage_outputs=sum(1 for line in net.lines if line.is_garbage),
        constant_inputs=sum(1 for line in net.lines if line.is_constant),
        quantum_cost=qc,
        depth=max(gate_levels(net), default=0),
        line_count=len(net.lines),
    )


def compose(first: Netlist, second: Netlist, line_map: Mapping[str, str]) -> Netlist:
    """
    串接两个网表：line_map 把 first 的功能输出名映射到 second 的主输入线名。
    被连接的线沿用 first 的线名，输出角色取 second 中对应线的角色；
    未连接的端口原样保留，空映射即并联。
    """
    first_outputs = {line.output: i for i, line in enumerate(first.lines) if line.output is not None}
    second_index = {line.name: i for i, line in enumerate(second.lines)}

    merged: Dict[int, int] = {}
    for out_name, in_name in line_map.items():
        if out_name not in first_outputs:
            raise WiringError(f"悬空连接：前级没有功能输出 {out_name}")
        if in_name not in second_index:
            raise WiringError(f"悬空连接：后级没有线 {in_name}")
        j = second_index[in_name]
        if second.lines[j].is_constant:
            raise WiringError(f"后级线 {in_name} 是常量线，不能作为连接目标")
        if j in merged:
            raise WiringError(f"后级线 {in_name} 被重复连接")
        merged[j] = first_outputs[out_name]

    takeover = {i: second.lines[j].output for j, i in merged.items()}
    lines = [replace(line, output=takeover[i]) if i in takeover else line
             for i, line in enumerate(first.lines)]

    remap: Dict[int, int] = {}
    for j, line in enumerate(second.lines):
        if j in merged:
            remap[j] = merged[j]
        else:
            remap[j] = len(lines)
            lines.append(line)

    gates = list(first.gates)
    gates.extend(GateInstance(inst.gate, tuple(remap[b] for b in inst.bindings)) for inst in second.gates)
    return Netlist(tuple(lines), tuple(gates))


def parallel(nets: Iterable[Netlist]) -> Netlist:
    """并联若干网表"""
    nets = list(nets)
    if not nets:
        raise WiringError("并联至少需要一个网表")
    result = nets[0]
    for net in nets[1:]:
        result = compose(result, net, {})
    return result


def reverse(net: Netlist) -> Netlist:
    """逐门求逆并倒序的级联，执行于原网表的最终线状态上可复原初始状态"""
    return Netlist(net.lines, tuple(GateInstance(inverse(inst.gate), inst.bindings)
                                    for inst in reversed(net.gates)))

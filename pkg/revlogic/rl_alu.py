#!/usr/bin/env python3
"""
ALU 模块 - 两种容错可逆 ALU 的构建、功能表校验与代价对照

设计一：算术单元 + 逻辑单元 + Fredkin 输出选择器
设计二：函数选择器 (X, Y, Z) + 全加器

信号拷贝一律使用带常量0辅助线的 F2G；Fredkin 的控制线原样输出，
凡是能直通的选择线都逐片串接，不再额外拷贝。
"""

import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .rl_adders import FtfaVariant, build_ftfa, build_rca
from .rl_config import get_config
from .rl_errors import ArityError, CapacityError, WiringError
from .rl_netlist import (
    Netlist,
    NetlistBuilder,
    compose,
    cost_report,
    parallel,
    signal_of,
    simulate_batch,
)

logger = logging.getLogger(__name__)


def _check_width(n: int) -> None:
    if n < 1:
        raise WiringError(f"ALU 位数必须为正数，收到: {n}")


def _slice_select(signal: str, i: int, n: int) -> str:
    """经 F2G 扇出后第 i 片使用的选择线名"""
    return signal if n == 1 else f"{signal}.{i}"


def _chained_select(signal: str, i: int) -> str:
    """逐片直通串接时第 i 片的选择线名"""
    return signal if i == 0 else f"{signal}.{i}"


# ---------------------------------------------------------------------------
# 基本块
# ---------------------------------------------------------------------------

def build_fanout(signal: str, copies: int) -> Netlist:
    """用 F2G(x, 0, 0) 把 signal 复制为 copies 份，输出 signal.0 .. signal.{copies-1}"""
    if copies < 1:
        raise WiringError(f"扇出份数必须为正数，收到: {copies}")
    nb = NetlistBuilder()
    source = nb.add_input(signal)
    lines = [source]
    while len(lines) < copies:
        j = len(lines) - 1
        k1 = nb.add_constant(f"{signal}.k{j}")
        k2 = nb.add_constant(f"{signal}.k{j + 1}")
        nb.add_gate("F2G", source, k1, k2)
        lines.extend([k1, k2])
    for i in range(copies):
        nb.set_output(lines[i], f"{signal}.{i}")
    return nb.build()


def build_y_selector() -> Netlist:
    """
    一位 Y 生成器：FREDKIN(b, s1, s0) 的第二个输出为 b'·s1 ⊕ b·s0。
    两个乘积项互斥，异或即或，因此等于 Y = B·S0 + B'·S1。
    """
    nb = NetlistBuilder()
    b = nb.add_input("b")
    s1 = nb.add_input("s1")
    s0 = nb.add_input("s0")
    nb.add_gate("FREDKIN", b, s1, s0)
    nb.set_output(s1, "y")
    return nb.build()


def _logic_block() -> Netlist:
    """一位逻辑片：OR/XOR/AND/NOT 四路 + 三个 Fredkin 组成的4选1"""
    nb = NetlistBuilder()
    a = nb.add_input("a")
    b = nb.add_input("b")
    s1 = nb.add_input("s1")
    s0 = nb.add_input("s0")
    k = [nb.add_constant(f"k{i}", value) for i, value in enumerate((0, 0, 0, 0, 1, 1, 0))]

    nb.add_gate("F2G", b, k[0], k[1])           # k0 = k1 = b
    nb.add_gate("IG", a, k[0], k[2], k[3])      # k0 = a⊕b, k2 = ab
    nb.add_gate("FREDKIN", a, k[1], k[4])       # k1 = a'b ⊕ a = a+b
    nb.add_gate("FREDKIN", a, k[5], k[6])       # k5 = a'
    nb.add_gate("FREDKIN", s0, k[1], k[0])      # k1 = s0 ? xor : or
    nb.add_gate("FREDKIN", s0, k[2], k[5])      # k2 = s0 ? not : and
    nb.add_gate("FREDKIN", s1, k[1], k[2])      # k1 = s1 ? k2 : k1

    nb.set_output(k[1], "f")
    nb.set_output(s1, "s1.out")
    nb.set_output(s0, "s0.out")
    return nb.build()


def _mux_block() -> Netlist:
    """输出选择器：s2=0 取算术结果 x，s2=1 取逻辑结果 y"""
    nb = NetlistBuilder()
    s2 = nb.add_input("s2")
    x = nb.add_input("x")
    y = nb.add_input("y")
    nb.add_gate("FREDKIN", s2, x, y)
    nb.set_output(x, "f")
    nb.set_output(s2, "s2.out")
    return nb.build()


def _function_selector_block() -> Netlist:
    """
    一位函数选择器：
        X = A + S2·S0'·(S1⊕B)，按 A ⊕ A'·T 实现（T = S2·S0'·(S1⊕B)）
        Y = S0·B + S1·B'
        Z = S2'·C
    s2 与 s1 的原值保留在各自线上，供下一片串接。
    """
    nb = NetlistBuilder()
    a = nb.add_input("a")
    b = nb.add_input("b")
    c = nb.add_input("c")
    s2 = nb.add_input("s2")
    s1 = nb.add_input("s1")
    s0 = nb.add_input("s0")
    k = [nb.add_constant(f"k{i}", value) for i, value in enumerate((0, 0, 0, 0, 0, 0, 1))]

    nb.add_gate("F2G", s1, k[0], k[1])          # k0 = k1 = s1
    nb.add_gate("F2G", b, k[0], k[2])           # k0 = s1⊕b
    nb.add_gate("FREDKIN", s2, c, k[3])         # c = s2'·c
    nb.add_gate("FREDKIN", s2, k[4], k[0])      # k4 = s2·(s1⊕b)
    nb.add_gate("FREDKIN", s0, k[4], k[5])      # k4 = s0'·s2·(s1⊕b)
    nb.add_gate("FREDKIN", a, k[4], k[6])       # k4 = a'·T ⊕ a
    nb.add_gate("FREDKIN", b, k[1], s0)         # k1 = b'·s1 ⊕ b·s0

    nb.set_output(k[4], "x")
    nb.set_output(k[1], "y")
    nb.set_output(c, "z")
    nb.set_output(s2, "s2.out")
    nb.set_output(s1, "s1.out")
    return nb.build()


def build_function_selector() -> Netlist:
    """主输入 (a, b, c, s2, s1, s0)，功能输出 (x, y, z)"""
    return _function_selector_block().discard("s2.out", "s1.out")


# ---------------------------------------------------------------------------
# 单元与整机
# ---------------------------------------------------------------------------

def build_arith_unit(n: int, variant: FtfaVariant) -> Netlist:
    """
    n 位算术单元：每片一个 Y 生成器驱动全加器的 B 端，A 直连。
    主输入 a*, b*, s1, s0, cin；功能输出 f0..f{n-1}, cout。
    """
    _check_width(n)
    selects = ("s1", "s0")
    bank = parallel(
        build_y_selector().relabel(
            f"ys{i}.",
            lines={"b": f"b{i}", **{s: _slice_select(s, i, n) for s in selects}},
            outputs={"y": f"y{i}"})
        for i in range(n))
    if n > 1:
        fan = parallel(build_fanout(s, n) for s in selects)
        bank = compose(fan, bank, {f"{s}.{i}": f"{s}.{i}" for s in selects for i in range(n)})
    unit = compose(bank, build_rca(n, variant), {f"y{i}": f"b{i}" for i in range(n)})
    logger.debug(f"构建 {n} 位算术单元 ({variant.value}): {len(unit.gates)} 个门")
    return unit


def build_logic_unit(n: int) -> Netlist:
    """n 位逻辑单元，主输入 a*, b*, s1, s0，功能输出 f0..f{n-1}"""
    _check_width(n)
    block = _logic_block()
    unit = None
    for i in range(n):
        piece = block.relabel(
            f"lu{i}.",
            lines={"a": f"a{i}", "b": f"b{i}",
                   "s1": _chained_select("s1", i), "s0": _chained_select("s0", i)},
            outputs={"f": f"f{i}", "s1.out": f"s1.{i + 1}", "s0.out": f"s0.{i + 1}"})
        unit = piece if unit is None else compose(
            unit, piece, {f"s1.{i}": f"s1.{i}", f"s0.{i}": f"s0.{i}"})
    return unit.discard(f"s1.{n}", f"s0.{n}")


def _tapped(net: Netlist, tap: str, keep: Sequence[str] = ()) -> Dict[str, str]:
    return {name: name if name in keep else f"{name}@{tap}" for name in net.inputs}


def build_alu_design1(n: int, variant: FtfaVariant) -> Netlist:
    """
    设计一：算术单元与逻辑单元并联，每片一个 Fredkin 按 s2 选择输出。
    两个单元各有自己的操作数端口（a0@au / a0@lu 等），由同名外部信号驱动。
    """
    _check_width(n)
    arith = build_arith_unit(n, variant)
    arith = arith.relabel(
        "au.", lines=_tapped(arith, "au", keep=("cin",)),
        outputs={**{f"f{i}": f"x{i}" for i in range(n)}, "cout": "cout"})
    logic = build_logic_unit(n)
    logic = logic.relabel("lu.", lines=_tapped(logic, "lu"),
                          outputs={f"f{i}": f"y{i}" for i in range(n)})

    block = _mux_block()
    bank = None
    for i in range(n):
        mux = block.relabel(
            f"mx{i}.",
            lines={"s2": _chained_select("s2", i), "x": f"x{i}", "y": f"y{i}"},
            outputs={"f": f"f{i}", "s2.out": f"s2.{i + 1}"})
        bank = mux if bank is None else compose(bank, mux, {f"s2.{i}": f"s2.{i}"})
    bank = bank.discard(f"s2.{n}")

    wiring = {**{f"x{i}": f"x{i}" for i in range(n)}, **{f"y{i}": f"y{i}" for i in range(n)}}
    alu = compose(parallel([arith, logic]), bank, wiring)
    logger.debug(f"构建设计一 {n} 位 ALU ({variant.value}): {len(alu.gates)} 个门")
    return alu


def build_alu_design2(n: int, variant: FtfaVariant) -> Netlist:
    """设计二：每片函数选择器的 (x, y, z) 接全加器，进位逐片传递"""
    _check_width(n)
    block = _function_selector_block()
    base = build_ftfa(variant)
    alu = None
    for i in range(n):
        selector = block.relabel(
            f"fg{i}.",
            lines={"a": f"a{i}", "b": f"b{i}", "c": "cin" if i == 0 else f"c{i}",
                   "s2": _chained_select("s2", i), "s1": _chained_select("s1", i),
                   "s0": _slice_select("s0", i, n)},
            outputs={"x": f"x{i}", "y": f"y{i}", "z": f"z{i}",
                     "s2.out": f"s2.{i + 1}", "s1.out": f"s1.{i + 1}"})
        adder = base.relabel(
            f"fa{i}.",
            lines={"a": f"x{i}", "b": f"y{i}", "cin": f"z{i}"},
            outputs={"sum": f"f{i}", "cout": "cout" if i == n - 1 else f"c{i + 1}"})
        piece = compose(selector, adder, {f"x{i}": f"x{i}", f"y{i}": f"y{i}", f"z{i}": f"z{i}"})
        alu = piece if alu is None else compose(
            alu, piece, {f"c{i}": f"c{i}", f"s2.{i}": f"s2.{i}", f"s1.{i}": f"s1.{i}"})
    alu = alu.discard(f"s2.{n}", f"s1.{n}")
    if n > 1:
        alu = compose(build_fanout("s0", n), alu, {f"s0.{i}": f"s0.{i}" for i in range(n)})
    logger.debug(f"构建设计二 {n} 位 ALU ({variant.value}): {len(alu.gates)} 个门")
    return alu


def build_alu(design: int, n: int, variant: FtfaVariant) -> Netlist:
    if design == 1:
        return build_alu_design1(n, variant)
    if design == 2:
        return build_alu_design2(n, variant)
    raise ValueError(f"未知的 ALU 设计: {design}，可选 1 或 2")


# ---------------------------------------------------------------------------
# 功能表
# ---------------------------------------------------------------------------

Oracle = Callable[[np.ndarray, np.ndarray, int], np.ndarray]


@dataclass(frozen=True)
class AluOpcode:
    """选择码；None 表示该位无关（逻辑运算的 cin）或不存在"""
    s2: Optional[int] = None
    s1: int = 0
    s0: int = 0
    cin: Optional[int] = None

    def assignments(self) -> Dict[str, int]:
        values = {"s2": self.s2, "s1": self.s1, "s0": self.s0, "cin": self.cin}
        return {k: v for k, v in values.items() if v is not None}

    def __str__(self) -> str:
        return " ".join("X" if v is None else str(v) for v in (self.s2, self.s1, self.s0, self.cin))


@dataclass(frozen=True)
class FunctionTableRow:
    opcode: AluOpcode
    expression: str
    label: str
    oracle: Oracle = field(compare=False, repr=False)

    def with_s2(self, s2: int) -> "FunctionTableRow":
        op = self.opcode
        return FunctionTableRow(AluOpcode(s2, op.s1, op.s0, op.cin), self.expression, self.label, self.oracle)


def _row(s2, s1, s0, cin, expression, label, oracle) -> FunctionTableRow:
    return FunctionTableRow(AluOpcode(s2, s1, s0, cin), expression, label, oracle)


ARITHMETIC_TABLE: Tuple[FunctionTableRow, ...] = (
    _row(None, 0, 0, 0, "A", "Transfer A", lambda a, b, m: a),
    _row(None, 0, 0, 1, "A+1", "Increment A", lambda a, b, m: a + 1),
    _row(None, 0, 1, 0, "A+B", "Add B to A", lambda a, b, m: a + b),
    _row(None, 0, 1, 1, "A+B+1", "Add B to A plus 1", lambda a, b, m: a + b + 1),
    _row(None, 1, 0, 0, "A+B'", "Add 1's complement of B to A", lambda a, b, m: a + (~b & m)),
    _row(None, 1, 0, 1, "A+B'+1", "Add 2's complement of B to A", lambda a, b, m: a + (~b & m) + 1),
    _row(None, 1, 1, 0, "A-1", "Decrement A", lambda a, b, m: a - 1),
    _row(None, 1, 1, 1, "A", "Transfer A", lambda a, b, m: a),
)

LOGIC_TABLE: Tuple[FunctionTableRow, ...] = (
    _row(None, 0, 0, None, "A OR B", "OR", lambda a, b, m: a | b),
    _row(None, 0, 1, None, "A XOR B", "XOR", lambda a, b, m: a ^ b),
    _row(None, 1, 0, None, "A AND B", "AND", lambda a, b, m: a & b),
    _row(None, 1, 1, None, "NOT A", "NOT", lambda a, b, m: ~a),
)

ALU_TABLE: Tuple[FunctionTableRow, ...] = (
    _row(0, 0, 0, 0, "A", "Transfer A", lambda a, b, m: a),
    _row(0, 0, 0, 1, "A+1", "Increment A", lambda a, b, m: a + 1),
    _row(0, 0, 1, 0, "A+B", "Addition", lambda a, b, m: a + b),
    _row(0, 0, 1, 1, "A+B+1", "Addition with carry", lambda a, b, m: a + b + 1),
    _row(0, 1, 0, 0, "A-B-1", "Subtraction with borrow", lambda a, b, m: a - b - 1),
    _row(0, 1, 0, 1, "A-B", "Subtraction", lambda a, b, m: a - b),
    _row(0, 1, 1, 0, "A-1", "Decrement A", lambda a, b, m: a - 1),
    _row(0, 1, 1, 1, "A", "Transfer A", lambda a, b, m: a),
    _row(1, 0, 0, None, "A OR B", "OR", lambda a, b, m: a | b),
    _row(1, 0, 1, None, "A XOR B", "XOR", lambda a, b, m: a ^ b),
    _row(1, 1, 0, None, "A AND B", "AND", lambda a, b, m: a & b),
    _row(1, 1, 1, None, "NOT A", "NOT", lambda a, b, m: ~a),
)


def design1_table() -> Tuple[FunctionTableRow, ...]:
    """设计一的完整功能：s2=0 走算术表，s2=1 走逻辑表"""
    return tuple(r.with_s2(0) for r in ARITHMETIC_TABLE) + tuple(r.with_s2(1) for r in LOGIC_TABLE)


def table_for(design: int) -> Tuple[FunctionTableRow, ...]:
    return design1_table() if design == 1 else ALU_TABLE


@dataclass(frozen=True)
class RowResult:
    row: FunctionTableRow
    checks: int
    failures: int
    counterexample: Optional[Dict[str, int]] = None

    @property
    def passed(self) -> bool:
        return self.failures == 0


@dataclass(frozen=True)
class FunctionTableReport:
    width: int
    results: Tuple[RowResult, ...]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    @property
    def total_checks(self) -> int:
        return sum(r.checks for r in self.results)

    def format(self) -> str:
        lines = [f"{'result':<7}{'s2 s1 s0 cin':<15}{'function':<10}{'checks':>7}  operation"]
        for r in self.results:
            verdict = "PASS" if r.passed else "FAIL"
            lines.append(f"{verdict:<7}{str(r.row.opcode):<15}{r.row.expression:<10}"
                         f"{r.checks:>7}  {r.row.label}")
            if r.counterexample is not None:
                detail = " ".join(f"{k}={v}" for k, v in r.counterexample.items())
                lines.append(f"{'':<7}counterexample: {detail}")
        passed = sum(1 for r in self.results if r.passed)
        lines.append(f"{passed}/{len(self.results)} rows pass, {self.total_checks} checks")
        return "\n".join(lines)


def verify_function_table(alu: Netlist, table: Sequence[FunctionTableRow], n: int,
                          limit: Optional[int] = None) -> FunctionTableReport:
    """
    对每一行穷举全部 2^(2n) 组操作数（以及表中未固定、网表又存在的选择位），
    比较 f0..f{n-1} 与整数/按位参考值（模 2^n）。
    """
    _check_width(n)
    limit = get_config().exhaustive_limit if limit is None else limit
    signals = alu.signals
    operands = [f"a{i}" for i in range(n)] + [f"b{i}" for i in range(n)]
    missing = [s for s in operands if s not in signals]
    if missing:
        raise ArityError(f"网表缺少操作数输入: {', '.join(missing)}")
    out_index = {name: k for k, name in enumerate(alu.outputs)}
    missing = [f"f{i}" for i in range(n) if f"f{i}" not in out_index]
    if missing:
        raise ArityError(f"网表缺少功能输出: {', '.join(missing)}")

    mask = (1 << n) - 1
    results = []
    for row in table:
        fixed = {k: v for k, v in row.opcode.assignments().items() if k in signals}
        free = [s for s in signals if s not in fixed and s not in operands]
        width = 2 * n + len(free)
        if width > limit:
            raise CapacityError(f"功能表校验需要穷举 {width} 位，超过上限 {limit}")

        codes = np.arange(1 << width, dtype=np.int64)
        a = codes & mask
        b = (codes >> n) & mask
        columns = {f"a{i}": (a >> i) & 1 for i in range(n)}
        columns.update({f"b{i}": (b >> i) & 1 for i in range(n)})
        columns.update({s: (codes >> (2 * n + j)) & 1 for j, s in enumerate(free)})
        columns.update({s: np.full(codes.shape, v, dtype=np.int64) for s, v in fixed.items()})

        matrix = np.stack([columns[signal_of(name)] for name in alu.inputs], axis=1).astype(np.uint8)
        outs = simulate_batch(alu, matrix).astype(np.int64)
        got = sum(outs[:, out_index[f"f{i}"]] << i for i in range(n))
        expected = row.oracle(a, b, mask) & mask

        bad = np.flatnonzero(got != expected)
        example = None
        if bad.size:
            k = int(bad[0])
            example = {"A": int(a[k]), "B": int(b[k])}
            example.update({s: int(columns[s][k]) for s in free})
            example.update({"expected": int(expected[k]), "got": int(got[k])})
            logger.warning(f"功能表行 {row.opcode} ({row.expression}) 校验失败: {example}")
        results.append(RowResult(row, int(codes.size), int(bad.size), example))

    report = FunctionTableReport(n, tuple(results))
    logger.info(f"功能表校验完成: {sum(r.passed for r in results)}/{len(results)} 行通过，"
                f"共 {report.total_checks} 次比较")
    return report


# ---------------------------------------------------------------------------
# 代价对照
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CostReference:
    section: str
    label: str
    published: Tuple[int, int, int]
    build: Callable[[], Netlist] = field(compare=False, repr=False)
    required: bool = False


@dataclass(frozen=True)
class CostComparison:
    reference: CostReference
    computed: Tuple[int, int, int]

    @property
    def deviation(self) -> int:
        return max(abs(c - p) for c, p in zip(self.computed, self.reference.published))

    @property
    def ok(self) -> bool:
        return self.deviation == 0 or not self.reference.required

    @property
    def verdict(self) -> str:
        if self.deviation == 0:
            return "exact"
        if self.reference.required:
            return f"MISMATCH (off by {self.deviation})"
        if self.deviation <= 2:
            return "within 2"
        return f"off by {self.deviation}"


def _slice_references() -> List[CostReference]:
    V = FtfaVariant
    adders = {V.COMPOSITE_12_14: (8, 10, 9), V.COMPOSITE_12_12: (6, 8, 8),
              V.IG_8: (2, 3, 2), V.PPPG_6: (1, 3, 2), V.F2PG_13: (1, 3, 2)}
    arith = {V.COMPOSITE_12_14: (9, 12, 9), V.COMPOSITE_12_12: (7, 10, 8),
             V.IG_8: (3, 5, 2), V.PPPG_6: (2, 5, 2), V.F2PG_13: (2, 5, 2)}
    alu1 = {V.COMPOSITE_12_14: (17, 24, 16), V.COMPOSITE_12_12: (15, 22, 15),
            V.IG_8: (11, 17, 9), V.PPPG_6: (10, 17, 9), V.F2PG_13: (10, 17, 9)}
    alu2 = {V.COMPOSITE_12_14: (16, 22, 18), V.COMPOSITE_12_12: (14, 22, 17),
            V.IG_8: (10, 17, 11), V.PPPG_6: (9, 17, 11), V.F2PG_13: (9, 17, 11)}
    single_gate = {V.IG_8, V.PPPG_6, V.F2PG_13}

    refs = []
    for v, costs in adders.items():
        refs.append(CostReference("full adders", v.value, costs,
                                  lambda v=v: build_ftfa(v), v in single_gate))
    for v, costs in arith.items():
        refs.append(CostReference("arithmetic and logic units", f"arith {v.value}", costs,
                                  lambda v=v: build_arith_unit(1, v), v in single_gate))
    refs.append(CostReference("arithmetic and logic units", "logic", (7, 10, 7),
                              lambda: build_logic_unit(1)))
    for v, costs in alu1.items():
        refs.append(CostReference("design 1 slices", f"alu1 {v.value}", costs,
                                  lambda v=v: build_alu_design1(1, v), v in single_gate))
    refs.append(CostReference("design 2 slices", "selector", (7, 12, 9), build_function_selector))
    for v, costs in alu2.items():
        refs.append(CostReference("design 2 slices", f"alu2 {v.value}", costs,
                                  lambda v=v: build_alu_design2(1, v)))
    return refs


COST_REFERENCES: Tuple[CostReference, ...] = tuple(_slice_references())


def compare_costs(references: Sequence[CostReference] = COST_REFERENCES) -> List[CostComparison]:
    """按参考表逐行构建一片电路并比较 (GC, GO, CI)"""
    comparisons = []
    for ref in references:
        report = cost_report(ref.build())
        computed = (report.gate_count, report.garbage_outputs, report.constant_inputs)
        comparisons.append(CostComparison(ref, computed))
        if not comparisons[-1].ok:
            logger.warning(f"{ref.label} 代价与发表值不一致: {computed} vs {ref.published}")
    return comparisons


def format_cost_tables(comparisons: Sequence[CostComparison]) -> str:
    """按分节打印，单元格为 计算值/发表值"""
    lines: List[str] = []
    section = None
    for cmp in comparisons:
        if cmp.reference.section != section:
            if section is not None:
                lines.append("")
            section = cmp.reference.section
            lines.append(f"== {section} ==")
            lines.append(f"{'structure':<14}{'GC':<10}{'GO':<10}{'CI':<10}check")
        cells = [f"{c}/{p}" for c, p in zip(cmp.computed, cmp.reference.published)]
        lines.append(f"{cmp.reference.label:<14}{cells[0]:<10}{cells[1]:<10}{cells[2]:<10}{cmp.verdict}")
    lines.append("")
    lines.append("cells are computed/published")
    return "\n".join(line.rstrip() for line in lines)

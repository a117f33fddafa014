#!/usr/bin/env python3
"""
容错全加器模块 - 五种保奇偶全加器与行波进位加法器

所有全加器网表的主输入为 (a, b, cin)，功能输出为 (sum, cout)，
其余输出均为垃圾输出；只使用保奇偶门。
"""

import logging
from enum import Enum
from typing import Callable, Dict

from .rl_errors import WiringError
from .rl_gates import ADDER_PORTS
from .rl_netlist import Netlist, NetlistBuilder, compose

logger = logging.getLogger(__name__)


class FtfaVariant(Enum):
    """全加器结构；取值即命令行标签"""
    COMPOSITE_12_14 = "c1214"
    COMPOSITE_12_12 = "c1212"
    IG_8 = "ig"
    PPPG_6 = "pppg"
    F2PG_13 = "f2pg"

    @classmethod
    def from_tag(cls, tag: str) -> "FtfaVariant":
        key = tag.strip().lower()
        for variant in cls:
            if key in (variant.value, variant.name.lower()):
                return variant
        raise ValueError(f"未知的全加器结构: {tag}，可选: {', '.join(v.value for v in cls)}")


# ---------------------------------------------------------------------------
# 保奇偶 Toffoli：在 c 线上得到 ab⊕c，a、b 线保持不变
# ---------------------------------------------------------------------------

def _pp_toffoli_ig(nb: NetlistBuilder, a: str, b: str, c: str, tag: str) -> None:
    """F2G 复制 b，再由 IG 的第三个输出给出 ab⊕c"""
    z0 = nb.add_constant(f"{tag}.z0")
    z1 = nb.add_constant(f"{tag}.z1")
    z2 = nb.add_constant(f"{tag}.z2")
    nb.add_gate("F2G", b, z0, z1)
    nb.add_gate("IG", a, z0, c, z2)


def _pp_toffoli_fredkin(nb: NetlistBuilder, a: str, b: str, c: str, tag: str) -> None:
    """Fredkin 求 ab，F2G 并入 c，再用 ab⊕a'b 还原 b"""
    z0 = nb.add_constant(f"{tag}.z0")
    z1 = nb.add_constant(f"{tag}.z1")
    z2 = nb.add_constant(f"{tag}.z2")
    nb.add_gate("FREDKIN", a, b, z0)
    nb.add_gate("F2G", z0, c, z1)
    nb.add_gate("F2G", z1, b, z2)


def _ftfa_composite(toffoli: Callable[[NetlistBuilder, str, str, str, str], None]) -> Netlist:
    """通用结构：两级 F2G 异或求和，两个保奇偶 Toffoli 累加进位"""
    nb = NetlistBuilder()
    a = nb.add_input("a")
    b = nb.add_input("b")
    cin = nb.add_input("cin")
    carry = nb.add_constant("k0")

    toffoli(nb, a, b, carry, "t1")           # carry = ab
    nb.add_gate("F2G", a, b, nb.add_constant("x1"))     # b = a⊕b
    toffoli(nb, b, cin, carry, "t2")         # carry = (a⊕b)cin ⊕ ab
    nb.add_gate("F2G", b, cin, nb.add_constant("x2"))   # cin = a⊕b⊕cin

    nb.set_output(cin, "sum")
    nb.set_output(carry, "cout")
    return nb.build()


def _ftfa_ig() -> Netlist:
    nb = NetlistBuilder()
    a = nb.add_input("a")
    b = nb.add_input("b")
    cin = nb.add_input("cin")
    k0 = nb.add_constant("k0")
    k1 = nb.add_constant("k1")
    nb.add_gate("IG", a, b, k0, k1)          # b = a⊕b, k0 = ab, k1 = ab'
    nb.add_gate("IG", b, cin, k0, k1)        # cin = sum, k0 = cout
    nb.set_output(cin, "sum")
    nb.set_output(k0, "cout")
    return nb.build()


def _ftfa_five_line(gate_name: str) -> Netlist:
    nb = NetlistBuilder()
    ports = [nb.add_input("a"), nb.add_input("b"), nb.add_input("cin"),
             nb.add_constant("k0"), nb.add_constant("k1")]
    nb.add_gate(gate_name, *ports)
    sum_pos, carry_pos = ADDER_PORTS[gate_name]
    nb.set_output(ports[sum_pos], "sum")
    nb.set_output(ports[carry_pos], "cout")
    return nb.build()


_BUILDERS: Dict[FtfaVariant, Callable[[], Netlist]] = {
    FtfaVariant.COMPOSITE_12_14: lambda: _ftfa_composite(_pp_toffoli_fredkin),
    FtfaVariant.COMPOSITE_12_12: lambda: _ftfa_composite(_pp_toffoli_ig),
    FtfaVariant.IG_8: _ftfa_ig,
    FtfaVariant.PPPG_6: lambda: _ftfa_five_line("PPPG"),
    FtfaVariant.F2PG_13: lambda: _ftfa_five_line("F2PG"),
}


def build_ftfa(variant: FtfaVariant) -> Netlist:
    """构建一位容错全加器"""
    net = _BUILDERS[variant]()
    logger.debug(f"构建全加器 {variant.value}: {len(net.gates)} 个门, {len(net.lines)} 条线")
    return net


def build_rca(n: int, variant: FtfaVariant) -> Netlist:
    """
    n 位行波进位加法器。
    主输入 a0..a{n-1}, b0..b{n-1}, cin；功能输出 f0..f{n-1}, cout。
    第 i 级的进位输出线直接作为第 i+1 级的进位输入。
    """
    if n < 1:
        raise WiringError(f"加法器位数必须为正数，收到: {n}")
    base = build_ftfa(variant)
    rca = None
    for i in range(n):
        stage = base.relabel(
            f"fa{i}.",
            lines={"a": f"a{i}", "b": f"b{i}", "cin": "cin" if i == 0 else f"c{i}"},
            outputs={"sum": f"f{i}", "cout": "cout" if i == n - 1 else f"c{i + 1}"})
        rca = stage if rca is None else compose(rca, stage, {f"c{i}": f"c{i}"})
    logger.debug(f"构建 {n} 位行波进位加法器 ({variant.value})")
    return rca
